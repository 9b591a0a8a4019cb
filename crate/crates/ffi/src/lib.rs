//! C ABI for cottonlab.
//!
//! Every entry point returns a `CottonlabStatus`; results go through out
//! pointers. On failure the out pointers are left untouched and
//! `cottonlab_last_error` describes the problem. Strings returned by the
//! library are owned by the caller and released with
//! `cottonlab_string_free`. Arrays of points are three doubles each.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cottonlab::cli::{load_spec, parse_spec, run_suites, to_json, SpecFile};
use cottonlab::geometry::{cotton_tensor_at, curvature_packet};
use cottonlab::lcf::{check_cotton_zero, solve, Grid, GridField, LcfOptions};
use cottonlab::liegroup::{cs_invariant, LieAlgebraData};
use cottonlab::quad::charts::catalog_chart_cs;
use cottonlab::{Error, Point};

/// Result code of every call. Zero means success.
pub type CottonlabStatus = i32;

pub const COTTONLAB_OK: CottonlabStatus = 0;
pub const COTTONLAB_ERR_NULL_POINTER: CottonlabStatus = 1;
pub const COTTONLAB_ERR_INVALID_UTF8: CottonlabStatus = 2;
pub const COTTONLAB_ERR_PANIC: CottonlabStatus = 3;
pub const COTTONLAB_ERR_NON_FINITE_OUTPUT: CottonlabStatus = 4;
pub const COTTONLAB_ERR_BUFFER_TOO_SMALL: CottonlabStatus = 5;
pub const COTTONLAB_ERR_SYNTAX: CottonlabStatus = 10;
pub const COTTONLAB_ERR_UNKNOWN_SYMBOL: CottonlabStatus = 11;
pub const COTTONLAB_ERR_DOMAIN: CottonlabStatus = 12;
pub const COTTONLAB_ERR_NOT_POSITIVE_DEFINITE: CottonlabStatus = 13;
pub const COTTONLAB_ERR_DEGREE: CottonlabStatus = 14;
pub const COTTONLAB_ERR_DEGENERATE_SEED: CottonlabStatus = 15;
pub const COTTONLAB_ERR_FRAME_NOT_ORTHONORMAL: CottonlabStatus = 16;
pub const COTTONLAB_ERR_NOT_SPECIAL_ORTHOGONAL: CottonlabStatus = 17;
pub const COTTONLAB_ERR_JACOBI_VIOLATION: CottonlabStatus = 18;
pub const COTTONLAB_ERR_NOT_ANTISYMMETRIC: CottonlabStatus = 19;
pub const COTTONLAB_ERR_NON_FINITE_SAMPLE: CottonlabStatus = 20;
pub const COTTONLAB_ERR_COTTON_NOT_ZERO: CottonlabStatus = 21;
pub const COTTONLAB_ERR_STEP_TOO_LARGE: CottonlabStatus = 22;
pub const COTTONLAB_ERR_BLOW_UP: CottonlabStatus = 23;
pub const COTTONLAB_ERR_NOT_CLOSED: CottonlabStatus = 24;
pub const COTTONLAB_ERR_IO: CottonlabStatus = 25;
pub const COTTONLAB_ERR_SCHEMA: CottonlabStatus = 26;
pub const COTTONLAB_ERR_INVALID_ARGUMENT: CottonlabStatus = 27;

/// A parsed metric spec file.
pub struct CottonlabSpec(SpecFile);

/// Solution of the flattening problem on a grid.
pub struct CottonlabField(GridField);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(CottonlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), format!("{}: {e}", e.name()))
    }
}

fn status_of(e: &Error) -> CottonlabStatus {
    match e {
        Error::Syntax { .. } => COTTONLAB_ERR_SYNTAX,
        Error::UnknownSymbol { .. } => COTTONLAB_ERR_UNKNOWN_SYMBOL,
        Error::Domain { .. } => COTTONLAB_ERR_DOMAIN,
        Error::NotPositiveDefinite { .. } => COTTONLAB_ERR_NOT_POSITIVE_DEFINITE,
        Error::Degree { .. } => COTTONLAB_ERR_DEGREE,
        Error::DegenerateSeed { .. } => COTTONLAB_ERR_DEGENERATE_SEED,
        Error::FrameNotOrthonormal { .. } => COTTONLAB_ERR_FRAME_NOT_ORTHONORMAL,
        Error::NotSpecialOrthogonal { .. } => COTTONLAB_ERR_NOT_SPECIAL_ORTHOGONAL,
        Error::JacobiViolation { .. } => COTTONLAB_ERR_JACOBI_VIOLATION,
        Error::NotAntisymmetric { .. } => COTTONLAB_ERR_NOT_ANTISYMMETRIC,
        Error::NonFiniteSample { .. } => COTTONLAB_ERR_NON_FINITE_SAMPLE,
        Error::CottonNotZero { .. } => COTTONLAB_ERR_COTTON_NOT_ZERO,
        Error::StepTooLarge { .. } => COTTONLAB_ERR_STEP_TOO_LARGE,
        Error::BlowUp { .. } => COTTONLAB_ERR_BLOW_UP,
        Error::NotClosed { .. } => COTTONLAB_ERR_NOT_CLOSED,
        Error::Io(_) => COTTONLAB_ERR_IO,
        Error::Schema(_) => COTTONLAB_ERR_SCHEMA,
        Error::InvalidArgument(_) => COTTONLAB_ERR_INVALID_ARGUMENT,
    }
}

fn set_last_error(message: &str) {
    // Interior NULs cannot cross the boundary.
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CottonlabStatus {
    set_last_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => COTTONLAB_OK,
        Ok(Err(Failure(code, message))) => {
            set_last_error(&message);
            code
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_default();
            set_last_error(&format!("panic: {what}"));
            COTTONLAB_ERR_PANIC
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(COTTONLAB_ERR_NULL_POINTER, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(COTTONLAB_ERR_INVALID_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn point_arg(p: *const f64, what: &str) -> Result<Point, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok([*p, *p.add(1), *p.add(2)])
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn finite(x: f64) -> Result<f64, Failure> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Failure(
            COTTONLAB_ERR_NON_FINITE_OUTPUT,
            format!("result {x} is not finite"),
        ))
    }
}

fn json_string<T: serde::Serialize>(value: &T) -> Result<*mut c_char, Failure> {
    let s = to_json(value, false).map_err(|m| Failure(COTTONLAB_ERR_NON_FINITE_OUTPUT, m))?;
    Ok(CString::new(s).expect("JSON has no NUL").into_raw())
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on the calling thread, or an empty
/// string. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cottonlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Stable identifier of a status code, e.g. `"CottonNotZero"`.
#[no_mangle]
pub extern "C" fn cottonlab_status_name(status: CottonlabStatus) -> *const c_char {
    let name: &'static CStr = match status {
        COTTONLAB_OK => c"Ok",
        COTTONLAB_ERR_NULL_POINTER => c"NullPointer",
        COTTONLAB_ERR_INVALID_UTF8 => c"InvalidUtf8",
        COTTONLAB_ERR_PANIC => c"Panic",
        COTTONLAB_ERR_NON_FINITE_OUTPUT => c"NonFiniteOutput",
        COTTONLAB_ERR_BUFFER_TOO_SMALL => c"BufferTooSmall",
        COTTONLAB_ERR_SYNTAX => c"SyntaxError",
        COTTONLAB_ERR_UNKNOWN_SYMBOL => c"UnknownSymbol",
        COTTONLAB_ERR_DOMAIN => c"DomainError",
        COTTONLAB_ERR_NOT_POSITIVE_DEFINITE => c"NotPositiveDefinite",
        COTTONLAB_ERR_DEGREE => c"DegreeError",
        COTTONLAB_ERR_DEGENERATE_SEED => c"DegenerateSeed",
        COTTONLAB_ERR_FRAME_NOT_ORTHONORMAL => c"FrameNotOrthonormal",
        COTTONLAB_ERR_NOT_SPECIAL_ORTHOGONAL => c"NotSpecialOrthogonal",
        COTTONLAB_ERR_JACOBI_VIOLATION => c"JacobiViolation",
        COTTONLAB_ERR_NOT_ANTISYMMETRIC => c"NotAntisymmetric",
        COTTONLAB_ERR_NON_FINITE_SAMPLE => c"NonFiniteSample",
        COTTONLAB_ERR_COTTON_NOT_ZERO => c"CottonNotZero",
        COTTONLAB_ERR_STEP_TOO_LARGE => c"StepTooLarge",
        COTTONLAB_ERR_BLOW_UP => c"BlowUp",
        COTTONLAB_ERR_NOT_CLOSED => c"NotClosed",
        COTTONLAB_ERR_IO => c"IoError",
        COTTONLAB_ERR_SCHEMA => c"SchemaError",
        COTTONLAB_ERR_INVALID_ARGUMENT => c"InvalidArgument",
        _ => c"Unknown",
    };
    name.as_ptr()
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a spec file, or a catalog entry by name when no such file exists.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_spec_load(
    path: *const c_char,
    out: *mut *mut CottonlabSpec,
) -> CottonlabStatus {
    guard(|| {
        let spec = load_spec(str_arg(path, "path")?)?;
        store(out, Box::into_raw(Box::new(CottonlabSpec(spec))), "out")
    })
}

/// Parses a spec from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_spec_parse(
    json: *const c_char,
    out: *mut *mut CottonlabSpec,
) -> CottonlabStatus {
    guard(|| {
        let spec = parse_spec(str_arg(json, "json")?)?;
        store(out, Box::into_raw(Box::new(CottonlabSpec(spec))), "out")
    })
}

/// # Safety
/// `spec` must come from `cottonlab_spec_load` or `cottonlab_spec_parse`
/// and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_spec_free(spec: *mut CottonlabSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Corners of the coordinate box a spec file declares.
///
/// # Safety
/// `spec` must be a live handle; `out_min` and `out_max` must hold 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_spec_domain(
    spec: *const CottonlabSpec,
    out_min: *mut f64,
    out_max: *mut f64,
) -> CottonlabStatus {
    guard(|| {
        let d = ref_arg(spec, "spec")?.0.domain();
        if out_min.is_null() || out_max.is_null() {
            return Err(null("output array"));
        }
        ptr::copy_nonoverlapping(d.min.as_ptr(), out_min, 3);
        ptr::copy_nonoverlapping(d.max.as_ptr(), out_max, 3);
        Ok(())
    })
}

fn inside(spec: &SpecFile, p: &Point) -> Result<(), Failure> {
    if spec.domain().contains(p) {
        Ok(())
    } else {
        Err(Error::Domain {
            message: "point lies outside the domain of the metric".into(),
            point: *p,
        }
        .into())
    }
}

/// Full curvature packet at `point` as a JSON object (the same document
/// `cottonlab curvature` prints).
///
/// # Safety
/// `spec` must be a live handle, `point` must hold 3 doubles and `out_json`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_curvature_json(
    spec: *const CottonlabSpec,
    point: *const f64,
    out_json: *mut *mut c_char,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let p = point_arg(point, "point")?;
        inside(spec, &p)?;
        let packet = curvature_packet(&spec.metric, &p)?;
        store(out_json, json_string(&packet)?, "out_json")
    })
}

/// Scalar curvature at `point`.
///
/// # Safety
/// As for `cottonlab_curvature_json`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_scalar_curvature(
    spec: *const CottonlabSpec,
    point: *const f64,
    out: *mut f64,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let p = point_arg(point, "point")?;
        inside(spec, &p)?;
        let s = finite(curvature_packet(&spec.metric, &p)?.scalar)?;
        store(out, s, "out")
    })
}

/// Cotton tensor at `point`, 9 doubles in row-major order.
///
/// # Safety
/// As for `cottonlab_curvature_json`; `out` must hold 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_cotton_tensor(
    spec: *const CottonlabSpec,
    point: *const f64,
    out: *mut f64,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let p = point_arg(point, "point")?;
        inside(spec, &p)?;
        let t = cotton_tensor_at(&spec.metric, &p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        for i in 0..3 {
            for j in 0..3 {
                out.add(3 * i + j).write(finite(t[(i, j)])?);
            }
        }
        Ok(())
    })
}

/// Largest normalized Cotton norm over `samples` deterministic points.
/// A norm at or above `tol` is reported through `out_passed`, not as an
/// error.
///
/// # Safety
/// `spec` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_cotton_check(
    spec: *const CottonlabSpec,
    samples: usize,
    tol: f64,
    out_max_norm: *mut f64,
    out_passed: *mut bool,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        if samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()).into());
        }
        let c = check_cotton_zero(&spec.metric, &spec.domain(), samples, tol)?;
        store(out_max_norm, finite(c.max_norm)?, "out_max_norm")?;
        store(out_passed, c.passed, "out_passed")
    })
}

/// Closed-form Chern–Simons invariant of a catalog group (`so3`, `s3`,
/// `su2` or `berger:t=<value>`).
///
/// # Safety
/// `group` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_cs_closed(
    group: *const c_char,
    out: *mut f64,
) -> CottonlabStatus {
    guard(|| {
        let l = LieAlgebraData::from_catalog(str_arg(group, "group")?)?;
        store(out, finite(cs_invariant(&l)?)?, "out")
    })
}

/// Chern–Simons invariant by Gauss–Legendre quadrature of `order` nodes
/// per axis on the chart of `group` (`so3`, `s3`, `su2`, `berger:t=<value>`).
///
/// # Safety
/// As for `cottonlab_cs_closed`.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_cs_quadrature(
    group: *const c_char,
    order: usize,
    out: *mut f64,
) -> CottonlabStatus {
    guard(|| {
        let cs = catalog_chart_cs(str_arg(group, "group")?, order)?;
        store(out, finite(cs)?, "out")
    })
}

/// Runs a verification suite (`all`, `bianchi`, `cotton`, `conformal`,
/// `variational`) and returns the report as JSON. Failed checks are
/// reported through `out_passed`.
///
/// # Safety
/// `spec` must be a live handle, `suite` a NUL-terminated string and the
/// out pointers writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_verify_json(
    spec: *const CottonlabSpec,
    suite: *const c_char,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let report = run_suites(spec, str_arg(suite, "suite")?)?;
        if out_json.is_null() || out_passed.is_null() {
            return Err(null("output pointer"));
        }
        let json = json_string(&report)?;
        out_json.write(json);
        out_passed.write(report.passed);
        Ok(())
    })
}

/// Solves for the flattening conformal factor on a cubic grid of
/// `resolution³` nodes centered at `center` with half-width `half_width`.
/// `x0` (3 doubles) is the initial value at the center; null means zero.
///
/// # Safety
/// `spec` must be a live handle, `center` must hold 3 doubles, `x0` must be
/// null or hold 3 doubles, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_lcf_solve(
    spec: *const CottonlabSpec,
    center: *const f64,
    half_width: f64,
    resolution: usize,
    x0: *const f64,
    out: *mut *mut CottonlabField,
) -> CottonlabStatus {
    guard(|| {
        let spec = &ref_arg(spec, "spec")?.0;
        let grid = Grid::new(point_arg(center, "center")?, half_width, resolution)?;
        let opts = LcfOptions {
            x0: if x0.is_null() {
                [0.0; 3]
            } else {
                point_arg(x0, "x0")?
            },
            ..Default::default()
        };
        let field = solve(&spec.metric, &grid, &opts)?;
        store(out, Box::into_raw(Box::new(CottonlabField(field))), "out")
    })
}

/// # Safety
/// `field` must come from `cottonlab_lcf_solve` and not have been freed.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_field_free(field: *mut CottonlabField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of grid nodes, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_field_node_count(field: *const CottonlabField) -> usize {
    field.as_ref().map_or(0, |f| f.0.x.len())
}

/// Copies the conformal factor `f` at every node (`x1`-major order) into
/// `out`, which must hold `len` doubles, `len` at least the node count.
///
/// # Safety
/// `field` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_field_factor(
    field: *const CottonlabField,
    out: *mut f64,
    len: usize,
) -> CottonlabStatus {
    guard(|| {
        let field = &ref_arg(field, "field")?.0;
        let f = field.f.as_ref().ok_or_else(|| {
            Failure(
                COTTONLAB_ERR_INVALID_ARGUMENT,
                "field carries no potential".into(),
            )
        })?;
        copy_out(f, out, len)
    })
}

/// Copies the closed 1-form `X` (3 doubles per node) into `out`, which must
/// hold `len ≥ 3 · node count` doubles.
///
/// # Safety
/// `field` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_field_x(
    field: *const CottonlabField,
    out: *mut f64,
    len: usize,
) -> CottonlabStatus {
    guard(|| {
        let field = &ref_arg(field, "field")?.0;
        copy_out(field.x.as_flattened(), out, len)
    })
}

unsafe fn copy_out(src: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < src.len() {
        return Err(Failure(
            COTTONLAB_ERR_BUFFER_TOO_SMALL,
            format!("need {} doubles, got {len}", src.len()),
        ));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

/// Solver diagnostics as a JSON object.
///
/// # Safety
/// `field` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn cottonlab_field_diagnostics_json(
    field: *const CottonlabField,
    out_json: *mut *mut c_char,
) -> CottonlabStatus {
    guard(|| {
        let field = &ref_arg(field, "field")?.0;
        store(out_json, json_string(&field.diagnostics)?, "out_json")
    })
}
