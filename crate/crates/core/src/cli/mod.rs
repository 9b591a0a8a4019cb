//! Command-line front end.
//!
//! Every subcommand prints one JSON document to stdout. Exit codes: 0 on
//! success, 1 when a verification fails, 2 for usage and input errors, 3 for
//! numeric errors (including any non-finite number in the output).

mod spec_file;
mod suites;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

pub use spec_file::{load_spec, parse_spec, SpecFile, CATALOG, COORDS};
pub use suites::{run_suites, Check, Report, SUITES};

use crate::error::Error;
use crate::geometry::curvature_packet;
use crate::lcf::{check_cotton_zero, solve, Grid, LcfOptions, COTTON_TOL};
use crate::liegroup::{cs_invariant, LieAlgebraData};
use crate::quad::charts::catalog_chart_cs;
use crate::Point;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Worker-count cap for parallel sweeps; `0` or unset means automatic.
pub const THREADS_ENV: &str = "COTTONLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "cottonlab",
    version,
    about = "Curvature, Cotton and Chern-Simons computations on 3-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full curvature packet at one point.
    Curvature {
        #[arg(long)]
        spec: String,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
    },
    /// Largest normalized Cotton norm over deterministic samples.
    Cotton {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = COTTON_TOL)]
        tol: f64,
    },
    /// Chern-Simons invariant of a homogeneous 3-manifold.
    Cs {
        /// so3, s3 (or su2), or berger:t=<value>.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        #[arg(long, default_value_t = 32)]
        order: usize,
    },
    /// Solve for the flattening conformal factor on a grid.
    Lcf {
        #[arg(long)]
        spec: String,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Point,
        /// Half-width of the cubic grid.
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        resolution: usize,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x0: Option<Point>,
        #[arg(long)]
        out: std::path::PathBuf,
    },
    /// Run bundled verification suites.
    Verify {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "all", value_parser = ["all", "bianchi", "cotton", "conformal", "variational"])]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quadrature,
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut p = [0.0; 3];
    for (slot, part) in p.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("not a number: {part:?}"))?;
    }
    Ok(p)
}

#[derive(Debug, Serialize)]
struct CsOutput {
    group: String,
    method: &'static str,
    cs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
    #[serde(rename = "closedForm", skip_serializing_if = "Option::is_none")]
    closed_form: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<f64>,
}

#[derive(Debug, Serialize)]
struct LcfOutput<'a> {
    out: String,
    resolution: usize,
    diagnostics: &'a crate::lcf::Diagnostics,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Schema(_)
        | Error::Syntax { .. }
        | Error::UnknownSymbol { .. }
        | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

fn has_null(v: &Value) -> bool {
    match v {
        Value::Null => true,
        Value::Array(a) => a.iter().any(has_null),
        Value::Object(o) => o.values().any(has_null),
        _ => false,
    }
}

/// JSON text, or an error if any number is not finite (serde_json
/// writes those as `null`, which no output field otherwise uses).
pub fn to_json<T: Serialize>(value: &T, pretty: bool) -> std::result::Result<String, String> {
    let v = serde_json::to_value(value).map_err(|e| e.to_string())?;
    if has_null(&v) {
        return Err("non-finite number in output".into());
    }
    let s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    s.map_err(|e| e.to_string())
}

enum Outcome {
    Done(String, bool),
    Fail(i32, String),
}

fn numeric(e: Error) -> Outcome {
    Outcome::Fail(exit_code(&e), format!("{}: {e}", e.name()))
}

fn emit<T: Serialize>(value: &T, passed: bool) -> Outcome {
    match to_json(value, true) {
        Ok(s) => Outcome::Done(s, passed),
        Err(m) => Outcome::Fail(EXIT_NUMERIC, format!("NonFiniteOutput: {m}")),
    }
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Curvature { spec, point } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(e) => return numeric(e),
            };
            if !spec.domain().contains(&point) {
                return numeric(Error::Domain {
                    message: "point lies outside the domain of the metric".into(),
                    point,
                });
            }
            match curvature_packet(&spec.metric, &point) {
                Ok(p) => emit(&p, true),
                Err(e) => numeric(e),
            }
        }
        Command::Cotton { spec, samples, tol } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(e) => return numeric(e),
            };
            if samples == 0 {
                return numeric(Error::InvalidArgument("--samples must be positive".into()));
            }
            match check_cotton_zero(&spec.metric, &spec.domain(), samples, tol) {
                Ok(c) => emit(&c, c.passed),
                Err(e) => numeric(e),
            }
        }
        Command::Cs {
            group,
            method,
            order,
        } => {
            let closed = LieAlgebraData::from_catalog(&group).and_then(|l| cs_invariant(&l));
            match method {
                Method::Closed => match closed {
                    Ok(cs) => emit(
                        &CsOutput {
                            group,
                            method: "closed",
                            cs,
                            order: None,
                            closed_form: None,
                            error: None,
                        },
                        true,
                    ),
                    Err(e) => numeric(e),
                },
                Method::Quadrature => {
                    let closed = match closed {
                        Ok(c) => c,
                        Err(e) => return numeric(e),
                    };
                    match catalog_chart_cs(&group, order) {
                        Ok(cs) => emit(
                            &CsOutput {
                                group,
                                method: "quadrature",
                                cs,
                                order: Some(order),
                                closed_form: Some(closed),
                                error: Some((cs - closed).abs()),
                            },
                            true,
                        ),
                        Err(e) => numeric(e),
                    }
                }
            }
        }
        Command::Lcf {
            spec,
            center,
            radius,
            resolution,
            x0,
            out,
        } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(e) => return numeric(e),
            };
            let grid = match Grid::new(center, radius, resolution) {
                Ok(g) => g,
                Err(e) => return numeric(e),
            };
            let opts = LcfOptions {
                x0: x0.unwrap_or([0.0; 3]),
                ..Default::default()
            };
            let field = match solve(&spec.metric, &grid, &opts) {
                Ok(f) => f,
                Err(e) => return numeric(e),
            };
            let body = match to_json(&field, false) {
                Ok(s) => s,
                Err(m) => return Outcome::Fail(EXIT_NUMERIC, format!("NonFiniteOutput: {m}")),
            };
            if let Err(e) = std::fs::write(&out, body) {
                return numeric(Error::Io(format!("{}: {e}", out.display())));
            }
            emit(
                &LcfOutput {
                    out: out.display().to_string(),
                    resolution,
                    diagnostics: &field.diagnostics,
                },
                true,
            )
        }
        Command::Verify { spec, suite } => {
            let spec = match load_spec(&spec) {
                Ok(s) => s,
                Err(e) => return numeric(e),
            };
            match run_suites(&spec, &suite) {
                Ok(r) => {
                    let passed = r.passed;
                    emit(&r, passed)
                }
                Err(e) => numeric(e),
            }
        }
    }
}

fn configure_threads() {
    let n = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        // Fails only if a pool already exists, which is harmless here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parses `argv` (including the program name) and runs the subcommand,
/// writing the JSON result to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    configure_threads();
    match execute(cli.command) {
        Outcome::Done(json, passed) => {
            let _ = writeln!(out, "{json}");
            if passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Outcome::Fail(code, message) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
