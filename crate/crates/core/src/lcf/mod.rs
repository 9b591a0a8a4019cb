//! Constructive local conformal flattening. When the Cotton form vanishes,
//! the overdetermined system `∇X = Sch + X⊗X − ½|X|²g` is integrated for a
//! 1-form `X` by an ODE cascade (x1-axis, then x2-lines, then x3-lines),
//! `f` is recovered with `df = X`, and `e^{2f} g` is checked to be flat.

mod fd;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{CurvatureJets, Domain3, MetricField};
use crate::jets::{index_of, Jet3, JET_LEN};
use crate::tensor::{jet_zeros, Tensor3, Tensor4};
use crate::Point;

pub use fd::{fd_weights, grid_derivative};

/// Default bound on `|X|_g` before the integration is abandoned.
pub const DEFAULT_BLOW_UP: f64 = 1e3;
/// Bound on the Richardson estimate of the RK4 local error.
pub const RK4_TOL: f64 = 1e-8;
/// Bound on the normalized Cotton norm for the pre-check.
pub const COTTON_TOL: f64 = 1e-6;
/// Closedness tolerance, relative to `1 + |X|`.
pub const CLOSED_TOL: f64 = 1e-6;

/// Result of [`check_cotton_zero`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CottonCheck {
    pub passed: bool,
    #[serde(rename = "maxNorm")]
    pub max_norm: f64,
    pub tol: f64,
    pub samples: usize,
}

fn tensor3_norm(t: &Tensor3, g_inv: &crate::tensor::Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for a in 0..3 {
                    for b in 0..3 {
                        for c in 0..3 {
                            s += t[i][j][k]
                                * t[a][b][c]
                                * g_inv[(i, a)]
                                * g_inv[(j, b)]
                                * g_inv[(k, c)];
                        }
                    }
                }
            }
        }
    }
    s.max(0.0).sqrt()
}

/// `|R|_g` for a covariant 4-tensor.
pub fn riemann_norm(r: &Tensor4, g_inv: &crate::tensor::Mat3) -> f64 {
    // Raise all indices one at a time.
    let mut up = *r;
    for slot in 0..4 {
        let prev = up;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let idx = [i, j, k, l];
                        let mut s = 0.0;
                        for a in 0..3 {
                            let mut src = idx;
                            src[slot] = a;
                            s += g_inv[(idx[slot], a)] * prev[src[0]][src[1]][src[2]][src[3]];
                        }
                        up[i][j][k][l] = s;
                    }
                }
            }
        }
    }
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    s += r[i][j][k][l] * up[i][j][k][l];
                }
            }
        }
    }
    s.max(0.0).sqrt()
}

/// `max |cott|_g / (1 + |∇Sch|_g)` over deterministic samples of `domain`.
pub fn check_cotton_zero<M: MetricField + ?Sized>(
    m: &M,
    domain: &Domain3,
    samples: usize,
    tol: f64,
) -> Result<CottonCheck> {
    let points = domain.sample(samples, 0x00c0_77a1);
    let norms: Vec<Result<f64>> = points
        .par_iter()
        .map(|p| {
            let c = CurvatureJets::compute(m, p)?;
            let g_inv = c.metric_inverse();
            let num = tensor3_norm(&c.cotton_form(), g_inv.matrix());
            let den = 1.0 + tensor3_norm(&c.nabla_sch(), g_inv.matrix());
            Ok(num / den)
        })
        .collect();
    let mut max_norm: f64 = 0.0;
    for (n, p) in norms.into_iter().zip(&points) {
        let n = n?;
        if !n.is_finite() {
            return Err(Error::NonFiniteSample { node: *p });
        }
        max_norm = max_norm.max(n);
    }
    Ok(CottonCheck {
        passed: max_norm < tol,
        max_norm,
        tol,
        samples,
    })
}

/// A cubic grid of `resolution³` nodes on `center ± half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub center: Point,
    #[serde(rename = "halfWidth")]
    pub half_width: f64,
    #[serde(skip)]
    pub resolution: usize,
}

impl Grid {
    /// `resolution` must be odd so that the center is a node.
    pub fn new(center: Point, half_width: f64, resolution: usize) -> Result<Self> {
        if resolution < 7 || resolution.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid resolution must be odd and at least 7, got {resolution}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "bad grid box {center:?} ± {half_width}"
            )));
        }
        Ok(Self {
            center,
            half_width,
            resolution,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.resolution - 1) as f64
    }

    pub fn center_index(&self) -> usize {
        (self.resolution - 1) / 2
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.center[axis] - self.half_width + i as f64 * self.spacing()
    }

    pub fn node(&self, idx: [usize; 3]) -> Point {
        [0, 1, 2].map(|a| self.coordinate(a, idx[a]))
    }

    pub fn len(&self) -> usize {
        self.resolution.pow(3)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn flat(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.resolution + idx[1]) * self.resolution + idx[2]
    }

    pub fn unflat(&self, n: usize) -> [usize; 3] {
        let r = self.resolution;
        [n / (r * r), (n / r) % r, n % r]
    }

    pub fn domain(&self) -> Domain3 {
        Domain3::cube(self.center, self.half_width).expect("validated box")
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy)]
pub struct LcfOptions {
    /// Initial value of `X` at the grid center.
    pub x0: [f64; 3],
    pub blow_up: f64,
    pub rk4_tol: f64,
    pub cotton_tol: f64,
    pub cotton_samples: usize,
}

impl Default for LcfOptions {
    fn default() -> Self {
        Self {
            x0: [0.0; 3],
            blow_up: DEFAULT_BLOW_UP,
            rk4_tol: RK4_TOL,
            cotton_tol: COTTON_TOL,
            cotton_samples: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(rename = "cottonNorm")]
    pub cotton_norm: f64,
    #[serde(rename = "rk4ErrorEstimate")]
    pub rk4_error_estimate: f64,
    /// `max |A| / (1 + |X|)` over all nodes and all three axes.
    #[serde(rename = "aDefect")]
    pub a_defect: f64,
    /// `max |dX| / (1 + |X|)`.
    #[serde(rename = "closednessDefect")]
    pub closedness_defect: f64,
    #[serde(rename = "maxXNorm")]
    pub max_x_norm: f64,
    /// `max |f − f'|` for `f'` integrated along x3, x2, x1 paths.
    #[serde(rename = "pathDefect", skip_serializing_if = "Option::is_none")]
    pub path_defect: Option<f64>,
    #[serde(rename = "flatnessResidual", skip_serializing_if = "Option::is_none")]
    pub flatness_residual: Option<f64>,
}

/// `X` (and optionally `f`) on a grid, node order `x1`-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField {
    #[serde(rename = "box")]
    pub grid: Grid,
    pub resolution: usize,
    #[serde(rename = "X")]
    pub x: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
    pub diagnostics: Diagnostics,
}

/// Values of the data entering the right-hand side at one point.
#[derive(Debug, Clone, Copy)]
struct PointData {
    g: [[f64; 3]; 3],
    g_inv: [[f64; 3]; 3],
    gamma: Tensor3,
    sch: [[f64; 3]; 3],
}

impl PointData {
    fn at<M: MetricField + ?Sized>(m: &M, p: &Point) -> Result<Self> {
        let c = CurvatureJets::compute(m, p)?;
        let rows = |s: &crate::tensor::SymMat3| [0, 1, 2].map(|i| [0, 1, 2].map(|j| s.get(i, j)));
        let sch = c.sch.map(|x| x.value());
        Ok(Self {
            g: rows(&c.metric()),
            g_inv: rows(&c.metric_inverse()),
            gamma: c.gamma_values(),
            sch: [0, 1, 2].map(|i| [0, 1, 2].map(|j| sch[(i, j)])),
        })
    }

    fn norm2(&self, x: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                s += self.g_inv[a][b] * x[a] * x[b];
            }
        }
        s
    }

    /// `∂_k X_j = Γ^m_{kj} X_m + Sch_{kj} + X_k X_j − ½|X|² g_{kj}`.
    fn rhs(&self, k: usize, x: &[f64; 3]) -> [f64; 3] {
        let half = 0.5 * self.norm2(x);
        [0, 1, 2].map(|j| {
            let mut s = self.sch[k][j] + x[k] * x[j] - half * self.g[k][j];
            for m in 0..3 {
                s += self.gamma[m][k][j] * x[m];
            }
            s
        })
    }
}

fn axpy(x: &[f64; 3], a: f64, k: &[f64; 3]) -> [f64; 3] {
    [x[0] + a * k[0], x[1] + a * k[1], x[2] + a * k[2]]
}

fn shift(p: &Point, axis: usize, d: f64) -> Point {
    let mut q = *p;
    q[axis] += d;
    q
}

/// One RK4 step of length `h` (signed) along `axis`, with the data at the
/// start, middle and end supplied.
fn rk4_step(
    axis: usize,
    h: f64,
    x: &[f64; 3],
    start: &PointData,
    mid: &PointData,
    end: &PointData,
) -> [f64; 3] {
    let k1 = start.rhs(axis, x);
    let k2 = mid.rhs(axis, &axpy(x, 0.5 * h, &k1));
    let k3 = mid.rhs(axis, &axpy(x, 0.5 * h, &k2));
    let k4 = end.rhs(axis, &axpy(x, h, &k3));
    [0, 1, 2].map(|j| x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]))
}

struct Solver<'a, M: ?Sized> {
    m: &'a M,
    grid: Grid,
    nodes: Vec<PointData>,
    blow_up: f64,
}

impl<M: MetricField + ?Sized> Solver<'_, M> {
    fn check_bound(&self, p: &Point, data: &PointData, x: &[f64; 3]) -> Result<()> {
        let norm = data.norm2(x).sqrt();
        if !(norm <= self.blow_up) {
            return Err(Error::BlowUp { point: *p, norm });
        }
        Ok(())
    }

    /// Integrates along `axis` from node `start` (where `x` is given) to
    /// both ends of the grid line. Returns values indexed along the line.
    fn line(&self, axis: usize, start: [usize; 3], x: [f64; 3]) -> Result<Vec<[f64; 3]>> {
        let n = self.grid.resolution;
        let h = self.grid.spacing();
        let mut out = vec![[0.0; 3]; n];
        let s = start[axis];
        out[s] = x;
        for dir in [1i64, -1] {
            let mut cur = x;
            let mut i = s as i64;
            loop {
                let next = i + dir;
                if next < 0 || next >= n as i64 {
                    break;
                }
                let mut a = start;
                a[axis] = i as usize;
                let mut b = start;
                b[axis] = next as usize;
                let pa = self.grid.node(a);
                let mid = PointData::at(self.m, &shift(&pa, axis, 0.5 * dir as f64 * h))?;
                let da = &self.nodes[self.grid.flat(a)];
                let db = &self.nodes[self.grid.flat(b)];
                cur = rk4_step(axis, dir as f64 * h, &cur, da, &mid, db);
                self.check_bound(&self.grid.node(b), db, &cur)?;
                out[next as usize] = cur;
                i = next;
            }
        }
        Ok(out)
    }

    /// Richardson estimate of the local error along the x1-axis line: one
    /// step of `h` against two of `h/2`, for every step of the line.
    fn first_line_error(&self, x1_line: &[[f64; 3]]) -> Result<f64> {
        let n = self.grid.resolution;
        let h = self.grid.spacing();
        let c = self.grid.center_index();
        let mut worst: f64 = 0.0;
        for i in 0..n - 1 {
            let a = [i, c, c];
            let b = [i + 1, c, c];
            let pa = self.grid.node(a);
            let da = &self.nodes[self.grid.flat(a)];
            let db = &self.nodes[self.grid.flat(b)];
            let q1 = PointData::at(self.m, &shift(&pa, 0, 0.25 * h))?;
            let q2 = PointData::at(self.m, &shift(&pa, 0, 0.5 * h))?;
            let q3 = PointData::at(self.m, &shift(&pa, 0, 0.75 * h))?;
            let x = x1_line[i];
            let full = rk4_step(0, h, &x, da, &q2, db);
            let half = rk4_step(0, 0.5 * h, &x, da, &q1, &q2);
            let half = rk4_step(0, 0.5 * h, &half, &q2, &q3, db);
            let err = (0..3)
                .map(|j| (full[j] - half[j]).abs())
                .fold(0.0, f64::max)
                / 15.0;
            worst = worst.max(err);
        }
        Ok(worst)
    }
}

/// Runs the cascade from `opts.x0` at the grid center.
pub fn integrate_conformal_system<M: MetricField + ?Sized>(
    m: &M,
    grid: &Grid,
    opts: &LcfOptions,
) -> Result<GridField> {
    let cotton = check_cotton_zero(m, &grid.domain(), opts.cotton_samples, opts.cotton_tol)?;
    if !cotton.passed {
        return Err(Error::CottonNotZero {
            max_norm: cotton.max_norm,
            tol: opts.cotton_tol,
        });
    }
    let nodes: Vec<Result<PointData>> = (0..grid.len())
        .into_par_iter()
        .map(|n| PointData::at(m, &grid.node(grid.unflat(n))))
        .collect();
    let nodes = nodes.into_iter().collect::<Result<Vec<_>>>()?;
    let solver = Solver {
        m,
        grid: *grid,
        nodes,
        blow_up: opts.blow_up,
    };
    let n = grid.resolution;
    let c = grid.center_index();
    solver.check_bound(
        &grid.node([c, c, c]),
        &solver.nodes[grid.flat([c, c, c])],
        &opts.x0,
    )?;

    let axis1 = solver.line(0, [c, c, c], opts.x0)?;
    let rk4_error_estimate = solver.first_line_error(&axis1)?;
    if !(rk4_error_estimate <= opts.rk4_tol) {
        return Err(Error::StepTooLarge {
            estimate: rk4_error_estimate,
            limit: opts.rk4_tol,
        });
    }
    let planes: Vec<Result<Vec<[f64; 3]>>> = (0..n)
        .into_par_iter()
        .map(|i| solver.line(1, [i, c, c], axis1[i]))
        .collect();
    let planes = planes.into_iter().collect::<Result<Vec<_>>>()?;
    let columns: Vec<Result<Vec<[f64; 3]>>> = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            solver.line(2, [i, j, c], planes[i][j])
        })
        .collect();
    let mut x = Vec::with_capacity(grid.len());
    for col in columns {
        x.extend(col?);
    }

    let mut field = GridField {
        grid: *grid,
        resolution: n,
        x,
        f: None,
        diagnostics: Diagnostics {
            cotton_norm: cotton.max_norm,
            rk4_error_estimate,
            ..Default::default()
        },
    };
    let (a_defect, max_x_norm) = a_defect(&solver.nodes, &field);
    field.diagnostics.a_defect = a_defect;
    field.diagnostics.max_x_norm = max_x_norm;
    field.diagnostics.closedness_defect = closedness_defect(&field).0;
    Ok(field)
}

/// `∂_axis X_j` at every node by 7-point differences.
fn derivative_field(field: &GridField, axis: usize) -> Vec<[f64; 3]> {
    let grid = &field.grid;
    let h = grid.spacing();
    (0..grid.len())
        .into_par_iter()
        .map(|n| {
            let idx = grid.unflat(n);
            [0, 1, 2].map(|j| {
                grid_derivative(
                    |t| {
                        let mut q = idx;
                        q[axis] = t;
                        field.x[grid.flat(q)][j]
                    },
                    idx[axis],
                    grid.resolution,
                    h,
                )
            })
        })
        .collect()
}

fn a_defect(nodes: &[PointData], field: &GridField) -> (f64, f64) {
    let derivs: [Vec<[f64; 3]>; 3] = [0, 1, 2].map(|k| derivative_field(field, k));
    let mut worst: f64 = 0.0;
    let mut max_norm: f64 = 0.0;
    for (n, data) in nodes.iter().enumerate() {
        let x = &field.x[n];
        let norm = data.norm2(x).sqrt();
        max_norm = max_norm.max(norm);
        for (k, dk) in derivs.iter().enumerate() {
            let r = data.rhs(k, x);
            let a = (0..3).map(|j| (dk[n][j] - r[j]).abs()).fold(0.0, f64::max);
            worst = worst.max(a / (1.0 + norm));
        }
    }
    (worst, max_norm)
}

/// `max |∂_i X_j − ∂_j X_i| / (1 + |X|)` and the node where it occurs.
pub fn closedness_defect(field: &GridField) -> (f64, Point) {
    let derivs: [Vec<[f64; 3]>; 3] = [0, 1, 2].map(|k| derivative_field(field, k));
    let grid = &field.grid;
    let mut worst: f64 = 0.0;
    let mut at = grid.center;
    for n in 0..grid.len() {
        let x = &field.x[n];
        let scale = 1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = (derivs[i][n][j] - derivs[j][n][i]).abs() / scale;
            if d > worst {
                worst = d;
                at = grid.node(grid.unflat(n));
            }
        }
    }
    (worst, at)
}

/// `∫ X` along the segment of grid line `axis` from index `from` to `to`,
/// by composite Simpson (with a 3/8 panel for an odd count, and a cubic
/// interval rule for a single interval).
fn line_integral<F: Fn(usize) -> f64>(v: F, from: usize, to: usize, n: usize, h: f64) -> f64 {
    if from == to {
        return 0.0;
    }
    let (lo, hi, sign) = if from < to {
        (from, to, 1.0)
    } else {
        (to, from, -1.0)
    };
    let m = hi - lo;
    let s = if m == 1 {
        // Cubic through four neighbors, integrated over one interval.
        let (a, b) = if lo == 0 {
            (0, 3)
        } else if hi == n - 1 {
            (n - 4, n - 1)
        } else {
            (lo - 1, lo + 2)
        };
        let nodes: Vec<f64> = (a..=b).map(|t| t as f64 - lo as f64).collect();
        let w = fd::interval_weights(&nodes);
        (a..=b).zip(w).map(|(t, w)| w * v(t)).sum::<f64>() * h
    } else {
        let (simpson_end, tail) = if m % 2 == 0 {
            (hi, false)
        } else {
            (hi - 3, true)
        };
        let mut s = 0.0;
        let mut i = lo;
        while i < simpson_end {
            s += h / 3.0 * (v(i) + 4.0 * v(i + 1) + v(i + 2));
            i += 2;
        }
        if tail {
            let a = simpson_end;
            s += 3.0 * h / 8.0 * (v(a) + 3.0 * v(a + 1) + 3.0 * v(a + 2) + v(a + 3));
        }
        s
    };
    sign * s
}

/// `f` with `f(base) = 0`, integrating `X` along axis-ordered paths: from
/// the base along `order[0]`, then `order[1]`, then `order[2]`.
pub fn potential_along(field: &GridField, base: [usize; 3], order: [usize; 3]) -> Vec<f64> {
    let grid = &field.grid;
    let n = grid.resolution;
    let h = grid.spacing();
    (0..grid.len())
        .into_par_iter()
        .map(|t| {
            let target = grid.unflat(t);
            let mut cur = base;
            let mut f = 0.0;
            for &axis in &order {
                let fixed = cur;
                f += line_integral(
                    |s| {
                        let mut q = fixed;
                        q[axis] = s;
                        field.x[grid.flat(q)][axis]
                    },
                    cur[axis],
                    target[axis],
                    n,
                    h,
                );
                cur[axis] = target[axis];
            }
            f
        })
        .collect()
}

/// Fills `f` from `X`, after checking closedness.
pub fn potential_from_closed_form(
    field: &GridField,
    base: [usize; 3],
    tol: f64,
) -> Result<GridField> {
    let (defect, location) = closedness_defect(field);
    if !(defect <= tol) {
        return Err(Error::NotClosed { defect, location });
    }
    let f = potential_along(field, base, [0, 1, 2]);
    let other = potential_along(field, base, [2, 1, 0]);
    let path = f
        .iter()
        .zip(&other)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut out = field.clone();
    out.f = Some(f);
    out.diagnostics.closedness_defect = defect;
    out.diagnostics.path_defect = Some(path);
    Ok(out)
}

/// Jet of `f` at a node from `f`, `X = df` and differences of `X`.
fn potential_jet(
    field: &GridField,
    f: &[f64],
    idx: [usize; 3],
    derivs: &[Vec<[f64; 3]>; 3],
) -> Jet3 {
    let n = field.grid.flat(idx);
    let mut c = [0.0; JET_LEN];
    c[0] = f[n];
    let x = field.x[n];
    for j in 0..3 {
        let mut e = [0u8; 3];
        e[j] = 1;
        c[index_of(e[0], e[1], e[2]).expect("order 1")] = x[j];
    }
    for j in 0..3 {
        for k in j..3 {
            let hjk = 0.5 * (derivs[k][n][j] + derivs[j][n][k]);
            let mut e = [0u8; 3];
            e[j] += 1;
            e[k] += 1;
            let factor = if j == k { 0.5 } else { 1.0 };
            c[index_of(e[0], e[1], e[2]).expect("order 2")] = factor * hjk;
        }
    }
    Jet3::from_coeffs(c)
}

/// `|Riem(e^{2f}g)| / (1 + |Riem(g)|)` at `p`, each norm in its own metric.
pub fn flatness_at<M: MetricField + ?Sized>(m: &M, f: &Jet3, p: &Point) -> Result<f64> {
    let g = m.metric_jet(p)?;
    let w = (*f * 2.0).exp();
    let mut g1 = jet_zeros();
    for i in 0..3 {
        for j in 0..3 {
            g1[(i, j)] = w * g[(i, j)];
        }
    }
    let c0 = CurvatureJets::from_metric_jet(g, *p, m.orientation());
    let c1 = CurvatureJets::from_metric_jet(g1, *p, m.orientation());
    let r0 = riemann_norm(&c0.riemann_values(), c0.metric_inverse().matrix());
    let r1 = riemann_norm(&c1.riemann_values(), c1.metric_inverse().matrix());
    Ok(r1 / (1.0 + r0))
}

/// Maximum of [`flatness_at`] over grid nodes, every `stride`-th node per
/// axis, with the jet of `f` taken from the field.
pub fn flatness_residual<M: MetricField + ?Sized>(
    m: &M,
    field: &GridField,
    stride: usize,
) -> Result<f64> {
    let f = field
        .f
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("grid field has no potential".into()))?;
    let derivs: [Vec<[f64; 3]>; 3] = [0, 1, 2].map(|k| derivative_field(field, k));
    let grid = &field.grid;
    let stride = stride.max(1);
    let picks: Vec<usize> = (0..grid.len())
        .filter(|&n| grid.unflat(n).iter().all(|&i| i % stride == 0))
        .collect();
    let vals: Vec<Result<f64>> = picks
        .par_iter()
        .map(|&n| {
            let idx = grid.unflat(n);
            let jet = potential_jet(field, f, idx, &derivs);
            flatness_at(m, &jet, &grid.node(idx))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for v in vals {
        worst = worst.max(v?);
    }
    Ok(worst)
}

/// Flatness residual for a conformal factor given in closed form.
pub fn flatness_residual_fn<M, F>(m: &M, f: F, points: &[Point]) -> Result<f64>
where
    M: MetricField + ?Sized,
    F: Fn(&Point) -> Result<Jet3> + Sync,
{
    let vals: Vec<Result<f64>> = points
        .par_iter()
        .map(|p| flatness_at(m, &f(p)?, p))
        .collect();
    let mut worst: f64 = 0.0;
    for v in vals {
        worst = worst.max(v?);
    }
    Ok(worst)
}

/// Everything in one call: cascade, potential and flatness residual.
pub fn solve<M: MetricField + ?Sized>(m: &M, grid: &Grid, opts: &LcfOptions) -> Result<GridField> {
    let x = integrate_conformal_system(m, grid, opts)?;
    let c = grid.center_index();
    // dX of a solver field is bounded by the A-defect, and both are measured
    // with the same stencils, so the A-defect sets the truncation floor.
    let tol = CLOSED_TOL + x.diagnostics.a_defect;
    let mut out = potential_from_closed_form(&x, [c, c, c], tol)?;
    out.diagnostics.flatness_residual = Some(flatness_residual(m, &out, 1)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::new([1.0, 2.0, 3.0], 0.5, 33).unwrap();
        assert_eq!(g.center_index(), 16);
        assert_eq!(g.node([16, 16, 16]), [1.0, 2.0, 3.0]);
        assert_eq!(g.node([0, 32, 0]), [0.5, 2.5, 2.5]);
        assert_eq!(g.unflat(g.flat([3, 7, 11])), [3, 7, 11]);
        assert!(Grid::new([0.0; 3], 0.5, 8).is_err());
    }

    #[test]
    fn simpson_segments_integrate_cubics() {
        let n = 11;
        let h = 0.1;
        let v = |i: usize| {
            let x = i as f64 * h;
            3.0 * x * x * x - x + 2.0
        };
        let exact = |a: f64, b: f64| {
            let p = |x: f64| 0.75 * x.powi(4) - 0.5 * x * x + 2.0 * x;
            p(b) - p(a)
        };
        for (a, b) in [(0, 10), (0, 7), (3, 4), (9, 10), (0, 1), (5, 2), (10, 3)] {
            let q = line_integral(v, a, b, n, h);
            assert!(
                (q - exact(a as f64 * h, b as f64 * h)).abs() < 1e-12,
                "{a}->{b}"
            );
        }
    }
}
