//! Coordinate charts of SO(3) and S³ with left- or right-invariant
//! orthonormal frames, described by an invariant coframe `Θ` (rows are the
//! 1-forms `θ^a`). The metric is `g = Θᵀ W Θ` for positive weights `W`, and
//! the orthonormal frame is `S = Θ⁻¹ W^{-1/2}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frames::{euler_zyz, FrameField, GaugeField};
use crate::geometry::{Domain3, MetricField};
use crate::jets::{Expr, Jet3};
use crate::tensor::{jet_inverse, jet_values, JetMat3, Orientation};
use crate::Point;

use super::{cs_from_integral, integrate_cs, Parametrization};

/// An invariant coframe in chart components.
pub trait Coframe: Sync {
    fn coframe_jet(&self, p: &Point) -> Result<JetMat3>;
}

fn vars(p: &Point) -> [Jet3; 3] {
    [0, 1, 2].map(|k| Jet3::variable(k, p[k]))
}

/// Body angular-velocity forms of the ZYZ Euler chart `(α, β, γ)`, so that
/// `R⁻¹dR = Σ θ^a L_a` for the standard generators `L_a` of `so(3)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerCoframe;

impl Coframe for EulerCoframe {
    fn coframe_jet(&self, p: &Point) -> Result<JetMat3> {
        let [_, b, c] = vars(p);
        let (sb, cb, sc, cc) = (b.sin(), b.cos(), c.sin(), c.cos());
        let zero = Jet3::constant(0.0);
        let one = Jet3::constant(1.0);
        Ok(JetMat3::from_row_slice(&[
            -(sb * cc),
            sc,
            zero,
            sb * sc,
            cc,
            zero,
            cb,
            zero,
            one,
        ]))
    }
}

/// Which quaternion multiplication generates the frame on S³.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariance {
    /// `η ↦ η·i, η·j, η·k`; brackets `[X_i, X_j] = 2X_k`.
    Left,
    /// `η ↦ i·η, j·η, k·η`.
    Right,
}

/// Hyperspherical coordinates `(χ, θ, φ)` on the unit sphere in `ℍ = ℝ⁴`.
#[derive(Debug, Clone, Copy)]
pub struct HypersphericalCoframe {
    pub invariance: Invariance,
}

fn quaternion_fields(x: &[Jet3; 4], inv: Invariance) -> [[Jet3; 4]; 3] {
    let [x0, x1, x2, x3] = *x;
    match inv {
        Invariance::Left => [[-x1, x0, x3, -x2], [-x2, -x3, x0, x1], [-x3, x2, -x1, x0]],
        Invariance::Right => [[-x1, x0, -x3, x2], [-x2, x3, x0, -x1], [-x3, -x2, x1, x0]],
    }
}

impl Coframe for HypersphericalCoframe {
    fn coframe_jet(&self, p: &Point) -> Result<JetMat3> {
        let [chi, th, ph] = vars(p);
        let (sx, cx) = (chi.sin(), chi.cos());
        let (st, ct) = (th.sin(), th.cos());
        let (sp, cp) = (ph.sin(), ph.cos());
        let zero = Jet3::constant(0.0);
        let eta = [cx, sx * ct, sx * st * cp, sx * st * sp];
        let d_eta = [
            [-sx, cx * ct, cx * st * cp, cx * st * sp],
            [zero, -(sx * st), sx * ct * cp, sx * ct * sp],
            [zero, zero, -(sx * st * sp), sx * st * cp],
        ];
        let fields = quaternion_fields(&eta, self.invariance);
        Ok(JetMat3::from_fn(|a, k| {
            (0..4).map(|c| d_eta[k][c] * fields[a][c]).sum()
        }))
    }
}

/// A chart carrying a metric and orthonormal frame from a coframe.
#[derive(Debug, Clone)]
pub struct CoframeChart<C> {
    pub name: String,
    pub coframe: C,
    pub weights: [f64; 3],
    pub domain: Domain3,
    pub periodic: [bool; 3],
    orientation: Orientation,
}

impl<C: Coframe> CoframeChart<C> {
    /// Orients the chart by the frame, evaluated at the domain center.
    pub fn new(
        name: impl Into<String>,
        coframe: C,
        weights: [f64; 3],
        domain: Domain3,
        periodic: [bool; 3],
    ) -> Result<Self> {
        let det = jet_values(&coframe.coframe_jet(&domain.center())?).determinant();
        let orientation = if det >= 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        Ok(Self {
            name: name.into(),
            coframe,
            weights,
            domain,
            periodic,
            orientation,
        })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }
}

impl<C: Coframe> MetricField for CoframeChart<C> {
    fn metric_jet(&self, p: &Point) -> Result<JetMat3> {
        let th = self.coframe.coframe_jet(p)?;
        Ok(JetMat3::from_fn(|k, l| {
            (0..3)
                .map(|a| th[(a, k)] * th[(a, l)] * self.weights[a])
                .sum()
        }))
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }
}

impl<C: Coframe> FrameField for CoframeChart<C> {
    fn frame_jet(&self, p: &Point, _g: &JetMat3) -> Result<JetMat3> {
        let inv = jet_inverse(&self.coframe.coframe_jet(p)?);
        Ok(JetMat3::from_fn(|i, a| {
            inv[(i, a)] * self.weights[a].sqrt().recip()
        }))
    }
}

fn angle_box(upper: [f64; 3]) -> Domain3 {
    Domain3::new([0.0; 3], upper).expect("nonempty box")
}

/// SO(3) in ZYZ Euler angles with the bi-invariant metric of volume `π²`.
/// The frame is `e_a = 2L_a`, so `[e_1, e_2] = 2e_3`.
pub fn so3_euler_chart() -> CoframeChart<EulerCoframe> {
    CoframeChart::new(
        "so3-euler",
        EulerCoframe,
        [0.25; 3],
        angle_box([2.0 * PI, PI, 2.0 * PI]),
        [true, false, true],
    )
    .expect("chart center is regular")
}

/// Unit S³ in hyperspherical coordinates with a quaternionic frame.
pub fn s3_chart(invariance: Invariance) -> CoframeChart<HypersphericalCoframe> {
    CoframeChart::new(
        "s3-hyperspherical",
        HypersphericalCoframe { invariance },
        [1.0; 3],
        angle_box([PI, PI, 2.0 * PI]),
        [false, false, true],
    )
    .expect("chart center is regular")
}

/// Berger sphere: the left-invariant metric `diag(t, 1, 1)` in the basis
/// `X_i, X_j, X_k`, on the hyperspherical chart.
pub fn berger_chart(t: f64) -> CoframeChart<HypersphericalCoframe> {
    let mut c = s3_chart(Invariance::Left);
    c.name = format!("berger:t={t}");
    c.weights = [t, 1.0, 1.0];
    c
}

fn chart_cs<C: Coframe>(c: &CoframeChart<C>, order: usize) -> Result<f64> {
    Ok(cs_from_integral(integrate_cs(
        c, c, &c.domain, c.periodic, order,
    )?))
}

/// Chern–Simons invariant by quadrature on the chart of a catalog group:
/// `so3`, `s3` or `su2` (left-invariant frame), or `berger:t=<value>`.
pub fn catalog_chart_cs(group: &str, order: usize) -> Result<f64> {
    match group {
        "so3" => chart_cs(&so3_euler_chart(), order),
        "s3" | "su2" => chart_cs(&s3_chart(Invariance::Left), order),
        g => {
            let t = g.strip_prefix("berger:t=").ok_or_else(|| {
                Error::InvalidArgument(format!("no quadrature chart for group {g:?}"))
            })?;
            let t: f64 = t
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad Berger parameter in {g:?}")))?;
            chart_cs(&berger_chart(t), order)
        }
    }
}

/// The rotation `Rz(α)Ry(β)Rz(γ)` as a gauge on the Euler chart, i.e. the
/// identity map of SO(3).
#[derive(Debug, Clone, Copy, Default)]
pub struct EulerIdentityGauge;

impl GaugeField for EulerIdentityGauge {
    fn gauge_jet(&self, p: &Point) -> Result<JetMat3> {
        let [a, b, c] = vars(p);
        Ok(euler_zyz(a, b, c))
    }
}

/// S³ ⊂ ℝ⁴ by hyperspherical coordinates.
pub fn s3_parametrization() -> Parametrization {
    let (chi, th, ph) = (Expr::var(0), Expr::var(1), Expr::var(2));
    let sx = chi.clone().sin();
    let st = th.clone().sin();
    Parametrization {
        domain: angle_box([PI, PI, 2.0 * PI]),
        periodic: [false, false, true],
        map: vec![
            chi.cos(),
            sx.clone() * th.cos(),
            sx.clone() * st.clone() * ph.clone().cos(),
            sx * st * ph.sin(),
        ],
        ambient_scale: 1.0,
    }
}

/// SO(3) ⊂ ℝ⁹ by Euler angles. The ambient metric `⅛⟨A, B⟩_F` induces the
/// bi-invariant metric with `|L_a| = ½`.
pub fn so3_parametrization() -> Parametrization {
    let rz = |t: Expr| {
        let (c, s) = (t.clone().cos(), t.sin());
        let z = || Expr::constant(0.0);
        [
            [c.clone(), -s.clone(), z()],
            [s, c, z()],
            [z(), z(), Expr::constant(1.0)],
        ]
    };
    let ry = {
        let b = Expr::var(1);
        let (c, s) = (b.clone().cos(), b.sin());
        let z = || Expr::constant(0.0);
        [
            [c.clone(), z(), s.clone()],
            [z(), Expr::constant(1.0), z()],
            [-s, z(), c],
        ]
    };
    let mul = |a: &[[Expr; 3]; 3], b: &[[Expr; 3]; 3]| -> [[Expr; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut terms = (0..3)
                    .filter(|&k| !a[i][k].is_zero_constant() && !b[k][j].is_zero_constant())
                    .map(|k| a[i][k].clone() * b[k][j].clone());
                let first = terms.next().unwrap_or_else(|| Expr::constant(0.0));
                terms.fold(first, |acc, t| acc + t)
            })
        })
    };
    let r = mul(&mul(&rz(Expr::var(0)), &ry), &rz(Expr::var(2)));
    Parametrization {
        domain: angle_box([2.0 * PI, PI, 2.0 * PI]),
        periodic: [true, false, true],
        map: r.into_iter().flatten().collect(),
        ambient_scale: 0.125,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SymMat3;

    fn lie_bracket<F: FrameField>(
        m: &CoframeChart<impl Coframe>,
        f: &F,
        p: &Point,
    ) -> [[f64; 3]; 3] {
        // [S_1, S_2] in frame components, from S and its first derivatives.
        let g = m.metric_jet(p).unwrap();
        let s = f.frame_jet(p, &g).unwrap();
        let sv = jet_values(&s);
        let bracket = |a: usize, b: usize| {
            let v = crate::tensor::Vec3::from_fn(|i, _| {
                (0..3)
                    .map(|k| {
                        sv[(k, a)] * s[(i, b)].partial(k).value()
                            - sv[(k, b)] * s[(i, a)].partial(k).value()
                    })
                    .sum()
            });
            let c = sv.try_inverse().unwrap() * v;
            [c[0], c[1], c[2]]
        };
        [bracket(0, 1), bracket(1, 2), bracket(2, 0)]
    }

    #[test]
    fn euler_frame_has_so3_brackets() {
        let m = so3_euler_chart();
        let b = lie_bracket(&m, &m, &[0.7, 1.1, 2.3]);
        let expect = [[0.0, 0.0, 2.0], [2.0, 0.0, 0.0], [0.0, 2.0, 0.0]];
        for (r, e) in b.iter().zip(expect) {
            for k in 0..3 {
                assert!((r[k] - e[k]).abs() < 1e-12, "{b:?}");
            }
        }
    }

    #[test]
    fn s3_frames_are_orthonormal_with_opposite_brackets() {
        for (inv, sign) in [(Invariance::Left, 2.0), (Invariance::Right, -2.0)] {
            let m = s3_chart(inv);
            let p = [0.9, 1.3, 0.4];
            let g = m.metric_at(&p).unwrap();
            let round = SymMat3::diagonal(
                1.0,
                0.9f64.sin().powi(2),
                (0.9f64.sin() * 1.3f64.sin()).powi(2),
            );
            assert!((g.matrix() - round.matrix()).abs().max() < 1e-14);
            let b = lie_bracket(&m, &m, &p);
            assert!((b[0][2] - sign).abs() < 1e-12, "{b:?}");
        }
    }

    #[test]
    fn parametrized_metrics_match_charts() {
        let p = [0.7, 1.1, 2.3];
        let a = so3_parametrization().pullback_metric(&p).unwrap();
        let b = so3_euler_chart().metric_at(&p).unwrap();
        assert!((a - b.matrix()).abs().max() < 1e-14);
        let a = s3_parametrization().pullback_metric(&p).unwrap();
        let b = s3_chart(Invariance::Left).metric_at(&p).unwrap();
        assert!((a - b.matrix()).abs().max() < 1e-14);
    }
}
