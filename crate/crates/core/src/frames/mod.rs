//! Orthonormal frames, the Levi-Civita connection form in a frame, its
//! curvature, the Chern–Simons 3-form and gauge changes of frame.

pub mod checks;

use crate::error::{Error, Result};
use crate::geometry::{christoffel_jets, MetricField};
use crate::jets::{parse, Expr, Jet3};
use crate::tensor::{
    exterior_derivative, jet_identity, jet_inverse, jet_values, jet_zeros, max_abs, trace_form,
    wedge, Form, JetMat3, Mat3,
};
use crate::Point;

/// Matrix-valued form with jet entries.
pub type JetForm = Form<JetMat3>;

/// Tolerance on `Sᵀ g S − I` when a frame is consumed.
pub const FRAME_TOL: f64 = 1e-10;

/// A frame field `S = (S1, S2, S3)`, as the columns of a jet matrix of chart
/// components.
pub trait FrameField: Sync {
    /// `g` is the metric jet at `p`.
    fn frame_jet(&self, p: &Point, g: &JetMat3) -> Result<JetMat3>;
}

/// Frame vectors given by nine component expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprFrame {
    /// `columns[a][i]` is the `x^i` component of `S_a`.
    pub columns: [[Expr; 3]; 3],
}

impl ExprFrame {
    pub fn new(columns: [[Expr; 3]; 3]) -> Self {
        Self { columns }
    }

    /// Components in the order `S1¹, S1², S1³, S2¹, …, S3³`.
    pub fn parse(src: [&str; 9]) -> Result<Self> {
        let mut e = Vec::with_capacity(9);
        for s in src {
            e.push(parse(s)?);
        }
        let mut it = e.into_iter();
        let mut col = || [0, 1, 2].map(|_| it.next().expect("nine components"));
        Ok(Self::new([col(), col(), col()]))
    }
}

impl FrameField for ExprFrame {
    fn frame_jet(&self, p: &Point, _g: &JetMat3) -> Result<JetMat3> {
        let mut s = jet_zeros();
        for (a, col) in self.columns.iter().enumerate() {
            for (i, e) in col.iter().enumerate() {
                s[(i, a)] = e.eval_jet(p)?;
            }
        }
        Ok(s)
    }
}

/// Gram–Schmidt applied to the coordinate frame `∂1, ∂2, ∂3`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GramSchmidtFrame;

fn jet_inner(g: &JetMat3, u: &[Jet3; 3], v: &[Jet3; 3]) -> Jet3 {
    let mut s = Jet3::constant(0.0);
    for i in 0..3 {
        for j in 0..3 {
            s += u[i] * g[(i, j)] * v[j];
        }
    }
    s
}

/// Gram–Schmidt of the coordinate frame, carried out on jets.
pub fn gram_schmidt_jets(g: &JetMat3) -> JetMat3 {
    let mut cols: [[Jet3; 3]; 3] = [[Jet3::constant(0.0); 3]; 3];
    for a in 0..3 {
        let mut v = [Jet3::constant(0.0); 3];
        v[a] = Jet3::constant(1.0);
        for b in 0..a {
            let c = jet_inner(g, &cols[b], &v);
            for i in 0..3 {
                v[i] -= c * cols[b][i];
            }
        }
        let inv_norm = jet_inner(g, &v, &v).sqrt().recip();
        cols[a] = v.map(|x| x * inv_norm);
    }
    JetMat3::from_fn(|i, a| cols[a][i])
}

impl FrameField for GramSchmidtFrame {
    fn frame_jet(&self, _p: &Point, g: &JetMat3) -> Result<JetMat3> {
        Ok(gram_schmidt_jets(g))
    }
}

/// The frame `S · a` for a rotation field `a`.
pub struct GaugedFrame<'a, F: ?Sized, G: ?Sized> {
    pub frame: &'a F,
    pub gauge: &'a G,
}

impl<F: FrameField + ?Sized, G: GaugeField + ?Sized> FrameField for GaugedFrame<'_, F, G> {
    fn frame_jet(&self, p: &Point, g: &JetMat3) -> Result<JetMat3> {
        Ok(self.frame.frame_jet(p, g)? * self.gauge.gauge_jet(p)?)
    }
}

/// An `SO(3)`-valued map.
pub trait GaugeField: Sync {
    fn gauge_jet(&self, p: &Point) -> Result<JetMat3>;
}

/// Gauge map given by nine entry expressions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprGauge {
    pub entries: [[Expr; 3]; 3],
}

impl GaugeField for ExprGauge {
    fn gauge_jet(&self, p: &Point) -> Result<JetMat3> {
        let mut a = jet_zeros();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                a[(i, j)] = e.eval_jet(p)?;
            }
        }
        Ok(a)
    }
}

/// `ω_{ij} = ⟨∇S_j, S_i⟩` about a point, as a 1-form of jets valid through
/// second order.
#[derive(Debug, Clone)]
pub struct ConnectionForm {
    pub point: Point,
    pub omega: JetForm,
    /// `max |ω + ωᵀ|` before projection onto `so(3)`.
    pub antisymmetry_defect: f64,
    /// The frame, columns `S_a`.
    pub frame: JetMat3,
}

pub fn connection_one_form<M, F>(m: &M, frame: &F, p: &Point) -> Result<ConnectionForm>
where
    M: MetricField + ?Sized,
    F: FrameField + ?Sized,
{
    let g = m.metric_jet(p)?;
    let s = frame.frame_jet(p, &g)?;
    connection_from_jets(&g, &s, p)
}

/// `ω_k = Sᵀ g (∂_k S + Γ_k S)` with `(Γ_k)_{bc} = Γ^b_{kc}`, then projected
/// onto antisymmetric matrices.
pub fn connection_from_jets(g: &JetMat3, s: &JetMat3, p: &Point) -> Result<ConnectionForm> {
    let sv = jet_values(s);
    let defect = max_abs(&(sv.transpose() * jet_values(g) * sv - Mat3::identity()));
    if !(defect <= FRAME_TOL) {
        return Err(Error::FrameNotOrthonormal { point: *p, defect });
    }
    let g_inv = jet_inverse(g);
    let gamma = christoffel_jets(g, &g_inv);
    let stg = s.transpose() * g;
    let mut worst: f64 = 0.0;
    let comps = [0, 1, 2].map(|k| {
        let gk = JetMat3::from_fn(|b, c| gamma[b][k][c]);
        let ds = s.map(|x| x.partial(k));
        let w = stg * (ds + gk * s);
        let wt = w.transpose();
        worst = worst.max(max_abs(&jet_values(&(w + wt))));
        (w - wt).map(|x| x.scale(0.5))
    });
    Ok(ConnectionForm {
        point: *p,
        omega: Form::one_form(comps),
        antisymmetry_defect: worst,
        frame: *s,
    })
}

/// `Ω = dθ + θ∧θ`.
pub fn curvature_two_form(theta: &JetForm) -> JetForm {
    let d = exterior_derivative(theta).expect("1-form");
    d.add(&wedge(theta, theta).expect("degree 2"))
}

/// `cs(θ) = tr(θ∧dθ + ⅔ θ∧θ∧θ)`.
pub fn cs_three_form(theta: &JetForm) -> Form<Jet3> {
    let d = exterior_derivative(theta).expect("1-form");
    let a = wedge(theta, &d).expect("degree 3");
    let t2 = wedge(theta, theta).expect("degree 2");
    let t3 = wedge(&t2, theta).expect("degree 3");
    trace_form(&a.add(&t3.scale(2.0 / 3.0)))
}

impl ConnectionForm {
    pub fn curvature(&self) -> JetForm {
        curvature_two_form(&self.omega)
    }

    pub fn cs(&self) -> Form<Jet3> {
        cs_three_form(&self.omega)
    }

    /// Chart coefficient of `cs(ω)` on `dx¹∧dx²∧dx³` at the base point.
    /// Only `ω` and its first derivatives at the point are used.
    pub fn cs_density(&self) -> f64 {
        let w = self.values();
        let dw = |i: usize, j: usize| {
            self.omega.coeffs()[j].map(|x| x.partial(i).value())
                - self.omega.coeffs()[i].map(|x| x.partial(j).value())
        };
        let d = [dw(0, 1), dw(0, 2), dw(1, 2)];
        // tr(θ∧dθ) and tr(θ∧θ∧θ) on dx¹∧dx²∧dx³.
        let a = (w[0] * d[2] - w[1] * d[1] + w[2] * d[0]).trace();
        let t3 = (w[0] * (w[1] * w[2] - w[2] * w[1]) - w[1] * (w[0] * w[2] - w[2] * w[0])
            + w[2] * (w[0] * w[1] - w[1] * w[0]))
            .trace();
        a + 2.0 / 3.0 * t3
    }

    /// Values of `ω(∂_k)`.
    pub fn values(&self) -> [Mat3; 3] {
        [0, 1, 2].map(|k| jet_values(&self.omega.coeffs()[k]))
    }
}

/// Convenience: the `cs` density of a metric in a frame at a point.
pub fn cs_density<M, F>(m: &M, frame: &F, p: &Point) -> Result<f64>
where
    M: MetricField + ?Sized,
    F: FrameField + ?Sized,
{
    Ok(connection_one_form(m, frame, p)?.cs_density())
}

/// Tolerance on `aᵀa − I` for gauge maps.
pub const GAUGE_TOL: f64 = 1e-10;

fn check_special_orthogonal(a: &JetMat3, p: &Point) -> Result<()> {
    let av = jet_values(a);
    let defect =
        max_abs(&(av.transpose() * av - Mat3::identity())).max((av.determinant() - 1.0).abs());
    if !(defect <= GAUGE_TOL) {
        return Err(Error::NotSpecialOrthogonal { point: *p, defect });
    }
    Ok(())
}

/// `ω' = a⁻¹ ω a + a⁻¹ da`.
pub fn gauge_transform(omega: &JetForm, a: &JetMat3, p: &Point) -> Result<JetForm> {
    check_special_orthogonal(a, p)?;
    let a_inv = jet_inverse(a);
    let comps = [0, 1, 2].map(|k| {
        let da = a.map(|x| x.partial(k));
        a_inv * omega.coeffs()[k] * a + a_inv * da
    });
    Ok(Form::one_form(comps))
}

/// `a⁻¹ da`.
pub fn pulled_back_maurer_cartan(a: &JetMat3) -> JetForm {
    let a_inv = jet_inverse(a);
    Form::one_form([0, 1, 2].map(|k| a_inv * a.map(|x| x.partial(k))))
}

/// Residual of `cs(ω') = cs(ω) + d tr(a⁻¹ω∧da) − ⅓ tr((a⁻¹da)³)` at the
/// base point, relative to `1 + |cs(ω)| + |cs(ω')|`.
pub fn gauge_cs_defect(omega: &JetForm, a: &JetMat3, p: &Point) -> Result<f64> {
    let omega1 = gauge_transform(omega, a, p)?;
    let a_inv = jet_inverse(a);
    let da = Form::one_form([0, 1, 2].map(|k| a.map(|x| x.partial(k))));
    let a_inv_omega = omega.map(|w| a_inv * w);
    let boundary = exterior_derivative(&trace_form(&wedge(&a_inv_omega, &da)?))?;
    let mc = pulled_back_maurer_cartan(a);
    let mc3 = trace_form(&wedge(&wedge(&mc, &mc)?, &mc)?);
    let cs0 = cs_three_form(omega).top().value();
    let cs1 = cs_three_form(&omega1).top().value();
    let res = cs1 - cs0 - boundary.top().value() + mc3.top().value() / 3.0;
    Ok(res.abs() / (1.0 + cs0.abs() + cs1.abs()))
}

/// The rotation `Rz(α) Ry(β) Rz(γ)`.
pub fn euler_zyz(alpha: Jet3, beta: Jet3, gamma: Jet3) -> JetMat3 {
    let rz = |t: Jet3| {
        let (c, s) = (t.cos(), t.sin());
        let mut m = jet_identity();
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        m
    };
    let (c, s) = (beta.cos(), beta.sin());
    let mut ry = jet_identity();
    ry[(0, 0)] = c;
    ry[(0, 2)] = s;
    ry[(2, 0)] = -s;
    ry[(2, 2)] = c;
    rz(alpha) * ry * rz(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain3, MetricSpec};

    #[test]
    fn euclidean_standard_frame_has_zero_connection() {
        let m = MetricSpec::euclidean(Domain3::cube([0.0; 3], 1.0).unwrap());
        let c = connection_one_form(&m, &GramSchmidtFrame, &[0.1, 0.2, 0.3]).unwrap();
        assert!(c.values().iter().all(|w| max_abs(w) == 0.0));
        assert_eq!(c.cs_density(), 0.0);
    }

    #[test]
    fn pointwise_density_matches_jet_form() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let omega = checks::random_matrix_one_form(&mut rng, 1.0);
        let c = ConnectionForm {
            point: [0.0; 3],
            omega: omega.clone(),
            antisymmetry_defect: 0.0,
            frame: jet_identity(),
        };
        let full = cs_three_form(&omega).top().value();
        assert!((c.cs_density() - full).abs() < 1e-12 * (1.0 + full.abs()));
    }

    #[test]
    fn non_orthonormal_frame_is_rejected() {
        let m = MetricSpec::euclidean(Domain3::cube([0.0; 3], 1.0).unwrap());
        let f = ExprFrame::parse(["2", "0", "0", "0", "1", "0", "0", "0", "1"]).unwrap();
        let err = connection_one_form(&m, &f, &[0.0; 3]).unwrap_err();
        assert_eq!(err.name(), "FrameNotOrthonormal");
    }

    #[test]
    fn euler_rotation_is_special_orthogonal() {
        let r = euler_zyz(
            Jet3::variable(0, 0.3),
            Jet3::variable(1, 1.1),
            Jet3::variable(2, -0.7),
        );
        let rv = jet_values(&r);
        assert!(max_abs(&(rv.transpose() * rv - Mat3::identity())) < 1e-15);
        assert!((rv.determinant() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reflection_is_not_a_gauge() {
        let mut a = jet_identity();
        a[(2, 2)] = Jet3::constant(-1.0);
        let w = Form::one_form([jet_zeros(), jet_zeros(), jet_zeros()]);
        assert_eq!(
            gauge_transform(&w, &a, &[0.0; 3]).unwrap_err().name(),
            "NotSpecialOrthogonal"
        );
    }
}
