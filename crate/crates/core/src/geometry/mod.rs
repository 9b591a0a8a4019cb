//! Coordinate-chart curvature pipeline: metric, Christoffel symbols,
//! Riemann, Ricci, Schouten, Cotton form and Cotton tensor.

mod curvature;
mod verify;

pub(crate) use curvature::levi_civita;

pub use curvature::{
    christoffel_jets, christoffels, conformal_rescale, cotton_divergence, cotton_form,
    cotton_tensor, cotton_tensor_at, curvature_from_schouten, curvature_packet, divergence_sym2,
    fd_field_jet, ricci_scalar, riemann, riemann_apply, schouten, CurvatureJets, CurvaturePacket,
    JetTensor3, JetTensor4,
};
pub use verify::{
    bianchi_first, bianchi_second, cotton_properties, double_hodge_defect, metric_compatibility,
    riemann_symmetry_defect, tr13_defect, CottonProperties,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jets::{parse, Expr};
use crate::tensor::{JetMat3, Orientation, SymMat3};
use crate::Point;

/// Anything that can hand out the order-3 jet of a metric at a point.
pub trait MetricField: Sync {
    fn metric_jet(&self, p: &Point) -> Result<JetMat3>;

    fn orientation(&self) -> Orientation {
        Orientation::Positive
    }

    fn metric_at(&self, p: &Point) -> Result<SymMat3> {
        let g = self.metric_jet(p)?;
        Ok(SymMat3::from_matrix(&g.map(|j| j.value())))
    }
}

/// Axis-aligned box `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain3 {
    pub min: Point,
    pub max: Point,
}

impl Domain3 {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if (0..3).any(|k| !(min[k] < max[k]) || !min[k].is_finite() || !max[k].is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "empty domain {min:?} .. {max:?}"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn cube(center: Point, half_width: f64) -> Result<Self> {
        Self::new(
            [
                center[0] - half_width,
                center[1] - half_width,
                center[2] - half_width,
            ],
            [
                center[0] + half_width,
                center[1] + half_width,
                center[2] + half_width,
            ],
        )
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..3).all(|k| self.min[k] <= p[k] && p[k] <= self.max[k])
    }

    pub fn center(&self) -> Point {
        [0, 1, 2].map(|k| 0.5 * (self.min[k] + self.max[k]))
    }

    /// Sub-box shrunk about the center by `factor`.
    pub fn shrink(&self, factor: f64) -> Domain3 {
        let c = self.center();
        Domain3 {
            min: [0, 1, 2].map(|k| c[k] - factor * (c[k] - self.min[k])),
            max: [0, 1, 2].map(|k| c[k] + factor * (self.max[k] - c[k])),
        }
    }

    /// Deterministic uniform samples.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| [0, 1, 2].map(|k| rng.random_range(self.min[k]..=self.max[k])))
            .collect()
    }
}

/// A metric given by six component expressions on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub name: String,
    /// `g11, g12, g13, g22, g23, g33`.
    pub g: [Expr; 6],
    pub domain: Domain3,
    pub orientation: Orientation,
}

pub(crate) const UPPER: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
pub const METRIC_KEYS: [&str; 6] = ["g11", "g12", "g13", "g22", "g23", "g33"];

impl MetricSpec {
    pub fn new(
        name: impl Into<String>,
        g: [Expr; 6],
        domain: Domain3,
        orientation: Orientation,
    ) -> Self {
        Self {
            name: name.into(),
            g,
            domain,
            orientation,
        }
    }

    /// Parses the six upper-triangular components.
    pub fn parse(
        name: impl Into<String>,
        g: [&str; 6],
        domain: Domain3,
        orientation: Orientation,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(6);
        for src in g {
            out.push(parse(src)?);
        }
        let g: [Expr; 6] = out.try_into().expect("six components");
        Ok(Self::new(name, g, domain, orientation))
    }

    /// Diagonal metric `diag(a, b, c)`.
    pub fn diagonal(name: impl Into<String>, d: [Expr; 3], domain: Domain3) -> Self {
        let [a, b, c] = d;
        let z = || Expr::constant(0.0);
        Self::new(
            name,
            [a, z(), z(), b, z(), c],
            domain,
            Orientation::Positive,
        )
    }

    pub fn euclidean(domain: Domain3) -> Self {
        let one = || Expr::constant(1.0);
        Self::diagonal("flat", [one(), one(), one()], domain)
    }
}

impl MetricField for MetricSpec {
    fn metric_jet(&self, p: &Point) -> Result<JetMat3> {
        let mut g = crate::tensor::jet_zeros();
        for (e, &(i, j)) in self.g.iter().zip(UPPER.iter()) {
            let v = e.eval_jet(p)?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
        let values = SymMat3::from_matrix(&g.map(|j| j.value()));
        if !values.is_positive_definite() {
            return Err(Error::NotPositiveDefinite { point: Some(*p) });
        }
        Ok(g)
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Metric supplied by a closure returning jets.
pub struct FnMetric<F> {
    f: F,
    orientation: Orientation,
}

impl<F> FnMetric<F>
where
    F: Fn(&Point) -> Result<JetMat3> + Sync,
{
    pub fn new(f: F, orientation: Orientation) -> Self {
        Self { f, orientation }
    }
}

impl<F> MetricField for FnMetric<F>
where
    F: Fn(&Point) -> Result<JetMat3> + Sync,
{
    fn metric_jet(&self, p: &Point) -> Result<JetMat3> {
        let g = (self.f)(p)?;
        if !SymMat3::from_matrix(&g.map(|j| j.value())).is_positive_definite() {
            return Err(Error::NotPositiveDefinite { point: Some(*p) });
        }
        Ok(g)
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indefinite_metric_reports_point() {
        let d = Domain3::cube([0.0; 3], 1.0).unwrap();
        let m = MetricSpec::parse(
            "bad",
            ["1", "0", "0", "x1", "0", "1"],
            d,
            Orientation::Positive,
        )
        .unwrap();
        match m.metric_jet(&[-0.5, 0.0, 0.0]).unwrap_err() {
            Error::NotPositiveDefinite { point } => assert_eq!(point, Some([-0.5, 0.0, 0.0])),
            e => panic!("unexpected {e:?}"),
        }
        assert!(m.metric_jet(&[0.5, 0.0, 0.0]).is_ok());
    }

    #[test]
    fn domain_sampling_is_deterministic() {
        let d = Domain3::new([0.0, 1.0, 2.0], [1.0, 2.0, 3.0]).unwrap();
        let a = d.sample(5, 7);
        assert_eq!(a, d.sample(5, 7));
        assert!(a.iter().all(|p| d.contains(p)));
        assert!(Domain3::new([0.0; 3], [1.0, 0.0, 1.0]).is_err());
    }
}
