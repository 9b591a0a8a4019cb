//! Tensor-product quadrature over boxes and integrals of 3-forms over
//! parametrized compact manifolds.

pub mod charts;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{cs_density, FrameField};
use crate::geometry::{Domain3, MetricField};
use crate::jets::Expr;
use crate::tensor::Mat3;
use crate::Point;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// One-dimensional rule on `[a, b]`: Gauss–Legendre, or the trapezoid rule
/// (left endpoints, equal weights) on a periodic axis.
pub fn axis_rule(a: f64, b: f64, n: usize, periodic: bool) -> (Vec<f64>, Vec<f64>) {
    if periodic {
        let h = (b - a) / n as f64;
        ((0..n).map(|i| a + i as f64 * h).collect(), vec![h; n])
    } else {
        let (x, w) = gauss_legendre(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        (
            x.iter().map(|t| mid + half * t).collect(),
            w.iter().map(|v| v * half).collect(),
        )
    }
}

/// Pairwise summation; the split points depend only on the length.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Tensor-product rule with `order` nodes per axis. Node evaluations run on
/// the rayon pool; the reduction order is fixed.
pub fn quadrature<F>(f: F, domain: &Domain3, periodic: [bool; 3], order: usize) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync,
{
    if order < 2 {
        return Err(Error::InvalidArgument(format!(
            "quadrature order must be at least 2, got {order}"
        )));
    }
    let rules: Vec<_> = (0..3)
        .map(|k| axis_rule(domain.min[k], domain.max[k], order, periodic[k]))
        .collect();
    let n = order;
    let terms: Vec<Result<f64>> = (0..n * n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let p = [rules[0].0[i], rules[1].0[j], rules[2].0[k]];
            let v = f(&p)?;
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { node: p });
            }
            Ok(v * rules[0].1[i] * rules[1].1[j] * rules[2].1[k])
        })
        .collect();
    let terms: Vec<f64> = terms.into_iter().collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

/// A compact set given as the image of a box under an embedding into
/// Euclidean space scaled by `ambient_scale`.
#[derive(Debug, Clone)]
pub struct Parametrization {
    pub domain: Domain3,
    pub periodic: [bool; 3],
    /// Components of the embedding.
    pub map: Vec<Expr>,
    /// The ambient metric is `ambient_scale` times the Euclidean one.
    pub ambient_scale: f64,
}

impl Parametrization {
    /// Pulled-back metric `s JᵀJ` at `p`.
    pub fn pullback_metric(&self, p: &Point) -> Result<Mat3> {
        let mut jac = Vec::with_capacity(self.map.len());
        for e in &self.map {
            jac.push(e.eval_jet(p)?.gradient());
        }
        Ok(Mat3::from_fn(|a, b| {
            self.ambient_scale * jac.iter().map(|r| r[a] * r[b]).sum::<f64>()
        }))
    }

    /// `√det(s JᵀJ)`.
    pub fn jacobian_density(&self, p: &Point) -> Result<f64> {
        Ok(self.pullback_metric(p)?.determinant().max(0.0).sqrt())
    }

    pub fn integrate<F>(&self, f: F, order: usize) -> Result<f64>
    where
        F: Fn(&Point) -> Result<f64> + Sync,
    {
        quadrature(
            |p| Ok(f(p)? * self.jacobian_density(p)?),
            &self.domain,
            self.periodic,
            order,
        )
    }

    pub fn volume(&self, order: usize) -> Result<f64> {
        self.integrate(|_| Ok(1.0), order)
    }
}

/// Riemannian volume `∫ √det g dx` of a chart.
pub fn chart_volume<M: MetricField + ?Sized>(
    m: &M,
    domain: &Domain3,
    periodic: [bool; 3],
    order: usize,
) -> Result<f64> {
    quadrature(
        |p| Ok(m.metric_at(p)?.determinant().sqrt()),
        domain,
        periodic,
        order,
    )
}

/// `∫_M cs(ω)` for the connection form of `m` in `frame`. The chart is
/// oriented by `m.orientation()`.
pub fn integrate_cs<M, F>(
    m: &M,
    frame: &F,
    domain: &Domain3,
    periodic: [bool; 3],
    order: usize,
) -> Result<f64>
where
    M: MetricField + ?Sized,
    F: FrameField + ?Sized,
{
    let o = m.orientation().sign();
    quadrature(
        |p| Ok(o * cs_density(m, frame, p)?),
        domain,
        periodic,
        order,
    )
}

/// `∫_M f dx¹∧dx²∧dx³` for a 3-form with chart coefficient `f`.
pub fn integrate_3form<M, F>(
    m: &M,
    coefficient: F,
    domain: &Domain3,
    periodic: [bool; 3],
    order: usize,
) -> Result<f64>
where
    M: MetricField + ?Sized,
    F: Fn(&Point) -> Result<f64> + Sync,
{
    let o = m.orientation().sign();
    quadrature(|p| Ok(o * coefficient(p)?), domain, periodic, order)
}

/// `CS = −(1/16π²) ∫ cs`.
pub fn cs_from_integral(integral: f64) -> f64 {
    -integral / (16.0 * std::f64::consts::PI.powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [2, 3, 8, 17, 32] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn unit_cube_and_sphere_area() {
        let d = Domain3::new([0.0; 3], [1.0; 3]).unwrap();
        assert!((quadrature(|_| Ok(1.0), &d, [false; 3], 2).unwrap() - 1.0).abs() < 1e-15);
        // ∫ sin θ dθ dφ over [0,π]×[0,2π], with a unit third axis.
        let d = Domain3::new([0.0, 0.0, 0.0], [PI, 2.0 * PI, 1.0]).unwrap();
        let v = quadrature(|p| Ok(p[0].sin()), &d, [false, true, false], 24).unwrap();
        assert!((v - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn non_finite_samples_are_reported() {
        let d = Domain3::new([0.0; 3], [1.0; 3]).unwrap();
        let err = quadrature(|p| Ok(1.0 / (p[0] - p[0])), &d, [false; 3], 4).unwrap_err();
        assert_eq!(err.name(), "NonFiniteSample");
        assert!(quadrature(|_| Ok(1.0), &d, [false; 3], 1).is_err());
    }
}
