//! Finite-difference checks of the variation formula for `cs(θ)` and of
//! `d cs(θ) = tr(Ω∧Ω)`.
//!
//! In dimension 3 every 4-form vanishes, so the second identity is checked
//! on the cylinder `M × ℝ_t` with a family `θ_t` that has no `dt` part. The
//! `dt∧dx¹∧dx²∧dx³` coefficient of `d cs(θ) = tr(Ω∧Ω)` there reads
//! `∂_t cs(θ_t) + d tr(θ_t∧θ̇_t) = 2 tr(θ̇_t∧Ω_t)`, which only involves
//! forms on `M`.

use rand::Rng;

use crate::frames::{cs_three_form, curvature_two_form, JetForm};
use crate::jets::{Jet3, JET_LEN};
use crate::tensor::{exterior_derivative, trace_form, wedge, Form, JetMat3};

/// A polynomial `gl(3)`-valued 1-form with coefficients drawn from
/// `[-scale, scale]`.
pub fn random_matrix_one_form<R: Rng>(rng: &mut R, scale: f64) -> JetForm {
    let mut entry = || {
        let mut c = [0.0; JET_LEN];
        for v in c.iter_mut() {
            *v = rng.random_range(-scale..=scale);
        }
        Jet3::from_coeffs(c)
    };
    let mut comp = || JetMat3::from_fn(|_, _| entry());
    Form::one_form([comp(), comp(), comp()])
}

fn top(f: &Form<Jet3>) -> f64 {
    f.top().value()
}

fn lin(a: &JetForm, b: &JetForm, s: f64) -> JetForm {
    a.add(&b.scale(s))
}

/// `d tr(θ̇∧θ) + 2 tr(θ̇∧Ω)`.
pub fn cs_variation(theta: &JetForm, theta_dot: &JetForm) -> f64 {
    let omega = curvature_two_form(theta);
    let a = exterior_derivative(&trace_form(&wedge(theta_dot, theta).expect("2-form")))
        .expect("2-form");
    let b = trace_form(&wedge(theta_dot, &omega).expect("3-form"));
    top(&a) + 2.0 * top(&b)
}

/// `|(cs(θ + tθ̇) − cs(θ − tθ̇)) / 2t − (d tr(θ̇∧θ) + 2 tr(θ̇∧Ω))|` for each `t`.
pub fn varcs_errors(theta: &JetForm, theta_dot: &JetForm, steps: &[f64]) -> Vec<f64> {
    let exact = cs_variation(theta, theta_dot);
    steps
        .iter()
        .map(|&t| {
            let plus = top(&cs_three_form(&lin(theta, theta_dot, t)));
            let minus = top(&cs_three_form(&lin(theta, theta_dot, -t)));
            ((plus - minus) / (2.0 * t) - exact).abs()
        })
        .collect()
}

/// Cylinder form of `d cs = tr(Ω∧Ω)` at `t = 0` for the family
/// `θ_t = θ + sin(t) θ̇ + (1 − cos t) θ̈`, with `∂_t` replaced by a central
/// difference of step `δ`. Returns the residual for each `δ`.
pub fn cylinder_lem4_errors(
    theta: &JetForm,
    theta_dot: &JetForm,
    theta_ddot: &JetForm,
    steps: &[f64],
) -> Vec<f64> {
    let at = |t: f64| lin(&lin(theta, theta_dot, t.sin()), theta_ddot, 1.0 - t.cos());
    let omega = curvature_two_form(theta);
    let spatial = exterior_derivative(&trace_form(&wedge(theta, theta_dot).expect("2-form")))
        .expect("2-form");
    let rhs = 2.0 * top(&trace_form(&wedge(theta_dot, &omega).expect("3-form")));
    steps
        .iter()
        .map(|&d| {
            let dt = (top(&cs_three_form(&at(d))) - top(&cs_three_form(&at(-d)))) / (2.0 * d);
            (dt + top(&spatial) - rhs).abs()
        })
        .collect()
}

/// Least-squares slope of `log e` against `log h`.
pub fn observed_order(steps: &[f64], errors: &[f64]) -> f64 {
    let n = steps.len() as f64;
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn variation_converges_at_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let th = random_matrix_one_form(&mut rng, 1.0);
        let dth = random_matrix_one_form(&mut rng, 1.0);
        let steps = [0.1, 0.05, 0.025, 0.0125];
        let e = varcs_errors(&th, &dth, &steps);
        assert!(observed_order(&steps, &e) > 1.9, "{e:?}");
    }

    #[test]
    fn order_of_exact_power_law() {
        let h = [1.0, 0.5, 0.25];
        let e: Vec<f64> = h.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((observed_order(&h, &e) - 2.0).abs() < 1e-12);
    }
}
