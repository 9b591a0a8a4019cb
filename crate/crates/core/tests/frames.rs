mod common;

use cottonlab::frames::{
    connection_from_jets, connection_one_form, curvature_two_form, euler_zyz, gauge_cs_defect,
    gauge_transform, pulled_back_maurer_cartan, GramSchmidtFrame, JetForm,
};
use cottonlab::geometry::{CurvatureJets, MetricField};
use cottonlab::jets::{parse, Jet3};
use cottonlab::tensor::{jet_identity, jet_inverse, jet_values, max_abs, Form, JetMat3, Mat3};
use cottonlab::Point;
use proptest::prelude::*;

fn metric_and_point() -> impl Strategy<Value = (usize, Point)> {
    (0usize..5, [-0.45f64..0.45, -0.45f64..0.45, -0.45f64..0.45])
}

fn angle() -> impl Strategy<Value = Jet3> {
    proptest::array::uniform20(-1.5f64..1.5).prop_map(Jet3::from_coeffs)
}

fn rotation() -> impl Strategy<Value = JetMat3> {
    (angle(), angle(), angle()).prop_map(|(a, b, c)| euler_zyz(a, b, c))
}

/// Largest difference of values and first derivatives.
fn first_order_diff(a: &JetForm, b: &JetForm) -> f64 {
    let mut w: f64 = 0.0;
    for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
        for (u, v) in x.iter().zip(y.iter()) {
            w = w.max((u.value() - v.value()).abs());
            for (du, dv) in u.gradient().iter().zip(v.gradient().iter()) {
                w = w.max((du - dv).abs());
            }
        }
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connection_is_antisymmetric_and_torsion_free((k, p) in metric_and_point()) {
        let m = &common::generic_metrics()[k];
        let c = connection_one_form(m, &GramSchmidtFrame, &p).unwrap();
        prop_assert!(c.antisymmetry_defect < 1e-12);
        // The dual coframe θ = S⁻¹ satisfies dθ^i + ω_ij ∧ θ^j = 0.
        let theta = jet_inverse(&c.frame);
        let w = c.values();
        for i in 0..3 {
            for (k, l) in [(0, 1), (0, 2), (1, 2)] {
                let d = theta[(i, l)].partial(k).value() - theta[(i, k)].partial(l).value();
                let wedge: f64 = (0..3)
                    .map(|j| w[k][(i, j)] * theta[(j, l)].value() - w[l][(i, j)] * theta[(j, k)].value())
                    .sum();
                prop_assert!((d + wedge).abs() < 1e-10, "i={} ({},{}) {}", i, k, l, d + wedge);
            }
        }
    }

    #[test]
    fn curvature_form_is_riemann_in_the_frame((k, p) in metric_and_point()) {
        let m = &common::generic_metrics()[k];
        let c = connection_one_form(m, &GramSchmidtFrame, &p).unwrap();
        let omega = curvature_two_form(&c.omega);
        let riem = CurvatureJets::compute(m, &p).unwrap().riemann_values();
        let s = jet_values(&c.frame);
        for (slot, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let got = jet_values(&omega.coeffs()[slot]);
            // Ω_ij(∂_a, ∂_b) = R_{efab} S^e_i S^f_j.
            let want = Mat3::from_fn(|i, j| {
                let mut t = 0.0;
                for e in 0..3 {
                    for f in 0..3 {
                        t += riem[e][f][a][b] * s[(e, i)] * s[(f, j)];
                    }
                }
                t
            });
            prop_assert!(max_abs(&(got - want)) < 1e-8, "{}", max_abs(&(got - want)));
        }
    }

    #[test]
    fn rotated_frame_matches_gauge_transform((k, p) in metric_and_point(), a in rotation()) {
        let m = &common::generic_metrics()[k];
        let g = m.metric_jet(&p).unwrap();
        let c = connection_one_form(m, &GramSchmidtFrame, &p).unwrap();
        let rotated = connection_from_jets(&g, &(c.frame * a), &p).unwrap();
        let expected = gauge_transform(&c.omega, &a, &p).unwrap();
        prop_assert!(first_order_diff(&rotated.omega, &expected) < 1e-9);
        prop_assert!(gauge_cs_defect(&c.omega, &a, &p).unwrap() < 1e-7);
    }

    #[test]
    fn pure_gauge_is_flat(a in rotation()) {
        let zero = Form::one_form([JetMat3::zeros(), JetMat3::zeros(), JetMat3::zeros()]);
        let w = gauge_transform(&zero, &a, &[0.0; 3]).unwrap();
        prop_assert_eq!(&w, &pulled_back_maurer_cartan(&a));
        for f in curvature_two_form(&w).coeffs() {
            prop_assert!(max_abs(&jet_values(f)) < 1e-12);
        }
        // Values of a⁻¹da lie in so(3).
        for f in w.coeffs() {
            let v = jet_values(f);
            prop_assert!(max_abs(&(v + v.transpose())) < 1e-12);
        }
    }

    #[test]
    fn identity_gauge_changes_nothing((k, p) in metric_and_point()) {
        let m = &common::generic_metrics()[k];
        let c = connection_one_form(m, &GramSchmidtFrame, &p).unwrap();
        let w = gauge_transform(&c.omega, &jet_identity(), &p).unwrap();
        prop_assert!(first_order_diff(&w, &c.omega) == 0.0);
        prop_assert!(gauge_cs_defect(&c.omega, &jet_identity(), &p).unwrap() < 1e-13);
    }
}

#[test]
fn conformally_flat_connection_closed_form() {
    // For e^{2f}δ with S_i = e^{-f}∂_i: ω_ij = ∂_j f dx^i − ∂_i f dx^j.
    let src = "sin(x1) + 0.2*x2^2 - 0.3*x1*x3";
    let m = common::conformal_flat(src);
    let f = parse(src).unwrap();
    for p in common::samples(&common::unit_box(), 10, 17) {
        let df = f.eval_jet(&p).unwrap().gradient();
        let c = connection_one_form(&m, &GramSchmidtFrame, &p).unwrap();
        for (k, w) in c.values().iter().enumerate() {
            let want = Mat3::from_fn(|i, j| {
                (if i == k { df[j] } else { 0.0 }) - (if j == k { df[i] } else { 0.0 })
            });
            assert!(max_abs(&(w - want)) < 1e-13, "{p:?}");
        }
    }
}
