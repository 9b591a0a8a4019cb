use std::f64::consts::PI;
use std::time::Instant;

use cottonlab::frames::{cs_density, GaugedFrame};
use cottonlab::geometry::MetricField;
use cottonlab::quad::charts::{
    berger_chart, s3_chart, s3_parametrization, so3_euler_chart, so3_parametrization,
    EulerIdentityGauge, Invariance,
};
use cottonlab::quad::{chart_volume, cs_from_integral, integrate_3form, integrate_cs};

#[test]
fn volumes_of_s3_and_so3() {
    let s3 = s3_parametrization();
    assert!((s3.volume(32).unwrap() - 2.0 * PI * PI).abs() < 1e-8);
    let so3 = so3_parametrization();
    assert!((so3.volume(32).unwrap() - PI * PI).abs() < 1e-8);
    let m = so3_euler_chart();
    let v = chart_volume(&m, &m.domain, m.periodic, 32).unwrap();
    assert!((v - PI * PI).abs() < 1e-8);
    let b = berger_chart(2.0);
    let v = chart_volume(&b, &b.domain, b.periodic, 32).unwrap();
    assert!((v - 2.0 * PI * PI * 2f64.sqrt()).abs() < 1e-8);
}

#[test]
fn so3_chern_simons_by_quadrature() {
    let m = so3_euler_chart();
    let start = Instant::now();
    let cs = cs_from_integral(integrate_cs(&m, &m, &m.domain, m.periodic, 32).unwrap());
    let elapsed = start.elapsed();
    assert!((cs + 0.5).abs() < 1e-6, "{cs}");
    let cs24 = cs_from_integral(integrate_cs(&m, &m, &m.domain, m.periodic, 24).unwrap());
    assert!((cs - cs24).abs() < 1e-9, "{cs} {cs24}");
    eprintln!("SO(3) order 32: {cs:.15} in {elapsed:?}");
    // Pointwise density is 8 dvol = sin β.
    let p = [0.4, 1.2, 2.0];
    let d = cs_density(&m, &m, &p).unwrap() * m.orientation().sign();
    assert!((d - 1.2f64.sin()).abs() < 1e-12, "{d}");
}

#[test]
fn s3_chern_simons_is_integral() {
    for (inv, expect) in [(Invariance::Left, -1.0), (Invariance::Right, 1.0)] {
        let m = s3_chart(inv);
        let cs = cs_from_integral(integrate_cs(&m, &m, &m.domain, m.periodic, 32).unwrap());
        assert!((cs - expect).abs() < 1e-6, "{inv:?} {cs}");
    }
}

#[test]
fn identity_gauge_shifts_by_one() {
    let m = so3_euler_chart();
    let g = GaugedFrame {
        frame: &m,
        gauge: &EulerIdentityGauge,
    };
    let a = cs_from_integral(integrate_cs(&m, &m, &m.domain, m.periodic, 32).unwrap());
    let b = cs_from_integral(integrate_cs(&m, &g, &m.domain, m.periodic, 32).unwrap());
    let d = b - a;
    assert!(
        (d - d.round()).abs() < 1e-4 && d.round().abs() == 1.0,
        "{d}"
    );
}

#[test]
fn zero_form_integrates_to_zero() {
    let m = so3_euler_chart();
    assert_eq!(
        integrate_3form(&m, |_| Ok(0.0), &m.domain, m.periodic, 8).unwrap(),
        0.0
    );
}
