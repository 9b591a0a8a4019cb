#![allow(dead_code)]

use cottonlab::geometry::{Domain3, MetricSpec};
use cottonlab::tensor::Orientation;
use cottonlab::Point;

pub fn unit_box() -> Domain3 {
    Domain3::cube([0.0; 3], 0.5).unwrap()
}

fn spec(name: &str, g: [&str; 6]) -> MetricSpec {
    MetricSpec::parse(name, g, unit_box(), Orientation::Positive).unwrap()
}

/// Five analytic metrics with no special symmetry, positive definite on the
/// cube of half-width 0.5 about the origin.
pub fn generic_metrics() -> Vec<MetricSpec> {
    vec![
        spec(
            "mixed",
            [
                "1 + 0.2*sin(x2)*x3",
                "0.1*x1*x2",
                "0.05*cos(x3)",
                "1 + 0.3*x1^2",
                "0.1*sin(x1 + x3)",
                "2 + 0.2*exp(0.5*x2)*x1",
            ],
        ),
        spec(
            "exponential",
            [
                "exp(x1*x2)",
                "0.1*x3",
                "0",
                "1 + x3^2",
                "0.2*x1*x3",
                "1 + 0.5*sin(x1)",
            ],
        ),
        spec(
            "warped",
            [
                "1",
                "0",
                "0",
                "cosh(x1)^2",
                "0.1*x1*x2",
                "(1 + 0.3*x2^2)*exp(0.4*x1)",
            ],
        ),
        spec(
            "rational",
            [
                "1/(1 + x1^2 + 0.5*x2^2)",
                "0.1*x3/(2 + x1)",
                "0.1*x2",
                "1 + 0.2*tanh(x3)",
                "0",
                "sqrt(2 + x1*x2 + x3)",
            ],
        ),
        spec(
            "perturbed",
            [
                "1 + 0.1*x2^2",
                "0.1*x1*x3",
                "0",
                "1 + 0.1*sin(x3)",
                "0.1*x1*x2",
                "1 + 0.1*x1^2",
            ],
        ),
    ]
}

pub fn round_s3_chart() -> MetricSpec {
    let d = Domain3::new([0.3, 0.3, 0.0], [2.8, 2.8, 6.0]).unwrap();
    MetricSpec::parse(
        "round-s3-chart",
        ["1", "0", "0", "sin(x1)^2", "0", "sin(x1)^2*sin(x2)^2"],
        d,
        Orientation::Positive,
    )
    .unwrap()
}

pub fn half_space() -> MetricSpec {
    let d = Domain3::new([-1.0, -1.0, 0.5], [1.0, 1.0, 2.0]).unwrap();
    MetricSpec::parse(
        "hyperbolic",
        ["x3^(-2)", "0", "0", "x3^(-2)", "0", "x3^(-2)"],
        d,
        Orientation::Positive,
    )
    .unwrap()
}

pub fn conformal_flat(f: &str) -> MetricSpec {
    let e = format!("exp(2*({f}))");
    MetricSpec::parse(
        "conformal-flat",
        [&e, "0", "0", &e, "0", &e],
        unit_box(),
        Orientation::Positive,
    )
    .unwrap()
}

pub fn samples(d: &Domain3, n: usize, seed: u64) -> Vec<Point> {
    d.shrink(0.95).sample(n, seed)
}

/// Three-level Richardson extrapolated central difference of a scalar
/// function along axis `k`.
pub fn richardson<F: Fn(&Point) -> f64>(f: F, p: &Point, k: usize, h: f64) -> f64 {
    let d = |s: f64| {
        let mut a = *p;
        let mut b = *p;
        a[k] += s;
        b[k] -= s;
        (f(&a) - f(&b)) / (2.0 * s)
    };
    let (d0, d1, d2) = (d(h), d(h / 2.0), d(h / 4.0));
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r2 = (4.0 * d2 - d1) / 3.0;
    (16.0 * r2 - r1) / 15.0
}
