//! Bundled verification suites run by `cottonlab verify`.

use rayon::prelude::*;
use serde::Serialize;

use super::spec_file::SpecFile;
use crate::error::{Error, Result};
use crate::geometry::{
    bianchi_first, bianchi_second, conformal_rescale, cotton_form, cotton_properties,
    cotton_tensor_at, metric_compatibility, riemann_symmetry_defect, tr13_defect, CurvatureJets,
    MetricField,
};
use crate::jets::parse;
use crate::liegroup::{berger_variational_check, VariationalReport};
use crate::Point;

pub const SUITES: [&str; 4] = ["bianchi", "cotton", "conformal", "variational"];

const SAMPLES: usize = 20;
const SEED: u64 = 0x5eed_c0de;
const DIVERGENCE_STEP: f64 = 2e-2;
const VARIATION_STEP: f64 = 1e-3;
const CONFORMAL_FACTORS: [&str; 3] = ["0.3*x1", "sin(x1) + 0.2*x2^2", "0.1*x1*x2*x3 + 0.1*cos(x3)"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub passed: bool,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            value,
            tol,
            passed: value < tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    /// Full variational comparison, including the sign-reversed error that
    /// is reported but not judged.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variational: Option<VariationalReport>,
    pub passed: bool,
}

fn points(spec: &SpecFile) -> Vec<Point> {
    spec.domain().shrink(0.9).sample(SAMPLES, SEED)
}

fn worst<F>(pts: &[Point], f: F) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64> + Sync + Send,
{
    let vals: Vec<Result<f64>> = pts.par_iter().map(f).collect();
    let mut w: f64 = 0.0;
    for v in vals {
        let v = v?;
        // NaN must not vanish inside max().
        if v.is_nan() {
            return Ok(f64::NAN);
        }
        w = w.max(v);
    }
    Ok(w)
}

fn bianchi(spec: &SpecFile, out: &mut Vec<Check>) -> Result<()> {
    let m = &spec.metric;
    let pts = points(spec);
    let jets: Vec<CurvatureJets> = pts
        .par_iter()
        .map(|p| CurvatureJets::compute(m, p))
        .collect::<Result<_>>()?;
    let over = |f: fn(&CurvatureJets) -> f64| {
        jets.iter()
            .map(f)
            .fold(0.0f64, |a, v| if v.is_nan() { v } else { a.max(v) })
    };
    out.push(Check::new("bianchi", "first", over(bianchi_first), 1e-9));
    out.push(Check::new("bianchi", "second", over(bianchi_second), 1e-7));
    out.push(Check::new(
        "bianchi",
        "riemannSymmetry",
        over(riemann_symmetry_defect),
        1e-9,
    ));
    out.push(Check::new(
        "bianchi",
        "metricCompatibility",
        over(metric_compatibility),
        1e-9,
    ));
    out.push(Check::new("bianchi", "tr13", over(tr13_defect), 1e-8));
    Ok(())
}

fn cotton(spec: &SpecFile, out: &mut Vec<Check>) -> Result<()> {
    let m = &spec.metric;
    let props = points(spec)
        .par_iter()
        .map(|p| cotton_properties(m, p, DIVERGENCE_STEP))
        .collect::<Result<Vec<_>>>()?;
    let max = |f: fn(&crate::geometry::CottonProperties) -> f64| {
        props
            .iter()
            .map(f)
            .fold(0.0f64, |a, v| if v.is_nan() { v } else { a.max(v) })
    };
    out.push(Check::new("cotton", "symmetry", max(|c| c.symmetry), 1e-6));
    out.push(Check::new("cotton", "trace", max(|c| c.trace), 1e-6));
    out.push(Check::new(
        "cotton",
        "divergence",
        max(|c| c.divergence),
        1e-6,
    ));
    Ok(())
}

fn max_diff(a: &crate::tensor::Tensor3, b: &crate::tensor::Tensor3) -> f64 {
    a.iter()
        .flatten()
        .flatten()
        .zip(b.iter().flatten().flatten())
        .fold(0.0, |w: f64, (x, y)| w.max((x - y).abs()))
}

fn conformal(spec: &SpecFile, out: &mut Vec<Check>) -> Result<()> {
    let pts = points(spec);
    let base = &spec.base_metric;
    if spec.conformal_factor.is_some() {
        let d = worst(&pts, |p| {
            Ok(max_diff(
                &cotton_form(base, p)?,
                &cotton_form(&spec.metric, p)?,
            ))
        })?;
        out.push(Check::new("conformal", "specFactor", d, 1e-7));
    }
    for src in CONFORMAL_FACTORS {
        let f = parse(src)?;
        let m1 = conformal_rescale(base, &f);
        let form = worst(&pts, |p| {
            Ok(max_diff(&cotton_form(base, p)?, &cotton_form(&m1, p)?))
        })?;
        out.push(Check::new("conformal", format!("form[{src}]"), form, 1e-7));
        let tensor = worst(&pts, |p| {
            let w = (-f.eval(p)?).exp();
            let t0 = cotton_tensor_at(base, p)?;
            let t1 = cotton_tensor_at(&m1, p)?;
            Ok((t1 - t0 * w).abs().max())
        })?;
        out.push(Check::new(
            "conformal",
            format!("tensorWeight[{src}]"),
            tensor,
            1e-7,
        ));
    }
    Ok(())
}

/// Only meaningful for a spec file naming a Berger-type group.
fn variational(spec: &SpecFile, out: &mut Vec<Check>) -> Result<Option<VariationalReport>> {
    let t = match spec.group.as_deref() {
        Some("s3") | Some("su2") => 1.0,
        Some(g) => match g.strip_prefix("berger:t=") {
            Some(t) => t
                .parse::<f64>()
                .map_err(|_| Error::Schema(format!("group: bad parameter in {g:?}")))?,
            None => return Ok(None),
        },
        None => return Ok(None),
    };
    let r = berger_variational_check(t, VARIATION_STEP)?;
    out.push(Check::new(
        "variational",
        "relativeError",
        r.relative_error,
        1e-4,
    ));
    Ok(Some(r))
}

/// Runs `suite` (one of [`SUITES`] or `all`) on `spec`.
pub fn run_suites(spec: &SpecFile, suite: &str) -> Result<Report> {
    let selected: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::InvalidArgument(format!("unknown suite {s:?}"))),
    };
    // Fail early on a metric that is degenerate at the domain center.
    spec.metric.metric_at(&spec.domain().center())?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut report = None;
    for s in selected {
        match s {
            "bianchi" => bianchi(spec, &mut checks)?,
            "cotton" => cotton(spec, &mut checks)?,
            "conformal" => conformal(spec, &mut checks)?,
            _ => {
                report = variational(spec, &mut checks)?;
                if report.is_none() {
                    if suite == "all" {
                        skipped.push("variational: spec names no Berger-type group".to_string());
                    } else {
                        return Err(Error::Schema("group".into()));
                    }
                }
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        spec: spec.name.clone(),
        checks,
        skipped,
        variational: report,
        passed,
    })
}
