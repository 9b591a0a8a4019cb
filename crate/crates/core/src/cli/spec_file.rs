//! Metric spec files: JSON documents naming a metric on a coordinate box.
//!
//! ```json
//! {
//!   "name": "hyperbolic",
//!   "coords": ["x1", "x2", "x3"],
//!   "metric": {"g11": "x3^(-2)", "g12": "0", "g13": "0",
//!              "g22": "x3^(-2)", "g23": "0", "g33": "x3^(-2)"},
//!   "domain": {"min": [-1, -1, 0.5], "max": [1, 1, 2]},
//!   "orientation": 1,
//!   "conformal_factor": "0.1*x1",
//!   "frame": ["1", "0", "0", "0", "1", "0", "0", "0", "1"],
//!   "group": "berger:t=2"
//! }
//! ```
//!
//! `conformal_factor` (optional) replaces the metric by `e^{2f} g`.
//! `frame` (optional) lists `S1¹, S1², S1³, S2¹, …, S3³`. `group` (optional)
//! names the homogeneous space the chart describes, for the variational
//! suite.

use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::frames::ExprFrame;
use crate::geometry::{conformal_rescale, Domain3, MetricSpec, METRIC_KEYS};
use crate::jets::{parse, Expr};
use crate::liegroup::LieAlgebraData;
use crate::tensor::Orientation;

/// Built-in specs, addressable by bare name.
pub const CATALOG: [(&str, &str); 6] = [
    ("flat", include_str!("../../specs/flat.json")),
    ("hyperbolic", include_str!("../../specs/hyperbolic.json")),
    (
        "round-s3-chart",
        include_str!("../../specs/round-s3-chart.json"),
    ),
    (
        "conformal-flat",
        include_str!("../../specs/conformal-flat.json"),
    ),
    ("perturbed", include_str!("../../specs/perturbed.json")),
    ("berger", include_str!("../../specs/berger.json")),
];

pub const COORDS: [&str; 3] = ["x1", "x2", "x3"];

#[derive(Debug, Clone)]
pub struct SpecFile {
    pub name: String,
    /// The metric actually analyzed, with any conformal factor applied.
    pub metric: MetricSpec,
    /// The metric as written, before the conformal factor.
    pub base_metric: MetricSpec,
    pub conformal_factor: Option<Expr>,
    pub frame: Option<ExprFrame>,
    pub group: Option<String>,
}

impl SpecFile {
    pub fn domain(&self) -> Domain3 {
        self.metric.domain
    }

    pub fn lie_algebra(&self) -> Option<Result<LieAlgebraData>> {
        self.group.as_deref().map(LieAlgebraData::from_catalog)
    }
}

/// Reads a spec from `path`. A path that does not exist but names a
/// catalog entry (`flat` or `flat.json`) resolves to the built-in spec.
pub fn load_spec(path: &str) -> Result<SpecFile> {
    if !Path::new(path).exists() {
        let bare = path.strip_suffix(".json").unwrap_or(path);
        if let Some((_, text)) = CATALOG.iter().find(|(n, _)| *n == bare) {
            return parse_spec(text);
        }
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<SpecFile> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("invalid JSON: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("top level must be an object".into()))?;

    let name = get(obj, "name")?
        .as_str()
        .ok_or_else(|| wrong_type("name", "a string"))?
        .to_string();

    if let Some(coords) = obj.get("coords") {
        let ok = coords.as_array().is_some_and(|a| {
            a.iter()
                .map(Value::as_str)
                .eq(COORDS.iter().map(|c| Some(*c)))
        });
        if !ok {
            return Err(wrong_type("coords", r#"["x1", "x2", "x3"]"#));
        }
    }

    let metric = get(obj, "metric")?
        .as_object()
        .ok_or_else(|| wrong_type("metric", "an object"))?;
    let mut g = Vec::with_capacity(6);
    for key in METRIC_KEYS {
        let src = metric
            .get(key)
            .ok_or_else(|| Error::Schema(key.to_string()))?;
        g.push(expression(key, src)?);
    }
    let g: [Expr; 6] = g.try_into().expect("six components");

    let domain = get(obj, "domain")?
        .as_object()
        .ok_or_else(|| wrong_type("domain", "an object"))?;
    let min = point(domain, "min")?;
    let max = point(domain, "max")?;
    let domain = Domain3::new(min, max)
        .map_err(|_| Error::Schema(format!("domain: empty box {min:?} .. {max:?}")))?;

    let orientation = get(obj, "orientation")?
        .as_i64()
        .and_then(Orientation::from_sign)
        .ok_or_else(|| wrong_type("orientation", "1 or -1"))?;

    let conformal_factor = match obj.get("conformal_factor") {
        Some(v) => Some(expression("conformal_factor", v)?),
        None => None,
    };

    let frame = match obj.get("frame") {
        Some(v) => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 9)
                .ok_or_else(|| wrong_type("frame", "an array of 9 expressions"))?;
            let mut src = Vec::with_capacity(9);
            for (k, s) in arr.iter().enumerate() {
                let key = format!("frame[{k}]");
                let s = s.as_str().ok_or_else(|| wrong_type(&key, "a string"))?;
                parse(s).map_err(|e| locate(&key, e))?;
                src.push(s);
            }
            let src: [&str; 9] = src.try_into().expect("nine components");
            Some(ExprFrame::parse(src)?)
        }
        None => None,
    };

    let group = match obj.get("group") {
        Some(v) => {
            let key = v.as_str().ok_or_else(|| wrong_type("group", "a string"))?;
            LieAlgebraData::from_catalog(key).map_err(|e| Error::Schema(format!("group: {e}")))?;
            Some(key.to_string())
        }
        None => None,
    };

    let base_metric = MetricSpec::new(name.clone(), g, domain, orientation);
    let metric = match &conformal_factor {
        Some(f) => conformal_rescale(&base_metric, f),
        None => base_metric.clone(),
    };
    Ok(SpecFile {
        name,
        metric,
        base_metric,
        conformal_factor,
        frame,
        group,
    })
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Schema(key.to_string()))
}

fn wrong_type(key: &str, expected: &str) -> Error {
    Error::Schema(format!("{key}: expected {expected}"))
}

fn expression(key: &str, v: &Value) -> Result<Expr> {
    // Plain numbers are accepted as constant expressions.
    if let Some(c) = v.as_f64() {
        return Ok(Expr::constant(c));
    }
    let s = v
        .as_str()
        .ok_or_else(|| wrong_type(key, "an expression string"))?;
    parse(s).map_err(|e| locate(key, e))
}

/// Attaches the offending key to a parse failure.
fn locate(key: &str, e: Error) -> Error {
    match e {
        Error::Syntax { offset, message } => Error::Syntax {
            offset,
            message: format!("{key}: {message}"),
        },
        Error::UnknownSymbol { name, offset } => Error::Syntax {
            offset,
            message: format!("{key}: unknown symbol `{name}`"),
        },
        other => other,
    }
}

fn point(obj: &Map<String, Value>, key: &str) -> Result<[f64; 3]> {
    let full = format!("domain.{key}");
    let arr = obj
        .get(key)
        .ok_or_else(|| Error::Schema(full.clone()))?
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| wrong_type(&full, "an array of 3 numbers"))?;
    let mut p = [0.0; 3];
    for (slot, v) in p.iter_mut().zip(arr) {
        *slot = v.as_f64().ok_or_else(|| wrong_type(&full, "numbers"))?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_load() {
        for (name, text) in CATALOG {
            let s = parse_spec(text).unwrap();
            assert_eq!(s.name, name);
        }
        assert!(load_spec("flat.json").is_ok());
        assert_eq!(load_spec("nope.json").unwrap_err().name(), "IoError");
    }

    #[test]
    fn missing_component_is_named() {
        let text = CATALOG[0].1.replace("\"g23\": \"0\", ", "");
        assert_eq!(parse_spec(&text).unwrap_err(), Error::Schema("g23".into()));
    }

    #[test]
    fn syntax_error_carries_key_and_offset() {
        let text = CATALOG[0]
            .1
            .replace("\"g22\": \"1\"", "\"g22\": \"1 + *x1\"");
        match parse_spec(&text).unwrap_err() {
            Error::Syntax { offset, message } => {
                assert!(message.starts_with("g22"));
                assert_eq!(offset, 4);
            }
            e => panic!("{e:?}"),
        }
    }
}
