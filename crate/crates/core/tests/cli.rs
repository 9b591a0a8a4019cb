use std::process::Command;

use cottonlab::cli::{load_spec, run, EXIT_FAILED, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};
use cottonlab::geometry::curvature_packet;
use cottonlab::quad::charts::berger_chart;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cottonlab").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn closed_cs_of_so3() {
    let (code, out, _) = cli(&["cs", "--group", "so3", "--method", "closed"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["cs"], -0.5);
}

#[test]
fn quadrature_cs_reports_error_against_closed_form() {
    let (code, out, _) = cli(&[
        "cs",
        "--group",
        "berger:t=0.5",
        "--method",
        "quadrature",
        "--order",
        "16",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!((v["cs"].as_f64().unwrap() + 1.25).abs() < 1e-8);
    assert!(v["error"].as_f64().unwrap() < 1e-8);
    let (code, _, err) = cli(&["cs", "--group", "heisenberg", "--method", "quadrature"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn cotton_on_flat_and_perturbed() {
    let (code, out, _) = cli(&["cotton", "--spec", "flat.json", "--samples", "10"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["maxNorm"], 0.0);
    assert_eq!(v["passed"], true);
    let (code, out, _) = cli(&["cotton", "--spec", "perturbed", "--samples", "10"]);
    assert_eq!(code, EXIT_FAILED);
    assert!(json(&out)["maxNorm"].as_f64().unwrap() > 1e-3);
}

#[test]
fn hyperbolic_scalar_curvature() {
    let (code, out, _) = cli(&[
        "curvature",
        "--spec",
        "hyperbolic",
        "--point",
        "0.2,-0.3,1.1",
    ]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!((v["scal"].as_f64().unwrap() + 6.0).abs() < 1e-10);
    for key in [
        "point",
        "g",
        "Gamma",
        "Riem",
        "Ric",
        "Sch",
        "cottonForm",
        "cottonTensor",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn berger_spec_matches_chart() {
    // The catalog spec writes the t = 2 Berger metric in Euler angles; the
    // scalar curvature is constant and must agree with the chart.
    let spec = load_spec("berger").unwrap();
    let a = curvature_packet(&spec.metric, &[0.4, 1.1, 2.0])
        .unwrap()
        .scalar;
    let b = curvature_packet(&berger_chart(2.0), &[0.9, 1.3, 0.4])
        .unwrap()
        .scalar;
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

#[test]
fn verify_suites() {
    let (code, out, _) = cli(&["verify", "--spec", "round-s3-chart"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v = json(&out);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 1);

    let (code, out, _) = cli(&["verify", "--spec", "conformal-flat", "--suite", "conformal"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "specFactor"));

    // The literal sign fails; the report carries the sign-reversed agreement.
    let (code, out, _) = cli(&["verify", "--spec", "berger.json", "--suite", "variational"]);
    assert_eq!(code, EXIT_FAILED);
    let v = json(&out);
    assert!(v["variational"]["reversedSignError"].as_f64().unwrap() < 1e-4);

    let (code, _, err) = cli(&["verify", "--spec", "flat", "--suite", "variational"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("SchemaError"));
}

#[test]
fn schema_and_syntax_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = write_spec(
        &dir,
        "missing.json",
        r#"{"name": "m", "coords": ["x1","x2","x3"],
            "metric": {"g11": "1", "g12": "0", "g13": "0", "g22": "1", "g33": "1"},
            "domain": {"min": [0,0,0], "max": [1,1,1]}, "orientation": 1}"#,
    );
    let (code, _, err) = cli(&["curvature", "--spec", &missing, "--point", "0.5,0.5,0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("SchemaError") && err.contains("g23"), "{err}");

    let bad = write_spec(
        &dir,
        "bad.json",
        r#"{"name": "m", "coords": ["x1","x2","x3"],
            "metric": {"g11": "1 + sin(", "g12": "0", "g13": "0", "g22": "1", "g23": "0", "g33": "1"},
            "domain": {"min": [0,0,0], "max": [1,1,1]}, "orientation": 1}"#,
    );
    let (code, _, err) = cli(&["curvature", "--spec", &bad, "--point", "0.5,0.5,0.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("SyntaxError") && err.contains("g11"), "{err}");

    let (code, _, err) = cli(&[
        "curvature",
        "--spec",
        "/no/such/file.json",
        "--point",
        "0,0,0",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("IoError"));

    let (code, _, _) = cli(&["curvature", "--spec", "flat", "--point", "1,2"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn numeric_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    // sqrt is undefined for x1 < 0.
    let nan = write_spec(
        &dir,
        "nan.json",
        r#"{"name": "nan", "coords": ["x1","x2","x3"],
            "metric": {"g11": "1", "g12": "0", "g13": "0", "g22": "1", "g23": "0", "g33": "1 + 0*sqrt(x1)"},
            "domain": {"min": [-1,-1,-1], "max": [1,1,1]}, "orientation": 1}"#,
    );
    let (code, _, err) = cli(&["curvature", "--spec", &nan, "--point", "-0.5,0,0"]);
    assert_eq!(code, EXIT_NUMERIC, "{err}");

    let degenerate = write_spec(
        &dir,
        "deg.json",
        r#"{"name": "deg", "coords": ["x1","x2","x3"],
            "metric": {"g11": "x1", "g12": "0", "g13": "0", "g22": "1", "g23": "0", "g33": "1"},
            "domain": {"min": [-1,-1,-1], "max": [1,1,1]}, "orientation": 1}"#,
    );
    let (code, _, err) = cli(&["curvature", "--spec", &degenerate, "--point", "-0.5,0,0"]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(err.contains("NotPositiveDefinite"));

    let (code, _, err) = cli(&["curvature", "--spec", "flat", "--point", "3,0,0"]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(err.contains("DomainError"));
}

#[test]
fn lcf_writes_grid_and_refuses_non_lcf() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("grid.json");
    let out_str = out_path.to_str().unwrap();
    let args = [
        "lcf",
        "--spec",
        "conformal-flat",
        "--center",
        "0,0,0",
        "--radius",
        "0.5",
        "--resolution",
        "17",
        "--out",
        out_str,
    ];
    let (code, out, err) = cli(&args);
    assert_eq!(code, EXIT_OK, "{err}");
    let summary = json(&out);
    assert!(summary["diagnostics"]["flatnessResidual"].as_f64().unwrap() < 1e-5);
    let grid = json(&std::fs::read_to_string(&out_path).unwrap());
    assert_eq!(grid["resolution"], 17);
    assert_eq!(grid["X"].as_array().unwrap().len(), 17 * 17 * 17);
    assert_eq!(grid["f"].as_array().unwrap().len(), 17 * 17 * 17);
    assert_eq!(grid["box"]["halfWidth"], 0.5);
    let first = std::fs::read(&out_path).unwrap();
    let (_, out2, _) = cli(&args);
    assert_eq!(out, out2);
    assert_eq!(first, std::fs::read(&out_path).unwrap());

    let (code, _, err) = cli(&[
        "lcf",
        "--spec",
        "perturbed",
        "--center",
        "0,0,0",
        "--radius",
        "0.5",
        "--resolution",
        "9",
        "--x0",
        "0.1,-0.2,0",
        "--out",
        out_str,
    ]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(err.contains("CottonNotZero"), "{err}");

    let (code, _, _) = cli(&[
        "lcf",
        "--spec",
        "flat",
        "--center",
        "0,0,0",
        "--radius",
        "0.5",
        "--resolution",
        "8",
        "--out",
        out_str,
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn binary_output_is_deterministic_across_thread_counts() {
    let bin = env!("CARGO_BIN_EXE_cottonlab");
    let run_with = |threads: &str| {
        Command::new(bin)
            .args(["verify", "--spec", "hyperbolic", "--suite", "cotton"])
            .env("COTTONLAB_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run_with("1");
    let b = run_with("0");
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);

    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["cs"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
}
