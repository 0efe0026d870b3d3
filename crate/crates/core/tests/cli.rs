use awdaha::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("awdaha").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn hecke_suite_passes_with_json_report() {
    let (code, out, _) = call(&["--json", "verify", "--suite", "hecke"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "pass");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["name"].as_str().unwrap().starts_with("hecke.")));
}

#[test]
fn exact_reports_are_byte_identical() {
    let args = ["--json", "--max-degree", "4", "verify", "--suite", "polys"];
    let (c1, a, _) = call(&args);
    let (c2, b, _) = call(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn float_backend_polynomial_suite() {
    let (code, out, _) = call(&[
        "--backend",
        "float",
        "--max-degree",
        "3",
        "verify",
        "--suite",
        "polys",
    ]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn symmetric_polynomial_text() {
    let (code, out, _) = call(&["poly", "--kind", "sym", "--m", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("9085/12096*x^0"), "{out}");
}

#[test]
fn construction_methods_print_the_same_polynomial() {
    let (_, tri, _) = call(&[
        "poly",
        "--kind",
        "nonsym",
        "--m",
        "-3",
        "--method",
        "triangular",
    ]);
    let (_, rod, _) = call(&[
        "poly",
        "--kind",
        "nonsym",
        "--m",
        "-3",
        "--method",
        "rodrigues",
    ]);
    let (_, ser, _) = call(&[
        "poly", "--kind", "nonsym", "--m", "-3", "--method", "series",
    ]);
    assert_eq!(tri, rod);
    assert_eq!(tri, ser);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["--params", "1,2,3", "norms"]).0, 2);
    assert_eq!(call(&["poly", "--kind", "sym", "--m", "-1"]).0, 2);
}

#[test]
fn forward_then_inverse_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let fpath = dir.path().join("f.txt");
    std::fs::write(&fpath, "1*x^-2 + 3*x^0 + 1*x^2").unwrap();
    let (code, fwd, err) = call(&[
        "--precision",
        "128",
        "transform",
        "--input",
        fpath.to_str().unwrap(),
        "--direction",
        "fwd",
    ]);
    assert_eq!(code, 0, "{err}");
    let gpath = dir.path().join("g.json");
    std::fs::write(&gpath, &fwd).unwrap();
    let (code, back, err) = call(&[
        "--precision",
        "128",
        "transform",
        "--input",
        gpath.to_str().unwrap(),
        "--direction",
        "inv",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(!back.trim().is_empty());
}

#[test]
fn constant_term_reports_agreement() {
    let (code, out, _) = call(&["--json", "constant-term"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["rel_err"].as_f64().unwrap() < 1e-20);
}
