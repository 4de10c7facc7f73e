use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str], config: &str, dir: &Path) -> (i32, String) {
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclohc"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .env_remove("CYCLOHC_SEED")
        .output()
        .unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str], config: &str) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out) = run(&a, config, dir.path());
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

#[test]
fn relations_rank_two_symbolic() {
    let (code, v) = json(&["relations"], "n=2\nell=2\n");
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    let fams = v["report"]["families"].as_array().unwrap();
    assert_eq!(fams.len(), 5);
    assert!(fams.iter().all(|f| f["status"] == "PASS"), "{:?}", fams);
}

#[test]
fn relations_malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["relations"], "n=2\nell=3\nc=1\n", dir.path()).0, 2);
    assert_eq!(run(&["relations"], "n=2\nunknown=1\n", dir.path()).0, 2);
    assert_eq!(run(&["bessel"], "C=1,1\n", dir.path()).0, 2);
}

#[test]
fn relations_rank_one_type_a() {
    let (code, v) = json(&["relations"], "n=1\nell=1\n");
    assert_eq!(code, 0);
    let fams = v["report"]["families"].as_array().unwrap();
    let diag = fams.iter().find(|f| f["family"] == "[y,x] diagonal").unwrap();
    assert_eq!(diag["status"], "PASS");
    let offdiag = fams.iter().find(|f| f["family"] == "[y,x] off-diagonal").unwrap();
    assert_eq!(offdiag["status"], "SKIP");
}

#[test]
fn hc_constants_and_bootstrap_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(&["hc"], "ell_max=3\nm_max=2\n", dir.path());
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("calibration ran first"));
    assert!(out.contains("ell=3 hc: PASS constant 27"));
    assert!(out.contains("ell=2 d_2: PASS constant 16"));
}

#[test]
fn hc_double_root_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = run(
        &["hc"],
        "ell=2\nC=0,0\nm_max=1\nalpha_action=1\nc_sign=-1\n",
        dir.path(),
    );
    assert!(out.contains("kernel: SKIP"), "{}", out);
    assert_eq!(code, 0, "{}", out);
}

#[test]
fn bessel_rank_one_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let cfg = "n=1\nell=2\nC=0,0\nlambda=1\nx=0.5,1,1.5,2\n";
    let (code, out) = run(&["bessel", "--out", out_dir.to_str().unwrap()], cfg, dir.path());
    assert_eq!(code, 0, "{}", out);
    let csv = std::fs::read_to_string(out_dir.join("bessel.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("x,series_re,series_im,quad_re,quad_im,stderr\n"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("bessel.json")).unwrap()).unwrap();
    assert!(v["report"]["max_abs_difference"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["config"]["C"], "0,0");
}

#[test]
fn bessel_zero_point_uses_series() {
    let (code, v) = json(&["bessel"], "n=1\nell=2\nC=-1,1\nx=0,1,2\n");
    assert_eq!(code, 0);
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["series"][0], 1.0);
    assert!(rows[0]["quadrature"].is_null());
    assert!(rows[0]["note"].as_str().unwrap().contains("x = 0"));
}

#[test]
fn bessel_rank_two_type_a_reports_fit() {
    // the fitted constant and z-scores are reported; the fit fails because the
    // integral divided by delta is antisymmetric (see the acceptance notes)
    let cfg = "n=2\nell=1\nk=0\nlambda=0.5,1\nx=0.4,1;0.6,1.3;0.2,0.7;0.9,1.5\nsamples=100000\n";
    let (code, v) = json(&["bessel", "--seed", "3"], cfg);
    assert_eq!(code, 1);
    let cc = &v["report"]["cross_check"];
    assert_eq!(cc["z_scores"].as_array().unwrap().len(), 4);
    assert!(cc["constant"][0].as_f64().unwrap().is_finite());
}

#[test]
fn rerun_is_byte_identical() {
    let cfg = "n=2\nell=2\nk=0\nC=-1,1\nlambda=0.5,1\nx=0.4,1.1;0.6,1.3;0.3,0.9\nsamples=5000\nseed=9\n";
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["bessel", "--json"], cfg, dir.path());
    let b = run(&["bessel", "--json"], cfg, dir.path());
    assert_eq!(a, b);
    let c = run(&["bessel", "--json", "--seed", "10"], cfg, dir.path());
    assert_ne!(a.1, c.1);
}

#[test]
fn calibrate_selects_unique_flags() {
    let (code, v) = json(&["calibrate"], "");
    assert_eq!(code, 0);
    assert_eq!(v["report"]["calibration"]["unique"], true);
    assert_eq!(v["report"]["calibration"]["selected"]["alpha_action"], 1);
    assert_eq!(v["report"]["calibration"]["selected"]["c_sign"], -1);
}
