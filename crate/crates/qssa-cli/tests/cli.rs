use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const FIG_FINAL: [&str; 10] = [
    "--k1", "20", "--koff", "10", "--kcat", "10", "--e0", "10", "--s0", "1000",
];

fn qssa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qssa"))
        .args(args)
        .output()
        .expect("spawn qssa")
}

fn ok_stdout(args: &[&str]) -> String {
    let out = qssa(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok_stdout(args)).unwrap()
}

fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let idx = rdr
        .headers()
        .unwrap()
        .iter()
        .position(|h| h == name)
        .unwrap();
    rdr.records()
        .map(|r| r.unwrap()[idx].parse().unwrap())
        .collect()
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn constants_reports_eps_lt() {
    let mut args = vec!["constants"];
    args.extend(FIG_FINAL);
    let v = json(&args);
    assert!((v["eps_lt"].as_f64().unwrap() - 0.1228).abs() < 5e-4);
    assert!(v["eps_t"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["regime_tqssa_qualifier"], "eps_LT");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = qssa(&["simulate", "--badflag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn missing_parameter_is_usage_error() {
    let out = qssa(&["constants", "--k1", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_error_is_one_json_line() {
    let out = qssa(&[
        "constants",
        "--k1",
        "-1",
        "--koff",
        "1",
        "--kcat",
        "1",
        "--e0",
        "1",
        "--s0",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    let v: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(v["error"], "InvalidParameter");
}

#[test]
fn help_exits_zero() {
    let out = qssa(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}

#[test]
fn simulate_writes_trajectory_schema() {
    let mut args = vec!["simulate", "--t-end", "1", "--points", "50"];
    args.extend(FIG_FINAL);
    let text = ok_stdout(&args);
    assert!(text.starts_with("t,s,c,p,e\n"));
    assert_eq!(text.lines().count(), 52);
    let s = column(&text, "s");
    let c = column(&text, "c");
    let p = column(&text, "p");
    for i in 0..s.len() {
        assert!((s[i] + c[i] + p[i] - 1000.0).abs() <= 1e-8 * 1000.0);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        ok_stdout(&[
            "figure",
            "--preset",
            "fig-final",
            "--out",
            d.path().to_str().unwrap(),
        ]);
    }
    assert_eq!(dir_files(a.path()), dir_files(b.path()));

    let fit = |dir: &Path| {
        let mut args = vec![
            "fit",
            "--model",
            "RQSSA",
            "--k1",
            "1",
            "--koff",
            "0.005",
            "--kcat",
            "0.005",
            "--e0",
            "100",
            "--s0",
            "100",
            "--t-end",
            "1000",
            "--noise-sd",
            "1",
            "--seed",
            "7",
            "--free",
            "k_cat=0.02",
            "--out",
        ];
        args.push(dir.to_str().unwrap());
        ok_stdout(&args);
    };
    let (c, d) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    fit(c.path());
    fit(d.path());
    assert_eq!(dir_files(c.path()), dir_files(d.path()));

    let sweep = [
        "sweep",
        "--preset",
        "fig-final",
        "--grid",
        "e0=log:1:100:5",
        "--grid",
        "s0=lin:10:1000:3",
        "--quantity",
        "envelopes",
    ];
    assert_eq!(ok_stdout(&sweep), ok_stdout(&sweep));
}

#[test]
fn figure_final_shows_one_digit_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok_stdout(&[
        "figure",
        "--preset",
        "fig-final",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        stdout.is_empty(),
        "summary goes to the directory when --out is set"
    );
    let names: Vec<String> = dir_files(dir.path()).into_iter().map(|(n, _)| n).collect();
    for f in ["mass_action.csv", "tqssa.csv", "relerr.csv", "summary.json"] {
        assert!(names.iter().any(|n| n == f), "{f} missing from {names:?}");
    }
    let relerr = fs::read_to_string(dir.path().join("relerr.csv")).unwrap();
    assert!(relerr.starts_with("t,c_true,c_reduced,relerr_c,p_true,p_reduced,relerr_p\n"));
    let max = column(&relerr, "relerr_c")
        .into_iter()
        .filter(|x| !x.is_nan())
        .fold(0.0, f64::max);
    assert!(max >= 0.05, "{max}");
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert!(summary["eps_t"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn one_point_sweep_reproduces_constants() {
    let mut args = vec!["constants"];
    args.extend(FIG_FINAL);
    let constants = json(&args);
    let mut args = vec!["sweep", "--format", "json", "--grid", "e0=lin:10:10:1"];
    args.extend(FIG_FINAL);
    let rows = json(&args);
    let row = &rows.as_array().unwrap()[0];
    for (k, v) in constants.as_object().unwrap() {
        assert_eq!(&row[k], v, "{k}");
    }
}

#[test]
fn reverse_error_column_decreases_with_k_m() {
    let text = ok_stdout(&[
        "sweep",
        "--k1",
        "1",
        "--kappa",
        "1",
        "--e0",
        "100",
        "--s0",
        "100",
        "--grid",
        "km=log:1e-4:1e-1:4",
        "--quantity",
        "rqssa_error",
    ]);
    let err = column(&text, "rqssa_error");
    assert_eq!(err.len(), 4);
    // rows run from small to large K_M
    assert!(err.windows(2).all(|w| w[0] < w[1]), "{err:?}");
}

#[test]
fn residual_doubles_with_e0() {
    let text = ok_stdout(&[
        "sweep",
        "--k1",
        "1",
        "--koff",
        "1",
        "--kcat",
        "1",
        "--s0",
        "10",
        "--grid",
        "e0=log:0.01:0.02:2",
        "--quantity",
        "invariance_residual",
    ]);
    let r = column(&text, "invariance_residual");
    assert!((r[1] / r[0] - 2.0).abs() <= 0.2, "{r:?}");
}

#[test]
fn oversized_grid_is_rejected() {
    let out = qssa(&[
        "sweep",
        "--preset",
        "fig-final",
        "--grid",
        "e0=lin:1:2:10",
        "--grid",
        "s0=lin:1:2:10",
        "--cap",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("GridTooLarge"));
}

#[test]
fn fit_from_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("curve.csv");
    let mut text = String::from("t,p\n");
    for i in 1..=40 {
        let t = i as f64 * 5.0;
        text.push_str(&format!("{t},{}\n", 100.0 * -(-0.02 * t).exp_m1()));
    }
    fs::write(&data, text).unwrap();
    let v = json(&[
        "fit",
        "--model",
        "RQSSA",
        "--data",
        data.to_str().unwrap(),
        "--s0",
        "100",
        "--free",
        "k_cat=0.05",
        "--known",
        "k_m=0.01",
        "--known",
        "e0=100",
    ]);
    assert_eq!(v["converged"], true);
    assert!((v["estimates_k_cat"].as_f64().unwrap() / 0.02 - 1.0).abs() < 1e-6);
    assert_eq!(v["regime_rqssa_verdict"], "valid");

    fs::write(&data, "time,p\n1,2\n").unwrap();
    let out = qssa(&[
        "fit",
        "--model",
        "RQSSA",
        "--data",
        data.to_str().unwrap(),
        "--s0",
        "1",
        "--free",
        "k_cat=1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Input"));
}

#[test]
fn bounds_report_has_documented_keys() {
    let mut args = vec!["bounds", "--kind", "TQSSA_NULLCLINE"];
    args.extend(FIG_FINAL);
    let v = json(&args);
    for k in [
        "kind",
        "A",
        "r",
        "B",
        "vacuous",
        "holds",
        "max_violation",
        "limsup_estimate",
        "eps_D",
        "eps_L",
        "eps_LT",
    ] {
        assert!(v.get(k).is_some(), "{k}");
    }
    assert_eq!(v["holds"], true);
    assert!((v["B"].as_f64().unwrap() - 4.4955).abs() < 1e-3);
    let ls = v["limsup_estimate"].as_f64().unwrap();
    assert!((0.0..=4.4955).contains(&ls));

    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["bounds", "--out", dir.path().to_str().unwrap()];
    args.extend(FIG_FINAL);
    ok_stdout(&args);
    let margins = fs::read_to_string(dir.path().join("margins_tqssa_nullcline.csv")).unwrap();
    assert!(margins.starts_with("t,quantity,envelope,margin\n"));
    let all: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bounds.json")).unwrap()).unwrap();
    assert_eq!(all.as_array().unwrap().len(), 6);
    assert!(all.as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn phase_reports_transcritical_point() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(&[
        "phase",
        "--k1",
        "1",
        "--koff",
        "1",
        "--kcat",
        "1",
        "--e0",
        "1",
        "--s0",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let nc = fs::read_to_string(dir.path().join("nullclines.csv")).unwrap();
    assert!(nc.starts_with("s,c_nullcline,s_nullcline\n"));
    let crit: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("critical.json")).unwrap())
            .unwrap();
    assert_eq!(crit["normal_form_a"].as_f64(), Some(1.0));
    assert_eq!(crit["normal_form_b"].as_f64(), Some(-1.0));
    assert!(dir.path().join("trajectory.csv").exists());
}

#[test]
fn reduce_writes_relerr_alongside() {
    let dir = tempfile::tempdir().unwrap();
    ok_stdout(&[
        "reduce",
        "--preset",
        "fig-21-right",
        "--kind",
        "EXTENDED",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let reduced = fs::read_to_string(dir.path().join("reduced.csv")).unwrap();
    assert!(reduced.starts_with("t,s,c,p,e\n"));
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["kind"], "EXTENDED");
    assert!(dir.path().join("relerr.csv").exists());
}
