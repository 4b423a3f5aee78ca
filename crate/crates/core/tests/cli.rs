use std::process::{Command, Output};

use regmix::gof::{GofReport, PROPOSED};

fn regmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regmix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn fit_all_reports_five_rows_with_aic_identity() {
    let o = regmix(&[
        "fit",
        "--data",
        "builtin:ex2",
        "--model",
        "all",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: GofReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.rows.len(), 5);
    let row = report.row(PROPOSED).unwrap();
    assert_eq!(
        row.aic.unwrap(),
        2.0 * 2.0 - 2.0 * -row.neg_log_lik.unwrap()
    );
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap() + "\n",
        stdout(&o)
    );
}

#[test]
fn single_model_fit_is_stationary() {
    let o = regmix(&[
        "fit",
        "--data",
        "builtin:ex1",
        "--model",
        "reg",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["converged"], true);
    assert!(v["gradient_norm"].as_f64().unwrap() <= 1e-6);

    let o = regmix(&["fit", "--data", "builtin:ex3", "--model", "expgl"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("EXPGL"));
}

#[test]
fn fit_errors() {
    let o = regmix(&["fit", "--data", "missing.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.txt"));
    assert!(o.stdout.is_empty());
    assert_eq!(regmix(&["fit"]).status.code(), Some(2));
    assert_eq!(
        regmix(&["fit", "--data", "builtin:ex1", "--model", "weibull"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(regmix(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sampling_is_reproducible_and_refits() {
    let args = [
        "sample", "--alpha", "3", "--theta", "0.05", "--n", "3", "--count", "5", "--seed", "7",
    ];
    let a = regmix(&args);
    let b = regmix(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("draws.txt");
    let path_str = path.to_str().unwrap();
    let o = regmix(&[
        "sample", "--alpha", "3", "--theta", "0.05", "--count", "5000", "--seed", "11", "--output",
        path_str,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = regmix(&[
        "fit", "--data", path_str, "--model", "reg", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let alpha = v["params"]["alpha"].as_f64().unwrap();
    let theta = v["params"]["theta"].as_f64().unwrap();
    assert!((alpha - 3.0).abs() / 3.0 < 0.05, "alpha {alpha}");
    assert!((theta - 0.05).abs() / 0.05 < 0.05, "theta {theta}");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.txt");
    let o = regmix(&[
        "sample",
        "--alpha",
        "-1",
        "--theta",
        "0.05",
        "--count",
        "5",
        "--seed",
        "7",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
    assert_eq!(
        regmix(&["moments", "--alpha", "1", "--theta", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        regmix(&["reliability", "--topology", "ring"]).status.code(),
        Some(2)
    );
}

#[test]
fn curves() {
    let o = regmix(&[
        "curve", "--what", "pdf", "--alpha", "1", "--theta", "2", "--min", "0.1", "--max", "5",
        "--points", "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,value"));
    for line in lines {
        let (x, v) = line.split_once(',').unwrap();
        let (x, v): (f64, f64) = (x.parse().unwrap(), v.parse().unwrap());
        assert!((v - 2.0 * (-2.0 * x).exp()).abs() < 1e-12);
    }

    let o = regmix(&[
        "curve", "--what", "hazard", "--alpha", "1", "--theta", "0.7", "--n", "5",
    ]);
    for line in stdout(&o).lines().skip(1) {
        assert_eq!(line.split_once(',').unwrap().1.parse::<f64>().unwrap(), 0.7);
    }

    let o = regmix(&[
        "curve", "--what", "pdf", "--alpha", "0.5", "--theta", "1", "--min", "0.01", "--max", "10",
    ]);
    for line in stdout(&o).lines().skip(1) {
        let v: f64 = line.split_once(',').unwrap().1.parse().unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }

    let o = regmix(&[
        "curve", "--what", "hazard", "--alpha", "3", "--theta", "1", "--min", "1", "--max", "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",overflow"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn reliability_table_defaults() {
    let o = regmix(&["reliability"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,exact,estimate,abs_error");
    assert_eq!(lines[1], "0,1.000000,1.000000,0.000000");
    assert_eq!(lines.len(), 12);
    assert!(String::from_utf8_lossy(&o.stderr).contains("0.508866"));
    assert!(!String::from_utf8_lossy(&o.stderr).contains("exceed"));

    let o = regmix(&["reliability", "--topology", "series", "--trials", "20000"]);
    let p = regmix::RegParams::new(3.0, 0.05, 3).unwrap();
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let r = p.reliability(cols[0]).unwrap();
        assert!((cols[1] - r * r).abs() < 5e-7);
    }
}

#[test]
fn moments_output() {
    let o = regmix(&[
        "moments", "--alpha", "1", "--theta", "0.5", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["summary"]["mean"].as_f64().unwrap() - 2.0).abs() < 1e-14);
    assert!((v["summary"]["kurtosis"].as_f64().unwrap() - 9.0).abs() < 1e-10);
    let o = regmix(&["moments", "--alpha", "3", "--theta", "0.05"]);
    assert!(stdout(&o).contains("59.995681"));
}

#[test]
fn help_exits_cleanly() {
    let o = regmix(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["fit", "sample", "curve", "reliability", "moments"] {
        assert!(stdout(&o).contains(sub));
    }
}
