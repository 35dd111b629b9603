use std::path::PathBuf;
use std::process::{Command, Output};

fn cvwitness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvwitness")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cvwitness-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witness_prints_json_lines() {
    let o = cvwitness(&["witness", "--witness", "d124", "--state", "tmsv", "--param", "lambda=0.2,0.4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["witness"], "d124");
    assert_eq!(lines[1]["params"]["lambda"], 0.4);
    let (v, o) = (lines[1]["value"].as_f64().unwrap(), lines[1]["oracle"].as_f64().unwrap());
    assert!((v - o).abs() < 1e-8);
}

#[test]
fn sweep_writes_csv_schema() {
    let out = scratch("sweep.csv");
    let o = cvwitness(&[
        "sweep", "--witness", "d24", "--state", "tmsv_pair", "--param", "lambda1=0.1:0.3:0.1", "--param", "lambda2=0.5",
        "--loss", "a1=0.9", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param_lambda1,param_lambda2,value,oracle,abs_err,leakage"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let abs_err: f64 = r.split(',').nth(4).unwrap().parse().unwrap();
        assert!(abs_err < 1e-8);
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = scratch("run.json");
    std::fs::write(&cfg, r#"{"witness": "d1913", "state": "noon", "params": {"n": 1, "alpha": [0.6, 0.8]}}"#).unwrap();
    let o = cvwitness(&["witness", "--config", cfg.to_str().unwrap(), "--param", "alpha=0.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert!((v["value"].as_f64().unwrap() + 0.375).abs() < 1e-12);
}

#[test]
fn verify_passes_and_filters() {
    let o = cvwitness(&["verify", "--witness", "d1913"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.starts_with("check,value,oracle,abs_err,tol,status"));
    assert_eq!(text.lines().count(), 4);
    assert!(!text.contains("FAIL"));
}

#[test]
fn sample_reports_estimate_and_counts() {
    let dir = scratch("counts");
    let o = cvwitness(&[
        "sample", "--witness", "d1913_agarwal", "--state", "noon", "--param", "n=2", "--param", "alpha=0.6", "--shots", "20000",
        "--seed", "4", "--counts-dir", dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let (est, se, exact) = (v["value"].as_f64().unwrap(), v["stderr"].as_f64().unwrap(), v["oracle"].as_f64().unwrap());
    assert!((est - exact).abs() < 5.0 * se);
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 3);
    let again = cvwitness(&[
        "sample", "--witness", "d1913_agarwal", "--state", "noon", "--param", "n=2", "--param", "alpha=0.6", "--shots", "20000",
        "--seed", "4",
    ]);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn errors_exit_with_code_two() {
    for args in [
        vec!["witness", "--witness", "nope", "--state", "tmsv", "--param", "lambda=0.3"],
        vec!["witness", "--witness", "d124", "--state", "tmsv"],
        vec!["witness", "--witness", "d124", "--state", "tmsv", "--param", "lambda=1.2"],
        vec!["sweep", "--preset", "fig9"],
        vec!["sample", "--witness", "duan", "--state", "tmsv", "--param", "lambda=0.3"],
        vec!["frobnicate"],
    ] {
        let o = cvwitness(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
