use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shiftmoment"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).env_remove("SHIFTMOMENT_DATA_DIR").output().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zeta_at_first_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zeta", "--t", "14.1347251417"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("zeta.json"));
    assert!(v["abs"].as_f64().unwrap() <= 1e-8);
    assert!(String::from_utf8_lossy(&o.stdout).contains("|ζ(s)|"));
}

#[test]
fn divisor_records_one_row_per_shift() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["divisor", "--X", "20000", "--r", "1,5,42", "--out", "res", "--name", "div"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("res/div.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "X,r,sum,main,error,normalized_error");
    assert!(lines[3].starts_with("20000,42,"));
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let o = run(dir.path(), &["compare", "--T1", "100", "--T2", "160", "--alpha", "0", "--beta", "3", "--name", name]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for ext in ["json", "csv"] {
        let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert_eq!(a, b);
    }
    let v = json(&dir.path().join("a.json"));
    assert!(v["rel_diff"].as_f64().unwrap().is_finite());
    assert_eq!(v["wall_seconds"].as_f64().unwrap(), 0.0);
}

#[test]
fn worker_count_does_not_move_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut vals = Vec::new();
    for w in ["1", "3"] {
        let o = run(
            dir.path(),
            &["moment", "--T1", "200", "--T2", "260", "--alpha", "0", "--beta", "0", "--window", "bump", "--Delta", "10", "--workers", w, "--name", w],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        vals.push(json(&dir.path().join(format!("{w}.json")))["value"].as_f64().unwrap());
    }
    assert!((vals[0] - vals[1]).abs() <= 1e-12 * vals[0].abs());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.cfg"), "t = 1000\nalpha = 0\nbeta = 5\n").unwrap();
    let o = run(dir.path(), &["main-term", "--config", "run.cfg", "--beta", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("main-term.json"));
    assert_eq!(v["beta"].as_f64().unwrap(), 2.0);
    let sum = v["diag"].as_f64().unwrap() + v["offdiag"].as_f64().unwrap();
    assert!((sum - v["q2"].as_f64().unwrap()).abs() <= 1e-12 * sum.abs());
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["zeta"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["zeta", "--t", "1", "--nope", "2"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["moment", "--T1", "1", "--T2", "2", "--alpha", "0", "--beta", "0", "--window", "tophat"]).status.code(), Some(1));
    std::fs::write(dir.path().join("bad.cfg"), "t = 100\nsurprise = 1\n").unwrap();
    let o = run(dir.path(), &["zeta", "--config", "bad.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("surprise"));
    // nothing was computed or written
    assert!(!dir.path().join("zeta.json").exists());
}

#[test]
fn missed_tolerance_exits_two_with_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["afe", "--t", "100", "--delta", "0", "--Q", "25", "--cutoff-sigma", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("achieved") && err.contains("requested"), "{err}");
    assert!(dir.path().join("afe.json").exists());
}

fn write_dataset(path: &Path) {
    let hecke: Vec<String> = (1..=64).map(|n| if n == 1 { "1".to_string() } else { "0".to_string() }).collect();
    let body = format!(
        "{{\"source\":\"synthetic\",\"n_coef\":64,\"entries\":[{{\"kappa\":9.533695261353557,\"alpha\":0.3,\"parity\":-1,\"H_half\":0.0,\"hecke\":[{}]}}]}}",
        hecke.join(",")
    );
    std::fs::write(path, body).unwrap();
}

#[test]
fn spectral_from_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir(&data).unwrap();
    write_dataset(&data.join("maass.json"));
    let o = bin()
        .current_dir(dir.path())
        .env("SHIFTMOMENT_DATA_DIR", &data)
        .args(["spectral", "--dataset", "maass.json", "--delta", "2", "--T1", "1000", "--T2", "2000", "--Delta", "300", "--y-max", "40"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.path().join("spectral.json"));
    // odd form: H_j(1/2) = 0, no discrete contribution
    assert_eq!(v["ed"].as_f64().unwrap(), 0.0);
    assert_eq!(v["entries"].as_u64().unwrap(), 1);
    assert!(v["ec"].as_f64().unwrap().is_finite());
}

#[test]
fn fetch_refuses_plain_http() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["spectral", "--dataset", "absent.json", "--delta", "2", "--T1", "1000", "--T2", "2000", "--Delta", "300", "--fetch-url", "http://example.invalid/data"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("https"));
}
