use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kgdamp(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_kgdamp"))
        .arg("--config")
        .arg(&cfg)
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "kgdamp failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read_dir_sorted(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().display().to_string();
                files.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

const SHORT: &str = "\
damping.shape = constant
damping.lambda0 = 1
data.amplitude = 0.05
run.t_final = 2
";

#[test]
fn simulate_is_byte_identical_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        ok(kgdamp(dir.path(), SHORT, &["--out", out.to_str().unwrap(), "simulate"]));
    }
    let (fa, fb) = (read_dir_sorted(&a), read_dir_sorted(&b));
    assert_eq!(fa.len(), 2);
    assert_eq!(fa, fb);
}

#[test]
fn sweep_over_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let config = "\
damping.shape = constant
damping.lambda0 = 1
run.t_final = 10
sweep.amplitudes = 0.02, 0.04
";
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(kgdamp(dir.path(), config, &["--out", a.to_str().unwrap(), "sweep"]));
    ok(kgdamp(dir.path(), config, &["--out", b.to_str().unwrap(), "--workers", "1", "sweep"]));
    assert_eq!(read_dir_sorted(&a), read_dir_sorted(&b));

    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    for (row, amp) in rows.iter().zip(["0.02", "0.04"]) {
        assert_eq!(row[col("amplitude")], amp);
        assert_eq!(row[col("label")], "PS_plus");
        assert_eq!(row[col("outcome")], "global");
        let rate: f64 = row[col("lambda_fit")].parse().unwrap();
        assert!(rate > 0.0, "{rate}");
    }
    assert!(a.join("runs/run_000/series.csv").exists());
    assert!(a.join("runs/run_001/summary.json").exists());
}

#[test]
fn half_ground_state_classifies_as_ps_plus() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let config = format!(
        "data.family = scaled_ground_state\ndata.amplitude = 0.5\nground_state.cache = {}\n",
        cache.display()
    );
    let out = dir.path().join("out");
    for _ in 0..2 {
        ok(kgdamp(dir.path(), &config, &["--out", out.to_str().unwrap(), "classify"]));
    }
    let c: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("classification.json")).unwrap()).unwrap();
    assert_eq!(c["label"], "PS_plus");
    let ratio = c["energy"].as_f64().unwrap() / c["h0"].as_f64().unwrap();
    assert!((ratio - 0.4375).abs() < 1e-4, "{ratio}");
    assert!(c["nehari"].as_f64().unwrap() > 0.0);
    assert_eq!(fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn zero_data_stay_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = format!("{SHORT}data.amplitude = 0\n").replace("data.amplitude = 0.05\n", "");
    ok(kgdamp(dir.path(), &config, &["--out", out.to_str().unwrap(), "simulate"]));
    let csv = fs::read_to_string(out.join("series.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let e = header.iter().position(|h| *h == "E").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 21);
    for row in rows {
        let v: f64 = row.split(',').nth(e).unwrap().parse().unwrap();
        assert_eq!(v, 0.0);
    }
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = kgdamp(dir.path(), "run.t_final = 2\ndamping.colour = red\n", &["simulate"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":2") || err.contains("line 2"), "{err}");
    assert!(err.contains("damping.colour"), "{err}");

    let out = kgdamp(dir.path(), "run.t_final = 2\nrun.t_final = 3\n", &["simulate"]);
    assert!(!out.status.success());

    let out = kgdamp(dir.path(), "run.dt = 0.5\n", &["simulate"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("CFL"));
}
