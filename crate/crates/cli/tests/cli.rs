use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn prodec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodec"))
        .args(args)
        .output()
        .expect("spawn prodec")
}

fn small_config(dir: &Path) -> String {
    let cfg = dir.join("small.cfg");
    fs::write(
        &cfg,
        "# small product code\ncode = product\nm = 3\ns = 3\nsnr_db = 2, 4\nshe_count = 0, 5\n\
         min_errors = 100\nmax_trials = 20\nbatch = 3\n",
    )
    .unwrap();
    cfg.to_string_lossy().into_owned()
}

#[test]
fn inspect_cpg() {
    let out = prodec(&["inspect", "--code", "cpg"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("length: 32767"), "{text}");
    assert!(text.contains("rate: 0.7169"), "{text}");
    assert!(text.contains("column weight: 33"), "{text}");
    assert!(text.contains("k=813 rank=244"), "{text}");
}

#[test]
fn inspect_unknown_code_is_config_error() {
    assert_eq!(prodec(&["inspect", "--code", "turbo"]).status.code(), Some(1));
}

#[test]
fn selftest_passes() {
    let out = prodec(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 4, "{text}");
}

#[test]
fn missing_config_exits_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_csv = dir.path().join("out.csv");
    let out = prodec(&[
        "sweep",
        "--config",
        dir.path().join("absent.cfg").to_str().unwrap(),
        "--out",
        out_csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out_csv.exists());
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "snr_db = 3\nbogus = 1\n").unwrap();
    let out = prodec(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn usage_error_exits_1() {
    assert_eq!(prodec(&["sweep"]).status.code(), Some(1));
    assert_eq!(prodec(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let target = dir.path().join("no-such-dir").join("out.csv");
    let out = prodec(&["sweep", "--config", &cfg, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let csv = dir.path().join("r.csv");
    let out = prodec(&["sweep", "--config", &cfg, "--out", csv.to_str().unwrap(), "--seed", "9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "snr_db,she_count,she_amplitude,code_id,bits,bit_errors,ber,frames,frame_errors,fer,ci_low,ci_high,seed"
    );
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[3], "product-m3-s3");
        assert_eq!(f[12], "9");
        let (ber, lo, hi): (f64, f64, f64) = (f[6].parse().unwrap(), f[10].parse().unwrap(), f[11].parse().unwrap());
        assert!(lo <= ber && ber <= hi);
    }
    let echo = fs::read_to_string(dir.path().join("r.csv.cfg")).unwrap();
    assert!(echo.contains("seed = 9"));
    assert!(echo.contains("code = product"));
}

#[test]
fn stdout_output_and_job_count_invariance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let one = prodec(&["sweep", "--config", &cfg, "--jobs", "1"]);
    let three = prodec(&["sweep", "--config", &cfg, "--jobs", "3"]);
    assert!(one.status.success() && three.status.success());
    assert!(!one.stdout.is_empty());
    assert_eq!(one.stdout, three.stdout);
}
