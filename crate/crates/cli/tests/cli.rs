use std::fs;
use std::process::{Command, Output};

fn shor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shor-noise"))
        .args(args)
        .output()
        .unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn exit_code_two_for_bad_arguments() {
    for args in [
        &["spectrum", "--N", "15", "--y", "6"][..],
        &["spectrum", "--N", "15", "--y", "7", "--r", "4"],
        &["spectrum", "--L", "7"],
        &["spectrum", "--L", "7", "--r", "4", "--unknown"],
        &["sweep", "--N", "15", "--y", "7", "--model", "systematic"],
        &["factor", "--L", "7", "--r", "4"],
        &["circuit", "--L", "30", "--r", "4"],
    ] {
        let out = shor(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", text(&out.stderr));
    }
}

#[test]
fn exit_code_one_for_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("missing").join("x.csv");
    let out = shor(&["spectrum", "--L", "7", "--r", "4", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(text(&out.stderr).starts_with("error:"));
}

#[test]
fn help_exits_zero() {
    let out = shor(&["spectrum", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(text(&out.stdout).contains("--delta0"));
}

#[test]
fn stdout_carries_csv_without_out() {
    let out = shor(&["spectrum", "--L", "5", "--r", "4"]);
    assert!(out.status.success());
    let csv = text(&out.stdout);
    assert!(csv.starts_with("c,probability\n"));
    assert_eq!(csv.lines().count(), 33);
    assert!(text(&out.stderr).contains("peaks=0,8,16,24"));
}

#[test]
fn spectrum_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("systematic.csv");
    let out = shor(&[
        "spectrum",
        "--L",
        "7",
        "--r",
        "4",
        "--model",
        "systematic",
        "--delta0",
        "0.05",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(text(&out.stdout).contains("peaks=31,63,95,127 shifts=-1,-1,-1,-1"));
    assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 129);
    let meta = fs::read_to_string(dir.path().join("systematic.csv.meta")).unwrap();
    assert!(meta.contains("command=spectrum"));
    assert!(meta.contains("q=128"));
    assert!(meta.contains("model=systematic"), "{meta}");
}

#[test]
fn ensemble_writes_std_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("uniform.csv");
    let out = shor(&[
        "ensemble",
        "--L",
        "7",
        "--r",
        "4",
        "--model",
        "uniform",
        "--smax",
        "0.01",
        "--realizations",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let std_csv = fs::read_to_string(dir.path().join("uniform.csv.std.csv")).unwrap();
    assert!(std_csv.starts_with("c,std\n"));
    assert_eq!(std_csv.lines().count(), 129);
    assert!(fs::read_to_string(dir.path().join("uniform.csv.meta"))
        .unwrap()
        .contains("realizations=10"));
}

#[test]
fn sweep_reports_threshold() {
    let out = shor(&[
        "sweep",
        "--N",
        "15",
        "--y",
        "7",
        "--L",
        "7",
        "--model",
        "systematic",
        "--magnitudes",
        "0:0.3:0.005",
        "--multiplier-bound",
        "1",
    ]);
    assert!(out.status.success());
    let csv = text(&out.stdout);
    assert!(csv.starts_with("magnitude,success_probability\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 62);
    assert!(
        text(&out.stderr).starts_with("threshold=0.265 eta=0.5 baseline=0.5"),
        "{}",
        text(&out.stderr)
    );
}

#[test]
fn factor_finds_three_and_five() {
    let out = shor(&["factor", "--N", "15", "--y", "7", "--shots", "100", "--seed", "1"]);
    assert!(out.status.success());
    assert!(text(&out.stderr).contains("r=4 factors=3,5"));
}

#[test]
fn factor_reports_retry_for_bad_base() {
    // 14 = -1 (mod 15) has order 2 and y^(r/2) = -1.
    let out = shor(&["factor", "--N", "15", "--y", "14", "--shots", "10", "--seed", "3"]);
    assert!(out.status.success());
    assert!(text(&out.stderr).contains("retry with new y"), "{}", text(&out.stderr));
}
