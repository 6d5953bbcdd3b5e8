use std::process::Command;

fn rankin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rankin")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn verify_matches_golden_and_repeats() {
    let (code, a, _) = rankin(&["verify", "--seed", "0"]);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a, golden("verify_seed0.txt"));
    let (_, b, _) = rankin(&["verify", "--seed", "0"]);
    assert_eq!(a, b);
}

#[test]
fn only_one_check() {
    let (code, s, _) = rankin(&["verify", "--only", "hecke.cyclonorm"]);
    assert_eq!(code, 0);
    assert_eq!(s, golden("verify_only_cyclonorm.txt"));
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 1);
}

#[test]
fn negative_controls_fail_without_failing_the_run() {
    let (code, s, _) = rankin(&["verify", "--negative-controls"]);
    assert_eq!(code, 0, "{s}");
    let fails: Vec<&str> = s.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 3, "{s}");
    assert!(fails.iter().all(|l| l.contains("control.")));
}

#[test]
fn failing_check_sets_exit_code() {
    let (code, s, _) = rankin(&["verify", "--only", "control.cg_sign"]);
    assert_eq!(code, 1);
    assert!(s.contains("FAIL control.cg_sign"));
}

#[test]
fn report_written_to_out() {
    let path = std::env::temp_dir().join(format!("rankin-report-{}.txt", std::process::id()));
    let (code, s, _) = rankin(&["verify", "--only", "tsym.twist", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), s);
    assert!(s.contains("# seed 5"));
}

#[test]
fn padic_l_reports_precision() {
    let (code, s, e) = rankin(&[
        "padic-l", "--f", "11a.nf", "--g", "44a-wt1.nf", "--p", "3", "--prec", "6", "--qprec", "240", "--j", "0", "--aux-level", "44",
    ]);
    assert_eq!(code, 0, "{e}");
    let first = s.lines().next().unwrap();
    assert!(first.starts_with("Lp = ") && first.contains(" mod 3^"), "{first}");
    assert!(s.contains("# provenance"));
}

#[test]
fn bad_inputs_are_errors() {
    let (code, _, e) = rankin(&["big-log", "--phi", "does-not-exist.txt"]);
    assert_eq!(code, 2);
    assert!(e.contains("does-not-exist.txt"));
    let (code, _, _) = rankin(&["mazur-zeta", "--d", "7", "--prec", "0"]);
    assert_eq!(code, 2);
}
