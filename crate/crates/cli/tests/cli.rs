use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn olg(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olg"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("OLG_OUT_DIR")
        .output()
        .expect("run olg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

fn num(report: &str, key: &str) -> f64 {
    value(report, key).parse().unwrap()
}

fn resolved(report: &str) -> &str {
    let at = report.find("# resolved config").expect("resolved block");
    &report[at..]
}

#[test]
fn figure1_tabulates_the_technology() {
    let dir = tempfile::tempdir().unwrap();
    let o = olg(&["figure1"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (k, f) = l.split_once(',').unwrap();
            (k.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(text.lines().next(), Some("k,f"));
    assert_eq!(rows.len(), 401);
    assert_eq!(rows[0], (0.0, 0.0));
    assert_eq!(rows[200].0, 1.0);
    assert!((rows[200].1 - 2.907064).abs() < 1e-6, "{}", rows[200].1);
    assert!(rows.windows(2).all(|w| w[1].1 > w[0].1));
    assert!(fs::read_to_string(dir.path().join("figure1.svg"))
        .unwrap()
        .starts_with("<svg"));
}

#[test]
fn figure1_with_zero_theta_is_cobb_douglas() {
    let dir = tempfile::tempdir().unwrap();
    assert!(olg(&["figure1", "--theta", "0"], dir.path())
        .status
        .success());
    let text = fs::read_to_string(dir.path().join("figure1.csv")).unwrap();
    for line in text.lines().skip(1) {
        let (k, f) = line.split_once(',').unwrap();
        let (k, f): (f64, f64) = (k.parse().unwrap(), f.parse().unwrap());
        assert!((f - 0.25 * k.powf(2.0 / 3.0)).abs() <= 1e-15, "k = {k}");
    }
}

#[test]
fn figure_csv_does_not_depend_on_the_svg_or_jobs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(olg(&["figure1"], dir.path()).status.success());
    let before = fs::read(dir.path().join("figure1.csv")).unwrap();
    fs::remove_file(dir.path().join("figure1.svg")).unwrap();
    assert!(olg(&["figure1", "--jobs", "3"], dir.path())
        .status
        .success());
    assert_eq!(fs::read(dir.path().join("figure1.csv")).unwrap(), before);
    assert!(dir.path().join("figure1.svg").exists());
}

#[test]
fn counterexample_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = olg(&["counterexample"], a.path());
    let ob = olg(&["counterexample"], b.path());
    assert!(
        oa.status.success(),
        "{}",
        String::from_utf8_lossy(&oa.stderr)
    );
    assert!(ob.status.success());
    for f in ["counterexample.csv", "counterexample.svg"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let report = stdout(&oa);
    assert!((num(&report, "R_theta") - 0.9071).abs() < 5e-5);
    assert!((num(&report, "Gd") - 0.9901).abs() < 1e-4);
    assert!(value(&report, "long_run").starts_with("bubbleless"));
    let saved = fs::read_to_string(a.path().join("counterexample_report.txt")).unwrap();
    assert_eq!(saved, report);
    let csv = fs::read_to_string(a.path().join("counterexample.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,k,p,d,R,w,v,b,p_theta,d_theta"));
    assert_eq!(csv.lines().count(), 1002);
}

#[test]
fn failing_premise_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = olg(&["counterexample", "--sigma", "1.0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("FAIL sigma > 1"), "{err}");
    assert!(!dir.path().join("counterexample.csv").exists());

    let o = olg(&["counterexample", "--alpha", "0.4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resolved_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = olg(
        &[
            "steady",
            "--alpha",
            "2/3",
            "--k0",
            "0.3",
            "--horizon",
            "700",
        ],
        dir.path(),
    );
    assert!(first.status.success());
    let block = resolved(&stdout(&first)).to_string();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, &block).unwrap();
    let again = olg(&["steady", "--config", cfg.to_str().unwrap()], dir.path());
    assert!(
        again.status.success(),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    assert_eq!(stdout(&again), stdout(&first));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# comment\ntheta = 0\nbeta = 0.4\n").unwrap();
    let o = olg(
        &["steady", "--config", cfg.to_str().unwrap(), "--beta", "0.5"],
        dir.path(),
    );
    let report = stdout(&o);
    assert_eq!(value(&report, "kind"), "Cobb-Douglas");
    assert_eq!(value(&report, "beta"), "0.5");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha = 0.6\nbogus = 1\n").unwrap();
    let o = olg(&["steady", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn steady_reports_the_calibration() {
    let dir = tempfile::tempdir().unwrap();
    let report = stdout(&olg(&["steady"], dir.path()));
    assert!((num(&report, "k[0]") - 1.0).abs() < 1e-12);
    assert!((num(&report, "R[0]") - 0.9070642).abs() < 5e-8);
    assert!((num(&report, "k_star") - 0.91586286).abs() < 1e-8);
    assert!((num(&report, "p_star") - 0.0396797).abs() < 1e-7);
    assert_eq!(value(&report, "rho_exact"), "4");
    assert_eq!(value(&report, "A/6 + theta/4"), "1 (exact)");

    let cd = stdout(&olg(&["steady", "--theta", "0"], dir.path()));
    assert_eq!(value(&cd, "bubbly"), "none");
}

#[test]
fn stability_is_a_saddle() {
    let dir = tempfile::tempdir().unwrap();
    let report = stdout(&olg(&["stability"], dir.path()));
    assert!((num(&report, "lambda1") - 0.50256).abs() < 1e-5);
    assert!((num(&report, "lambda2") - 1.09594).abs() < 1e-5);
    assert_eq!(value(&report, "stable_eigenvalues"), "2");
}

#[test]
fn shoot_with_a_grid_and_verify_the_paths() {
    let dir = tempfile::tempdir().unwrap();
    let o = olg(
        &[
            "shoot",
            "--D0",
            "1e-4",
            "--k0",
            "0.5",
            "--omega-grid",
            "4x2",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = stdout(&o);
    assert!(value(&report, "classification").starts_with("converged to the bubbly"));
    assert!(num(&report, "final_distance") < 1e-6);
    assert!(num(&report, "max_price_residual") < 1e-9);

    let omega = fs::read_to_string(dir.path().join("omega.csv")).unwrap();
    assert_eq!(
        omega.lines().next(),
        Some("k0,D0,in_omega,p0_star,final_dist,horizon")
    );
    assert_eq!(omega.lines().count(), 9);

    let shoot_csv = dir.path().join("shoot.csv");
    let v = olg(&["verify-path", shoot_csv.to_str().unwrap()], dir.path());
    assert!(v.status.success(), "{}", stdout(&v));
    assert_eq!(value(&stdout(&v), "verdict"), "pass");

    assert!(olg(&["counterexample"], dir.path()).status.success());
    let ce = dir.path().join("counterexample.csv");
    let v = olg(&["verify-path", ce.to_str().unwrap()], dir.path());
    assert!(v.status.success(), "{}", stdout(&v));
    assert_eq!(value(&stdout(&v), "columns"), "t,k,p_theta,d_theta");
}

#[test]
fn tampered_path_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    assert!(olg(&["shoot", "--D0", "1e-4"], dir.path()).status.success());
    let path = dir.path().join("shoot.csv");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[10].split(',').map(String::from).collect();
    let p: f64 = fields[2].parse().unwrap();
    fields[2] = (p * 1.001).to_string();
    lines[10] = fields.join(",");
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, lines.join("\n")).unwrap();
    let o = olg(&["verify-path", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(value(&stdout(&o), "verdict"), "FAIL");
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = olg(&["verify-path", "does-not-exist.csv"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn unbracketed_shot_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = olg(&["shoot", "--D0", "1000", "--k0", "1e-6"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}
