use rmt_edge_cli::output::{read_csv, HEADER};
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmt-edge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn parse_pair(s: &str) -> (f64, f64) {
    let (a, b) = s.trim().split_once(',').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

#[test]
fn airy_kernel_diagonal_at_origin() {
    let o = run(&["kernel", "airy", "--points", "0:0,0:0"]);
    assert_eq!(o.status.code(), Some(0));
    let (re, im) = parse_pair(&stdout(&o));
    // Ai'(0)^2 (mpmath)
    assert!((re - 0.06698748377966397).abs() < 1e-14 && im == 0.0);
}

#[test]
fn kontsevich_and_bessel_values() {
    let (re, _) = parse_pair(&stdout(&run(&["kontsevich", "--points", "1,1.5"])));
    assert!((re / 0.764425140717981568 - 1.0).abs() < 1e-12);
    let (re, _) = parse_pair(&stdout(&run(&["kontsevich", "--points", "1,2", "--nu", "0.5"])));
    assert!((re / 0.293145681336879446 - 1.0).abs() < 1e-12);
    let (re, im) = parse_pair(&stdout(&run(&["kontsevich", "--points", "1.5,2.5", "--nu", "0.5", "--case", "III"])));
    assert!((re / 0.00294044305047285899 - 1.0).abs() < 1e-10 && im.abs() < 1e-14);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["soft-converge", "--n", ""]).status.code(), Some(2));
    assert_eq!(run(&["soft-converge", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["kernel", "airy", "--points", "0:0,1:0,2:0"]).status.code(), Some(2));
    assert_eq!(run(&["hard-converge", "--case", "II"]).status.code(), Some(2));
    assert_eq!(run(&["hard-converge", "--n", "40,20"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--config", "/nonexistent/file.cfg"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    // the Bessel kernel has no confluent form here
    assert_eq!(run(&["kernel", "bessel", "--points", "1:0,1:0"]).status.code(), Some(1));
    // case III needs y off the negative axis
    assert_eq!(run(&["kontsevich", "--points", "-1,2", "--nu", "0.5", "--case", "III"]).status.code(), Some(1));
}

#[test]
fn verify_suite_and_tight_tolerance() {
    let o = run(&["verify", "--n", "2"]);
    let out = stdout(&o);
    let checks = out.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).count();
    assert!(checks >= 25, "{out}");
    assert_eq!(o.status.code(), Some(0), "{out}");

    let o = run(&["verify", "--n", "2", "--tol", "1e-15"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.lines().any(|l| l.starts_with("[FAIL]")));
    assert!(out.lines().last().unwrap().starts_with("verify: "));
}

#[test]
fn csv_round_trip_and_determinism() {
    let p1 = tmp("soft_a.csv");
    let p2 = tmp("soft_b.csv");
    let args = |p: &PathBuf| {
        vec!["soft-converge".to_string(), "--n".into(), "20,40,80".into(), "--out".into(), p.display().to_string()]
    };
    let a: Vec<String> = args(&p1);
    let o = Command::new(env!("CARGO_BIN_EXE_rmt-edge")).args(&a).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("trend: rel_err decreasing"));
    let b: Vec<String> = args(&p2);
    Command::new(env!("CARGO_BIN_EXE_rmt-edge")).args(&b).output().unwrap();

    let text = std::fs::read_to_string(&p1).unwrap();
    assert_eq!(text, std::fs::read_to_string(&p2).unwrap());
    assert_eq!(text.lines().next().unwrap(), HEADER.join(","));

    let recs = read_csv(&p1).unwrap();
    assert_eq!(recs.iter().map(|r| r.n).collect::<Vec<_>>(), vec![20, 40, 80]);
    let again: Vec<String> = recs.iter().map(|r| r.fields().join(",")).collect();
    let body: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(again, body);
    assert!(recs.windows(2).all(|w| w[1].rel_err < w[0].rel_err));
}

#[test]
fn config_file_with_flag_override() {
    let cfg = tmp("hard.cfg");
    std::fs::write(&cfg, "# hard-edge sweep\npotential = 0,1\nnu = 0.5\ncase = III\nn = 10,20\npoints = 1,2\n").unwrap();
    let o = run(&["hard-converge", "--config", cfg.to_str().unwrap(), "--n", "20,40"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("III,")).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("III,20,1,") && rows[1].starts_with("III,40,1,"));
}
