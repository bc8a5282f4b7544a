use std::process::{Command, Output};

use isolab::experiments::{parse_json, strip_wall_clock, CSV_HEADER};

fn isolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isolab"))
        .args(args)
        .env_remove("ISOLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sample_then_iso() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let o = isolab(&["sample", "--n", "10", "--p", "0.5", "--seed", "3", "--out", p]);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n 10\n"));

    let o = isolab(&["iso", p, "--all"]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert!(out.contains("\ni ") && out.contains("witness {") && out.contains("minimizer {"), "{out}");

    let o = isolab(&["iso", p, "--exact-cap", "4", "--bisection-samples", "20"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max_sampled_bisection_ratio"));
}

#[test]
fn iso_on_a_known_graph() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    std::fs::write(&path, "# four-cycle\nn 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let o = isolab(&["iso", path.to_str().unwrap()]);
    let out = stdout(&o);
    assert!(out.contains("i 2/2 (1)"), "{out}");
    assert!(out.contains("witness {0,1}"), "{out}");
}

#[test]
fn errors_map_to_exit_codes() {
    // missing file: i/o error naming the path
    let o = isolab(&["iso", "/nonexistent/graph.txt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/graph.txt"));

    // C below C(ε)
    let o = isolab(&["run", "theorem2", "--C", "10", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("config error"));

    let o = isolab(&["run", "theorem3"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "n 3\n0 1\n1 1\n").unwrap();
    let o = isolab(&["iso", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn process_and_thresholds_tables() {
    let o = isolab(&["process", "--n", "30", "--seed", "2", "--d-max", "2"]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "d,tau");
    assert_eq!(lines.len(), 3);

    let o = isolab(&["thresholds", "--n", "1000", "--d-max", "2"]);
    let out = stdout(&o);
    assert!(out.contains("2,3.45"), "{out}");
    assert!(out.contains(",1964,6175"), "{out}");
    assert!(out.contains("0.5,6.5177"), "{out}");
}

#[test]
fn run_with_config_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t1.conf");
    std::fs::write(&cfg, "# small run\nn = 9\ntrials = 6\nd-max = 2\n").unwrap();
    let o = isolab(&["run", "theorem1", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some(CSV_HEADER));
    assert!(out.contains("theorem1,frequency,i_eq_delta_for_all_t,"), "{out}");

    // flags override the file
    let o = isolab(&["run", "theorem1", "--config", cfg.to_str().unwrap(), "--trials", "3"]);
    let r = parse_json(&o.stdout).unwrap();
    assert_eq!((r.config.n, r.config.trials), (9, 3));
}

#[test]
fn worker_env_var_does_not_change_output() {
    let args = ["run", "sandwich", "--n", "8", "--trials", "5", "--p-grid", "0.3,0.6"];
    let a = isolab(&[&args[..], &["--workers", "1"]].concat());
    let b = Command::new(env!("CARGO_BIN_EXE_isolab")).args(args).env("ISOLAB_WORKERS", "3").output().unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(strip_wall_clock(&a.stdout).unwrap(), strip_wall_clock(&b.stdout).unwrap());
}

#[test]
fn verify_passes() {
    let o = isolab(&["verify", "--graphs", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
