use std::path::Path;
use std::process::{Command, Output};

fn dicka(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicka")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn curves_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["curves", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    dicka(&args)
}

#[test]
fn curves_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    let out = curves_to(&path, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "nu,value,name");
    assert_eq!(rows.len() - 1, 4 * 53);
    let mut names = std::collections::BTreeSet::new();
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        names.insert(f[2].to_string());
        if f[0] == "0" {
            assert!((f[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-8, "{row}");
        }
    }
    assert_eq!(names.len(), 4);
    assert!(names.iter().any(|n| n.ends_with("PROXY")));
    assert!(stdout(&out).lines().all(|l| !l.starts_with("curve ") || l.contains("minimize=")));
}

#[test]
fn curves_are_reproducible_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("c.csv"));
    let grid = ["--nu-max", "0.05", "--minimize"];
    assert!(curves_to(&a, &grid).status.success());
    assert!(curves_to(&b, &grid).status.success());
    assert!(curves_to(&c, &[&grid[..], &["--workers", "1"]].concat()).status.success());
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&a), read(&c));
    assert!(String::from_utf8(read(&a)).unwrap().contains("intrinsic_upper_minimize_on"));
}

#[test]
fn exit_codes() {
    assert_eq!(dicka(&["curves", "--out", "/nonexistent-dir/x.csv"]).status.code(), Some(2));
    assert_eq!(dicka(&["curves", "--nu-min", "0.2", "--nu-max", "0.1"]).status.code(), Some(1));
    assert_eq!(dicka(&["curves", "--nu-step", "-1"]).status.code(), Some(1));
    assert_eq!(dicka(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dicka(&["game", "--config", "/nonexistent-dir/run.cfg"]).status.code(), Some(2));
    assert_eq!(dicka(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("from_cfg.csv");
    std::fs::write(&cfg, format!("nu_max = 0.01\nnu_step = 0.005\nout = {}\n", out.display())).unwrap();
    assert!(dicka(&["curves", "--config", cfg.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1 + 4 * 3);
    assert!(dicka(&["curves", "--config", cfg.to_str().unwrap(), "--nu-max", "0.02"]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1 + 4 * 5);
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(dicka(&["game", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_reports_and_negative_control() {
    let ok = dicka(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    for suite in ["expansion", "duality", "reconstruction", "permutation"] {
        let line = text.lines().find(|l| l.contains(suite)).unwrap();
        let count: usize = line.split("instances=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
        assert!(count >= 100);
        assert!(line.ends_with("PASS"));
    }
    let bad = dicka(&["verify", "--corrupt", "--instances", "2", "--seed", "40"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("failing seeds: 40 41"));
}

#[test]
fn game_report() {
    let out = dicka(&["game"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("p_exp(0) = 0.853553"));
    assert!(text.contains("classical bound = 0.750000"));
    let crit: f64 = text.split("nu_crit = ").nth(1).unwrap()[..8].parse().unwrap();
    assert!((crit - 0.1189).abs() <= 5e-4);
}

#[test]
fn attack_relay_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("joint.csv");
    let out = dicka(&["attack", "--nu", "0.1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("P(e=?) = 0.729000000000"));
    let joint = dicka::secrecy::JointDistribution::<f64>::read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(joint.eve_alphabet(), 9);
    assert_eq!(dicka(&["attack", "--nu", "1.5"]).status.code(), Some(1));

    let relay = dicka(&["relay", "--parties", "4", "--key-len", "2", "--exhaustive", "--seed", "7"]);
    assert!(relay.status.success());
    let text = stdout(&relay);
    assert!(text.contains("all parties agree: yes"));
    assert_eq!(text.lines().filter(|l| l.starts_with("broadcast")).count(), 3);

    let parts = dicka(&["partitions", "--parties", "4"]);
    assert!(stdout(&parts).contains("13 nontrivial partitions"));
    assert_eq!(dicka(&["partitions", "--parties", "2"]).status.code(), Some(1));
}
