use std::process::{Command, Output};

use serde_json::Value;

fn qdpomdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdpomdp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = qdpomdp(args);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (code, v)
}

#[test]
fn envelope_has_the_documented_keys() {
    let (code, v) = report(&["entanglement"]);
    assert_eq!(code, 0);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["command", "config", "results", "paper_claim", "pass"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(v["pass"], true);
    let bell = &v["results"]["states"][0];
    assert!((bell["min_eigenvalue"].as_f64().unwrap() + 0.5).abs() < 1e-9);
    assert_eq!(v["results"]["states"][1]["entangled"], false);
}

#[test]
fn square_validation_and_tampering() {
    let (code, v) = report(&["validate-square"]);
    assert_eq!(code, 0);
    let checks = v["results"]["checks"].as_object().unwrap();
    assert_eq!(checks.len(), 6);
    for c in checks.values() {
        assert_eq!(c["pass"], true);
        assert!(c["max_residual"].as_f64().unwrap() < 1e-12);
    }

    let out = qdpomdp(&["validate-square", "--tamper"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let failing: Vec<&str> = v["results"]["failing_checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert!(failing.contains(&"column_products"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column_products"));
}

#[test]
fn game_modes() {
    let (code, v) = report(&["game", "classical-bruteforce"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["max_win_prob"], "8/9");
    assert_eq!(v["results"]["pairs_examined"], 4096);

    for seed in ["0", "99"] {
        let (code, v) = report(&["game", "quantum-mc", "--trials", "9000", "--seed", seed]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["win_frequency"].as_f64(), Some(1.0));
    }

    let (code, v) = report(&["game", "quantum-exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["cells"].as_array().unwrap().len(), 9);
}

#[test]
fn pomdp_examples() {
    let (code, v) = report(&[
        "pomdp",
        "--seed",
        "5",
        "--kernel",
        "uniform",
        "--policies",
        "quantum-mp",
        "--steps",
        "10000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["summary"]["average_reward"].as_f64(),
        Some(1.0)
    );

    let (code, v) = report(&[
        "pomdp",
        "--seed",
        "5",
        "--kernel",
        "periodic",
        "--policies",
        "periodic-sync",
        "--steps",
        "9002",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        v["results"]["summary"]["average_reward_from_step_2"].as_f64(),
        Some(1.0)
    );

    let (code, v) = report(&[
        "pomdp",
        "--seed",
        "5",
        "--kernel",
        "uniform",
        "--policies",
        "best-memoryless",
        "--steps",
        "100000",
    ]);
    assert_eq!(code, 0);
    let s = &v["results"]["summary"];
    let avg = s["average_reward"].as_f64().unwrap();
    assert!(avg <= 7.0 / 9.0 + 3.0 * s["standard_error"].as_f64().unwrap());
}

#[test]
fn sync_policies_off_the_cycle_warn_but_run() {
    let out = qdpomdp(&[
        "pomdp",
        "--seed",
        "1",
        "--kernel",
        "uniform",
        "--policies",
        "periodic-sync",
        "--steps",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn oracles_default_run() {
    let (code, v) = report(&["oracles"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["lemma"]["pairs_checked"], 16);
    assert_eq!(r["corollary"]["uniform_min_prob_negative"], "1/9");
    assert!(r["corollary"]["floor_min_prob_negative"].as_f64().unwrap() >= 0.05);
    assert_eq!(r["one_shot"]["max_expected_reward"], "7/9");
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &[
            "pomdp",
            "--seed",
            "11",
            "--kernel",
            "delta-floor",
            "--policies",
            "hashed",
            "--steps",
            "500",
        ][..],
        &["game", "quantum-mc", "--seed", "11", "--trials", "900"][..],
        &["oracles", "--seed", "3", "--delta", "0.08"][..],
    ] {
        let a = qdpomdp(args);
        let b = qdpomdp(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["pomdp"][..],
        &["game", "quantum-mc"][..],
        &["game", "telepathy"][..],
        &["oracles", "--delta", "0.2"][..],
        &["pomdp", "--seed", "1", "--alice", "greedy"][..],
        &[
            "pomdp",
            "--seed",
            "1",
            "--kernel",
            "file:/nonexistent/kernel.json",
        ][..],
        &["entanglement", "--format", "csv"][..],
    ] {
        assert_eq!(qdpomdp(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 2, "steps": 40, "policies": "best-memoryless"}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, v) = report(&["pomdp", "--config", cfg]);
    assert_eq!(v["config"]["steps"], 40);
    assert_eq!(v["config"]["alice"]["kind"], "best-memoryless");
    let (_, v) = report(&[
        "pomdp",
        "--config",
        cfg,
        "--steps",
        "12",
        "--alice",
        "quantum-mp",
    ]);
    assert_eq!(v["config"]["steps"], 12);
    assert_eq!(v["config"]["alice"]["kind"], "quantum-mp");
    assert_eq!(v["config"]["bob"]["kind"], "best-memoryless");
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = qdpomdp(&[
        "pomdp",
        "--seed",
        "4",
        "--steps",
        "30",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,x,y,u,v,r,running_avg\n"));
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn kernel_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let k = qdpomdp::dec_pomdp::Kernel::delta_floor(6, 0.04).unwrap();
    std::fs::write(&path, k.to_json().unwrap()).unwrap();
    let sel = format!("file:{}", path.display());
    let (code, v) = report(&[
        "pomdp",
        "--seed",
        "1",
        "--steps",
        "2000",
        "--kernel",
        &sel,
        "--policies",
        "best-memoryless",
    ]);
    assert_eq!(code, 0);
    assert!((v["results"]["bound_check"]["bound"].as_f64().unwrap() - 0.92).abs() < 1e-12);
}
