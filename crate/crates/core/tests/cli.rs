use std::process::{Command, Output};

use upv_core::checks::REGISTRY;
use upv_core::CheckReport;

fn upv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upv"))
        .args(args)
        .env_remove("UPV_SEED")
        .env_remove("UPV_PRIMES")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<CheckReport> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| CheckReport::from_json_line(l).expect("report line")).collect()
}

#[test]
fn rejects_small_and_non_gaussian_primes() {
    for p in ["5", "7", "11", "13,19"] {
        let out = upv(&["run", "cover.free_action", "--prime", p]);
        assert_eq!(out.status.code(), Some(2), "prime {p}");
        assert!(out.stdout.is_empty());
    }
    let out = upv(&["run", "cover.free_action", "--prime", "7"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 mod 4"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(upv(&["dump", "graph"]).status.code(), Some(2));
    assert_eq!(upv(&["run", "cover.nonexistent"]).status.code(), Some(2));
    assert_eq!(upv(&["run", "all", "--nu", "1,2,3"]).status.code(), Some(2));
}

#[test]
fn lambda_identity_runs_alone() {
    let out = upv(&["run", "bicanon.lambda_identity"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].id, "burniat.lambda_identity");
    assert!(recs[0].passed());
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let args = ["run", "cover", "--deterministic", "--prime", "13", "--seed", "5"];
    let a = upv(&args);
    let b = upv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dumps_have_the_documented_shape() {
    let ideal = upv(&["dump", "ideal"]);
    assert_eq!(ideal.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ideal.stdout).lines().count(), 65);

    let pts = upv(&["dump", "points", "--prime", "13", "--seed", "42"]);
    let text = String::from_utf8_lossy(&pts.stdout).to_string();
    let header: Vec<u64> = text.lines().next().unwrap().split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(header.len(), 7);
    assert_eq!(header[0], 13);
    assert_eq!(header[6] as usize, text.lines().count() - 1);

    let hilb = upv(&["dump", "hilbert", "--max-degree", "4"]);
    let rows: Vec<String> =
        String::from_utf8_lossy(&hilb.stdout).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[4].ends_with("152"));
}

#[test]
fn list_covers_every_check() {
    let out = upv(&["list"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for spec in REGISTRY {
        assert!(text.contains(spec.id), "{} missing from list", spec.id);
    }
}

#[test]
fn config_file_env_and_flags_layer() {
    let dir = std::env::temp_dir().join(format!("upv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "primes = 17\nseed = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = records(&upv(&["run", "grouprep.q_invariance", "--config", cfg]));
    assert_eq!(from_file[0].params.primes, vec![17]);
    assert_eq!(from_file[0].params.seed, Some(3));

    let out = Command::new(env!("CARGO_BIN_EXE_upv"))
        .args(["run", "grouprep.q_invariance", "--config", cfg, "--seed", "9"])
        .env("UPV_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(records(&out)[0].params.seed, Some(9));

    let out = Command::new(env!("CARGO_BIN_EXE_upv"))
        .args(["run", "grouprep.q_invariance", "--config", cfg])
        .env("UPV_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(records(&out)[0].params.seed, Some(4));
    std::fs::remove_dir_all(&dir).ok();
}
