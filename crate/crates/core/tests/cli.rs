use std::path::PathBuf;
use std::process::{Command, Output};

use diamdet::oracle::exact_metrics;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn diamdet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diamdet"))
        .args(args)
        .env_remove("DIAMDET_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

#[test]
fn estimate_cgr_on_p5() {
    let p5 = fixture("p5.txt");
    let out = diamdet(&["estimate", "--algo", "cgr", "--k", "2", "--input", &p5, "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["algo"], "cgr");
    assert_eq!(v["k"], 2);
    // (2p-1)·D̃ ≥ p·D − (p−1)·M with p = 2, D = 4, M = 1 forces D̃ ≥ 7/3.
    let est = v["estimate"].as_u64().unwrap();
    assert!((3..=4).contains(&est), "{est}");
}

#[test]
fn five_thirds_rejects_weighted_input() {
    let out = diamdet(&["estimate", "--algo", "five-thirds", "--input", &fixture("weighted.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("requires unweighted undirected input"), "{err}");
}

#[test]
fn exact_on_p5() {
    let out = diamdet(&["estimate", "--algo", "exact", "--input", &fixture("p5.txt"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["diameter"], 4);
    assert_eq!(v["radius"], 2);
}

#[test]
fn exact_subcommand_on_fixtures() {
    for (name, d, r) in [("p5.txt", 4, 2), ("c6.txt", 3, 3), ("star.txt", 2, 1), ("weighted.txt", 6, 4)] {
        let out = diamdet(&["exact", "--input", &fixture(name), "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!((v["diameter"].as_u64(), v["radius"].as_u64()), (Some(d), Some(r)), "{name}");
    }
}

#[test]
fn dimacs_extension_is_detected() {
    let out = diamdet(&["exact", "--input", &fixture("tri.gr"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["directed"], true);
    assert_eq!(v["diameter"], 6);
}

#[test]
fn verify_cgr_random_instance() {
    let out = diamdet(&["verify", "--algo", "cgr", "--k", "3", "--gen", "gnm:n=40,m=100:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("7·D̃ ≥ 4·D − 3·M: PASS"), "{text}");
    assert!(text.contains("verdict: PASS"));
}

#[test]
fn verify_radius_ecc_checks_every_family() {
    let out = diamdet(&["verify", "--algo", "radius-ecc", "--k", "3", "--gen", "gnm:n=40,m=100,w=9:1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"4·R̃ ≤ 7·R + 3·M"), "{names:?}");
    assert!(names.contains(&"11·ε̃_w ≥ 5·ε(w) − 6·M for all w"), "{names:?}");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_three_halves_p5_line() {
    let out = diamdet(&["verify", "--algo", "three-halves", "--input", &fixture("p5.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let line = text.lines().find(|l| l.starts_with("3·D̃ ≥ 2·D")).unwrap();
    let est: u64 = line.split("(3·").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(est >= 3, "{line}");
    assert!(line.contains("PASS"));
}

#[test]
fn verify_five_thirds_star() {
    let out = diamdet(&["verify", "--algo", "five-thirds", "--input", &fixture("star.txt")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_cap_is_a_precondition() {
    let out = diamdet(&["verify", "--algo", "cgr", "--gen", "gnm:n=50,m=100:2", "--oracle-cap", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "3 1 undirected\n0 x 1\n").unwrap();
    let out = diamdet(&["exact", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = diamdet(&["estimate", "--algo", "nope", "--gen", "path:n=3:0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = diamdet(&["exact", "--input", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn disconnected_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.txt");
    std::fs::write(&path, "4 2 undirected\n0 1 1\n2 3 1\n").unwrap();
    for algo in ["cgr", "three-halves", "five-thirds", "exact"] {
        let out = diamdet(&["estimate", "--algo", algo, "--input", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{algo}");
    }
}

#[test]
fn gen_output_matches_oracle_on_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let spec = "gnm:n=30,m=70,w=6:11";
    let out = diamdet(&["gen", "--gen", spec, "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = diamdet(&["exact", "--input", path.to_str().unwrap(), "--format", "json"]);
    let v = json(&out);
    let g = diamdet::generate::generate(&spec.parse().unwrap()).unwrap();
    let exact = exact_metrics(&g, 100).unwrap();
    assert_eq!(v["diameter"].as_u64(), Some(exact.diameter));
    assert_eq!(v["radius"].as_u64(), Some(exact.radius));
}

#[test]
fn workers_do_not_change_output() {
    let runs: Vec<Value> = ["1", "4"]
        .iter()
        .map(|w| {
            let out = Command::new(env!("CARGO_BIN_EXE_diamdet"))
                .args(["estimate", "--algo", "radius-ecc", "--k", "3", "--gen", "gnm:n=200,m=600,w=20:5", "--format", "json"])
                .env("DIAMDET_WORKERS", w)
                .output()
                .unwrap();
            let mut v = json(&out);
            v.as_object_mut().unwrap().remove("wall_time_ms");
            v
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn bench_json_rows_carry_instance() {
    let out = diamdet(&[
        "bench", "--algo", "cgr,three-halves", "--k", "2,3", "--gen", "gnm:n=50,m=120:1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["instance"] == "gnm:n=50,m=120:1"));
}

#[test]
fn version_flag() {
    let out = diamdet(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("diamdet "));
}
