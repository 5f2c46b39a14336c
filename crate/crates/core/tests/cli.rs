use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ecs_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecs-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bundled_configs_pass() {
    for name in ["m1.cfg", "m2.cfg", "m3.cfg", "square.cfg", "constant.cfg", "fixed-leaf.cfg", "sweep.cfg"] {
        let path = fixture(name);
        let out = ecs_lab(&["run", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}:\n{}", stdout(&out));
        assert!(stdout(&out).contains("overall: PASS"));
    }
}

#[test]
fn invalid_configs_exit_with_two() {
    for (name, needle) in [("bad-trace.cfg", "traceless"), ("bad-gram.cfg", "pseudo-Euclidean")] {
        let path = fixture(name);
        let out = ecs_lab(&["verify", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains(needle), "{name}");
    }
    let out = ecs_lab(&["verify", "--config", "/nonexistent/model.cfg"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("ecs-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m1 = fixture("m1.cfg");
    let mut reports = Vec::new();
    for k in 0..2 {
        let out_path = dir.join(format!("m1-{k}.json"));
        let out = ecs_lab(&[
            "run",
            "--config",
            m1.to_str().unwrap(),
            "--json",
            "--seed",
            "7",
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        reports.push(std::fs::read(&out_path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["seed"], 7);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn subcommand_restricts_tasks() {
    let m1 = fixture("m1.cfg");
    let out = ecs_lab(&["homogeneity", "--config", m1.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sections = v["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 1);
    assert_eq!(sections[0]["task"], "homogeneity");
}

#[test]
fn sweep_runs_in_both_modes() {
    for mode in ["exact", "float"] {
        let out = ecs_lab(&["sweep", "--count", "2", "--dims", "4,5", "--points", "3", "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "{mode}:\n{}", stdout(&out));
    }
    let out = ecs_lab(&["sweep", "--dims", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
