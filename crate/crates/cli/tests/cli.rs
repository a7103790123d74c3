use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use diskgroups::render::read_ppm;
use diskgroups_cli::{load_config, RunConfig};
use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_diskgroups"));
    cmd.args(args).env_remove("DISKGROUPS_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("diskgroups-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn flags_override_the_config_file() {
    let dir = scratch("cfg");
    let path = dir.join("run.cfg");
    fs::write(&path, "# five-fold\nn1=5\nr1=2.149\n").unwrap();
    let cfg = load_config(&path).unwrap();
    assert_eq!((cfg.n1, cfg.r1), (5, 2.149));
    assert_eq!(cfg.r2, RunConfig::default().r2);

    let p = path.to_str().unwrap();
    let out = run(&["classify", "--config", p, "--r", "2.2", "--budget", "1000", "--lens-seeds", "0"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["r1"], 2.2);
    assert_eq!(v["config"]["r2"], 2.2);
    assert_eq!(v["config"]["budget"], 1000);

    fs::write(&path, "n1=abc\n").unwrap();
    let out = run(&["orbit", "--config", p], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["orbit", "--bogus"],
        vec!["frobnicate"],
        vec!["orbit", "--seed", "nope"],
        vec!["orbit", "--r", "-1"],
        vec!["estimate-rc", "--n", "6"],
        vec!["render", "boundary"],
        vec!["orbit", "--threads", "0"],
    ] {
        let out = run(&args, &[]);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["orbit"], &[("DISKGROUPS_THREADS", "many")]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["--help"], &[]).status.code(), Some(0));
}

#[test]
fn verifications_pass() {
    for args in [
        &["verify", "theorem2", "--iterations", "1000"][..],
        &["verify", "minpoly"],
        &["verify", "spiral"],
        &["verify", "three-disk"],
    ] {
        let out = run(args, &[]);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let v = json(&out);
        assert_eq!(v["passed"], true, "{args:?}");
        assert!(v["config"].is_object());
    }
    let out = run(&["verify", "theorem1", "--orders", "7", "--epsilon", "1e-3"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn failed_verification_exits_with_one() {
    // Far below double precision the per-stage prediction check trips.
    let out = run(&["verify", "theorem1", "--orders", "7", "--epsilon", "1e-30"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert_eq!(v["checks"][0]["pass"], false);
    let out = run(&["verify", "theorem1", "--orders", "4"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = scratch("threads");
    let mut results = Vec::new();
    for threads in ["1", "3"] {
        let img = dir.join(format!("f{threads}.ppm"));
        let out = run(
            &[
                "render", "fractal", "--n", "5", "--r", "2.2", "--budget", "50000", "--width", "120",
                "--height", "90", "--check-invariance", "--out", img.to_str().unwrap(),
            ],
            &[("DISKGROUPS_THREADS", threads)],
        );
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let mut v = json(&out);
        assert_eq!(v["invariance"]["violations"], 0);
        v["config"]["out"] = Value::Null;
        v["image"] = Value::Null;
        let cls = run(&["classify", "--r", "2.2", "--budget", "20000", "--threads", threads], &[]);
        results.push((v, fs::read(&img).unwrap(), cls.stdout));
    }
    assert_eq!(results[0], results[1]);
    let img = read_ppm(&dir.join("f1.ppm")).unwrap();
    assert_eq!((img.width, img.height), (120, 90));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn boundary_and_single_generator_renders() {
    let dir = scratch("render");
    let b = dir.join("b.ppm");
    let out = run(&["render", "boundary", "--r", "1.05", "--width", "512", "--height", "512", "--out", b.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["interior_regions"], 11);

    let s = dir.join("s.ppm");
    let out = run(
        &["render", "single-gen", "--r", "1.5", "--word", "a b^-1", "--iterations", "1000", "--width", "64",
          "--height", "64", "--coloring", "order", "--out", s.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["seeds"], 64 * 64);
    assert_eq!(read_ppm(&s).unwrap().width, 64);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_writes_csv() {
    let out = run(&["table", "--n-list", "6,4", "--budget", "1000"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,estimate,lo,hi,budget,tol,verdict_basis");
    assert!(lines[1].starts_with("6,") && lines[1].ends_with("AlwaysFinite"));
    assert_eq!(lines.len(), 3);
}
