//! The `condensed` binary end to end.

use std::process::Command;

fn condensed(args: &[&str], dir: &std::path::Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_condensed"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn check_discrete_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, out, _) = condensed(&["check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "locconst:2"], d);
    assert_eq!(code, 0, "{out}");
    let (code, out, err) = condensed(&["check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "towerhom:cantor"], d);
    assert_eq!(code, 1);
    assert!(out.contains("witness (NotHit) at depth 1: identity tower map"), "{out}");
    assert!(err.contains("replay written"));
    let (code, _, _) = condensed(&["replay", "condensed-replay.json"], d);
    assert_eq!(code, 1, "replayed failure reproduces");
    let (code, _, _) = condensed(&["check-discrete", "--tower", "point", "--presheaf", "towerhom:cantor"], d);
    assert_eq!(code, 0);
    let (code, _, _) = condensed(&["check-discrete", "--tower", "cantor", "--presheaf", "locconst:2", "--budget", "2"], d);
    assert_eq!(code, 2);
    let (code, _, _) = condensed(&["check-discrete", "--tower", "nope.json", "--presheaf", "locconst:2"], d);
    assert_eq!(code, 64);
}

#[test]
fn tower_and_module_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("t.json"),
        r#"{"name": "v", "levels": [1, 2, 3], "transitions": [[0, 0], [0, 1, 1]]}"#,
    )
    .unwrap();
    std::fs::write(
        d.join("ring.json"),
        r#"{"size": 2, "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 1]], "zero": 0, "one": 1}"#,
    )
    .unwrap();
    std::fs::write(d.join("module.json"), r#"{"size": 2, "add": [[0, 1], [1, 0]], "act": [[0, 0], [0, 1]], "zero": 0}"#).unwrap();
    let (code, out, _) = condensed(&["check-discrete", "--tower", "t.json", "--presheaf", "locconst-mod:ring.json:module.json", "--format", "json"], d);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["depths"].as_array().unwrap().len(), 3);

    std::fs::write(d.join("bad.json"), r#"{"name": "b", "levels": [2, 1], "transitions": [[0]]}"#).unwrap();
    let (code, _, err) = condensed(&["inspect", "--tower", "bad.json"], d);
    assert_eq!(code, 64, "{err}");
}

#[test]
fn inspect_output() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = condensed(&["inspect", "--tower", "cantor", "--depth", "2"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("quotients: 15"));
    assert!(out.contains("threads: 4"));
    assert!(out.contains("factor uniquely: true"));
}

#[test]
fn verify_broken_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = condensed(&["verify", "--broken", "--cases", "3", "--json"], dir.path());
    assert_eq!(code, 1);
    assert!(err.contains("violated: oracles / counit and colimit verdicts agree"), "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], false);
}
