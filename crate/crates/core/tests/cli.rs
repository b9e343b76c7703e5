use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use bihh_core::bihh::{simplicial_diagram, Bihh};
use bihh_core::cli::run_captured;
use bihh_core::present::SearchBudget;
use bihh_core::shadows::{periodic_quotient, strictify, trace_to_cocone, CoconeFile, ShadowFile};
use bihh_core::twocat::{catalog, Bound, CatalogName};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    run_captured(std::iter::once("bihh").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, v: &impl serde::Serialize) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

/// Target, cocone and shadow files for biHH(B) at 1-cell length 2, through `a^2 = id`.
fn setting(dir: &Path, name: CatalogName) -> (PathBuf, PathBuf, PathBuf) {
    let b = SearchBudget::default();
    let two = catalog(&name).unwrap();
    let bound = Bound::length(0, 2);
    let h = Bihh::new(&two, bound, &b).unwrap();
    let d = simplicial_diagram(&two, bound, &b).unwrap();
    let (q, quot) = periodic_quotient(&h, 2, &b, 5000).unwrap();
    let c = trace_to_cocone(&h, &d, &q.category, &quot, &b).unwrap();
    let s = strictify(&d, &q.category, &c).unwrap();
    (
        write(dir, "target.json", &q.category.to_file()),
        write(dir, "cocone.json", &CoconeFile::of(&d, &c)),
        write(dir, "shadow.json", &ShadowFile::of(&d, &s)),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn shadow_commands_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (t, c, sh) = setting(dir.path(), CatalogName::SigmaAb(vec![2]));
    let base = ["--builtin", "sigmaab:2", "--target", s(&t)];
    let with = |cmd: &str, flag: &str, f: &Path| {
        let mut a = vec![cmd];
        a.extend(base);
        a.extend([flag, s(f)]);
        run(&a)
    };
    assert_eq!(with("verify-cocone", "--cocone", &c).0, 0);
    assert_eq!(with("verify-shadow", "--shadow", &sh).0, 0);
    assert_eq!(with("check-extension", "--theta", &sh).0, 0);
    let (code, out, _) = with("strictify", "--cocone", &c);
    assert_eq!(code, 0);
    let back: ShadowFile = serde_json::from_str(&out).unwrap();
    let orig: ShadowFile = serde_json::from_str(&fs::read_to_string(&sh).unwrap()).unwrap();
    assert_eq!(back, orig);
    let (code, out, _) = with("unstrictify", "--shadow", &sh);
    assert_eq!(code, 0);
    let un = write(dir.path(), "un.json", &serde_json::from_str::<CoconeFile>(&out).unwrap());
    assert_eq!(with("verify-cocone", "--cocone", &un).0, 0);
}

#[test]
fn failing_shadow_replays() {
    let dir = tempfile::tempdir().unwrap();
    let (t, _, sh) = setting(dir.path(), CatalogName::SigmaAb(vec![2]));
    let mut f: ShadowFile = serde_json::from_str(&fs::read_to_string(&sh).unwrap()).unwrap();
    // The target is Z/2 on one object; a single flipped twist breaks the cocycle or unit condition.
    let v = f.theta.values_mut().next().unwrap();
    *v = 1 - *v;
    let bad = write(dir.path(), "bad.json", &f);
    for cmd in ["verify-shadow", "check-extension"] {
        let flag = if cmd == "verify-shadow" { "--shadow" } else { "--theta" };
        let (code, out, _) = run(&["--format", "json", cmd, "--builtin", "sigmaab:2", "--target", s(&t), flag, s(&bad)]);
        assert_eq!(code, 1, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "fail");
        let r = write(dir.path(), "replay.json", &v["replay"]);
        let (code, out, _) = run(&["replay", s(&r)]);
        assert_eq!(code, 0, "{out}");
    }
}

#[test]
fn tampered_replays_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["--format", "json", "equal", "--builtin", "bn", "--left", "(x,x)", "--right", "", "--from", "x.x"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    let mut r = v["replay"].clone();
    assert_eq!(run(&["replay", s(&write(dir.path(), "r.json", &r))]).0, 0);
    r["right"] = r["left"].clone();
    assert_eq!(run(&["replay", s(&write(dir.path(), "r.json", &r))]).0, 1);

    let (code, out, _) = run(&["--format", "json", "equal", "--builtin", "bn", "--left", "(x,x.x)", "--right", "(x.x,x) (x.x,x)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let mut w = v["replay"].clone();
    assert_eq!(run(&["replay", s(&write(dir.path(), "w.json", &w))]).0, 0);
    w["witness"]["steps"] = Value::Array(vec![]);
    assert_eq!(run(&["replay", s(&write(dir.path(), "w.json", &w))]).0, 1);
}

#[test]
fn malformed_presentation_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    fs::write(&p, r#"{"objects": ["a"], "generators": [{"id": "f", "src": "a"}]}"#).unwrap();
    let (code, _, err) = run(&["normalize", "--presentation", s(&p), "--word", "f"]);
    assert_eq!(code, 3);
    assert!(err.contains("generators[0]"), "{err}");
}

#[test]
fn presentation_files_drive_word_problems() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z3.json");
    fs::write(&p, r#"{"objects": ["*"], "generators": [{"id": "a", "src": "*", "tgt": "*"}], "relations": [[["a","a","a"], {"src": "*", "letters": []}]]}"#).unwrap();
    let (code, out, _) = run(&["normalize", "--presentation", s(&p), "--word", "a a a a"]);
    assert_eq!((code, out.trim()), (0, "normal form: a"));
    assert_eq!(run(&["equal", "--presentation", s(&p), "--left", "a a", "--right", "a"]).0, 1);
    let (code, out, _) = run(&["skeleton", "--presentation", s(&p)]);
    assert_eq!(code, 0);
    assert!(out.contains("|Aut| = 3"), "{out}");
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "skeleton", "--builtin", "adj", "--degree", "2"];
    assert_eq!(run(&args), run(&args));
    let dot = ["bihh", "--builtin", "bn", "--degree", "3", "--emit", "dot"];
    assert_eq!(run(&dot), run(&dot));
}

#[test]
fn check_example_adj_passes() {
    let (code, out, _) = run(&["check-example", "adj", "--degree", "3"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn check_example_bnn_fails_with_a_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&["--format", "json", "check-example", "bnn"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["replay"]["kind"], "rerun");
    assert_eq!(run(&["replay", s(&write(dir.path(), "r.json", &v["replay"]))]).0, 0);
}

#[test]
fn budget_env_vars_are_read() {
    let bin = env!("CARGO_BIN_EXE_bihh");
    let out = Command::new(bin).args(["skeleton", "--builtin", "terminal"]).env("BIHH_BUDGET_STEPS", "0").output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(bin).args(["skeleton", "--builtin", "terminal"]).env("BIHH_BUDGET_STEPS", "100").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
