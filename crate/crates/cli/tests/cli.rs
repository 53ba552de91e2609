use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_codensity"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = bin().args(args).output().unwrap();
    finish(out)
}

fn finish(out: Output) -> (i32, Value, String) {
    let stdout = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc, String::from_utf8(out.stderr).unwrap())
}

const CHAIN: &str = r#"{"type":"kripke","states":["0","1","2"],"succ":{"0":["1"],"1":["2"],"2":["2"]}}"#;
const DEADLOCK: &str = r#"{"type":"kripke","states":["0","1"],"succ":{"0":["0"],"1":[]}}"#;
const TOTAL2: &str = r#"{"fiber":"eqrel","blocks":[["0","1"]]}"#;
const WORDS: &str = r#"{"type":"dfa","states":["s0","s1","t0","t1","t2"],"alphabet":["a"],"accepting":["s1","t2"],
  "delta":{"s0":{"a":"s1"},"s1":{"a":"s1"},"t0":{"a":"t1"},"t1":{"a":"t2"},"t2":{"a":"t2"}}}"#;

#[test]
fn bisim_chain_is_one_block() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", CHAIN);
    let (code, doc, _) = run(&["bisim", k.to_str().unwrap(), "--fiber", "eqrel", "--tau", "diamond", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 1);
    assert_eq!(doc["oracle"]["agrees"], true);
    assert_eq!(doc["meta"]["seed"], 0);
    assert!(doc["meta"]["tolerances"]["tol"].is_number());
}

#[test]
fn bisim_output_feeds_back_as_a_position() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let nu = dir.path().join("nu.json");
    let (code, _, _) = run(&["bisim", k.to_str().unwrap(), "-o", nu.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, doc, _) = run(&["game", "solve", k.to_str().unwrap(), "--start", nu.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["winner"], "duplicator");
}

#[test]
fn oracle_compare_distances() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "d.json", WORDS);
    let (code, doc, _) = run(&["oracle", "compare", "--system", d.to_str().unwrap(), "--fiber", "pmet", "--weight", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["equal"], true);
    assert_eq!(doc["fixpoint"]["matrix"][0][2], 0.5);
    let (code, doc, _) = run(&["oracle", "compare", "--system", d.to_str().unwrap(), "--fiber", "lmet"]);
    assert_eq!(code, 0, "{doc}");
}

#[test]
fn metric_lift_agrees_with_witnesses() {
    let dir = TempDir::new().unwrap();
    let d = write(dir.path(), "d.json", WORDS);
    let p =
        write(dir.path(), "p.json", r#"{"fiber":"pmet","matrix":[[0,1,1,1,1],[1,0,1,1,1],[1,1,0,1,1],[1,1,1,0,1],[1,1,1,1,0]]}"#);
    let (code, doc, _) =
        run(&["lift", "--system", d.to_str().unwrap(), "--fiber", "pmet", "--input", p.to_str().unwrap(), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["oracle"]["method"], "witness maps");
    assert_eq!(doc["matrix"][0][1], 1.0);
    assert_eq!(doc["matrix"][0][2], 0.5);
}

#[test]
fn relation_lift_agrees_with_enumeration() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let p = write(dir.path(), "p.json", TOTAL2);
    let (code, doc, _) = run(&["lift", "--system", k.to_str().unwrap(), "--input", p.to_str().unwrap(), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn compat_exit_codes() {
    let (code, doc, _) = run(&["check-compat", "--behavior", "mdp", "--sigma", "oplus", "--instances", "20"]);
    assert_eq!(code, 2);
    assert_eq!(doc["report"]["overall"]["verdict"], "direct_only");
    let (code, doc, _) = run(&["check-compat", "--behavior", "kripke", "--sigma", "and", "--instances", "20"]);
    assert_eq!(code, 0);
    assert_eq!(doc["report"]["overall"]["verdict"], "verified_exhaustive");
    let (code, _, _) = run(&["check-compat", "--behavior", "mdp", "--sigma", "av", "--instances", "20"]);
    assert_eq!(code, 1);
}

#[test]
fn reports_reproduce_under_a_seed() {
    let args = ["check-compat", "--behavior", "da", "--sigma", "and", "--instances", "10", "--seed", "7"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    assert_eq!(a["meta"]["seed"], 7);
    let (code, g, _) = run(&["check-gebler", "--seed", "3", "--trials", "40"]);
    assert_eq!(code, 0);
    assert_eq!(g, run(&["check-gebler", "--seed", "3", "--trials", "40"]).1);
}

#[test]
fn input_errors_exit_three_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"type":"kripke","states":["a"],"succ":{"a":["b"]}}"#);
    let (code, _, err) = run(&["bisim", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("$.succ.a[0]"), "{err}");
    let broken = write(dir.path(), "broken.json", "{\"type\":\n[");
    let (code, _, err) = run(&["bisim", broken.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(run(&["bisim", "--no-such-flag"]).0, 3);
    let k = write(dir.path(), "k.json", CHAIN);
    let (code, _, err) = run(&["bisim", k.to_str().unwrap(), "--tau", "da"]);
    assert_eq!(code, 3);
    assert!(err.contains("diamond"), "{err}");
}

#[test]
fn compose_writes_a_system() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", CHAIN);
    let b = write(dir.path(), "b.json", DEADLOCK);
    let prod = dir.path().join("prod.json");
    let (code, _, _) =
        run(&["compose", a.to_str().unwrap(), b.to_str().unwrap(), "--law", "product", "-o", prod.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, doc, _) = run(&["bisim", prod.to_str().unwrap(), "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(doc["states"].as_array().unwrap().len(), 6);
    assert_eq!(doc["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn game_invariants() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", CHAIN);
    let b = write(dir.path(), "b.json", DEADLOCK);
    let va = write(dir.path(), "va.json", r#"[{"fiber":"eqrel","blocks":[["0","1","2"]]}]"#);
    let vb = write(dir.path(), "vb.json", r#"{"invariant":[{"fiber":"eqrel","blocks":[["0"],["1"]]}]}"#);
    let (code, doc, _) = run(&["game", "invariant", b.to_str().unwrap(), vb.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["join_is_bisimulation"], true);
    let bad = write(dir.path(), "bad.json", &format!("[{TOTAL2}]"));
    let (code, doc, _) = run(&["game", "invariant", b.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["invariant"], false);

    let args = [
        "game",
        "compose",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        "--sigma",
        "and",
        va.to_str().unwrap(),
        vb.to_str().unwrap(),
    ];
    let (code, doc, _) = run(&args);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["composite_invariant"], true);
    assert_eq!(doc["equivalence"]["holds"], true);
    assert_eq!(doc["invariant"][0].as_array().unwrap().len(), 2);
}

#[test]
fn spoiler_wins_from_the_total_relation() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let p = write(dir.path(), "p.json", TOTAL2);
    let (code, doc, _) = run(&["game", "solve", k.to_str().unwrap(), "--start", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(doc["winner"], "spoiler");
    assert!(doc["spoiler_move"]["map"].is_object());
}

#[test]
fn play_and_replay() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let p = write(dir.path(), "p.json", TOTAL2);
    let t = dir.path().join("t.json");
    let mut child = bin()
        .args(["game", "play", k.to_str().unwrap(), "--start", p.to_str().unwrap(), "-o", t.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // An illegal move first, then the constant-true test.
    child.stdin.take().unwrap().write_all(b"* 00\n* 11\n").unwrap();
    let (code, _, err) = finish(child.wait_with_output().unwrap());
    assert_eq!(code, 0);
    assert!(err.contains("rejected") && err.contains("decent"), "{err}");
    assert!(err.contains("winner: spoiler"), "{err}");
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(doc["winner"], "spoiler");
    assert_eq!(doc["moves"].as_array().unwrap().len(), 1);

    let (code, doc, _) =
        run(&["game", "play", k.to_str().unwrap(), "--start", p.to_str().unwrap(), "--replay", t.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(doc["reproduced"], true);
}

#[test]
fn diagonal_start_ends_at_once() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let p = write(dir.path(), "p.json", r#"{"fiber":"eqrel","blocks":[["0"],["1"]]}"#);
    let out =
        bin().args(["game", "play", k.to_str().unwrap(), "--start", p.to_str().unwrap()]).stdin(Stdio::null()).output().unwrap();
    let (code, doc, _) = finish(out);
    assert_eq!(code, 0);
    assert_eq!(doc["winner"], "duplicator");
    assert!(doc["moves"].as_array().unwrap().is_empty());
}

#[test]
fn text_format() {
    let dir = TempDir::new().unwrap();
    let k = write(dir.path(), "k.json", DEADLOCK);
    let out = bin().args(["bisim", k.to_str().unwrap(), "--format", "text"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("eqrel {0} {1}"), "{text}");
    assert!(text.contains("converged: true"));
}

#[test]
fn selftest_single_criterion() {
    let (code, doc, err) = run(&["selftest", "3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], true);
    assert!(err.contains("[PASS]"));
}
