//! The fuzz corpus seeds stay meaningful: every seed except the deliberately
//! broken ones parses and round-trips.

use std::fs;
use std::path::PathBuf;

use codensity::codensity::LiftingSpec;
use codensity::fibers::Carrier;
use codensity::games::CodensityGame;
use codensity::io::*;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn system_seeds() {
    for (name, text) in seeds("parse_system") {
        match parse_system(&text) {
            Ok(s) => assert_eq!(parse_system(&to_pretty(&render_system(&s))).unwrap(), s, "{name}"),
            Err(e) => assert!(name.starts_with("broken"), "{name}: {e}"),
        }
    }
}

#[test]
fn fiber_seeds() {
    let c = Carrier::labelled(vec!["a".into(), "b".into(), "c".into()]).unwrap();
    for (name, text) in seeds("parse_fiber_object") {
        let p = parse_fiber_object(&text, Some(&c)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_fiber_object(&to_pretty(&render_fiber(&p)), Some(&c)).unwrap(), p);
    }
}

#[test]
fn invariant_seeds() {
    let c = Carrier::labelled(vec!["0".into(), "1".into()]).unwrap();
    for (name, text) in seeds("parse_invariant") {
        parse_invariant(&text, Some(&c)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let cs = [c, Carrier::labelled(vec!["p".into()]).unwrap()];
    for (name, text) in seeds("parse_composite_invariant") {
        parse_composite_invariant(&text, &cs).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn transcript_seeds() {
    let s = parse_system(r#"{"type":"kripke","states":["0","1"],"succ":{"0":["0"],"1":[]}}"#).unwrap();
    let g = CodensityGame::new(s, LiftingSpec::kripke()).unwrap();
    for (name, text) in seeds("parse_transcript") {
        let t = parse_transcript(&g, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(codensity::games::replay_transcript(g.clone(), &t, None).unwrap(), "{name}");
    }
}
