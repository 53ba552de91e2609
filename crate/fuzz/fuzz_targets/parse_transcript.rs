#![no_main]

use std::sync::OnceLock;

use codensity::codensity::LiftingSpec;
use codensity::games::CodensityGame;
use codensity::io::{parse_system, parse_transcript, render_transcript, to_pretty};
use libfuzzer_sys::fuzz_target;

fn game() -> &'static CodensityGame {
    static G: OnceLock<CodensityGame> = OnceLock::new();
    G.get_or_init(|| {
        let s = parse_system(r#"{"type":"kripke","states":["0","1"],"succ":{"0":["0"],"1":[]}}"#).unwrap();
        CodensityGame::new(s, LiftingSpec::kripke()).unwrap()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let g = game();
    if let Ok(t) = parse_transcript(g, text) {
        assert_eq!(parse_transcript(g, &to_pretty(&render_transcript(g, &t))).unwrap(), t);
    }
});
