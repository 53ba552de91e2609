#![no_main]

use codensity::io::{parse_system, render_system, to_pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_system(text) {
        let back = parse_system(&to_pretty(&render_system(&s))).expect("rendered systems parse");
        assert_eq!(back, s);
    }
});
