#![no_main]

use codensity::fibers::Carrier;
use codensity::io::{parse_invariant, render_invariant, to_pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let carrier = Carrier::labelled(vec!["0".into(), "1".into()]).unwrap();
    if let Ok(v) = parse_invariant(text, Some(&carrier)) {
        assert_eq!(parse_invariant(&to_pretty(&render_invariant(&v)), Some(&carrier)).unwrap(), v);
    }
});
