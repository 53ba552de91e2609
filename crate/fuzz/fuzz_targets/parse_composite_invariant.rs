#![no_main]

use codensity::fibers::Carrier;
use codensity::io::{parse_composite_invariant, render_composite_invariant, to_pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let carriers = [Carrier::labelled(vec!["0".into(), "1".into()]).unwrap(), Carrier::labelled(vec!["p".into()]).unwrap()];
    if let Ok(v) = parse_composite_invariant(text, &carriers) {
        assert_eq!(parse_composite_invariant(&to_pretty(&render_composite_invariant(&v)), &carriers).unwrap(), v);
    }
});
