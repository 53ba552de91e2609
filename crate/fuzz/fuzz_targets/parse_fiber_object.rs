#![no_main]

use codensity::fibers::Carrier;
use codensity::io::{parse_fiber_object, render_fiber, to_pretty};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Alternate between free-standing documents and ones read against a
    // fixed three-state carrier.
    let carrier = Carrier::labelled(vec!["a".into(), "b".into(), "c".into()]).unwrap();
    let given = if data.len() % 2 == 0 { Some(&carrier) } else { None };
    if let Ok(p) = parse_fiber_object(text, given) {
        let back = parse_fiber_object(&to_pretty(&render_fiber(&p)), given).expect("rendered objects parse");
        assert_eq!(back, p);
    }
});
