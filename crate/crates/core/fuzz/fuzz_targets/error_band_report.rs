#![no_main]

use foam_core::fuzzy::{make_fuzzy, parse_error_band};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_error_band(text) {
        assert!(r > 0.0 && r < 1.0);
        make_fuzzy(1000.0, r).expect("accepted band builds a fuzzy number");
    }
});
