#![no_main]

use foam_core::dataset::{label_envelope_check, parse_manifest_csv, write_manifest_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_manifest_csv(text) {
        let csv = write_manifest_csv(&records).expect("valid records serialize");
        assert_eq!(parse_manifest_csv(&csv).expect("roundtrip"), records);
        let _ = label_envelope_check(&records);
    }
});
