#![no_main]

use foam_core::rve::{parse_geometry, write_geometry};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(geom) = parse_geometry(text) {
        // anything accepted must survive a write/parse roundtrip
        let again = parse_geometry(&write_geometry(&geom)).expect("roundtrip of a valid geometry");
        assert_eq!(again.walls.len(), geom.walls.len());
        assert_eq!(again.boundary_pairs.len(), geom.boundary_pairs.len());
    }
});
