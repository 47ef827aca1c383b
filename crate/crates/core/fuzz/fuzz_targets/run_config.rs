#![no_main]

use foam_core::config::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::parse(text) {
        let _ = cfg.material();
        let _ = cfg.rve_config();
        let _ = cfg.beam_scenario();
        let _ = cfg.dataset_config();
    }
});
