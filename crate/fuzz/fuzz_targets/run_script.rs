#![no_main]

use debtclear_harness::script::{parse_script, run_script_with};
use libfuzzer_sys::fuzz_target;

// small capacity keeps every query cheap
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(script) = parse_script(text) {
        let _ = run_script_with(&script, 12);
    }
});
