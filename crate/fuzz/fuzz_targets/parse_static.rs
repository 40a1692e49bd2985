#![no_main]

use debtclear::{is_equivalent, solve_static};
use debtclear_harness::format::{format_static, parse_static};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(instance) = parse_static(text) else { return };
    let canonical = format_static(&instance);
    assert_eq!(parse_static(&canonical).as_ref(), Ok(&instance));
    if instance.n <= 12 {
        if let Ok(plan) = solve_static(&instance.borrowings, instance.n) {
            assert!(is_equivalent(&instance.borrowings, &plan));
        }
    }
});
