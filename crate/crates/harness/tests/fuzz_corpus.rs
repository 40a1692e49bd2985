//! Replays the fuzz seed corpus through the same checks as the fuzz targets.

use std::fs;
use std::path::PathBuf;

use debtclear::{is_equivalent, solve_static};
use debtclear_harness::format::{format_static, parse_static};
use debtclear_harness::script::{parse_script, run_script_with};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let text = fs::read_to_string(&path).unwrap();
            (path, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_static_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("parse_static") {
        let Ok(instance) = parse_static(&text) else { continue };
        parsed += 1;
        let canonical = format_static(&instance);
        assert_eq!(parse_static(&canonical).as_ref(), Ok(&instance), "{}", path.display());
        if let Ok(plan) = solve_static(&instance.borrowings, instance.n) {
            assert!(is_equivalent(&instance.borrowings, &plan), "{}", path.display());
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn script_seeds() {
    for target in ["parse_script", "run_script"] {
        for (_, text) in seeds(target) {
            if let Ok(script) = parse_script(&text) {
                let _ = run_script_with(&script, 12);
            }
        }
    }
}
