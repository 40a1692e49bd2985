//! File formats, operation scripts, benchmark case generators and timing
//! runs for the `debtclear` engine.

pub mod bench;
pub mod cases;
pub mod format;
pub mod rng;
pub mod script;
