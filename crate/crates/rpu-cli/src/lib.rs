//! Command-line experiment harness for the bounded-memory reliable learner:
//! seeded trial runs, epsilon sweeps, and certification against the
//! exhaustive consistency oracle. Records are newline-delimited JSON with an
//! embedded schema version; identical invocations produce byte-identical
//! output.

pub mod certify;
pub mod experiment;
pub mod records;
