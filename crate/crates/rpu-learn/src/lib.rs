//! Bounded-memory active learning of reliable (never-wrong, may-abstain)
//! classifiers via lossless sample compression.
//!
//! The crate provides three fully worked concept classes with enriched-query
//! oracles and size-bounded lossless compression schemes:
//!
//! * axis-aligned rectangles with the odd-one-out oracle (`rectangles`),
//! * decision trees with the same-leaf oracle (`trees`),
//! * 2D halfspaces with the comparison oracle (`halfspaces`),
//!
//! together with the bounded-memory learner loop (`learner`), shared oracle
//! and tape machinery (`core` types at the crate root), and an independent
//! exhaustive consistency oracle for certification (`bruteforce`).
//!
//! The crate is `no_std` + `alloc`; all IO lives in the companion CLI crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
mod oracle;
mod sample;

pub mod bruteforce;
pub mod halfspaces;
pub mod learner;
pub mod rectangles;
pub mod trees;

pub use error::Error;
pub use oracle::{
    adversary_select, query_key, Counters, Label, Order, Point, QueryCtx, QueryResponse,
    ResponsePolicy, Side, TapeAccount,
};
pub use sample::{draw_uninferred, seeded_rng, uniform_f64, Distribution, PartialClassifier, Rng};
