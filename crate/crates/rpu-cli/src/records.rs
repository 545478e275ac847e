//! The flat per-trial record schema. One JSON object per line, append-only,
//! no timestamps: payloads are a pure function of the experiment spec.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MetricRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub class: String,
    pub dim: usize,
    /// Tree size; 0 for classes without one.
    pub s: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub mode: String,
    pub trial: u64,
    /// True when the trial aborted on an oracle-consistency error.
    pub failed: bool,
    pub error: String,
    pub queries_total: u64,
    pub race_label_queries: u64,
    pub batch_queries: u64,
    pub samples_total: u64,
    pub rounds_executed: u64,
    pub peak_points: usize,
    pub peak_points_occupied: usize,
    pub peak_responses: usize,
    pub abort_reason: String,
    pub abstention_estimate: f64,
    pub abstention_halfwidth: f64,
    pub mislabel_count: u64,
    /// Doubling learner's accepted size guess; 0 otherwise.
    pub final_guess: usize,
}
