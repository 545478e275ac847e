//! Seeded trial batches over (class, epsilon) cells, record emission, and
//! the sweep summary (per-cell medians, slope of median queries in
//! log2(1/epsilon)).

use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use rpu_learn::learner::{
    run_bounded, run_doubling_tree, run_passive, HalfspaceTask, LearnerConfig, RectTask,
    TreeTask, TrialMetrics,
};
use rpu_learn::{
    halfspaces::HalfspaceHypothesis, rectangles::RectangleHypothesis,
    trees::DecisionTreeHypothesis, seeded_rng, Distribution, ResponsePolicy,
};

use crate::records::{MetricRecord, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Rect,
    Tree,
    Halfspace2d,
}

impl ClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassKind::Rect => "rect",
            ClassKind::Tree => "tree",
            ClassKind::Halfspace2d => "halfspace2d",
        }
    }
}

impl FromStr for ClassKind {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(ClassKind::Rect),
            "tree" => Ok(ClassKind::Tree),
            "halfspace2d" => Ok(ClassKind::Halfspace2d),
            other => bail!("unknown class '{other}' (rect | tree | halfspace2d)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Bounded,
    Passive,
    Doubling,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Bounded => "bounded",
            Mode::Passive => "passive",
            Mode::Doubling => "doubling",
        }
    }
}

impl FromStr for Mode {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounded" => Ok(Mode::Bounded),
            "passive" => Ok(Mode::Passive),
            "doubling" => Ok(Mode::Doubling),
            other => bail!("unknown mode '{other}' (bounded | passive | doubling)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub class: ClassKind,
    pub dim: usize,
    pub tree_size: usize,
    pub epsilons: Vec<f64>,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// `key=value` constant overrides applied on top of the defaults.
    pub constants: Vec<(String, f64)>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            bail!("epsilon list must be nonempty");
        }
        for &e in &self.epsilons {
            if !(e > 0.0 && e < 1.0) {
                bail!("epsilon {e} out of (0,1)");
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            bail!("delta {} out of (0,1)", self.delta);
        }
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        if self.dim == 0 {
            bail!("dim must be positive");
        }
        if self.class == ClassKind::Halfspace2d && self.dim != 2 {
            bail!("halfspace2d is two-dimensional");
        }
        if self.class == ClassKind::Tree && self.tree_size == 0 {
            bail!("tree class needs --tree-size >= 1");
        }
        if self.mode == Mode::Doubling && self.class != ClassKind::Tree {
            bail!("doubling mode applies to trees only");
        }
        // Dry-run the constant overrides.
        let mut cfg = LearnerConfig::default();
        apply_constants(&mut cfg, &self.constants)?;
        Ok(())
    }
}

pub fn apply_constants(cfg: &mut LearnerConfig, overrides: &[(String, f64)]) -> Result<()> {
    for (key, val) in overrides {
        match key.as_str() {
            "c1" => cfg.c1 = *val,
            "c2" => cfg.c2 = *val,
            "c3" => cfg.c3 = *val,
            "c4" => cfg.c4 = *val,
            "c5" => cfg.c5 = *val,
            "stage_c1" => cfg.stage_c1 = *val,
            "stage_c2" => cfg.stage_c2 = *val,
            "batch_factor" => cfg.batch_factor = *val as usize,
            "eval_factor" => cfg.eval_factor = *val,
            "guess_cap" => cfg.guess_cap = *val as usize,
            other => bail!("unknown constant '{other}'"),
        }
    }
    Ok(())
}

pub fn parse_constants(s: &str) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .with_context(|| format!("constant '{part}' is not key=value"))?;
        let val: f64 = v.parse().with_context(|| format!("constant '{part}' value"))?;
        out.push((k.to_string(), val));
    }
    Ok(out)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-trial seed: pure function of (seed base, cell index, trial index).
pub fn trial_seed(base: u64, cell: usize, trial: u64) -> u64 {
    splitmix64(base ^ ((cell as u64) << 40) ^ trial)
}

#[derive(Debug, Clone)]
pub struct CellSummary {
    pub epsilon: f64,
    pub median_queries: f64,
    pub median_batch_queries: f64,
    pub median_samples: f64,
    pub mean_abstention: f64,
    pub trials: u64,
    pub failures: u64,
    pub mislabels: u64,
    pub peak_points: usize,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub cells: Vec<CellSummary>,
    /// Least-squares slope of median queries against log2(1/epsilon).
    pub slope: f64,
    pub r2: f64,
    pub total_mislabels: u64,
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Ordinary least squares for y on x; returns (slope, r2).
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    if x.len() < 2 {
        return (0.0, 1.0);
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return (0.0, 1.0);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

fn run_one_trial(
    spec: &ExperimentSpec,
    epsilon: f64,
    seed: u64,
) -> Result<TrialMetrics, rpu_learn::Error> {
    let mut cfg = LearnerConfig {
        epsilon,
        delta: spec.delta,
        seed,
        ..LearnerConfig::default()
    };
    apply_constants(&mut cfg, &spec.constants).expect("overrides validated upfront");
    let policy = ResponsePolicy::SeededRandom(seed);
    let mut hrng = seeded_rng(seed, 0);
    let dist = Distribution::centered_box(spec.dim, 1.0);
    match (spec.class, spec.mode) {
        (ClassKind::Rect, Mode::Bounded) => {
            let h = RectangleHypothesis::random(spec.dim, 0.8, &mut hrng);
            run_bounded(RectTask::new(h), &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Rect, Mode::Passive) => {
            let h = RectangleHypothesis::random(spec.dim, 0.8, &mut hrng);
            run_passive(RectTask::new(h), &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Tree, Mode::Bounded) => {
            let h = DecisionTreeHypothesis::random(spec.dim, spec.tree_size, 1.0, &mut hrng);
            run_bounded(TreeTask::new(h, spec.tree_size), &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Tree, Mode::Passive) => {
            let h = DecisionTreeHypothesis::random(spec.dim, spec.tree_size, 1.0, &mut hrng);
            run_passive(TreeTask::new(h, spec.tree_size), &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Tree, Mode::Doubling) => {
            let h = DecisionTreeHypothesis::random(spec.dim, spec.tree_size, 1.0, &mut hrng);
            run_doubling_tree(&h, &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Halfspace2d, Mode::Bounded) => {
            let h = HalfspaceHypothesis::random(0.5, &mut hrng);
            run_bounded(HalfspaceTask::new(h), &dist, &cfg, policy).map(|(_, m)| m)
        }
        (ClassKind::Halfspace2d, Mode::Passive) => {
            let h = HalfspaceHypothesis::random(0.5, &mut hrng);
            run_passive(HalfspaceTask::new(h), &dist, &cfg, policy).map(|(_, m)| m)
        }
        _ => unreachable!("validated upfront"),
    }
}

/// Run the whole grid, emitting one record per trial to `sink`.
pub fn run_experiment(spec: &ExperimentSpec, sink: &mut dyn Write) -> Result<Summary> {
    spec.validate()?;
    let experiment_id = format!(
        "{}-{}-d{}-s{}-seed{}",
        spec.class.as_str(),
        spec.mode.as_str(),
        spec.dim,
        spec.tree_size,
        spec.seed
    );
    let mut cells = Vec::new();
    let mut total_mislabels = 0u64;
    for (cell, &epsilon) in spec.epsilons.iter().enumerate() {
        let mut queries = Vec::new();
        let mut batch_queries = Vec::new();
        let mut samples = Vec::new();
        let mut abst_sum = 0.0;
        let mut failures = 0u64;
        let mut mislabels = 0u64;
        let mut peak_points = 0usize;
        for trial in 0..spec.trials {
            let seed = trial_seed(spec.seed, cell, trial);
            let mut rec = MetricRecord {
                schema_version: SCHEMA_VERSION,
                experiment: experiment_id.clone(),
                class: spec.class.as_str().to_string(),
                dim: spec.dim,
                s: if spec.class == ClassKind::Tree { spec.tree_size } else { 0 },
                epsilon,
                delta: spec.delta,
                seed,
                mode: spec.mode.as_str().to_string(),
                trial,
                failed: false,
                error: String::new(),
                queries_total: 0,
                race_label_queries: 0,
                batch_queries: 0,
                samples_total: 0,
                rounds_executed: 0,
                peak_points: 0,
                peak_points_occupied: 0,
                peak_responses: 0,
                abort_reason: String::new(),
                abstention_estimate: 0.0,
                abstention_halfwidth: 0.0,
                mislabel_count: 0,
                final_guess: 0,
            };
            match run_one_trial(spec, epsilon, seed) {
                Ok(m) => {
                    rec.queries_total = m.queries_total;
                    rec.race_label_queries = m.race_label_queries;
                    rec.batch_queries = m.batch_queries;
                    rec.samples_total = m.samples_total;
                    rec.rounds_executed = m.rounds_executed;
                    rec.peak_points = m.peak_points;
                    rec.peak_points_occupied = m.peak_points_occupied;
                    rec.peak_responses = m.peak_responses;
                    rec.abort_reason = m.abort_reason.as_str().to_string();
                    rec.abstention_estimate = m.abstention_estimate;
                    rec.abstention_halfwidth = m.abstention_halfwidth;
                    rec.mislabel_count = m.mislabel_count;
                    rec.final_guess = m.final_guess.unwrap_or(0);
                    queries.push(m.queries_total as f64);
                    batch_queries.push(m.batch_queries as f64);
                    samples.push(m.samples_total as f64);
                    abst_sum += m.abstention_estimate;
                    mislabels += m.mislabel_count;
                    peak_points = peak_points.max(m.peak_points);
                }
                Err(e) => {
                    rec.failed = true;
                    rec.error = e.to_string();
                    failures += 1;
                }
            }
            serde_json::to_writer(&mut *sink, &rec)?;
            sink.write_all(b"\n")?;
        }
        total_mislabels += mislabels;
        let done = (spec.trials - failures).max(1) as f64;
        cells.push(CellSummary {
            epsilon,
            median_queries: median(&mut queries),
            median_batch_queries: median(&mut batch_queries),
            median_samples: median(&mut samples),
            mean_abstention: abst_sum / done,
            trials: spec.trials,
            failures,
            mislabels,
            peak_points,
        });
    }
    let xs: Vec<f64> = cells.iter().map(|c| (1.0 / c.epsilon).log2()).collect();
    let ys: Vec<f64> = cells.iter().map(|c| c.median_queries).collect();
    let (slope, r2) = fit_line(&xs, &ys);
    Ok(Summary { cells, slope, r2, total_mislabels })
}
