//! Certification suites: module inference checked probe-by-probe against
//! the independent consistency oracles on random instances.
//!
//! All instance coordinates live on the 2^-10 grid in [-8, 8], so the
//! certifier's rational arithmetic and the modules' floating-point sign
//! tests are both exact on them.

use rpu_learn::bruteforce::{
    consistent_label_sets, tree_rect_inference, ClassSpec, TranscriptEntry,
};
use rpu_learn::halfspaces::{
    build_cone, infer_halfspace, sort_by_value, ConeState, HalfspaceHypothesis,
};
use rpu_learn::rectangles::{
    compress_rect, infer_rect, odd_one_out, RectCompressedState, RectangleHypothesis,
};
use rpu_learn::trees::{group_by_leaf, infer_tree, DecisionTreeHypothesis, LeafGroupState, SplitDir, TreeSpec};
use rpu_learn::{
    query_key, seeded_rng, uniform_f64, Counters, Label, Point, QueryCtx, QueryResponse,
    ResponsePolicy, Rng,
};

#[derive(Debug, Clone, Default)]
pub struct CertReport {
    pub pairs: u64,
    pub probes_checked: u64,
    pub violations: u64,
    pub size_cap_breaches: u64,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.size_cap_breaches == 0 && self.pairs > 0
    }
}

fn grid_coord(rng: &mut Rng) -> f64 {
    let steps = 16.0 * 1024.0;
    let i = (uniform_f64(rng) * steps).floor() as i64 - 8 * 1024;
    i as f64 / 1024.0
}

fn grid_point(dim: usize, rng: &mut Rng) -> Point {
    Point::new((0..dim).map(|_| grid_coord(rng)).collect())
}

fn sample_size(rng: &mut Rng, max: usize) -> usize {
    1 + (uniform_f64(rng) * max as f64).floor() as usize
}

/// Rectangles: compressed-state inference must return a label exactly where
/// the interval-feasibility oracle forces one. Monochromatic samples of
/// either sign, dimensions 1..=max_dim.
pub fn certify_rect(pairs: u64, probes: usize, max_dim: usize, seed: u64) -> CertReport {
    let mut report = CertReport::default();
    let mut rng = seeded_rng(seed, 11);
    let mut produced = 0u64;
    let mut attempt = 0u64;
    while produced < pairs && attempt < pairs * 50 {
        attempt += 1;
        let dim = 1 + (produced as usize) % max_dim;
        let h = RectangleHypothesis::random(dim, 4.0, &mut rng);
        let sign = if produced % 2 == 0 { Label::Positive } else { Label::Negative };
        let want = sample_size(&mut rng, 40);
        let mut sample = Vec::new();
        let mut tries = 0;
        while sample.len() < want && tries < 20_000 {
            tries += 1;
            let x = grid_point(dim, &mut rng);
            if h.label(&x) == sign {
                sample.push(x);
            }
        }
        if sample.is_empty() {
            continue;
        }
        produced += 1;

        let policy = ResponsePolicy::SeededRandom(seed ^ produced);
        let mut counters = Counters::default();
        let mut ctx = QueryCtx::new(policy, &mut counters);
        let mut transcript = Vec::new();
        let mut resp_pairs = Vec::new();
        for x in &sample {
            let valid = odd_one_out(&h, x).unwrap();
            let resp = ctx.select(&valid, query_key("odd-one-out", &[x])).unwrap();
            match resp {
                QueryResponse::InRectangle => transcript
                    .push(TranscriptEntry::Labeled { x: x.clone(), label: Label::Positive }),
                ref r => {
                    transcript.push(TranscriptEntry::OddOneOut { x: x.clone(), response: r.clone() })
                }
            }
            resp_pairs.push((x.clone(), resp));
        }
        let state = compress_rect(&RectCompressedState::new(dim), &resp_pairs).unwrap();
        let (pos_kept, neg_kept) = state.retained();
        if pos_kept + neg_kept > 2 * dim {
            report.size_cap_breaches += 1;
        }
        let probe_pts: Vec<Point> = (0..probes).map(|_| grid_point(dim, &mut rng)).collect();
        let sets =
            consistent_label_sets(&ClassSpec::Rectangle { dim }, &transcript, &probe_pts).unwrap();
        for (i, p) in probe_pts.iter().enumerate() {
            report.probes_checked += 1;
            if infer_rect(&state, p) != sets[i].singleton() {
                report.violations += 1;
            }
        }
    }
    report.pairs = produced;
    report
}

/// Halfspaces, monochromatic: the compressed cone must label exactly where
/// the exact LP forces a label. Probes within `tol` of the hypothesis
/// boundary are excluded.
pub fn certify_halfspace(pairs: u64, probes: usize, tol: f64, seed: u64) -> CertReport {
    let mut report = CertReport::default();
    let mut rng = seeded_rng(seed, 12);
    let mut produced = 0u64;
    let mut attempt = 0u64;
    while produced < pairs && attempt < pairs * 50 {
        attempt += 1;
        let v = [grid_coord(&mut rng), grid_coord(&mut rng)];
        if v == [0.0, 0.0] {
            continue;
        }
        let h = HalfspaceHypothesis::from_raw(v, grid_coord(&mut rng));
        let sign = if produced % 2 == 0 { Label::Positive } else { Label::Negative };
        let want = sample_size(&mut rng, 40);
        let mut sample = Vec::new();
        let mut tries = 0;
        while sample.len() < want && tries < 20_000 {
            tries += 1;
            let x = grid_point(2, &mut rng);
            if h.label(&x) == sign {
                sample.push(x);
            }
        }
        if sample.is_empty() {
            continue;
        }
        produced += 1;

        // Selection is pure in (valid, policy, key), so replaying the sort
        // under the same policy reproduces exactly the comparisons that the
        // compressor sees.
        let policy = ResponsePolicy::SeededRandom(seed ^ produced);
        let mut counters = Counters::default();
        let mut ctx = QueryCtx::new(policy, &mut counters);
        let (_, recorded) = sort_by_value(&sample, &h, &mut ctx).unwrap();
        let mut transcript: Vec<TranscriptEntry> = sample
            .iter()
            .map(|x| TranscriptEntry::Labeled { x: x.clone(), label: sign })
            .collect();
        for rc in &recorded {
            transcript.push(TranscriptEntry::Comparison { hi: rc.hi.clone(), lo: rc.lo.clone() });
        }
        let mut ctx = QueryCtx::new(policy, &mut counters);
        let cone = build_cone(&ConeState::empty(sign), &sample, &h, &mut ctx).unwrap();
        if cone.retained() > 5 {
            report.size_cap_breaches += 1;
        }
        let empty_other = ConeState::empty(sign.flip());
        let probe_pts: Vec<Point> = (0..probes)
            .map(|_| grid_point(2, &mut rng))
            .filter(|p| h.value(p).abs() >= tol)
            .collect();
        let sets =
            consistent_label_sets(&ClassSpec::Halfspace2d, &transcript, &probe_pts).unwrap();
        for (i, p) in probe_pts.iter().enumerate() {
            report.probes_checked += 1;
            let got = match sign {
                Label::Positive => infer_halfspace(&cone, &empty_other, p).unwrap(),
                Label::Negative => infer_halfspace(&empty_other, &cone, p).unwrap(),
            };
            if got != sets[i].singleton() {
                report.violations += 1;
            }
        }
    }
    report.pairs = produced;
    report
}

/// Random tree from the enumerable family: splits on the threshold grid.
fn family_tree(dim: usize, max_leaves: usize, grid: &[f64], rng: &mut Rng) -> DecisionTreeHypothesis {
    fn gen(leaves: usize, dim: usize, grid: &[f64], rng: &mut Rng) -> TreeSpec {
        if leaves == 1 {
            let label =
                if uniform_f64(rng) < 0.5 { Label::Positive } else { Label::Negative };
            return TreeSpec::Leaf(label);
        }
        let left = 1 + (uniform_f64(rng) * (leaves - 1) as f64).floor() as usize;
        let left = left.min(leaves - 1);
        let coord = (uniform_f64(rng) * dim as f64).floor() as usize;
        let t = grid[(uniform_f64(rng) * grid.len() as f64).floor() as usize % grid.len()];
        TreeSpec::Split {
            coord: coord.min(dim - 1),
            threshold: t,
            dir: SplitDir::Ge,
            yes: Box::new(gen(left, dim, grid, rng)),
            no: Box::new(gen(leaves - left, dim, grid, rng)),
        }
    }
    let leaves = 1 + (uniform_f64(rng) * max_leaves as f64).floor() as usize;
    DecisionTreeHypothesis::from_structure(dim, gen(leaves.min(max_leaves), dim, grid, rng))
}

/// Trees (enumerable family, d <= 2, s <= 4, grid thresholds): grouped-state
/// inference must match the rectangle-rule recomputation from the full
/// pairwise transcript. Monochromatic samples per the compression contract.
pub fn certify_tree(pairs: u64, probes: usize, seed: u64) -> CertReport {
    let mut report = CertReport::default();
    let mut rng = seeded_rng(seed, 13);
    let grid: Vec<f64> = (0..8).map(|i| -7.0 + 2.0 * i as f64).collect();
    let dim = 2;
    let max_leaves = 4;
    let mut produced = 0u64;
    let mut attempt = 0u64;
    while produced < pairs && attempt < pairs * 50 {
        attempt += 1;
        let h = family_tree(dim, max_leaves, &grid, &mut rng);
        let sign = if produced % 2 == 0 { Label::Positive } else { Label::Negative };
        let want = sample_size(&mut rng, 40);
        let mut sample = Vec::new();
        let mut tries = 0;
        while sample.len() < want && tries < 20_000 {
            tries += 1;
            let x = grid_point(dim, &mut rng);
            if h.label(&x) == sign {
                sample.push(x);
            }
        }
        if sample.is_empty() {
            continue;
        }
        produced += 1;

        // Full transcript: labels plus every pairwise same-leaf answer.
        let mut transcript = Vec::new();
        for x in &sample {
            transcript.push(TranscriptEntry::Labeled { x: x.clone(), label: sign });
        }
        for i in 0..sample.len() {
            for j in (i + 1)..sample.len() {
                transcript.push(TranscriptEntry::SameLeaf {
                    x: sample[i].clone(),
                    y: sample[j].clone(),
                    same: h.leaf_id(&sample[i]) == h.leaf_id(&sample[j]),
                });
            }
        }
        let mut counters = Counters::default();
        let mut ctx = QueryCtx::new(ResponsePolicy::LowestIndex, &mut counters);
        let mut state = LeafGroupState::new(dim, max_leaves);
        let labeled: Vec<(Point, Label)> = sample.iter().map(|x| (x.clone(), sign)).collect();
        group_by_leaf(&mut state, &h, &labeled, &mut ctx).unwrap();
        if state.retained() > 2 * dim * max_leaves {
            report.size_cap_breaches += 1;
        }
        for _ in 0..probes {
            let p = grid_point(dim, &mut rng);
            report.probes_checked += 1;
            let got = infer_tree(&state, &p).unwrap();
            let want = tree_rect_inference(&transcript, &p).unwrap();
            if got != want {
                report.violations += 1;
            }
        }
    }
    report.pairs = produced;
    report
}

/// Mixed-sign halfspace instances: each cone against the LP oracle on its
/// own sign's sub-transcript (labels of that sign plus that sign's recorded
/// comparisons). The abstain region of the combined classifier must be
/// exactly the complement of the two per-sign exact inference sets. The
/// joint-transcript LP is deliberately not the reference: cross-sign label
/// constraints force labels (e.g. one positive p and one negative n force
/// 2p - n positive) that no within-sign compression can represent, and the
/// cone iff is a per-sign statement.
pub fn certify_halfspace_mixed(instances: u64, probes: usize, tol: f64, seed: u64) -> CertReport {
    let mut report = CertReport::default();
    let mut rng = seeded_rng(seed, 14);
    let mut produced = 0u64;
    let mut attempt = 0u64;
    while produced < instances && attempt < instances * 50 {
        attempt += 1;
        let v = [grid_coord(&mut rng), grid_coord(&mut rng)];
        if v == [0.0, 0.0] {
            continue;
        }
        let h = HalfspaceHypothesis::from_raw(v, grid_coord(&mut rng));
        let n = 20;
        let points: Vec<Point> = (0..n).map(|_| grid_point(2, &mut rng)).collect();
        let pos: Vec<Point> =
            points.iter().filter(|p| h.label(p) == Label::Positive).cloned().collect();
        let neg: Vec<Point> =
            points.iter().filter(|p| h.label(p) == Label::Negative).cloned().collect();
        produced += 1;

        let policy = ResponsePolicy::SeededRandom(seed ^ (produced << 8));
        let mut counters = Counters::default();
        let mut cones = Vec::new();
        let mut transcripts = Vec::new();
        for (sign, batch) in [(Label::Positive, &pos), (Label::Negative, &neg)] {
            let mut transcript: Vec<TranscriptEntry> = batch
                .iter()
                .map(|x| TranscriptEntry::Labeled { x: x.clone(), label: sign })
                .collect();
            let mut ctx = QueryCtx::new(policy, &mut counters);
            let (_, recorded) = sort_by_value(batch, &h, &mut ctx).unwrap();
            for rc in &recorded {
                transcript
                    .push(TranscriptEntry::Comparison { hi: rc.hi.clone(), lo: rc.lo.clone() });
            }
            transcripts.push(transcript);
            let mut ctx = QueryCtx::new(policy, &mut counters);
            cones.push(build_cone(&ConeState::empty(sign), batch, &h, &mut ctx).unwrap());
        }
        let (pos_cone, neg_cone) = (&cones[0], &cones[1]);

        let probe_pts: Vec<Point> = (0..probes)
            .map(|_| grid_point(2, &mut rng))
            .filter(|p| h.value(p).abs() >= tol)
            .collect();
        let pos_sets =
            consistent_label_sets(&ClassSpec::Halfspace2d, &transcripts[0], &probe_pts).unwrap();
        let neg_sets =
            consistent_label_sets(&ClassSpec::Halfspace2d, &transcripts[1], &probe_pts).unwrap();
        for (i, p) in probe_pts.iter().enumerate() {
            report.probes_checked += 1;
            let expected = if pos_sets[i].singleton() == Some(Label::Positive) {
                Some(Label::Positive)
            } else if neg_sets[i].singleton() == Some(Label::Negative) {
                Some(Label::Negative)
            } else {
                None
            };
            if infer_halfspace(pos_cone, neg_cone, p).unwrap() != expected {
                report.violations += 1;
            }
        }
    }
    report.pairs = produced;
    report
}
