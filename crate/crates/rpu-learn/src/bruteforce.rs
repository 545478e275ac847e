//! Independent exact/exhaustive consistency oracles for small instances.
//!
//! Given a transcript of selected query responses, `consistent_label_set`
//! returns the labels achievable at a probe point by hypotheses consistent
//! with the transcript; a label is inferred iff the set is a singleton.
//! Nothing here shares code with the class modules' inference paths — this
//! module certifies them.
//!
//! Rectangles solve coordinate-wise interval feasibility over `f64`
//! (comparisons are exact). Halfspaces solve linear feasibility in `(v, b)`
//! with exact `i128` rational arithmetic; inputs must be dyadic rationals
//! with modest magnitude (every test input lives on a power-of-two grid).
//! Trees enumerate a declared finite family exhaustively, plus an
//! independent recomputation of the rectangle-rule inference used at scale.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::Error;
use crate::oracle::{Label, Point, QueryResponse, Side};
use crate::trees::{DecisionTreeHypothesis, SplitDir, TreeSpec};

type Rat = Ratio<i128>;

/// Exact conversion of a dyadic-rational `f64`. Errors on values that are
/// not exactly `n / 2^e` with small `n`, `e` — the certifier refuses inputs
/// whose exactness it cannot guarantee through its arithmetic.
pub fn rat_from_f64(x: f64) -> Result<Rat, Error> {
    if !x.is_finite() || libm::fabs(x) > (1u64 << 20) as f64 {
        return Err(Error::InvalidConfig("certifier inputs must be small dyadic rationals"));
    }
    let mut num = x;
    let mut den: i128 = 1;
    let mut steps = 0;
    while libm::floor(num) != num {
        num *= 2.0;
        den *= 2;
        steps += 1;
        if steps > 20 {
            return Err(Error::InvalidConfig("certifier inputs must be small dyadic rationals"));
        }
    }
    Ok(Rat::new(num as i128, den))
}

/// Which hypothesis class the transcript talks about.
#[derive(Debug, Clone)]
pub enum ClassSpec {
    Rectangle { dim: usize },
    /// All trees with at most `max_leaves` leaves, splits `x_c >= t` with
    /// `t` drawn from the shared threshold grid.
    TreeFamily { dim: usize, max_leaves: usize, thresholds: Vec<f64> },
    Halfspace2d,
}

/// One selected response, as stored on a transcript.
#[derive(Debug, Clone)]
pub enum TranscriptEntry {
    Labeled { x: Point, label: Label },
    /// Rectangle odd-one-out: `InRectangle` or a violated `(coord, side)`.
    OddOneOut { x: Point, response: QueryResponse },
    SameLeaf { x: Point, y: Point, same: bool },
    /// A recorded comparison: `h(hi) >= h(lo)`.
    Comparison { hi: Point, lo: Point },
}

/// The labels achievable at a probe across all consistent hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelSet {
    pub positive: bool,
    pub negative: bool,
}

impl LabelSet {
    pub fn none() -> Self {
        LabelSet { positive: false, negative: false }
    }

    pub fn both(&self) -> bool {
        self.positive && self.negative
    }

    /// The inferred label, if the set is a singleton.
    pub fn singleton(&self) -> Option<Label> {
        match (self.positive, self.negative) {
            (true, false) => Some(Label::Positive),
            (false, true) => Some(Label::Negative),
            _ => None,
        }
    }

    pub fn contains(&self, l: Label) -> bool {
        match l {
            Label::Positive => self.positive,
            Label::Negative => self.negative,
        }
    }
}

/// Labels achievable at `probe` by hypotheses consistent with `transcript`.
pub fn consistent_label_set(
    class: &ClassSpec,
    transcript: &[TranscriptEntry],
    probe: &Point,
) -> Result<LabelSet, Error> {
    Ok(consistent_label_sets(class, transcript, core::slice::from_ref(probe))?[0])
}

/// Batch form: the transcript-dependent work is shared across probes.
pub fn consistent_label_sets(
    class: &ClassSpec,
    transcript: &[TranscriptEntry],
    probes: &[Point],
) -> Result<Vec<LabelSet>, Error> {
    match class {
        ClassSpec::Rectangle { dim } => rect_label_sets(*dim, transcript, probes),
        ClassSpec::Halfspace2d => half_label_sets(transcript, probes),
        ClassSpec::TreeFamily { dim, max_leaves, thresholds } => {
            tree_family_label_sets(*dim, *max_leaves, thresholds, transcript, probes)
        }
    }
}

// ---------------------------------------------------------------------------
// Rectangles: coordinate-wise interval feasibility.
//
// A box [a, b] consistent with the transcript has, per coordinate i,
// a_i in (L_i, A_i] and b_i in [B_i, U_i): L from too-small responses,
// A/B from the positive hull, U from too-large responses. Such a pair
// exists iff L < A, B < U, and L < U.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct CoordBounds {
    l: f64,
    a: f64,
    b: f64,
    u: f64,
}

impl CoordBounds {
    fn free() -> Self {
        CoordBounds { l: f64::NEG_INFINITY, a: f64::INFINITY, b: f64::NEG_INFINITY, u: f64::INFINITY }
    }

    fn feasible(&self) -> bool {
        self.l < self.a && self.b < self.u && self.l < self.u
    }
}

fn rect_label_sets(
    dim: usize,
    transcript: &[TranscriptEntry],
    probes: &[Point],
) -> Result<Vec<LabelSet>, Error> {
    let mut bounds = vec![CoordBounds::free(); dim];
    let absorb_positive = |bounds: &mut Vec<CoordBounds>, x: &Point| -> Result<(), Error> {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x.dim() });
        }
        for i in 0..dim {
            bounds[i].a = bounds[i].a.min(x.coord(i));
            bounds[i].b = bounds[i].b.max(x.coord(i));
        }
        Ok(())
    };
    for e in transcript {
        match e {
            TranscriptEntry::Labeled { x, label: Label::Positive } => {
                absorb_positive(&mut bounds, x)?;
            }
            TranscriptEntry::OddOneOut { x, response } => match response {
                QueryResponse::InRectangle => absorb_positive(&mut bounds, x)?,
                QueryResponse::OddOneOut { coord, side } => {
                    if x.dim() != dim || *coord >= dim {
                        return Err(Error::DimensionMismatch { expected: dim, got: x.dim() });
                    }
                    match side {
                        Side::TooSmall => bounds[*coord].l = bounds[*coord].l.max(x.coord(*coord)),
                        Side::TooLarge => bounds[*coord].u = bounds[*coord].u.min(x.coord(*coord)),
                    }
                }
                _ => return Err(Error::DataCorruption("not an odd-one-out response")),
            },
            TranscriptEntry::Labeled { label: Label::Negative, .. } => {
                // A bare negative is a disjunction over coordinates and
                // breaks coordinate-wise solving; transcripts carry
                // odd-one-out responses for negatives instead.
                return Err(Error::InvalidConfig(
                    "rectangle certifier needs odd-one-out responses for negatives",
                ));
            }
            _ => return Err(Error::InvalidConfig("entry not valid for rectangles")),
        }
    }
    if !bounds.iter().all(|c| c.feasible()) {
        return Err(Error::VacuousTranscript);
    }

    let mut out = Vec::with_capacity(probes.len());
    for p in probes {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
        }
        // Probe inside: the box must also contain p.
        let inside = (0..dim).all(|i| {
            let mut c = bounds[i];
            c.a = c.a.min(p.coord(i));
            c.b = c.b.max(p.coord(i));
            c.feasible()
        });
        // Probe outside: some coordinate excludes p on some side, the rest
        // stay base-feasible (they already are).
        let outside = (0..dim).any(|i| {
            let small = {
                let mut c = bounds[i];
                c.l = c.l.max(p.coord(i));
                c.feasible()
            };
            let large = {
                let mut c = bounds[i];
                c.u = c.u.min(p.coord(i));
                c.feasible()
            };
            small || large
        });
        out.push(LabelSet { positive: inside, negative: outside });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Halfspaces: exact linear feasibility in (v, b), ||v||_inf = 1.
//
// Scaling (v, b) by a positive constant preserves every constraint, so one
// component of v is pinned to +-1 (four branches) and the other, w, ranges
// over [-1, 1]. Every label constraint has coefficient 1 on b and every
// comparison has coefficient 0, so eliminating b is a single pass of
// pairing lower bounds on b against upper bounds; what remains is a one-
// variable system in w solved by exact interval intersection.
// ---------------------------------------------------------------------------

/// One-variable constraint `a * w <= r` (strict when flagged).
#[derive(Clone, Copy)]
struct WConstraint {
    a: Rat,
    r: Rat,
    strict: bool,
}

/// A closed/open interval for w, tightened constraint by constraint.
#[derive(Clone)]
struct WInterval {
    lo: Rat,
    lo_strict: bool,
    up: Rat,
    up_strict: bool,
    feasible: bool,
}

impl WInterval {
    fn unit_box() -> Self {
        WInterval {
            lo: -Rat::from_integer(1),
            lo_strict: false,
            up: Rat::from_integer(1),
            up_strict: false,
            feasible: true,
        }
    }

    fn add(&mut self, c: WConstraint) {
        if !self.feasible {
            return;
        }
        let zero = Rat::from_integer(0);
        if c.a == zero {
            if c.r < zero || (c.strict && c.r == zero) {
                self.feasible = false;
            }
            return;
        }
        let bound = c.r / c.a;
        if c.a > zero {
            if bound < self.up || (bound == self.up && c.strict && !self.up_strict) {
                self.up = bound;
                self.up_strict = c.strict;
            }
        } else if bound > self.lo || (bound == self.lo && c.strict && !self.lo_strict) {
            self.lo = bound;
            self.lo_strict = c.strict;
        }
    }

    fn nonempty(&self) -> bool {
        self.feasible
            && (self.lo < self.up || (self.lo == self.up && !self.lo_strict && !self.up_strict))
    }
}

/// Affine bound on b: `b >= c + m*w` or `b <= c + m*w`.
#[derive(Clone, Copy)]
struct BBound {
    c: Rat,
    m: Rat,
    strict: bool,
}

/// One of the four ||v||_inf = 1 branches, with b already eliminated from
/// the transcript constraints.
struct Branch {
    sigma: Rat,
    fixed: usize,
    lowers: Vec<BBound>,
    uppers: Vec<BBound>,
    base: WInterval,
}

impl Branch {
    fn combine(lo: &BBound, up: &BBound) -> WConstraint {
        // c_lo + m_lo w <= c_up + m_up w
        WConstraint { a: lo.m - up.m, r: up.c - lo.c, strict: lo.strict || up.strict }
    }

    /// (c, m) of the affine form value(x) - b = sigma*x_fixed + w*x_other.
    fn affine(&self, x: &Point) -> Result<(Rat, Rat), Error> {
        if x.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: x.dim() });
        }
        let xf = rat_from_f64(x.coord(self.fixed))?;
        let xo = rat_from_f64(x.coord(1 - self.fixed))?;
        Ok((self.sigma * xf, xo))
    }

    fn check(&self, probe: &Point, desired: Label) -> Result<bool, Error> {
        if !self.base.nonempty() {
            return Ok(false);
        }
        let (c, m) = self.affine(probe)?;
        let mut interval = self.base.clone();
        match desired {
            // b >= -(c + m w): pair with every upper bound.
            Label::Positive => {
                let lo = BBound { c: -c, m: -m, strict: false };
                for up in &self.uppers {
                    interval.add(Branch::combine(&lo, up));
                    if !interval.feasible {
                        return Ok(false);
                    }
                }
            }
            // b < -(c + m w): pair with every lower bound.
            Label::Negative => {
                let up = BBound { c: -c, m: -m, strict: true };
                for lo in &self.lowers {
                    interval.add(Branch::combine(lo, &up));
                    if !interval.feasible {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(interval.nonempty())
    }
}

fn half_label_sets(
    transcript: &[TranscriptEntry],
    probes: &[Point],
) -> Result<Vec<LabelSet>, Error> {
    let mut branches = Vec::with_capacity(4);
    for fixed in 0..2usize {
        for sgn in [1i128, -1] {
            let sigma = Rat::from_integer(sgn);
            let mut br = Branch {
                sigma,
                fixed,
                lowers: Vec::new(),
                uppers: Vec::new(),
                base: WInterval::unit_box(),
            };
            for e in transcript {
                match e {
                    TranscriptEntry::Labeled { x, label } => {
                        let (c, m) = br.affine(x)?;
                        match label {
                            Label::Positive => br.lowers.push(BBound { c: -c, m: -m, strict: false }),
                            Label::Negative => br.uppers.push(BBound { c: -c, m: -m, strict: true }),
                        }
                    }
                    TranscriptEntry::Comparison { hi, lo } => {
                        let (chi, mhi) = br.affine(hi)?;
                        let (clo, mlo) = br.affine(lo)?;
                        // sigma*d_f + w*d_o >= 0  ->  -(d_o) w <= sigma*d_f
                        br.base.add(WConstraint {
                            a: -(mhi - mlo),
                            r: chi - clo,
                            strict: false,
                        });
                    }
                    _ => return Err(Error::InvalidConfig("entry not valid for halfspaces")),
                }
            }
            // Eliminate b across the transcript once.
            'pairs: for lo in &br.lowers {
                for up in &br.uppers {
                    br.base.add(Branch::combine(lo, up));
                    if !br.base.feasible {
                        break 'pairs;
                    }
                }
            }
            branches.push(br);
        }
    }
    if !branches.iter().any(|b| b.base.nonempty()) {
        return Err(Error::VacuousTranscript);
    }

    let mut out = Vec::with_capacity(probes.len());
    for p in probes {
        let mut set = LabelSet::none();
        for br in &branches {
            if !set.positive && br.check(p, Label::Positive)? {
                set.positive = true;
            }
            if !set.negative && br.check(p, Label::Negative)? {
                set.negative = true;
            }
            if set.both() {
                break;
            }
        }
        out.push(set);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Trees.
// ---------------------------------------------------------------------------

/// Independent recomputation of the rectangle-rule inference straight from
/// a transcript: points proven co-leaf (connected through same-leaf "yes"
/// answers) form a component; a probe inside a labeled component's bounding
/// box gets that label.
pub fn tree_rect_inference(
    transcript: &[TranscriptEntry],
    probe: &Point,
) -> Result<Option<Label>, Error> {
    // Collect distinct points and edges.
    let mut pts: Vec<Point> = Vec::new();
    let index_of = |pts: &mut Vec<Point>, p: &Point| -> usize {
        if let Some(i) = pts.iter().position(|q| q == p) {
            i
        } else {
            pts.push(p.clone());
            pts.len() - 1
        }
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<(usize, Label)> = Vec::new();
    for e in transcript {
        match e {
            TranscriptEntry::Labeled { x, label } => {
                let i = index_of(&mut pts, x);
                labels.push((i, *label));
            }
            TranscriptEntry::SameLeaf { x, y, same } => {
                let i = index_of(&mut pts, x);
                let j = index_of(&mut pts, y);
                if *same {
                    edges.push((i, j));
                }
            }
            _ => return Err(Error::InvalidConfig("entry not valid for trees")),
        }
    }
    // Union-find.
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri] = rj;
        }
    }
    // Component label (must be unique) and bounding box.
    let mut comp_label: Vec<Option<Label>> = vec![None; pts.len()];
    for (i, l) in labels {
        let r = find(&mut parent, i);
        match comp_label[r] {
            None => comp_label[r] = Some(l),
            Some(prev) if prev != l => {
                return Err(Error::DataCorruption("conflicting labels in one proven leaf"));
            }
            _ => {}
        }
    }
    let dim = probe.dim();
    let mut hit: Option<Label> = None;
    for r in 0..pts.len() {
        let label = match comp_label[r] {
            Some(l) if find(&mut parent, r) == r => l,
            _ => continue,
        };
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for i in 0..pts.len() {
            if find(&mut parent, i) == r {
                if pts[i].dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: pts[i].dim() });
                }
                for c in 0..dim {
                    lo[c] = lo[c].min(pts[i].coord(c));
                    hi[c] = hi[c].max(pts[i].coord(c));
                }
            }
        }
        let inside = (0..dim).all(|c| lo[c] <= probe.coord(c) && probe.coord(c) <= hi[c]);
        if inside {
            match hit {
                None => hit = Some(label),
                Some(prev) if prev != label => {
                    return Err(Error::OracleInconsistency(
                        "overlapping proven leaves with different labels",
                    ));
                }
                _ => {}
            }
        }
    }
    Ok(hit)
}

/// Visit every tree with exactly `n` leaves over the declared split grid,
/// in a fixed order. The callback returns `false` to stop; the function
/// reports whether the walk ran to completion.
fn for_each_spec(
    n: usize,
    dim: usize,
    thresholds: &[f64],
    f: &mut dyn FnMut(&TreeSpec) -> bool,
) -> bool {
    if n == 1 {
        for lab in [Label::Positive, Label::Negative] {
            if !f(&TreeSpec::Leaf(lab)) {
                return false;
            }
        }
        return true;
    }
    for l in 1..n {
        let done = for_each_spec(l, dim, thresholds, &mut |left| {
            for_each_spec(n - l, dim, thresholds, &mut |right| {
                for coord in 0..dim {
                    for &t in thresholds {
                        let spec = TreeSpec::Split {
                            coord,
                            threshold: t,
                            dir: SplitDir::Ge,
                            yes: Box::new(left.clone()),
                            no: Box::new(right.clone()),
                        };
                        if !f(&spec) {
                            return false;
                        }
                    }
                }
                true
            })
        });
        if !done {
            return false;
        }
    }
    true
}

fn family_size(max_leaves: usize, splits: usize) -> u64 {
    let mut counts = vec![0u64; max_leaves + 1];
    if max_leaves >= 1 {
        counts[1] = 2;
    }
    for n in 2..=max_leaves {
        let mut total = 0u64;
        for l in 1..n {
            total = total.saturating_add(
                counts[l].saturating_mul(counts[n - l]).saturating_mul(splits as u64),
            );
        }
        counts[n] = total;
    }
    counts.iter().fold(0u64, |acc, c| acc.saturating_add(*c))
}

fn tree_consistent(t: &DecisionTreeHypothesis, transcript: &[TranscriptEntry]) -> Result<bool, Error> {
    for e in transcript {
        match e {
            TranscriptEntry::Labeled { x, label } => {
                if t.label(x) != *label {
                    return Ok(false);
                }
            }
            TranscriptEntry::SameLeaf { x, y, same } => {
                if (t.leaf_id(x) == t.leaf_id(y)) != *same {
                    return Ok(false);
                }
            }
            _ => return Err(Error::InvalidConfig("entry not valid for trees")),
        }
    }
    Ok(true)
}

/// Exhaustive label sets over the declared tree family. Exact within the
/// family; intended for small instances only (the family size is guarded).
pub fn tree_family_label_sets(
    dim: usize,
    max_leaves: usize,
    thresholds: &[f64],
    transcript: &[TranscriptEntry],
    probes: &[Point],
) -> Result<Vec<LabelSet>, Error> {
    if max_leaves == 0 || thresholds.is_empty() || dim == 0 {
        return Err(Error::InvalidConfig("empty tree family"));
    }
    if family_size(max_leaves, dim * thresholds.len()) > 2_000_000 {
        return Err(Error::InvalidConfig("tree family too large to enumerate"));
    }
    let mut sets = vec![LabelSet::none(); probes.len()];
    let mut any_consistent = false;
    let mut failure: Option<Error> = None;
    for n in 1..=max_leaves {
        let saturated = !for_each_spec(n, dim, thresholds, &mut |spec| {
            let t = DecisionTreeHypothesis::from_structure(dim, spec.clone());
            match tree_consistent(&t, transcript) {
                Err(e) => {
                    failure = Some(e);
                    false
                }
                Ok(false) => true,
                Ok(true) => {
                    any_consistent = true;
                    for (i, p) in probes.iter().enumerate() {
                        match t.label(p) {
                            Label::Positive => sets[i].positive = true,
                            Label::Negative => sets[i].negative = true,
                        }
                    }
                    // Keep going until every probe is saturated.
                    !sets.iter().all(|s| s.both())
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if saturated && any_consistent {
            break;
        }
    }
    if !any_consistent {
        return Err(Error::VacuousTranscript);
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfspaces::HalfspaceHypothesis;
    use crate::rectangles::RectangleHypothesis;
    use crate::sample::{seeded_rng, uniform_f64};

    fn pt(coords: &[f64]) -> Point {
        Point::new(coords.to_vec())
    }

    /// Grid-rational coordinate in [-8, 8] with denominator 2^10.
    fn grid_coord(rng: &mut crate::sample::Rng) -> f64 {
        let steps = 16.0 * 1024.0;
        let i = libm::floor(uniform_f64(rng) * steps) as i64 - 8 * 1024;
        i as f64 / 1024.0
    }

    #[test]
    fn dyadic_conversion_is_exact() {
        assert_eq!(rat_from_f64(0.0).unwrap(), Rat::from_integer(0));
        assert_eq!(rat_from_f64(-2.5).unwrap(), Rat::new(-5, 2));
        assert_eq!(rat_from_f64(3.0 / 1024.0).unwrap(), Rat::new(3, 1024));
        assert!(rat_from_f64(0.1).is_err());
        assert!(rat_from_f64(f64::NAN).is_err());
    }

    #[test]
    fn one_positive_point_spec_examples() {
        let class = ClassSpec::Rectangle { dim: 2 };
        let p = pt(&[0.5, -0.25]);
        let transcript = [TranscriptEntry::Labeled { x: p.clone(), label: Label::Positive }];
        // probe = p: every consistent box contains p.
        let s = consistent_label_set(&class, &transcript, &p).unwrap();
        assert_eq!(s.singleton(), Some(Label::Positive));
        // probe != p: a huge box and a tight box are both consistent.
        let q = pt(&[0.5, 0.0]);
        assert!(consistent_label_set(&class, &transcript, &q).unwrap().both());
    }

    #[test]
    fn rect_odd_one_out_constraints_bite() {
        let class = ClassSpec::Rectangle { dim: 1 };
        // positive at 0, too-large at 2: box is [a, b], a <= 0 <= b < 2.
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[0.0]), label: Label::Positive },
            TranscriptEntry::OddOneOut {
                x: pt(&[2.0]),
                response: QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge },
            },
        ];
        // 3 is right of the too-large point: always outside.
        let s = consistent_label_set(&class, &transcript, &pt(&[3.0])).unwrap();
        assert_eq!(s.singleton(), Some(Label::Negative));
        // 1 is between: b can fall on either side.
        assert!(consistent_label_set(&class, &transcript, &pt(&[1.0])).unwrap().both());
        // 0 is the positive point itself.
        let s = consistent_label_set(&class, &transcript, &pt(&[0.0])).unwrap();
        assert_eq!(s.singleton(), Some(Label::Positive));
    }

    #[test]
    fn rect_vacuous_transcript_flagged() {
        let class = ClassSpec::Rectangle { dim: 1 };
        // positive at 5 but too-large at 3: impossible.
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[5.0]), label: Label::Positive },
            TranscriptEntry::OddOneOut {
                x: pt(&[3.0]),
                response: QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge },
            },
        ];
        assert!(matches!(
            consistent_label_set(&class, &transcript, &pt(&[0.0])),
            Err(Error::VacuousTranscript)
        ));
    }

    #[test]
    fn rect_monotonicity_under_more_responses() {
        let class = ClassSpec::Rectangle { dim: 2 };
        let mut rng = seeded_rng(5, 9);
        for _ in 0..50 {
            let h = RectangleHypothesis::random(2, 4.0, &mut rng);
            let mut transcript = Vec::new();
            let mut probes = Vec::new();
            for _ in 0..12 {
                let x = pt(&[grid_coord(&mut rng), grid_coord(&mut rng)]);
                match crate::rectangles::odd_one_out(&h, &x).unwrap().first().unwrap() {
                    QueryResponse::InRectangle => {
                        transcript.push(TranscriptEntry::Labeled { x, label: Label::Positive })
                    }
                    resp => transcript
                        .push(TranscriptEntry::OddOneOut { x, response: resp.clone() }),
                }
            }
            for _ in 0..20 {
                probes.push(pt(&[grid_coord(&mut rng), grid_coord(&mut rng)]));
            }
            let half = consistent_label_sets(&class, &transcript[..6], &probes).unwrap();
            let full = consistent_label_sets(&class, &transcript, &probes).unwrap();
            for (i, p) in probes.iter().enumerate() {
                // True label always achievable; more responses only shrink.
                assert!(full[i].contains(h.label(p)));
                assert!(half[i].positive || !full[i].positive || !half[i].negative);
                assert!(!full[i].positive || half[i].positive);
                assert!(!full[i].negative || half[i].negative);
            }
        }
    }

    fn grid_halfspace(rng: &mut crate::sample::Rng) -> HalfspaceHypothesis {
        // Rational normal and bias so labels are exactly computable.
        loop {
            let v = [grid_coord(rng), grid_coord(rng)];
            if v != [0.0, 0.0] {
                return HalfspaceHypothesis::from_raw(v, grid_coord(rng));
            }
        }
    }

    /// Label via exact rational arithmetic on the unnormalized form.
    fn exact_label(v: [f64; 2], b: f64, x: &Point) -> Label {
        let val = rat_from_f64(v[0]).unwrap() * rat_from_f64(x.coord(0)).unwrap()
            + rat_from_f64(v[1]).unwrap() * rat_from_f64(x.coord(1)).unwrap()
            + rat_from_f64(b).unwrap();
        if val >= Rat::from_integer(0) {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    #[test]
    fn halfspace_true_label_always_achievable() {
        let mut rng = seeded_rng(17, 2);
        for _ in 0..20 {
            let v = [grid_coord(&mut rng), grid_coord(&mut rng)];
            if v == [0.0, 0.0] {
                continue;
            }
            let b = grid_coord(&mut rng);
            let mut transcript = Vec::new();
            let mut labeled: Vec<Point> = Vec::new();
            for _ in 0..10 {
                let x = pt(&[grid_coord(&mut rng), grid_coord(&mut rng)]);
                transcript.push(TranscriptEntry::Labeled {
                    x: x.clone(),
                    label: exact_label(v, b, &x),
                });
                labeled.push(x);
            }
            // Add exact comparisons between consecutive labeled points.
            for w in labeled.windows(2) {
                let val = |p: &Point| {
                    rat_from_f64(v[0]).unwrap() * rat_from_f64(p.coord(0)).unwrap()
                        + rat_from_f64(v[1]).unwrap() * rat_from_f64(p.coord(1)).unwrap()
                };
                let (hi, lo) = if val(&w[0]) >= val(&w[1]) {
                    (w[0].clone(), w[1].clone())
                } else {
                    (w[1].clone(), w[0].clone())
                };
                transcript.push(TranscriptEntry::Comparison { hi, lo });
            }
            let probes: Vec<Point> =
                (0..30).map(|_| pt(&[grid_coord(&mut rng), grid_coord(&mut rng)])).collect();
            let sets = consistent_label_sets(&ClassSpec::Halfspace2d, &transcript, &probes)
                .unwrap();
            for (i, p) in probes.iter().enumerate() {
                assert!(sets[i].contains(exact_label(v, b, p)), "true label must be consistent");
            }
        }
    }

    #[test]
    fn halfspace_forced_labels_on_a_line() {
        // Transcript pinning h to "x0 >= 0" exactly is impossible with
        // finitely many points, but a positive and a negative on the axis
        // force respective labels at those exact points.
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[1.0, 0.0]), label: Label::Positive },
            TranscriptEntry::Labeled { x: pt(&[-1.0, 0.0]), label: Label::Negative },
        ];
        let s = consistent_label_set(&ClassSpec::Halfspace2d, &transcript, &pt(&[1.0, 0.0]))
            .unwrap();
        assert_eq!(s.singleton(), Some(Label::Positive));
        // A point on the segment between them can go either way.
        assert!(consistent_label_set(&ClassSpec::Halfspace2d, &transcript, &pt(&[0.0, 0.0]))
            .unwrap()
            .both());
        let _ = grid_halfspace(&mut seeded_rng(0, 0));
    }

    #[test]
    fn halfspace_vacuous_transcript_flagged() {
        // Same point labeled both ways.
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[1.0, 1.0]), label: Label::Positive },
            TranscriptEntry::Labeled { x: pt(&[1.0, 1.0]), label: Label::Negative },
        ];
        assert!(matches!(
            consistent_label_set(&ClassSpec::Halfspace2d, &transcript, &pt(&[0.0, 0.0])),
            Err(Error::VacuousTranscript)
        ));
    }

    #[test]
    fn tree_rect_inference_joins_components() {
        let a = pt(&[0.0, 0.0]);
        let b = pt(&[1.0, 1.0]);
        let c = pt(&[2.0, 2.0]);
        let transcript = [
            TranscriptEntry::Labeled { x: a.clone(), label: Label::Positive },
            TranscriptEntry::Labeled { x: c.clone(), label: Label::Positive },
            TranscriptEntry::SameLeaf { x: a.clone(), y: b.clone(), same: true },
            TranscriptEntry::SameLeaf { x: b.clone(), y: c.clone(), same: true },
        ];
        // The joined hull [0,2]^2 covers the middle.
        assert_eq!(
            tree_rect_inference(&transcript, &pt(&[1.5, 0.5])).unwrap(),
            Some(Label::Positive)
        );
        // Outside the hull: abstain.
        assert_eq!(tree_rect_inference(&transcript, &pt(&[3.0, 0.0])).unwrap(), None);
        // Without the joining edges only the singletons infer.
        let sparse = [TranscriptEntry::Labeled { x: a.clone(), label: Label::Positive }];
        assert_eq!(tree_rect_inference(&sparse, &a).unwrap(), Some(Label::Positive));
        assert_eq!(tree_rect_inference(&sparse, &b).unwrap(), None);
    }

    #[test]
    fn tree_family_enumeration_matches_hand_reasoning() {
        let class = ClassSpec::TreeFamily {
            dim: 1,
            max_leaves: 2,
            thresholds: vec![-0.25, 0.0, 0.25],
        };
        // Positive at 0.5, negative at -0.5: every threshold separates.
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[0.5]), label: Label::Positive },
            TranscriptEntry::Labeled { x: pt(&[-0.5]), label: Label::Negative },
        ];
        // At 0.75: above every threshold, always with the positive point.
        let s = consistent_label_set(&class, &transcript, &pt(&[0.75])).unwrap();
        assert_eq!(s.singleton(), Some(Label::Positive));
        // At -0.75: always with the negative point.
        let s = consistent_label_set(&class, &transcript, &pt(&[-0.75])).unwrap();
        assert_eq!(s.singleton(), Some(Label::Negative));
        // Between the labeled points: threshold choice decides.
        assert!(consistent_label_set(&class, &transcript, &pt(&[0.1])).unwrap().both());
    }

    #[test]
    fn tree_family_vacuous_and_guard() {
        let class = ClassSpec::TreeFamily { dim: 1, max_leaves: 1, thresholds: vec![0.0] };
        let transcript = [
            TranscriptEntry::Labeled { x: pt(&[0.5]), label: Label::Positive },
            TranscriptEntry::Labeled { x: pt(&[0.25]), label: Label::Negative },
        ];
        // A single leaf cannot produce two labels.
        assert!(matches!(
            consistent_label_set(&class, &transcript, &pt(&[0.0])),
            Err(Error::VacuousTranscript)
        ));
        let huge = ClassSpec::TreeFamily {
            dim: 3,
            max_leaves: 8,
            thresholds: (0..64).map(|i| i as f64).collect(),
        };
        assert!(consistent_label_set(&huge, &[], &pt(&[0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn tree_family_agrees_with_rect_rule_where_rect_rule_infers() {
        // Rectangle-rule inference is a restriction of full inference:
        // whenever it infers, the family oracle must agree (within the
        // family that generated the data).
        let thresholds = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let class = ClassSpec::TreeFamily {
            dim: 2,
            max_leaves: 2,
            thresholds: thresholds.to_vec(),
        };
        let spec = TreeSpec::Split {
            coord: 0,
            threshold: 0.0,
            dir: SplitDir::Ge,
            yes: Box::new(TreeSpec::Leaf(Label::Positive)),
            no: Box::new(TreeSpec::Leaf(Label::Negative)),
        };
        let t = DecisionTreeHypothesis::from_structure(2, spec);
        let mut rng = seeded_rng(23, 4);
        let mut transcript = Vec::new();
        let mut seen: Vec<Point> = Vec::new();
        for _ in 0..10 {
            let x = pt(&[grid_coord(&mut rng), grid_coord(&mut rng)]);
            transcript.push(TranscriptEntry::Labeled { x: x.clone(), label: t.label(&x) });
            for y in &seen {
                transcript.push(TranscriptEntry::SameLeaf {
                    x: x.clone(),
                    y: y.clone(),
                    same: t.leaf_id(&x) == t.leaf_id(y),
                });
            }
            seen.push(x);
        }
        let probes: Vec<Point> =
            (0..25).map(|_| pt(&[grid_coord(&mut rng), grid_coord(&mut rng)])).collect();
        let sets = consistent_label_sets(&class, &transcript, &probes).unwrap();
        for (i, p) in probes.iter().enumerate() {
            assert!(sets[i].contains(t.label(p)));
            if let Some(l) = tree_rect_inference(&transcript, p).unwrap() {
                assert_eq!(sets[i].singleton(), Some(l), "rect rule inferred, family must too");
            }
        }
    }
}
