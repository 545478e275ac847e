//! Axis-aligned rectangles with the odd-one-out oracle.
//!
//! Positives compress to the coordinate-wise min/max hull (at most `2d`
//! witnesses); negatives keep one representative per `(coordinate, side)`
//! response key, the one whose violation is weakest, which infers all other
//! points carrying that response. Total retained points never exceed `2d`
//! per sign.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::oracle::{query_key, Label, Point, QueryCtx, QueryResponse, Side};
use crate::sample::{uniform_f64, Rng};

/// A product of intervals `[a_1,b_1] x ... x [a_d,b_d]`; endpoints may be
/// infinite (in which case the interval is unbounded on that side).
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleHypothesis {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl RectangleHypothesis {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "need lo <= hi");
        RectangleHypothesis { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    /// Membership is closed on finite endpoints.
    pub fn contains(&self, x: &Point) -> bool {
        x.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (a, b))| c >= a && c <= b)
    }

    pub fn label(&self, x: &Point) -> Label {
        if self.contains(x) {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    /// A random rectangle inside `[-r, r]^d` covering roughly the central
    /// portion of each coordinate, as experiment ground truth.
    pub fn random(dim: usize, r: f64, rng: &mut Rng) -> Self {
        let mut lo = Vec::with_capacity(dim);
        let mut hi = Vec::with_capacity(dim);
        for _ in 0..dim {
            let a = -r + 2.0 * r * uniform_f64(rng);
            let b = -r + 2.0 * r * uniform_f64(rng);
            lo.push(a.min(b));
            hi.push(a.max(b));
        }
        RectangleHypothesis { lo, hi }
    }
}

/// The full valid-response set of the odd-one-out oracle on `x`.
///
/// `{InRectangle}` iff `x` is inside; otherwise every violated
/// `(coordinate, side)` pair. Nonempty by construction.
pub fn odd_one_out(
    h: &RectangleHypothesis,
    x: &Point,
) -> Result<Vec<QueryResponse>, Error> {
    if x.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: x.dim() });
    }
    if h.contains(x) {
        return Ok(vec![QueryResponse::InRectangle]);
    }
    let mut valid = Vec::new();
    for (i, c) in x.coords().iter().enumerate() {
        if *c > h.hi[i] {
            valid.push(QueryResponse::OddOneOut { coord: i, side: Side::TooLarge });
        }
        if *c < h.lo[i] {
            valid.push(QueryResponse::OddOneOut { coord: i, side: Side::TooSmall });
        }
    }
    Ok(valid)
}

/// Issue one counted odd-one-out query; the adversary selects the response.
pub fn ask_odd_one_out(
    h: &RectangleHypothesis,
    x: &Point,
    ctx: &mut QueryCtx<'_>,
) -> Result<QueryResponse, Error> {
    let valid = odd_one_out(h, x)?;
    ctx.select(&valid, query_key("odd-one-out", &[x]))
}

/// The size-`<= 2d` per sign compressed state for rectangles.
#[derive(Debug, Clone)]
pub struct RectCompressedState {
    dim: usize,
    /// Coordinate-wise (min, max) hull over retained positives, if any.
    pos_box: Option<(Vec<f64>, Vec<f64>)>,
    /// Witness points spanning the hull: per coordinate, the argmin and
    /// argmax points. Kept for tape accounting; inference uses the hull.
    pos_witness_lo: Vec<Option<Point>>,
    pos_witness_hi: Vec<Option<Point>>,
    /// One retained negative per (coordinate, side): index `2i` holds the
    /// too-small representative for coordinate `i`, `2i + 1` the too-large.
    neg_reps: Vec<Option<Point>>,
}

impl RectCompressedState {
    pub fn new(dim: usize) -> Self {
        RectCompressedState {
            dim,
            pos_box: None,
            pos_witness_lo: vec![None; dim],
            pos_witness_hi: vec![None; dim],
            neg_reps: vec![None; 2 * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pos_box(&self) -> Option<(&[f64], &[f64])> {
        self.pos_box.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()))
    }

    pub fn neg_rep(&self, coord: usize, side: Side) -> Option<&Point> {
        self.neg_reps[rep_slot(coord, side)].as_ref()
    }

    /// Number of distinct retained points per sign: `(positives, negatives)`.
    /// Each is at most `2d`.
    pub fn retained(&self) -> (usize, usize) {
        let mut pos: Vec<&Point> = Vec::new();
        for w in self.pos_witness_lo.iter().chain(&self.pos_witness_hi).flatten() {
            if !pos.iter().any(|p| *p == w) {
                pos.push(w);
            }
        }
        let mut neg: Vec<&Point> = Vec::new();
        for w in self.neg_reps.iter().flatten() {
            if !neg.iter().any(|p| *p == w) {
                neg.push(w);
            }
        }
        (pos.len(), neg.len())
    }

    /// Stored responses on the work tape: one odd-one-out answer per
    /// occupied negative slot (positive hull needs only labels).
    pub fn stored_responses(&self) -> usize {
        self.neg_reps.iter().filter(|r| r.is_some()).count()
    }
}

fn rep_slot(coord: usize, side: Side) -> usize {
    2 * coord
        + match side {
            Side::TooSmall => 0,
            Side::TooLarge => 1,
        }
}

/// Fold new `(point, selected response)` pairs into a compressed state.
///
/// Positives (`LabelAnswer(Positive)` or `InRectangle`) expand the hull;
/// negatives (`OddOneOut`) replace the representative of their response key
/// when their violation is weaker (smaller value for too-large, larger for
/// too-small). Ties keep the incumbent.
pub fn compress_rect(
    state: &RectCompressedState,
    new_points: &[(Point, QueryResponse)],
) -> Result<RectCompressedState, Error> {
    let mut out = state.clone();
    for (x, resp) in new_points {
        if x.dim() != out.dim {
            return Err(Error::DimensionMismatch { expected: out.dim, got: x.dim() });
        }
        match resp {
            QueryResponse::LabelAnswer(Label::Positive) | QueryResponse::InRectangle => {
                absorb_positive(&mut out, x);
            }
            QueryResponse::OddOneOut { coord, side } => {
                absorb_negative(&mut out, x, *coord, *side)?;
            }
            _ => {
                return Err(Error::DataCorruption(
                    "rectangle state fed a response from another oracle",
                ))
            }
        }
    }
    // A negative representative inside the positive hull means the stored
    // responses cannot come from one rectangle.
    if let Some((lo, hi)) = &out.pos_box {
        for (slot, rep) in out.neg_reps.iter().enumerate() {
            if let Some(p) = rep {
                let coord = slot / 2;
                let violated = if slot % 2 == 1 {
                    p.coord(coord) > hi[coord]
                } else {
                    p.coord(coord) < lo[coord]
                };
                if !violated {
                    return Err(Error::DataCorruption(
                        "odd-one-out response inconsistent with positive hull",
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn absorb_positive(state: &mut RectCompressedState, x: &Point) {
    match &mut state.pos_box {
        None => {
            state.pos_box = Some((x.coords().to_vec(), x.coords().to_vec()));
            for i in 0..state.dim {
                state.pos_witness_lo[i] = Some(x.clone());
                state.pos_witness_hi[i] = Some(x.clone());
            }
        }
        Some((lo, hi)) => {
            for (i, c) in x.coords().iter().enumerate() {
                if *c < lo[i] {
                    lo[i] = *c;
                    state.pos_witness_lo[i] = Some(x.clone());
                }
                if *c > hi[i] {
                    hi[i] = *c;
                    state.pos_witness_hi[i] = Some(x.clone());
                }
            }
        }
    }
}

fn absorb_negative(
    state: &mut RectCompressedState,
    x: &Point,
    coord: usize,
    side: Side,
) -> Result<(), Error> {
    if coord >= state.dim {
        return Err(Error::DataCorruption("odd-one-out coordinate out of range"));
    }
    let slot = rep_slot(coord, side);
    let keep_new = match &state.neg_reps[slot] {
        None => true,
        Some(incumbent) => match side {
            // Keep the weakest violation; ties keep the incumbent.
            Side::TooLarge => x.coord(coord) < incumbent.coord(coord),
            Side::TooSmall => x.coord(coord) > incumbent.coord(coord),
        },
    };
    if keep_new {
        state.neg_reps[slot] = Some(x.clone());
    }
    Ok(())
}

/// Label inference from a compressed state.
///
/// Positive iff inside the positive hull (closed); negative iff some
/// retained representative forces the same violation (`x_i >= z_i` for a
/// too-large representative `z`, `x_i <= z_i` for too-small); abstain
/// otherwise.
pub fn infer_rect(state: &RectCompressedState, x: &Point) -> Option<Label> {
    if let Some((lo, hi)) = &state.pos_box {
        if x.coords().iter().zip(lo.iter().zip(hi.iter())).all(|(c, (a, b))| c >= a && c <= b)
        {
            return Some(Label::Positive);
        }
    }
    for (slot, rep) in state.neg_reps.iter().enumerate() {
        if let Some(z) = rep {
            let coord = slot / 2;
            let hit = if slot % 2 == 1 {
                x.coord(coord) >= z.coord(coord)
            } else {
                x.coord(coord) <= z.coord(coord)
            };
            if hit {
                return Some(Label::Negative);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Counters, ResponsePolicy};
    use crate::sample::seeded_rng;

    fn unit_square() -> RectangleHypothesis {
        RectangleHypothesis::new(vec![0.0, 0.0], vec![1.0, 1.0])
    }

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec())
    }

    #[test]
    fn interior_point_answers_star() {
        let valid = odd_one_out(&unit_square(), &pt(&[0.5, 0.5])).unwrap();
        assert_eq!(valid, vec![QueryResponse::InRectangle]);
    }

    #[test]
    fn single_violation_is_forced() {
        let valid = odd_one_out(&unit_square(), &pt(&[2.0, 0.5])).unwrap();
        assert_eq!(
            valid,
            vec![QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge }]
        );
    }

    #[test]
    fn all_violations_enumerated() {
        let mut valid = odd_one_out(&unit_square(), &pt(&[2.0, -1.0])).unwrap();
        valid.sort_unstable();
        assert_eq!(
            valid,
            vec![
                QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge },
                QueryResponse::OddOneOut { coord: 1, side: Side::TooSmall },
            ]
        );
    }

    #[test]
    fn dimension_mismatch_rejected() {
        assert!(matches!(
            odd_one_out(&unit_square(), &pt(&[0.5])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn positive_hull_drops_midpoint() {
        let state = RectCompressedState::new(2);
        let pos = |c: &[f64]| (pt(c), QueryResponse::LabelAnswer(Label::Positive));
        let state = compress_rect(
            &state,
            &[pos(&[0.0, 0.0]), pos(&[1.0, 1.0]), pos(&[0.5, 0.5])],
        )
        .unwrap();
        let (lo, hi) = state.pos_box().unwrap();
        assert_eq!((lo, hi), (&[0.0, 0.0][..], &[1.0, 1.0][..]));
        let (p, _) = state.retained();
        assert!(p <= 2, "midpoint must not be a witness");
    }

    #[test]
    fn weaker_too_large_representative_wins() {
        let state = RectCompressedState::new(2);
        let resp = QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge };
        let state = compress_rect(
            &state,
            &[(pt(&[2.0, 0.5]), resp), (pt(&[3.0, 0.5]), resp)],
        )
        .unwrap();
        assert_eq!(state.neg_rep(0, Side::TooLarge), Some(&pt(&[2.0, 0.5])));
        let (_, n) = state.retained();
        assert_eq!(n, 1);
    }

    #[test]
    fn inference_matches_spec_examples() {
        let state = RectCompressedState::new(2);
        let state = compress_rect(
            &state,
            &[
                (pt(&[0.0, 0.0]), QueryResponse::LabelAnswer(Label::Positive)),
                (pt(&[1.0, 1.0]), QueryResponse::LabelAnswer(Label::Positive)),
                (pt(&[2.0, 0.5]), QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge }),
            ],
        )
        .unwrap();
        assert_eq!(infer_rect(&state, &pt(&[0.5, 0.5])), Some(Label::Positive));
        assert_eq!(infer_rect(&state, &pt(&[2.5, 7.0])), Some(Label::Negative));
        assert_eq!(infer_rect(&state, &pt(&[1.5, 0.5])), None);
    }

    #[test]
    fn corrupted_response_detected() {
        let state = RectCompressedState::new(2);
        let bad = compress_rect(
            &state,
            &[
                (pt(&[0.0, 0.0]), QueryResponse::LabelAnswer(Label::Positive)),
                (pt(&[5.0, 5.0]), QueryResponse::LabelAnswer(Label::Positive)),
                // Claims coordinate 0 is too large at 1.0, yet positives
                // reach 5.0: no rectangle explains both.
                (pt(&[1.0, 0.5]), QueryResponse::OddOneOut { coord: 0, side: Side::TooLarge }),
            ],
        );
        assert!(matches!(bad, Err(Error::DataCorruption(_))));
    }

    #[test]
    fn soundness_on_random_instances() {
        // infer_rect never contradicts the generating rectangle, under any
        // adversary policy.
        let mut rng = seeded_rng(11, 1);
        for trial in 0..200 {
            let h = RectangleHypothesis::random(3, 1.0, &mut rng);
            let dist = crate::Distribution::centered_box(3, 1.5);
            let mut counters = Counters::default();
            let mut ctx = QueryCtx::new(ResponsePolicy::SeededRandom(trial), &mut counters);
            let mut state = RectCompressedState::new(3);
            for _ in 0..30 {
                let x = dist.sample(&mut rng);
                let resp = if h.contains(&x) {
                    QueryResponse::LabelAnswer(Label::Positive)
                } else {
                    ask_odd_one_out(&h, &x, &mut ctx).unwrap()
                };
                state = compress_rect(&state, &[(x, resp)]).unwrap();
            }
            for _ in 0..50 {
                let probe = dist.sample(&mut rng);
                if let Some(l) = infer_rect(&state, &probe) {
                    assert_eq!(l, h.label(&probe));
                }
            }
            let (p, n) = state.retained();
            assert!(p <= 6 && n <= 6);
        }
    }
}
