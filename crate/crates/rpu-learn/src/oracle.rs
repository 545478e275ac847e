//! Shared domain types and the oracle/adversary abstraction.
//!
//! Every enriched query is modelled as a nonempty set of valid responses; an
//! adversary (`ResponsePolicy`) selects one. Query and sample counters plus
//! the query/work tape account live here so that every class and the learner
//! share one notion of cost.

use alloc::vec::Vec;

use crate::error::Error;

/// A point of the instance space `R^d`.
///
/// All coordinates are finite; NaN and infinities are rejected at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "instance points must have finite coordinates"
        );
        assert!(!coords.is_empty(), "instance points need dimension >= 1");
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    /// Lexicographic comparison on coordinates, used for deterministic
    /// tie-breaking. Total because coordinates are finite.
    pub fn lex_cmp(&self, other: &Point) -> core::cmp::Ordering {
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            match a.partial_cmp(b).expect("finite coords") {
                core::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }
}

impl From<&[f64]> for Point {
    fn from(c: &[f64]) -> Self {
        Point::new(c.to_vec())
    }
}

/// Binary label. `sign(0)` is fixed to positive throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

/// Which side of an interval a coordinate violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    TooSmall,
    TooLarge,
}

/// Outcome of a comparison query on an ordered pair `(x, x')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    FirstGeSecond,
    SecondGeFirst,
}

/// A single query response, one variant per oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QueryResponse {
    LabelAnswer(Label),
    /// The `*` answer of the odd-one-out oracle: the point is inside.
    InRectangle,
    /// Violated coordinate index and side, for a point outside a rectangle.
    OddOneOut { coord: usize, side: Side },
    SameLeaf(bool),
    Comparison(Order),
}

/// How the adversary picks among multiple valid responses.
#[derive(Debug, Clone, Copy)]
pub enum ResponsePolicy {
    /// Smallest response in the canonical ordering. Deterministic; used in
    /// unit tests.
    LowestIndex,
    /// Pseudorandom but a pure function of (seed, query identity).
    SeededRandom(u64),
    /// Arbitrary external strategy; receives the canonically sorted valid
    /// set and returns an index into it.
    AdversarialCallback(fn(&[QueryResponse]) -> usize),
}

/// Stable 64-bit identity for a query: oracle name plus the ordered point
/// payloads. Lets the seeded-random adversary answer reproducibly without
/// global state.
pub fn query_key(oracle: &str, points: &[&Point]) -> u64 {
    // FNV-1a over the name and raw coordinate bits.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |byte: u8| {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for b in oracle.as_bytes() {
        eat(*b);
    }
    for p in points {
        for c in p.coords() {
            for b in c.to_bits().to_le_bytes() {
                eat(b);
            }
        }
    }
    h
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// The adversary: selects one valid response from a nonempty set.
///
/// Pure in `(valid, policy, query_key)`; the order of `valid` does not
/// matter because selection happens on the canonically sorted set.
pub fn adversary_select(
    valid: &[QueryResponse],
    policy: &ResponsePolicy,
    query_key: u64,
) -> Result<QueryResponse, Error> {
    if valid.is_empty() {
        return Err(Error::EmptyResponseSet);
    }
    let mut sorted: Vec<QueryResponse> = valid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let idx = match policy {
        ResponsePolicy::LowestIndex => 0,
        ResponsePolicy::SeededRandom(seed) => {
            (splitmix64(seed ^ query_key) % sorted.len() as u64) as usize
        }
        ResponsePolicy::AdversarialCallback(f) => {
            let i = f(&sorted);
            assert!(i < sorted.len(), "adversary callback index out of range");
            i
        }
    };
    Ok(sorted[idx])
}

/// Exact sample and query counters; monotone over a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub samples_drawn: u64,
    pub queries_made: u64,
}

/// Query-tape / work-tape occupancy with peak tracking.
///
/// Points are counted as stored points (not bits); work-tape usage is
/// counted in stored query responses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TapeAccount {
    points_stored: usize,
    responses_stored: usize,
    peak_points: usize,
    peak_responses: usize,
}

impl TapeAccount {
    pub fn set_points(&mut self, n: usize) {
        self.points_stored = n;
        self.peak_points = self.peak_points.max(n);
    }

    pub fn set_responses(&mut self, n: usize) {
        self.responses_stored = n;
        self.peak_responses = self.peak_responses.max(n);
    }

    pub fn points_stored(&self) -> usize {
        self.points_stored
    }

    pub fn responses_stored(&self) -> usize {
        self.responses_stored
    }

    pub fn peak_points(&self) -> usize {
        self.peak_points
    }

    pub fn peak_responses(&self) -> usize {
        self.peak_responses
    }
}

/// Mutable context threaded through every oracle call: the response policy
/// plus the counters it must increment.
pub struct QueryCtx<'a> {
    pub policy: ResponsePolicy,
    pub counters: &'a mut Counters,
}

impl<'a> QueryCtx<'a> {
    pub fn new(policy: ResponsePolicy, counters: &'a mut Counters) -> Self {
        QueryCtx { policy, counters }
    }

    /// Issue one primitive query: count it and let the adversary pick.
    pub fn select(
        &mut self,
        valid: &[QueryResponse],
        key: u64,
    ) -> Result<QueryResponse, Error> {
        self.counters.queries_made += 1;
        adversary_select(valid, &self.policy, key)
    }
}
