//! Size-`s` decision trees over `R^d` with the same-leaf oracle.
//!
//! Points are grouped into leaf buckets by querying same-leaf against one
//! representative per group; each group keeps a coordinate-wise hull (at
//! most `2d` witnesses), so the whole state retains at most `2ds` points.
//! Inference follows the rectangle rule: a probe inside some group's hull
//! takes that group's label, anything else abstains.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::oracle::{query_key, Label, Point, QueryCtx, QueryResponse};
use crate::sample::{uniform_f64, Rng};

/// Direction of a split predicate: `x_i >= b` or `x_i <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitDir {
    Ge,
    Le,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf { label: Label },
    Split { coord: usize, threshold: f64, dir: SplitDir, yes: usize, no: usize },
}

/// A binary decision tree; leaf cells partition `R^d` into axis-aligned
/// rectangles. Size is measured in leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTreeHypothesis {
    dim: usize,
    nodes: Vec<Node>,
    root: usize,
    leaves: usize,
}

impl DecisionTreeHypothesis {
    /// A single-leaf constant tree.
    pub fn constant(dim: usize, label: Label) -> Self {
        DecisionTreeHypothesis {
            dim,
            nodes: vec![Node::Leaf { label }],
            root: 0,
            leaves: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of leaves.
    pub fn size(&self) -> usize {
        self.leaves
    }

    /// Index of the leaf reached by root-to-leaf evaluation.
    pub fn leaf_id(&self, x: &Point) -> usize {
        debug_assert_eq!(x.dim(), self.dim);
        let mut at = self.root;
        loop {
            match &self.nodes[at] {
                Node::Leaf { .. } => return at,
                Node::Split { coord, threshold, dir, yes, no } => {
                    let taken = match dir {
                        SplitDir::Ge => x.coord(*coord) >= *threshold,
                        SplitDir::Le => x.coord(*coord) <= *threshold,
                    };
                    at = if taken { *yes } else { *no };
                }
            }
        }
    }

    pub fn label(&self, x: &Point) -> Label {
        match &self.nodes[self.leaf_id(x)] {
            Node::Leaf { label } => *label,
            Node::Split { .. } => unreachable!("leaf_id returns leaves"),
        }
    }

    /// Random tree with exactly `s` leaves: repeatedly split a uniformly
    /// chosen leaf on a uniform coordinate, with the threshold uniform
    /// inside that leaf's cell, direction and leaf labels uniform.
    pub fn random(dim: usize, s: usize, range: f64, rng: &mut Rng) -> Self {
        assert!(s >= 1 && dim >= 1);
        let mut nodes = vec![Node::Leaf { label: Label::Positive }];
        // (node index, cell lo, cell hi) for each current leaf
        let mut cells: Vec<(usize, Vec<f64>, Vec<f64>)> =
            vec![(0, vec![-range; dim], vec![range; dim])];
        while cells.len() < s {
            let pick = (uniform_f64(rng) * cells.len() as f64) as usize % cells.len();
            let (idx, lo, hi) = cells.swap_remove(pick);
            let coord = (uniform_f64(rng) * dim as f64) as usize % dim;
            let threshold = lo[coord] + (hi[coord] - lo[coord]) * uniform_f64(rng);
            let dir = if uniform_f64(rng) < 0.5 { SplitDir::Ge } else { SplitDir::Le };
            let yes = nodes.len();
            nodes.push(Node::Leaf { label: Label::Positive });
            let no = nodes.len();
            nodes.push(Node::Leaf { label: Label::Positive });
            nodes[idx] = Node::Split { coord, threshold, dir, yes, no };
            // Sub-cells restricted by the new predicate.
            let (mut yes_lo, mut yes_hi) = (lo.clone(), hi.clone());
            let (mut no_lo, mut no_hi) = (lo, hi);
            match dir {
                SplitDir::Ge => {
                    yes_lo[coord] = threshold;
                    no_hi[coord] = threshold;
                }
                SplitDir::Le => {
                    yes_hi[coord] = threshold;
                    no_lo[coord] = threshold;
                }
            }
            cells.push((yes, yes_lo, yes_hi));
            cells.push((no, no_lo, no_hi));
        }
        for (idx, _, _) in &cells {
            let label = if uniform_f64(rng) < 0.5 { Label::Positive } else { Label::Negative };
            nodes[*idx] = Node::Leaf { label };
        }
        DecisionTreeHypothesis { dim, nodes, root: 0, leaves: s }
    }

    /// Build a tree from explicit structure; used by the exhaustive
    /// certification oracle and by the text parser.
    pub fn from_structure(dim: usize, root: TreeSpec) -> Self {
        fn add(nodes: &mut Vec<Node>, spec: &TreeSpec, leaves: &mut usize) -> usize {
            match spec {
                TreeSpec::Leaf(label) => {
                    nodes.push(Node::Leaf { label: *label });
                    *leaves += 1;
                    nodes.len() - 1
                }
                TreeSpec::Split { coord, threshold, dir, yes, no } => {
                    let yes = add(nodes, yes, leaves);
                    let no = add(nodes, no, leaves);
                    nodes.push(Node::Split {
                        coord: *coord,
                        threshold: *threshold,
                        dir: *dir,
                        yes,
                        no,
                    });
                    nodes.len() - 1
                }
            }
        }
        let mut nodes = Vec::new();
        let mut leaves = 0;
        let root = add(&mut nodes, &root, &mut leaves);
        DecisionTreeHypothesis { dim, nodes, root, leaves }
    }

    /// Nested structured-text form, for experiment reproducibility.
    pub fn to_text(&self) -> String {
        fn write(nodes: &[Node], at: usize, out: &mut String) {
            match &nodes[at] {
                Node::Leaf { label } => {
                    let l = if *label == Label::Positive { "+" } else { "-" };
                    out.push_str(&format!("(leaf {l})"));
                }
                Node::Split { coord, threshold, dir, yes, no } => {
                    let d = if *dir == SplitDir::Ge { "ge" } else { "le" };
                    out.push_str(&format!("(split {coord} {threshold:?} {d} "));
                    write(nodes, *yes, out);
                    out.push(' ');
                    write(nodes, *no, out);
                    out.push(')');
                }
            }
        }
        let mut out = format!("(tree dim={} ", self.dim);
        write(&self.nodes, self.root, &mut out);
        out.push(')');
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut toks = tokenize(text);
        let parsed = parse_tree(&mut toks)?;
        if !toks.is_empty() {
            return Err(Error::DataCorruption("trailing input after tree record"));
        }
        Ok(parsed)
    }
}

/// Declarative tree structure used for construction and enumeration.
#[derive(Debug, Clone)]
pub enum TreeSpec {
    Leaf(Label),
    Split {
        coord: usize,
        threshold: f64,
        dir: SplitDir,
        yes: Box<TreeSpec>,
        no: Box<TreeSpec>,
    },
}

fn tokenize(text: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(core::mem::take(&mut cur));
                }
                toks.push(String::from(if ch == '(' { "(" } else { ")" }));
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(core::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    toks.reverse(); // pop from the back
    toks
}

fn parse_tree(toks: &mut Vec<String>) -> Result<DecisionTreeHypothesis, Error> {
    let bad = || Error::DataCorruption("malformed tree record");
    if toks.pop().as_deref() != Some("(") || toks.pop().as_deref() != Some("tree") {
        return Err(bad());
    }
    let dim_tok = toks.pop().ok_or_else(bad)?;
    let dim: usize = dim_tok
        .strip_prefix("dim=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(bad)?;
    let spec = parse_node(toks)?;
    if toks.pop().as_deref() != Some(")") {
        return Err(bad());
    }
    Ok(DecisionTreeHypothesis::from_structure(dim, spec))
}

fn parse_node(toks: &mut Vec<String>) -> Result<TreeSpec, Error> {
    let bad = || Error::DataCorruption("malformed tree record");
    if toks.pop().as_deref() != Some("(") {
        return Err(bad());
    }
    let kind = toks.pop().ok_or_else(bad)?;
    let spec = match kind.as_str() {
        "leaf" => {
            let label = match toks.pop().ok_or_else(bad)?.as_str() {
                "+" => Label::Positive,
                "-" => Label::Negative,
                _ => return Err(bad()),
            };
            TreeSpec::Leaf(label)
        }
        "split" => {
            let coord: usize = toks.pop().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let threshold: f64 = toks.pop().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let dir = match toks.pop().ok_or_else(bad)?.as_str() {
                "ge" => SplitDir::Ge,
                "le" => SplitDir::Le,
                _ => return Err(bad()),
            };
            let yes = parse_node(toks)?;
            let no = parse_node(toks)?;
            TreeSpec::Split { coord, threshold, dir, yes: Box::new(yes), no: Box::new(no) }
        }
        _ => return Err(bad()),
    };
    if toks.pop().as_deref() != Some(")") {
        return Err(bad());
    }
    Ok(spec)
}

/// The same-leaf oracle; the answer is unique, so the response set is a
/// singleton and policy-independent.
pub fn same_leaf(
    h: &DecisionTreeHypothesis,
    x: &Point,
    y: &Point,
) -> Result<QueryResponse, Error> {
    if x.dim() != h.dim() || y.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: if x.dim() != h.dim() { x.dim() } else { y.dim() },
        });
    }
    Ok(QueryResponse::SameLeaf(h.leaf_id(x) == h.leaf_id(y)))
}

/// Issue one counted same-leaf query.
pub fn ask_same_leaf(
    h: &DecisionTreeHypothesis,
    x: &Point,
    y: &Point,
    ctx: &mut QueryCtx<'_>,
) -> Result<bool, Error> {
    let valid = [same_leaf(h, x, y)?];
    match ctx.select(&valid, query_key("same-leaf", &[x, y]))? {
        QueryResponse::SameLeaf(b) => Ok(b),
        _ => unreachable!("singleton set"),
    }
}

/// One group of points certified (by same-leaf answers against its
/// representative) to share a leaf.
#[derive(Debug, Clone)]
pub struct LeafGroup {
    rep: Point,
    label: Label,
    lo: Vec<f64>,
    hi: Vec<f64>,
    witness_lo: Vec<Point>,
    witness_hi: Vec<Point>,
}

impl LeafGroup {
    fn new(rep: Point, label: Label) -> Self {
        let lo = rep.coords().to_vec();
        let hi = rep.coords().to_vec();
        let d = rep.dim();
        LeafGroup {
            witness_lo: vec![rep.clone(); d],
            witness_hi: vec![rep.clone(); d],
            rep,
            label,
            lo,
            hi,
        }
    }

    fn absorb(&mut self, x: &Point) {
        for (i, c) in x.coords().iter().enumerate() {
            if *c < self.lo[i] {
                self.lo[i] = *c;
                self.witness_lo[i] = x.clone();
            }
            if *c > self.hi[i] {
                self.hi[i] = *c;
                self.witness_hi[i] = x.clone();
            }
        }
    }

    pub fn rep(&self) -> &Point {
        &self.rep
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn hull(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn hull_contains(&self, x: &Point) -> bool {
        x.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (a, b))| c >= a && c <= b)
    }

    /// Distinct retained witnesses, at most `2d`.
    pub fn retained(&self) -> usize {
        let mut kept: Vec<&Point> = Vec::new();
        for w in self.witness_lo.iter().chain(&self.witness_hi) {
            if !kept.iter().any(|p| *p == w) {
                kept.push(w);
            }
        }
        kept.len()
    }
}

/// All leaf groups discovered so far; at most `max_groups` are retained.
#[derive(Debug, Clone)]
pub struct LeafGroupState {
    dim: usize,
    max_groups: usize,
    groups: Vec<LeafGroup>,
    /// Points that would have founded a group beyond the cap; counted, not
    /// stored.
    overflowed: u64,
}

impl LeafGroupState {
    /// `max_groups` bounds retained groups (the tree size, or the current
    /// guess when the size is unknown).
    pub fn new(dim: usize, max_groups: usize) -> Self {
        LeafGroupState { dim, max_groups, groups: Vec::new(), overflowed: 0 }
    }

    pub fn groups(&self) -> &[LeafGroup] {
        &self.groups
    }

    pub fn overflowed(&self) -> u64 {
        self.overflowed
    }

    /// Total retained points across groups; at most `2 * dim * max_groups`.
    pub fn retained(&self) -> usize {
        self.groups.iter().map(LeafGroup::retained).sum()
    }

    /// Stored same-leaf certificates: one per non-representative member
    /// relationship is discarded after hull absorption, so the work tape
    /// holds one label per group.
    pub fn stored_responses(&self) -> usize {
        self.groups.len()
    }
}

/// Bucket labeled points into leaf groups via counted same-leaf queries
/// against group representatives (only groups of the same label are
/// candidates; distinct labels cannot share a leaf).
///
/// Per point this issues at most (number of same-label groups) queries.
/// Label queries are the caller's responsibility and are not issued here.
pub fn group_by_leaf(
    state: &mut LeafGroupState,
    h: &DecisionTreeHypothesis,
    new_points: &[(Point, Label)],
    ctx: &mut QueryCtx<'_>,
) -> Result<(), Error> {
    for (x, label) in new_points {
        if x.dim() != state.dim {
            return Err(Error::DimensionMismatch { expected: state.dim, got: x.dim() });
        }
        let mut joined = false;
        for g in state.groups.iter_mut() {
            if g.label != *label {
                continue;
            }
            if ask_same_leaf(h, x, &g.rep, ctx)? {
                g.absorb(x);
                joined = true;
                break;
            }
        }
        if !joined {
            if state.groups.len() < state.max_groups {
                state.groups.push(LeafGroup::new(x.clone(), *label));
            } else {
                state.overflowed += 1;
            }
        }
    }
    Ok(())
}

/// Rectangle-rule inference: the label of the unique group hull containing
/// `x`, or abstain. Two distinct hulls containing `x` means the oracle
/// lied (hulls of distinct leaves are disjoint).
pub fn infer_tree(state: &LeafGroupState, x: &Point) -> Result<Option<Label>, Error> {
    let mut hit: Option<&LeafGroup> = None;
    for g in &state.groups {
        if g.hull_contains(x) {
            if let Some(first) = hit {
                // Shared closed boundaries between adjacent leaf cells are
                // geometrically possible; an interior overlap is not.
                if first.label != g.label {
                    return Err(Error::OracleInconsistency(
                        "point inside hulls of two distinct leaves",
                    ));
                }
            } else {
                hit = Some(g);
            }
        }
    }
    Ok(hit.map(|g| g.label))
}
