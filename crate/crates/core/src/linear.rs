//! Recovery of an integer set from its (linear) pairwise distance set.
//!
//! The pipeline intersects `W` with shifted copies of itself. Shifts come
//! from members of the hidden set that are already known: the first gap,
//! read off the two largest distances, and further members certified through
//! the uniqueness graph. Every candidate is validated by recomputing its
//! distance set. A `Recovered` outcome is therefore always a true
//! realization, and only success itself is probabilistic.

use std::fmt;

use crate::distset::{canonicalize, pairwise_distances, shift_intersect, DistanceSet, IntegerSet};
use crate::error::{Error, Result};
use crate::unigraph::{build_uniqueness_graph, certified_members};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Number of anchors to use; derived from `|W|` when absent.
    pub t_override: Option<usize>,
    /// Try `{0} ∪ (W ∩ (W + u01))` before anything else.
    pub enable_fast_path: bool,
    /// Try the anchored forward intersection.
    pub enable_forward_pass: bool,
    /// Fall back to intersecting from the far end of the set.
    pub enable_reverse_pass: bool,
    pub max_anchor_count: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            t_override: None,
            enable_fast_path: true,
            enable_forward_pass: true,
            enable_reverse_pass: true,
            max_anchor_count: 64,
        }
    }
}

impl SolverConfig {
    pub fn fast_only() -> Self {
        Self {
            enable_forward_pass: false,
            enable_reverse_pass: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t_override == Some(0) {
            return Err(Error::InvalidConfig("t_override must be at least 1"));
        }
        if self.max_anchor_count == 0 {
            return Err(Error::InvalidConfig("max_anchor_count must be at least 1"));
        }
        Ok(())
    }

    /// Anchor count for an estimated cardinality.
    pub fn anchor_count(&self, estimated_k: usize) -> usize {
        let t = self
            .t_override
            .unwrap_or_else(|| ceil_log2(estimated_k).max(1));
        t.min(self.max_anchor_count)
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolvePath {
    Degenerate,
    Fast,
    ForwardUnion,
    ReversePass,
}

impl fmt::Display for SolvePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolvePath::Degenerate => "degenerate",
            SolvePath::Fast => "fast",
            SolvePath::ForwardUnion => "forward-union",
            SolvePath::ReversePass => "reverse-pass",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// Every attempted candidate failed validation.
    NoValidatedSolution,
    /// The circular solver found no admissible second element.
    OrientationUndetermined,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::NoValidatedSolution => "no validated solution",
            FailureReason::OrientationUndetermined => "orientation undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Recovered(IntegerSet),
    Failed(FailureReason),
}

/// Intermediate sets, kept for auditing a run step by step.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveTrace {
    pub first_intersection: Option<DistanceSet>,
    pub graph_vertices: Option<IntegerSet>,
    pub graph_adjacency: Option<String>,
    pub certified: Option<IntegerSet>,
    pub anchors: Option<IntegerSet>,
    pub survivors: Option<DistanceSet>,
    pub forward_candidate: Option<IntegerSet>,
    pub reverse_candidate: Option<IntegerSet>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub u01: Option<u64>,
    pub estimated_k: usize,
    pub anchors_used: usize,
    pub path: Option<SolvePath>,
    pub trace: SolveTrace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub diagnostics: Diagnostics,
}

impl SolveOutcome {
    pub fn recovered(&self) -> Option<&IntegerSet> {
        match &self.status {
            SolveStatus::Recovered(u) => Some(u),
            SolveStatus::Failed(_) => None,
        }
    }

    pub fn is_recovered(&self) -> bool {
        self.recovered().is_some()
    }
}

/// First gap of the canonical solution: the difference between the two
/// largest distances.
pub fn infer_u01(w: &DistanceSet) -> Result<u64> {
    match w.as_slice() {
        [.., second, first] => Ok(first - second),
        _ => Err(Error::NotEnoughDistances(w.len())),
    }
}

/// Smallest `k` with `k(k-1)/2 + 1 >= |W|`. Collisions only shrink `|W|`, so
/// this never exceeds the true cardinality.
pub fn estimate_k(w: &DistanceSet) -> usize {
    let target = w.len().max(1);
    let mut k = 1usize;
    while k * (k - 1) / 2 + 1 < target {
        k += 1;
    }
    k
}

/// Graph on `{0} ∪ (W ∩ (W + u01))` together with what it certifies.
fn certify_from_first_gap(
    w: &DistanceSet,
    u01: u64,
) -> (DistanceSet, IntegerSet, IntegerSet, String) {
    let first = shift_intersect(w, u01);
    let z = IntegerSet::from([0]).union(&first.clone().into());
    let g = build_uniqueness_graph(&z);
    let certified = certified_members(&g, w);
    let adjacency = g.adjacency_text();
    (first, z, certified, adjacency)
}

/// Up to `t` anchors: `u01` plus the smallest certified positive members.
pub fn select_anchors(w: &DistanceSet, u01: u64, t: usize) -> Result<IntegerSet> {
    check_anchor_input(w, u01, t)?;
    let (_, _, certified, _) = certify_from_first_gap(w, u01);
    Ok(pick_anchors(&certified, u01, t))
}

fn check_anchor_input(w: &DistanceSet, u01: u64, t: usize) -> Result<()> {
    if u01 == 0 || !w.contains(u01) {
        return Err(Error::MalformedInput(format!(
            "first gap {u01} is not a positive member of W"
        )));
    }
    if t == 0 {
        return Err(Error::InvalidConfig("anchor count must be at least 1"));
    }
    Ok(())
}

fn pick_anchors(certified: &IntegerSet, u01: u64, t: usize) -> IntegerSet {
    let rest = certified.iter().copied().filter(|&x| x > 0 && x != u01);
    std::iter::once(u01).chain(rest).take(t).collect()
}

/// `W ∩ ⋂_a (W + a)`.
pub fn multi_intersect(w: &DistanceSet, anchors: &IntegerSet) -> DistanceSet {
    anchors.iter().fold(w.clone(), |acc, &a| {
        acc.intersection(&shift_intersect(w, a))
    })
}

/// `{0} ∪ anchors ∪ survivors`.
pub fn assemble_forward(anchors: &IntegerSet, survivors: &DistanceSet) -> IntegerSet {
    IntegerSet::from([0])
        .union(anchors)
        .union(&survivors.clone().into())
}

/// Rebuilds the low end of the set from the mirrored problem. The largest
/// survivors `M = s0 > s1 > ... > st` give mirrored anchors `M - sp`; the
/// mirrored set is intersected forward and flipped back.
pub fn reverse_pass(w: &DistanceSet, survivors: &DistanceSet, t: usize) -> Result<IntegerSet> {
    if survivors.len() < 2 {
        return Err(Error::ReversePassUnderdetermined(survivors.len()));
    }
    let diameter = w.max_value().ok_or(Error::ReversePassUnderdetermined(0))?;
    if survivors.max_value() != Some(diameter) {
        return Err(Error::MalformedInput(
            "the diameter must survive every intersection".into(),
        ));
    }
    let mirrored: Vec<u64> = survivors
        .iter()
        .rev()
        .take(t + 1)
        .map(|&s| diameter - s)
        .collect();
    // mirrored[0] == 0; the last mirrored anchor is recovered by the intersection
    let anchors = IntegerSet::new(mirrored.iter().copied());
    let tail = multi_intersect(w, &anchors);
    let known = IntegerSet::new(mirrored[..mirrored.len() - 1].iter().copied());
    let mirrored_set = known.union(&tail.into());
    Ok(mirrored_set
        .iter()
        .rev()
        .filter(|&&x| x <= diameter)
        .map(|&x| diameter - x)
        .collect())
}

fn validates(candidate: &IntegerSet, w: &DistanceSet) -> bool {
    pairwise_distances(candidate) == *w
}

pub fn solve(w: &DistanceSet, cfg: &SolverConfig) -> Result<SolveOutcome> {
    cfg.validate()?;
    if w.is_empty() {
        return Err(Error::MalformedInput("empty distance set".into()));
    }
    if !w.contains(0) {
        return Err(Error::MalformedInput("distance set must contain 0".into()));
    }

    let mut diag = Diagnostics {
        estimated_k: estimate_k(w),
        ..Diagnostics::default()
    };
    let recovered = |u: IntegerSet, path, mut diag: Diagnostics| {
        diag.path = Some(path);
        Ok(SolveOutcome {
            status: SolveStatus::Recovered(canonicalize(&u)),
            diagnostics: diag,
        })
    };

    if w.len() <= 2 {
        return recovered(
            IntegerSet::new(w.iter().copied()),
            SolvePath::Degenerate,
            diag,
        );
    }

    let u01 = infer_u01(w)?;
    diag.u01 = Some(u01);
    if !w.contains(u01) {
        // no realization can have a first gap outside W
        return Ok(failed(diag, FailureReason::NoValidatedSolution));
    }

    let (first, z, certified, adjacency) = certify_from_first_gap(w, u01);
    diag.trace.first_intersection = Some(first.clone());
    diag.trace.graph_vertices = Some(z);
    diag.trace.graph_adjacency = Some(adjacency);
    diag.trace.certified = Some(certified.clone());

    if cfg.enable_fast_path {
        let candidate = IntegerSet::from([0]).union(&first.clone().into());
        if validates(&candidate, w) {
            return recovered(candidate, SolvePath::Fast, diag);
        }
    }

    if !(cfg.enable_forward_pass || cfg.enable_reverse_pass) {
        return Ok(failed(diag, FailureReason::NoValidatedSolution));
    }

    let t = cfg.anchor_count(diag.estimated_k);
    let anchors = pick_anchors(&certified, u01, t);
    let survivors = multi_intersect(w, &anchors);
    diag.anchors_used = anchors.len();
    diag.trace.anchors = Some(anchors.clone());
    diag.trace.survivors = Some(survivors.clone());

    if cfg.enable_forward_pass {
        let candidate = assemble_forward(&anchors, &survivors);
        diag.trace.forward_candidate = Some(candidate.clone());
        if validates(&candidate, w) {
            return recovered(candidate, SolvePath::ForwardUnion, diag);
        }
    }

    if cfg.enable_reverse_pass && survivors.len() >= 2 {
        let candidate = reverse_pass(w, &survivors, t)?;
        diag.trace.reverse_candidate = Some(candidate.clone());
        if validates(&candidate, w) {
            return recovered(candidate, SolvePath::ReversePass, diag);
        }
    }

    Ok(failed(diag, FailureReason::NoValidatedSolution))
}

fn failed(diagnostics: Diagnostics, reason: FailureReason) -> SolveOutcome {
    SolveOutcome {
        status: SolveStatus::Failed(reason),
        diagnostics,
    }
}
