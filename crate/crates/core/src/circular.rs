//! Recovery from circular (mod n) pairwise distances.
//!
//! The first gap is the smallest nonzero distance. The second member then
//! fixes the orientation, clockwise or anticlockwise. After that the
//! procedure mirrors the linear one: certify anchors on the uniqueness
//! graph, intersect shifted copies of `W` and validate.

use crate::distset::{
    circular_pairwise_distances, circular_shift_intersect, is_closed_under_negation, DistanceSet,
    IntegerSet, ModularParams,
};
use crate::error::{Error, Result};
use crate::linear::{FailureReason, SolverConfig};
use crate::unigraph::{build_circular_uniqueness_graph, certified_members};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CircularDiagnostics {
    pub u01: Option<u64>,
    pub u02: Option<u64>,
    pub estimated_k: usize,
    pub graph_vertices: Option<IntegerSet>,
    pub graph_adjacency: Option<String>,
    pub certified: Option<IntegerSet>,
    pub anchors: Option<IntegerSet>,
    pub candidate: Option<IntegerSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircularStatus {
    /// A realization containing 0.
    Recovered(IntegerSet),
    Failed(FailureReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircularSolveOutcome {
    pub status: CircularStatus,
    pub diagnostics: CircularDiagnostics,
}

impl CircularSolveOutcome {
    pub fn recovered(&self) -> Option<&IntegerSet> {
        match &self.status {
            CircularStatus::Recovered(u) => Some(u),
            CircularStatus::Failed(_) => None,
        }
    }
}

/// Smallest `k` with `k(k-1) + 1 >= |W|` (ordered pairs).
pub fn estimate_k_circular(w: &DistanceSet) -> usize {
    let target = w.len().max(1);
    let mut k = 1usize;
    while k * (k - 1) + 1 < target {
        k += 1;
    }
    k
}

pub fn infer_u01_circular(w: &DistanceSet, m: ModularParams) -> Result<u64> {
    m.check(w)?;
    w.iter()
        .copied()
        .find(|&x| x > 0)
        .ok_or(Error::NotEnoughDistances(w.len()))
}

/// Smallest `c > u01` in `W` such that `0, c, u01` and `(u01 - c) mod n`
/// all survive `W ∩ (W + u01)`.
pub fn infer_u02_circular(w: &DistanceSet, u01: u64, m: ModularParams) -> Result<u64> {
    let survivors = circular_shift_intersect(w, u01, m)?;
    if !(survivors.contains(0) && survivors.contains(u01)) {
        return Err(Error::OrientationUndetermined);
    }
    w.iter()
        .copied()
        .filter(|&c| c > u01)
        .find(|&c| survivors.contains(c) && survivors.contains(m.sub(u01, c)))
        .ok_or(Error::OrientationUndetermined)
}

fn check_input(w: &DistanceSet, m: ModularParams) -> Result<()> {
    m.check(w)?;
    if w.is_empty() {
        return Err(Error::MalformedInput("empty distance set".into()));
    }
    if !w.contains(0) {
        return Err(Error::MalformedInput("distance set must contain 0".into()));
    }
    if !is_closed_under_negation(w, m) {
        return Err(Error::MalformedInput(format!(
            "distance set is not closed under d -> {} - d",
            m.n()
        )));
    }
    Ok(())
}

fn intersect_all(w: &DistanceSet, shifts: &IntegerSet, m: ModularParams) -> Result<DistanceSet> {
    shifts.iter().try_fold(w.clone(), |acc, &a| {
        Ok(acc.intersection(&circular_shift_intersect(w, a, m)?))
    })
}

pub fn solve_circular(
    w: &DistanceSet,
    m: ModularParams,
    cfg: &SolverConfig,
) -> Result<CircularSolveOutcome> {
    cfg.validate()?;
    check_input(w, m)?;

    let mut diag = CircularDiagnostics {
        estimated_k: estimate_k_circular(w),
        ..CircularDiagnostics::default()
    };
    let finish =
        |candidate: IntegerSet, mut diag: CircularDiagnostics| -> Result<CircularSolveOutcome> {
            let ok = circular_pairwise_distances(&candidate, m)? == *w;
            diag.candidate = Some(candidate.clone());
            let status = if ok {
                CircularStatus::Recovered(candidate)
            } else {
                CircularStatus::Failed(FailureReason::NoValidatedSolution)
            };
            Ok(CircularSolveOutcome {
                status,
                diagnostics: diag,
            })
        };

    if w.len() == 1 {
        return finish(IntegerSet::from([0]), diag);
    }
    let u01 = infer_u01_circular(w, m)?;
    diag.u01 = Some(u01);
    if w.len() <= 3 {
        // {0, d, n - d}: two points, no orientation to choose
        return finish(IntegerSet::from([0, u01]), diag);
    }

    let u02 = match infer_u02_circular(w, u01, m) {
        Ok(c) => c,
        Err(Error::OrientationUndetermined) => {
            return Ok(CircularSolveOutcome {
                status: CircularStatus::Failed(FailureReason::OrientationUndetermined),
                diagnostics: diag,
            })
        }
        Err(e) => return Err(e),
    };
    diag.u02 = Some(u02);

    let z: IntegerSet = intersect_all(w, &IntegerSet::from([u01, u02]), m)?.into();
    let g = build_circular_uniqueness_graph(&z, m)?;
    let certified = certified_members(&g, w);

    let t = cfg.anchor_count(diag.estimated_k).max(2);
    let rest = certified
        .iter()
        .copied()
        .filter(|&x| x > 0 && x != u01 && x != u02);
    let anchors: IntegerSet = [u01, u02].into_iter().chain(rest).take(t).collect();

    diag.graph_adjacency = Some(g.adjacency_text());
    diag.graph_vertices = Some(z);
    diag.anchors = Some(anchors.clone());

    let candidate: IntegerSet = intersect_all(w, &anchors, m)?.into();
    if circular_pairwise_distances(&candidate, m)? != *w && anchors.len() < certified.len() {
        // On the ring every member of U survives every shift by a member
        // of U, so using all certified anchors only removes spurious values.
        let all: IntegerSet = anchors.union(&certified);
        let retry: IntegerSet = intersect_all(w, &all, m)?.into();
        diag.anchors = Some(all);
        diag.certified = Some(certified);
        return finish(retry, diag);
    }
    diag.certified = Some(certified);
    finish(candidate, diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distset::circular_equivalent;

    fn set(xs: &[u64]) -> IntegerSet {
        IntegerSet::new(xs.iter().copied())
    }

    fn dist(xs: &[u64]) -> DistanceSet {
        DistanceSet::new(xs.iter().copied())
    }

    fn m(n: u64) -> ModularParams {
        ModularParams::new(n).unwrap()
    }

    #[test]
    fn first_gap_is_min_nonzero() {
        assert_eq!(
            infer_u01_circular(&dist(&[0, 1, 3, 4, 9, 10, 12]), m(13)),
            Ok(1)
        );
        assert_eq!(infer_u01_circular(&dist(&[0, 4, 9]), m(13)), Ok(4));
        let w = circular_pairwise_distances(&set(&[0, 3, 7]), m(16)).unwrap();
        assert_eq!(w, dist(&[0, 3, 4, 7, 9, 12, 13]));
        assert_eq!(infer_u01_circular(&w, m(16)), Ok(3));
        assert_eq!(
            infer_u01_circular(&dist(&[0]), m(5)),
            Err(Error::NotEnoughDistances(1))
        );
    }

    #[test]
    fn orientation() {
        let w = dist(&[0, 1, 3, 4, 9, 10, 12]);
        assert_eq!(infer_u02_circular(&w, 1, m(13)), Ok(4));

        let w = circular_pairwise_distances(&set(&[0, 2, 5]), m(12)).unwrap();
        assert_eq!(w, dist(&[0, 2, 3, 5, 7, 9, 10]));
        assert_eq!(
            circular_shift_intersect(&w, 2, m(12)).unwrap(),
            dist(&[0, 2, 5, 7, 9])
        );
        assert_eq!(infer_u02_circular(&w, 2, m(12)), Ok(5));

        assert_eq!(
            infer_u02_circular(&dist(&[0, 3, 10]), 3, m(13)),
            Err(Error::OrientationUndetermined)
        );
    }

    #[test]
    fn small_ring() {
        let cfg = SolverConfig::default();
        let out = solve_circular(&dist(&[0, 1, 3, 4, 9, 10, 12]), m(13), &cfg).unwrap();
        let u = out.recovered().expect("recovers");
        assert!(circular_equivalent(u, &set(&[0, 1, 4]), m(13)).unwrap());
        assert_eq!(out.diagnostics.u02, Some(4));

        let out = solve_circular(&dist(&[0]), m(5), &cfg).unwrap();
        assert_eq!(out.recovered(), Some(&set(&[0])));

        let out = solve_circular(&dist(&[0, 3, 10]), m(13), &cfg).unwrap();
        assert_eq!(out.recovered(), Some(&set(&[0, 3])));

        let out = solve_circular(&dist(&[0, 4]), m(8), &cfg).unwrap();
        assert_eq!(out.recovered(), Some(&set(&[0, 4])));
    }

    #[test]
    fn malformed_circular_inputs() {
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_circular(&dist(&[1, 12]), m(13), &cfg),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            solve_circular(&dist(&[0, 1]), m(13), &cfg),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            solve_circular(&dist(&[0, 13]), m(13), &cfg),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn estimate_for_ordered_pairs() {
        assert_eq!(estimate_k_circular(&dist(&[0, 1, 3, 4, 9, 10, 12])), 3);
        assert_eq!(estimate_k_circular(&dist(&[0])), 1);
    }
}
