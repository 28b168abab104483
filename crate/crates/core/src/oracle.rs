//! Reference solvers used to check the fast ones at small scale.
//!
//! Both linear oracles use the fact that `0` lies in every realization
//! normalized to start at 0. As a result, every element of such a
//! realization is itself a distance in `W`. Search is bounded by an explicit
//! node budget, and `exhausted` reports whether the whole space was covered.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::distset::{
    circular_normal_form, circular_pairwise_distances, normal_form, pairwise_distances,
    DistanceSet, IntegerSet, ModularParams,
};
use crate::error::Result;
use crate::linear::estimate_k;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// One representative per equivalence class, sorted.
    pub solutions: Vec<IntegerSet>,
    pub exhausted: bool,
    pub nodes_explored: u64,
}

impl OracleReport {
    fn from_classes(classes: BTreeSet<IntegerSet>, exhausted: bool, nodes: u64) -> Self {
        Self {
            solutions: classes.into_iter().collect(),
            exhausted,
            nodes_explored: nodes,
        }
    }

    /// Exhausted with exactly one class.
    pub fn is_unique(&self) -> bool {
        self.exhausted && self.solutions.len() == 1
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.solutions {
            writeln!(f, "{s}")?;
        }
        write!(
            f,
            "exhausted: {}",
            if self.exhausted { "yes" } else { "no" }
        )
    }
}

/// Calls `visit` on every `size`-subset of `pool` (as index-free value
/// vectors) until it returns `false`.
fn for_each_combination(pool: &[u64], size: usize, visit: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn go(
        pool: &[u64],
        start: usize,
        size: usize,
        picked: &mut Vec<u64>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> bool {
        if picked.len() == size {
            return visit(picked);
        }
        let need = size - picked.len();
        for i in start..=pool.len() - need {
            picked.push(pool[i]);
            let keep_going = go(pool, i + 1, size, picked, visit);
            picked.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    if size > pool.len() {
        return true;
    }
    go(pool, 0, size, &mut Vec::with_capacity(size), visit)
}

/// Enumerates subsets of `W` that contain `0` and `max(W)`, of every size from
/// the cardinality estimate up to `|W|`, and keeps those whose distance set is
/// exactly `W`.
pub fn brute_force_solutions(w: &DistanceSet, budget: u64) -> OracleReport {
    let mut classes = BTreeSet::new();
    let Some(diameter) = w.max_value() else {
        classes.insert(IntegerSet::empty());
        return OracleReport::from_classes(classes, true, 1);
    };
    if !w.contains(0) {
        return OracleReport::from_classes(classes, true, 0);
    }
    if diameter == 0 {
        classes.insert(IntegerSet::from([0]));
        return OracleReport::from_classes(classes, true, 1);
    }

    let interior: Vec<u64> = w
        .iter()
        .copied()
        .filter(|&x| x != 0 && x != diameter)
        .collect();
    let min_size = estimate_k(w).saturating_sub(2);
    let mut nodes = 0u64;
    let mut exhausted = true;
    for size in min_size..=interior.len() {
        let completed = for_each_combination(&interior, size, &mut |picked| {
            if nodes >= budget {
                return false;
            }
            nodes += 1;
            let candidate = IntegerSet::new(picked.iter().copied().chain([0, diameter]));
            if pairwise_distances(&candidate) == *w {
                classes.insert(normal_form(&candidate));
            }
            true
        });
        if !completed {
            exhausted = false;
            break;
        }
    }
    OracleReport::from_classes(classes, exhausted, nodes)
}

struct Backtracker<'a> {
    w: &'a DistanceSet,
    diameter: u64,
    cover: Vec<u32>,
    placed: Vec<u64>,
    seen: HashSet<Vec<u64>>,
    classes: BTreeSet<IntegerSet>,
    nodes: u64,
    budget: u64,
    out_of_budget: bool,
}

impl Backtracker<'_> {
    fn index(&self, d: u64) -> Option<usize> {
        self.w.binary_search(&d).ok()
    }

    fn admissible(&self, p: u64) -> bool {
        self.placed
            .iter()
            .all(|&q| q != p && self.w.contains(p.abs_diff(q)))
    }

    fn place(&mut self, p: u64) {
        for i in 0..self.placed.len() {
            let d = p.abs_diff(self.placed[i]);
            let idx = self.index(d).expect("admissible point");
            self.cover[idx] += 1;
        }
        self.placed.push(p);
    }

    fn unplace(&mut self) {
        let p = self.placed.pop().expect("nonempty");
        for i in 0..self.placed.len() {
            let d = p.abs_diff(self.placed[i]);
            let idx = self.index(d).expect("admissible point");
            self.cover[idx] -= 1;
        }
    }

    fn search(&mut self) {
        if self.nodes >= self.budget {
            self.out_of_budget = true;
            return;
        }
        self.nodes += 1;

        let mut key = self.placed.clone();
        key.sort_unstable();
        if !self.seen.insert(key) {
            return;
        }

        // cover[0] counts nothing: 0 is realized by any single point
        let uncovered = (1..self.w.len()).rev().find(|&i| self.cover[i] == 0);
        let Some(idx) = uncovered else {
            self.classes
                .insert(normal_form(&IntegerSet::new(self.placed.iter().copied())));
            // Distances are a set: a superset adding no new distance is
            // another realization.
            let extra: Vec<u64> = self
                .w
                .iter()
                .copied()
                .filter(|&x| x < self.diameter && !self.placed.contains(&x))
                .collect();
            for x in extra {
                if self.admissible(x) {
                    self.place(x);
                    self.search();
                    self.unplace();
                    if self.out_of_budget {
                        return;
                    }
                }
            }
            return;
        };
        let delta = self.w[idx];

        // Any completion realizes delta by some pair (x, x + delta) inside
        // [0, diameter]; try the two end-anchored pairs first.
        let mut starts = vec![0, self.diameter - delta];
        starts.extend(
            self.w
                .iter()
                .copied()
                .filter(|&x| x + delta <= self.diameter && x != 0 && x != self.diameter - delta),
        );
        starts.dedup();
        for x in starts {
            let y = x + delta;
            if !self.w.contains(x) || !self.w.contains(y) {
                continue;
            }
            let new_points: Vec<u64> = [x, y]
                .into_iter()
                .filter(|p| !self.placed.contains(p))
                .collect();
            let mut added = 0;
            let mut ok = true;
            for &p in &new_points {
                if self.admissible(p) {
                    self.place(p);
                    added += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            if ok && added > 0 {
                self.search();
            }
            for _ in 0..added {
                self.unplace();
            }
            if self.out_of_budget {
                return;
            }
        }
    }
}

/// Depth-first search seeded with `{0, max(W)}`. At each node the largest
/// distance not yet realized must come from some pair `(x, x + d)`, and each
/// admissible pair is a branch. Finds every solution class when exhausted.
pub fn backtracking_solve(w: &DistanceSet, budget: u64) -> OracleReport {
    let mut classes = BTreeSet::new();
    let Some(diameter) = w.max_value() else {
        classes.insert(IntegerSet::empty());
        return OracleReport::from_classes(classes, true, 1);
    };
    if !w.contains(0) {
        return OracleReport::from_classes(classes, true, 0);
    }
    if diameter == 0 {
        classes.insert(IntegerSet::from([0]));
        return OracleReport::from_classes(classes, true, 1);
    }
    let mut bt = Backtracker {
        w,
        diameter,
        cover: vec![0; w.len()],
        placed: Vec::new(),
        seen: HashSet::new(),
        classes,
        nodes: 0,
        budget,
        out_of_budget: false,
    };
    bt.place(0);
    bt.place(diameter);
    bt.search();
    let exhausted = !bt.out_of_budget;
    OracleReport::from_classes(bt.classes, exhausted, bt.nodes)
}

/// Enumerates subsets of `W` containing 0 and keeps those whose circular
/// distance set is `W`, one per rotation/reflection class.
pub fn circular_brute_force(
    w: &DistanceSet,
    m: ModularParams,
    budget: u64,
) -> Result<OracleReport> {
    m.check(w)?;
    let mut classes = BTreeSet::new();
    if w.is_empty() {
        classes.insert(IntegerSet::empty());
        return Ok(OracleReport::from_classes(classes, true, 1));
    }
    if !w.contains(0) {
        return Ok(OracleReport::from_classes(classes, true, 0));
    }
    let rest: Vec<u64> = w.iter().copied().filter(|&x| x != 0).collect();
    let mut nodes = 0u64;
    let mut exhausted = true;
    let mut err = None;
    for size in 0..=rest.len() {
        let completed = for_each_combination(&rest, size, &mut |picked| {
            if nodes >= budget {
                return false;
            }
            nodes += 1;
            let candidate = IntegerSet::new(picked.iter().copied().chain([0]));
            match circular_pairwise_distances(&candidate, m) {
                Ok(d) if d == *w => match circular_normal_form(&candidate, m) {
                    Ok(nf) => {
                        classes.insert(nf);
                    }
                    Err(e) => {
                        err = Some(e);
                        return false;
                    }
                },
                Ok(_) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = err {
            return Err(e);
        }
        if !completed {
            exhausted = false;
            break;
        }
    }
    Ok(OracleReport::from_classes(classes, exhausted, nodes))
}

/// Every set starting at 0 with `k` elements, diameter at most
/// `max_diameter`, and first gap no larger than its last gap. Ties yield
/// both orientations.
pub fn canonical_sets(k: usize, max_diameter: u64) -> Vec<IntegerSet> {
    let mut out = Vec::new();
    match k {
        0 => out.push(IntegerSet::empty()),
        1 => out.push(IntegerSet::from([0])),
        _ => {
            for diameter in (k as u64 - 1)..=max_diameter {
                let interior: Vec<u64> = (1..diameter).collect();
                for_each_combination(&interior, k - 2, &mut |picked| {
                    let first = picked.first().copied().unwrap_or(diameter);
                    let last_gap = diameter - picked.last().copied().unwrap_or(0);
                    if first <= last_gap {
                        out.push(IntegerSet::new(picked.iter().copied().chain([0, diameter])));
                    }
                    true
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub diameter: u64,
    pub instances: usize,
    pub ambiguous: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub k: usize,
    pub max_diameter: u64,
    pub instances: usize,
    /// Instances whose distance set has two or more non-equivalent realizations.
    pub ambiguous: usize,
    /// Instances where the search ran out of budget.
    pub unresolved: usize,
    pub rows: Vec<CensusRow>,
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={} max_diameter={}", self.k, self.max_diameter)?;
        writeln!(f, "diameter\tinstances\tambiguous")?;
        for r in &self.rows {
            writeln!(f, "{}\t{}\t{}", r.diameter, r.instances, r.ambiguous)?;
        }
        write!(
            f,
            "total\t{}\t{}\t(unresolved {})",
            self.instances, self.ambiguous, self.unresolved
        )
    }
}

/// Counts, over all canonical `k`-sets up to the given diameter, how many
/// distance sets admit more than one realization class.
pub fn uniqueness_census(max_diameter: u64, k: usize, budget: u64) -> CensusReport {
    let mut rows: Vec<CensusRow> = Vec::new();
    let mut unresolved = 0;
    for u in canonical_sets(k, max_diameter) {
        let diameter = u.max_value().unwrap_or(0);
        let report = backtracking_solve(&pairwise_distances(&u), budget);
        if !report.exhausted {
            unresolved += 1;
        }
        let ambiguous = usize::from(report.solutions.len() >= 2);
        match rows.last_mut() {
            Some(row) if row.diameter == diameter => {
                row.instances += 1;
                row.ambiguous += ambiguous;
            }
            _ => rows.push(CensusRow {
                diameter,
                instances: 1,
                ambiguous,
            }),
        }
    }
    CensusReport {
        k,
        max_diameter,
        instances: rows.iter().map(|r| r.instances).sum(),
        ambiguous: rows.iter().map(|r| r.ambiguous).sum(),
        unresolved,
        rows,
    }
}
