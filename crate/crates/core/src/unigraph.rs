//! Uniqueness graphs and certification of set members.
//!
//! Two vertices of `G(Z)` are joined iff their difference is realized by no
//! other pair of `Z`. If `U ⊆ Z ⊆ W` and such an edge has its difference in
//! `W`, the pair realizing it in `U` must be this very pair, so both endpoints
//! belong to `U`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::distset::{DistanceSet, IntegerSet, ModularParams};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Absolute difference over unordered pairs.
    Linear,
    /// Difference mod n over ordered pairs.
    Circular(ModularParams),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessGraph {
    vertices: IntegerSet,
    edges: Vec<(u64, u64)>,
    metric: Metric,
}

impl UniquenessGraph {
    pub fn vertices(&self) -> &IntegerSet {
        &self.vertices
    }

    /// Edges as `(smaller, larger)` pairs in lexicographic order.
    pub fn edges(&self) -> &[(u64, u64)] {
        &self.edges
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn neighbors(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// One line per vertex: `v: n1 n2 ...`.
    pub fn adjacency_text(&self) -> String {
        let mut out = String::new();
        for &v in &self.vertices {
            let ns: Vec<String> = self.neighbors(v).map(|n| n.to_string()).collect();
            let _ = writeln!(out, "{v}: {}", ns.join(" "));
        }
        out
    }

    fn difference(&self, a: u64, b: u64) -> u64 {
        match self.metric {
            Metric::Linear => a.abs_diff(b),
            Metric::Circular(m) => m.sub(b, a),
        }
    }
}

pub fn build_uniqueness_graph(z: &IntegerSet) -> UniquenessGraph {
    let zs = z.as_slice();
    let mut counts: HashMap<u64, u32> = HashMap::with_capacity(zs.len() * zs.len() / 2);
    for (i, &a) in zs.iter().enumerate() {
        for &b in &zs[i + 1..] {
            *counts.entry(b - a).or_default() += 1;
        }
    }
    let mut edges = Vec::new();
    for (i, &a) in zs.iter().enumerate() {
        for &b in &zs[i + 1..] {
            if counts[&(b - a)] == 1 {
                edges.push((a, b));
            }
        }
    }
    UniquenessGraph {
        vertices: z.clone(),
        edges,
        metric: Metric::Linear,
    }
}

/// An edge `{a, b}` requires both `(b - a) mod n` and `(a - b) mod n` to be
/// realized by exactly one ordered pair.
pub fn build_circular_uniqueness_graph(
    z: &IntegerSet,
    m: ModularParams,
) -> Result<UniquenessGraph> {
    m.check(z)?;
    let zs = z.as_slice();
    let mut counts: HashMap<u64, u32> = HashMap::with_capacity(zs.len() * zs.len());
    for &a in zs {
        for &b in zs {
            if a != b {
                *counts.entry(m.sub(a, b)).or_default() += 1;
            }
        }
    }
    let mut edges = Vec::new();
    for (i, &a) in zs.iter().enumerate() {
        for &b in &zs[i + 1..] {
            if counts[&m.sub(b, a)] == 1 && counts[&m.sub(a, b)] == 1 {
                edges.push((a, b));
            }
        }
    }
    Ok(UniquenessGraph {
        vertices: z.clone(),
        edges,
        metric: Metric::Circular(m),
    })
}

/// Endpoints of every edge whose difference lies in `w`.
///
/// Sound only when the graph was built over some `Z` with `U ⊆ Z ⊆ W`.
pub fn certified_members(g: &UniquenessGraph, w: &DistanceSet) -> IntegerSet {
    g.edges
        .iter()
        .filter(|&&(a, b)| w.contains(g.difference(a, b)))
        .flat_map(|&(a, b)| [a, b])
        .collect()
}
