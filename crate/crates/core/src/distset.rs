//! Integer sets, distance sets and the set algebra shared by both solvers.
//!
//! Both set types are thin newtypes over a strictly ascending `Vec<u64>`.
//! Distances are sets, never multisets: how often a distance is realized is
//! not recorded anywhere.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

macro_rules! sorted_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<u64>);

        impl $name {
            /// Builds the set from arbitrary values, sorting and dropping duplicates.
            pub fn new<I: IntoIterator<Item = u64>>(values: I) -> Self {
                let mut v: Vec<u64> = values.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                Self(v)
            }

            pub fn empty() -> Self {
                Self(Vec::new())
            }

            pub(crate) fn from_sorted(v: Vec<u64>) -> Self {
                debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
                Self(v)
            }

            pub fn as_slice(&self) -> &[u64] {
                &self.0
            }

            pub fn into_vec(self) -> Vec<u64> {
                self.0
            }

            pub fn contains(&self, value: u64) -> bool {
                self.0.binary_search(&value).is_ok()
            }

            pub fn min_value(&self) -> Option<u64> {
                self.0.first().copied()
            }

            pub fn max_value(&self) -> Option<u64> {
                self.0.last().copied()
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.iter().all(|&x| other.contains(x))
            }

            pub fn union(&self, other: &Self) -> Self {
                Self::new(self.0.iter().chain(other.0.iter()).copied())
            }

            pub fn intersection(&self, other: &Self) -> Self {
                Self::from_sorted(merge_intersect(&self.0, &other.0))
            }

            /// Elements of `self` missing from `other`.
            pub fn difference(&self, other: &Self) -> Self {
                Self::from_sorted(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
            }
        }

        impl Deref for $name {
            type Target = [u64];

            fn deref(&self) -> &[u64] {
                &self.0
            }
        }

        impl FromIterator<u64> for $name {
            fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
                Self::new(iter)
            }
        }

        impl<const N: usize> From<[u64; N]> for $name {
            fn from(values: [u64; N]) -> Self {
                Self::new(values)
            }
        }

        impl From<Vec<u64>> for $name {
            fn from(values: Vec<u64>) -> Self {
                Self::new(values)
            }
        }

        impl<'a> IntoIterator for &'a $name {
            type Item = &'a u64;
            type IntoIter = std::slice::Iter<'a, u64>;

            fn into_iter(self) -> Self::IntoIter {
                self.0.iter()
            }
        }

        /// Whitespace-separated decimal integers, ascending.
        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
        }

        /// Parses decimal integers separated by any whitespace, in any order.
        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                parse_values(s).map(Self::new)
            }
        }
    };
}

sorted_set!(
    /// A finite set of distinct non-negative integer positions.
    IntegerSet
);

sorted_set!(
    /// A set of pairwise distances. A distance set produced from a nonempty
    /// integer set always contains 0; intermediate sets (shift intersections)
    /// need not.
    DistanceSet
);

impl From<IntegerSet> for DistanceSet {
    fn from(s: IntegerSet) -> Self {
        Self(s.0)
    }
}

impl From<DistanceSet> for IntegerSet {
    fn from(s: DistanceSet) -> Self {
        Self(s.0)
    }
}

/// Size of the cyclic group the circular variant lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModularParams(u64);

impl ModularParams {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(Self(n))
    }

    pub fn n(self) -> u64 {
        self.0
    }

    /// `(a - b) mod n` for `a, b < n`.
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    /// `(a + b) mod n` for `a, b < n`.
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        self.sub(a, self.0 - b)
    }

    pub(crate) fn check(self, values: &[u64]) -> Result<()> {
        match values.iter().find(|&&x| x >= self.0) {
            Some(&value) => Err(Error::OutOfRange {
                value,
                modulus: self.0,
            }),
            None => Ok(()),
        }
    }
}

pub fn parse_values(s: &str) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                token: tok.to_string(),
            })
        })
        .collect()
}

fn merge_intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `{ |a - b| : a, b in v }`, including 0 whenever `v` is nonempty.
pub fn pairwise_distances(v: &IntegerSet) -> DistanceSet {
    let xs = v.as_slice();
    if xs.is_empty() {
        return DistanceSet::empty();
    }
    let mut d = Vec::with_capacity(xs.len() * (xs.len() - 1) / 2 + 1);
    d.push(0);
    for (i, &a) in xs.iter().enumerate() {
        d.extend(xs[i + 1..].iter().map(|&b| b - a));
    }
    DistanceSet::new(d)
}

/// `{ (a - b) mod n : a, b in v }` over ordered pairs.
pub fn circular_pairwise_distances(v: &IntegerSet, m: ModularParams) -> Result<DistanceSet> {
    m.check(v)?;
    let xs = v.as_slice();
    let mut d = Vec::with_capacity(xs.len() * xs.len());
    for &a in xs {
        d.extend(xs.iter().map(|&b| m.sub(a, b)));
    }
    Ok(DistanceSet::new(d))
}

/// `v - min(v)`.
pub fn normalize_shift(v: &IntegerSet) -> IntegerSet {
    match v.min_value() {
        Some(lo) => IntegerSet::from_sorted(v.iter().map(|&x| x - lo).collect()),
        None => IntegerSet::empty(),
    }
}

/// `max(v) - v`.
pub fn reflect(v: &IntegerSet) -> IntegerSet {
    match v.max_value() {
        Some(hi) => IntegerSet::from_sorted(v.iter().rev().map(|&x| hi - x).collect()),
        None => IntegerSet::empty(),
    }
}

/// Picks the representative starting at 0 whose first gap is no larger than
/// its last gap. On a tie the shifted (unreflected) set is returned.
pub fn canonicalize(v: &IntegerSet) -> IntegerSet {
    let xs = v.as_slice();
    let k = xs.len();
    if k < 2 || xs[1] - xs[0] <= xs[k - 1] - xs[k - 2] {
        normalize_shift(v)
    } else {
        reflect(v)
    }
}

/// The lexicographically smaller of the shifted and reflected forms. Unlike
/// [`canonicalize`] this is a true class invariant, also on ties.
pub fn normal_form(v: &IntegerSet) -> IntegerSet {
    let a = normalize_shift(v);
    let b = reflect(v);
    a.min(b)
}

/// True iff `a = c + b` or `a = c - b` for some integer `c`.
pub fn equivalent(a: &IntegerSet, b: &IntegerSet) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let a0 = normalize_shift(a);
    a0 == normalize_shift(b) || a0 == reflect(b)
}

fn rotations(v: &[u64], m: ModularParams) -> impl Iterator<Item = Vec<u64>> + '_ {
    let negated: Vec<u64> = v.iter().map(|&x| m.sub(0, x)).collect();
    let orientations = [v.to_vec(), negated];
    orientations.into_iter().flat_map(move |orient| {
        (0..orient.len()).map(move |i| {
            let pivot = orient[i];
            let mut r: Vec<u64> = orient.iter().map(|&x| m.sub(x, pivot)).collect();
            r.sort_unstable();
            r
        })
    })
}

/// True iff `a = (c + b) mod n` or `a = (c - b) mod n` for some `c`.
pub fn circular_equivalent(a: &IntegerSet, b: &IntegerSet, m: ModularParams) -> Result<bool> {
    m.check(a)?;
    m.check(b)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    if a.is_empty() {
        return Ok(true);
    }
    let target = circular_normal_form(a, m)?;
    Ok(rotations(b, m).any(|r| r == target.as_slice()))
}

/// Smallest (lexicographically) rotation or reflection of `v` that contains 0.
pub fn circular_normal_form(v: &IntegerSet, m: ModularParams) -> Result<IntegerSet> {
    m.check(v)?;
    Ok(rotations(v, m)
        .min()
        .map(IntegerSet::from_sorted)
        .unwrap_or_default())
}

/// `W ∩ (W + d)`.
pub fn shift_intersect(w: &DistanceSet, d: u64) -> DistanceSet {
    let shifted: Vec<u64> = w.iter().filter_map(|&x| x.checked_add(d)).collect();
    DistanceSet::from_sorted(merge_intersect(w, &shifted))
}

/// `W ∩ ((W + d) mod n)`.
pub fn circular_shift_intersect(w: &DistanceSet, d: u64, m: ModularParams) -> Result<DistanceSet> {
    m.check(w)?;
    m.check(&[d])?;
    Ok(DistanceSet::from_sorted(
        w.iter()
            .copied()
            .filter(|&x| w.contains(m.sub(x, d)))
            .collect(),
    ))
}

/// Whether `W` is closed under `d -> (n - d) mod n`.
pub fn is_closed_under_negation(w: &DistanceSet, m: ModularParams) -> bool {
    w.iter().all(|&x| x < m.n() && w.contains(m.sub(0, x)))
}
