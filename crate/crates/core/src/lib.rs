//! Reconstruction of sparse integer sets from their pairwise distance sets.
//!
//! Given `W = { |a - b| : a, b in V }` (or the circular analogue modulo `n`),
//! recover `V` up to shift and reflection. The solvers in [`linear`] and
//! [`circular`] validate every answer they return, so a recovered set always
//! reproduces `W` exactly. They may fail, and become more likely to as `V`
//! gets dense. [`oracle`] holds exhaustive reference solvers for small inputs
//! and [`harness`] runs seeded Monte-Carlo success-rate experiments.
//!
//! ```
//! use turnpike::{pairwise_distances, solve, IntegerSet, SolverConfig};
//!
//! let v = IntegerSet::from([2, 5, 13, 31, 44]);
//! let w = pairwise_distances(&v);
//! let out = solve(&w, &SolverConfig::default()).unwrap();
//! assert_eq!(out.recovered(), Some(&IntegerSet::from([0, 3, 11, 29, 42])));
//! ```

pub mod circular;
pub mod distset;
pub mod error;
pub mod harness;
pub mod linear;
pub mod oracle;
pub mod unigraph;

pub use circular::{solve_circular, CircularSolveOutcome, CircularStatus};
pub use distset::{
    canonicalize, circular_equivalent, circular_pairwise_distances, equivalent, pairwise_distances,
    DistanceSet, IntegerSet, ModularParams,
};
pub use error::{Error, Result};
pub use linear::{solve, FailureReason, SolveOutcome, SolvePath, SolveStatus, SolverConfig};
