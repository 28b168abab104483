//! Random instances and Monte-Carlo success-rate grids.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circular::solve_circular;
use crate::distset::{
    circular_equivalent, circular_pairwise_distances, equivalent, pairwise_distances, IntegerSet,
    ModularParams,
};
use crate::error::{Error, Result};
use crate::linear::{solve, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Linear,
    Circular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingModel {
    /// Uniform `k`-subset of `{0, ..., n-1}`.
    #[default]
    UniformSubset,
    /// Every integer below `n` included independently with probability `k/n`.
    Bernoulli,
}

/// Uniform `k`-subset of `{0, ..., n-1}` by a partial Fisher-Yates shuffle
/// over a sparse virtual array, so memory is `O(k)` even for huge `n`.
pub fn gen_instance(n: u64, k: u64, seed: u64) -> Result<IntegerSet> {
    if k == 0 || k > n {
        return Err(Error::InvalidInstance(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut swapped: HashMap<u64, u64> = HashMap::with_capacity(2 * k as usize);
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..k {
        let j = rng.gen_range(i..n);
        let at_j = swapped.get(&j).copied().unwrap_or(j);
        let at_i = swapped.get(&i).copied().unwrap_or(i);
        swapped.insert(j, at_i);
        out.push(at_j);
    }
    Ok(IntegerSet::new(out))
}

/// Each integer below `n` kept with probability `k/n`. May return fewer or
/// more than `k` elements, including none.
pub fn gen_bernoulli_instance(n: u64, k: u64, seed: u64) -> Result<IntegerSet> {
    if k == 0 || k > n {
        return Err(Error::InvalidInstance(format!(
            "need 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = k as f64 / n as f64;
    Ok((0..n).filter(|_| rng.gen_bool(p)).collect())
}

pub fn sample(model: SamplingModel, n: u64, k: u64, seed: u64) -> Result<IntegerSet> {
    match model {
        SamplingModel::UniformSubset => gen_instance(n, k, seed),
        SamplingModel::Bernoulli => gen_bernoulli_instance(n, k, seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    pub solve_micros: f64,
}

/// Solves the distance set of `v` and reports whether the answer is
/// equivalent to `v` itself.
///
/// Panics if a solver reports a recovery whose distance set differs from the
/// input; that would be a soundness bug, not a failed trial.
pub fn check_instance(v: &IntegerSet, n: u64, mode: Mode, cfg: &SolverConfig) -> Result<bool> {
    Ok(match mode {
        Mode::Linear => {
            let w = pairwise_distances(v);
            let out = solve(&w, cfg)?;
            match out.recovered() {
                Some(u) => {
                    assert_eq!(pairwise_distances(u), w, "unsound recovery {u} for {v}");
                    equivalent(u, v)
                }
                None => false,
            }
        }
        Mode::Circular => {
            let m = ModularParams::new(n)?;
            let w = circular_pairwise_distances(v, m)?;
            let out = solve_circular(&w, m, cfg)?;
            match out.recovered() {
                Some(u) => {
                    assert_eq!(
                        circular_pairwise_distances(u, m)?,
                        w,
                        "unsound circular recovery {u} for {v}"
                    );
                    circular_equivalent(u, v, m)?
                }
                None => false,
            }
        }
    })
}

/// [`check_instance`] plus wall-clock time. Not available where the clock
/// is missing, such as `wasm32-unknown-unknown`.
pub fn run_instance(
    v: &IntegerSet,
    n: u64,
    mode: Mode,
    cfg: &SolverConfig,
) -> Result<TrialOutcome> {
    let start = Instant::now();
    let success = check_instance(v, n, mode, cfg)?;
    Ok(TrialOutcome {
        success,
        solve_micros: start.elapsed().as_secs_f64() * 1e6,
    })
}

/// Generates an instance for `(n, k, seed)` and runs it. An empty draw
/// (possible under Bernoulli sampling) counts as a failure. Untimed trials
/// report a solve time of zero.
#[allow(clippy::too_many_arguments)]
pub fn run_trial(
    n: u64,
    k: u64,
    seed: u64,
    mode: Mode,
    model: SamplingModel,
    cfg: &SolverConfig,
    timed: bool,
) -> Result<TrialOutcome> {
    let v = sample(model, n, k, seed)?;
    if v.is_empty() {
        return Ok(TrialOutcome {
            success: false,
            solve_micros: 0.0,
        });
    }
    if timed {
        run_instance(&v, n, mode, cfg)
    } else {
        Ok(TrialOutcome {
            success: check_instance(&v, n, mode, cfg)?,
            solve_micros: 0.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialGrid {
    pub ns: Vec<u64>,
    pub ks: Vec<u64>,
    pub trials_per_cell: u64,
    pub master_seed: u64,
    pub mode: Mode,
    pub model: SamplingModel,
    pub solver: SolverConfig,
    /// Record wall-clock solve times. Off by default since timings make
    /// otherwise identical runs differ.
    pub record_timing: bool,
}

impl TrialGrid {
    pub fn new(
        ns: Vec<u64>,
        ks: Vec<u64>,
        trials_per_cell: u64,
        master_seed: u64,
        mode: Mode,
    ) -> Self {
        Self {
            ns,
            ks,
            trials_per_cell,
            master_seed,
            mode,
            model: SamplingModel::default(),
            solver: SolverConfig::default(),
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.ks.is_empty() {
            return Err(Error::InvalidInstance(
                "grid needs at least one n and one k".into(),
            ));
        }
        if self.trials_per_cell == 0 {
            return Err(Error::InvalidInstance(
                "trials per cell must be at least 1".into(),
            ));
        }
        for &n in &self.ns {
            for &k in &self.ks {
                if k == 0 || k >= n {
                    return Err(Error::InvalidInstance(format!(
                        "every k must satisfy 1 <= k < n (k={k}, n={n})"
                    )));
                }
            }
        }
        self.solver.validate()
    }

    fn cells(&self) -> Vec<(u64, u64)> {
        let mut ns = self.ns.clone();
        let mut ks = self.ks.clone();
        ns.sort_unstable();
        ns.dedup();
        ks.sort_unstable();
        ks.dedup();
        ns.iter()
            .flat_map(|&n| ks.iter().map(move |&k| (n, k)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: u64,
    pub k: u64,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    pub mean_solve_micros: Option<f64>,
}

impl TrialRecord {
    /// Binomial standard error of the success rate.
    pub fn std_error(&self) -> f64 {
        let p = self.success_rate;
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one trial, a pure function of its coordinates.
pub fn trial_seed(master_seed: u64, n: u64, k: u64, trial: u64) -> u64 {
    [n, k, trial]
        .into_iter()
        .fold(splitmix64(master_seed), |h, x| splitmix64(h ^ x))
}

fn run_cell_trials(grid: &TrialGrid, n: u64, k: u64) -> Result<Vec<TrialOutcome>> {
    let run = |i: u64| {
        run_trial(
            n,
            k,
            trial_seed(grid.master_seed, n, k, i),
            grid.mode,
            grid.model,
            &grid.solver,
            grid.record_timing,
        )
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..grid.trials_per_cell).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..grid.trials_per_cell).map(run).collect()
    }
}

/// Runs every `(n, k)` cell. Records come out sorted by `(n, k)` and, unless
/// timing is recorded, do not depend on scheduling.
pub fn run_grid(grid: &TrialGrid) -> Result<Vec<TrialRecord>> {
    grid.validate()?;
    grid.cells()
        .into_iter()
        .map(|(n, k)| {
            let outcomes = run_cell_trials(grid, n, k)?;
            let successes = outcomes.iter().filter(|o| o.success).count() as u64;
            let trials = outcomes.len() as u64;
            let mean = outcomes.iter().map(|o| o.solve_micros).sum::<f64>() / trials as f64;
            Ok(TrialRecord {
                n,
                k,
                trials,
                successes,
                success_rate: successes as f64 / trials as f64,
                mean_solve_micros: grid.record_timing.then_some(mean),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,k,trials,successes,success_rate,mean_solve_micros";

/// An unmeasured solve time leaves the last field empty.
pub fn emit_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = write!(
            out,
            "{},{},{},{},{:.4},",
            r.n, r.k, r.trials, r.successes, r.success_rate
        );
        if let Some(us) = r.mean_solve_micros {
            let _ = write!(out, "{us:.1}");
        }
        out.push('\n');
    }
    out
}

/// A standalone matplotlib script that plots success rate against `k`, one
/// curve per `n`, from the CSV at `csv_path`.
pub fn plot_script(csv_path: &str, image_path: &str) -> String {
    format!(
        r#"#!/usr/bin/env python3
import csv
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

curves = defaultdict(list)
with open({csv:?}, newline="") as fh:
    for row in csv.DictReader(fh):
        curves[int(row["n"])].append((int(row["k"]), float(row["success_rate"])))

fig, ax = plt.subplots(figsize=(6, 4))
for n in sorted(curves):
    pts = sorted(curves[n])
    ax.plot([k for k, _ in pts], [p for _, p in pts], marker="o", label=f"n={{n}}")
ax.set_xlabel("k")
ax.set_ylabel("probability of successful recovery")
ax.set_ylim(-0.02, 1.02)
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig({img:?})
print({img:?})
"#,
        csv = csv_path,
        img = image_path
    )
}
