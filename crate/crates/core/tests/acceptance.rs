//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use turnpike::circular::solve_circular;
use turnpike::distset::{
    circular_equivalent, circular_pairwise_distances, circular_shift_intersect, equivalent,
    pairwise_distances, DistanceSet, IntegerSet, ModularParams,
};
use turnpike::harness::{
    emit_csv, gen_instance, run_grid, trial_seed, Mode, TrialGrid, TrialRecord,
};
use turnpike::linear::{multi_intersect, solve, SolverConfig};
use turnpike::oracle::{
    backtracking_solve, brute_force_solutions, canonical_sets, circular_brute_force,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

const W7: [u64; 41] = [
    0, 2, 3, 5, 8, 12, 14, 17, 30, 33, 37, 38, 49, 51, 52, 54, 57, 60, 68, 71, 76, 89, 90, 94, 97,
    101, 103, 106, 108, 109, 111, 114, 127, 128, 139, 141, 144, 165, 177, 179, 182,
];
const W7_FIRST: [u64; 17] = [
    3, 5, 8, 17, 33, 52, 54, 57, 60, 71, 97, 106, 109, 111, 114, 144, 182,
];
const W7_BEYOND: [u64; 6] = [54, 106, 111, 114, 144, 182];
const U7: [u64; 10] = [0, 3, 5, 17, 54, 106, 111, 114, 144, 182];

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn ms(d: Duration) -> String {
    format!("{:.2} ms", d.as_secs_f64() * 1e3)
}

fn small_grid() -> Vec<IntegerSet> {
    (2..=4).flat_map(|k| canonical_sets(k, 20)).collect()
}

fn worked_example() -> Check {
    let w = DistanceSet::from(W7);
    // the anchors {3, 5, 17} of the worked run
    let cfg = SolverConfig {
        t_override: Some(3),
        ..SolverConfig::default()
    };
    let (out, elapsed) = timed(|| solve(&w, &cfg));
    let out = out.map_err(|e| e.to_string())?;
    let d = &out.diagnostics;
    ensure!(d.u01 == Some(3), "u01 = {:?}", d.u01);
    let first = d.trace.first_intersection.clone().unwrap_or_default();
    ensure!(first == DistanceSet::from(W7_FIRST), "W ∩ W1 = {first}");
    let certified = d.trace.certified.clone().unwrap_or_default();
    ensure!(
        certified.contains(5) && certified.contains(17),
        "certified = {certified}"
    );
    let anchors = d.trace.anchors.clone().unwrap_or_default();
    ensure!(
        anchors == IntegerSet::from([3, 5, 17]),
        "anchors = {anchors}"
    );
    let survivors = d.trace.survivors.clone().unwrap_or_default();
    let beyond = survivors.difference(&anchors.clone().into());
    ensure!(
        beyond == DistanceSet::from(W7_BEYOND),
        "survivors beyond the anchors = {beyond}"
    );
    ensure!(
        survivors == DistanceSet::from(W7_BEYOND).union(&DistanceSet::from([17])),
        "survivors = {survivors}"
    );
    let u = out.recovered().ok_or("not recovered")?;
    ensure!(*u == IntegerSet::from(U7), "U = {u}");

    let (default_run, default_elapsed) = timed(|| solve(&w, &SolverConfig::default()));
    let default_run = default_run.map_err(|e| e.to_string())?;
    ensure!(
        default_run.recovered() == Some(&IntegerSet::from(U7)),
        "default anchors give {:?}",
        default_run.recovered()
    );
    let slowest = elapsed.max(default_elapsed);
    ensure!(slowest < Duration::from_millis(10), "took {}", ms(slowest));
    Ok(format!("U = {u}, {}", ms(slowest)))
}

fn five_point_example() -> Check {
    let w = DistanceSet::from([0, 3, 8, 11, 13, 18, 26, 29, 31, 39, 42]);
    let out = solve(&w, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let u = out.recovered().ok_or("not recovered")?;
    ensure!(
        equivalent(u, &IntegerSet::from([2, 5, 13, 31, 44])),
        "recovered {u}"
    );
    Ok(format!("U = {u}"))
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let (mut instances, mut unique, mut recovered) = (0, 0, 0);
    for u in small_grid() {
        instances += 1;
        let w = pairwise_distances(&u);
        let out = solve(&w, &cfg).map_err(|e| e.to_string())?;
        let trace = &out.diagnostics.trace;
        for set in [&trace.certified, &trace.anchors].into_iter().flatten() {
            ensure!(
                set.is_subset(&u),
                "U = {u}: certified or anchor set {set} not inside U"
            );
        }
        let oracle = brute_force_solutions(&w, 1 << 24);
        ensure!(oracle.exhausted, "oracle budget exhausted on {w}");
        if oracle.is_unique() {
            unique += 1;
        }
        if let Some(r) = out.recovered() {
            recovered += 1;
            ensure!(pairwise_distances(r) == w, "unsound: {r} for W = {w}");
            if oracle.is_unique() {
                ensure!(
                    equivalent(r, &oracle.solutions[0]),
                    "W = {w}: solver {r}, oracle {}",
                    oracle.solutions[0]
                );
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "{instances} instances, {unique} uniquely realizable, {recovered} recovered, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

fn subsets(items: &[u64]) -> impl Iterator<Item = IntegerSet> + '_ {
    (1u32..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}

fn linear_inclusion(u: &IntegerSet, anchors: &IntegerSet) -> Result<(), String> {
    let w = pairwise_distances(u);
    let s = multi_intersect(&w, anchors);
    let floor = anchors.max_value().unwrap_or(0);
    for &x in u.iter().filter(|&&x| x >= floor) {
        ensure!(s.contains(x), "U = {u}, anchors {anchors}: {x} lost");
    }
    Ok(())
}

fn circular_inclusion(
    u: &IntegerSet,
    anchors: &IntegerSet,
    m: ModularParams,
) -> Result<(), String> {
    let w = circular_pairwise_distances(u, m).map_err(|e| e.to_string())?;
    let mut acc = w.clone();
    for &a in anchors {
        acc = acc.intersection(&circular_shift_intersect(&w, a, m).map_err(|e| e.to_string())?);
    }
    ensure!(
        DistanceSet::from(u.clone()).is_subset(&acc),
        "U = {u} mod {}, anchors {anchors}: survivors {acc}",
        m.n()
    );
    Ok(())
}

fn deterministic_inclusion() -> Check {
    let mut checks = 0u64;
    for u in small_grid() {
        let diameter = u.max_value().unwrap_or(0);
        let positive: Vec<u64> = u.iter().copied().filter(|&x| x > 0).collect();
        let rings = [diameter + 1, 2 * diameter + 3];
        for anchors in subsets(&positive) {
            linear_inclusion(&u, &anchors)?;
            for &n in &rings {
                circular_inclusion(&u, &anchors, ModularParams::new(n).unwrap())?;
            }
            checks += 3;
        }
    }
    for i in 0..500u64 {
        let h = trial_seed(2024, 0, 0, i);
        let n = 8 + h % 249;
        let k = 2 + (h >> 16) % 11;
        let v = gen_instance(n, k.min(n), h).map_err(|e| e.to_string())?;
        let u: IntegerSet = v.iter().map(|&x| x - v[0]).collect();
        let positive: Vec<u64> = u.iter().copied().filter(|&x| x > 0).collect();
        let pick = h >> 32;
        let anchors: IntegerSet = positive
            .iter()
            .enumerate()
            .filter(|(j, _)| pick >> j & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        linear_inclusion(&u, &anchors)?;
        circular_inclusion(&u, &anchors, ModularParams::new(n).unwrap())?;
        circular_inclusion(&u, &u, ModularParams::new(n).unwrap())?;
        checks += 3;
    }
    Ok(format!("{checks} inclusion checks, no violations"))
}

fn rate(records: &[TrialRecord], n: u64, k: u64) -> &TrialRecord {
    records.iter().find(|r| r.n == n && r.k == k).unwrap()
}

fn within_noise(lower: &TrialRecord, upper: &TrialRecord) -> bool {
    let sigma = (lower.std_error().powi(2) + upper.std_error().powi(2)).sqrt();
    upper.success_rate <= lower.success_rate + 3.0 * sigma
}

const NS: [u64; 2] = [512, 1024];
const KS: [u64; 5] = [4, 8, 16, 24, 32];

fn success_curve() -> Check {
    let start = Instant::now();
    let grid = TrialGrid::new(NS.to_vec(), KS.to_vec(), 200, 7, Mode::Linear);
    let records = run_grid(&grid).map_err(|e| e.to_string())?;
    for n in NS {
        for pair in KS.windows(2) {
            let (a, b) = (rate(&records, n, pair[0]), rate(&records, n, pair[1]));
            ensure!(
                within_noise(a, b),
                "n={n}: rate rises from {} (k={}) to {} (k={})",
                a.success_rate,
                pair[0],
                b.success_rate,
                pair[1]
            );
        }
    }
    for k in KS {
        let (small, large) = (rate(&records, 512, k), rate(&records, 1024, k));
        ensure!(
            within_noise(large, small),
            "k={k}: n=1024 rate {} below n=512 rate {}",
            large.success_rate,
            small.success_rate
        );
    }
    let pinned = rate(&records, 1024, 8).success_rate;
    ensure!(pinned >= 0.90, "rate(1024, 8) = {pinned}");

    // failures at the pinned cell: how many are genuinely ambiguous
    let mut ambiguous = 0;
    let mut failures = 0;
    for i in 0..200 {
        let v = gen_instance(1024, 8, trial_seed(7, 1024, 8, i)).unwrap();
        let w = pairwise_distances(&v);
        let out = solve(&w, &SolverConfig::default()).map_err(|e| e.to_string())?;
        if !out.recovered().is_some_and(|u| equivalent(u, &v)) {
            failures += 1;
            let oracle = backtracking_solve(&w, 1 << 24);
            ensure!(
                oracle.solutions.iter().any(|s| equivalent(s, &v)),
                "oracle misses the generator of {w}"
            );
            if oracle.solutions.len() > 1 {
                ambiguous += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    let curve: Vec<String> = records
        .iter()
        .map(|r| format!("{}/{}={:.3}", r.n, r.k, r.success_rate))
        .collect();
    Ok(format!(
        "{}; rate(1024,8)={pinned:.3} ({failures} misses, {ambiguous} ambiguous); {:.1} s",
        curve.join(" "),
        elapsed.as_secs_f64()
    ))
}

fn circular_solver() -> Check {
    let m = ModularParams::new(13).unwrap();
    let w = DistanceSet::from([0, 1, 3, 4, 9, 10, 12]);
    let out = solve_circular(&w, m, &SolverConfig::default()).map_err(|e| e.to_string())?;
    let u = out.recovered().ok_or("n=13 instance not recovered")?;
    let expected = IntegerSet::from([0, 1, 4]);
    ensure!(
        circular_equivalent(u, &expected, m).unwrap(),
        "recovered {u}"
    );
    let oracle = circular_brute_force(&w, m, 1 << 24).map_err(|e| e.to_string())?;
    ensure!(
        oracle.exhausted && oracle.is_unique(),
        "oracle classes: {:?}",
        oracle.solutions
    );

    // check_instance panics on an unsound recovery, which fails this criterion
    let grid = TrialGrid::new(vec![1024], vec![8], 200, 7, Mode::Circular);
    let records = run_grid(&grid).map_err(|e| e.to_string())?;
    let r = records[0].success_rate;
    ensure!(r >= 0.80, "rate(1024, 8) = {r}");
    Ok(format!("n=13 gives {u}; rate(1024, 8) = {r:.3}"))
}

fn simulate_cli(threads: &str, mode: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_turnpike"))
        .args([
            "simulate",
            "--ns",
            "512,1024",
            "--ks",
            "4,8,16",
            "--trials",
            "60",
            "--seed",
            "99",
            "--mode",
            mode,
            "--threads",
            threads,
        ])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "simulate exited with {}", out.status);
    Ok(out.stdout)
}

fn determinism() -> Check {
    for mode in ["linear", "circular"] {
        let a = simulate_cli("1", mode)?;
        let b = simulate_cli("4", mode)?;
        ensure!(a == b, "{mode}: CSV differs between 1 and 4 threads");
    }
    let grid = TrialGrid::new(NS.to_vec(), KS.to_vec(), 50, 3, Mode::Linear);
    let csv = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_grid(&grid).map(|r| emit_csv(&r)))
    };
    let a = csv(1).map_err(|e| e.to_string())?;
    let b = csv(8).map_err(|e| e.to_string())?;
    ensure!(a == b, "library grid differs between 1 and 8 threads");
    Ok("CLI and library CSV byte-identical across 1/4/8 threads".into())
}

fn performance() -> Check {
    let mut slowest = Duration::ZERO;
    for seed in 0..5 {
        let v = gen_instance(4096, 64, seed).map_err(|e| e.to_string())?;
        let w = pairwise_distances(&v);
        let (out, elapsed) = timed(|| solve(&w, &SolverConfig::default()));
        out.map_err(|e| e.to_string())?;
        slowest = slowest.max(elapsed);
    }
    ensure!(
        slowest < Duration::from_secs(1),
        "n=4096, k=64 took {}",
        ms(slowest)
    );
    let w7 = DistanceSet::from(W7);
    let (out, small) = timed(|| solve(&w7, &SolverConfig::default()));
    out.map_err(|e| e.to_string())?;
    ensure!(
        small < Duration::from_millis(10),
        "worked example took {}",
        ms(small)
    );
    Ok(format!(
        "n=4096, k=64 at most {}; worked example {}",
        ms(slowest),
        ms(small)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked example, bit-exact", worked_example),
        ("five-point example", five_point_example),
        ("exhaustive oracle equivalence", oracle_equivalence),
        ("deterministic inclusion", deterministic_inclusion),
        ("success curve shape and pin", success_curve),
        ("circular solver", circular_solver),
        ("determinism across thread counts", determinism),
        ("performance envelope", performance),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({why})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
