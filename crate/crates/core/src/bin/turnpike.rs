//! Command-line front end.
//!
//! Exit codes: 0 success, 1 well-formed input with no validated answer,
//! 2 usage or parse error.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use turnpike::circular::solve_circular;
use turnpike::distset::{circular_pairwise_distances, pairwise_distances};
use turnpike::harness::{self, Mode, SamplingModel, TrialGrid};
use turnpike::linear::{solve, SolveOutcome, SolveStatus, SolverConfig};
use turnpike::oracle;
use turnpike::{CircularStatus, DistanceSet, Error, IntegerSet, ModularParams};

#[derive(Parser)]
#[command(
    name = "turnpike",
    version,
    about = "Recover integer sets from pairwise distance sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random k-subset of {0, ..., n-1}
    Gen {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        /// Random when absent; the chosen seed is printed on stderr
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
    },
    /// Print the pairwise distance set of an integer set
    Dist {
        input: Option<PathBuf>,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Recover a set from linear pairwise distances
    Solve {
        input: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
        /// Only try {0} ∪ (W ∩ (W + u01))
        #[arg(long)]
        fast_only: bool,
        /// Skip the mirrored fallback pass
        #[arg(long)]
        no_reverse: bool,
    },
    /// Recover a set from circular (mod n) pairwise distances
    SolveCircular {
        input: Option<PathBuf>,
        #[arg(long)]
        modulus: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check that SET realizes DISTANCES exactly
    Verify {
        set: PathBuf,
        distances: PathBuf,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Exhaustive reference solver
    Oracle {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = OracleMethod::Backtrack)]
        method: OracleMethod,
        #[arg(long)]
        modulus: Option<u64>,
        /// Count ambiguous distance sets over all canonical k-sets instead
        #[arg(long, requires_all = ["k", "max_diameter"])]
        census: bool,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_diameter: Option<u64>,
    },
    /// Monte-Carlo success rates over an (n, k) grid, as CSV
    Simulate {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<u64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Linear)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
        /// Worker threads (0 = all cores)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Fill the mean_solve_micros column (makes output run-dependent)
        #[arg(long)]
        timing: bool,
        /// Also write a plotting script for the CSV to this path
        #[arg(long)]
        emit_plot: Option<PathBuf>,
        /// CSV path the plot script should read
        #[arg(long, default_value = "success.csv")]
        plot_csv: String,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Print intermediate sets on stderr
    #[arg(long)]
    trace: bool,
    /// Number of anchors (default: ceil(log2 k̂))
    #[arg(long = "t")]
    t_override: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Linear,
    Circular,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Uniform,
    Bernoulli,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMethod {
    Backtrack,
    Brute,
}

impl From<ModelArg> for SamplingModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Uniform => SamplingModel::UniformSubset,
            ModelArg::Bernoulli => SamplingModel::Bernoulli,
        }
    }
}

enum Failure {
    NoSolution(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Parses a distance set, inserting the self-distance 0 when it is missing.
fn read_distances(path: Option<&PathBuf>) -> Result<DistanceSet, Failure> {
    let w: DistanceSet = read_input(path)?.parse()?;
    if w.is_empty() {
        return Err(Failure::Usage("empty distance set".into()));
    }
    if !w.contains(0) {
        eprintln!("note: inserting missing distance 0");
        return Ok(w.union(&DistanceSet::from([0])));
    }
    Ok(w)
}

fn modulus(n: Option<u64>) -> Result<Option<ModularParams>, Failure> {
    n.map(ModularParams::new).transpose().map_err(Failure::from)
}

fn solver_config(args: &SolverArgs) -> SolverConfig {
    SolverConfig {
        t_override: args.t_override,
        ..SolverConfig::default()
    }
}

fn print_trace_line(label: &str, value: Option<impl std::fmt::Display>) {
    if let Some(v) = value {
        eprintln!("{label}: {v}");
    }
}

fn print_linear_trace(w: &DistanceSet, out: &SolveOutcome) {
    let d = &out.diagnostics;
    let t = &d.trace;
    eprintln!("W: {w}");
    eprintln!("estimated k: {}", d.estimated_k);
    print_trace_line("u01", d.u01);
    print_trace_line("W ∩ W1", t.first_intersection.as_ref());
    print_trace_line("Z", t.graph_vertices.as_ref());
    if let Some(adj) = &t.graph_adjacency {
        eprintln!("graph:");
        for line in adj.lines() {
            eprintln!("  {line}");
        }
    }
    print_trace_line("certified", t.certified.as_ref());
    print_trace_line("anchors", t.anchors.as_ref());
    print_trace_line("survivors", t.survivors.as_ref());
    if let (Some(s), Some(a)) = (&t.survivors, &t.anchors) {
        eprintln!("beyond anchors: {}", s.difference(&a.clone().into()));
    }
    print_trace_line("forward candidate", t.forward_candidate.as_ref());
    print_trace_line("reverse candidate", t.reverse_candidate.as_ref());
    print_trace_line("path", d.path);
}

fn cmd_gen(n: u64, k: u64, seed: Option<u64>, model: ModelArg) -> CmdResult {
    let seed = seed.unwrap_or_else(|| {
        let s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        eprintln!("seed: {s}");
        s
    });
    let v = harness::sample(model.into(), n, k, seed)?;
    println!("{v}");
    Ok(())
}

fn cmd_dist(input: Option<PathBuf>, n: Option<u64>) -> CmdResult {
    let v: IntegerSet = read_input(input.as_ref())?.parse()?;
    let w = match modulus(n)? {
        Some(m) => circular_pairwise_distances(&v, m)?,
        None => pairwise_distances(&v),
    };
    println!("{w}");
    Ok(())
}

fn cmd_solve(
    input: Option<PathBuf>,
    args: SolverArgs,
    fast_only: bool,
    no_reverse: bool,
) -> CmdResult {
    let w = read_distances(input.as_ref())?;
    let mut cfg = if fast_only {
        SolverConfig::fast_only()
    } else {
        SolverConfig::default()
    };
    cfg.t_override = args.t_override;
    if no_reverse {
        cfg.enable_reverse_pass = false;
    }
    let out = solve(&w, &cfg)?;
    if args.trace {
        print_linear_trace(&w, &out);
    }
    match out.status {
        SolveStatus::Recovered(u) => {
            println!("{u}");
            Ok(())
        }
        SolveStatus::Failed(reason) => Err(Failure::NoSolution(reason.to_string())),
    }
}

fn cmd_solve_circular(input: Option<PathBuf>, n: u64, args: SolverArgs) -> CmdResult {
    let m = ModularParams::new(n)?;
    let w = read_distances(input.as_ref())?;
    let out = solve_circular(&w, m, &solver_config(&args))?;
    if args.trace {
        let d = &out.diagnostics;
        eprintln!("W: {w}");
        eprintln!("modulus: {n}");
        print_trace_line("u01", d.u01);
        print_trace_line("u02", d.u02);
        print_trace_line("Z", d.graph_vertices.as_ref());
        if let Some(adj) = &d.graph_adjacency {
            eprintln!("graph:");
            for line in adj.lines() {
                eprintln!("  {line}");
            }
        }
        print_trace_line("certified", d.certified.as_ref());
        print_trace_line("anchors", d.anchors.as_ref());
        print_trace_line("candidate", d.candidate.as_ref());
    }
    match out.status {
        CircularStatus::Recovered(u) => {
            println!("{u}");
            Ok(())
        }
        CircularStatus::Failed(reason) => Err(Failure::NoSolution(reason.to_string())),
    }
}

fn cmd_verify(set: PathBuf, distances: PathBuf, n: Option<u64>) -> CmdResult {
    let v: IntegerSet = read_input(Some(&set))?.parse()?;
    let w: DistanceSet = read_input(Some(&distances))?.parse()?;
    let produced = match modulus(n)? {
        Some(m) => circular_pairwise_distances(&v, m)?,
        None => pairwise_distances(&v),
    };
    if produced == w {
        return Ok(());
    }
    let missing = produced.difference(&w);
    let extra = w.difference(&produced);
    println!("missing: {missing} / extra: {extra}");
    Err(Failure::NoSolution("distance sets differ".into()))
}

fn cmd_oracle(
    input: Option<PathBuf>,
    budget: u64,
    method: OracleMethod,
    n: Option<u64>,
    census: Option<(usize, u64)>,
) -> CmdResult {
    if let Some((k, max_diameter)) = census {
        println!("{}", oracle::uniqueness_census(max_diameter, k, budget));
        return Ok(());
    }
    let w: DistanceSet = read_input(input.as_ref())?.parse()?;
    let report = match modulus(n)? {
        Some(m) => oracle::circular_brute_force(&w, m, budget)?,
        None => match method {
            OracleMethod::Backtrack => oracle::backtracking_solve(&w, budget),
            OracleMethod::Brute => oracle::brute_force_solutions(&w, budget),
        },
    };
    println!("{report}");
    if report.solutions.is_empty() && report.exhausted {
        return Err(Failure::NoSolution("no realization exists".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ns: Vec<u64>,
    ks: Vec<u64>,
    trials: u64,
    seed: u64,
    mode: ModeArg,
    model: ModelArg,
    threads: usize,
    timing: bool,
    emit_plot: Option<PathBuf>,
    plot_csv: String,
) -> CmdResult {
    let mode = match mode {
        ModeArg::Linear => Mode::Linear,
        ModeArg::Circular => Mode::Circular,
    };
    let grid = TrialGrid {
        model: model.into(),
        record_timing: timing,
        ..TrialGrid::new(ns, ks, trials, seed, mode)
    };
    grid.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let records = pool.install(|| harness::run_grid(&grid))?;
    print!("{}", harness::emit_csv(&records));
    if let Some(path) = emit_plot {
        let image = format!("{}.png", plot_csv.trim_end_matches(".csv"));
        fs::write(&path, harness::plot_script(&plot_csv, &image))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen { n, k, seed, model } => cmd_gen(n, k, seed, model),
        Command::Dist { input, modulus } => cmd_dist(input, modulus),
        Command::Solve {
            input,
            solver,
            fast_only,
            no_reverse,
        } => cmd_solve(input, solver, fast_only, no_reverse),
        Command::SolveCircular {
            input,
            modulus,
            solver,
        } => cmd_solve_circular(input, modulus, solver),
        Command::Verify {
            set,
            distances,
            modulus,
        } => cmd_verify(set, distances, modulus),
        Command::Oracle {
            input,
            budget,
            method,
            modulus,
            census,
            k,
            max_diameter,
        } => {
            let census = census.then(|| (k.unwrap_or(0), max_diameter.unwrap_or(0)));
            cmd_oracle(input, budget, method, modulus, census)
        }
        Command::Simulate {
            ns,
            ks,
            trials,
            seed,
            mode,
            model,
            threads,
            timing,
            emit_plot,
            plot_csv,
        } => cmd_simulate(
            ns, ks, trials, seed, mode, model, threads, timing, emit_plot, plot_csv,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NoSolution(msg)) => {
            println!("FAILED: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
