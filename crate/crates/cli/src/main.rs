//! `graphgen`: generate uniform random simple connected graphs with a
//! prescribed degree sequence, and run the accompanying experiment
//! harness.
//!
//! Exit codes: 0 success, 1 internal error, 2 unrealizable degree
//! sequence, 3 not connectable, 4 bad input format or usage.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use graphgen_core::bench::{
    compare_heuristics, heuristic_name, measure_pk, sample_connected_graph, timing_scan,
    uniformity_suite, write_heuristics_csv, write_pk_csv, write_timing_csv, write_uniformity_csv,
    BenchError, PkConfig,
};
use graphgen_core::bias::{bias_report, write_bias_csv, BiasCsvRow};
use graphgen_core::degree_model::{sample_sequence, tune_mu, PowerLawSpec};
use graphgen_core::io::{read_degree_file, write_edge_list, ReadError};
use graphgen_core::realization::{connect, havel_hakimi, RealizeError};
use graphgen_core::shuffle::{
    run_shuffle_observed, HeuristicKind, ShuffleConfig, ShuffleError, ShuffleStats,
};

#[derive(Parser)]
#[command(
    name = "graphgen",
    version,
    about = "Random simple connected graphs with prescribed degrees"
)]
struct Cli {
    /// Worker threads for benchmark grids. Outputs are seed-deterministic
    /// regardless of the thread count; generation itself is single-threaded.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HeuristicArg {
    Naive,
    Gkantsidis,
    Geometric,
    Final,
}

impl HeuristicArg {
    fn kind(self, q_minus: Option<f64>, q_plus: Option<f64>) -> HeuristicKind {
        match self {
            HeuristicArg::Naive => HeuristicKind::Naive,
            HeuristicArg::Gkantsidis => HeuristicKind::Gkantsidis,
            HeuristicArg::Geometric => {
                let HeuristicKind::Geometric {
                    q_minus: dm,
                    q_plus: dp,
                } = HeuristicKind::geometric_default()
                else {
                    unreachable!()
                };
                HeuristicKind::Geometric {
                    q_minus: q_minus.unwrap_or(dm),
                    q_plus: q_plus.unwrap_or(dp),
                }
            }
            HeuristicArg::Final => HeuristicKind::Final,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate one random simple connected graph and write its edge list.
    Generate(GenerateArgs),
    /// Measure speed-up factors of the windowed strategies over a z grid.
    BenchHeuristics(BenchHeuristicsArgs),
    /// Measure the disconnection probability against isolation width.
    BenchPk(BenchPkArgs),
    /// Measure wall times of the shuffle variants over graph sizes.
    BenchTiming(BenchTimingArgs),
    /// Chi-square uniformity test against all connected realizations.
    BenchUniformity(BenchUniformityArgs),
    /// Quantify the bias of the stub-matching shortcut over a z grid.
    BiasStudy(BiasStudyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Degree file: one degree per line, line i is vertex i.
    #[arg(long, conflicts_with_all = ["alpha", "z", "n"])]
    degrees: Option<PathBuf>,
    /// Power-law exponent (with --z and --n).
    #[arg(long, requires = "z", requires = "n")]
    alpha: Option<f64>,
    /// Target average degree.
    #[arg(long)]
    z: Option<f64>,
    /// Vertex count.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Final)]
    heuristic: HeuristicArg,
    /// Swap budget factor: the shuffle commits ceil(gamma * m) swaps.
    #[arg(long, default_value_t = 10.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path for the edge list (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (edge lists are the only supported format).
    #[arg(long, default_value = "edge-list")]
    format: String,
    #[arg(long)]
    q_minus: Option<f64>,
    #[arg(long)]
    q_plus: Option<f64>,
    /// Starting window for the windowed strategies.
    #[arg(long, default_value_t = 1.0)]
    initial_t: f64,
    /// Starting isolation width for the final strategy.
    #[arg(long, default_value_t = 1)]
    initial_k: u32,
    /// Disable the degree-based early exit in isolation tests.
    #[arg(long)]
    no_degree_stop: bool,
    /// Report shuffle progress on standard error.
    #[arg(long)]
    progress: bool,
}

#[derive(Args)]
struct BenchHeuristicsArgs {
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    /// Average-degree grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2.1,3,6")]
    z_list: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Sequences per (alpha, z) cell.
    #[arg(long, default_value_t = 10)]
    reps: u64,
    #[arg(long, default_value_t = 10.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct BenchPkArgs {
    #[arg(long, default_value_t = 2.1)]
    alpha: f64,
    #[arg(long, default_value_t = 2.05)]
    z: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    /// Isolation widths, comma separated; width 0 is the unfiltered p.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,4,8,16")]
    k_list: Vec<u32>,
    /// Applied-swap probes per width.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 10.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct BenchTimingArgs {
    /// Target edge counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
    m_list: Vec<u64>,
    #[arg(long, value_delimiter = ',', value_enum,
          default_value = "naive,gkantsidis,geometric,final")]
    variants: Vec<HeuristicArg>,
    #[arg(long, default_value_t = 2.5)]
    alpha: f64,
    #[arg(long, default_value_t = 6.7)]
    z: f64,
    #[arg(long, default_value_t = 10.0)]
    gamma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct BenchUniformityArgs {
    /// Degree file of the sequence under test (n <= 8).
    #[arg(long)]
    degrees: PathBuf,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Final)]
    heuristic: HeuristicArg,
    /// Number of sampled states.
    #[arg(long, default_value_t = 10_000)]
    runs: u64,
    /// Valid swaps between samples (default 3m).
    #[arg(long)]
    spacing: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct BiasStudyArgs {
    #[arg(long, default_value_t = 2.1)]
    alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,6,8")]
    z_list: Vec<f64>,
    /// Stub-matching trials per z cell.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

/// Failures carrying the documented exit codes.
enum CliError {
    Unrealizable(String),
    NotConnectable(String),
    BadFormat(String),
    Internal(String),
}

impl CliError {
    fn report(&self) -> (u8, &str) {
        match self {
            CliError::Internal(m) => (1, m),
            CliError::Unrealizable(m) => (2, m),
            CliError::NotConnectable(m) => (3, m),
            CliError::BadFormat(m) => (4, m),
        }
    }
}

impl From<ReadError> for CliError {
    fn from(e: ReadError) -> CliError {
        CliError::BadFormat(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<RealizeError> for CliError {
    fn from(e: RealizeError) -> CliError {
        match e {
            RealizeError::Unrealizable => {
                CliError::Unrealizable("unrealizable degree sequence".into())
            }
            RealizeError::NotConnectable => CliError::NotConnectable(e.to_string()),
        }
    }
}

impl From<ShuffleError> for CliError {
    fn from(e: ShuffleError) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> CliError {
        match e {
            BenchError::Unrealizable => {
                CliError::Unrealizable("unrealizable degree sequence".into())
            }
            BenchError::Realize(r) => r.into(),
            BenchError::NoConnectableSequence => CliError::NotConnectable(e.to_string()),
            BenchError::Degree(d) => CliError::Unrealizable(d.to_string()),
            BenchError::Shuffle(s) => s.into(),
        }
    }
}

fn split_seed(base: u64, index: u64) -> u64 {
    base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn check_format(got: &str, want: &str) -> Result<(), CliError> {
    if got == want {
        Ok(())
    } else {
        Err(CliError::BadFormat(format!(
            "unsupported format '{got}' (this subcommand writes {want})"
        )))
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(4);
        }
    };
    let threads = cli.threads.max(1);
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::BenchHeuristics(args) => cmd_bench_heuristics(args, threads),
        Command::BenchPk(args) => cmd_bench_pk(args),
        Command::BenchTiming(args) => cmd_bench_timing(args),
        Command::BenchUniformity(args) => cmd_bench_uniformity(args),
        Command::BiasStudy(args) => cmd_bias_study(args, threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, msg) = e.report();
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn print_stats(stats: &ShuffleStats) {
    eprintln!(
        "valid_swaps={} realized_theta={:.4} wall_time={:.3}s transitions={} \
         simplicity_rejections={} isolation_rejections={} disconnection_rollbacks={} \
         windows={}/{} final_t={:.2} final_k={}{}",
        stats.valid_swaps,
        stats.realized_theta,
        stats.wall_time.as_secs_f64(),
        stats.transitions_attempted,
        stats.simplicity_rejections,
        stats.isolation_rejections,
        stats.disconnection_rollbacks,
        stats.windows_succeeded,
        stats.windows_tested,
        stats.final_t,
        stats.final_k,
        if stats.stalled {
            " stalled=true (chain has no further accepting moves)"
        } else {
            ""
        }
    );
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    check_format(&args.format, "edge-list")?;
    let (seq, graph) = match (&args.degrees, args.alpha, args.z, args.n) {
        (Some(path), None, None, None) => {
            let file = File::open(path).map_err(|e| {
                CliError::BadFormat(format!("cannot open {}: {e}", path.display()))
            })?;
            let seq = read_degree_file(BufReader::new(file))?;
            if seq.is_empty() {
                return Err(CliError::BadFormat("degree file is empty".into()));
            }
            let g = havel_hakimi(&seq)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let g = connect(g, &mut rng)?;
            (seq, g)
        }
        (None, Some(alpha), Some(z), Some(n)) => sample_connected_graph(alpha, z, n, args.seed)?,
        _ => {
            return Err(CliError::BadFormat(
                "provide either --degrees FILE or all of --alpha, --z, --n".into(),
            ))
        }
    };

    let m = graph.edge_count();
    let heuristic = args.heuristic.kind(args.q_minus, args.q_plus);
    let target = (args.gamma * m as f64).ceil() as u64;
    let graph = if m >= 2 && target > 0 {
        let cfg = ShuffleConfig {
            swap_budget_factor: args.gamma,
            heuristic,
            initial_t: args.initial_t,
            initial_k: args.initial_k,
            degree_stop: !args.no_degree_stop,
            rng_seed: split_seed(args.seed, 0x51),
            progress_interval: if args.progress {
                (target / 100).max(1)
            } else {
                0
            },
        };
        let mut report = |done: u64, total: u64| {
            eprintln!("progress: {done}/{total} valid swaps");
        };
        let observer: Option<&mut dyn FnMut(u64, u64)> = if args.progress {
            Some(&mut report)
        } else {
            None
        };
        let (g, stats) = run_shuffle_observed(graph, &cfg, observer)?;
        print_stats(&stats);
        g
    } else {
        eprintln!("valid_swaps=0 realized_theta=0.0000 wall_time=0.000s (nothing to shuffle)");
        graph
    };

    debug_assert_eq!(graph.degrees(), seq.degrees());
    let mut w = out_writer(&args.out)?;
    write_edge_list(&mut w, &graph)?;
    w.flush()?;
    Ok(())
}

fn cmd_bench_heuristics(args: BenchHeuristicsArgs, threads: usize) -> Result<(), CliError> {
    check_format(&args.format, "csv")?;
    let params = format!(
        "alpha={} z_list={} n={} reps={} gamma={} seed={}",
        args.alpha,
        join(&args.z_list),
        args.n,
        args.reps,
        args.gamma,
        args.seed
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let cells: Result<Vec<_>, BenchError> = pool.install(|| {
        use rayon::prelude::*;
        args.z_list
            .par_iter()
            .enumerate()
            .map(|(i, &z)| {
                compare_heuristics(
                    args.alpha,
                    z,
                    args.n,
                    args.reps,
                    args.gamma,
                    split_seed(args.seed, i as u64),
                )
            })
            .collect()
    });
    let mut w = out_writer(&args.out)?;
    write_heuristics_csv(&mut w, &params, &cells?)?;
    w.flush()?;
    Ok(())
}

fn cmd_bench_pk(args: BenchPkArgs) -> Result<(), CliError> {
    check_format(&args.format, "csv")?;
    let params = format!(
        "alpha={} z={} n={} k_list={} samples={} gamma={} seed={}",
        args.alpha,
        args.z,
        args.n,
        join(&args.k_list),
        args.samples,
        args.gamma,
        args.seed
    );
    let (curve, _) = measure_pk(&PkConfig {
        alpha: args.alpha,
        z: args.z,
        n: args.n,
        widths: args.k_list.clone(),
        samples: args.samples,
        gamma: args.gamma,
        seed: args.seed,
    })?;
    let mut w = out_writer(&args.out)?;
    write_pk_csv(&mut w, &params, &curve)?;
    w.flush()?;
    Ok(())
}

fn cmd_bench_timing(args: BenchTimingArgs) -> Result<(), CliError> {
    check_format(&args.format, "csv")?;
    let variants: Vec<HeuristicKind> = args.variants.iter().map(|v| v.kind(None, None)).collect();
    let params = format!(
        "m_list={} variants={} alpha={} z={} gamma={} seed={}",
        join(&args.m_list),
        join(&variants.iter().map(|&h| heuristic_name(h)).collect::<Vec<_>>()),
        args.alpha,
        args.z,
        args.gamma,
        args.seed
    );
    let rows = timing_scan(
        &args.m_list,
        &variants,
        args.alpha,
        args.z,
        args.gamma,
        args.seed,
    )?;
    let mut w = out_writer(&args.out)?;
    write_timing_csv(&mut w, &params, &rows)?;
    w.flush()?;
    Ok(())
}

fn cmd_bench_uniformity(args: BenchUniformityArgs) -> Result<(), CliError> {
    check_format(&args.format, "csv")?;
    let file = File::open(&args.degrees).map_err(|e| {
        CliError::BadFormat(format!("cannot open {}: {e}", args.degrees.display()))
    })?;
    let seq = read_degree_file(BufReader::new(file))?;
    if seq.is_empty() || seq.len() > 8 {
        return Err(CliError::BadFormat(format!(
            "uniformity needs 1 <= n <= 8 vertices, got {}",
            seq.len()
        )));
    }
    let spacing = args.spacing.unwrap_or(3 * seq.edge_count().max(1));
    let heuristic = args.heuristic.kind(None, None);
    let params = format!(
        "degrees={:?} heuristic={} runs={} spacing={} seed={}",
        seq.degrees(),
        heuristic_name(heuristic),
        args.runs,
        spacing,
        args.seed
    );
    let report = uniformity_suite(&seq, heuristic, args.runs, spacing, args.seed)?;
    let mut w = out_writer(&args.out)?;
    write_uniformity_csv(&mut w, &params, &report)?;
    w.flush()?;
    Ok(())
}

fn cmd_bias_study(args: BiasStudyArgs, threads: usize) -> Result<(), CliError> {
    check_format(&args.format, "csv")?;
    let params = format!(
        "alpha={} n={} z_list={} trials={} seed={}",
        args.alpha,
        args.n,
        join(&args.z_list),
        args.trials,
        args.seed
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows: Result<Vec<BiasCsvRow>, CliError> = pool.install(|| {
        use rayon::prelude::*;
        args.z_list
            .par_iter()
            .enumerate()
            .map(|(i, &z)| {
                let cell_seed = split_seed(args.seed, i as u64);
                let mu = tune_mu(args.alpha, z, args.n)
                    .map_err(|e| CliError::Unrealizable(e.to_string()))?;
                let spec = PowerLawSpec::new(args.alpha, mu, args.n)
                    .map_err(|e| CliError::Unrealizable(e.to_string()))?;
                let mut rng = ChaCha8Rng::seed_from_u64(cell_seed);
                let seq = sample_sequence(&spec, &mut rng)
                    .map_err(|e| CliError::Unrealizable(e.to_string()))?;
                let report = bias_report(&seq, args.trials, &mut rng)
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                Ok(BiasCsvRow {
                    alpha: args.alpha,
                    z_target: z,
                    report,
                })
            })
            .collect()
    });
    let mut w = out_writer(&args.out)?;
    write_bias_csv(&mut w, &params, &rows?)?;
    w.flush()?;
    Ok(())
}
