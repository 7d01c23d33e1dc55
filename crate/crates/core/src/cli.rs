//! Command-line experiment runner.
//!
//! Every subcommand prints (or writes to `--out`) one JSON summary and can
//! dump the per-step CSV trace of its first run to `--trace`. Repeat runs use
//! seeds `seed, seed + 1, ...`. The summary holds no timestamps, so the same
//! argv always yields the same bytes.
//!
//! Exit codes: 0 on success, 2 for bad arguments, unreadable inputs or
//! parameters outside an operation's preconditions, 3 for contract
//! violations detected during a run.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{chi_square_gof, evaluate_bound, BoundKind, BoundSpec, RunTrace};
use crate::apps::{
    pagerank_solve, run_bandit, run_experts_linear, run_experts_nonconvex,
    solve_matrix_game_traced, LinearExperts, SparseGameMatrix,
};
use crate::env::{load_loss_csv, Adversary, StochasticSpec};
use crate::error::{invalid, Error, Result};
use crate::md::{gumbel_argmax_sample, softmax_prox};

/// Significance level of the sampler chi-square test.
pub const SAMPLER_SIGNIFICANCE: f64 = 0.001;

#[derive(Debug, Parser)]
#[command(
    name = "randomd",
    version,
    about = "Randomized mirror-descent experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Adversarial bandit with importance-weighted MD1.
    Bandit(BanditArgs),
    /// Expert weighting with full-information feedback.
    Experts(ExpertsArgs),
    /// Sparse zero-sum matrix game.
    Game(GameArgs),
    /// Stationary vector of a row-stochastic matrix.
    Pagerank(GameArgs),
    /// Chi-square test of the Gumbel-max sampler against the softmax.
    SamplerTest(SamplerArgs),
    /// CSV table of regret bounds over a parameter grid.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of runs, seeded `seed + i`.
    #[arg(long, default_value_t = 1)]
    repeat: u64,
    /// JSON summary path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV trace of the first run.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BanditArgs {
    #[arg(long)]
    arms: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    /// Comma-separated Bernoulli loss means. Defaults to 0.4 on arm 0 and
    /// 0.5 elsewhere.
    #[arg(long, conflicts_with_all = ["config", "losses"])]
    means: Option<String>,
    /// JSON file `{"means": [...], "seed": s}`; the environment of run `i`
    /// is seeded `s + i`.
    #[arg(long, conflicts_with = "losses")]
    config: Option<PathBuf>,
    /// CSV of loss rows in `[0, 1]`, replayed in order.
    #[arg(long)]
    losses: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExpertsAdversary {
    BestResponse,
    Bernoulli,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExpertsAlgorithm {
    Md1,
    Md2,
}

#[derive(Debug, Args)]
struct ExpertsArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, value_enum, default_value_t = ExpertsAlgorithm::Md1)]
    algorithm: ExpertsAlgorithm,
    /// Ignored when `--losses` is given. Bernoulli means are drawn
    /// uniformly from the run seed.
    #[arg(long, value_enum, default_value_t = ExpertsAdversary::BestResponse)]
    adversary: ExpertsAdversary,
    /// CSV of loss rows, replayed in order.
    #[arg(long)]
    losses: Option<PathBuf>,
    /// Declared loss bound for `--losses`.
    #[arg(long = "m", default_value_t = 1.0)]
    grad_bound: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Matrix Market coordinate file.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct SamplerArgs {
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Comma-separated bound ids, e.g. `T1-mean,T2-highprob-det`.
    #[arg(long, default_value = "T1-mean")]
    kinds: String,
    /// Comma-separated gradient bounds `M`.
    #[arg(long = "m", default_value = "1")]
    grad_bounds: String,
    #[arg(long, default_value = "2")]
    n: String,
    #[arg(long, default_value = "10000")]
    steps: String,
    #[arg(long, default_value = "0")]
    omega: String,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Cartesian grid of bound parameters; an empty axis yields an empty table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundGrid {
    pub kinds: Vec<BoundKind>,
    pub grad_bounds: Vec<f64>,
    pub ns: Vec<usize>,
    pub steps: Vec<u64>,
    pub omegas: Vec<f64>,
}

/// Writes `kind,M,n,N,omega,bound` rows for every grid cell; returns the
/// number of data rows.
pub fn emit_bound_table<W: Write>(grid: &BoundGrid, out: W) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "M", "n", "N", "omega", "bound"])?;
    let mut rows = 0;
    for &kind in &grid.kinds {
        for &m in &grid.grad_bounds {
            for &n in &grid.ns {
                for &steps in &grid.steps {
                    for &omega in &grid.omegas {
                        let spec = BoundSpec::new(kind, m, n, steps).with_omega(omega);
                        let value = evaluate_bound(&spec)?;
                        w.write_record([
                            kind.id().to_string(),
                            m.to_string(),
                            n.to_string(),
                            steps.to_string(),
                            omega.to_string(),
                            value.to_string(),
                        ])?;
                        rows += 1;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(rows)
}

fn parse_list<T: FromStr>(what: &str, s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad {what} value {t:?}")))
        })
        .collect()
}

/// Runs the CLI on `argv` (including the program name) and returns the exit
/// code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Contract(_) | Error::InvalidState(_) => 3,
        _ => 2,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Bandit(a) => bandit(a),
        Command::Experts(a) => experts(a),
        Command::Game(a) => game(a),
        Command::Pagerank(a) => pagerank(a),
        Command::SamplerTest(a) => sampler_test(a),
        Command::Bounds(a) => bounds(a),
    }
}

fn check_repeat(run: &RunArgs) -> Result<()> {
    if run.repeat == 0 {
        return invalid("--repeat must be at least 1");
    }
    Ok(())
}

fn seeds(run: &RunArgs) -> impl Iterator<Item = (u64, u64)> {
    let base = run.seed;
    (0..run.repeat).map(move |i| (i, base.wrapping_add(i)))
}

fn write_summary(path: Option<&Path>, summary: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_trace(path: Option<&Path>, trace: Option<&RunTrace>) -> Result<()> {
    if let (Some(p), Some(t)) = (path, trace) {
        t.write_csv(BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, c) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if c == 0 {
        0.0
    } else {
        s / c as f64
    }
}

fn bandit(a: BanditArgs) -> Result<()> {
    check_repeat(&a.run)?;
    let fixed = a.losses.as_deref().map(load_loss_csv).transpose()?;
    let spec = a.config.as_deref().map(StochasticSpec::load).transpose()?;
    let means: Option<Vec<f64>> = a
        .means
        .as_deref()
        .map(|s| parse_list("mean", s))
        .transpose()?;
    let arms = match (&fixed, &spec, &means) {
        (Some(rows), _, _) => rows.first().map_or(0, Vec::len),
        (_, Some(s), _) => s.means.len(),
        (_, _, Some(m)) => m.len(),
        _ => a.arms.ok_or_else(|| {
            Error::InvalidArgument("need --arms, --means, --config or --losses".into())
        })?,
    };
    if let Some(n) = a.arms {
        if n != arms {
            return invalid(format!(
                "--arms {n} disagrees with the {arms} arms of the input"
            ));
        }
    }
    let mut runs = Vec::new();
    let mut first_trace = None;
    for (i, seed) in seeds(&a.run) {
        let mut env = match (&fixed, &spec, &means) {
            (Some(rows), _, _) => Adversary::fixed_list(rows.clone(), 1.0)?,
            (_, Some(s), _) => Adversary::bernoulli(s.means.clone(), s.seed.wrapping_add(i))?,
            (_, _, Some(m)) => Adversary::bernoulli(m.clone(), seed)?,
            _ => {
                let mut m = vec![0.5; arms];
                if let Some(first) = m.first_mut() {
                    *first = 0.4;
                }
                Adversary::bernoulli(m, seed)?
            }
        };
        let run = run_bandit(arms, a.steps, &mut env, seed)?;
        runs.push(json!({
            "seed": seed,
            "pseudo_regret": run.report.pseudo_regret,
            "bound": run.report.bound,
            "within_bound": run.report.within_bound(),
            "report": run.report,
            "max_estimate": run.max_estimate,
            "stochastic_comparator": run.stochastic_comparator,
        }));
        if first_trace.is_none() {
            first_trace = Some(run.trace);
        }
    }
    let summary = json!({
        "command": "bandit",
        "arms": arms,
        "steps": a.steps,
        "seed": a.run.seed,
        "repeat": a.run.repeat,
        "mean_pseudo_regret": mean(runs.iter().map(|r| r["pseudo_regret"].as_f64().unwrap_or(f64::NAN))),
        "bound_kind": BoundKind::T1Mean,
        "runs": runs,
    });
    write_trace(a.run.trace.as_deref(), first_trace.as_ref())?;
    write_summary(a.run.out.as_deref(), &summary)
}

fn experts(a: ExpertsArgs) -> Result<()> {
    check_repeat(&a.run)?;
    let fixed = a.losses.as_deref().map(load_loss_csv).transpose()?;
    let n = match (&fixed, a.n) {
        (Some(rows), None) => rows.first().map_or(0, Vec::len),
        (Some(rows), Some(n)) if rows.first().map_or(0, Vec::len) != n => {
            return invalid(format!("--n {n} disagrees with the loss file"));
        }
        (_, Some(n)) => n,
        (None, None) => return invalid("need --n or --losses"),
    };
    if n < 2 {
        return invalid(format!("need at least 2 experts, got {n}"));
    }
    let mut runs = Vec::new();
    let mut first_trace = None;
    for (_, seed) in seeds(&a.run) {
        let mut env = match (&fixed, a.adversary) {
            (Some(rows), _) => Adversary::fixed_list(rows.clone(), a.grad_bound)?,
            (None, ExpertsAdversary::BestResponse) => Adversary::best_response(n)?,
            (None, ExpertsAdversary::Bernoulli) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let m: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                Adversary::bernoulli(m, seed.wrapping_add(1))?
            }
        };
        let run = match a.algorithm {
            ExpertsAlgorithm::Md1 => run_experts_linear(&mut env, a.steps, seed)?,
            ExpertsAlgorithm::Md2 => {
                run_experts_nonconvex(&mut LinearExperts::new(&mut env), a.steps, seed)?
            }
        };
        runs.push(json!({
            "seed": seed,
            "pseudo_regret": run.expected.pseudo_regret,
            "realized_regret": run.realized.pseudo_regret,
            "bound": run.expected.bound,
            "within_bound": run.expected.within_bound(),
            "expected": run.expected,
            "realized": run.realized,
        }));
        if first_trace.is_none() {
            first_trace = Some(run.trace);
        }
    }
    let summary = json!({
        "command": "experts",
        "n": n,
        "steps": a.steps,
        "algorithm": format!("{:?}", a.algorithm).to_lowercase(),
        "seed": a.run.seed,
        "repeat": a.run.repeat,
        "mean_pseudo_regret": mean(runs.iter().map(|r| r["pseudo_regret"].as_f64().unwrap_or(f64::NAN))),
        "runs": runs,
    });
    write_trace(a.run.trace.as_deref(), first_trace.as_ref())?;
    write_summary(a.run.out.as_deref(), &summary)
}

fn fraction(flags: impl Iterator<Item = bool>) -> f64 {
    mean(flags.map(|b| if b { 1.0 } else { 0.0 }))
}

fn game(a: GameArgs) -> Result<()> {
    check_repeat(&a.run)?;
    let m = SparseGameMatrix::load_matrix_market(&a.matrix)?;
    let mut runs = Vec::new();
    let mut first_trace = None;
    for (_, seed) in seeds(&a.run) {
        let (sol, trace) = solve_matrix_game_traced(&m, a.epsilon, a.sigma, seed)?;
        runs.push(json!({
            "seed": seed,
            "gap": sol.gap,
            "within_epsilon": sol.gap <= a.epsilon,
            "solution": sol,
        }));
        if first_trace.is_none() {
            first_trace = Some(trace);
        }
    }
    let summary = json!({
        "command": "game",
        "n_rows": m.n_rows(),
        "n_cols": m.n_cols(),
        "nnz": m.nnz(),
        "epsilon": a.epsilon,
        "sigma": a.sigma,
        "seed": a.run.seed,
        "repeat": a.run.repeat,
        "fraction_within_epsilon": fraction(runs.iter().map(|r| r["within_epsilon"] == true)),
        "runs": runs,
    });
    write_trace(a.run.trace.as_deref(), first_trace.as_ref())?;
    write_summary(a.run.out.as_deref(), &summary)
}

fn pagerank(a: GameArgs) -> Result<()> {
    check_repeat(&a.run)?;
    let p = SparseGameMatrix::load_matrix_market(&a.matrix)?;
    let mut runs = Vec::new();
    for (_, seed) in seeds(&a.run) {
        let sol = pagerank_solve(&p, a.epsilon, a.sigma, seed)?;
        runs.push(json!({
            "seed": seed,
            "residual": sol.residual,
            "within_epsilon": sol.residual <= a.epsilon,
            "x_bar": sol.x_bar,
            "gap": sol.game.gap,
            "iterations": sol.game.iterations,
            "elements_read": sol.game.elements_read,
        }));
    }
    let summary = json!({
        "command": "pagerank",
        "n": p.n_rows(),
        "epsilon": a.epsilon,
        "sigma": a.sigma,
        "seed": a.run.seed,
        "repeat": a.run.repeat,
        "fraction_within_epsilon": fraction(runs.iter().map(|r| r["within_epsilon"] == true)),
        "runs": runs,
    });
    write_summary(a.run.out.as_deref(), &summary)
}

#[derive(Serialize)]
struct SamplerRun {
    seed: u64,
    y: Vec<f64>,
    statistic: f64,
    dof: usize,
    p_value: f64,
    pass: bool,
}

fn sampler_test(a: SamplerArgs) -> Result<()> {
    check_repeat(&a.run)?;
    if a.n < 2 {
        return invalid(format!("need at least 2 categories, got {}", a.n));
    }
    let mut runs = Vec::new();
    for (_, seed) in seeds(&a.run) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y: Vec<f64> = (0..a.n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let expected = softmax_prox(&y, a.beta)?;
        let mut counts = vec![0u64; a.n];
        for _ in 0..a.samples {
            counts[gumbel_argmax_sample(&y, a.beta, &mut rng)?] += 1;
        }
        let gof = chi_square_gof(&counts, &expected)?;
        runs.push(SamplerRun {
            seed,
            y,
            statistic: gof.statistic,
            dof: gof.dof,
            p_value: gof.p_value,
            pass: gof.p_value >= SAMPLER_SIGNIFICANCE,
        });
    }
    let summary = json!({
        "command": "sampler-test",
        "n": a.n,
        "beta": a.beta,
        "samples": a.samples,
        "significance": SAMPLER_SIGNIFICANCE,
        "seed": a.run.seed,
        "repeat": a.run.repeat,
        "fraction_pass": fraction(runs.iter().map(|r| r.pass)),
        "runs": runs,
    });
    write_summary(a.run.out.as_deref(), &summary)
}

fn bounds(a: BoundsArgs) -> Result<()> {
    let grid = BoundGrid {
        kinds: parse_list("kind", &a.kinds)?,
        grad_bounds: parse_list("M", &a.grad_bounds)?,
        ns: parse_list("n", &a.n)?,
        steps: parse_list("N", &a.steps)?,
        omegas: parse_list("omega", &a.omega)?,
    };
    match a.out {
        Some(p) => emit_bound_table(&grid, BufWriter::new(File::create(p)?))?,
        None => emit_bound_table(&grid, std::io::stdout().lock())?,
    };
    Ok(())
}
