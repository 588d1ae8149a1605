//! Command-line front end. Every subcommand only parses flags and delegates.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, CsvSchema, SortingStudyConfig, StaircaseConfig, StepRule};
use crate::costmodel::{self, CostParams};
use crate::det::{self, Algorithm, CostMeter};
use crate::error::{Error, Result};
use crate::matrix::{self, ExperimentConfig, SymMatrix};
use crate::rowsort::{self, Direction, RowKey, SortStrategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "symdet", version, about = "Exact determinants of polynomial matrices")]
pub struct Cli {
    /// Master random seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random matrix file.
    Gen(GenArgs),
    /// Compute a determinant.
    Det(DetArgs),
    /// Evaluate the modeled cost formulas.
    Cost(CostArgs),
    /// Emit the ln(C_M / C_G) grid as CSV.
    RatioGrid(RatioGridArgs),
    /// Run the crossover staircase walk.
    BenchCrossover(CrossoverArgs),
    /// Run the row-sorting speedup study.
    BenchSorting(SortingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Distribution {
    OneHomog,
    SparseLinear,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, value_enum, default_value_t = Distribution::OneHomog)]
    pub dist: Distribution,
    /// Probability of a zero entry (sparse-linear only).
    #[arg(long, default_value_t = 0.5)]
    pub zero_prob: f64,
    /// Maximum terms per nonzero entry (sparse-linear only).
    #[arg(long, default_value_t = 4)]
    pub max_terms: usize,
    #[arg(long, default_value_t = -999, allow_negative_numbers = true)]
    pub coeff_lo: i64,
    #[arg(long, default_value_t = 999, allow_negative_numbers = true)]
    pub coeff_hi: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SortArg {
    None,
    Sum,
    Sumsq,
    Nonzero,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Asc,
    Desc,
}

#[derive(Debug, Args)]
pub struct DetArgs {
    /// Matrix file.
    #[arg(long)]
    pub input: PathBuf,
    /// naive, minor or bareiss.
    #[arg(long, default_value_t = Algorithm::Minor)]
    pub algorithm: Algorithm,
    /// Reorder rows by this key before computing.
    #[arg(long, value_enum, default_value_t = SortArg::None)]
    pub sort: SortArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::Asc)]
    pub direction: DirectionArg,
    /// Report poly_mults, poly_divs and modeled_int_ops.
    #[arg(long, default_value_t = false)]
    pub meter: bool,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, requires = "s", conflicts_with = "input")]
    pub n: Option<u32>,
    #[arg(long, requires = "n")]
    pub s: Option<u32>,
    /// Matrix file; prints its exact modeled minor-expansion cost.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatioGridArgs {
    #[arg(long, default_value_t = 30)]
    pub n_max: u32,
    #[arg(long, default_value_t = 30)]
    pub s_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Time,
    Modeled,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    /// Number of grid points to visit.
    #[arg(long, default_value_t = 20)]
    pub budget: usize,
    /// Matrices timed per grid point (median taken).
    #[arg(long, default_value_t = 3)]
    pub per_point: usize,
    /// Time a single matrix per point.
    #[arg(long, default_value_t = false)]
    pub single: bool,
    /// Per-computation wall-clock ceiling.
    #[arg(long, default_value_t = 60.0)]
    pub ceiling_secs: f64,
    #[arg(long, default_value_t = 1)]
    pub n_start: usize,
    #[arg(long, default_value_t = 1)]
    pub s_start: usize,
    /// Step by measured time or by metered integer operations.
    #[arg(long, value_enum, default_value_t = RuleArg::Time)]
    pub rule: RuleArg,
}

#[derive(Debug, Args)]
pub struct SortingArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 9)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub s: usize,
    #[arg(long, default_value_t = 4)]
    pub max_terms: usize,
    /// Comma-separated zero probabilities.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
    pub zero_probs: Vec<f64>,
    /// Comma-separated `key-dir` strategies; `all` for every combination.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub strategies: Vec<String>,
    /// Worker threads for modeled-cost computations.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidRange(msg.into())
}

fn parse_strategies(names: &[String]) -> Result<Vec<SortStrategy>> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(SortStrategy::all());
        } else {
            out.push(name.parse().map_err(usage)?);
        }
    }
    if out.is_empty() {
        return Err(usage("no strategies given"));
    }
    Ok(out)
}

fn emit(cli: &Cli, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_csv<T: serde::Serialize + CsvSchema>(cli: &Cli, rows: &[T], out: &mut dyn Write) -> Result<()> {
    match &cli.output {
        Some(path) => bench::write_csv(rows, path),
        None => bench::write_csv_to(rows, out),
    }
}

fn read_matrix(path: &Path) -> Result<SymMatrix> {
    SymMatrix::parse(&std::fs::read_to_string(path)?)
}

fn cmd_gen(cli: &Cli, args: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let m = match args.dist {
        Distribution::OneHomog => {
            if args.n == 0 || args.s == 0 {
                return Err(usage("--n and --s must be positive"));
            }
            // Unused by this distribution, but still checked.
            if !(0.0..=1.0).contains(&args.zero_prob) {
                return Err(usage("--zero-prob must lie in [0, 1]"));
            }
            matrix::gen_one_homogeneous(args.n, args.s, args.coeff_lo, args.coeff_hi, cli.seed)?
        }
        Distribution::SparseLinear => {
            let cfg = ExperimentConfig {
                n: args.n,
                s: args.s,
                zero_prob: args.zero_prob,
                max_terms: args.max_terms,
                coeff_lo: args.coeff_lo,
                coeff_hi: args.coeff_hi,
                seed: cli.seed,
                trials: 1,
            };
            cfg.validate()?;
            matrix::gen_sparse_linear(&cfg)?
        }
    };
    emit(cli, &m.to_string(), out)
}

fn cmd_det(cli: &Cli, args: &DetArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let a = read_matrix(&args.input)?;
    let key = match args.sort {
        SortArg::None => None,
        SortArg::Sum => Some(RowKey::SumTerms),
        SortArg::Sumsq => Some(RowKey::SumSquaredTerms),
        SortArg::Nonzero => Some(RowKey::NonzeroCount),
        SortArg::Distinct => Some(RowKey::DistinctMonomials),
    };
    let direction = match args.direction {
        DirectionArg::Asc => Direction::Ascending,
        DirectionArg::Desc => Direction::Descending,
    };
    let mut meter = CostMeter::new();
    let d = match key {
        None => det::determinant(&a, args.algorithm, Some(&mut meter))?,
        Some(key) => {
            let (sorted, perm) = rowsort::sort_rows(&a, SortStrategy::new(key, direction));
            let d = det::determinant(&sorted, args.algorithm, Some(&mut meter))?;
            if perm.sign() < 0 {
                d.neg()
            } else {
                d
            }
        }
    };
    emit(cli, &format!("{d}\n"), out)?;
    if args.meter {
        let report = format!(
            "poly_mults={}\npoly_divs={}\nmodeled_int_ops={}\n",
            meter.poly_mults, meter.poly_divs, meter.modeled_int_ops
        );
        // Keep stdout machine-parseable when it carries the determinant.
        let sink: &mut dyn Write = if cli.output.is_some() { out } else { err };
        sink.write_all(report.as_bytes())?;
    }
    Ok(())
}

fn cmd_cost(cli: &Cli, args: &CostArgs, out: &mut dyn Write) -> Result<()> {
    let text = match (args.n, args.s, &args.input) {
        (Some(n), Some(s), None) => {
            if n == 0 || s == 0 {
                return Err(usage("--n and --s must be positive"));
            }
            let p = CostParams::new(n, s);
            format!("C_M={} C_G={}\n", costmodel::c_m(p), costmodel::c_g(p))
        }
        (None, None, Some(path)) => {
            let a = read_matrix(path)?;
            format!("C_M(A)={}\n", costmodel::c_m_exact(&a)?)
        }
        _ => return Err(usage("give either --n and --s, or --input")),
    };
    emit(cli, &text, out)
}

fn cmd_ratio_grid(cli: &Cli, args: &RatioGridArgs, out: &mut dyn Write) -> Result<()> {
    if args.n_max < 2 || args.s_max < 1 {
        return Err(usage("--n-max must be >= 2 and --s-max >= 1"));
    }
    emit_csv(cli, &costmodel::cost_ratio_grid(args.n_max, args.s_max), out)
}

fn cmd_crossover(cli: &Cli, args: &CrossoverArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    if !(args.ceiling_secs.is_finite() && args.ceiling_secs >= 0.0) {
        return Err(usage("--ceiling-secs must be a non-negative number"));
    }
    if args.budget == 0 || args.per_point == 0 || args.n_start == 0 || args.s_start == 0 {
        return Err(usage("--budget, --per-point, --n-start and --s-start must be positive"));
    }
    let cfg = StaircaseConfig {
        n_start: args.n_start,
        s_start: args.s_start,
        step_budget: args.budget,
        seed: cli.seed,
        matrices_per_point: if args.single { 1 } else { args.per_point },
        ceiling: Duration::from_secs_f64(args.ceiling_secs),
        rule: match args.rule {
            RuleArg::Time => StepRule::Time,
            RuleArg::Modeled => StepRule::Modeled,
        },
        ..Default::default()
    };
    let rows = bench::crossover_staircase(&cfg, |r| {
        let _ = writeln!(
            err,
            "step {} n={} s={} winner={:?} minor={}ns bareiss={}ns",
            r.step, r.n, r.s, r.winner, r.t_minor_ns, r.t_bareiss_ns
        );
    })?;
    emit_csv(cli, &rows, out)
}

fn cmd_sorting(cli: &Cli, args: &SortingArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let strategies = parse_strategies(&args.strategies)?;
    if args.trials == 0 || args.n == 0 || args.s == 0 {
        return Err(usage("--trials, --n and --s must be positive"));
    }
    for &p in &args.zero_probs {
        ExperimentConfig { zero_prob: p, n: args.n, s: args.s, max_terms: args.max_terms, ..Default::default() }
            .validate()?;
    }
    let cfg = SortingStudyConfig {
        n: args.n,
        s: args.s,
        zero_probs: args.zero_probs.clone(),
        trials: args.trials,
        max_terms: args.max_terms,
        seed: cli.seed,
        strategies,
        jobs: args.jobs,
        ..Default::default()
    };
    let rows = bench::sorting_study(&cfg, |r| {
        let _ = writeln!(
            err,
            "p={} {}-{} time_ratio={:.3} cost_ratio={:.3}",
            r.zero_prob, r.strategy, r.direction, r.mean_time_ratio, r.mean_cost_ratio
        );
    })?;
    emit_csv(cli, &rows, out)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a, out),
        Command::Det(a) => cmd_det(cli, a, out, err),
        Command::Cost(a) => cmd_cost(cli, a, out),
        Command::RatioGrid(a) => cmd_ratio_grid(cli, a, out),
        Command::BenchCrossover(a) => cmd_crossover(cli, a, out, err),
        Command::BenchSorting(a) => cmd_sorting(cli, a, out, err),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code: 0 on success, 1 on usage errors, 2 on computation errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidRange(_) => EXIT_USAGE,
                _ => EXIT_COMPUTE,
            }
        }
    }
}
