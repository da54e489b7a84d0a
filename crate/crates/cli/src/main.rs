//! `scanex`: error coefficients, λ, and exact / approximate / simulated
//! distributions of the discrete scan statistic.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use scanex_core::extremes::approx_qnlambda_centers;
use scanex_core::montecarlo::{simulate_scan_cdf_threads, SimulationPlan, DEFAULT_STREAMS};
use scanex_core::{
    exact_scan_cdf, reproduce_table, sandwich, scan_approximation, solve_lambda, BernoulliScanSpec,
    Error, ErrorCoefficients, PSequence,
};

use output::{Format, OutputRecord, Sheet, Style, Value};

#[derive(Parser)]
#[command(
    name = "scanex",
    version,
    about = "Error-bounded scan statistic approximations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "csv", global = true)]
    format: Format,
    /// Print full-precision numbers instead of table-style rounding
    #[arg(long, global = true)]
    raw: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Error coefficients t2, l, K, L, E, Γ for one α
    Coeffs {
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Root λ of C(z) for a p-sequence read from a file (p_1..p_K, one per line)
    Lambda {
        #[arg(long)]
        p_file: PathBuf,
        /// Coefficient α (defaults to p_1)
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Scan statistic distributions
    Scan {
        #[command(subcommand)]
        command: ScanCommand,
    },
    /// Regenerate a reference table (same as `scan tables`)
    Tables(TablesArgs),
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    which: u8,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct WindowArgs {
    /// Window length m
    #[arg(long = "m")]
    m: usize,
    /// Success probability p
    #[arg(long = "p")]
    p: f64,
    /// Threshold n
    #[arg(long = "n")]
    n: usize,
}

#[derive(Subcommand)]
enum ScanCommand {
    /// Approximation of P(S_m(Lm) <= n) with its error bounds
    Approx {
        #[command(flatten)]
        w: WindowArgs,
        /// Number of length-m blocks L (N = Lm)
        #[arg(long = "L")]
        blocks: usize,
        /// Also compute the exact value
        #[arg(long)]
        with_exact: bool,
        /// Also compute the four-term approximation
        #[arg(long)]
        t3: bool,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Exact P(S_m(N) <= n) by Markov chain embedding
    Exact {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long = "N")]
        trials: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Monte Carlo estimate of P(S_m(N) <= n)
    Simulate {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long = "N")]
        trials: usize,
        #[arg(long, default_value_t = 1_000_000)]
        reps: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Independent random streams; fixes the result for a given seed
        #[arg(long, default_value_t = DEFAULT_STREAMS)]
        streams: usize,
        /// Worker threads; does not change the result
        #[arg(long, env = "SCANEX_THREADS")]
        threads: Option<usize>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Bracket P(S_m(N) <= n) between the neighbouring multiples of m
    Sandwich {
        #[command(flatten)]
        w: WindowArgs,
        #[arg(long = "N")]
        trials: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Regenerate a reference table
    Tables(TablesArgs),
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Capacity(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

type CliResult = Result<(Sheet, Format), CliError>;

fn coeffs(alpha: f64, out: OutputOpts) -> CliResult {
    let c = ErrorCoefficients::new(alpha)?;
    let raw = out.raw;
    let mut r = OutputRecord::new("coeffs");
    r.push("alpha", Value::number(alpha, Style::Full, raw))
        .push("t2", Value::number(c.t2, Style::Fixed(6), raw))
        .push("l", Value::number(c.l, Style::Fixed(4), raw))
        .push("K", Value::number(c.k, Style::Fixed(4), raw))
        .push("L", Value::number(c.l_coef, Style::Fixed(3), raw))
        .push("E", Value::number(c.e_coef, Style::Fixed(3), raw))
        .push("Gamma", Value::number(c.gamma, Style::Fixed(3), raw))
        .push(
            "one_plus_alpha_K",
            Value::number(c.c1_coef(), Style::Fixed(4), raw),
        )
        .push(
            "three_plus_alpha_Gamma",
            Value::number(c.c2_coef(), Style::Fixed(4), raw),
        );
    Ok((r.into_sheet(), out.format))
}

fn read_p_file(path: &Path) -> Result<PSequence, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let tail = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|e| CliError::Validation(format!("line {}: {l:?}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PSequence::from_tail(&tail)?)
}

fn lambda(p_file: &Path, alpha: Option<f64>, out: OutputOpts) -> CliResult {
    let p = read_p_file(p_file)?;
    let alpha = alpha.unwrap_or_else(|| p.p1());
    let res = solve_lambda(&p, alpha)?;
    let raw = out.raw;
    let full = |v| Value::number(v, Style::Full, raw);
    let sci = |v| Value::number(v, Style::Scientific, raw);
    let mut r = OutputRecord::new("lambda");
    r.push("alpha", full(alpha))
        .push("p1", full(p.p1()))
        .push("lambda", full(res.lambda))
        .push("bracket_high", full(res.bracket_high))
        .push("center_t1", full(res.center_t1))
        .push("bound_t1", sci(res.bound_t1))
        .push("center_c1", full(res.center_c1))
        .push("bound_c1", sci(res.bound_c1))
        .push("tail_bound", sci(res.tail_bound));
    if let Ok(c) = approx_qnlambda_centers(&p) {
        let (b_t2, b_c2) = c.bounds(p.p1(), alpha)?;
        r.push("mu1", full(c.mu1))
            .push("bound_t2", sci(b_t2))
            .push("nu1", full(c.nu1))
            .push("bound_c2", sci(b_c2));
    }
    Ok((r.into_sheet(), out.format))
}

fn scan_spec(w: &WindowArgs, trials: usize) -> Result<BernoulliScanSpec, CliError> {
    Ok(BernoulliScanSpec::new(w.m, w.p, trials, w.n)?)
}

fn approx(w: &WindowArgs, blocks: usize, with_exact: bool, t3: bool, out: OutputOpts) -> CliResult {
    let rep = scan_approximation(w.m, w.p, blocks, w.n, with_exact, t3)?;
    let raw = out.raw;
    let prob = |v| Value::maybe(v, Style::Probability, raw);
    let bound = |v| Value::maybe(v, Style::Bound, raw);
    let mut r = OutputRecord::new("scan approx");
    r.push("m", Value::int(w.m as u64))
        .push("p", Value::number(w.p, Style::Full, raw))
        .push("L", Value::int(blocks as u64))
        .push("n", Value::int(w.n as u64))
        .push("q1", prob(Some(rep.q1)))
        .push("q2", prob(Some(rep.q2)));
    if t3 {
        r.push("q3", prob(rep.q3)).push("q4", prob(rep.q4));
    }
    r.push(
        "alpha",
        Value::number(rep.alpha_used, Style::Scientific, raw),
    )
    .push("approx", prob(rep.approx_t4));
    if t3 {
        r.push("approx_t3", prob(rep.approx_t3))
            .push("t3_bound", bound(rep.t3_bound));
    }
    if with_exact {
        r.push("exact", prob(rep.exact));
    }
    r.push("eh", bound(rep.eh_bound))
        .push("e", bound(rep.e_bound))
        .push(
            "in_range",
            Value::Text(rep.range_exceeded.is_none().to_string()),
        );
    if let Some(ex) = rep.range_exceeded {
        eprintln!(
            "note: alpha = 1 - q1 = {:.5} exceeds {}; approximation not applicable",
            ex.value, ex.limit
        );
    }
    Ok((r.into_sheet(), out.format))
}

fn exact(w: &WindowArgs, trials: usize, out: OutputOpts) -> CliResult {
    let spec = scan_spec(w, trials)?;
    let v = exact_scan_cdf(&spec)?;
    if spec.is_degenerate() {
        eprintln!("note: N < m, no complete window; P(S_m(N) <= n) taken as 1");
    }
    let mut r = OutputRecord::new("scan exact");
    r.push("m", Value::int(w.m as u64))
        .push("p", Value::number(w.p, Style::Full, true))
        .push("N", Value::int(trials as u64))
        .push("n", Value::int(w.n as u64))
        .push("cdf", Value::number(v, Style::Full, true))
        .push("degenerate", Value::Text(spec.is_degenerate().to_string()));
    Ok((r.into_sheet(), out.format))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    w: &WindowArgs,
    trials: usize,
    reps: u64,
    seed: u64,
    streams: usize,
    threads: Option<usize>,
    out: OutputOpts,
) -> CliResult {
    let plan = SimulationPlan {
        spec: scan_spec(w, trials)?,
        reps,
        seed,
        streams,
    };
    let res = simulate_scan_cdf_threads(&plan, threads)?;
    let mut r = OutputRecord::new("scan simulate");
    r.push("m", Value::int(w.m as u64))
        .push("p", Value::number(w.p, Style::Full, true))
        .push("N", Value::int(trials as u64))
        .push("n", Value::int(w.n as u64))
        .push("reps", Value::int(reps))
        .push("seed", Value::int(seed))
        .push("streams", Value::int(streams as u64))
        .push("estimate", Value::number(res.estimate, Style::Full, true))
        .push(
            "half_width_95",
            Value::number(res.half_width_95, Style::Scientific, out.raw),
        );
    Ok((r.into_sheet(), out.format))
}

fn sandwich_cmd(w: &WindowArgs, trials: usize, out: OutputOpts) -> CliResult {
    let s = sandwich(w.m, w.p, trials, w.n)?;
    let full = |v| Value::number(v, Style::Full, true);
    let mut r = OutputRecord::new("scan sandwich");
    r.push("m", Value::int(w.m as u64))
        .push("p", full(w.p))
        .push("N", Value::int(trials as u64))
        .push("n", Value::int(w.n as u64))
        .push("L", Value::int(s.blocks as u64))
        .push("lower", full(s.lower))
        .push("value", full(s.value))
        .push("upper", full(s.upper));
    Ok((r.into_sheet(), out.format))
}

fn tables(args: &TablesArgs) -> CliResult {
    let table = reproduce_table(args.which)?;
    Ok((Sheet::from_table("tables", &table), args.out.format))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Coeffs { alpha, out } => coeffs(alpha, out),
        Command::Lambda { p_file, alpha, out } => lambda(&p_file, alpha, out),
        Command::Tables(args) => tables(&args),
        Command::Scan { command } => match command {
            ScanCommand::Approx {
                w,
                blocks,
                with_exact,
                t3,
                out,
            } => approx(&w, blocks, with_exact, t3, out),
            ScanCommand::Exact { w, trials, out } => exact(&w, trials, out),
            ScanCommand::Simulate {
                w,
                trials,
                reps,
                seed,
                streams,
                threads,
                out,
            } => simulate(&w, trials, reps, seed, streams, threads, out),
            ScanCommand::Sandwich { w, trials, out } => sandwich_cmd(&w, trials, out),
            ScanCommand::Tables(args) => tables(&args),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok((sheet, format)) => {
            print!("{}", sheet.render(format));
            ExitCode::SUCCESS
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Capacity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
