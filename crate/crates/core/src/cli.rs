//! Command-line front end: closed-form vs numeric sweeps as CSV, and verification suites.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::capacities::{
    capacity_depolarizing_in, capacity_erasure_in, capacity_via_derivative, depolarizing_combination,
    dnorm_depolarizing_closed, dnorm_erasure_closed, gap_f_in,
};
use crate::channels::{depolarizing, erasure, QuantumChannel};
use crate::entropy::Base;
use crate::error::{Error, Result};
use crate::linalg::Exponent;
use crate::mixed_norms::channel_d_norm;
use crate::optimize::OptimizerOptions;
use crate::verify::{run_suite, Suite, VerifyConfig};

/// Default agreement tolerance for `norm`.
pub const NORM_TOL: f64 = 1e-8;
/// Default agreement tolerance for `capacity`, in bits.
pub const CAPACITY_TOL: f64 = 1e-3;
/// Endpoint tolerance for `gap`.
pub const ENDPOINT_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "qlp", version, about = "Restricted-entanglement capacities and d-norms of depolarizing and erasure channels")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Random restarts per optimization.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// Random trials per check.
    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
    /// Agreement tolerance (norm: 1e-8, capacity: 1e-3 bits).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, env = "QLP_SEED", default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = BaseArg::Bits)]
    base: BaseArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for Base {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Bits => Base::Bits,
            BaseArg::Nats => Base::Nats,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChannelArg {
    Depolarizing,
    Erasure,
}

impl ChannelArg {
    fn build(self, n: usize, lambda: f64) -> Result<QuantumChannel> {
        match self {
            ChannelArg::Depolarizing => depolarizing(n, lambda),
            ChannelArg::Erasure => erasure(n, lambda),
        }
    }

    fn closed_norm(self, n: usize, d: usize, lambda: f64, p: Exponent) -> Result<f64> {
        match self {
            ChannelArg::Depolarizing => dnorm_depolarizing_closed(n, d, lambda, p),
            ChannelArg::Erasure => dnorm_erasure_closed(n, d, lambda, p),
        }
    }

    fn closed_capacity(self, n: usize, d: usize, lambda: f64, base: Base) -> Result<f64> {
        match self {
            ChannelArg::Depolarizing => capacity_depolarizing_in(n, d, lambda, base),
            ChannelArg::Erasure => capacity_erasure_in(n, d, lambda, base),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sign {
    Positive,
    Negative,
}

/// λ values: an explicit list or a `start:stop:step` sweep.
#[derive(Debug, Args)]
struct LambdaGrid {
    /// Comma-separated λ values.
    #[arg(long = "lambda", value_delimiter = ',', conflicts_with = "sweep")]
    lambda: Vec<f64>,
    /// Inclusive sweep `start:stop:step`.
    #[arg(long)]
    sweep: Option<String>,
}

impl LambdaGrid {
    fn values(&self) -> Result<Vec<f64>> {
        let values = match &self.sweep {
            Some(s) => parse_sweep(s)?,
            None => self.lambda.clone(),
        };
        if values.is_empty() {
            return Err(Error::InvalidParameter("give --lambda or --sweep".into()));
        }
        if let Some(bad) = values.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidParameter(format!("λ = {bad} is outside [0, 1]")));
        }
        Ok(values)
    }
}

/// Parses `start:stop:step` into the inclusive grid `start + i·step`.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidParameter(format!("sweep {s:?} is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::InvalidParameter(format!(
            "sweep {s:?} needs step > 0 and start <= stop"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare closed-form d-norms with pure-state optimization.
    Norm {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        #[arg(long)]
        n: usize,
        /// Comma-separated entanglement dimensions.
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[command(flatten)]
        grid: LambdaGrid,
        /// Comma-separated exponents (`inf` allowed).
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<Exponent>,
    },
    /// Compare closed-form capacities with the d-norm derivative at p = 1.
    Capacity {
        #[arg(long, value_enum)]
        channel: ChannelArg,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<usize>,
        #[command(flatten)]
        grid: LambdaGrid,
    },
    /// Tabulate C^{high} + C^1 - 2C^d for the depolarizing channel (high defaults to d²).
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        high: Option<usize>,
        #[command(flatten)]
        grid: LambdaGrid,
        /// Require this sign at every interior λ.
        #[arg(long, value_enum)]
        expect: Option<Sign>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated dimensions (ssa: three factors; directsum: block sizes).
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// CSV float formatting: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

struct Outcome {
    text: String,
    ok: bool,
}

fn options(common: &Common) -> OptimizerOptions {
    OptimizerOptions {
        restarts: common.restarts,
        seed: common.seed,
        ..Default::default()
    }
}

fn cmd_norm(common: &Common, channel: ChannelArg, n: usize, ds: &[usize], grid: &LambdaGrid, ps: &[Exponent]) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(NORM_TOL);
    let lambdas = grid.values()?;
    let mut points = Vec::new();
    for &d in ds {
        for &l in &lambdas {
            for &p in ps {
                points.push((d, l, p));
            }
        }
    }
    let opts = options(common);
    let rows = points
        .par_iter()
        .map(|&(d, l, p)| {
            let closed = channel.closed_norm(n, d, l, p)?;
            let rep = channel_d_norm(&channel.build(n, l)?, d, p, &opts)?;
            let witness = rep.canonical_value.unwrap_or(f64::NAN);
            let ok = (closed - witness).abs() <= tol && rep.value <= closed + tol;
            Ok((d, l, p, closed, rep.value, witness, ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut text = String::from("n,d,lambda,p,closed_form,numeric_lower_bound,witness_value,gap\n");
    let mut ok = true;
    for (d, l, p, closed, numeric, witness, row_ok) in rows {
        ok &= row_ok;
        let p = match p {
            Exponent::Finite(v) => fmt_float(v),
            Exponent::Infinity => "inf".into(),
        };
        let _ = writeln!(
            text,
            "{n},{d},{},{p},{},{},{},{}",
            fmt_float(l),
            fmt_float(closed),
            fmt_float(numeric),
            fmt_float(witness),
            fmt_float(numeric - closed)
        );
    }
    Ok(Outcome { text, ok })
}

fn base_name(base: Base) -> &'static str {
    match base {
        Base::Bits => "bits",
        Base::Nats => "nats",
    }
}

fn cmd_capacity(common: &Common, channel: ChannelArg, n: usize, ds: &[usize], grid: &LambdaGrid) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(CAPACITY_TOL);
    let base: Base = common.base.into();
    let lambdas = grid.values()?;
    let points: Vec<(usize, f64)> = ds.iter().flat_map(|&d| lambdas.iter().map(move |&l| (d, l))).collect();
    let opts = options(common);
    let rows = points
        .par_iter()
        .map(|&(d, l)| {
            let closed_bits = channel.closed_capacity(n, d, l, Base::Bits)?;
            let rep = capacity_via_derivative(&channel.build(n, l)?, d, &opts)?;
            let gap = (closed_bits - rep.numeric_bits).abs();
            let to_base = |bits: f64| base.from_nats(bits * std::f64::consts::LN_2);
            Ok((d, l, to_base(closed_bits), to_base(rep.numeric_bits), gap <= tol, to_base(gap)))
        })
        .collect::<Result<Vec<_>>>()?;
    let b = base_name(base);
    let mut text = format!("n,d,lambda,closed_{b},derivative_{b},abs_gap\n");
    let mut ok = true;
    for (d, l, closed, numeric, row_ok, gap) in rows {
        ok &= row_ok;
        let _ = writeln!(text, "{n},{d},{},{},{},{}", fmt_float(l), fmt_float(closed), fmt_float(numeric), fmt_float(gap));
    }
    Ok(Outcome { text, ok })
}

fn cmd_gap(common: &Common, n: usize, d: usize, high: Option<usize>, grid: &LambdaGrid, expect: Option<Sign>) -> Result<Outcome> {
    let base: Base = common.base.into();
    let lambdas = grid.values()?;
    let b = base_name(base);
    let mut text = format!("lambda,f_{b}\n");
    let mut ok = true;
    for l in lambdas {
        let f = match high {
            Some(h) => depolarizing_combination(n, h, d, l, base)?,
            None => gap_f_in(n, d, l, base)?,
        };
        let interior = l > 0.0 && l < 1.0;
        ok &= match (interior, expect) {
            (false, _) => f.abs() <= ENDPOINT_TOL,
            (true, Some(Sign::Positive)) => f > 0.0,
            (true, Some(Sign::Negative)) => f < 0.0,
            (true, None) => f.is_finite(),
        };
        let _ = writeln!(text, "{},{}", fmt_float(l), fmt_float(f));
    }
    Ok(Outcome { text, ok })
}

fn cmd_verify(common: &Common, suite: Suite, n: Option<usize>, dims: Option<Vec<usize>>) -> Result<Outcome> {
    let config = VerifyConfig {
        n,
        dims,
        trials: common.trials,
        seed: common.seed,
    };
    let checks = run_suite(suite, &config)?;
    let mut text = String::new();
    let mut ok = true;
    for c in &checks {
        ok &= c.passed();
        let _ = writeln!(text, "{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(text, "{} checks, {} failed", checks.len(), failed);
    Ok(Outcome { text, ok })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::Norm { channel, n, d, grid, p } => cmd_norm(c, *channel, *n, d, grid, p),
        Command::Capacity { channel, n, d, grid } => cmd_capacity(c, *channel, *n, d, grid),
        Command::Gap { n, d, high, grid, expect } => cmd_gap(c, *n, *d, *high, grid, *expect),
        Command::Verify { suite, n, dims } => cmd_verify(c, *suite, *n, dims.clone()),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code:
/// 0 on success, 1 when a numerical assertion fails, 2 on usage errors.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.common.jobs {
        Some(0) => Err(Error::InvalidParameter("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(&cli))),
        None => dispatch(&cli),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => out.write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if outcome.ok {
        0
    } else {
        let _ = writeln!(err, "assertion failed");
        1
    }
}
