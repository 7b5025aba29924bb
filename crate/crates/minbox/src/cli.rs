//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use minbox_core::asymptotics::Constants;
use minbox_core::{solver, SieveTable};

use crate::checkpoint::ChunkLog;
use crate::experiments::{self, geometric_grid, ScanReport};
use crate::report::{self, Cell, Format, Table};
use crate::sweep::{sweep_resumable, Context};
use crate::{Error, Result};

pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;
/// Sieve limits from here on need `--long-run`.
pub const LONG_RUN_LIMIT: u64 = 10_000_000;
pub const SIEVE_LIMIT_ENV: &str = "MINBOX_SIEVE_LIMIT";

#[derive(Debug, Parser)]
#[command(name = "minbox", version, about = "Minimal-surface integral box factorizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest integer any command may touch.
    #[arg(long, global = true, env = SIEVE_LIMIT_ENV, default_value_t = DEFAULT_SIEVE_LIMIT)]
    pub sieve_limit: u64,
    /// Allow sieve limits of 10^7 and beyond.
    #[arg(long, global = true)]
    pub long_run: bool,
    /// Append finished chunks here and resume from it (sweep, census).
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Optimal tuple of one n.
    Solve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
    },
    /// Optimal tuples of every n <= x.
    Sweep {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        k: u32,
    },
    /// Lists every n <= x with more than one optimal tuple.
    Census {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: u64,
    },
    /// Sum of rho_j(n) over n <= x against its predicted growth.
    Meanvalue {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
    },
    /// Primality of the top edges above x^{alpha_j}.
    Structure {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        x: u64,
    },
    /// Dyadic shells of rho_1 and the edge bounds per shell.
    Shells {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: u64,
    },
    /// Divisors in dyadic windows: tau(n, v) with --n, H(x, v) with --x,
    /// the squarefree witness count with --x --k --witness.
    Locdiv {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        x: Option<u64>,
        /// Window bases v_1,...,v_m; each window is (v, 2v].
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        witness: bool,
    },
    /// T_j(y) against its main term (y given by --x).
    Tsum {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        x: u64,
    },
    /// Sum of rho_{2,1} against its growth envelope.
    Ford {
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
    },
    /// Sum of log rho_{2,1} and c_hat = sum / (x log x).
    Logmean {
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
    },
    /// Sum of rho_{k-h,j-h} against sum of rho_{k,j}.
    Remarkv {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        h: u32,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
    },
    /// gamma_j, alpha_j, delta_k and C_{k,j}.
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
    },
}

/// Parsed command plus shared options.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub workers: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub sieve_limit: u64,
    pub long_run: bool,
    pub checkpoint: Option<PathBuf>,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let c = cli.common;
        RunConfig {
            command: cli.command,
            workers: c.workers as usize,
            format: c.format,
            output: c.output,
            sieve_limit: c.sieve_limit,
            long_run: c.long_run,
            checkpoint: c.checkpoint,
        }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn check_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(usage("--k must be at least 2"));
    }
    if k > 64 {
        return Err(usage("--k must be at most 64"));
    }
    Ok(())
}

fn check_j(k: u32, j: u32, min_j: u32) -> Result<()> {
    check_k(k)?;
    if j < min_j || j > k {
        return Err(usage(format!("--j must satisfy {min_j} <= j <= k")));
    }
    Ok(())
}

/// Largest integer the command touches, after validating its arguments.
fn required_bound(cfg: &RunConfig) -> Result<u64> {
    let grid_max = |g: &Option<Vec<u64>>, floor: u64| -> Result<u64> {
        match g {
            Some(g) => {
                if g.is_empty() || g.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(usage("--grid must be a strictly increasing list"));
                }
                if g[0] < floor {
                    return Err(usage(format!("--grid entries must be at least {floor}")));
                }
                Ok(*g.last().unwrap())
            }
            None => Ok(geometric_grid(cfg.sieve_limit).last().copied().unwrap_or(floor)),
        }
    };
    let positive = |x: u64, name: &str| -> Result<u64> {
        if x == 0 {
            Err(usage(format!("--{name} must be positive")))
        } else {
            Ok(x)
        }
    };
    Ok(match &cfg.command {
        Command::Solve { n, k } => {
            check_k(*k)?;
            if *n > minbox_core::MAX_VOLUME {
                return Err(usage("--n must not exceed 2^40"));
            }
            positive(*n, "n")?
        }
        Command::Sweep { x, k } | Command::Census { k, x } | Command::Shells { k, x } => {
            check_k(*k)?;
            positive(*x, "x")?
        }
        Command::Structure { k, j, x } | Command::Tsum { k, j, x } => {
            check_j(*k, *j, 2)?;
            positive(*x, "x")?
        }
        Command::Meanvalue { k, j, grid } => {
            check_j(*k, *j, 1)?;
            grid_max(grid, 1)?
        }
        Command::Remarkv { k, j, h, grid } => {
            check_j(*k, *j, 2)?;
            if h + 2 > *j {
                return Err(usage("--h must satisfy 0 <= h <= j - 2"));
            }
            grid_max(grid, 1)?
        }
        Command::Ford { grid } => grid_max(grid, 1)?,
        Command::Logmean { grid } => grid_max(grid, 3)?,
        Command::Locdiv { n, x, v, k, witness } => {
            if *witness {
                let k = k.ok_or_else(|| usage("--witness needs --k"))?;
                check_k(k)?;
                positive(x.ok_or_else(|| usage("--witness needs --x"))?, "x")?
            } else {
                let v = v.as_ref().ok_or_else(|| usage("locdiv needs --v (or --witness)"))?;
                if v.is_empty() || v.iter().any(|b| !b.is_finite() || *b < 0.0) {
                    return Err(usage("--v entries must be finite and non-negative"));
                }
                match (n, x) {
                    (Some(n), None) => positive(*n, "n")?,
                    (None, Some(x)) => positive(*x, "x")?,
                    _ => return Err(usage("locdiv needs exactly one of --n and --x")),
                }
            }
        }
        Command::Constants { k, j } => {
            check_j(*k, *j, 1)?;
            0
        }
    })
}

fn sieve_for(cfg: &RunConfig, bound: u64) -> Result<SieveTable> {
    if cfg.sieve_limit >= LONG_RUN_LIMIT && !cfg.long_run {
        return Err(usage(format!(
            "a sieve limit of {} needs --long-run (limits from {LONG_RUN_LIMIT} on take minutes to hours)",
            cfg.sieve_limit
        )));
    }
    if bound > cfg.sieve_limit {
        return Err(minbox_core::Error::OutOfRange { n: bound, limit: cfg.sieve_limit }.into());
    }
    Ok(SieveTable::build(bound.max(2))?)
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &cfg.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn checkpoint_log<T>(cfg: &RunConfig, tag: &str) -> Result<ChunkLog<T>>
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de>,
{
    match &cfg.checkpoint {
        Some(p) => ChunkLog::open(p, tag),
        None => Ok(ChunkLog::disabled()),
    }
}

fn scan_table(r: &ScanReport) -> Result<Table> {
    let t = report::scan_report(r);
    Ok(t)
}

fn constants_table(k: u32, j: u32) -> Result<Table> {
    let c = Constants::new(k, j)?;
    let mut t = Table::new(&["k", "j", "gamma", "alpha", "alpha_value", "delta_k", "coefficient"]);
    t.push(vec![
        Cell::Int(k.into()),
        Cell::Int(j.into()),
        Cell::Int(c.gamma.into()),
        Cell::Text(c.alpha.to_string()),
        Cell::Real(c.alpha.to_f64()),
        Cell::Real(c.delta_k),
        c.coefficient.into(),
    ]);
    Ok(t)
}

/// Builds the output of a validated configuration. A theorem violation is
/// written out and then reported as [`Error::Invariant`].
fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let bound = required_bound(cfg)?;
    let sieve = sieve_for(cfg, bound)?;
    let ctx = Context::new(&sieve, cfg.workers);
    let default_grid = || geometric_grid(cfg.sieve_limit);
    let mut invariant: Option<String> = None;
    let table = match &cfg.command {
        Command::Solve { n, k } => {
            let p = solver::solve(*n, *k as usize, &sieve)?;
            let rho: Vec<String> = p.rho.factors().iter().map(u64::to_string).collect();
            if cfg.format == Format::Csv {
                writeln!(
                    out,
                    "n={} k={} rho={} surface_num={} ties={}",
                    n,
                    k,
                    rho.join(","),
                    p.rho.surface_num(),
                    p.tie_count
                )?;
                return Ok(());
            }
            let mut t = Table::new(&["n", "k", "rho", "surface_num", "ties"]);
            t.push(vec![
                Cell::Int(*n),
                Cell::Int((*k).into()),
                Cell::Text(rho.join(",")),
                Cell::Int(p.rho.surface_num()),
                Cell::Int(p.tie_count.into()),
            ]);
            t
        }
        Command::Sweep { x, k } => {
            let mut log = checkpoint_log(cfg, &format!("sweep k={k} x={x}"))?;
            report::profiles(&sweep_resumable(&ctx, *x, *k as usize, &mut log)?)
        }
        Command::Census { k, x } => {
            let mut log = checkpoint_log(cfg, &format!("census k={k} x={x}"))?;
            let r = experiments::uniqueness_census_resumable(&ctx, *k, *x, &mut log)?;
            scan_table(&r)?
        }
        Command::Meanvalue { k, j, grid } => {
            let grid = grid.clone().unwrap_or_else(default_grid);
            report::report_rows(&experiments::mean_value_table(&ctx, *k, *j, &grid)?)
        }
        Command::Structure { k, j, x } => {
            let r = experiments::structure_scan(&ctx, *k, *j, *x)?;
            if !r.violations.is_empty() {
                invariant = Some(format!("{} structure violations", r.violations.len()));
            }
            scan_table(&r)?
        }
        Command::Shells { k, x } => {
            let c = experiments::shell_census(&ctx, *k, *x)?;
            if !c.failures.is_empty() {
                let first = &c.failures[0];
                invariant = Some(format!("{} shell failures, first n={} {}", c.failures.len(), first.n, first.detail));
            } else if c.total() != *x {
                invariant = Some(format!("shell counts sum to {} instead of {x}", c.total()));
            }
            report::shell_counts(&c)
        }
        Command::Locdiv { n, x, v, k, witness } => {
            if *witness {
                let (x, k) = (x.expect("validated"), k.expect("validated"));
                let count = experiments::witness_count(&ctx, x, k)?;
                let mut t = Table::new(&["x", "k", "witnesses"]);
                t.push(vec![Cell::Int(x), Cell::Int(k.into()), Cell::Int(count)]);
                t
            } else {
                let v = v.as_ref().expect("validated");
                match (n, x) {
                    (Some(n), _) => {
                        let count = experiments::localized_divisor_count(&sieve, *n, v)?;
                        let mut t = Table::new(&["n", "tau"]);
                        t.push(vec![Cell::Int(*n), Cell::Int(count)]);
                        t
                    }
                    (None, Some(x)) => report::report_rows(&[experiments::h_count(&ctx, *x, v)?]),
                    (None, None) => unreachable!("validated"),
                }
            }
        }
        Command::Tsum { k, j, x } => report::report_rows(&[experiments::t_sum(&ctx, *k, *j, *x)?]),
        Command::Ford { grid } => {
            let grid = grid.clone().unwrap_or_else(default_grid);
            report::report_rows(&experiments::ford_ratio(&ctx, &grid)?)
        }
        Command::Logmean { grid } => {
            let grid = grid.clone().unwrap_or_else(default_grid);
            report::log_mean_rows(&experiments::log_mean(&ctx, &grid)?)
        }
        Command::Remarkv { k, j, h, grid } => {
            let grid = grid.clone().unwrap_or_else(default_grid);
            report::remark_v_rows(&experiments::remark_v_table(&ctx, *k, *j, *h, &grid)?)
        }
        Command::Constants { k, j } => constants_table(*k, *j)?,
    };
    table.write(cfg.format, out)?;
    out.flush()?;
    match invariant {
        Some(msg) => Err(Error::Invariant(msg)),
        None => Ok(()),
    }
}

/// Runs one configuration against an explicit sink.
pub fn run_to(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    execute(cfg, out)
}

/// Runs one configuration and returns the process exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let result = open_output(cfg).and_then(|mut out| execute(cfg, &mut out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("minbox: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` and runs; malformed flags print usage and give status 1.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&RunConfig::from(cli)),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
