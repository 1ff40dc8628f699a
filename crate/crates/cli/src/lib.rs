//! `logmeans` command-line harness: runs each experiment from a [`RunConfig`]
//! and writes plot-ready CSV (optionally mirrored as JSON).
//!
//! Exit codes: 0 all checks passed, 1 a tolerance or property check failed,
//! 2 usage or configuration error, 3 I/O error.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{Check, Outcome};
pub use config::{RunConfig, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "LOGMEANS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "logmeans", version, about = "Experiments on logarithmic means of double Fourier series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub grid_size: Option<usize>,
    /// Comma-separated scales, e.g. `3,4,5`.
    #[arg(long = "n", global = true, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,
    /// Strata per axis in each rectangle.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Existing directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a JSON mirror of every table.
    #[arg(long, global = true)]
    pub json: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Closed vs direct kernel and the telescoped cosine identity.
    KernelVerify,
    /// Sampled c/(xy) lower bound on I_n and J_n.
    Lemma,
    /// L1 growth of bump means and operator-norm probes.
    Growth,
    /// Exceedance measure and r_{n,m}.
    Measure,
    /// Convergence tables of the means for |x| and |x||y|.
    Converge,
    /// Luxemburg norms, unit-ball membership and inclusion probes.
    Orlicz,
}

impl Command {
    pub fn execute(self, cfg: &RunConfig) -> commands::CmdResult {
        match self {
            Command::KernelVerify => commands::kernel_verify(cfg),
            Command::Lemma => commands::lemma(cfg),
            Command::Growth => commands::growth(cfg),
            Command::Measure => commands::measure(cfg),
            Command::Converge => commands::converge(cfg),
            Command::Orlicz => commands::orlicz(cfg),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
        }
    }
}

/// File values first, then flags.
pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &g.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = g.grid_size {
        cfg.grid_size = v;
    }
    if let Some(v) = &g.n {
        cfg.n_list = v.clone();
    }
    if let Some(v) = g.samples {
        cfg.samples_per_rect = v;
    }
    if let Some(v) = &g.out {
        cfg.output_dir = v.clone();
    }
    if g.seed.is_some() {
        cfg.seed = g.seed;
    }
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

/// Applies `LOGMEANS_THREADS` to the global pool once per process.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| CliError::Usage(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
    if n == 0 {
        return Err(CliError::Usage(format!("{THREADS_ENV} must be positive")));
    }
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs `cmd` and writes its tables; returns the exit code.
pub fn run_command(cmd: Command, cfg: &RunConfig, json: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if !cfg.output_dir.is_dir() {
        let _ = writeln!(stderr, "I/O error: output directory {} does not exist", cfg.output_dir.display());
        return EXIT_IO;
    }
    let outcome = match cmd.execute(cfg) {
        Ok(o) => o,
        Err(logmeans_core::Error::Io(e)) => {
            let _ = writeln!(stderr, "I/O error: {e}");
            return EXIT_IO;
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    for n in &outcome.notes {
        let _ = writeln!(stderr, "{n}");
    }
    for t in &outcome.tables {
        match t.write(&cfg.output_dir, json) {
            Ok(paths) => {
                for p in paths {
                    let _ = writeln!(stdout, "wrote {}", p.display());
                }
            }
            Err(e) => {
                let _ = writeln!(stderr, "I/O error: {e}");
                return EXIT_IO;
            }
        }
    }
    for c in &outcome.checks {
        let tag = if c.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(stdout, "{tag} {}{}", c.name, if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) });
    }
    if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
    };
    let cfg = match resolve_config(&cli.global).and_then(|c| configure_threads().map(|_| c)) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return e.code();
        }
    };
    run_command(cli.command, &cfg, cli.global.json, stdout, stderr)
}
