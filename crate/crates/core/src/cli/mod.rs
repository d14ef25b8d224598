//! The `monobasis` command line: JSON config in, CSV or JSON table out.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 config or usage error,
//! 3 invariant failure (the table is still written).

mod commands;
mod config;
mod table;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{
    check_enumeration, cmd_basis_constant, cmd_converge, cmd_invariants, cmd_net, cmd_p0,
    DEFAULT_INVARIANT_SAMPLES, ENUMERATE_LIMIT,
};
pub use config::{
    Coefficient, ConfigError, ExperimentConfig, Format, Kind, DEFAULT_BUDGET, DEFAULT_SAMPLES,
    DEFAULT_TRIALS,
};
pub use table::{config_from_output, format_float, Cell, Metadata, ResultTable};

use crate::multiindex::monomials;
use crate::sequence_spaces::{
    block_space_norm, lorentz_predual_norm, LorentzWeights, PExponent, Point,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Run(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => e.fmt(f),
            CliError::Run(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Run(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "monobasis",
    version,
    about = "Monomial bases and seminorms on block and Lorentz-predual spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON experiment config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Base points per sample cloud.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Record wall-clock time in the metadata (output is then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tail seminorms of a truncated exp(Σ φ_i z_i) along the square order.
    Converge(Common),
    /// Randomized basis-constant estimates for degrees 1..=n_max.
    BasisConstant(Common),
    /// Randomized estimate of the step constant p0 for one (n, k).
    P0(Common),
    /// ε-net sizes and covering diagnostics.
    Net {
        #[command(flatten)]
        common: Common,
        /// Random members of A_λ checked against each net.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Runs every invariant suite; exits with 3 if any fails.
    Invariants {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        /// Deliberately breaks the solidity suite.
        #[arg(long)]
        perturb: bool,
    },
    /// Prints the square-ordered monomials of a degree, one sparse JSON per line.
    Enumerate {
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reads a sparse Point as JSON from standard input and prints its norm.
    Norm {
        #[arg(long, value_enum)]
        space: SpaceKind,
        /// Block exponent.
        #[arg(long)]
        p: Option<f64>,
        /// Lorentz weight prefix as a JSON array (default: harmonic).
        #[arg(long)]
        weights: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    Block,
    Lorentz,
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, ConfigError> {
    match path {
        Some(p) => ExperimentConfig::from_file(p),
        None => Ok(ExperimentConfig::default()),
    }
}

/// Command-line flags win over config fields and are echoed with them.
fn merge(common: &Common, mut config: ExperimentConfig) -> ExperimentConfig {
    if let Some(seed) = common.seed {
        config.seed = Some(seed);
    }
    if let Some(budget) = common.budget {
        config.budget = Some(budget);
    }
    if let Some(trials) = common.trials {
        config.trials = Some(trials);
    }
    if let Some(format) = common.format {
        config.format = Some(format);
    }
    config
}

fn emit(text: &str, out: Option<&str>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Run(format!("cannot write {path}: {e}"))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Run(e.to_string())),
    }
}

/// `--out` is not echoed into the metadata, so output written to different
/// files from one config stays byte-identical.
fn run_table<F>(
    common: &Common,
    config: ExperimentConfig,
    stdout: &mut dyn Write,
    f: F,
) -> Result<i32, CliError>
where
    F: FnOnce(&ExperimentConfig) -> Result<(ResultTable, bool), CliError>,
{
    let start = Instant::now();
    let (mut table, ok) = f(&config)?;
    if common.timing {
        table.metadata.elapsed = Some(start.elapsed().as_secs_f64());
    }
    let text = table.render(config.format.unwrap_or_default());
    let out = common
        .out
        .as_ref()
        .map(|p| p.display().to_string())
        .or(config.out);
    emit(&text, out.as_deref(), stdout)?;
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}

fn run_enumerate(
    degree: Option<u32>,
    max_length: Option<usize>,
    config: Option<&PathBuf>,
    out: Option<&PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let cfg = load_config(config)?;
    if matches!(cfg.kind, Some(k) if k != Kind::Enumerate) {
        return Err(ConfigError::new("kind", "config is not for `enumerate`").into());
    }
    let degree = degree
        .or(cfg.n)
        .ok_or_else(|| ConfigError::new("n", "pass --degree or set \"n\""))?;
    let max_length = max_length
        .or(cfg.k)
        .ok_or_else(|| ConfigError::new("k", "pass --max-length or set \"k\""))?;
    check_enumeration(degree, max_length)?;
    let mut text = String::new();
    for m in monomials(degree, max_length) {
        text.push_str(&serde_json::to_string(&m).expect("multi-index serializes"));
        text.push('\n');
    }
    let out = out.map(|p| p.display().to_string()).or(cfg.out);
    emit(&text, out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn run_norm(
    space: SpaceKind,
    p: Option<f64>,
    weights: Option<&str>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut input = String::new();
    stdin
        .read_to_string(&mut input)
        .map_err(|e| CliError::Run(e.to_string()))?;
    let z: Point =
        serde_json::from_str(&input).map_err(|e| ConfigError::new("stdin", e.to_string()))?;
    let value = match space {
        SpaceKind::Block => {
            let p = p.ok_or_else(|| ConfigError::new("p", "block norm needs --p"))?;
            let p = PExponent::new(p).map_err(|e| ConfigError::new("p", e.to_string()))?;
            block_space_norm(&z, p)
        }
        SpaceKind::Lorentz => {
            let w = match weights {
                Some(text) => {
                    let prefix: Vec<f64> = serde_json::from_str(text)
                        .map_err(|e| ConfigError::new("weights", e.to_string()))?;
                    LorentzWeights::new(prefix)
                        .map_err(|e| ConfigError::new("weights", e.to_string()))?
                }
                None => LorentzWeights::harmonic(z.nnz().max(1)),
            };
            lorentz_predual_norm(&z, &w).map_err(|e| ConfigError::new("weights", e.to_string()))?
        }
    };
    writeln!(stdout, "{}", format_float(value)).map_err(|e| CliError::Run(e.to_string()))?;
    Ok(EXIT_OK)
}

pub fn dispatch(cli: Cli, stdin: &mut dyn Read, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Converge(common) => {
            let config = merge(&common, load_config(common.config.as_ref())?);
            run_table(&common, config, stdout, |c| Ok((cmd_converge(c)?, true)))
        }
        Command::BasisConstant(common) => {
            let config = merge(&common, load_config(common.config.as_ref())?);
            run_table(&common, config, stdout, |c| {
                Ok((cmd_basis_constant(c)?, true))
            })
        }
        Command::P0(common) => {
            let config = merge(&common, load_config(common.config.as_ref())?);
            run_table(&common, config, stdout, |c| Ok((cmd_p0(c)?, true)))
        }
        Command::Net { common, samples } => {
            let mut config = merge(&common, load_config(common.config.as_ref())?);
            if samples.is_some() {
                config.samples = samples;
            }
            run_table(&common, config, stdout, |c| Ok((cmd_net(c)?, true)))
        }
        Command::Invariants {
            common,
            samples,
            perturb,
        } => {
            let mut config = merge(&common, load_config(common.config.as_ref())?);
            if samples.is_some() {
                config.samples = samples;
            }
            if perturb {
                config.perturb = Some(true);
            }
            run_table(&common, config, stdout, cmd_invariants)
        }
        Command::Enumerate {
            degree,
            max_length,
            config,
            out,
        } => run_enumerate(degree, max_length, config.as_ref(), out.as_ref(), stdout),
        Command::Norm { space, p, weights } => {
            run_norm(space, p, weights.as_deref(), stdin, stdout)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors go to `stderr`.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli, stdin, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "monobasis: {e}");
            e.exit_code()
        }
    }
}
