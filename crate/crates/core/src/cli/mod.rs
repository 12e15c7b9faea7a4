//! Config-driven command surface: one subcommand per job kind plus
//! `recipes`, emitting CSV tables or a JSON document wrapped in a
//! metadata envelope.
//!
//! Exit codes: 0 success, 1 I/O, 2 invalid input or config, 3 numerical
//! failure, 4 degenerate input.

mod config;
mod jobs;
mod output;
mod recipes;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{
    pulse_schedule, AxisConfig, CircuitConfig, InitialState, Job, JobKind, LoopMethodConfig,
    OutputConfig, OutputFormat, RegionConfig, RunConfig, SegmentConfig, SegmentKindConfig,
};
pub use jobs::{execute, initial_state, JobOutput};
pub use output::{
    read_csv, read_envelope, read_json, render_csv, render_json, write_envelope, ResultEnvelope,
    Table, TOOL_VERSION,
};
pub use recipes::{figure_recipes, recipe, recipe_text, RECIPES};

use crate::{Error, ErrorKind, Result};

/// JSON schema of [`ResultEnvelope`] documents.
pub const ENVELOPE_SCHEMA: &str = include_str!("../../schema/envelope.schema.json");

/// Executes `cfg` and wraps the payload with its provenance.
pub fn run_config(cfg: &RunConfig) -> Result<ResultEnvelope> {
    let start = Instant::now();
    let out = execute(cfg)?;
    Ok(ResultEnvelope {
        tool_version: TOOL_VERSION.to_string(),
        config: cfg.clone(),
        wall_clock_s: start.elapsed().as_secs_f64(),
        meta: out.meta,
        tables: out.tables,
    })
}

/// Loads, runs and writes the config at `path`; returns the files written.
pub fn run(config_path: &Path) -> Result<Vec<PathBuf>> {
    let cfg = RunConfig::from_path(config_path)?;
    let envelope = run_config(&cfg)?;
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    write_envelope(&envelope, &dir, cfg.format())
}

pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        Some(ErrorKind::InvalidInput) => 2,
        Some(ErrorKind::Numerical) => 3,
        Some(ErrorKind::Degenerate) => 4,
        None => 1,
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format, overriding `output.format`.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct JobArgs {
    /// JSON config, or TOML when the file ends in `.toml`.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Subcommand)]
enum RecipeCommand {
    /// Names of the bundled recipes.
    List,
    /// Prints a recipe config.
    Show { name: String },
    /// Runs a recipe.
    Run {
        name: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lowest levels over flux or offset charge.
    SpectrumSweep(JobArgs),
    /// Qubit splitting over flux for one or more junction sizes.
    Splitting(JobArgs),
    /// Propagates a state through a flux pulse schedule.
    Pulse(JobArgs),
    /// Tipping angle and two-level validity over flux.
    TippingScan(JobArgs),
    /// Berry curvature sampled on a (flux, n_g) grid.
    BerryGrid(JobArgs),
    /// Geometric phase of a rectangular loop.
    BerryLoop(JobArgs),
    /// Charge cutoff needed for converged levels.
    Convergence(JobArgs),
    /// Bundled figure configs.
    #[command(subcommand)]
    Recipes(RecipeCommand),
}

#[derive(Debug, Parser)]
#[command(
    name = "psquid",
    version,
    about = "π-SQUID qubit spectra, pulses and geometric phases"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn apply_overrides(cfg: &mut RunConfig, args: &OutputArgs) {
    if let Some(dir) = &args.out {
        cfg.output.dir = Some(dir.clone());
    }
    if let Some(f) = args.format {
        cfg.output.format = Some(f.into());
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.threads > 0 {
        // a pool that is already initialized keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global();
    }
}

fn run_and_report(cfg: &RunConfig) -> Result<()> {
    let envelope = run_config(cfg)?;
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    for path in write_envelope(&envelope, &dir, cfg.format())? {
        println!("{}", path.display());
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<()> {
    let (kind, args) = match command {
        Command::SpectrumSweep(a) => (JobKind::SpectrumSweep, a),
        Command::Splitting(a) => (JobKind::Splitting, a),
        Command::Pulse(a) => (JobKind::Pulse, a),
        Command::TippingScan(a) => (JobKind::TippingScan, a),
        Command::BerryGrid(a) => (JobKind::BerryGrid, a),
        Command::BerryLoop(a) => (JobKind::BerryLoop, a),
        Command::Convergence(a) => (JobKind::Convergence, a),
        Command::Recipes(RecipeCommand::List) => {
            for name in figure_recipes() {
                println!("{name}");
            }
            return Ok(());
        }
        Command::Recipes(RecipeCommand::Show { name }) => {
            print!("{}", recipe_text(&name)?);
            return Ok(());
        }
        Command::Recipes(RecipeCommand::Run { name, output }) => {
            let mut cfg = recipe(&name)?;
            apply_overrides(&mut cfg, &output);
            return run_and_report(&cfg);
        }
    };
    let mut cfg = RunConfig::from_path(&args.config)?;
    if cfg.job.kind() != kind {
        return Err(Error::invalid(
            "job.kind",
            format!(
                "config holds a {} job, not {}",
                cfg.job.kind().name(),
                kind.name()
            ),
        ));
    }
    apply_overrides(&mut cfg, &args.output);
    run_and_report(&cfg)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
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
