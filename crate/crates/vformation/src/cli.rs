//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use vformation_core::engine::Snapshot;
use vformation_core::metrics::indicators_of;
use vformation_core::{IndicatorRecord, RunOptions};

use crate::config::{parse_grid, Config, ConfigError, Overrides, SeriesIndicator};
use crate::experiment::{run_batch, BatchSpec, SeriesSpec};
use crate::render::render_svg;
use crate::tables::{self, SnapshotError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_OUTPUT: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SIMULATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "vformation",
    version,
    about = "Simulate birds flying in formation and measure the formations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one flock, writing snapshots and the final indicators.
    Run(RunArgs),
    /// Run a grid of independent simulations and write CSV tables.
    Batch(BatchArgs),
    /// Draw every step of a snapshot file as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of birds.
    #[arg(long)]
    n: Option<usize>,
    /// Perception angle in degrees.
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Steps between snapshots.
    #[arg(long)]
    snapshot_every: Option<usize>,
    /// Also write one SVG per snapshot.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[command(flatten)]
    common: Common,
    /// Runs per grid cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Cells as n:alpha pairs, e.g. 15:180,15:170.
    #[arg(long)]
    grid: Option<String>,
    /// Record an indicator over time (msd).
    #[arg(long)]
    series: Option<SeriesIndicator>,
    /// Steps between series samples.
    #[arg(long)]
    series_every: Option<usize>,
    /// Runs per cell with a series.
    #[arg(long)]
    series_runs: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// Snapshot CSV written by `run`.
    file: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` file, for the wingspan and wash sizes.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Draw the formation's straight-line segments.
    #[arg(long)]
    overlay: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: SnapshotError,
    },
    #[error("{0}")]
    Simulation(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_USAGE,
            CliError::Output { .. } => EXIT_OUTPUT,
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Simulation(_) => EXIT_SIMULATION,
        }
    }
}

/// The one-line summary printed after a run.
pub fn indicator_line(r: &IndicatorRecord) -> String {
    format!(
        "t_stab={} leads={} groups={} segments={} msd={}",
        r.t_stab,
        r.leads,
        r.groups,
        r.segments,
        r.mean_seg_dist.map(|v| v.to_string()).unwrap_or_default()
    )
}

fn output_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| output_error(dir, e))
}

fn write_file(
    path: &Path,
    fill: impl FnOnce(&mut BufWriter<File>) -> Result<(), String>,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| output_error(path, e))?;
    let mut w = BufWriter::new(file);
    fill(&mut w).map_err(|e| output_error(path, e))?;
    w.flush().map_err(|e| output_error(path, e))
}

fn write_svgs(
    dir: &Path,
    snapshots: &[Snapshot],
    config: &Config,
    overlay: bool,
) -> Result<(), CliError> {
    for snap in snapshots {
        let path = dir.join(format!("step_{:05}.svg", snap.step));
        let svg = render_svg(&snap.birds, &config.params, overlay);
        write_file(&path, |w| {
            w.write_all(svg.as_bytes()).map_err(|e| e.to_string())
        })?;
    }
    Ok(())
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            alpha: self.alpha,
            t: self.t,
            seed: self.seed,
            out: self.out.clone(),
            ..Overrides::default()
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let overrides = Overrides {
        snapshot_every: args.snapshot_every,
        ..args.common.overrides()
    };
    let config = Config::resolve(args.common.config.as_deref(), &overrides)?;
    let options = RunOptions {
        snapshot_every: Some(config.snapshot_every),
        ..RunOptions::default()
    };
    let result = vformation_core::run(config.params, config.seed, options)
        .map_err(|e| CliError::Simulation(format!("seed {}: {e}", config.seed)))?;

    create_dir(&config.out)?;
    let path = config.out.join("snapshots.csv");
    write_file(&path, |w| {
        tables::write_snapshots(w, &result.trace).map_err(|e| e.to_string())
    })?;
    if args.svg {
        write_svgs(&config.out, &result.trace, &config, false)?;
    }
    let record = indicators_of(&result.final_state.birds, result.t_stab, &config.params);
    println!("{}", indicator_line(&record));
    Ok(())
}

fn cmd_batch(args: BatchArgs) -> Result<(), CliError> {
    let grid = args
        .grid
        .as_deref()
        .map(parse_grid)
        .transpose()
        .map_err(|e| CliError::Config(ConfigError::Invalid(format!("--grid: {e}"))))?;
    let overrides = Overrides {
        runs: args.runs,
        grid,
        series: args.series,
        series_every: args.series_every,
        series_runs: args.series_runs,
        workers: args.workers,
        ..args.common.overrides()
    };
    let config = Config::resolve(args.common.config.as_deref(), &overrides)?;
    let spec = BatchSpec {
        series: config.series.map(|_| SeriesSpec {
            every: config.series_every,
            runs: config.series_runs,
        }),
        workers: config.workers,
        ..BatchSpec::new(config.params, config.runs, config.seed, config.cells())
    };
    let out = run_batch(&spec).map_err(|e| CliError::Simulation(e.to_string()))?;

    create_dir(&config.out)?;
    write_file(&config.out.join("runs.csv"), |w| {
        tables::write_runs(w, &out.runs).map_err(|e| e.to_string())
    })?;
    write_file(&config.out.join("aggregate.csv"), |w| {
        tables::write_aggregate(w, &out.aggregate).map_err(|e| e.to_string())
    })?;
    if spec.series.is_some() {
        write_file(&config.out.join("series.csv"), |w| {
            tables::write_series(w, &out.series).map_err(|e| e.to_string())
        })?;
    }
    for row in &out.aggregate {
        println!(
            "n={} alpha={} runs={} t_stab={} leads={} groups={} segments={} msd={} stabilized={}",
            row.cell.n,
            row.cell.alpha,
            row.runs,
            row.t_stab.mean,
            row.leads.mean,
            row.groups.mean,
            row.segments.mean,
            row.mean_seg_dist
                .map(|m| m.mean.to_string())
                .unwrap_or_default(),
            row.stabilized_frac
        );
    }
    Ok(())
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let overrides = Overrides {
        out: args.out,
        ..Overrides::default()
    };
    let config = Config::resolve(args.config.as_deref(), &overrides)?;
    let input = |source| CliError::Input {
        path: args.file.clone(),
        source,
    };
    let file = File::open(&args.file).map_err(|e| input(SnapshotError::Io(e)))?;
    let snapshots = tables::read_snapshots(file).map_err(input)?;
    create_dir(&config.out)?;
    write_svgs(&config.out, &snapshots, &config, args.overlay)
}

/// Parses `args` (program name first), executes and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Batch(a) => cmd_batch(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
