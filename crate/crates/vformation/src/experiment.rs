//! Batches of independent runs over a grid of flock sizes and perception
//! angles, with per-run, aggregate and time-series tables.

use rayon::prelude::*;
use vformation_core::metrics::{indicators, indicators_of};
use vformation_core::rng::derive_seed;
use vformation_core::{IndicatorRecord, Params, RunOptions, SimError, SimRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub alpha: f64,
}

/// Which runs of each cell also record the mean segment distance over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesSpec {
    pub every: usize,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSpec {
    pub base: Params,
    pub runs: usize,
    pub base_seed: u64,
    pub grid: Vec<Cell>,
    pub series: Option<SeriesSpec>,
    /// 0 means one per available core, 1 runs everything on the calling thread.
    pub workers: usize,
    pub options: RunOptions,
}

impl BatchSpec {
    pub fn new(base: Params, runs: usize, base_seed: u64, grid: Vec<Cell>) -> Self {
        BatchSpec {
            base,
            runs,
            base_seed,
            grid,
            series: None,
            workers: 0,
            options: RunOptions::default(),
        }
    }

    pub fn cell_params(&self, cell: &Cell) -> Params {
        self.base.with_flock(cell.n, cell.alpha)
    }

    /// Seed of run `run` in grid cell `cell`.
    pub fn seed(&self, cell: usize, run: usize) -> u64 {
        derive_seed(self.base_seed, cell as u64, run as u64)
    }

    /// Runs of `cell` that get a time series, in increasing order.
    pub fn series_runs(&self, cell: usize) -> Vec<usize> {
        let Some(series) = self.series else {
            return Vec::new();
        };
        let mut order: Vec<usize> = (0..self.runs).collect();
        SimRng::new(derive_seed(self.base_seed, cell as u64, u64::MAX)).shuffle(&mut order);
        let mut chosen: Vec<usize> = order.into_iter().take(series.runs).collect();
        chosen.sort_unstable();
        chosen
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("batch needs at least one run")]
    NoRuns,
    #[error("batch grid is empty")]
    EmptyGrid,
    #[error("series interval must be at least 1")]
    SeriesInterval,
    #[error("cell n={n} alpha={alpha}: {source}")]
    Params {
        n: usize,
        alpha: f64,
        source: vformation_core::ParamsError,
    },
    #[error("run {run} of cell n={n} alpha={alpha} (seed {seed}) failed: {source}")]
    Run {
        n: usize,
        alpha: f64,
        run: usize,
        seed: u64,
        source: SimError,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub cell: Cell,
    pub run: usize,
    pub seed: u64,
    pub record: IndicatorRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub cell: Cell,
    pub run: usize,
    pub step: usize,
    pub mean_seg_dist: Option<f64>,
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
}

impl Moments {
    /// Summed in the given order; the deviation is 0 for a single value.
    pub fn of(values: &[f64]) -> Option<Moments> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Moments { mean, std })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub cell: Cell,
    pub runs: usize,
    pub t_stab: Moments,
    pub leads: Moments,
    pub groups: Moments,
    pub segments: Moments,
    /// Over the runs that have a value; `None` if none has.
    pub mean_seg_dist: Option<Moments>,
    pub msd_missing: usize,
    /// Share of runs with `t_stab` below the step limit.
    pub stabilized_frac: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BatchOutput {
    pub runs: Vec<RunRow>,
    pub aggregate: Vec<AggregateRow>,
    pub series: Vec<SeriesRow>,
}

struct Job {
    cell_index: usize,
    run: usize,
    series: bool,
}

type JobResult = Result<(RunRow, Vec<SeriesRow>), BatchError>;

fn run_job(spec: &BatchSpec, job: &Job) -> JobResult {
    let cell = spec.grid[job.cell_index];
    let p = spec.cell_params(&cell);
    let seed = spec.seed(job.cell_index, job.run);
    let every = spec.series.filter(|_| job.series).map(|s| s.every);
    let options = RunOptions {
        snapshot_every: every,
        ..spec.options
    };
    let result = vformation_core::run(p, seed, options).map_err(|source| BatchError::Run {
        n: cell.n,
        alpha: cell.alpha,
        run: job.run,
        seed,
        source,
    })?;
    let mut series = Vec::new();
    if let Some(k) = every {
        // the flock no longer changes once the run ends, so later samples repeat the final state
        let final_msd = indicators(&result, &p).mean_seg_dist;
        for step in (0..=p.steps).step_by(k) {
            let msd = match result.trace.iter().find(|s| s.step == step) {
                Some(snap) => indicators_of(&snap.birds, 0, &p).mean_seg_dist,
                None => final_msd,
            };
            series.push(SeriesRow {
                cell,
                run: job.run,
                step,
                mean_seg_dist: msd,
            });
        }
    }
    let row = RunRow {
        cell,
        run: job.run,
        seed,
        record: indicators(&result, &p),
    };
    Ok((row, series))
}

/// Runs every cell of the grid `spec.runs` times and summarizes.
///
/// Results do not depend on the number of workers. The first failing run in
/// grid order aborts the batch, reporting its seed.
pub fn run_batch(spec: &BatchSpec) -> Result<BatchOutput, BatchError> {
    if spec.runs == 0 {
        return Err(BatchError::NoRuns);
    }
    if spec.grid.is_empty() {
        return Err(BatchError::EmptyGrid);
    }
    if spec.series.is_some_and(|s| s.every == 0) {
        return Err(BatchError::SeriesInterval);
    }
    for cell in &spec.grid {
        spec.cell_params(cell)
            .validate()
            .map_err(|source| BatchError::Params {
                n: cell.n,
                alpha: cell.alpha,
                source,
            })?;
    }

    let mut jobs = Vec::with_capacity(spec.grid.len() * spec.runs);
    for cell_index in 0..spec.grid.len() {
        let with_series = spec.series_runs(cell_index);
        for run in 0..spec.runs {
            jobs.push(Job {
                cell_index,
                run,
                series: with_series.binary_search(&run).is_ok(),
            });
        }
    }

    let results: Vec<JobResult> = if spec.workers == 1 {
        jobs.iter().map(|job| run_job(spec, job)).collect()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()?
            .install(|| jobs.par_iter().map(|job| run_job(spec, job)).collect())
    };

    let mut out = BatchOutput::default();
    for result in results {
        let (row, series) = result?;
        out.runs.push(row);
        out.series.extend(series);
    }
    out.aggregate = summarize(&out.runs, spec.base.steps);
    Ok(out)
}

/// One aggregate row per cell, in order of first appearance.
pub fn summarize(rows: &[RunRow], steps: usize) -> Vec<AggregateRow> {
    let mut cells: Vec<Cell> = Vec::new();
    for row in rows {
        if !cells.contains(&row.cell) {
            cells.push(row.cell);
        }
    }
    cells
        .into_iter()
        .map(|cell| {
            let rows: Vec<&RunRow> = rows.iter().filter(|r| r.cell == cell).collect();
            let column = |f: fn(&IndicatorRecord) -> usize| -> Moments {
                let values: Vec<f64> = rows.iter().map(|r| f(&r.record) as f64).collect();
                Moments::of(&values).expect("cell has rows")
            };
            let msd: Vec<f64> = rows.iter().filter_map(|r| r.record.mean_seg_dist).collect();
            let stabilized = rows.iter().filter(|r| r.record.t_stab < steps).count();
            AggregateRow {
                cell,
                runs: rows.len(),
                t_stab: column(|r| r.t_stab),
                leads: column(|r| r.leads),
                groups: column(|r| r.groups),
                segments: column(|r| r.segments),
                mean_seg_dist: Moments::of(&msd),
                msd_missing: rows.len() - msd.len(),
                stabilized_frac: stabilized as f64 / rows.len() as f64,
            }
        })
        .collect()
}
