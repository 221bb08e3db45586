//! Run configuration: built-in defaults, then a `key = value` file, then
//! command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use vformation_core::Params;

use crate::experiment::Cell;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid value for `{key}`: {value:?}")]
    Value { key: String, value: String },
    #[error(transparent)]
    Params(#[from] vformation_core::ParamsError),
    #[error("{0}")]
    Invalid(String),
}

/// Indicator recorded over time in series mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesIndicator {
    MeanSegmentDistance,
}

impl FromStr for SeriesIndicator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "msd" | "mean_seg_dist" => Ok(SeriesIndicator::MeanSegmentDistance),
            other => Err(format!("unknown series indicator {other:?} (expected msd)")),
        }
    }
}

impl fmt::Display for SeriesIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("msd")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: Params,
    pub seed: u64,
    pub runs: usize,
    /// Empty means the single cell `(params.birds, params.perception_angle)`.
    pub grid: Vec<Cell>,
    pub out: PathBuf,
    pub snapshot_every: usize,
    pub series: Option<SeriesIndicator>,
    pub series_every: usize,
    pub series_runs: usize,
    /// 0 means one per available core.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            params: Params::default(),
            seed: 1,
            runs: 200,
            grid: Vec::new(),
            out: PathBuf::from("out"),
            snapshot_every: 40,
            series: None,
            series_every: 10,
            series_runs: 10,
            workers: 0,
        }
    }
}

/// Values given on the command line. `None` leaves the lower layers alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub alpha: Option<f64>,
    pub t: Option<usize>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub grid: Option<Vec<Cell>>,
    pub out: Option<PathBuf>,
    pub snapshot_every: Option<usize>,
    pub series: Option<SeriesIndicator>,
    pub series_every: Option<usize>,
    pub series_runs: Option<usize>,
    pub workers: Option<usize>,
}

/// Parses `n:alpha` pairs separated by commas, e.g. `15:180,15:170`.
pub fn parse_grid(s: &str) -> Result<Vec<Cell>, String> {
    let cells = s
        .split(',')
        .map(|item| {
            let (n, alpha) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("grid cell {item:?} is not n:alpha"))?;
            let n = n
                .trim()
                .parse()
                .map_err(|_| format!("bad bird count in {item:?}"))?;
            let alpha = alpha
                .trim()
                .parse()
                .map_err(|_| format!("bad angle in {item:?}"))?;
            Ok(Cell { n, alpha })
        })
        .collect::<Result<Vec<_>, String>>()?;
    if cells.is_empty() {
        return Err("empty grid".into());
    }
    Ok(cells)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Value {
        key: key.into(),
        value: value.into(),
    })
}

impl Config {
    /// Applies the `key = value` lines of a config file. Blank lines and
    /// everything after `#` are ignored.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: idx + 1,
                message: format!("expected `key = value`, found {line:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            self.set(key, value).map_err(|e| match e {
                ConfigError::Invalid(message) => ConfigError::Syntax {
                    line: idx + 1,
                    message,
                },
                e => e,
            })?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_file_contents(&text)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        match key {
            "l" => p.upwash_width = parse(key, value)?,
            "d" => p.wash_depth = parse(key, value)?,
            "w" => p.wingspan = parse(key, value)?,
            "dx" => p.lateral_step = parse(key, value)?,
            "dy" => p.longitudinal_step = parse(key, value)?,
            "eps" => p.collision_margin = parse(key, value)?,
            "alpha" => p.perception_angle = parse(key, value)?,
            "n" => p.birds = parse(key, value)?,
            "t" | "T" => p.steps = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "runs" => self.runs = parse(key, value)?,
            "grid" => self.grid = parse_grid(value).map_err(ConfigError::Invalid)?,
            "out" => self.out = PathBuf::from(value),
            "snapshot_every" => self.snapshot_every = parse(key, value)?,
            "series" => self.series = Some(value.parse().map_err(ConfigError::Invalid)?),
            "series_every" => self.series_every = parse(key, value)?,
            "series_runs" => self.series_runs = parse(key, value)?,
            "workers" => self.workers = parse(key, value)?,
            other => return Err(ConfigError::Invalid(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        let p = &mut self.params;
        if let Some(n) = o.n {
            p.birds = n;
        }
        if let Some(alpha) = o.alpha {
            p.perception_angle = alpha;
        }
        if let Some(t) = o.t {
            p.steps = t;
        }
        macro_rules! take {
            ($($field:ident),*) => {$(
                if let Some(v) = &o.$field {
                    self.$field = v.clone().into();
                }
            )*};
        }
        take!(
            seed,
            runs,
            grid,
            out,
            snapshot_every,
            series,
            series_every,
            series_runs,
            workers
        );
    }

    /// Defaults, then the optional file, then the overrides; validated.
    pub fn resolve(file: Option<&Path>, overrides: &Overrides) -> Result<Self, ConfigError> {
        let mut config = Config::default();
        if let Some(path) = file {
            config.apply_file(path)?;
        }
        config.apply_overrides(overrides);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.validate()?;
        for cell in &self.grid {
            Params {
                birds: cell.n,
                perception_angle: cell.alpha,
                ..self.params
            }
            .validate()?;
        }
        let positive = [
            ("runs", self.runs),
            ("snapshot_every", self.snapshot_every),
            ("series_every", self.series_every),
            ("series_runs", self.series_runs),
        ];
        for (key, value) in positive {
            if value == 0 {
                return Err(ConfigError::Invalid(format!("`{key}` must be at least 1")));
            }
        }
        Ok(())
    }

    /// Grid cells to run, falling back to the configured flock.
    pub fn cells(&self) -> Vec<Cell> {
        if self.grid.is_empty() {
            vec![Cell {
                n: self.params.birds,
                alpha: self.params.perception_angle,
            }]
        } else {
            self.grid.clone()
        }
    }
}
