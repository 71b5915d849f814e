use std::path::{Path, PathBuf};

use banded_spectra::inclusion::Rect;
use clap::Parser;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::Config(format!("unknown format \"{other}\" (expected csv, json or svg)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockSize {
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for BlockSize {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "auto" => Ok(BlockSize::Auto),
            n => n
                .parse()
                .map(BlockSize::Fixed)
                .map_err(|_| CliError::Config(format!("block size must be \"auto\" or a positive integer, got \"{n}\""))),
        }
    }
}

/// Command-line arguments. Every option overrides the config file.
#[derive(Debug, Clone, Parser)]
#[command(name = "bandspec", version, about = "Inclusion sets for spectra of banded matrices")]
pub struct Args {
    /// Task configuration file (JSON).
    pub config: PathBuf,
    /// Operator description file, relative to the working directory.
    #[arg(long)]
    pub operator: Option<PathBuf>,
    /// pseudospectrum, spectrum or essential.
    #[arg(long)]
    pub task: Option<String>,
    /// Window widths in blocks, comma separated and ascending.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Use closed (<=) comparisons.
    #[arg(long)]
    pub closed: Option<bool>,
    /// "re_min,re_max,im_min,im_max,nx,ny" or just "nx,ny".
    #[arg(long)]
    pub grid: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Subset of csv,json,svg.
    #[arg(long, value_delimiter = ',')]
    pub formats: Option<Vec<String>>,
    /// Compute the Floquet reference curve when the operator allows it.
    #[arg(long)]
    pub oracle: Option<bool>,
    #[arg(long)]
    pub t_count: Option<usize>,
    /// "auto" or a positive integer.
    #[arg(long)]
    pub block_size: Option<String>,
    /// Leave wall-clock timings out of the JSON report.
    #[arg(long)]
    pub no_timings: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    re: [f64; 2],
    im: [f64; 2],
    nx: usize,
    ny: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum BlockSizeFile {
    Fixed(usize),
    Named(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    operator: Option<PathBuf>,
    task: Option<String>,
    n: Option<Vec<usize>>,
    eps: Option<f64>,
    closed: Option<bool>,
    block_size: Option<BlockSizeFile>,
    grid: Option<GridFile>,
    oracle: Option<bool>,
    t_count: Option<usize>,
    out: Option<PathBuf>,
    formats: Option<Vec<String>>,
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskConfig {
    pub operator: PathBuf,
    pub task: String,
    pub n_list: Vec<usize>,
    pub eps: f64,
    pub closed: bool,
    pub block_size: BlockSize,
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    pub oracle: bool,
    pub t_count: usize,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub timings: bool,
}

pub const DEFAULT_T_COUNT: usize = 1024;
pub const DEFAULT_RESOLUTION: usize = 201;

impl TaskConfig {
    pub fn load(args: &Args) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(&args.config)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
        let base = args.config.parent().unwrap_or(Path::new("."));
        Self::from_parts(&text, base, args)
    }

    /// Merges a config document (paths relative to `base`) with overrides.
    pub fn from_parts(text: &str, base: &Path, args: &Args) -> Result<Self, CliError> {
        let file: ConfigFile = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config: {e}")))?;

        let operator = match (&args.operator, &file.operator) {
            (Some(p), _) => p.clone(),
            (None, Some(p)) => base.join(p),
            (None, None) => return Err(CliError::Config("no operator file given".into())),
        };
        let task = args.task.clone().or(file.task).unwrap_or_else(|| "spectrum".into());
        let n_list = args.n.clone().or(file.n).ok_or_else(|| CliError::Config("missing n".into()))?;
        if n_list.is_empty() || n_list.contains(&0) || n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(format!(
                "n must be a nonempty, strictly ascending list of positive widths, got {n_list:?}"
            )));
        }
        let closed = args.closed.or(file.closed).unwrap_or(false);
        let eps = args.eps.or(file.eps).unwrap_or(0.0);
        if task == "pseudospectrum" && !(eps > 0.0 || (closed && eps == 0.0)) {
            return Err(CliError::Config(format!("pseudospectrum needs eps > 0, got {eps}")));
        }
        let block_size = match (&args.block_size, file.block_size) {
            (Some(s), _) => s.parse()?,
            (None, Some(BlockSizeFile::Fixed(s))) => BlockSize::Fixed(s),
            (None, Some(BlockSizeFile::Named(s))) => s.parse()?,
            (None, None) => BlockSize::Auto,
        };
        if block_size == BlockSize::Fixed(0) {
            return Err(CliError::Config("block size must be positive".into()));
        }

        let (mut rect, mut nx, mut ny) = match file.grid {
            Some(g) => (Rect::new(g.re[0], g.re[1], g.im[0], g.im[1]), g.nx, g.ny),
            None => (Rect::new(-3.0, 3.0, -3.0, 3.0), DEFAULT_RESOLUTION, DEFAULT_RESOLUTION),
        };
        if let Some(spec) = &args.grid {
            let parts = spec
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Config(format!("cannot parse grid \"{spec}\"")))?;
            let count = |x: f64| {
                (x >= 1.0 && x.fract() == 0.0)
                    .then_some(x as usize)
                    .ok_or_else(|| CliError::Config(format!("grid resolution must be a positive integer, got {x}")))
            };
            match parts.as_slice() {
                [a, b, c, d, x, y] => {
                    rect = Rect::new(*a, *b, *c, *d);
                    (nx, ny) = (count(*x)?, count(*y)?);
                }
                [x, y] => (nx, ny) = (count(*x)?, count(*y)?),
                _ => return Err(CliError::Config(format!("grid needs 2 or 6 values, got \"{spec}\""))),
            }
        }
        let rect = rect.map_err(|e| CliError::Config(e.to_string()))?;
        if nx == 0 || ny == 0 {
            return Err(CliError::Config("grid resolution must be positive".into()));
        }

        let formats = match args.formats.clone().or(file.formats) {
            Some(list) => {
                let mut f = list.iter().map(|s| s.parse()).collect::<Result<Vec<Format>, _>>()?;
                f.sort();
                f.dedup();
                f
            }
            None => vec![Format::Csv, Format::Json, Format::Svg],
        };
        let t_count = args.t_count.or(file.t_count).unwrap_or(DEFAULT_T_COUNT);
        if t_count == 0 {
            return Err(CliError::Config("t_count must be positive".into()));
        }

        Ok(TaskConfig {
            operator,
            task,
            n_list,
            eps,
            closed,
            block_size,
            rect,
            nx,
            ny,
            oracle: args.oracle.or(file.oracle).unwrap_or(true),
            t_count,
            out: args.out.clone().or_else(|| file.out.map(|o| base.join(o))).unwrap_or_else(|| "out".into()),
            formats,
            timings: !args.no_timings,
        })
    }
}
