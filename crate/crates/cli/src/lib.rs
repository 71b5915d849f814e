//! Driver behind the `bandspec` binary: loads a task configuration, runs the
//! selected inclusion task for every window width and writes CSV, JSON and
//! SVG artifacts.

pub mod config;
pub mod emit;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use banded_spectra::inclusion::{make_grid, Label, TaskParams, TaskRegistry};
use banded_spectra::kernels::hausdorff_distance;
use banded_spectra::operator::parse_operator;
use banded_spectra::oracles::{component_count, floquet_spectrum, SpectrumCurve};
use serde::Serialize;
use thiserror::Error;

pub use config::{Args, BlockSize, Format, TaskConfig};
pub use emit::{emit_csv, emit_curve_csv, emit_json, emit_svg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    /// Carries the library's message, which already names the failure.
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<banded_spectra::Error> for CliError {
    fn from(e: banded_spectra::Error) -> Self {
        use banded_spectra::Error as E;
        match e {
            E::Numerical(_) | E::Empty(_) | E::IndexOutOfDomain { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleInfo {
    pub t_count: usize,
    pub q: usize,
    pub samples: usize,
    pub max_arc_step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

/// One row per window width.
#[derive(Debug, Clone, Serialize)]
pub struct WidthReport {
    pub n: usize,
    pub block_size: usize,
    pub eps_n: f64,
    pub alpha_norm: f64,
    pub gamma_norm: f64,
    pub superset_cells: usize,
    pub subset_cells: usize,
    /// 4-connected components of the superset; absent when it is empty.
    pub components: Option<usize>,
    /// Hausdorff distance between superset cell centres and the reference
    /// curve; absent without a curve or with an empty superset.
    pub hausdorff: Option<f64>,
    pub min_threshold_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub task: String,
    pub operator: String,
    pub domain: String,
    pub bandwidth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub closed: bool,
    pub grid: GridInfo,
    pub oracle: Option<OracleInfo>,
    pub rows: Vec<WidthReport>,
}

/// Runs a resolved configuration and writes its artifacts.
pub fn run(cfg: &TaskConfig) -> Result<RunReport, CliError> {
    let text = fs::read_to_string(&cfg.operator)
        .map_err(|e| CliError::Config(format!("cannot read operator {}: {e}", cfg.operator.display())))?;
    let a = parse_operator(&text)?;
    let registry = TaskRegistry::with_defaults();
    let task = registry.get(&cfg.task)?;
    let grid = make_grid(cfg.rect, cfg.nx, cfg.ny)?;
    let block = match cfg.block_size {
        BlockSize::Auto => None,
        BlockSize::Fixed(s) => Some(s),
    };
    let pseudo = cfg.task == "pseudospectrum";
    let params = |n| TaskParams {
        n,
        block_size: block,
        eps: cfg.eps,
        closed: if pseudo { cfg.closed } else { true },
    };

    fs::create_dir_all(&cfg.out).map_err(|e| CliError::Io(format!("{}: {e}", cfg.out.display())))?;
    let out_file = |name: String| -> (String, PathBuf) {
        let path = cfg.out.join(&name);
        (name, path)
    };

    let oracle: Option<SpectrumCurve> = if cfg.oracle {
        task.reference_operator(&a, &params(cfg.n_list[0]))
            .map(|r| floquet_spectrum(&r, cfg.t_count))
            .transpose()?
    } else {
        None
    };
    let mut oracle_info = oracle.as_ref().map(|c| OracleInfo {
        t_count: c.t_count,
        q: c.q,
        samples: c.samples.len(),
        max_arc_step: c.max_arc_step(),
        file: None,
    });
    if let (Some(curve), Some(info)) = (&oracle, &mut oracle_info) {
        if cfg.formats.contains(&Format::Csv) {
            let (name, path) = out_file("oracle.csv".into());
            emit_curve_csv(curve, &path)?;
            info.file = Some(name);
        }
    }

    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let start = Instant::now();
        let result = task.run(&a, &params(n), &grid)?;
        let elapsed = start.elapsed().as_secs_f64();
        let superset = result.superset_points();
        let hausdorff = match &oracle {
            Some(curve) if !superset.is_empty() => Some(hausdorff_distance(&superset, &curve.samples)?),
            _ => None,
        };
        let components = if superset.is_empty() { None } else { Some(component_count(&result)?) };
        let stem = format!("{}_n{n}", cfg.task);
        let mut files = Vec::new();
        for format in &cfg.formats {
            match format {
                Format::Csv => {
                    let (name, path) = out_file(format!("{stem}.csv"));
                    emit_csv(&result, &path)?;
                    files.push(name);
                }
                Format::Svg => {
                    let (name, path) = out_file(format!("{stem}.svg"));
                    emit_svg(&result, oracle.as_ref(), &path)?;
                    files.push(name);
                }
                Format::Json => {}
            }
        }
        rows.push(WidthReport {
            n,
            block_size: result.field.block_size,
            eps_n: result.eps_n(),
            alpha_norm: result.eps_params.alpha_norm,
            gamma_norm: result.eps_params.gamma_norm,
            superset_cells: result.superset_count(),
            subset_cells: result.count(Label::Subset),
            components,
            hausdorff,
            min_threshold_distance: result.min_threshold_distance,
            runtime_seconds: cfg.timings.then_some(elapsed),
            files,
        });
    }

    let report = RunReport {
        task: cfg.task.clone(),
        operator: cfg.operator.display().to_string(),
        domain: a.domain().to_string(),
        bandwidth: a.bandwidth(),
        eps: pseudo.then_some(cfg.eps),
        closed: if pseudo { cfg.closed } else { true },
        grid: GridInfo {
            re: [cfg.rect.re_min, cfg.rect.re_max],
            im: [cfg.rect.im_min, cfg.rect.im_max],
            nx: cfg.nx,
            ny: cfg.ny,
            spacing: grid.spacing(),
        },
        oracle: oracle_info,
        rows,
    };
    if cfg.formats.contains(&Format::Json) {
        emit_json(&report, &cfg.out.join("report.json"))?;
    }
    Ok(report)
}

/// Loads the configuration named in `args` and runs it on a pool of the
/// requested size.
pub fn run_args(args: &Args) -> Result<RunReport, CliError> {
    let cfg = TaskConfig::load(args)?;
    match args.threads {
        Some(0) => Err(CliError::Config("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| run(&cfg)),
        None => run(&cfg),
    }
}
