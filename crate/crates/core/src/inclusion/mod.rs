//! Inclusion sets for pseudospectra, spectra and essential spectra on a
//! sampled region of the complex plane.
//!
//! For every grid point `λ` the window norm `μ_n(A - λI)` is compared with
//! two thresholds. Points below `ε` belong to the pseudospectrum of `A`
//! (subset); points below `ε + ε_n` may belong to it (superset). Points
//! above the second threshold are certainly outside.

mod grid;
mod task;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{split_biinfinite, tail_operator, BandOperator, Diagonal, IndexDomain};
use crate::window::{default_block_size, epsilon_n, EpsParams, WindowFamily};

pub use grid::{make_grid, Grid, Rect};
pub use task::{
    EssentialTask, InclusionTask, PseudospectrumTask, SpectrumTask, TaskParams, TaskRegistry,
};

/// `μ_n(A - λI)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuField {
    #[serde(skip)]
    pub grid: Grid,
    pub values: Vec<f64>,
    /// Window width in blocks.
    pub n: usize,
    pub block_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    /// Inside the inner set, hence inside the spectral set itself.
    Subset,
    /// Inside the outer set only.
    SupersetOnly,
    Outside,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Subset => "SUBSET",
            Label::SupersetOnly => "SUPERSET_ONLY",
            Label::Outside => "OUTSIDE",
        }
    }

    pub fn in_superset(&self) -> bool {
        !matches!(self, Label::Outside)
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SUBSET" => Ok(Label::Subset),
            "SUPERSET_ONLY" => Ok(Label::SupersetOnly),
            "OUTSIDE" => Ok(Label::Outside),
            other => Err(Error::Numerical(format!("unknown label {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InclusionResult {
    pub field: MuField,
    pub eps: f64,
    pub eps_params: EpsParams,
    pub labels: Vec<Label>,
    /// Closed (`≤`) rather than open (`<`) comparisons.
    pub closed: bool,
    /// Smallest `|μ_n - threshold|` over all points and both thresholds.
    /// Labels of points closer than the kernel accuracy to a threshold are
    /// not meaningful.
    pub min_threshold_distance: f64,
}

impl InclusionResult {
    pub fn eps_n(&self) -> f64 {
        self.eps_params.eps_n
    }

    pub fn grid(&self) -> &Grid {
        &self.field.grid
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn superset_count(&self) -> usize {
        self.labels.iter().filter(|l| l.in_superset()).count()
    }

    /// Cell centres of every superset point.
    pub fn superset_points(&self) -> crate::kernels::PointSet {
        self.grid()
            .points
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| l.in_superset())
            .map(|(p, _)| *p)
            .collect::<Vec<_>>()
            .into()
    }
}

/// Evaluates `μ_n(A - λI)` at every grid point. Windows are extracted once;
/// each shift only touches their main-diagonal entries.
pub fn mu_n_field(a: &BandOperator, n: usize, s: usize, grid: &Grid) -> Result<MuField> {
    let direct = WindowFamily::new(a, n, s)?;
    let transposed = WindowFamily::new(&a.adjoint(), n, s)?;
    let values = grid
        .points
        .par_iter()
        .map(|&lambda| {
            let v = direct.lower_norm(lambda)?;
            transposed.lower_norm_bounded(lambda, v)
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("window norm is not finite".into()));
    }
    Ok(MuField {
        grid: grid.clone(),
        values,
        n,
        block_size: s,
    })
}

/// Labels each point of `field` against `eps` and `eps + ε_n`.
pub fn classify_pseudospectrum(
    field: &MuField,
    eps: f64,
    eps_params: &EpsParams,
    closed: bool,
) -> Result<InclusionResult> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Threshold(format!("eps must be a nonnegative number, got {eps}")));
    }
    if eps == 0.0 && !closed {
        return Err(Error::Threshold(
            "the open pseudospectrum with eps = 0 is empty; use the closed variant".into(),
        ));
    }
    let outer = eps + eps_params.eps_n;
    let below = |mu: f64, t: f64| if closed { mu <= t } else { mu < t };
    let labels = field
        .values
        .iter()
        .map(|&mu| {
            if below(mu, eps) {
                Label::Subset
            } else if below(mu, outer) {
                Label::SupersetOnly
            } else {
                Label::Outside
            }
        })
        .collect();
    let min_threshold_distance = field
        .values
        .iter()
        .map(|&mu| (mu - eps).abs().min((mu - outer).abs()))
        .fold(f64::INFINITY, f64::min);
    Ok(InclusionResult {
        field: field.clone(),
        eps,
        eps_params: *eps_params,
        labels,
        closed,
        min_threshold_distance,
    })
}

/// Pseudospectrum sandwich for any domain.
pub fn pseudospectrum(
    a: &BandOperator,
    n: usize,
    s: usize,
    eps: f64,
    closed: bool,
    grid: &Grid,
) -> Result<InclusionResult> {
    let params = epsilon_n(a, n, s)?;
    let field = mu_n_field(a, n, s, grid)?;
    classify_pseudospectrum(&field, eps, &params, closed)
}

/// Superset `{λ : μ_n(A - λI) ≤ ε_n}` of the spectrum.
pub fn spectrum_superset(a: &BandOperator, n: usize, s: usize, grid: &Grid) -> Result<InclusionResult> {
    pseudospectrum(a, n, s, 0.0, true, grid)
}

/// Index beyond which a semi-infinite operator agrees with its periodic
/// background on every window of `n` blocks.
pub fn stabilization_index(a: &BandOperator, n: usize, s: usize) -> usize {
    match a.override_rows().last() {
        Some(&r) => (r.max(0) as usize) + n * s + a.bandwidth() + 1,
        None => 0,
    }
}

/// Periodic bi-infinite operator whose windows are the tail windows of a
/// semi-infinite `a`.
pub fn essential_background(a: &BandOperator, n: usize, s: usize) -> Result<BandOperator> {
    if a.diagonals().values().any(|d| matches!(d, Diagonal::Explicit { .. })) {
        return Err(Error::NotPeriodic("explicit diagonals have no periodic tail".into()));
    }
    let tail = tail_operator(a, stabilization_index(a, n, s))?;
    tail.with_domain(IndexDomain::BiInfinite)
}

/// Superset of the essential spectrum: the spectrum superset of the periodic
/// tail. Bi-infinite operators are split at index 0 and the two halves'
/// labels are unioned.
pub fn essential_superset(a: &BandOperator, n: usize, s: usize, grid: &Grid) -> Result<InclusionResult> {
    match a.domain() {
        IndexDomain::SemiInfinite => spectrum_superset(&essential_background(a, n, s)?, n, s, grid),
        IndexDomain::BiInfinite => {
            let (minus, plus) = split_biinfinite(a)?;
            let left = essential_superset(&minus, n, s, grid)?;
            let right = essential_superset(&plus, n, s, grid)?;
            Ok(union(left, right))
        }
        IndexDomain::Finite(_) => Err(Error::WrongDomain {
            expected: "a semi- or bi-infinite operator".into(),
            found: a.domain().to_string(),
        }),
    }
}

/// Point-wise union of two results on the same grid. The field keeps the
/// smaller value and `ε_n` the larger bound.
fn union(left: InclusionResult, right: InclusionResult) -> InclusionResult {
    let pick = |a: Label, b: Label| match (a, b) {
        (Label::Subset, _) | (_, Label::Subset) => Label::Subset,
        (Label::SupersetOnly, _) | (_, Label::SupersetOnly) => Label::SupersetOnly,
        _ => Label::Outside,
    };
    let labels = left.labels.iter().zip(&right.labels).map(|(&a, &b)| pick(a, b)).collect();
    let values = left
        .field
        .values
        .iter()
        .zip(&right.field.values)
        .map(|(a, b)| a.min(*b))
        .collect();
    let eps_params = if left.eps_params.eps_n >= right.eps_params.eps_n {
        left.eps_params
    } else {
        right.eps_params
    };
    InclusionResult {
        field: MuField {
            values,
            ..left.field
        },
        eps: left.eps,
        eps_params,
        labels,
        closed: left.closed,
        min_threshold_distance: left.min_threshold_distance.min(right.min_threshold_distance),
    }
}

/// Block size to use when the caller has no preference.
pub fn resolve_block_size(a: &BandOperator, requested: Option<usize>) -> usize {
    requested.unwrap_or_else(|| default_block_size(a))
}
