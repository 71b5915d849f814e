//! Reference data for validating inclusion sets: Floquet–Bloch spectra of
//! periodic operators, dense finite oracles, connected components and
//! Hausdorff convergence reports.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inclusion::{spectrum_superset, Grid, InclusionResult};
use crate::kernels::{eigenvalues, hausdorff_distance, DenseMatrix, PointSet};
use crate::operator::{BandOperator, Diagonal, IndexDomain};

/// Largest order accepted by [`dense_finite_oracle`].
pub const DENSE_ORACLE_MAX: usize = 512;

/// Eigenvalues of the Floquet–Bloch symbol sampled at `t_count` uniformly
/// spaced quasimomenta.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    /// `q` eigenvalues per quasimomentum, grouped by `t`.
    pub samples: PointSet,
    pub t_count: usize,
    /// Symbol block size.
    pub q: usize,
}

impl SpectrumCurve {
    /// Eigenvalues of `a(t_j)`.
    pub fn at(&self, j: usize) -> &[Complex64] {
        &self.samples.points()[j * self.q..(j + 1) * self.q]
    }

    /// Largest distance from a sample to the nearest sample at the next
    /// quasimomentum: an estimate of the largest gap along the curve.
    pub fn max_arc_step(&self) -> f64 {
        (0..self.t_count)
            .flat_map(|j| {
                let next = self.at((j + 1) % self.t_count);
                self.at(j).iter().map(move |z| {
                    next.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
                })
            })
            .fold(0.0, f64::max)
    }
}

fn period_block_size(a: &BandOperator) -> Result<usize> {
    let p = a
        .period()
        .ok_or_else(|| Error::NotPeriodic("explicit diagonals have no symbol".into()))?;
    let w = a.bandwidth().max(1);
    Ok(w.div_ceil(p) * p)
}

/// The `q x q` block at block row `row`, block column `col` of a
/// bi-infinite operator.
fn symbol_block(a: &BandOperator, q: usize, row: i64, col: i64) -> DenseMatrix {
    let qi = q as i64;
    let mut m = DenseMatrix::zeros(q, q);
    for r in 0..q {
        for c in 0..q {
            let i = row * qi + 1 + r as i64;
            let j = col * qi + 1 + c as i64;
            m.set(r, c, a.entry_unchecked(i, j));
        }
    }
    m
}

/// Samples the spectrum of a periodic bi-infinite operator as the union of
/// the eigenvalues of `a(t) = A₋₁e^{-it} + A₀ + A₊₁e^{it}` over
/// `t = 2πj / t_count`.
pub fn floquet_spectrum(a: &BandOperator, t_count: usize) -> Result<SpectrumCurve> {
    if a.domain() != IndexDomain::BiInfinite {
        return Err(Error::WrongDomain {
            expected: "a bi-infinite operator".into(),
            found: a.domain().to_string(),
        });
    }
    if a.diagonals().values().any(|d| matches!(d, Diagonal::PerturbedPeriodic { .. })) {
        return Err(Error::NotPeriodic("remove the overrides before computing the symbol".into()));
    }
    if !a.is_periodic() {
        return Err(Error::NotPeriodic("every diagonal must be constant or periodic".into()));
    }
    if t_count == 0 {
        return Err(Error::Empty("t_count must be positive".into()));
    }
    let q = period_block_size(a)?;
    let sub = symbol_block(a, q, 1, 0);
    let main = symbol_block(a, q, 0, 0);
    let sup = symbol_block(a, q, -1, 0);
    let per_t = (0..t_count)
        .into_par_iter()
        .map(|j| {
            let t = 2.0 * PI * j as f64 / t_count as f64;
            let (e_minus, e_plus) = (Complex64::from_polar(1.0, -t), Complex64::from_polar(1.0, t));
            let data = main
                .as_slice()
                .iter()
                .zip(sub.as_slice())
                .zip(sup.as_slice())
                .map(|((&m0, &m1), &p1)| m1 * e_minus + m0 + p1 * e_plus)
                .collect();
            eigenvalues(&DenseMatrix::from_row_major(q, q, data)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<Complex64> = per_t.into_iter().flatten().collect();
    if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("symbol eigenvalue is not finite".into()));
    }
    Ok(SpectrumCurve {
        samples: samples.into(),
        t_count,
        q,
    })
}

/// `σ_min(A - λI)` of a finite operator by a dense SVD.
pub fn dense_finite_oracle(a: &BandOperator, lambda: Complex64) -> Result<f64> {
    let n = match a.domain() {
        IndexDomain::Finite(n) => n,
        other => {
            return Err(Error::WrongDomain {
                expected: "a finite operator".into(),
                found: other.to_string(),
            })
        }
    };
    if n > DENSE_ORACLE_MAX {
        return Err(Error::Shape {
            rows: n,
            cols: n,
            reason: format!("dense oracle is limited to N <= {DENSE_ORACLE_MAX}"),
        });
    }
    let mut m = a.dense_section(1, n as i64).to_nalgebra();
    for i in 0..n {
        m[(i, i)] -= lambda;
    }
    m.singular_values()
        .iter()
        .copied()
        .reduce(f64::min)
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Numerical("dense SVD failed".into()))
}

/// Number of 4-connected components of superset cells.
pub fn component_count(result: &InclusionResult) -> Result<usize> {
    let grid = result.grid();
    let inside: Vec<bool> = result.labels.iter().map(|l| l.in_superset()).collect();
    if !inside.iter().any(|&b| b) {
        return Err(Error::Empty("no superset cells".into()));
    }
    let mut seen = vec![false; inside.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for start in 0..inside.len() {
        if !inside[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(idx) = queue.pop_front() {
            let (ix, iy) = grid.coords(idx);
            let mut visit = |jx: usize, jy: usize| {
                let j = grid.index(jx, jy);
                if inside[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            };
            if ix > 0 {
                visit(ix - 1, iy);
            }
            if ix + 1 < grid.nx {
                visit(ix + 1, iy);
            }
            if iy > 0 {
                visit(ix, iy - 1);
            }
            if iy + 1 < grid.ny {
                visit(ix, iy + 1);
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub eps_n: f64,
    pub hausdorff: f64,
    pub superset_cells: usize,
    pub subset_cells: usize,
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
}

/// Compares one inclusion result with an oracle curve.
pub fn convergence_row(result: &InclusionResult, oracle: &SpectrumCurve, runtime_seconds: f64) -> Result<ConvergenceRow> {
    Ok(ConvergenceRow {
        n: result.field.n,
        eps_n: result.eps_n(),
        hausdorff: hausdorff_distance(&result.superset_points(), &oracle.samples)?,
        superset_cells: result.superset_count(),
        subset_cells: result.count(crate::inclusion::Label::Subset),
        runtime_seconds,
    })
}

/// Spectrum supersets for every `n` in `n_list` and their Hausdorff distance
/// to `oracle`.
pub fn convergence_report(
    a: &BandOperator,
    n_list: &[usize],
    s: usize,
    grid: &Grid,
    oracle: &SpectrumCurve,
) -> Result<ConvergenceReport> {
    if oracle.samples.is_empty() {
        return Err(Error::Empty("oracle has no samples".into()));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Shape {
            rows: 0,
            cols: n_list.len(),
            reason: "window widths must be nonempty and strictly ascending".into(),
        });
    }
    let rows = n_list
        .iter()
        .map(|&n| {
            let start = Instant::now();
            let result = spectrum_superset(a, n, s, grid)?;
            convergence_row(&result, oracle, start.elapsed().as_secs_f64())
        })
        .collect::<Result<_>>()?;
    Ok(ConvergenceReport { rows })
}
