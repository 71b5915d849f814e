//! Column windows `A P_{n,k}` and the window lower norms built on them.
//!
//! A window of `n` blocks at block offset `k` (block size `s`) holds the
//! scalar columns `k*s + 1 ..= (k+n)*s` together with every row that can
//! carry a nonzero in them. Its smallest singular value is the lower norm of
//! `A` restricted to vectors supported on those columns.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{BandedMatrix, DenseMatrix};
use crate::operator::{block_tridiagonalize, BandOperator, IndexDomain, Scalar};

/// Block size used when none is requested: scalar windows for tridiagonal
/// operators, `w + 1` otherwise.
pub fn default_block_size(a: &BandOperator) -> usize {
    if a.bandwidth() <= 1 {
        1
    } else {
        a.bandwidth() + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowMatrix {
    banded: BandedMatrix,
    /// Window width in blocks.
    pub n: usize,
    /// Block offset.
    pub k: i64,
    pub block_size: usize,
    /// First and last scalar column.
    pub col_lo: i64,
    pub col_hi: i64,
    /// First and last scalar row kept after clipping to the domain.
    pub row_lo: i64,
    pub row_hi: i64,
}

impl WindowMatrix {
    pub fn dense(&self) -> DenseMatrix {
        self.banded.to_dense()
    }

    pub fn banded(&self) -> &BandedMatrix {
        &self.banded
    }

    pub fn rows(&self) -> usize {
        self.banded.rows()
    }

    pub fn cols(&self) -> usize {
        self.banded.cols()
    }

    /// Local row of the entry on the operator's main diagonal in local column 0.
    fn diagonal_row_offset(&self) -> usize {
        (self.col_lo - self.row_lo) as usize
    }

    /// The window of `A - λI`.
    pub fn shifted(&self, lambda: Scalar) -> BandedMatrix {
        let mut m = self.banded.clone();
        let off = self.diagonal_row_offset();
        for c in 0..m.cols() {
            let v = m.get(c + off, c);
            m.set(c + off, c, v - lambda);
        }
        m
    }

    pub fn smallest_singular_value(&self) -> Result<f64> {
        self.banded.smallest_singular_value()
    }
}

/// Window of `n` scalar columns starting after column `k`.
pub fn extract_window(a: &BandOperator, n: usize, k: i64) -> Result<WindowMatrix> {
    extract_block_window(a, n, k, 1)
}

/// Window of `n` blocks of size `s` at block offset `k`.
pub fn extract_block_window(a: &BandOperator, n: usize, k: i64, s: usize) -> Result<WindowMatrix> {
    if n == 0 || s == 0 {
        return Err(Error::Shape {
            rows: 0,
            cols: n * s,
            reason: "window needs at least one column".into(),
        });
    }
    let domain = a.domain();
    let cols = n * s;
    let col_lo = k * s as i64 + 1;
    let col_hi = col_lo + cols as i64 - 1;
    if !domain.contains(col_lo) || !domain.contains(col_hi) {
        return Err(Error::WindowOutOfDomain {
            start: k * s as i64,
            cols,
        });
    }
    let w = a.bandwidth() as i64;
    let row_lo = domain.first().map_or(col_lo - w, |f| f.max(col_lo - w));
    let row_hi = domain.last().map_or(col_hi + w, |l| l.min(col_hi + w));
    let rows = (row_hi - row_lo + 1) as usize;
    let off = col_lo - row_lo;
    let lower = (w + off) as usize;
    let upper = (w - off).max(0) as usize;
    let mut banded = BandedMatrix::zeros(rows, cols, lower, upper);
    for c in 0..cols {
        let j = col_lo + c as i64;
        let i_lo = row_lo.max(j - w);
        let i_hi = row_hi.min(j + w);
        for i in i_lo..=i_hi {
            let v = a.entry_unchecked(i, j);
            if v.re != 0.0 || v.im != 0.0 {
                banded.set((i - row_lo) as usize, c, v);
            }
        }
    }
    Ok(WindowMatrix {
        banded,
        n,
        k,
        block_size: s,
        col_lo,
        col_hi,
        row_lo,
        row_hi,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Block offsets whose windows realise every distinct window over the full
/// offset range: `ℤ` (bi-infinite), `ℕ₀` (semi-infinite) or `0..=N/s - n`
/// (finite).
pub fn window_offsets(a: &BandOperator, n: usize, s: usize) -> Result<Vec<i64>> {
    crate::operator::validate_block_size(a, s)?;
    if n == 0 {
        return Err(Error::Shape {
            rows: 0,
            cols: 0,
            reason: "window width must be positive".into(),
        });
    }
    if let IndexDomain::Finite(size) = a.domain() {
        let blocks = size / s;
        if n > blocks {
            return Err(Error::Shape {
                rows: size,
                cols: n * s,
                reason: format!("window of {n} blocks exceeds the {blocks} available"),
            });
        }
        return Ok((0..=(blocks - n) as i64).collect());
    }
    let period = a
        .period()
        .ok_or_else(|| Error::NotPeriodic("infinite operators need periodic diagonals".into()))?;
    let block_period = (period / gcd(period, s)) as i64;
    let (si, ni, w) = (s as i64, n as i64, a.bandwidth() as i64);
    let semi = a.domain() == IndexDomain::SemiInfinite;

    let mut offsets = BTreeSet::new();
    let mut last_special: Option<i64> = None;
    // Windows clipped by the boundary of a semi-infinite domain.
    if semi {
        let clipped = (w + si - 1) / si;
        offsets.extend(0..clipped);
        if clipped > 0 {
            last_special = Some(clipped - 1);
        }
    }
    // Windows whose rows k*s+1-w ..= (k+n)*s+w meet an override.
    for r in a.override_rows() {
        let hi = (r + w - 1).div_euclid(si);
        let lo = -(-(r - w)).div_euclid(si) - ni;
        let lo = if semi { lo.max(0) } else { lo };
        if lo <= hi {
            offsets.extend(lo..=hi);
            last_special = Some(last_special.map_or(hi, |m| m.max(hi)));
        }
    }
    // One full period of background windows beyond everything above.
    let start = last_special.map_or(0, |m| m + 1);
    offsets.extend(start..start + block_period);
    Ok(offsets.into_iter().collect())
}

/// Precomputed windows of one operator, reusable across spectral shifts.
#[derive(Debug, Clone)]
pub struct WindowFamily {
    windows: Vec<WindowMatrix>,
}

impl WindowFamily {
    pub fn new(a: &BandOperator, n: usize, s: usize) -> Result<Self> {
        let windows = window_offsets(a, n, s)?
            .into_iter()
            .map(|k| extract_block_window(a, n, k, s))
            .collect::<Result<_>>()?;
        Ok(Self { windows })
    }

    pub fn windows(&self) -> &[WindowMatrix] {
        &self.windows
    }

    /// `ν_n(A - λI)`: exact minimum over the family. Windows that cannot
    /// beat the running minimum are rejected with a single Sturm count.
    pub fn lower_norm(&self, lambda: Scalar) -> Result<f64> {
        self.lower_norm_bounded(lambda, f64::INFINITY)
    }

    /// `min(bound, ν_n(A - λI))`.
    pub fn lower_norm_bounded(&self, lambda: Scalar, bound: f64) -> Result<f64> {
        let mut best = bound;
        for w in &self.windows {
            let m = w.shifted(lambda);
            let candidate = if best.is_finite() {
                m.smallest_singular_value_below(best)?
            } else {
                Some(m.smallest_singular_value()?)
            };
            if let Some(v) = candidate {
                best = best.min(v);
            }
        }
        Ok(best)
    }
}

/// `ν_n(A)`: the smallest singular value over all windows of `n` blocks.
pub fn nu_n(a: &BandOperator, n: usize, s: usize) -> Result<f64> {
    WindowFamily::new(a, n, s)?.lower_norm(Scalar::new(0.0, 0.0))
}

/// `μ_n(A) = min(ν_n(A), ν_n(Aᵀ))`.
pub fn mu_n(a: &BandOperator, n: usize, s: usize) -> Result<f64> {
    Ok(nu_n(a, n, s)?.min(nu_n(&a.adjoint(), n, s)?))
}

/// The explicit bound `ε_n` by which `ν_n` may exceed `ν`, for the
/// block-tridiagonal view with block size `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsParams {
    /// Window width in blocks.
    pub n: usize,
    pub block_size: usize,
    pub alpha_norm: f64,
    pub gamma_norm: f64,
    pub eps_n: f64,
}

/// `2 (‖α‖ + ‖γ‖) sin(π / (2(n+1)))`.
pub fn eps_formula(alpha_norm: f64, gamma_norm: f64, n: usize) -> f64 {
    2.0 * (alpha_norm + gamma_norm) * (PI / (2.0 * (n as f64 + 1.0))).sin()
}

pub fn epsilon_n(a: &BandOperator, n: usize, s: usize) -> Result<EpsParams> {
    if n == 0 {
        return Err(Error::Shape {
            rows: 0,
            cols: 0,
            reason: "window width must be positive".into(),
        });
    }
    let (alpha_norm, gamma_norm) = if s == 1 {
        crate::operator::validate_block_size(a, 1)?;
        let sup = a.sup_norms();
        (
            sup.get(&-1).copied().unwrap_or(0.0),
            sup.get(&1).copied().unwrap_or(0.0),
        )
    } else {
        let view = block_tridiagonalize(a, s)?;
        (view.alpha_norm, view.gamma_norm)
    };
    Ok(EpsParams {
        n,
        block_size: s,
        alpha_norm,
        gamma_norm,
        eps_n: eps_formula(alpha_norm, gamma_norm, n),
    })
}
