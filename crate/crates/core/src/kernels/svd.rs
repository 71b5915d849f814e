//! Extreme singular values of banded matrices.
//!
//! The matrix is reduced to square upper-triangular band form with Givens
//! QR, the band is then narrowed to upper bidiagonal form by bulge chasing,
//! and the singular values are located by bisection on Sturm counts of the
//! Golub-Kahan tridiagonal `[[0, B], [B^T, 0]]`. Every step is unitary, so
//! the computed values are exact for a matrix within a few ulps of `‖M‖`.

use num_complex::Complex64;

use super::{BandedMatrix, DenseMatrix};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn smallest_singular_value(m: &DenseMatrix) -> Result<f64> {
    BandedMatrix::from_dense(m).smallest_singular_value()
}

/// `Some(σ_min(m))` when it is strictly below `bound`.
pub fn smallest_singular_value_below(m: &DenseMatrix, bound: f64) -> Result<Option<f64>> {
    BandedMatrix::from_dense(m).smallest_singular_value_below(bound)
}

pub fn largest_singular_value(m: &DenseMatrix) -> Result<f64> {
    if m.rows() < m.cols() {
        return BandedMatrix::from_dense(&m.transpose()).largest_singular_value();
    }
    BandedMatrix::from_dense(m).largest_singular_value()
}

pub(super) fn banded_smallest(m: &BandedMatrix, bound: Option<f64>) -> Result<Option<f64>> {
    if m.rows() < m.cols() {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
            reason: "smallest singular value needs rows >= cols".into(),
        });
    }
    let bidiag = Bidiagonal::reduce(m)?;
    match bidiag.smallest(bound.map(|b| b / bidiag.unit)) {
        Some(v) => bidiag.unscale(v).map(Some),
        None => Ok(None),
    }
}

pub(super) fn banded_largest(m: &BandedMatrix) -> Result<f64> {
    if m.rows() < m.cols() {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
            reason: "transpose before reducing a wide matrix".into(),
        });
    }
    let bidiag = Bidiagonal::reduce(m)?;
    bidiag.unscale(bidiag.largest())
}

/// Complex Givens rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    let abs_a = a.norm();
    if abs_a == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let norm = abs_a.hypot(b.norm());
    let phase = a / abs_a;
    (abs_a / norm, phase * b.conj() / norm)
}

/// Square band workspace with room for one bulge below the diagonal and one
/// above the widest band.
struct Work {
    lower: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl Work {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.lower >= i && j + self.lower - i < self.width);
        i * self.width + j + self.lower - i
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        if j + self.lower < i || j + self.lower - i >= self.width {
            ZERO
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Row rotation on rows `p < q` over columns `cols`.
    #[inline]
    fn rotate_rows(&mut self, p: usize, q: usize, c: f64, s: Complex64, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            let x = self.get(p, j);
            let y = self.get(q, j);
            let top = x * c + s * y;
            let bottom = -s.conj() * x + y * c;
            let (ip, iq) = (self.idx(p, j), self.idx(q, j));
            self.data[ip] = top;
            self.data[iq] = bottom;
        }
    }

    /// Column rotation on columns `j - 1, j` over rows `rows`, built so that
    /// the row pair `(a, b)` of the first row maps to `(r, 0)`.
    #[inline]
    fn rotate_cols(&mut self, j: usize, c: f64, s: Complex64, rows: std::ops::RangeInclusive<usize>) {
        for r in rows {
            let x = self.get(r, j - 1);
            let y = self.get(r, j);
            let left = x * c + y * s.conj();
            let right = -x * s + y * c;
            let (il, ir) = (self.idx(r, j - 1), self.idx(r, j));
            self.data[il] = left;
            self.data[ir] = right;
        }
    }
}

/// Real upper bidiagonal with the same singular values as the input.
pub(crate) struct Bidiagonal {
    /// Off-diagonals of the Golub-Kahan tridiagonal, squared:
    /// `d1², e1², d2², ..., dn²`.
    gk_sq: Vec<f64>,
    n: usize,
    scale: f64,
    pivmin: f64,
    d_first: f64,
    d_last: f64,
    /// Power of two the input was divided by before the reduction.
    unit: f64,
}

impl Bidiagonal {
    pub(crate) fn reduce(m: &BandedMatrix) -> Result<Self> {
        let (rows, n) = (m.rows(), m.cols());
        let lower = m.lower().min(rows.saturating_sub(1));
        let upper = m.upper().min(n.saturating_sub(1));
        let band = lower + upper;
        let work_lower = lower.max(1);
        let width = work_lower + band + 2;
        let mut w = Work {
            lower: work_lower,
            width,
            data: vec![ZERO; rows * width],
        };
        for i in 0..rows {
            for j in i.saturating_sub(lower)..n.min(i + upper + 1) {
                let v = m.get(i, j);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Numerical("matrix entry is not finite".into()));
                }
                let k = w.idx(i, j);
                w.data[k] = v;
            }
        }
        // Scale by a power of two (exact) so squared norms cannot overflow.
        let amax = w.data.iter().fold(0.0f64, |acc, z| acc.max(z.re.abs()).max(z.im.abs()));
        let unit = if amax > 0.0 { 2f64.powi(amax.log2().ceil() as i32) } else { 1.0 };
        if unit != 1.0 {
            for z in &mut w.data {
                *z /= unit;
            }
        }

        // Givens QR, bottom-up within each column. Fill stays within `band`.
        for c in 0..n {
            let last = (c + lower).min(rows - 1);
            let col_hi = (c + band).min(n - 1);
            for r in (c + 1..=last).rev() {
                let b = w.get(r, c);
                if b == ZERO {
                    continue;
                }
                let (cs, sn) = givens(w.get(r - 1, c), b);
                w.rotate_rows(r - 1, r, cs, sn, c..=col_hi);
                let k = w.idx(r, c);
                w.data[k] = ZERO;
            }
        }

        // Narrow the upper band one diagonal at a time, chasing each bulge
        // off the bottom-right corner.
        for bw in (2..=band).rev() {
            for i in 0..n {
                let (mut row, mut col) = (i, i + bw);
                while col < n {
                    let b = w.get(row, col);
                    if b == ZERO {
                        break;
                    }
                    let (cs, sn) = givens(w.get(row, col - 1).conj(), b.conj());
                    w.rotate_cols(col, cs, sn, row..=col);
                    let k = w.idx(row, col);
                    w.data[k] = ZERO;

                    let bulge = w.get(col, col - 1);
                    if bulge == ZERO {
                        break;
                    }
                    let (cs, sn) = givens(w.get(col - 1, col - 1), bulge);
                    w.rotate_rows(col - 1, col, cs, sn, col - 1..=(col + bw).min(n - 1));
                    let k = w.idx(col, col - 1);
                    w.data[k] = ZERO;

                    row = col - 1;
                    col += bw;
                }
            }
        }

        let mut gk_sq = Vec::with_capacity(2 * n - 1);
        let mut scale = 0.0f64;
        for i in 0..n {
            let d = w.get(i, i).norm();
            gk_sq.push(d * d);
            scale = scale.max(d);
            if i + 1 < n {
                let e = w.get(i, i + 1).norm();
                gk_sq.push(e * e);
                scale = scale.max(e);
            }
        }
        let d_first = gk_sq[0].sqrt();
        let d_last = gk_sq[2 * n - 2].sqrt();
        let pivmin = f64::MIN_POSITIVE * (scale * scale).max(1.0);
        Ok(Self {
            gk_sq,
            n,
            scale,
            pivmin,
            d_first,
            d_last,
            unit,
        })
    }

    fn unscale(&self, v: f64) -> Result<f64> {
        let v = v * self.unit;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numerical("singular value overflows f64".into()))
        }
    }

    /// Number of singular values strictly below `x > 0`.
    #[inline]
    fn count_below(&self, x: f64) -> usize {
        let mut q = -x;
        let mut negatives = 1usize;
        for &t in &self.gk_sq {
            q = -x - t / q;
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                negatives += 1;
            }
        }
        // The tridiagonal has eigenvalues ±σ_i; n of them are ≤ -σ_i < x.
        negatives.saturating_sub(self.n)
    }

    fn tolerance(&self, hi: f64) -> f64 {
        (4.0 * f64::EPSILON * hi).max(1e-19 * self.scale).max(self.pivmin)
    }

    pub(crate) fn smallest(&self, bound: Option<f64>) -> Option<f64> {
        if self.n == 1 {
            return Some(self.d_first).filter(|&d| bound.is_none_or(|b| d < b));
        }
        if self.scale == 0.0 {
            return match bound {
                Some(b) if b <= 0.0 => None,
                _ => Some(0.0),
            };
        }
        let mut hi = self.d_first.min(self.d_last) * (1.0 + 8.0 * f64::EPSILON) + self.pivmin;
        if let Some(b) = bound {
            if b <= 0.0 {
                return None;
            }
            if b <= hi {
                if self.count_below(b) == 0 {
                    return None;
                }
                hi = b;
            }
        }
        if self.count_below(hi) == 0 {
            hi = 2.0 * self.scale + self.pivmin;
        }
        let mut lo = 0.0;
        while hi - lo > self.tolerance(hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    pub(crate) fn largest(&self) -> f64 {
        if self.n == 1 || self.scale == 0.0 {
            return self.d_first;
        }
        let mut lo = self.scale * (1.0 - 8.0 * f64::EPSILON);
        let mut hi = 2.0 * self.scale * (1.0 + 8.0 * f64::EPSILON);
        while hi - lo > self.tolerance(hi) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= self.n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
