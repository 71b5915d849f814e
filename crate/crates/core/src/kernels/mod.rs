//! Dense small-matrix primitives: extreme singular values, eigenvalues of
//! small complex matrices and the Hausdorff distance between finite point
//! sets.

mod eig;
mod svd;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub use eig::eigenvalues;
pub use svd::{largest_singular_value, smallest_singular_value, smallest_singular_value_below};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from row-major data. Fails on a size mismatch or a
    /// non-finite entry.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape {
                rows,
                cols,
                reason: format!("expected {} entries, got {}", rows * cols, data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numerical("matrix entry is not finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// Compact storage for a matrix whose nonzeros lie on the diagonals
/// `-lower ..= upper` (offset measured as `col - row`).
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    rows: usize,
    cols: usize,
    lower: usize,
    upper: usize,
    data: Vec<Complex64>,
}

impl BandedMatrix {
    pub fn zeros(rows: usize, cols: usize, lower: usize, upper: usize) -> Self {
        Self {
            rows,
            cols,
            lower,
            upper,
            data: vec![Complex64::new(0.0, 0.0); rows * (lower + upper + 1)],
        }
    }

    /// Detects the tightest band containing every nonzero of `m`.
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let (mut lower, mut upper) = (0usize, 0usize);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m.get(i, j) != Complex64::new(0.0, 0.0) {
                    if i > j {
                        lower = lower.max(i - j);
                    } else {
                        upper = upper.max(j - i);
                    }
                }
            }
        }
        let mut b = Self::zeros(m.rows(), m.cols(), lower, upper);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if b.in_band(i, j) {
                    b.set(i, j, m.get(i, j));
                }
            }
        }
        b
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.lower >= i && j <= i + self.upper
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i < self.rows && j < self.cols && self.in_band(i, j) {
            self.data[i * (self.lower + self.upper + 1) + j + self.lower - i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Writes an entry. Panics if `(i, j)` lies outside the stored band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(
            i < self.rows && j < self.cols && self.in_band(i, j),
            "({i}, {j}) outside band"
        );
        let w = self.lower + self.upper + 1;
        self.data[i * w + j + self.lower - i] = value;
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in i.saturating_sub(self.lower)..self.cols.min(i + self.upper + 1) {
                d.set(i, j, self.get(i, j));
            }
        }
        d
    }

    pub fn smallest_singular_value(&self) -> Result<f64> {
        svd::banded_smallest(self, None).map(|v| v.expect("unbounded search always succeeds"))
    }

    /// `Some(σ_min)` if `σ_min < bound`, `None` otherwise.
    pub fn smallest_singular_value_below(&self, bound: f64) -> Result<Option<f64>> {
        svd::banded_smallest(self, Some(bound))
    }

    pub fn largest_singular_value(&self) -> Result<f64> {
        svd::banded_largest(self)
    }
}

/// Finite set of points in the complex plane.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet(pub Vec<Complex64>);

impl PointSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.0
    }
}

impl From<Vec<Complex64>> for PointSet {
    fn from(points: Vec<Complex64>) -> Self {
        Self(points)
    }
}

/// Largest distance from a point of `from` to its nearest neighbour in `to`.
pub fn directed_hausdorff(from: &PointSet, to: &PointSet) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::Empty("Hausdorff distance needs two nonempty sets".into()));
    }
    Ok(from
        .points()
        .par_iter()
        .map(|p| {
            to.points()
                .iter()
                .map(|q| (p - q).norm_sqr())
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max)
        .sqrt())
}

/// Symmetric Hausdorff distance by direct scan.
pub fn hausdorff_distance(p: &PointSet, q: &PointSet) -> Result<f64> {
    Ok(directed_hausdorff(p, q)?.max(directed_hausdorff(q, p)?))
}
