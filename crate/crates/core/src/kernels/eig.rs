use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::DenseMatrix;
use crate::error::{Error, Result};

const MAX_ORDER: usize = 64;

/// All eigenvalues of a small square complex matrix, with multiplicity, read
/// off the diagonal of its complex Schur form.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    if m.rows() != m.cols() {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
            reason: "eigenvalues need a square matrix".into(),
        });
    }
    if m.rows() > MAX_ORDER {
        return Err(Error::Shape {
            rows: m.rows(),
            cols: m.cols(),
            reason: format!("dense eigensolver is limited to order {MAX_ORDER}"),
        });
    }
    if m.rows() == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let n = m.rows();
    let a = m.to_nalgebra();
    // Shifted QR can stall on highly structured input such as cyclic
    // permutations; retry on unitarily similar copies.
    for attempt in 0..4 {
        let candidate = if attempt == 0 {
            a.clone()
        } else {
            let q = reflector(n, attempt);
            &q * &a * q.adjoint()
        };
        if let Some(schur) = Schur::try_new(candidate, f64::EPSILON, 10_000) {
            let (_, t) = schur.unpack();
            return Ok((0..n).map(|i| t[(i, i)]).collect());
        }
    }
    Err(Error::Numerical("Schur iteration did not converge".into()))
}

/// Householder reflector `I - 2vvᴴ` for a fixed, irregular unit vector `v`.
fn reflector(n: usize, seed: usize) -> DMatrix<Complex64> {
    let v = DVector::from_fn(n, |k, _| {
        let x = (k + 1) as f64 * (seed as f64 + 0.5);
        Complex64::new(x.sin() + 1.5, (1.7 * x).cos())
    });
    let v = &v / Complex64::new(v.norm(), 0.0);
    DMatrix::identity(n, n) - (&v * v.adjoint()) * Complex64::new(2.0, 0.0)
}
