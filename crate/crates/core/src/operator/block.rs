use std::collections::BTreeSet;

use super::{BandOperator, IndexDomain};
use crate::error::{Error, Result};
use crate::kernels::{largest_singular_value, DenseMatrix};

/// A band operator regrouped into `s x s` blocks. Block `K` covers the scalar
/// indices `K*s + 1 ..= K*s + s`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockView {
    pub source: BandOperator,
    pub block_size: usize,
    /// `sup_K ‖A_{K+1,K}‖₂`.
    pub alpha_norm: f64,
    /// `sup_K ‖A_{K,K}‖₂`.
    pub beta_norm: f64,
    /// `sup_K ‖A_{K-1,K}‖₂`.
    pub gamma_norm: f64,
}

impl BlockView {
    /// Dense `s x s` block at block row `row`, block column `col`.
    pub fn block(&self, row: i64, col: i64) -> DenseMatrix {
        block_matrix(&self.source, self.block_size, row, col)
    }
}

fn block_matrix(a: &BandOperator, s: usize, row: i64, col: i64) -> DenseMatrix {
    let s_i = s as i64;
    let mut m = DenseMatrix::zeros(s, s);
    for r in 0..s {
        for c in 0..s {
            let i = row * s_i + 1 + r as i64;
            let j = col * s_i + 1 + c as i64;
            if a.domain().contains(i) && a.domain().contains(j) {
                m.set(r, c, a.entry_unchecked(i, j));
            }
        }
    }
    m
}

/// Checks `s >= max(w, 1)` and, on finite domains, `s | N`.
pub(crate) fn validate_block_size(a: &BandOperator, s: usize) -> Result<()> {
    if s == 0 || s < a.bandwidth() {
        return Err(Error::BlockSize {
            block: s,
            reason: format!("must be at least max(bandwidth, 1) = {}", a.bandwidth().max(1)),
        });
    }
    if let IndexDomain::Finite(n) = a.domain() {
        if n % s != 0 {
            let admissible: Vec<String> = (a.bandwidth().max(1)..=n)
                .filter(|d| n % d == 0)
                .map(|d| d.to_string())
                .collect();
            return Err(Error::BlockSize {
                block: s,
                reason: format!("must divide N = {n}; admissible sizes: {}", admissible.join(", ")),
            });
        }
    }
    Ok(())
}

/// Block columns `K` whose neighbouring blocks realise every distinct block
/// triple of the operator.
fn representative_blocks(a: &BandOperator, s: usize) -> Vec<i64> {
    let s_i = s as i64;
    let (first, last) = match a.domain() {
        IndexDomain::Finite(n) => return (0..(n / s) as i64).collect(),
        IndexDomain::SemiInfinite => (Some(0), None),
        IndexDomain::BiInfinite => (None, None),
    };
    let period = a.period().expect("infinite domains carry periodic diagonals");
    let block_period = (period / gcd(period, s)) as i64;
    let mut ks = BTreeSet::new();
    let mut anchor = first.unwrap_or(0);
    let overrides = a.override_rows();
    for &r in &overrides {
        let k = (r - 1).div_euclid(s_i);
        for kk in k - 1..=k + 1 {
            ks.insert(kk);
        }
        anchor = anchor.max(k + 2);
    }
    // Boundary blocks of a semi-infinite operator see clipped neighbours.
    if first.is_some() {
        ks.insert(0);
        anchor = anchor.max(1);
    }
    for k in anchor..anchor + block_period {
        ks.insert(k);
    }
    ks.into_iter()
        .filter(|&k| first.is_none_or(|f| k >= f) && last.is_none_or(|l: i64| k <= l))
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Regroups `a` as a block-tridiagonal operator with `s x s` blocks and
/// computes the exact supremum of the spectral norms of its three block
/// diagonals.
pub fn block_tridiagonalize(a: &BandOperator, s: usize) -> Result<BlockView> {
    validate_block_size(a, s)?;
    let blocks = representative_blocks(a, s);
    let valid = |k: i64| match a.domain() {
        IndexDomain::Finite(n) => k >= 0 && k < (n / s) as i64,
        IndexDomain::SemiInfinite => k >= 0,
        IndexDomain::BiInfinite => true,
    };
    let (mut alpha, mut beta, mut gamma) = (0.0f64, 0.0f64, 0.0f64);
    for &k in &blocks {
        beta = beta.max(largest_singular_value(&block_matrix(a, s, k, k))?);
        if valid(k + 1) {
            alpha = alpha.max(largest_singular_value(&block_matrix(a, s, k + 1, k))?);
        }
        if valid(k - 1) {
            gamma = gamma.max(largest_singular_value(&block_matrix(a, s, k - 1, k))?);
        }
    }
    Ok(BlockView {
        source: a.clone(),
        block_size: s,
        alpha_norm: alpha,
        beta_norm: beta,
        gamma_norm: gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Diagonal;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn shift_scalar_blocks() {
        let s = BandOperator::new(IndexDomain::BiInfinite, [(-1, Diagonal::Constant(c(1.0)))]).unwrap();
        let v = block_tridiagonalize(&s, 1).unwrap();
        assert_eq!((v.alpha_norm, v.gamma_norm), (1.0, 0.0));
    }

    #[test]
    fn rejects_small_or_non_dividing_blocks() {
        let penta = BandOperator::new(
            IndexDomain::Finite(10),
            (-2..=2).map(|d| (d, Diagonal::Constant(c(1.0)))),
        )
        .unwrap();
        assert!(block_tridiagonalize(&penta, 1).is_err());
        let err = block_tridiagonalize(&penta, 3).unwrap_err();
        assert!(err.to_string().contains("admissible sizes: 2, 5, 10"), "{err}");
        assert!(block_tridiagonalize(&penta, 5).is_ok());
    }

    #[test]
    fn block_structure_is_tridiagonal() {
        let penta = BandOperator::new(
            IndexDomain::BiInfinite,
            (-2..=2).map(|d| (d, Diagonal::Constant(c(1.0)))),
        )
        .unwrap();
        let v = block_tridiagonalize(&penta, 3).unwrap();
        for off in [2, -2, 3] {
            let b = v.block(off, 0);
            assert!(b.as_slice().iter().all(|z| z.norm() == 0.0));
        }
    }
}
