#![allow(dead_code)]

use banded_spectra::operator::{parse_operator, BandOperator, Diagonal, IndexDomain};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn right_shift() -> BandOperator {
    parse_operator(r#"{"domain": "bi", "diagonals": [{"offset": -1, "kind": "constant", "values": [[1, 0]]}]}"#)
        .unwrap()
}

fn three_periodic(domain: &str, beta0: f64) -> BandOperator {
    parse_operator(&format!(
        r#"{{"domain": "{domain}", "diagonals": [
            {{"offset": 0, "kind": "periodic", "values": [[{beta0}, 0], [1, 0], [1, 0]]}},
            {{"offset": 1, "kind": "periodic", "values": [[1, 0], [2, 0], [1, 0]]}}]}}"#
    ))
    .unwrap()
}

/// Main diagonal (-3/2, 1, 1), superdiagonal (1, 2, 1).
pub fn example_b(domain: &str) -> BandOperator {
    three_periodic(domain, -1.5)
}

/// Main diagonal (-1/2, 1, 1), superdiagonal (1, 2, 1).
pub fn example_c(domain: &str) -> BandOperator {
    three_periodic(domain, -0.5)
}

pub fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius));
        if z.norm() <= radius {
            return z;
        }
    }
}

/// Finite tridiagonal matrix with entries of modulus at most one.
pub fn random_tridiagonal(seed: u64, n: usize) -> BandOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diagonals = (-1..=1).map(|d| {
        let values = (0..n).map(|_| random_complex(&mut rng, 1.0)).collect();
        (d, Diagonal::Explicit { start: 1, values })
    });
    BandOperator::new(IndexDomain::Finite(n), diagonals).unwrap()
}

/// Replaces the periodic diagonals of `a` by perturbed ones carrying
/// `overrides` as `(offset, row, value)`.
pub fn with_overrides(a: &BandOperator, overrides: &[(i64, i64, Complex64)]) -> BandOperator {
    let diagonals = a.diagonals().iter().map(|(&d, diag)| {
        let background = match diag {
            Diagonal::Constant(v) => vec![*v],
            Diagonal::Periodic(v) => v.clone(),
            other => panic!("not periodic: {other:?}"),
        };
        let overrides = overrides
            .iter()
            .filter(|(o, _, _)| *o == d)
            .map(|&(_, r, v)| (r, v))
            .collect();
        (d, Diagonal::PerturbedPeriodic { background, overrides })
    });
    BandOperator::new(a.domain(), diagonals).unwrap()
}
