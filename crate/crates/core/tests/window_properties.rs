mod common;

use banded_spectra::operator::{BandOperator, Diagonal, IndexDomain};
use banded_spectra::oracles::dense_finite_oracle;
use banded_spectra::window::{
    default_block_size, eps_formula, epsilon_n, extract_block_window, mu_n, nu_n, window_offsets,
};
use common::{example_b, example_c, random_tridiagonal, with_overrides};
use num_complex::Complex64;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Bi- or semi-infinite operator with periodic or perturbed diagonals of
/// bandwidth at most two.
fn infinite_operator() -> impl Strategy<Value = BandOperator> {
    let diagonal = prop_oneof![
        prop::collection::vec(scalar(), 1..4).prop_map(Diagonal::Periodic),
        (prop::collection::vec(scalar(), 1..4), prop::collection::btree_map(-8i64..8, scalar(), 1..3))
            .prop_map(|(background, overrides)| Diagonal::PerturbedPeriodic { background, overrides }),
    ];
    (prop::bool::ANY, prop::collection::btree_map(-2i64..=2, diagonal, 1..4)).prop_map(|(bi, d)| {
        let domain = if bi { IndexDomain::BiInfinite } else { IndexDomain::SemiInfinite };
        BandOperator::new(domain, d).unwrap()
    })
}

fn brute_force(a: &BandOperator, n: usize, s: usize) -> f64 {
    let p = a.period().unwrap() as i64;
    let reach = 3 * p + n as i64 + 12;
    let lo = if a.domain() == IndexDomain::SemiInfinite { 0 } else { -reach };
    (lo..=reach)
        .map(|k| extract_block_window(a, n, k, s).unwrap().smallest_singular_value().unwrap())
        .fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn offset_reduction_matches_brute_force(a in infinite_operator(), n in 1usize..6) {
        let s = default_block_size(&a);
        let reduced = nu_n(&a, n, s).unwrap();
        prop_assert!((reduced - brute_force(&a, n, s)).abs() < 1e-12);
    }

    #[test]
    fn lower_norm_is_monotone(a in infinite_operator()) {
        let s = default_block_size(&a);
        let values: Vec<f64> = (1..8).map(|n| nu_n(&a, n, s).unwrap()).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{:?}", values);
        }
    }

    #[test]
    fn mu_n_is_transpose_symmetric(a in infinite_operator(), n in 1usize..6) {
        let s = default_block_size(&a);
        prop_assert_eq!(mu_n(&a, n, s).unwrap(), mu_n(&a.adjoint(), n, s).unwrap());
    }

    #[test]
    fn eps_below_linear_bound(alpha in 0.0f64..5.0, gamma in 0.0f64..5.0, n in 1usize..2000) {
        prop_assume!(alpha + gamma > 0.0);
        let eps = eps_formula(alpha, gamma, n);
        prop_assert!(eps < (alpha + gamma) * std::f64::consts::PI / (n as f64 + 1.0));
    }
}

#[test]
fn finite_sandwich_for_every_width() {
    let a = random_tridiagonal(40, 40);
    for lambda in [Complex64::new(0.0, 0.0), Complex64::new(0.4, -0.3), Complex64::new(-1.2, 0.8)] {
        let shifted = a.shift_spectral(lambda);
        let exact = dense_finite_oracle(&a, lambda).unwrap();
        for n in 1..=40 {
            let nu = nu_n(&shifted, n, 1).unwrap();
            let eps = epsilon_n(&shifted, n, 1).unwrap().eps_n;
            assert!(nu - eps <= exact + 1e-10, "n={n}: {nu} - {eps} > {exact}");
            assert!(exact <= nu + 1e-10, "n={n}: {exact} > {nu}");
        }
    }
}

#[test]
fn known_operators_reduce_exactly() {
    let perturbed = with_overrides(&example_b("bi"), &[(0, 3, Complex64::new(2.0, 1.0)), (1, -6, Complex64::new(0.0, -3.0))]);
    for a in [example_b("bi"), example_c("semi"), perturbed] {
        for n in [1, 3, 9] {
            let lambda = Complex64::new(0.3, 0.2);
            let shifted = a.shift_spectral(lambda);
            assert!((nu_n(&shifted, n, 1).unwrap() - brute_force(&shifted, n, 1)).abs() < 1e-12);
        }
    }
    assert_eq!(window_offsets(&example_b("semi"), 4, 1).unwrap(), vec![0, 1, 2, 3]);
}
