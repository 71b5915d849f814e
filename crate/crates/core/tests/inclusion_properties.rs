mod common;

use banded_spectra::inclusion::{
    classify_pseudospectrum, essential_superset, make_grid, mu_n_field, pseudospectrum, spectrum_superset,
    Label, Rect, TaskParams, TaskRegistry,
};
use banded_spectra::kernels::{directed_hausdorff, PointSet};
use banded_spectra::oracles::{dense_finite_oracle, floquet_spectrum};
use banded_spectra::window::epsilon_n;
use common::{example_b, example_c, random_complex, random_tridiagonal, right_shift, with_overrides};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn finite_sandwich_consistency() {
    let a = random_tridiagonal(11, 24);
    let grid = make_grid(Rect::new(-2.5, 2.5, -2.5, 2.5).unwrap(), 41, 41).unwrap();
    let eps = 0.4;
    for n in [3, 6, 12] {
        let r = pseudospectrum(&a, n, 1, eps, false, &grid).unwrap();
        for ((&z, &mu), label) in grid.points.iter().zip(&r.field.values).zip(&r.labels) {
            let sigma = dense_finite_oracle(&a, z).unwrap();
            if (mu - eps).abs() < 1e-10 || (mu - eps - r.eps_n()).abs() < 1e-10 || (sigma - eps).abs() < 1e-10 {
                continue;
            }
            if *label == Label::Subset {
                assert!(sigma < eps, "subset point {z} has sigma {sigma}");
            }
            if sigma < eps {
                assert!(label.in_superset(), "pseudospectrum point {z} labelled outside");
            }
        }
    }
}

#[test]
fn superset_contains_the_spectrum() {
    let grid = make_grid(Rect::new(-3.0, 3.0, -2.0, 2.0).unwrap(), 91, 61).unwrap();
    // The shift's superset is an annulus of width ε_n², so n stays small
    // enough for the annulus to be wider than a cell.
    for (name, a) in [("shift", right_shift()), ("b", example_b("bi")), ("c", example_c("bi"))] {
        let r = spectrum_superset(&a, 8, 1, &grid).unwrap();
        let curve = floquet_spectrum(&a, 512).unwrap();
        let reach = directed_hausdorff(&curve.samples, &r.superset_points()).unwrap();
        assert!(reach <= grid.spacing(), "{name}: {reach}");
    }
}

#[test]
fn essential_superset_ignores_overrides() {
    let grid = make_grid(Rect::new(-3.0, 3.0, -2.0, 2.0).unwrap(), 45, 31).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let overrides: Vec<_> = (0..3)
            .map(|_| (rng.gen_range(0..=1), rng.gen_range(1..=9), random_complex(&mut rng, 4.0)))
            .collect();
        for domain in ["semi", "bi"] {
            let background = example_b(domain);
            let perturbed = with_overrides(&background, &overrides);
            let p = essential_superset(&perturbed, 8, 1, &grid).unwrap();
            let b = essential_superset(&background, 8, 1, &grid).unwrap();
            assert_eq!(p.labels, b.labels);
        }
    }
}

#[test]
fn bi_infinite_essential_of_shift_covers_circle() {
    let grid = make_grid(Rect::new(-1.5, 1.5, -1.5, 1.5).unwrap(), 61, 61).unwrap();
    let r = essential_superset(&right_shift(), 8, 1, &grid).unwrap();
    let circle = floquet_spectrum(&right_shift(), 256).unwrap();
    assert!(directed_hausdorff(&circle.samples, &r.superset_points()).unwrap() <= grid.spacing());
}

#[test]
fn registry_tasks_agree_with_functions() {
    let grid = make_grid(Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap(), 21, 21).unwrap();
    let registry = TaskRegistry::with_defaults();
    let params = TaskParams { n: 6, block_size: None, eps: 0.3, closed: false };
    let a = example_c("bi");
    let direct = spectrum_superset(&a, 6, 1, &grid).unwrap();
    assert_eq!(registry.get("spectrum").unwrap().run(&a, &params, &grid).unwrap(), direct);
    let ps = registry.get("pseudospectrum").unwrap().run(&a, &params, &grid).unwrap();
    assert_eq!(ps, pseudospectrum(&a, 6, 1, 0.3, false, &grid).unwrap());
}

fn field_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..3.0, 1..60)
}

proptest! {
    #[test]
    fn subset_is_nested_in_superset(values in field_strategy(), eps in 0.01f64..2.0, closed in prop::bool::ANY) {
        let a = example_b("bi");
        let params = epsilon_n(&a, 10, 1).unwrap();
        let grid = make_grid(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), values.len(), 1).unwrap();
        let mut field = mu_n_field(&a, 10, 1, &grid).unwrap();
        field.values = values;
        let r = classify_pseudospectrum(&field, eps, &params, closed).unwrap();
        for (mu, label) in field.values.iter().zip(&r.labels) {
            if *label == Label::Subset {
                prop_assert!(label.in_superset());
                prop_assert!(*mu <= eps);
            }
            if *label == Label::Outside {
                prop_assert!(*mu >= eps + params.eps_n);
            }
        }
    }

    #[test]
    fn superset_grows_with_eps(values in field_strategy(), e1 in 0.01f64..2.0, de in 0.0f64..1.0) {
        let a = right_shift();
        let params = epsilon_n(&a, 4, 1).unwrap();
        let grid = make_grid(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), values.len(), 1).unwrap();
        let mut field = mu_n_field(&a, 4, 1, &grid).unwrap();
        field.values = values;
        let small = classify_pseudospectrum(&field, e1, &params, false).unwrap();
        let large = classify_pseudospectrum(&field, e1 + de, &params, false).unwrap();
        for (s, l) in small.labels.iter().zip(&large.labels) {
            prop_assert!(!s.in_superset() || l.in_superset());
            prop_assert!(*s != Label::Subset || *l == Label::Subset);
        }
        let points: PointSet = small.superset_points();
        prop_assert_eq!(points.len(), small.superset_count());
    }
}
