use banded_spectra::kernels::{
    eigenvalues, hausdorff_distance, largest_singular_value, smallest_singular_value,
    BandedMatrix, DenseMatrix, PointSet,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    DenseMatrix::from_row_major(rows, cols, data).unwrap()
}

fn random_banded(rng: &mut ChaCha8Rng, rows: usize, cols: usize, lower: usize, upper: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if j + lower >= i && j <= i + upper {
                m.set(i, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
    }
    m
}

/// Independent oracle: eigenvalues of the Hermitian Gram matrix M^H M.
fn gram_extremes(m: &DenseMatrix) -> (f64, f64) {
    let a = m.to_nalgebra();
    let gram: DMatrix<Complex64> = a.adjoint() * &a;
    let ev = gram.symmetric_eigenvalues();
    let lo = ev.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
    let hi = ev.iter().cloned().fold(0.0, f64::max).sqrt();
    (lo, hi)
}

fn svd_extremes(m: &DenseMatrix) -> (f64, f64) {
    let sv = m.to_nalgebra().singular_values();
    (
        sv.iter().cloned().fold(f64::INFINITY, f64::min),
        sv.iter().cloned().fold(0.0, f64::max),
    )
}

#[test]
fn smallest_matches_gram_oracle_on_random_6x4() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let m = random_matrix(&mut rng, 6, 4);
        let (lo, hi) = gram_extremes(&m);
        let got = smallest_singular_value(&m).unwrap();
        assert!((got - lo).abs() < 1e-8, "got {got}, oracle {lo}");
        let got_hi = largest_singular_value(&m).unwrap();
        assert!((got_hi - hi).abs() < 1e-8 * hi.max(1.0));
    }
}

#[test]
fn banded_windows_match_dense_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(n, lower, upper) in &[(1, 2, 0), (5, 2, 0), (40, 2, 0), (64, 4, 0), (33, 3, 1), (20, 6, 2), (12, 0, 0)] {
        let m = random_banded(&mut rng, n + lower, n, lower, upper);
        let (lo, hi) = svd_extremes(&m);
        let got = smallest_singular_value(&m).unwrap();
        assert!((got - lo).abs() <= 1e-10 * hi, "n={n} lower={lower}: {got} vs {lo}");
        let got_hi = largest_singular_value(&m).unwrap();
        assert!((got_hi - hi).abs() <= 1e-10 * hi);
    }
}

#[test]
fn dense_square_matches_dense_svd() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [2, 7, 30] {
        let m = random_matrix(&mut rng, n, n);
        let (lo, hi) = svd_extremes(&m);
        assert!((smallest_singular_value(&m).unwrap() - lo).abs() <= 1e-10 * hi);
    }
}

#[test]
fn near_singular_window_keeps_absolute_accuracy() {
    // Lower bidiagonal [-λ; 1] with |λ| = 1: σ_min = 2 sin(π / (2(n+1))).
    let n = 128;
    let lambda = Complex64::from_polar(1.0, 0.3);
    let mut m = DenseMatrix::zeros(n + 1, n);
    for j in 0..n {
        m.set(j, j, -lambda);
        m.set(j + 1, j, Complex64::new(1.0, 0.0));
    }
    let expect = 2.0 * (std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin();
    assert!((smallest_singular_value(&m).unwrap() - expect).abs() < 1e-13);
}

#[test]
fn rank_deficient_is_zero() {
    let mut m = DenseMatrix::zeros(5, 3);
    m.set(0, 0, Complex64::new(1.0, 0.0));
    m.set(1, 1, Complex64::new(2.0, 1.0));
    assert!(smallest_singular_value(&m).unwrap() < 1e-15);
}

#[test]
fn eigenvalues_are_roots_of_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [2, 3, 5, 8] {
        let m = random_matrix(&mut rng, n, n);
        let smax = largest_singular_value(&m).unwrap();
        for z in eigenvalues(&m).unwrap() {
            let mut shifted = m.clone();
            for i in 0..n {
                shifted.set(i, i, m.get(i, i) - z);
            }
            let det = shifted.to_nalgebra().determinant();
            assert!(det.norm() <= 1e-6 * smax.powi(n as i32), "|det| = {}", det.norm());
        }
    }
}

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        DenseMatrix::from_row_major(rows, cols, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
            .unwrap()
    })
}

fn point_set() -> impl Strategy<Value = PointSet> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..12)
        .prop_map(|v| PointSet(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

proptest! {
    #[test]
    fn singular_values_invariant_under_transpose_and_conjugation(m in complex_matrix(5, 5)) {
        let s = smallest_singular_value(&m).unwrap();
        prop_assert!((s - smallest_singular_value(&m.transpose()).unwrap()).abs() < 1e-10);
        prop_assert!((s - smallest_singular_value(&m.conj()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn smallest_singular_value_bounds_image_norm(
        m in complex_matrix(6, 3),
        x in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
    ) {
        let x: Vec<Complex64> = x.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        let y = m.mul_vec(&x);
        let ynorm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(smallest_singular_value(&m).unwrap() * norm <= ynorm + 1e-12);
    }

    #[test]
    fn banded_storage_round_trips(m in complex_matrix(4, 3)) {
        prop_assert_eq!(BandedMatrix::from_dense(&m).to_dense(), m);
    }

    #[test]
    fn hausdorff_symmetric_and_triangle(p in point_set(), q in point_set(), r in point_set()) {
        let pq = hausdorff_distance(&p, &q).unwrap();
        prop_assert!((pq - hausdorff_distance(&q, &p).unwrap()).abs() < 1e-12);
        let pr = hausdorff_distance(&p, &r).unwrap();
        let rq = hausdorff_distance(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq + 1e-12);
    }
}
