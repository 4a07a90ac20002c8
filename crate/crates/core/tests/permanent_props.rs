use num_complex::Complex64;
use proptest::prelude::*;
use qboson::focksim::haar_unitary;
use qboson::permanent::{
    distribution_permanent, permanent_naive, permanent_ryser, prob_outcome, q_permanent, q_permanent_coefficients,
    ComplexMatrix, Inversions,
};
use qboson::sector::SectorBasis;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1)))
}

fn sized_matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max).prop_flat_map(matrix)
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ryser_matches_naive(a in sized_matrix(8)) {
        let r = permanent_ryser(&a).unwrap();
        let n = permanent_naive(&a).unwrap();
        prop_assert!(close(r, n, 1e-10), "{r} vs {n}");
    }

    #[test]
    fn invariant_under_row_and_column_permutations(a in sized_matrix(6), seed in any::<u64>()) {
        let n = a.nrows();
        let mut rows: Vec<usize> = (0..n).collect();
        let mut cols: Vec<usize> = (0..n).collect();
        // cheap deterministic shuffle
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            rows.swap(i, (s >> 33) as usize % (i + 1));
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            cols.swap(i, (s >> 33) as usize % (i + 1));
        }
        let b = ComplexMatrix::from_fn(n, n, |i, j| a[(rows[i], cols[j])]);
        prop_assert!(close(permanent_ryser(&a).unwrap(), permanent_ryser(&b).unwrap(), 1e-10));
        prop_assert!(close(permanent_ryser(&a).unwrap(), permanent_ryser(&a.transpose()).unwrap(), 1e-10));
    }

    #[test]
    fn q_polynomial_sums_to_permanent(a in sized_matrix(6)) {
        let coeffs = q_permanent_coefficients(&a, &Inversions).unwrap();
        let n = a.nrows();
        prop_assert!(coeffs.len() <= n * (n - 1) / 2 + 1);
        let sum: Complex64 = coeffs.iter().sum();
        let perm = permanent_naive(&a).unwrap();
        prop_assert!(close(sum, perm, 1e-10));
        prop_assert!(close(q_permanent(&a, 1.0).unwrap(), perm, 1e-10));
        let diag: Complex64 = (0..n).map(|i| a[(i, i)]).product();
        prop_assert!(close(q_permanent(&a, 0.0).unwrap(), diag, 1e-12));
    }

    #[test]
    fn transpose_symmetry(seed in 0u64..500, m in 2usize..5, n in 1u32..4) {
        let u = haar_unitary(m, seed).unwrap();
        let ut = u.transpose();
        let basis = SectorBasis::new(m, n).unwrap();
        let k = basis.state(seed as usize % basis.len());
        let l = basis.state((seed as usize / 7) % basis.len());
        let a = prob_outcome(&u, k, l).unwrap();
        let b = prob_outcome(&ut, l, k).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn distributions_are_normalized(seed in 0u64..500, m in 1usize..6, n in 0u32..4) {
        let u = haar_unitary(m, seed).unwrap();
        let basis = SectorBasis::new(m, n).unwrap();
        let l = basis.state(seed as usize % basis.len()).clone();
        let d = distribution_permanent(&u, &l).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-10);
        prop_assert!(d.basis().states().iter().all(|k| k.total() == n));
    }
}
