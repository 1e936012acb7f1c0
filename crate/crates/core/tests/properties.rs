use approx::assert_relative_eq;
use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;

use wbenum::acm::{eig_magnitudes, lra_acm, ss_acm, AcmKind, AugmentedCovariance};
use wbenum::criteria::{evaluate, mdl, mdlgap};
use wbenum::linalg::{hermitian_eigen, CMatrix};
use wbenum::synth::synthesize;
use wbenum::{ArrayGeometry, CorrelationVector, CriterionKind, EigSpectrum, Scenario, Source};

fn positions() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(0i64..40, 2..9).prop_map(|s| s.into_iter().collect())
}

fn correlation(p: usize) -> impl Strategy<Value = CorrelationVector<f64>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), p).prop_map(|v| {
        let mut half: Vec<Complex<f64>> = v.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        half[0].im = 0.0;
        CorrelationVector::from_nonnegative_lags(&half).unwrap()
    })
}

fn spectrum() -> impl Strategy<Value = (Vec<f64>, usize)> {
    (prop::collection::vec(-3.0f64..3.0, 4..20), 1usize..100_000)
        .prop_map(|(exps, l)| (exps.into_iter().map(|e| 10f64.powf(e)).collect(), l))
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        let a = CMatrix::from_fn(n, |i, j| Complex::new(v[i * n + j].0, v[i * n + j].1));
        let ah = a.conj_transpose();
        CMatrix::from_fn(n, |i, j| (a[(i, j)] + ah[(i, j)]) * 0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coarray_weights_count_all_pairs(pos in positions()) {
        let g = ArrayGeometry::new(pos.clone()).unwrap();
        let c = g.coarray();
        let n = pos.len();
        prop_assert_eq!(c.weights().map(|(_, w)| w).sum::<usize>(), n * n);
        prop_assert_eq!(c.weight(0), n);
        for (k, w) in c.weights() {
            prop_assert_eq!(c.weight(-k), w);
        }
        let p = c.contiguous_p() as i64;
        for k in 1 - p..p {
            prop_assert!(c.weight(k) >= 1);
        }
        prop_assert_eq!(c.weight(p), 0);
    }

    #[test]
    fn smoothed_matrix_is_squared_toeplitz(r in (2usize..16).prop_flat_map(correlation)) {
        let p = r.p();
        let lra = lra_acm(&r).matrix;
        let ss = ss_acm(&r).matrix;
        let sq = lra.matmul(&lra).scale(1.0 / p as f64);
        prop_assert!(ss.sub(&sq).frobenius_norm() <= 1e-12 * ss.frobenius_norm().max(1e-300));
        prop_assert_eq!(lra.hermitian_defect(), 0.0);
        prop_assert!(ss.hermitian_defect() <= 1e-12 * ss.frobenius_norm());
    }

    #[test]
    fn mdlgap_is_differenced_mdl((values, l) in spectrum()) {
        let spec = EigSpectrum::from_values(&values, l).unwrap();
        let m = mdl(&spec).unwrap();
        let g = mdlgap(&spec).unwrap();
        for q in 1..spec.p() {
            prop_assert!((g.at(q) - (m.at(q) - m.at(q - 1)) / l as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn argmin_is_scale_invariant((values, l) in spectrum(), scale in -4.0f64..4.0) {
        let c = 10f64.powf(scale);
        let scaled: Vec<f64> = values.iter().map(|v| v * c).collect();
        let a = EigSpectrum::from_values(&values, l).unwrap();
        let b = EigSpectrum::from_values(&scaled, l).unwrap();
        for kind in CriterionKind::ALL {
            prop_assert_eq!(evaluate(kind, &a).unwrap().argmin, evaluate(kind, &b).unwrap().argmin);
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra(m in (1usize..16).prop_flat_map(hermitian)) {
        let n = m.dim();
        let ours = hermitian_eigen(&m, false).unwrap().values;
        let reference = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
        let mut theirs: Vec<f64> = reference.symmetric_eigen().eigenvalues.iter().copied().collect();
        theirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ours.iter().zip(&theirs) {
            assert_relative_eq!(*a, *b, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn eigenvectors_diagonalize(m in (1usize..12).prop_flat_map(hermitian)) {
        let eig = hermitian_eigen(&m, true).unwrap();
        let v = eig.vectors.unwrap();
        let d = v.conj_transpose().matmul(&m).matmul(&v);
        let n = m.dim();
        let scale = m.frobenius_norm().max(1.0);
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { eig.values[i] } else { 0.0 };
                prop_assert!((d[(i, j)] - expect).norm() < 1e-10 * scale);
            }
        }
    }

    #[test]
    fn synthesis_is_reproducible(seed in any::<u64>(), snapshots in 1usize..6) {
        let s = Scenario::new(
            ArrayGeometry::mra6(),
            vec![Source { u: 0.2, power: 1.0 }, Source { u: -0.4, power: 0.5 }],
            1.0,
            vec![90.0, 100.0, 110.0],
            100.0,
            343.0,
            snapshots,
        ).unwrap();
        prop_assert_eq!(synthesize(&s, seed).unwrap(), synthesize(&s, seed).unwrap());
    }

    #[test]
    fn ss_spectrum_is_lra_spectrum_squared(r in (4usize..15).prop_flat_map(correlation)) {
        let p = r.p();
        let lra = eig_magnitudes(&AugmentedCovariance { matrix: lra_acm(&r).matrix, kind: AcmKind::Lra }, 1).unwrap();
        let ss = eig_magnitudes(&ss_acm(&r), 1).unwrap();
        for (a, b) in lra.magnitudes.iter().zip(&ss.magnitudes) {
            prop_assert!((a * a / p as f64 - b).abs() <= 1e-10 * ss.magnitudes[0].max(1e-300));
        }
    }
}
