//! Property-based invariants.

use macfb_core::experiments::aggregate;
use macfb_core::extremes::survival;
use macfb_core::grassmann::{chordal_distance_sq, quantize, random_codebook, CompositePoint};
use macfb_core::numerics::{logdet_hermitian_psd, sample_gaussian_matrix, sample_unit_vector, svd, ComplexMatrix, RngStream, C64};
use macfb_core::strategies::{antenna_select, user_channels, user_select};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..24, cols in 1usize..24) {
        let mut rng = RngStream::new(seed, 0).rng();
        let a = sample_gaussian_matrix(&mut rng, rows, cols);
        let d = svd(&a).unwrap();
        let r = d.reconstruct();
        let resid = (0..rows * cols).map(|i| (r.as_slice()[i] - a.as_slice()[i]).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(resid / a.frobenius_norm() < 1e-10);
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn logdet_of_diagonal_products_adds(d1 in prop::collection::vec(0.01f64..50.0, 1..8), scale in 0.01f64..50.0) {
        let d2: Vec<f64> = d1.iter().map(|x| x * 0.5 + scale).collect();
        let prod: Vec<f64> = d1.iter().zip(&d2).map(|(a, b)| a * b).collect();
        let l = |d: &[f64]| logdet_hermitian_psd(&ComplexMatrix::from_diag(d)).unwrap();
        prop_assert!((l(&prod) - l(&d1) - l(&d2)).abs() < 1e-10);
    }

    #[test]
    fn constructors_reject_non_finite(pos in 0usize..4, bad in prop_oneof![Just(f64::NAN), Just(f64::INFINITY)]) {
        let mut data = vec![C64::new(1.0, 0.0); 4];
        data[pos] = C64::new(bad, 0.0);
        prop_assert!(ComplexMatrix::new(2, 2, data).is_err());
    }

    #[test]
    fn chordal_distance_is_bounded(seed in any::<u64>(), n in 1usize..6, m in 1usize..5) {
        let mut rng = RngStream::new(seed, 1).rng();
        let mut point = || CompositePoint::new(&(0..m).map(|_| sample_unit_vector(&mut rng, n)).collect::<Vec<_>>()).unwrap();
        let (p, q) = (point(), point());
        let d = chordal_distance_sq(&p, &q).unwrap();
        prop_assert!((0.0..=m as f64 + 1e-12).contains(&d));
        prop_assert!((d - chordal_distance_sq(&q, &p).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn quantize_is_exhaustive_argmin(seed in any::<u64>(), k in 1usize..200) {
        let book = random_codebook(3, 2, k, RngStream::new(seed, 2)).unwrap();
        let mut rng = RngStream::new(seed, 3).rng();
        let v = CompositePoint::new(&[sample_unit_vector(&mut rng, 3), sample_unit_vector(&mut rng, 3)]).unwrap();
        let q = quantize(&v, &book).unwrap();
        let d: Vec<f64> = (0..k).map(|i| chordal_distance_sq(&v, &book.codeword(i)).unwrap()).collect();
        let best = d.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((d[q.index] - best).abs() < 1e-12);
    }

    #[test]
    fn selections_are_scale_invariant(seed in any::<u64>(), users in 1usize..12, s in 1usize..4, scale in 1e-3f64..1e3) {
        prop_assume!(s <= users);
        let mut rng = RngStream::new(seed, 4).rng();
        let h = sample_gaussian_matrix(&mut rng, 3, users * 2);
        prop_assert_eq!(antenna_select(&h, s).unwrap(), antenna_select(&h.scale(scale), s).unwrap());
        let u = user_channels(&h, 2).unwrap();
        let scaled: Vec<ComplexMatrix> = u.iter().map(|x| x.scale(scale)).collect();
        prop_assert_eq!(user_select(&u, s).unwrap(), user_select(&scaled, s).unwrap());
        let all = antenna_select(&h, users * 2).unwrap();
        let mut sorted = all.clone();
        sorted.sort();
        prop_assert_eq!(sorted, (0..users * 2).collect::<Vec<_>>());
    }

    #[test]
    fn aggregate_is_permutation_invariant(mut xs in prop::collection::vec(-1e6f64..1e6, 1..200), seed in any::<u64>()) {
        let a = aggregate(&xs).unwrap();
        let n = xs.len();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            xs.swap(i, (state >> 33) as usize % (i + 1));
        }
        let b = aggregate(&xs).unwrap();
        prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        prop_assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        prop_assert!(a.stderr >= 0.0);
    }

    #[test]
    fn survival_is_monotone(x in 0.0f64..80.0, dx in 1e-3f64..5.0, l in 1u32..30) {
        prop_assert!(survival(x + dx, l) <= survival(x, l));
        prop_assert!(survival(x, l) <= survival(x, l + 1));
        prop_assert!((0.0..=1.0).contains(&survival(x, l)));
    }
}
