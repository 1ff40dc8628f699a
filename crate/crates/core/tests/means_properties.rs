use logmeans_core::fourier::{evaluate_grid, fourier_coeffs, GridFunction2D, SpectralCoeffs, Summation};
use logmeans_core::means::{harmonic_number, l1_distance, mean_via_kernel, norlund_log_mean, MeanKind, MeanSpec};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_are_a_probability(n in 1usize..2000) {
        for kind in [MeanKind::NorlundLog, MeanKind::Marcinkiewicz] {
            let w = MeanSpec::new(kind, n).unwrap().weights::<f64>();
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13);
            prop_assert!(w.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn harmonic_number_is_increasing(n in 1usize..5000) {
        prop_assert!(harmonic_number::<f64>(n + 1) > harmonic_number::<f64>(n));
    }

    #[test]
    fn kernel_and_spectral_paths_agree(seed in 0u64..1000, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let band = 4;
        let modes: Vec<(i64, i64, f64)> = (0..6)
            .map(|_| (rng.gen_range(0..=band), rng.gen_range(0..=band), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = GridFunction2D::from_fn_real(128, |s: f64, t: f64| {
            modes.iter().map(|&(m, k, a)| a * (m as f64 * s + k as f64 * t).cos()).sum()
        })
        .unwrap();
        let c = fourier_coeffs(&f, 8, 8).unwrap();
        let spectral = norlund_log_mean(&c, 8, x, y).unwrap().re;
        let conv = mean_via_kernel(&f, 8, x, y).unwrap();
        prop_assert!((spectral - conv).abs() < 1e-6);
    }
}

#[test]
fn marcinkiewicz_error_controlled_by_norlund_on_abs_x() {
    let g = 256;
    let f = GridFunction2D::from_fn_real(g, |x: f64, _| x.abs()).unwrap();
    let c = fourier_coeffs(&f, 127, 127).unwrap();
    let mut t_err = Vec::new();
    let mut s_err = Vec::new();
    for n in [4usize, 16, 64, 126] {
        let t = evaluate_grid(&c, &Summation::Mean(MeanSpec::new(MeanKind::NorlundLog, n).unwrap())).unwrap();
        let s = evaluate_grid(&c, &Summation::Mean(MeanSpec::new(MeanKind::Marcinkiewicz, n).unwrap())).unwrap();
        t_err.push(l1_distance(&t, &f).unwrap());
        s_err.push(l1_distance(&s, &f).unwrap());
    }
    let ratios: Vec<f64> = s_err.iter().zip(&t_err).map(|(s, t)| s / t).collect();
    // σ_n - f ≈ (log n)/n and t_n - f ≈ 2/n in L¹ for this f, so one constant
    // covers the tested range but the ratio creeps up like log n.
    assert!(ratios.iter().all(|&r| r <= 2.0), "{ratios:?}");
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");
    assert!(t_err.windows(2).all(|w| w[1] < w[0]) && s_err.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn riesz_mean_fixes_constants_and_matches_weights() {
    let c = SpectralCoeffs::from_fn(6, 6, 32, true, |m, n| if m == 0 && n == 0 { Complex::new(1.0f64, 0.0) } else { Complex::new(0.0, 0.0) }).unwrap();
    for n in 2..6 {
        let v = evaluate_grid(&c, &Summation::Mean(MeanSpec::new(MeanKind::RieszLog, n).unwrap())).unwrap();
        assert!(v.values().iter().all(|z| (z.re - 1.0).abs() < 1e-14));
    }
}
