use logmeans_core::fourier::GridFunction2D;
use logmeans_core::orlicz::{luxemburg_norm, modular, unit_ball_member, SimpleFunction, YoungFunction};
use proptest::collection::vec;
use proptest::prelude::*;

fn shipped() -> Vec<YoungFunction<f64>> {
    vec![
        YoungFunction::log(),
        YoungFunction::log2(),
        YoungFunction::power(1.5).unwrap(),
        YoungFunction::power(2.0).unwrap(),
        YoungFunction::log2_loglog(),
    ]
}

fn pieces() -> impl Strategy<Value = Vec<(f64, f64)>> {
    vec((0.01f64..50.0, 0.01f64..5.0), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_homogeneous(p in pieces(), c in 0.01f64..100.0, qi in 0usize..5) {
        let q = &shipped()[qi];
        let f = SimpleFunction::new(p).unwrap();
        let a = luxemburg_norm(&f.scaled(c), q).unwrap();
        let b = c * luxemburg_norm(&f, q).unwrap();
        prop_assert!((a - b).abs() <= 1e-8 * b.max(1.0));
    }

    #[test]
    fn norm_is_monotone(p in pieces(), bumps in vec(0.0f64..3.0, 6), qi in 0usize..5) {
        let q = &shipped()[qi];
        let f = SimpleFunction::new(p.clone()).unwrap();
        let g = SimpleFunction::new(p.iter().zip(&bumps).map(|(&(h, m), &d)| (h + d, m)).collect()).unwrap();
        prop_assert!(luxemburg_norm(&f, q).unwrap() <= luxemburg_norm(&g, q).unwrap() + 1e-9);
    }

    #[test]
    fn modular_is_calibrated_at_the_norm(p in pieces(), qi in 0usize..5) {
        let q = &shipped()[qi];
        let f = SimpleFunction::new(p).unwrap();
        let k = luxemburg_norm(&f, q).unwrap();
        let m = modular(&f, q, k).unwrap();
        prop_assert!((m - 1.0).abs() <= 1e-6, "modular {}", m);
    }

    #[test]
    fn slope_is_increasing(u in 1e-6f64..1e6, t in 1.0001f64..100.0, qi in 0usize..5) {
        let q = &shipped()[qi];
        let v = u * t;
        prop_assert!(q.eval(u) / u < q.eval(v) / v);
    }

    #[test]
    fn midpoint_convexity(a in 0.0f64..1e4, b in 0.0f64..1e4, qi in 0usize..5) {
        let q = &shipped()[qi];
        let mid = q.eval(0.5 * (a + b));
        prop_assert!(mid <= 0.5 * (q.eval(a) + q.eval(b)) * (1.0 + 1e-12) + 1e-300);
    }
}

#[test]
fn grid_unit_ball_examples() {
    let sq = YoungFunction::power(2.0).unwrap();
    let c = GridFunction2D::from_fn_real(32, |_, _| 1.0 / (4.0 * std::f64::consts::PI)).unwrap();
    assert!(unit_ball_member(&c, &sq).unwrap());
    let one = GridFunction2D::from_fn_real(32, |_, _| 1.0f64).unwrap();
    assert!(!unit_ball_member(&one, &sq).unwrap());
}
