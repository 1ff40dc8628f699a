use crate::means::harmonic_number;
use crate::scalar::{wrap_to_pi, Real};

/// `D_k(t)` for `k = 0..n`, sharing one `1/(2 sin(t/2))`.
pub(crate) fn dirichlet_row<T: Real>(n: usize, t: T, out: &mut [T]) {
    let t = wrap_to_pi(t);
    let half = T::lit(0.5);
    if t.is_zero() {
        for (k, slot) in out.iter_mut().enumerate().take(n) {
            *slot = T::from_count(k) + half;
        }
        return;
    }
    let inv = T::one() / (T::lit(2.0) * (t * half).sin());
    for (k, slot) in out.iter_mut().enumerate().take(n) {
        *slot = ((T::from_count(k) + half) * t).sin() * inv;
    }
}

/// `1/(l_n (n-k))` for `k = 0..n`.
pub(crate) fn kernel_weights<T: Real>(n: usize) -> Vec<T> {
    let l = harmonic_number::<T>(n);
    (0..n).map(|k| T::one() / (l * T::from_count(n - k))).collect()
}

/// Direct `O(N)` evaluation of `F_N(t, s)`.
pub fn log_kernel_direct<T: Real>(order: usize, t: T, s: T) -> T {
    assert!(order >= 1, "kernel order must be positive");
    let mut dt = vec![T::zero(); order];
    let mut ds = vec![T::zero(); order];
    dirichlet_row(order, t, &mut dt);
    dirichlet_row(order, s, &mut ds);
    let w = kernel_weights::<T>(order);
    // smallest weights first
    (0..order).map(|k| dt[k] * ds[k] * w[k]).fold(T::zero(), |a, b| a + b)
}

/// Dirichlet tables for separable evaluation: returns
/// `(D_k(xs[a]) row-major, D_k(ys[b]) row-major, weights)` so that
/// `F_N(xs[a], ys[b]) = Σ_k dx[a·N+k] · dy[b·N+k] · w[k]`.
pub fn log_kernel_direct_table<T: Real>(order: usize, xs: &[T], ys: &[T]) -> (Vec<T>, Vec<T>, Vec<T>) {
    let mut dx = vec![T::zero(); xs.len() * order];
    for (a, &x) in xs.iter().enumerate() {
        dirichlet_row(order, x, &mut dx[a * order..(a + 1) * order]);
    }
    let mut dy = vec![T::zero(); ys.len() * order];
    for (b, &y) in ys.iter().enumerate() {
        dirichlet_row(order, y, &mut dy[b * order..(b + 1) * order]);
    }
    (dx, dy, kernel_weights(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::dirichlet_kernel;

    #[test]
    fn order_one_is_a_quarter() {
        for &(t, s) in &[(0.0, 0.0), (1.0, -2.0), (3.0, 0.1)] {
            assert!((log_kernel_direct(1, t, s) - 0.25f64).abs() < 1e-15);
        }
    }

    #[test]
    fn order_two_at_origin() {
        assert!((log_kernel_direct(2, 0.0f64, 0.0) - 19.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn high_precision_reference() {
        // 40-digit summation
        assert!((log_kernel_direct(16, 0.3f64, 0.2) - 0.527_103_905_383_076).abs() < 1e-13);
    }

    #[test]
    fn agrees_with_dirichlet_kernel_products() {
        let (n, t, s) = (16usize, 0.3f64, 0.2f64);
        let l: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        let oracle: f64 = (0..n).map(|k| dirichlet_kernel(k, t) * dirichlet_kernel(k, s) / (n - k) as f64).sum::<f64>() / l;
        assert!((log_kernel_direct(n, t, s) - oracle).abs() < 1e-12);
    }

    #[test]
    fn table_matches_pointwise() {
        let xs = [0.1f64, -0.7, 0.0];
        let ys = [2.0f64, 0.3];
        let n = 9;
        let (dx, dy, w) = log_kernel_direct_table(n, &xs, &ys);
        for (a, &x) in xs.iter().enumerate() {
            for (b, &y) in ys.iter().enumerate() {
                let v: f64 = (0..n).map(|k| dx[a * n + k] * dy[b * n + k] * w[k]).sum();
                assert!((v - log_kernel_direct(n, x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn periodic_in_each_argument() {
        let tau = 2.0 * std::f64::consts::PI;
        let a = log_kernel_direct(12, 0.4f64, -1.3);
        let b = log_kernel_direct(12, 0.4 + tau, -1.3 - tau);
        assert!((a - b).abs() < 1e-10);
    }
}
