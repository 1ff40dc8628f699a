use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::harmonic_number;
use crate::reduce::tree_sum;
use crate::scalar::{dist_to_2pi_multiple, Real};

/// Half-width of the excluded tubes around `x, y, x±y ≡ 0 (mod 2π)`.
pub const DEFAULT_SINGULAR_EPS: f64 = 1e-6;
/// Adaptive truncation stops once the tail bound drops below this fraction
/// of the running sum.
pub const DEFAULT_ADAPTIVE_REL_TOL: f64 = 1e-9;

/// Where to cut the cubic-decay series `Σ 2/(k(k+1)(k+2)) · Φ_k(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// All `N - 2` terms; the tail bound is zero.
    Full,
    /// Exactly `K` terms, `1 ≤ K ≤ N - 2`.
    Cap(usize),
    /// Smallest `K` with `1/(2K² sin²(u/2)) < rel_tol · |running sum|`, else `N - 2`.
    Adaptive { rel_tol: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive { rel_tol: DEFAULT_ADAPTIVE_REL_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelescopedSum<T> {
    pub value: T,
    /// Certified bound on `|value - Σ_{k=1}^N cos(ku)/k|` from truncation.
    pub tail_bound: T,
    pub terms_used: usize,
}

/// `Σ_{k=1}^{K} 2/(k(k+1)(k+2)) · sin²((k+1)u/2)/(2 sin²(u/2))` with its tail bound.
fn fejer_series<T: Real>(order: usize, u: T, trunc: Truncation) -> Result<(T, T, usize)> {
    let max = order.saturating_sub(2);
    let half = T::lit(0.5);
    let s = (u * half).sin();
    let inv = T::one() / (T::lit(2.0) * s * s);
    let term = |k: usize| {
        let kf = T::from_count(k);
        let w = T::lit(2.0) / (kf * (kf + T::one()) * (kf + T::lit(2.0)));
        let v = ((kf + T::one()) * u * half).sin();
        w * v * v * inv
    };
    let bound_at = |k: usize| inv / T::from_count(k * k);
    match trunc {
        Truncation::Full => {
            let terms: Vec<T> = (1..=max).map(term).collect();
            Ok((tree_sum(&terms), T::zero(), max))
        }
        Truncation::Cap(k) => {
            if k < 1 || k > max {
                return Err(Error::InvalidTruncation { cap: k, max });
            }
            let terms: Vec<T> = (1..=k).map(term).collect();
            let bound = if k == max { T::zero() } else { bound_at(k) };
            Ok((tree_sum(&terms), bound, k))
        }
        Truncation::Adaptive { rel_tol } => {
            let rel = T::lit(rel_tol);
            let mut sum = T::zero();
            for k in 1..=max {
                sum = sum + term(k);
                if k < max && bound_at(k) < rel * sum.abs() {
                    return Ok((sum, bound_at(k), k));
                }
            }
            Ok((sum, T::zero(), max))
        }
    }
}

/// `sin²(Nu/2)/(2 sin²(u/2)) / (N(N-1))`.
fn boundary_term<T: Real>(order: usize, u: T) -> T {
    let half = T::lit(0.5);
    let n = T::from_count(order);
    let s = (u * half).sin();
    let v = (n * u * half).sin();
    v * v / (T::lit(2.0) * s * s) / (n * (n - T::one()))
}

/// `sin((N+1/2)u)/(2 sin(u/2)) / N`, i.e. `D_N(u)/N`.
fn dirichlet_term<T: Real>(order: usize, u: T) -> T {
    let half = T::lit(0.5);
    let n = T::from_count(order);
    ((n + half) * u).sin() / (T::lit(2.0) * (u * half).sin()) / n
}

/// Direct `Σ_{k=1}^N cos(ku)/k`, summed from `k = N` down.
pub fn cos_sum_direct<T: Real>(order: usize, u: T) -> T {
    (1..=order).rev().map(|k| (T::from_count(k) * u).cos() / T::from_count(k)).fold(T::zero(), |a, b| a + b)
}

/// Direct `Σ_{k=1}^N sin(ku)/k`.
pub fn sin_sum<T: Real>(order: usize, u: T) -> T {
    (1..=order).rev().map(|k| (T::from_count(k) * u).sin() / T::from_count(k)).fold(T::zero(), |a, b| a + b)
}

/// `Σ_{k=1}^N cos(ku)/k` through double Abel summation:
///
/// `Σ_{k=1}^{N-2} 2/(k(k+1)(k+2)) Φ_k(u) + Φ_{N-1}(u)/(N(N-1)) + D_N(u)/N - 3/4`,
/// where `Φ_k(u) = sin²((k+1)u/2)/(2 sin²(u/2))` is the Fejér partial sum.
pub fn cos_sum_telescoped<T: Real>(order: usize, u: T, trunc: Truncation) -> Result<TelescopedSum<T>> {
    if order < 2 {
        return Err(Error::OrderTooSmall { got: order, min: 2 });
    }
    if dist_to_2pi_multiple(u).is_zero() {
        return Err(Error::SingularArgument(u.as_f64()));
    }
    let (series, tail_bound, terms_used) = fejer_series(order, u, trunc)?;
    let value = series + boundary_term(order, u) + dirichlet_term(order, u) - T::lit(0.75);
    Ok(TelescopedSum { value, tail_bound, terms_used })
}

/// Closed-form kernel value with its fifteen-term breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation<T> {
    /// `F_N(x, y) = (1/l_N) Σ_j R_j`.
    pub value: T,
    /// `R_1..R_15`, summing to `l_N F_N(x, y)`.
    pub terms: [T; 15],
    /// Certified bound on `|value - F_N(x, y)|` from series truncation.
    pub truncation_bound: T,
    pub harmonic: T,
}

impl<T: Real> KernelEvaluation<T> {
    /// `R_1 + R_2 + R_3 + R_4`.
    pub fn main_terms(&self) -> T {
        self.terms[..4].iter().fold(T::zero(), |a, &b| a + b)
    }

    /// `Σ_{j=5}^{15} |R_j|`.
    pub fn remainder_abs(&self) -> T {
        self.terms[4..].iter().fold(T::zero(), |a, &b| a + b.abs())
    }
}

/// `F_N(x, y)` from the expansion of `D_{N-k}(x) D_{N-k}(y)` around the phase
/// `(N+1/2)·`, with the cosine sums in `x ± y` telescoped.
///
/// Terms, in order: the four truncated Fejér-series products (`R_1..R_4`),
/// then the boundary and Dirichlet remainders in `x+y`, the constant, the
/// remainders in `x-y` for the `sin·sin` factor, those in `x-y` and `x+y`
/// for the `cos·cos` factor (`R_5..R_13`), and the two sine-sum cross terms
/// (`R_14`, `R_15`).
pub fn log_kernel_closed<T: Real>(order: usize, x: T, y: T, trunc: Truncation, singular_eps: T) -> Result<KernelEvaluation<T>> {
    if order < 3 {
        return Err(Error::OrderTooSmall { got: order, min: 3 });
    }
    let p = x + y;
    let q = x - y;
    let closest = [x, y, p, q].iter().map(|&v| dist_to_2pi_multiple(v)).fold(T::infinity(), T::min);
    if closest < singular_eps {
        return Err(Error::SingularTube { x: x.as_f64(), y: y.as_f64(), eps: singular_eps.as_f64() });
    }
    let half = T::lit(0.5);
    let phase = T::from_count(order) + half;
    let two = T::lit(2.0);
    let (ax_s, ax_c) = (phase * x).sin_cos();
    let (ay_s, ay_c) = (phase * y).sin_cos();
    let dx = two * (x * half).sin();
    let dy = two * (y * half).sin();
    let ss = ax_s / dx * (ay_s / dy);
    let cc = ax_c / dx * (ay_c / dy);
    let sc = ax_s / dx * (ay_c / dy);
    let cs = ax_c / dx * (ay_s / dy);

    let (tp, bp, _) = fejer_series(order, p, trunc)?;
    let (tq, bq, _) = fejer_series(order, q, trunc)?;
    let (pp, pq) = (boundary_term(order, p), boundary_term(order, q));
    let (qp, qq) = (dirichlet_term(order, p), dirichlet_term(order, q));
    let (sp, sq) = (sin_sum(order, p), sin_sum(order, q));

    let terms = [
        half * ss * tp,
        half * ss * tq,
        half * cc * tq,
        -half * cc * tp,
        half * ss * pp,
        half * ss * qp,
        -T::lit(0.75) * ss,
        half * ss * pq,
        half * ss * qq,
        half * cc * pq,
        half * cc * qq,
        -half * cc * pp,
        -half * cc * qp,
        -half * sc * (sp - sq),
        -half * cs * (sp + sq),
    ];
    let harmonic = harmonic_number::<T>(order);
    let bound = half * (ss.abs() + cc.abs()) * (bp + bq);
    Ok(KernelEvaluation { value: tree_sum(&terms) / harmonic, terms, truncation_bound: bound / harmonic, harmonic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::log_kernel_direct;
    use std::f64::consts::PI;

    #[test]
    fn identity_small_case() {
        let t = cos_sum_telescoped(4, PI / 2.0, Truncation::Cap(2)).unwrap();
        assert!((t.value + 0.25).abs() < 1e-15);
        assert_eq!(t.tail_bound, 0.0);
    }

    #[test]
    fn identity_full_matches_direct() {
        let full = cos_sum_telescoped(1024, 1.0f64, Truncation::Cap(1022)).unwrap();
        assert!((full.value - cos_sum_direct(1024, 1.0)).abs() < 1e-10);
        for n in [2usize, 3, 5, 17, 100] {
            for &u in &[0.01f64, 0.5, 2.0, -3.0, 6.0] {
                let t = cos_sum_telescoped(n, u, Truncation::Full).unwrap();
                assert!((t.value - cos_sum_direct(n, u)).abs() < 1e-10, "n={n} u={u}");
            }
        }
    }

    #[test]
    fn truncated_identity_respects_bound() {
        let t = cos_sum_telescoped(1024, 1.0f64, Truncation::Cap(32)).unwrap();
        assert!((t.value - cos_sum_direct(1024, 1.0)).abs() <= t.tail_bound);
        assert!(t.tail_bound > 0.0);
    }

    #[test]
    fn adaptive_truncation_stops_early() {
        let n = 1 << 20;
        let t = cos_sum_telescoped(n, 1.0f64, Truncation::default()).unwrap();
        assert!(t.terms_used < n - 2 && t.tail_bound > 0.0);
        assert!((t.value - cos_sum_direct(n, 1.0)).abs() <= t.tail_bound + 1e-12);
    }

    #[test]
    fn identity_errors() {
        assert!(matches!(cos_sum_telescoped(8, 0.0f64, Truncation::Full), Err(Error::SingularArgument(_))));
        assert!(matches!(cos_sum_telescoped(8, 2.0 * PI, Truncation::Full), Err(Error::SingularArgument(_))));
        assert!(matches!(cos_sum_telescoped(8, 1.0f64, Truncation::Cap(7)), Err(Error::InvalidTruncation { .. })));
        assert!(matches!(cos_sum_telescoped(8, 1.0f64, Truncation::Cap(0)), Err(Error::InvalidTruncation { .. })));
    }

    #[test]
    fn sine_sum_examples() {
        assert_eq!(sin_sum(37, 0.0f64), 0.0);
        assert!((sin_sum(1, PI / 2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sine_sums_stay_bounded() {
        let mut sup = 0.0f64;
        for j in 0..=12 {
            let n = 1usize << j;
            for i in 0..4096 {
                let u = -PI + 2.0 * PI * (i as f64 + 0.5) / 4096.0;
                sup = sup.max(sin_sum(n, u).abs());
            }
        }
        assert!(sup <= 2.0, "{sup}");
    }

    #[test]
    fn closed_equals_direct() {
        let e = log_kernel_closed(16, 0.5f64, 0.7, Truncation::Cap(14), 1e-6).unwrap();
        assert!((e.value - log_kernel_direct(16, 0.5, 0.7)).abs() < 1e-9);
        let sum: f64 = e.terms.iter().sum::<f64>() / e.harmonic;
        assert!((e.value - sum).abs() <= e.truncation_bound + 1e-10);
    }

    #[test]
    fn closed_matches_direct_at_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 200 {
            let (x, y) = (rng.gen_range(0.1..3.0f64), rng.gen_range(0.1..3.0f64));
            let Ok(e) = log_kernel_closed(256, x, y, Truncation::default(), 1e-6) else { continue };
            let d = log_kernel_direct(256, x, y);
            assert!((e.value - d).abs() <= 1e-8 * d.abs().max(1.0) + e.truncation_bound, "({x}, {y})");
            checked += 1;
        }
    }

    #[test]
    fn closed_minimal_order() {
        for &(x, y) in &[(0.3f64, 1.1), (-2.0, 0.4), (3.0, -3.1)] {
            let e = log_kernel_closed(3, x, y, Truncation::Full, 1e-6).unwrap();
            assert!((e.value - log_kernel_direct(3, x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_refuses_singular_tubes() {
        for &(x, y) in &[(0.0f64, 1.0), (1.0, 1.0 + 1e-8), (1.0, -1.0), (2.0 * PI - 1e-9, 0.5)] {
            assert!(matches!(log_kernel_closed(8, x, y, Truncation::Full, 1e-6), Err(Error::SingularTube { .. })));
        }
        assert!(matches!(log_kernel_closed(2, 0.5f64, 0.7, Truncation::Full, 1e-6), Err(Error::OrderTooSmall { .. })));
    }

    #[test]
    fn closed_single_precision() {
        let e = log_kernel_closed(16, 0.5f32, 0.7, Truncation::Full, 1e-4).unwrap();
        assert!((e.value - log_kernel_direct(16, 0.5f32, 0.7)).abs() < 1e-4);
    }
}
