//! Summability means of quadratical partial sums.
//!
//! Every mean here is a combination `Σ_i w_i S_{i,i}`. Since `f̂(m, n)`
//! enters `S_{i,i}` exactly when `max(|m|, |n|) ≤ i`, each mean is also a
//! spectral multiplier `λ(max(|m|, |n|))` with `λ(k) = Σ_{i ≥ k} w_i`. The
//! pointwise and grid evaluators use that form.
//!
//! The Riesz logarithmic mean is normalised by `l_{n-1}` so that it fixes
//! constants exactly.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{weighted_spectral_sum, GridFunction2D, SpectralCoeffs};
use crate::kernels::log_kernel_direct_table;
use crate::reduce::{par_map_indexed, tree_sum};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanKind {
    NorlundLog,
    Marcinkiewicz,
    RieszLog,
}

impl MeanKind {
    pub fn label(&self) -> &'static str {
        match self {
            MeanKind::NorlundLog => "norlund-log",
            MeanKind::Marcinkiewicz => "marcinkiewicz",
            MeanKind::RieszLog => "riesz-log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanSpec {
    pub kind: MeanKind,
    pub n: usize,
}

impl MeanSpec {
    pub fn new(kind: MeanKind, n: usize) -> Result<Self> {
        let min = if kind == MeanKind::RieszLog { 2 } else { 1 };
        if n < min {
            return Err(Error::OrderTooSmall { got: n, min });
        }
        Ok(Self { kind, n })
    }

    /// Largest frequency index the mean touches.
    pub fn required_bandwidth(&self) -> Result<usize> {
        let spec = Self::new(self.kind, self.n)?;
        Ok(match spec.kind {
            MeanKind::NorlundLog | MeanKind::RieszLog => spec.n - 1,
            MeanKind::Marcinkiewicz => spec.n,
        })
    }

    /// Weights `w_i` on `S_{i,i}`, `i = 0..=required_bandwidth`.
    pub fn weights<T: Real>(&self) -> Vec<T> {
        let n = self.n;
        match self.kind {
            MeanKind::NorlundLog => {
                let l = harmonic_number::<T>(n);
                (0..n).map(|i| T::one() / (l * T::from_count(n - i))).collect()
            }
            MeanKind::Marcinkiewicz => {
                let w = T::one() / T::from_count(n);
                (0..=n).map(|i| if i == 0 { T::zero() } else { w }).collect()
            }
            MeanKind::RieszLog => {
                let l = harmonic_number::<T>(n - 1);
                (0..n).map(|i| if i == 0 { T::zero() } else { T::one() / (l * T::from_count(i)) }).collect()
            }
        }
    }

    /// `λ(k) = Σ_{i ≥ k} w_i`.
    pub fn multiplier<T: Real>(&self, k: usize) -> T {
        let n = self.n;
        match self.kind {
            MeanKind::NorlundLog => {
                if k >= n {
                    T::zero()
                } else {
                    harmonic_number::<T>(n - k) / harmonic_number::<T>(n)
                }
            }
            MeanKind::Marcinkiewicz => {
                if k > n {
                    T::zero()
                } else {
                    T::from_count(n + 1 - k.max(1)) / T::from_count(n)
                }
            }
            MeanKind::RieszLog => {
                if k >= n {
                    T::zero()
                } else {
                    let tail = (k.max(1)..n).rev().map(|j| T::one() / T::from_count(j)).fold(T::zero(), |a, b| a + b);
                    tail / harmonic_number::<T>(n - 1)
                }
            }
        }
    }
}

/// `l_n = Σ_{k=1}^n 1/k`, summed from the small terms up; `l_0 = 0`.
pub fn harmonic_number<T: Real>(n: usize) -> T {
    (1..=n).rev().map(|k| T::one() / T::from_count(k)).fold(T::zero(), |a, b| a + b)
}

fn mean_at<T: Real>(c: &SpectralCoeffs<T>, spec: MeanSpec, x: T, y: T) -> Result<Complex<T>> {
    let band = spec.required_bandwidth()?;
    if band > c.m_band() || band > c.n_band() {
        return Err(Error::OutOfBandwidth { m: band, n: band, m_band: c.m_band(), n_band: c.n_band() });
    }
    let lambda: Vec<T> = (0..=band).map(|k| spec.multiplier(k)).collect();
    Ok(weighted_spectral_sum(c, band, band, x, y, |m, n| lambda[m.unsigned_abs().max(n.unsigned_abs()) as usize]))
}

/// `t_n(f; x, y) = (1/l_n) Σ_{i=0}^{n-1} S_{i,i}(f; x, y)/(n-i)`.
pub fn norlund_log_mean<T: Real>(c: &SpectralCoeffs<T>, n: usize, x: T, y: T) -> Result<Complex<T>> {
    mean_at(c, MeanSpec::new(MeanKind::NorlundLog, n)?, x, y)
}

/// `σ_n(f; x, y) = (1/n) Σ_{j=1}^{n} S_{j,j}(f; x, y)`.
pub fn marcinkiewicz_mean<T: Real>(c: &SpectralCoeffs<T>, n: usize, x: T, y: T) -> Result<Complex<T>> {
    mean_at(c, MeanSpec::new(MeanKind::Marcinkiewicz, n)?, x, y)
}

/// `(1/l_{n-1}) Σ_{k=1}^{n-1} S_{k,k}(f; x, y)/k`.
pub fn riesz_log_mean<T: Real>(c: &SpectralCoeffs<T>, n: usize, x: T, y: T) -> Result<Complex<T>> {
    mean_at(c, MeanSpec::new(MeanKind::RieszLog, n)?, x, y)
}

/// Minimum grid size (per `order`) for `mean_via_kernel`.
pub const KERNEL_QUADRATURE_OVERSAMPLING: usize = 8;

/// `t_n(f; x, y) = (1/π²) ∬ f(s,t) F_n(x-s, y-t) ds dt` by the rectangle rule.
///
/// `∫ D_k = π` over a period, so `F_n` has mass `π²` and the factor makes
/// constants fixed.
///
/// Zero samples are skipped, so sparse inputs (indicators) cost only their
/// support.
pub fn mean_via_kernel<T: Real>(f: &GridFunction2D<T>, n: usize, x: T, y: T) -> Result<T> {
    if n == 0 {
        return Err(Error::OrderTooSmall { got: 0, min: 1 });
    }
    if !f.is_real() {
        return Err(Error::InvalidParameter("kernel-convolution mean needs a real grid function".into()));
    }
    let g = f.grid_size();
    if g < KERNEL_QUADRATURE_OVERSAMPLING * n {
        return Err(Error::Resolution { what: "kernel-convolution mean", needed: KERNEL_QUADRATURE_OVERSAMPLING * n, got: g });
    }
    let active_rows: Vec<usize> = (0..g).filter(|&i| (0..g).any(|j| f.get(i, j).re != T::zero())).collect();
    let active_cols: Vec<usize> = (0..g).filter(|&j| (0..g).any(|i| f.get(i, j).re != T::zero())).collect();
    let xs: Vec<T> = active_rows.iter().map(|&i| x - f.node(i)).collect();
    let ys: Vec<T> = active_cols.iter().map(|&j| y - f.node(j)).collect();
    let (dx, dy, w) = log_kernel_direct_table(n, &xs, &ys);
    let rows: Vec<T> = par_map_indexed(active_rows.len(), |a| {
        let i = active_rows[a];
        let terms: Vec<T> = active_cols
            .iter()
            .enumerate()
            .filter_map(|(b, &j)| {
                let v = f.get(i, j).re;
                if v == T::zero() {
                    return None;
                }
                let k: Vec<T> = (0..n).map(|k| dx[a * n + k] * dy[b * n + k] * w[k]).collect();
                Some(v * tree_sum(&k))
            })
            .collect();
        tree_sum(&terms)
    });
    Ok(tree_sum(&rows) * f.cell_area() / (T::PI() * T::PI()))
}

/// Rectangle-rule `∬ |f - g|`.
pub fn l1_distance<T: Real>(f: &GridFunction2D<T>, g: &GridFunction2D<T>) -> Result<T> {
    if f.grid_size() != g.grid_size() {
        return Err(Error::GridMismatch(f.grid_size(), g.grid_size()));
    }
    let diffs: Vec<T> = f.values().iter().zip(g.values()).map(|(a, b)| (a - b).norm()).collect();
    Ok(tree_sum(&diffs) * f.cell_area())
}

/// Both sides of `‖t_n f - f‖₁ ≤ (1/l_n) Σ_{k<n} ‖S_{kk} f - f‖₁/(n-k)`.
pub fn norlund_triangle_bound<T: Real>(c: &SpectralCoeffs<T>, f: &GridFunction2D<T>, n: usize) -> Result<(T, T)> {
    use crate::fourier::{evaluate_grid, Summation};
    let spec = MeanSpec::new(MeanKind::NorlundLog, n)?;
    let lhs = l1_distance(&evaluate_grid(c, &Summation::Mean(spec))?, f)?;
    let w = spec.weights::<T>();
    let mut terms = Vec::with_capacity(n);
    for (k, wk) in w.iter().enumerate() {
        terms.push(*wk * l1_distance(&evaluate_grid(c, &Summation::Quad(k))?, f)?);
    }
    Ok((lhs, tree_sum(&terms)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{evaluate_grid, fourier_coeffs, quad_partial_sum, Summation};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn coeffs_of(g: usize, band: usize, f: impl Fn(f64, f64) -> C + Sync + Send) -> SpectralCoeffs<f64> {
        fourier_coeffs(&GridFunction2D::from_fn(g, f).unwrap(), band, band).unwrap()
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_number::<f64>(1), 1.0);
        assert_eq!(harmonic_number::<f64>(2), 1.5);
        assert!((harmonic_number::<f64>(4) - 25.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in 2..300 {
            for kind in [MeanKind::NorlundLog, MeanKind::Marcinkiewicz, MeanKind::RieszLog] {
                let s: f64 = MeanSpec::new(kind, n).unwrap().weights::<f64>().iter().sum();
                assert!((s - 1.0).abs() < 1e-14, "{kind:?} n={n}: {s}");
            }
        }
    }

    #[test]
    fn multiplier_is_tail_sum_of_weights() {
        for kind in [MeanKind::NorlundLog, MeanKind::Marcinkiewicz, MeanKind::RieszLog] {
            let spec = MeanSpec::new(kind, 17).unwrap();
            let w = spec.weights::<f64>();
            for k in 0..w.len() + 2 {
                let tail: f64 = w.iter().skip(k).sum();
                assert!((spec.multiplier::<f64>(k) - tail).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn constants_are_fixed() {
        let c = coeffs_of(16, 6, |_, _| C::new(1.0, 0.0));
        for n in 2..=6 {
            for v in [
                norlund_log_mean(&c, n, 0.3, 0.1).unwrap(),
                marcinkiewicz_mean(&c, n, -1.0, 2.0).unwrap(),
                riesz_log_mean(&c, n, 0.0, 0.0).unwrap(),
            ] {
                assert!((v - C::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_mode_examples() {
        let c = coeffs_of(16, 4, |x, y| C::from_polar(1.0, x + y));
        let (x, y) = (0.4, -0.9);
        let f = C::from_polar(1.0, x + y);
        assert!((norlund_log_mean(&c, 2, x, y).unwrap() - f * (2.0 / 3.0)).norm() < 1e-12);
        assert!((marcinkiewicz_mean(&c, 2, x, y).unwrap() - f).norm() < 1e-12);
        assert!((riesz_log_mean(&c, 3, x, y).unwrap() - f).norm() < 1e-12);
        let s11 = quad_partial_sum(&c, 1, x, y).unwrap();
        assert!((riesz_log_mean(&c, 2, x, y).unwrap() - s11).norm() < 1e-12);
    }

    // A pure mode at max-index d is damped by exactly l_{n-d}/l_n.
    #[test]
    fn norlund_weight_deficit() {
        let d = 3;
        let c = coeffs_of(128, 40, |x, y| C::from_polar(1.0, d as f64 * x - 2.0 * y));
        let (x, y) = (1.1, 0.2);
        let f = C::from_polar(1.0, d as f64 * x - 2.0 * y);
        for n in [4usize, 10, 41] {
            let expected = harmonic_number::<f64>(n - d) / harmonic_number::<f64>(n);
            assert!((norlund_log_mean(&c, n, x, y).unwrap() - f * expected).norm() < 1e-12);
        }
    }

    #[test]
    fn means_agree_with_explicit_partial_sum_combinations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c = SpectralCoeffs::from_fn(9, 9, 32, false, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).unwrap();
        let (x, y) = (0.77, -2.1);
        for kind in [MeanKind::NorlundLog, MeanKind::Marcinkiewicz, MeanKind::RieszLog] {
            let spec = MeanSpec::new(kind, 8).unwrap();
            let explicit: C = spec
                .weights::<f64>()
                .iter()
                .enumerate()
                .map(|(i, w)| quad_partial_sum(&c, i, x, y).unwrap() * *w)
                .sum();
            let v = mean_at(&c, spec, x, y).unwrap();
            assert!((v - explicit).norm() < 1e-12, "{kind:?}");
        }
        // σ_8 = (1/8) Σ_{j=1}^{8} S_{j,j}
        let direct: C = (1..=8).map(|j| quad_partial_sum(&c, j, x, y).unwrap()).sum::<C>() / 8.0;
        assert!((marcinkiewicz_mean(&c, 8, x, y).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn bandwidth_and_order_errors() {
        let c = coeffs_of(16, 3, |_, _| C::new(1.0, 0.0));
        assert!(matches!(norlund_log_mean(&c, 5, 0.0, 0.0), Err(Error::OutOfBandwidth { .. })));
        assert!(matches!(marcinkiewicz_mean(&c, 4, 0.0, 0.0), Err(Error::OutOfBandwidth { .. })));
        assert!(matches!(riesz_log_mean(&c, 1, 0.0, 0.0), Err(Error::OrderTooSmall { .. })));
        assert!(matches!(norlund_log_mean(&c, 0, 0.0, 0.0), Err(Error::OrderTooSmall { .. })));
    }

    #[test]
    fn kernel_path_on_constants() {
        let f = GridFunction2D::from_fn_real(32, |_, _| 1.0f64).unwrap();
        assert!((mean_via_kernel(&f, 4, 0.3, -0.2).unwrap() - 1.0).abs() < 1e-8);
        assert!(matches!(mean_via_kernel(&f, 8, 0.0, 0.0), Err(Error::Resolution { .. })));
    }

    #[test]
    fn kernel_path_matches_spectral_path() {
        let g = 256;
        let f = GridFunction2D::from_fn_real(g, |x: f64, y: f64| x.cos() * y.cos()).unwrap();
        let c = fourier_coeffs(&f, 8, 8).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.5, -1.2), (2.9, 3.0)] {
            let spectral = norlund_log_mean(&c, 8, x, y).unwrap().re;
            let conv = mean_via_kernel(&f, 8, x, y).unwrap();
            assert!((spectral - conv).abs() < 1e-6, "{spectral} vs {conv}");
        }
    }

    #[test]
    fn l1_examples() {
        let g = 256;
        let one = GridFunction2D::from_fn_real(g, |_, _| 1.0f64).unwrap();
        let zero = GridFunction2D::<f64>::zeros(g).unwrap();
        assert_eq!(l1_distance(&one, &one).unwrap(), 0.0);
        assert!((l1_distance(&one, &zero).unwrap() - 4.0 * PI * PI).abs() < 1e-10);
        let cosx = GridFunction2D::from_fn_real(g, |x: f64, _| x.cos()).unwrap();
        assert!((l1_distance(&cosx, &zero).unwrap() - 8.0 * PI).abs() < 1e-2);
        let small = GridFunction2D::<f64>::zeros(32).unwrap();
        assert!(matches!(l1_distance(&one, &small), Err(Error::GridMismatch(256, 32))));
    }

    #[test]
    fn regularity_on_a_trig_polynomial() {
        let g = 256;
        let f = GridFunction2D::from_fn_real(g, |x: f64, y: f64| 1.0 + x.cos() + 0.5 * (2.0 * y).sin() * x.sin()).unwrap();
        let c = fourier_coeffs(&f, 127, 127).unwrap();
        let mut errs = Vec::new();
        for n in [4usize, 16, 64, 128] {
            let t = evaluate_grid(&c, &Summation::Mean(MeanSpec::new(MeanKind::NorlundLog, n).unwrap())).unwrap();
            errs.push(l1_distance(&t, &f).unwrap());
        }
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        // Beyond the grid's band the error is Σ (λ(k) - 1) f̂ e^{...}, evaluated from f's known modes.
        let spec = MeanSpec::new(MeanKind::NorlundLog, 1 << 14).unwrap();
        let err = GridFunction2D::from_fn_real(64, |x: f64, y: f64| {
            (spec.multiplier::<f64>(1) - 1.0) * x.cos() + (spec.multiplier::<f64>(2) - 1.0) * 0.5 * (2.0 * y).sin() * x.sin()
        })
        .unwrap();
        let e = l1_distance(&err, &GridFunction2D::zeros(64).unwrap()).unwrap();
        assert!(e < 1e-3, "{e}");
    }

    #[test]
    fn triangle_bound_holds() {
        let g = 64;
        let f = GridFunction2D::from_fn_real(g, |x: f64, _| x.abs()).unwrap();
        let c = fourier_coeffs(&f, 16, 16).unwrap();
        for n in [2usize, 5, 8] {
            let (lhs, rhs) = norlund_triangle_bound(&c, &f, n).unwrap();
            assert!(lhs <= rhs + 1e-12, "n={n}: {lhs} > {rhs}");
        }
    }
}
