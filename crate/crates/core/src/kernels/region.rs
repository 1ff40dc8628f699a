use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Recognises closed-interval boundaries hit up to round-off.
const BOUNDARY_TOL: f64 = 1e-12;

/// `2^{2n}` as a float.
pub fn dyadic_order<T: Real>(n: u32) -> T {
    T::lit(4.0).powi(n as i32)
}

fn denom<T: Real>(n: u32) -> T {
    dyadic_order::<T>(n) + T::lit(0.5)
}

/// `α_{mn} = (arccos(1/4) + 2πm) / (2^{2n} + 1/2)`.
pub fn alpha<T: Real>(m: usize, n: u32) -> T {
    (T::lit(0.25).acos() + (T::PI() + T::PI()) * T::from_count(m)) / denom(n)
}

/// `β_{mn} = (π/2 + 2πm) / (2^{2n} + 1/2)`.
pub fn beta<T: Real>(m: usize, n: u32) -> T {
    (T::FRAC_PI_2() + (T::PI() + T::PI()) * T::from_count(m)) / denom(n)
}

/// `γ_n = (π/2 - arccos(1/4)) / (4 (2^{2n} + 1/2))`.
pub fn gamma<T: Real>(n: u32) -> T {
    (T::FRAC_PI_2() - T::lit(0.25).acos()) / (T::lit(4.0) * denom(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionKind {
    /// `I_n`: the rectangles `[α_m, β_m] × [α_l, β_l]`.
    I,
    /// `J_n`: each I-rectangle shrunk by `γ_n` on every side.
    J,
}

impl RegionKind {
    pub fn label(&self) -> &'static str {
        match self {
            RegionKind::I => "I",
            RegionKind::J => "J",
        }
    }
}

/// Axis-aligned rectangle `[x_lo, x_hi] × [y_lo, y_hi]` with its `(m, l)` index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect<T> {
    pub x_lo: T,
    pub x_hi: T,
    pub y_lo: T,
    pub y_hi: T,
    pub m: usize,
    pub l: usize,
}

impl<T: Real> Rect<T> {
    pub fn area(&self) -> T {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        (self.x_lo..=self.x_hi).contains(&x) && (self.y_lo..=self.y_hi).contains(&y)
    }

    /// `∬ dx dy / (xy)` over the rectangle (positive coordinates).
    pub fn inverse_product_integral(&self) -> T {
        (self.x_hi / self.x_lo).ln() * (self.y_hi / self.y_lo).ln()
    }

    fn disjoint_from(&self, other: &Self) -> bool {
        self.x_hi < other.x_lo || other.x_hi < self.x_lo || self.y_hi < other.y_lo || other.y_hi < self.y_lo
    }
}

/// Union of rectangles `I_n` or `J_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSpec<T> {
    pub n: u32,
    pub kind: RegionKind,
    pub m_max: usize,
    pub rectangles: Vec<Rect<T>>,
}

impl<T: Real> RegionSpec<T> {
    pub fn measure(&self) -> T {
        self.rectangles.iter().map(Rect::area).fold(T::zero(), |a, b| a + b)
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        self.rectangles.iter().any(|r| r.contains(x, y))
    }

    /// `∬_{region} dx dy/(xy)`, exact per rectangle.
    pub fn inverse_product_integral(&self) -> T {
        self.rectangles.iter().map(Rect::inverse_product_integral).fold(T::zero(), |a, b| a + b)
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let r = &self.rectangles;
        (0..r.len()).all(|i| (i + 1..r.len()).all(|j| r[i].disjoint_from(&r[j])))
    }
}

/// Builds `I_n` / `J_n` over `1 ≤ l, m ≤ m_max`, `m_max = 2^{n-3}` unless overridden.
pub fn build_region<T: Real>(n: u32, kind: RegionKind, m_max_override: Option<usize>) -> Result<RegionSpec<T>> {
    let m_max = match m_max_override {
        Some(m) => m,
        None if n >= 3 => 1usize << (n - 3),
        None => 0,
    };
    if m_max == 0 || n == 0 {
        return Err(Error::EmptyRegion(n));
    }
    let shrink = match kind {
        RegionKind::I => T::zero(),
        RegionKind::J => gamma::<T>(n),
    };
    let intervals: Vec<(T, T)> = (1..=m_max).map(|m| (alpha::<T>(m, n) + shrink, beta::<T>(m, n) - shrink)).collect();
    let mut rectangles = Vec::with_capacity(m_max * m_max);
    for (mi, &(x_lo, x_hi)) in intervals.iter().enumerate() {
        for (li, &(y_lo, y_hi)) in intervals.iter().enumerate() {
            rectangles.push(Rect { x_lo, x_hi, y_lo, y_hi, m: mi + 1, l: li + 1 });
        }
    }
    Ok(RegionSpec { n, kind, m_max, rectangles })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseCheck<T> {
    pub sin_val: T,
    pub cos_val: T,
    pub m: usize,
    pub ok: bool,
}

/// Checks `sin((2^{2n}+1/2)x) > 1/2` and `cos((2^{2n}+1/2)x) ≤ 1/4` for `x`
/// in some `[α_{mn}, β_{mn}]`.
pub fn phase_range_check<T: Real>(n: u32, x: T) -> Result<PhaseCheck<T>> {
    let two_pi = T::PI() + T::PI();
    let d = denom::<T>(n);
    let m_guess = (x * d / two_pi).floor();
    if m_guess < T::zero() {
        return Err(Error::NotInRegion { x: x.as_f64(), n });
    }
    let m = m_guess.to_usize().ok_or(Error::NotInRegion { x: x.as_f64(), n })?;
    let tol = T::lit(BOUNDARY_TOL) * x.abs().max(T::one());
    if x < alpha::<T>(m, n) - tol || x > beta::<T>(m, n) + tol {
        return Err(Error::NotInRegion { x: x.as_f64(), n });
    }
    let phase = d * x;
    let (sin_val, cos_val) = phase.sin_cos();
    let ok = sin_val > T::lit(0.5) && cos_val <= T::lit(0.25) + T::lit(BOUNDARY_TOL);
    Ok(PhaseCheck { sin_val, cos_val, m, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parameter_values() {
        // arccos(1/4)/4.5, (π/2)/4.5, (π/2 - arccos(1/4))/18
        assert!((alpha::<f64>(0, 1) - 0.292_914_682_589_515_1).abs() < 1e-15);
        assert!((beta::<f64>(0, 1) - 0.349_065_850_398_865_9).abs() < 1e-15);
        assert!((gamma::<f64>(1) - 0.014_037_791_952_337_7).abs() < 1e-15);
    }

    #[test]
    fn region_counts() {
        assert_eq!(build_region::<f64>(3, RegionKind::I, None).unwrap().rectangles.len(), 1);
        assert_eq!(build_region::<f64>(5, RegionKind::I, None).unwrap().rectangles.len(), 16);
        assert!(matches!(build_region::<f64>(2, RegionKind::I, None), Err(Error::EmptyRegion(2))));
        assert_eq!(build_region::<f64>(2, RegionKind::J, Some(1)).unwrap().rectangles.len(), 1);
        assert!(matches!(build_region::<f64>(6, RegionKind::I, Some(0)), Err(Error::EmptyRegion(6))));
    }

    #[test]
    fn measure_of_i4_by_direct_summation() {
        let r = build_region::<f64>(4, RegionKind::I, None).unwrap();
        let w = (PI / 2.0 - 0.25f64.acos()) / 256.5;
        // 2 intervals per axis of identical width
        assert!((r.measure() - 4.0 * w * w).abs() < 1e-18);
    }

    #[test]
    fn geometry_invariants() {
        for n in 3..=8 {
            let i = build_region::<f64>(n, RegionKind::I, None).unwrap();
            let j = build_region::<f64>(n, RegionKind::J, None).unwrap();
            assert!(i.pairwise_disjoint() && j.pairwise_disjoint());
            let g = gamma::<f64>(n);
            for (a, b) in i.rectangles.iter().zip(&j.rectangles) {
                assert!(a.x_lo > 0.0 && a.x_hi < PI / 4.0 && a.y_lo > 0.0 && a.y_hi < PI / 4.0);
                assert!((b.x_lo - a.x_lo - g).abs() < 1e-15 && (a.y_hi - b.y_hi - g).abs() < 1e-15);
                assert!(b.x_lo < b.x_hi && b.y_lo < b.y_hi);
            }
        }
    }

    #[test]
    fn phase_boundaries() {
        let a = phase_range_check(3, alpha::<f64>(1, 3)).unwrap();
        assert!((a.cos_val - 0.25).abs() < 1e-12 && a.ok);
        let b = phase_range_check(3, beta::<f64>(1, 3)).unwrap();
        assert!(b.cos_val.abs() < 1e-12 && (b.sin_val - 1.0).abs() < 1e-12 && b.ok);
        let mid = 0.5 * (alpha::<f64>(2, 4) + beta::<f64>(2, 4));
        let c = phase_range_check(4, mid).unwrap();
        assert!(c.sin_val >= 15f64.sqrt() / 4.0 && c.ok);
        assert_eq!(c.m, 2);
    }

    #[test]
    fn phase_outside_region_rejected() {
        let gap = 0.5 * (beta::<f64>(1, 3) + alpha::<f64>(2, 3));
        assert!(matches!(phase_range_check(3, gap), Err(Error::NotInRegion { .. })));
        assert!(phase_range_check(3, -0.1f64).is_err());
    }
}
