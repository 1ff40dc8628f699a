use serde::Serialize;

use super::closed::{log_kernel_closed, Truncation, DEFAULT_SINGULAR_EPS};
use super::direct::log_kernel_direct;
use super::region::{build_region, dyadic_order, gamma, Rect, RegionKind};
use crate::error::Result;
use crate::reduce::par_map;
use crate::scalar::Real;

/// Per-axis stratum count used when the caller has no preference.
pub const DEFAULT_SAMPLES_PER_RECT: usize = 9;

/// Centres of an `s × s` grid of equal cells, followed by the four corners.
pub fn stratified_samples<T: Real>(rect: &Rect<T>, s: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(s * s + 4);
    let sf = T::from_count(s.max(1));
    let wx = (rect.x_hi - rect.x_lo) / sf;
    let wy = (rect.y_hi - rect.y_lo) / sf;
    let half = T::lit(0.5);
    for i in 0..s {
        for j in 0..s {
            out.push((rect.x_lo + (T::from_count(i) + half) * wx, rect.y_lo + (T::from_count(j) + half) * wy));
        }
    }
    out.extend([(rect.x_lo, rect.y_lo), (rect.x_hi, rect.y_lo), (rect.x_lo, rect.y_hi), (rect.x_hi, rect.y_hi)]);
    out
}

/// Extremum of a sampled quantity and the first sample attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionExtremum<T> {
    pub value: T,
    pub argmin: (T, T),
    pub samples: usize,
}

impl<T: Real> RegionExtremum<T> {
    fn from_samples(points: &[(T, T)], values: &[T], maximize: bool) -> Self {
        let mut best = 0;
        for (k, &v) in values.iter().enumerate() {
            let better = if maximize { v > values[best] } else { v < values[best] };
            if better {
                best = k;
            }
        }
        match values.get(best) {
            Some(&value) => RegionExtremum { value, argmin: points[best], samples: values.len() },
            None => RegionExtremum { value: T::nan(), argmin: (T::nan(), T::nan()), samples: 0 },
        }
    }
}

/// Sampled numeric content of the `c/(xy)` lower bound at `N = 2^{2n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport<T> {
    pub n: u32,
    pub order: usize,
    /// `min x·y·F_N(x, y)` over sampled `I_n`.
    pub i_min: RegionExtremum<T>,
    /// `min x·y·min_{s,t ∈ {0, γ_n}} F_N(x-s, y-t)` over sampled `J_n`.
    pub j_min: RegionExtremum<T>,
    /// `min x·y·(R_1+R_2+R_3+R_4)/n` over sampled `I_n`.
    pub main_min: RegionExtremum<T>,
    /// `max x·y·Σ_{j≥5} |R_j|` over sampled `I_n`.
    pub remainder_max: RegionExtremum<T>,
    /// `max x·y·Σ_{j≥5} |R_j|/l_N` over sampled `I_n`.
    pub remainder_max_normalized: T,
    /// Samples inside a singular tube, excluded from the term breakdown.
    pub closed_skipped: usize,
}

impl<T: Real> LemmaReport<T> {
    /// Rows `n,kind,min_ratio,argmin_x,argmin_y,samples` for `I` and `J`.
    pub fn csv_rows(&self) -> Vec<String> {
        [("I", &self.i_min), ("J", &self.j_min)]
            .iter()
            .map(|(kind, e)| format!("{},{},{:.12e},{:.12e},{:.12e},{}", self.n, kind, e.value, e.argmin.0, e.argmin.1, e.samples))
            .collect()
    }
}

fn region_samples<T: Real>(n: u32, kind: RegionKind, s: usize, m_max: Option<usize>) -> Result<Vec<(T, T)>> {
    let region = build_region::<T>(n, kind, m_max)?;
    Ok(region.rectangles.iter().flat_map(|r| stratified_samples(r, s)).collect())
}

/// Samples `x·y·F_{2^{2n}}` on `I_n` and `J_n` (the latter at the four
/// corner offsets of `[0, γ_n]²`) together with the main/remainder split.
pub fn lemma_main_check<T: Real>(n: u32, samples_per_rect: usize, m_max_override: Option<usize>) -> Result<LemmaReport<T>> {
    let i_pts = region_samples::<T>(n, RegionKind::I, samples_per_rect, m_max_override)?;
    let j_pts = region_samples::<T>(n, RegionKind::J, samples_per_rect, m_max_override)?;
    let order = dyadic_order::<f64>(n) as usize;
    let nf = T::from_count(n as usize);
    let eps = T::lit(DEFAULT_SINGULAR_EPS);

    let i_vals: Vec<(T, Option<(T, T, T)>)> = par_map(&i_pts, |&(x, y)| {
        let xy = x * y;
        let direct = xy * log_kernel_direct(order, x, y);
        let split = log_kernel_closed(order, x, y, Truncation::Full, eps)
            .ok()
            .map(|e| (xy * e.main_terms() / nf, xy * e.remainder_abs(), xy * e.remainder_abs() / e.harmonic));
        (direct, split)
    });
    let g = gamma::<T>(n);
    let j_vals: Vec<T> = par_map(&j_pts, |&(x, y)| {
        let f = |s: T, t: T| log_kernel_direct(order, x - s, y - t);
        let lo = f(T::zero(), T::zero()).min(f(g, T::zero())).min(f(T::zero(), g)).min(f(g, g));
        x * y * lo
    });

    let direct: Vec<T> = i_vals.iter().map(|v| v.0).collect();
    let (mut split_pts, mut mains, mut rems, mut rems_norm) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (p, v) in i_pts.iter().zip(&i_vals) {
        if let Some((m, r, rn)) = v.1 {
            split_pts.push(*p);
            mains.push(m);
            rems.push(r);
            rems_norm.push(rn);
        }
    }
    Ok(LemmaReport {
        n,
        order,
        i_min: RegionExtremum::from_samples(&i_pts, &direct, false),
        j_min: RegionExtremum::from_samples(&j_pts, &j_vals, false),
        main_min: RegionExtremum::from_samples(&split_pts, &mains, false),
        remainder_max: RegionExtremum::from_samples(&split_pts, &rems, true),
        remainder_max_normalized: rems_norm.iter().fold(T::neg_infinity(), |a, &b| a.max(b)),
        closed_skipped: i_pts.len() - split_pts.len(),
    })
}

/// Smallest `n` in the (sorted) reports from which on every `I_n` minimum is positive.
pub fn locate_n0<T: Real>(reports: &[LemmaReport<T>]) -> Option<u32> {
    let mut n0 = None;
    for r in reports.iter().rev() {
        if r.i_min.value > T::zero() {
            n0 = Some(r.n);
        } else {
            break;
        }
    }
    n0
}
