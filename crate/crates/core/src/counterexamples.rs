//! Normalized-bump constructions and the quantitative divergence experiments
//! built on them.
//!
//! The bump `b_n = 1_{[0,γ_n]²}/γ_n²` is an approximate identity, so
//! `t_{2^{2n}}(b_n; x, y)` is an average of `F_{2^{2n}}` over a `γ_n`-square
//! and inherits the `c/(xy)` lower bound on `J_n`. Everything here runs in
//! `f64`.
//!
//! Report types expose `csv_header`/`csv_row`; files start with a
//! `# display=<label>` comment naming the inequality a report shadows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::GridFunction2D;
use crate::kernels::{build_region, dyadic_order, gamma, kernel_weights, stratified_samples, RegionExtremum, RegionKind, Rect, RegionSpec};
use crate::orlicz::{luxemburg_norm, modular, SimpleFunction, YoungFunction};
use crate::reduce::{par_map, tree_sum};

/// `π/2 - arccos(1/4)`, the phase window width.
fn window() -> f64 {
    std::f64::consts::FRAC_PI_2 - 0.25f64.acos()
}

/// `((π/2 - arccos(1/4))/8)²`.
pub fn bump_prefactor() -> f64 {
    let w = window() / 8.0;
    w * w
}

/// `# display=<label>`.
pub fn display_comment(label: &str) -> String {
    format!("# display={label}")
}

/// Grid realization of `1_{[0,γ_n]²}/γ_n²`, scaled by [`bump_prefactor`] if requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpSpec {
    pub n: u32,
    pub scaled: bool,
    pub grid_size: usize,
    pub gamma: f64,
    pub height: f64,
    /// Grid cells per axis covered by the snapped support.
    pub cells: usize,
    /// Snapped support is `[0, support_hi]²`.
    pub support_hi: f64,
    pub snapped_measure: f64,
    /// `|snapped_measure/γ_n² - 1|`.
    pub snapping_error: f64,
}

impl BumpSpec {
    /// `height · snapped_measure`.
    pub fn integral(&self) -> f64 {
        self.height * self.snapped_measure
    }
}

/// Snapping of `[0, γ_n]²` to the grid without allocating it.
///
/// The support rounds `γ_n` to a whole number of cells and needs at least two.
pub fn bump_spec(n: u32, scaled: bool, grid_size: usize) -> Result<BumpSpec> {
    if grid_size < 4 || !grid_size.is_power_of_two() {
        return Err(Error::InvalidGridSize(grid_size));
    }
    let g = gamma::<f64>(n);
    let h = 2.0 * std::f64::consts::PI / grid_size as f64;
    let cells = (g / h).round() as usize;
    if cells < 2 {
        let needed = (3.0 * std::f64::consts::PI / g).ceil() as usize;
        return Err(Error::Resolution { what: "bump support", needed: needed.next_power_of_two(), got: grid_size });
    }
    let support_hi = cells as f64 * h;
    let snapped_measure = support_hi * support_hi;
    let height = if scaled { bump_prefactor() } else { 1.0 } / (g * g);
    Ok(BumpSpec { n, scaled, grid_size, gamma: g, height, cells, support_hi, snapped_measure, snapping_error: (snapped_measure / (g * g) - 1.0).abs() })
}

/// Grid bump: value `height` on the `cells × cells` block starting at node `x = 0`.
pub fn make_bump(n: u32, scaled: bool, grid_size: usize) -> Result<(GridFunction2D<f64>, BumpSpec)> {
    let spec = bump_spec(n, scaled, grid_size)?;
    let origin = grid_size / 2;
    let mut values = vec![num_complex::Complex::new(0.0, 0.0); grid_size * grid_size];
    for i in origin..origin + spec.cells {
        for j in origin..origin + spec.cells {
            values[i * grid_size + j].re = spec.height;
        }
    }
    Ok((GridFunction2D::from_values(grid_size, values, true)?, spec))
}

/// Exact bump as a simple function on `[0, γ_n]²`.
pub fn bump_simple(n: u32, scaled: bool) -> SimpleFunction<f64> {
    let g = gamma::<f64>(n);
    let h = if scaled { bump_prefactor() } else { 1.0 } / (g * g);
    SimpleFunction::indicator(h, g * g).expect("finite bump")
}

/// `(1/γ) ∫_0^γ D_k(x - s) ds` for `k = 0..order`, from the antiderivative
/// `u/2 + Σ_{j≤k} sin(ju)/j`.
fn averaged_dirichlet_row(order: usize, x: f64, g: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(order);
    let centre = x - 0.5 * g;
    let mut acc = 0.5;
    out.push(acc);
    for j in 1..order {
        let jf = j as f64;
        acc += 2.0 * (jf * centre).cos() * (0.5 * jf * g).sin() / (jf * g);
        out.push(acc);
    }
    out
}

/// `t_{2^{2n}}(b_n; x, y) = (1/π²) · mean of F_{2^{2n}}(x-s, y-t)` over
/// `[0, γ_n]²`, integrated exactly.
pub fn bump_mean_at(n: u32, scaled: bool, x: f64, y: f64) -> f64 {
    let order = dyadic_order::<f64>(n) as usize;
    let g = gamma::<f64>(n);
    let a = averaged_dirichlet_row(order, x, g);
    let b = averaged_dirichlet_row(order, y, g);
    let w = kernel_weights::<f64>(order);
    let terms: Vec<f64> = (0..order).map(|k| a[k] * b[k] * w[k]).collect();
    let scale = if scaled { bump_prefactor() } else { 1.0 } / (std::f64::consts::PI * std::f64::consts::PI);
    scale * tree_sum(&terms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpMeanReport {
    pub n: u32,
    pub scaled: bool,
    /// `min x·y·t_{2^{2n}}(b_n; x, y)` over sampled `J_n`.
    pub min_ratio: RegionExtremum<f64>,
}

impl BumpMeanReport {
    pub fn csv_header() -> &'static str {
        "n,scaled,min_ratio,argmin_x,argmin_y,samples"
    }

    pub fn csv_row(&self) -> String {
        let e = &self.min_ratio;
        format!("{},{},{:.12e},{:.12e},{:.12e},{}", self.n, self.scaled, e.value, e.argmin.0, e.argmin.1, e.samples)
    }
}

fn j_samples(region: &RegionSpec<f64>, samples_per_rect: usize) -> Vec<(f64, f64)> {
    region.rectangles.iter().flat_map(|r| stratified_samples(r, samples_per_rect)).collect()
}

/// Minimum of `x·y·t_{2^{2n}}(b_n)` over stratified samples of `J_n`.
pub fn bump_mean_lower_bound(n: u32, samples_per_rect: usize, scaled: bool) -> Result<BumpMeanReport> {
    let region = build_region::<f64>(n, RegionKind::J, None)?;
    let pts = j_samples(&region, samples_per_rect);
    let vals = par_map(&pts, |&(x, y)| x * y * bump_mean_at(n, scaled, x, y));
    let mut best = 0;
    for (k, &v) in vals.iter().enumerate() {
        if v < vals[best] {
            best = k;
        }
    }
    Ok(BumpMeanReport { n, scaled, min_ratio: RegionExtremum { value: vals[best], argmin: pts[best], samples: vals.len() } })
}

/// `∬_{J_n} dx dy/(xy)`, exact per rectangle.
pub fn geometric_sum(n: u32) -> Result<f64> {
    Ok(build_region::<f64>(n, RegionKind::J, None)?.inverse_product_integral())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Growth {
    pub n: u32,
    /// Midpoint-rule `∬_{J_n} |t_{2^{2n}}(scaled bump)|`.
    pub l1_lower: f64,
    pub geometric_sum: f64,
}

impl L1Growth {
    pub fn csv_header() -> &'static str {
        "n,l1_lower,geometric_sum,geometric_sum_over_n2"
    }

    pub fn csv_row(&self) -> String {
        let n2 = f64::from(self.n * self.n);
        format!("{},{:.12e},{:.12e},{:.12e}", self.n, self.l1_lower, self.geometric_sum, self.geometric_sum / n2)
    }
}

fn midpoint_cells(r: &Rect<f64>, s: usize) -> (Vec<(f64, f64)>, f64) {
    let (wx, wy) = ((r.x_hi - r.x_lo) / s as f64, (r.y_hi - r.y_lo) / s as f64);
    let pts = (0..s)
        .flat_map(|i| (0..s).map(move |j| (r.x_lo + (i as f64 + 0.5) * wx, r.y_lo + (j as f64 + 0.5) * wy)))
        .collect();
    (pts, wx * wy)
}

/// `l1_lower(n)` on an `s × s` midpoint rule per rectangle, with `geometric_sum(n)`.
pub fn l1_growth(n: u32, samples_per_rect: usize) -> Result<L1Growth> {
    let region = build_region::<f64>(n, RegionKind::J, None)?;
    let s = samples_per_rect.max(1);
    let per_rect: Vec<f64> = par_map(&region.rectangles, |r| {
        let (pts, cell) = midpoint_cells(r, s);
        let vals: Vec<f64> = pts.iter().map(|&(x, y)| bump_mean_at(n, true, x, y).abs()).collect();
        tree_sum(&vals) * cell
    });
    Ok(L1Growth { n, l1_lower: tree_sum(&per_rect), geometric_sum: region.inverse_product_integral() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorNormProbe {
    pub n: u32,
    pub young: String,
    /// `l1_lower(n)·2^{4n}/Q(2^{4n})`.
    pub ratio: f64,
    /// `n²·2^{4n}/Q(2^{4n})`, the growth the lower bound predicts.
    pub predicted: f64,
}

impl OperatorNormProbe {
    pub fn csv_header() -> &'static str {
        "n,young,ratio,predicted"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{:.12e}", self.n, self.young, self.ratio, self.predicted)
    }
}

/// Lower bound of `‖t_{2^{2n}}‖_{L_Q → L¹}` from `l1_lower` and `‖b‖_Q ≲ Q(2^{4n})/2^{4n}`.
pub fn operator_norm_probe(growth: &L1Growth, q: &YoungFunction<f64>) -> OperatorNormProbe {
    let u = dyadic_order::<f64>(2 * growth.n);
    let inv = u / q.eval(u);
    let n2 = f64::from(growth.n * growth.n);
    OperatorNormProbe { n: growth.n, young: q.name().into(), ratio: growth.l1_lower * inv, predicted: n2 * inv }
}

/// `mes{(x, y) ∈ [a,b]×[c,d] : xy < τ}` for `0 < a`, `0 < c`.
pub fn area_below_hyperbola(r: &Rect<f64>, tau: f64) -> f64 {
    if !(tau > 0.0) {
        return 0.0;
    }
    if tau.is_infinite() {
        return r.area();
    }
    let (a, b, c, d) = (r.x_lo, r.x_hi, r.y_lo, r.y_hi);
    let full_end = (tau / d).clamp(a, b);
    let part_end = (tau / c).clamp(a, b);
    (d - c) * (full_end - a) + tau * (part_end / full_end).ln() - c * (part_end - full_end)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceedanceReport {
    pub n: u32,
    pub c1: f64,
    pub c_lower: f64,
    /// Area of `{(x, y) ∈ J_n : c_lower/(xy) > c1·2^{3n}}`.
    pub measure: f64,
    /// `measure · 2^{3n}/n`.
    pub bound: f64,
    pub region_measure: f64,
}

impl ExceedanceReport {
    pub fn csv_header() -> &'static str {
        "n,c1,c_lower,measure,bound,region_measure"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}", self.n, self.c1, self.c_lower, self.measure, self.bound, self.region_measure)
    }
}

/// Measure of the part of `J_n` where `t_{2^{2n}}(b_n) ≥ c_lower/(xy)` certifies
/// `|t| > c1·2^{3n}`, computed exactly per rectangle.
pub fn exceedance_measure(n: u32, c1: f64, c_lower: f64) -> Result<ExceedanceReport> {
    if !(c1 >= 0.0) || !(c_lower > 0.0) {
        return Err(Error::InvalidParameter(format!("need c1 >= 0 and c_lower > 0, got {c1}, {c_lower}")));
    }
    let region = build_region::<f64>(n, RegionKind::J, None)?;
    let scale = 2f64.powi(3 * n as i32);
    let tau = if c1 == 0.0 { f64::INFINITY } else { c_lower / (c1 * scale) };
    let areas: Vec<f64> = region.rectangles.iter().map(|r| area_below_hyperbola(r, tau)).collect();
    let measure = tree_sum(&areas);
    Ok(ExceedanceReport { n, c1, c_lower, measure, bound: measure * scale / f64::from(n), region_measure: region.measure() })
}

/// `max{l ≥ 1 : β_{ln} ≤ 1/(2^{3n}(β_{mn} - γ_n)) + γ_n}`, or 0 if no `l` qualifies.
pub fn r_nm(n: u32, m: usize) -> Result<usize> {
    let m_max = if n >= 3 { 1usize << (n - 3) } else { 0 };
    if m == 0 || m > m_max {
        return Err(Error::InvalidParameter(format!("m={m} outside 1..={m_max} at n={n}")));
    }
    use crate::kernels::beta;
    let g = gamma::<f64>(n);
    let limit = 1.0 / (2f64.powi(3 * n as i32) * (beta::<f64>(m, n) - g)) + g;
    let mut l = 0;
    while beta::<f64>(l + 1, n) <= limit {
        l += 1;
    }
    Ok(l)
}

/// `min` and `max` of `r_nm(n, m)·m/2^n` over `1 ≤ m ≤ 2^{n-3}`.
pub fn r_nm_ratio_range(n: u32) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::EmptyRegion(n));
    }
    let scale = 2f64.powi(n as i32);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for m in 1..=(1usize << (n - 3)) {
        let v = r_nm(n, m)? as f64 * m as f64 / scale;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// `Q(2^{4n})/2^{4n} ≥ 4`.
pub fn cond1(n: u32, q: &YoungFunction<f64>) -> bool {
    let u = dyadic_order::<f64>(2 * n);
    q.eval(u) / u >= 4.0
}

/// `2^{4n-1}/Q(2^{4n}) · 1_E/γ_n²` with `mes E = γ_n²`.
pub fn xi_rescaled_bump(n: u32, q: &YoungFunction<f64>) -> SimpleFunction<f64> {
    let u = dyadic_order::<f64>(2 * n);
    let g = gamma::<f64>(n);
    SimpleFunction::indicator(0.5 * u / q.eval(u) / (g * g), g * g).expect("finite rescaled bump")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub label: String,
    pub norm: f64,
    pub modular: f64,
}

/// `‖f‖_Q ≤ c (1 + ∬ Q(|f|))` over a family, with `c` fitted as the worst ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateA {
    pub young: String,
    pub rows: Vec<EstimateRow>,
    pub c_fit: f64,
}

impl EstimateA {
    /// Whether one constant `c` covers every row.
    pub fn holds_with(&self, c: f64) -> bool {
        self.rows.iter().all(|r| r.norm <= c * (1.0 + r.modular))
    }
}

/// Fits the constant of `‖f‖_Q ≤ c(1 + ∬Q(|f|))` on labelled simple functions.
pub fn estimate_a_check(family: &[(String, SimpleFunction<f64>)], q: &YoungFunction<f64>) -> Result<EstimateA> {
    let mut rows = Vec::with_capacity(family.len());
    for (label, f) in family {
        rows.push(EstimateRow { label: label.clone(), norm: luxemburg_norm(f, q)?, modular: modular(f, q, 1.0)? });
    }
    let c_fit = rows.iter().map(|r| r.norm / (1.0 + r.modular)).fold(0.0, f64::max);
    Ok(EstimateA { young: q.name().into(), rows, c_fit })
}
