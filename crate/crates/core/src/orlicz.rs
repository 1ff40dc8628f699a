//! Young functions, Luxemburg norms and inclusion probes.
//!
//! The modular `∬ Q(|f|/k)` is evaluated on a list of `(magnitude, measure)`
//! pieces: grid cells for sampled functions, exact level sets for
//! [`SimpleFunction`]s.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::GridFunction2D;
use crate::reduce::{par_map, tree_sum};
use crate::scalar::Real;

/// Default relative bisection tolerance of [`luxemburg_norm`].
pub const DEFAULT_BISECTION_TOL: f64 = 1e-9;
/// Slack of [`unit_ball_member`].
pub const UNIT_BALL_SLACK: f64 = 1e-9;

const CHUNK: usize = 4096;
const MAX_BRACKET_STEPS: usize = 2200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum YoungKind {
    Log,
    Log2,
    Power(f64),
    Custom,
}

/// Convex `Q: [0, ∞) → [0, ∞)` with `Q(0) = 0`.
#[derive(Clone)]
pub struct YoungFunction<T> {
    name: String,
    kind: YoungKind,
    eval: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T> fmt::Debug for YoungFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction").field("name", &self.name).field("kind", &self.kind).finish()
    }
}

impl<T: Real> YoungFunction<T> {
    /// `u log(1+u)`.
    pub fn log() -> Self {
        Self { name: "u*log(1+u)".into(), kind: YoungKind::Log, eval: Arc::new(|u: T| u * u.ln_1p()) }
    }

    /// `u log²(1+u)`.
    pub fn log2() -> Self {
        Self {
            name: "u*log^2(1+u)".into(),
            kind: YoungKind::Log2,
            eval: Arc::new(|u: T| {
                let l = u.ln_1p();
                u * l * l
            }),
        }
    }

    /// `u^p`, `p > 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("power exponent {p} must exceed 1")));
        }
        let e = T::lit(p);
        Ok(Self { name: format!("u^{p}"), kind: YoungKind::Power(p), eval: Arc::new(move |u: T| u.powf(e)) })
    }

    /// `u log²(1+u) log log(16+u)`, strictly stronger than `u log²(1+u)`.
    pub fn log2_loglog() -> Self {
        Self::custom("u*log^2(1+u)*loglog(16+u)", |u: T| {
            let l = u.ln_1p();
            u * l * l * (T::lit(16.0) + u).ln().ln()
        })
    }

    /// Caller-provided evaluator; convexity is the caller's responsibility.
    pub fn custom<F>(name: &str, f: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self { name: name.into(), kind: YoungKind::Custom, eval: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> YoungKind {
        self.kind
    }

    /// `Q(u)` for `u ≥ 0`.
    #[inline]
    pub fn eval(&self, u: T) -> T {
        (self.eval)(u)
    }

    /// `Q(u)`, rejecting negative arguments.
    pub fn try_eval(&self, u: T) -> Result<T> {
        if u < T::zero() {
            return Err(Error::NegativeInput(u.as_f64()));
        }
        Ok(self.eval(u))
    }
}

/// `u log(1+u)`.
pub fn young_log<T: Real>(u: T) -> Result<T> {
    YoungFunction::log().try_eval(u)
}

/// `u log²(1+u)`.
pub fn young_log2<T: Real>(u: T) -> Result<T> {
    YoungFunction::log2().try_eval(u)
}

/// Finite positive combination `Σ h_i 1_{E_i}` stored as `(|h_i|, mes E_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimpleFunction<T> {
    pieces: Vec<(T, T)>,
}

impl<T: Real> SimpleFunction<T> {
    pub fn new(pieces: Vec<(T, T)>) -> Result<Self> {
        for &(h, m) in &pieces {
            if !h.is_finite() || !m.is_finite() {
                return Err(Error::NonFinite);
            }
            if m < T::zero() {
                return Err(Error::InvalidParameter(format!("negative measure {}", m)));
            }
        }
        Ok(Self { pieces: pieces.into_iter().map(|(h, m)| (h.abs(), m)).collect() })
    }

    /// `height · 1_E` with `mes E = measure`.
    pub fn indicator(height: T, measure: T) -> Result<Self> {
        Self::new(vec![(height, measure)])
    }

    pub fn pieces(&self) -> &[(T, T)] {
        &self.pieces
    }

    /// `c · f`.
    pub fn scaled(&self, c: T) -> Self {
        Self { pieces: self.pieces.iter().map(|&(h, m)| (h * c.abs(), m)).collect() }
    }

    /// `∬ |f|`.
    pub fn l1_norm(&self) -> T {
        tree_sum(&self.pieces.iter().map(|&(h, m)| h * m).collect::<Vec<_>>())
    }
}

/// Anything whose modular can be computed from `(|f|, measure)` pieces.
pub trait ModularDomain<T: Real> {
    /// `(|f|, measure)` pieces; errors on non-finite samples.
    fn magnitude_pieces(&self) -> Result<Vec<(T, T)>>;
}

impl<T: Real> ModularDomain<T> for GridFunction2D<T> {
    fn magnitude_pieces(&self) -> Result<Vec<(T, T)>> {
        let area = self.cell_area();
        self.values()
            .iter()
            .map(|v| {
                let a = v.norm();
                if a.is_finite() {
                    Ok((a, area))
                } else {
                    Err(Error::NonFinite)
                }
            })
            .collect()
    }
}

impl<T: Real> ModularDomain<T> for SimpleFunction<T> {
    fn magnitude_pieces(&self) -> Result<Vec<(T, T)>> {
        Ok(self.pieces.clone())
    }
}

fn modular_of_pieces<T: Real>(pieces: &[(T, T)], q: &YoungFunction<T>, k: T) -> T {
    if pieces.len() <= CHUNK {
        return tree_sum(&pieces.iter().map(|&(a, m)| m * q.eval(a / k)).collect::<Vec<_>>());
    }
    let chunks: Vec<&[(T, T)]> = pieces.chunks(CHUNK).collect();
    let partial = par_map(&chunks, |c| tree_sum(&c.iter().map(|&(a, m)| m * q.eval(a / k)).collect::<Vec<_>>()));
    tree_sum(&partial)
}

/// `∬ Q(|f|/k)`.
pub fn modular<T: Real, D: ModularDomain<T> + ?Sized>(f: &D, q: &YoungFunction<T>, k: T) -> Result<T> {
    if !(k > T::zero()) {
        return Err(Error::InvalidParameter(format!("modular scale k={} must be positive", k)));
    }
    Ok(modular_of_pieces(&f.magnitude_pieces()?, q, k))
}

/// `inf{k > 0 : ∬ Q(|f|/k) ≤ 1}` to relative tolerance `rel_tol`.
///
/// Brackets by doubling/halving from `k = 1`, then bisects; the returned `k`
/// is always feasible. Zero input has norm zero.
pub fn luxemburg_norm_tol<T: Real, D: ModularDomain<T> + ?Sized>(f: &D, q: &YoungFunction<T>, rel_tol: T) -> Result<T> {
    let pieces: Vec<(T, T)> = f.magnitude_pieces()?.into_iter().filter(|&(a, m)| a > T::zero() && m > T::zero()).collect();
    if pieces.is_empty() {
        return Ok(T::zero());
    }
    let feasible = |k: T| modular_of_pieces(&pieces, q, k) <= T::one();
    let two = T::lit(2.0);
    let (mut lo, mut hi) = (T::one(), T::one());
    if feasible(T::one()) {
        lo = hi / two;
        let mut steps = 0;
        while feasible(lo) {
            hi = lo;
            lo = lo / two;
            steps += 1;
            if steps > MAX_BRACKET_STEPS || lo.is_zero() {
                return Err(Error::NonFinite);
            }
        }
    } else {
        hi = lo * two;
        let mut steps = 0;
        while !feasible(hi) {
            lo = hi;
            hi = hi * two;
            steps += 1;
            if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
                return Err(Error::NonFinite);
            }
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// [`luxemburg_norm_tol`] at [`DEFAULT_BISECTION_TOL`].
pub fn luxemburg_norm<T: Real, D: ModularDomain<T> + ?Sized>(f: &D, q: &YoungFunction<T>) -> Result<T> {
    luxemburg_norm_tol(f, q, T::lit(DEFAULT_BISECTION_TOL))
}

/// `‖f‖_Q ≤ 1 + 1e-9`.
pub fn unit_ball_member<T: Real, D: ModularDomain<T> + ?Sized>(f: &D, q: &YoungFunction<T>) -> Result<bool> {
    Ok(luxemburg_norm(f, q)? <= T::one() + T::lit(UNIT_BALL_SLACK))
}

/// Norm report row `function,young,norm,modular_at_norm`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport<T> {
    pub function: String,
    pub young: String,
    pub norm: T,
    pub modular_at_norm: T,
}

impl<T: Real> NormReport<T> {
    pub fn compute<D: ModularDomain<T> + ?Sized>(function: &str, f: &D, q: &YoungFunction<T>, rel_tol: T) -> Result<Self> {
        let norm = luxemburg_norm_tol(f, q, rel_tol)?;
        let modular_at_norm = if norm > T::zero() { modular(f, q, norm)? } else { T::zero() };
        Ok(Self { function: function.into(), young: q.name().into(), norm, modular_at_norm })
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.12e},{:.12e}", self.function, self.young, self.norm, self.modular_at_norm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InclusionWeight {
    /// `u log u`: the `L log L` test.
    Log,
    /// `u log² u`: the `L log²L` test.
    Log2,
}

impl InclusionWeight {
    pub fn label(&self) -> &'static str {
        match self {
            InclusionWeight::Log => "log",
            InclusionWeight::Log2 => "log2",
        }
    }
}

/// `u log^p(u)/Q(u)` sampled along a grid, with its maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionProbe<T> {
    pub u: Vec<T>,
    pub values: Vec<T>,
    pub max: T,
}

impl<T: Real> InclusionProbe<T> {
    /// Whether the probe is non-decreasing along the grid.
    pub fn increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Probes the inclusion criterion `limsup u log^p u / Q(u)` on `u_grid`.
pub fn inclusion_deficit<T: Real>(q: &YoungFunction<T>, weight: InclusionWeight, u_grid: &[T]) -> Result<InclusionProbe<T>> {
    if u_grid.iter().any(|&u| !(u > T::zero())) || u_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("u_grid must be positive and strictly increasing".into()));
    }
    let values: Vec<T> = u_grid
        .iter()
        .map(|&u| {
            let l = u.ln();
            let w = match weight {
                InclusionWeight::Log => l,
                InclusionWeight::Log2 => l * l,
            };
            u * w / q.eval(u)
        })
        .collect();
    let max = values.iter().fold(T::neg_infinity(), |a, &b| a.max(b));
    Ok(InclusionProbe { u: u_grid.to_vec(), values, max })
}

/// `2^1, 2^2, …, 2^40`.
pub fn dyadic_u_grid<T: Real>() -> Vec<T> {
    (1..=40).map(|j| T::lit(2.0).powi(j)).collect()
}
