//! The logarithmic-mean kernel
//! `F_N(t, s) = (1/l_N) Σ_{k=0}^{N-1} D_k(t) D_k(s)/(N-k)`
//! in direct and telescoped closed form, and the rectangle geometry on which
//! `F_{2^{2n}}(x, y) ≥ c/(xy)`.

mod closed;
mod direct;
mod lemma;
mod region;

pub use closed::{cos_sum_direct, cos_sum_telescoped, log_kernel_closed, sin_sum, KernelEvaluation, TelescopedSum, Truncation,
    DEFAULT_ADAPTIVE_REL_TOL, DEFAULT_SINGULAR_EPS};
pub use direct::{log_kernel_direct, log_kernel_direct_table};
pub use lemma::{lemma_main_check, locate_n0, stratified_samples, LemmaReport, RegionExtremum, DEFAULT_SAMPLES_PER_RECT};
pub use region::{alpha, beta, build_region, dyadic_order, gamma, phase_range_check, PhaseCheck, Rect, RegionKind, RegionSpec};
pub(crate) use direct::kernel_weights;
