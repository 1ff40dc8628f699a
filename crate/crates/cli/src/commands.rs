//! One function per subcommand. Each returns the tables to write and the
//! checks that decide the exit code; nothing here touches the filesystem.

use std::f64::consts::PI;

use logmeans_core::counterexamples::{
    bump_mean_lower_bound, bump_simple, cond1, display_comment, estimate_a_check, exceedance_measure, l1_growth, operator_norm_probe, r_nm,
    xi_rescaled_bump, ExceedanceReport, L1Growth, OperatorNormProbe,
};
use logmeans_core::fourier::{evaluate_grid, fourier_coeffs, GridFunction2D, Summation};
use logmeans_core::kernels::{
    cos_sum_direct, cos_sum_telescoped, lemma_main_check, locate_n0, log_kernel_closed, log_kernel_direct, LemmaReport, Truncation,
    DEFAULT_SINGULAR_EPS,
};
use logmeans_core::means::{l1_distance, MeanKind, MeanSpec};
use logmeans_core::orlicz::{inclusion_deficit, dyadic_u_grid, luxemburg_norm_tol, InclusionWeight, NormReport, SimpleFunction, YoungFunction};
use logmeans_core::reduce::par_map;
use logmeans_core::scalar::dist_to_2pi_multiple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::table::Table;

/// Orders exercised by `kernel-verify`.
pub const KERNEL_VERIFY_ORDERS: [usize; 7] = [3, 8, 16, 64, 256, 1024, 4096];
/// Off-tube sample points per order in `kernel-verify`.
pub const KERNEL_VERIFY_POINTS: usize = 200;
/// Largest scale for kernel-backed experiments (`N = 2^{2n} ≤ 1024`).
pub const KERNEL_MAX_N: u32 = 5;
/// Candidate orders of the convergence table.
pub const CONVERGE_ORDERS: [usize; 5] = [1, 4, 16, 64, 256];
/// Scales at which the rescaled bump is tested for unit-ball membership.
pub const UNIT_BALL_SCALES: std::ops::RangeInclusive<u32> = 3..=8;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

pub type CmdResult = Result<Outcome, logmeans_core::Error>;

fn e12(v: f64) -> String {
    format!("{v:.12e}")
}

/// Van der Corput radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points in `[-π, π)²`, optionally rotated by a seeded shift, that
/// avoid the singular tubes of the closed form.
pub fn quasi_random_points(count: usize, seed: Option<u64>) -> (Vec<(f64, f64)>, usize) {
    let shift = match seed {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            (rng.gen::<f64>(), rng.gen::<f64>())
        }
        None => (0.0, 0.0),
    };
    let mut pts = Vec::with_capacity(count);
    let mut skipped = 0;
    let mut i = 1u64;
    while pts.len() < count {
        let x = -PI + 2.0 * PI * ((radical_inverse(i, 2) + shift.0) % 1.0);
        let y = -PI + 2.0 * PI * ((radical_inverse(i, 3) + shift.1) % 1.0);
        i += 1;
        if [x, y, x + y, x - y].iter().all(|&v| dist_to_2pi_multiple(v) >= DEFAULT_SINGULAR_EPS) {
            pts.push((x, y));
        } else {
            skipped += 1;
        }
    }
    (pts, skipped)
}

/// Worst-case statistics of closed vs direct kernel at one order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormComparison {
    pub order: usize,
    pub points: usize,
    pub skipped: usize,
    pub max_abs_err: f64,
    pub max_bound: f64,
    /// `max (|closed - direct| - bound - slack·(1 + |direct|))`; `≤ 0` passes.
    pub max_excess: f64,
}

pub fn compare_forms(order: usize, points: &[(f64, f64)], skipped: usize, trunc: Truncation, slack: f64) -> logmeans_core::Result<FormComparison> {
    let rows: Vec<logmeans_core::Result<(f64, f64, f64)>> = par_map(points, |&(x, y)| {
        let e = log_kernel_closed(order, x, y, trunc, DEFAULT_SINGULAR_EPS)?;
        let d = log_kernel_direct(order, x, y);
        let err = (e.value - d).abs();
        Ok((err, e.truncation_bound, err - e.truncation_bound - slack * (1.0 + d.abs())))
    });
    let mut c = FormComparison { order, points: points.len(), skipped, max_abs_err: 0.0, max_bound: 0.0, max_excess: f64::NEG_INFINITY };
    for r in rows {
        let (err, bound, excess) = r?;
        c.max_abs_err = c.max_abs_err.max(err);
        c.max_bound = c.max_bound.max(bound);
        c.max_excess = c.max_excess.max(excess);
    }
    Ok(c)
}

/// `max |telescoped(full) - direct|` over `count` Halton arguments in `(0, 2π)`.
pub fn identity_error(order: usize, count: usize) -> logmeans_core::Result<f64> {
    let mut worst = 0.0f64;
    for j in 1..=count as u64 {
        let u = 2.0 * PI * radical_inverse(j, 5);
        let t = cos_sum_telescoped(order, u, Truncation::Full)?;
        worst = worst.max((t.value - cos_sum_direct(order, u)).abs());
    }
    Ok(worst)
}

pub fn kernel_verify(cfg: &RunConfig) -> CmdResult {
    let mut t = Table::new("kernel_verify", "N,points,skipped,max_abs_err,max_bound,max_excess,identity_max_err,pass");
    t.comment(display_comment("R1-R15"));
    let mut out = Outcome::default();
    let trunc = Truncation::Adaptive { rel_tol: cfg.tolerances.tail };
    let slack = cfg.tolerances.quadrature;
    let (pts, skipped) = quasi_random_points(KERNEL_VERIFY_POINTS, cfg.seed);
    for &order in &KERNEL_VERIFY_ORDERS {
        let c = compare_forms(order, &pts, skipped, trunc, slack)?;
        let ident = identity_error(order, 20)?;
        let pass = c.max_excess <= 0.0 && ident <= slack / 100.0;
        t.push(format!("{},{},{},{},{},{},{},{}", order, c.points, c.skipped, e12(c.max_abs_err), e12(c.max_bound), e12(c.max_excess), e12(ident), pass));
        out.checks.push(Check::new(format!("kernel forms agree at N={order}"), pass, format!("max excess {:.3e}, identity {:.3e}", c.max_excess, ident)));
    }
    out.tables.push(t);
    Ok(out)
}

fn kernel_scales(cfg: &RunConfig, out: &mut Outcome, what: &str) -> Vec<u32> {
    let mut ns = Vec::new();
    for &n in &cfg.n_list {
        if n < 3 {
            out.notes.push(format!("{what}: region at n={n} is empty (2^(n-3) < 1); skipped"));
        } else {
            ns.push(n);
        }
    }
    ns
}

/// Lemma reports for the valid scales of `cfg`, in order.
pub fn lemma_reports(cfg: &RunConfig, ns: &[u32]) -> logmeans_core::Result<Vec<LemmaReport<f64>>> {
    ns.iter().map(|&n| lemma_main_check::<f64>(n, cfg.samples_per_rect, None)).collect()
}

pub fn lemma(cfg: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let ns = kernel_scales(cfg, &mut out, "lemma");
    let reports = lemma_reports(cfg, &ns)?;
    let mut t = Table::new("lemma", "n,kind,min_ratio,argmin_x,argmin_y,samples");
    t.comment(display_comment("lemma-main"));
    let mut terms = Table::new("lemma_terms", "n,main_min,remainder_max,remainder_max_normalized,closed_skipped");
    terms.comment(display_comment("lemma-main"));
    for r in &reports {
        for row in r.csv_rows() {
            t.push(row);
        }
        terms.push(format!("{},{},{},{},{}", r.n, e12(r.main_min.value), e12(r.remainder_max.value), e12(r.remainder_max_normalized), r.closed_skipped));
        let ok = r.i_min.value > 0.0 && r.j_min.value > 0.0;
        out.checks.push(Check::new(format!("lower bound positive at n={}", r.n), ok, format!("I {:.4e}, J {:.4e}", r.i_min.value, r.j_min.value)));
    }
    if let Some(n0) = locate_n0(&reports) {
        out.notes.push(format!("lemma: smallest n with positive minimum onwards: {n0}"));
    }
    out.tables.push(t);
    out.tables.push(terms);
    Ok(out)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.4e}")).collect::<Vec<_>>().join(" ")
}

/// `max/min` of a positive sequence.
pub fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

pub fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

/// Young functions used by the divergence probes.
pub fn probe_youngs() -> [YoungFunction<f64>; 3] {
    [YoungFunction::log(), YoungFunction::log2(), YoungFunction::log2_loglog()]
}

/// Probe contrast: the `L log L` ratio grows strictly; the `L log²L` ratio
/// stays within a factor 2 and grows by less than the `L log L` one at every step.
pub fn probe_contrast(log: &[OperatorNormProbe], log2: &[OperatorNormProbe]) -> (bool, bool) {
    let a: Vec<f64> = log.iter().map(|p| p.ratio).collect();
    let b: Vec<f64> = log2.iter().map(|p| p.ratio).collect();
    let diverging = strictly_increasing(&a);
    let slower = a.windows(2).zip(b.windows(2)).all(|(x, y)| y[1] / y[0] < x[1] / x[0]);
    (diverging, spread(&b) <= 2.0 && slower)
}

pub fn growth(cfg: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let ns = kernel_scales(cfg, &mut out, "growth");
    let mut t = Table::new("growth", "n,l1_lower,geometric_sum,geometric_sum_over_n2,bump_min_ratio");
    t.comment(display_comment("(b)"));
    let mut p = Table::new("growth_probe", "n,young,ratio,predicted");
    p.comment(display_comment("(a)"));
    let mut geo = Vec::new();
    let mut l1 = Vec::new();
    let youngs = probe_youngs();
    let mut probes: Vec<Vec<OperatorNormProbe>> = vec![Vec::new(); youngs.len()];
    for &n in &ns {
        let g = logmeans_core::counterexamples::geometric_sum(n)?;
        geo.push(g / f64::from(n * n));
        if n <= KERNEL_MAX_N {
            let gr: L1Growth = l1_growth(n, cfg.samples_per_rect)?;
            let bump = bump_mean_lower_bound(n, cfg.samples_per_rect, true)?;
            t.push(format!("{},{},{},{},{}", n, e12(gr.l1_lower), e12(g), e12(g / f64::from(n * n)), e12(bump.min_ratio.value)));
            l1.push(gr.l1_lower);
            for (q, acc) in youngs.iter().zip(probes.iter_mut()) {
                let pr = operator_norm_probe(&gr, q);
                p.push(pr.csv_row());
                acc.push(pr);
            }
        } else {
            t.push(format!("{},,{},{},", n, e12(g), e12(g / f64::from(n * n))));
        }
    }
    if !geo.is_empty() {
        out.checks.push(Check::new("geometric_sum/n^2 within factor 2", spread(&geo) < 2.0, format!("spread {:.4}", spread(&geo))));
    }
    if l1.len() >= 2 {
        out.checks.push(Check::new("l1_lower strictly increasing", strictly_increasing(&l1), fmt_list(&l1)));
        let (div, conv) = probe_contrast(&probes[0], &probes[1]);
        out.checks.push(Check::new("L log L probe strictly increasing", div, String::new()));
        out.checks.push(Check::new("L log^2 L probe bounded and slower", conv, String::new()));
    }
    out.tables.push(t);
    out.tables.push(p);
    Ok(out)
}

pub fn measure(cfg: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let ns = kernel_scales(cfg, &mut out, "measure");
    let mut t = Table::new("measure", ExceedanceReport::csv_header());
    t.comment(display_comment("est1"));
    let mut r = Table::new("measure_rnm", "n,m,r_nm,ratio");
    r.comment(display_comment("est2"));
    let mut bounds = Vec::new();
    for &n in &ns {
        let c1 = lemma_main_check::<f64>(n, cfg.samples_per_rect, None)?.i_min.value;
        if c1 > 0.0 {
            let e = exceedance_measure(n, c1, c1)?;
            t.push(e.csv_row());
            bounds.push(e.bound);
        } else {
            out.notes.push(format!("measure: no positive lower-bound constant at n={n}"));
            bounds.push(0.0);
        }
        for m in 1..=(1usize << (n - 3)) {
            let v = r_nm(n, m)?;
            r.push(format!("{},{},{},{}", n, m, v, e12(v as f64 * m as f64 / 2f64.powi(n as i32))));
        }
    }
    if !bounds.is_empty() {
        let lo = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
        out.checks.push(Check::new("exceedance bound has a shared positive floor", lo > 0.0, format!("min bound {lo:.4e}")));
    }
    out.tables.push(t);
    out.tables.push(r);
    Ok(out)
}

/// Sampled `(kind, n, ‖mean_n f - f‖₁)` for the orders that fit the grid.
pub fn convergence_rows(f: &GridFunction2D<f64>) -> logmeans_core::Result<Vec<(MeanKind, usize, f64)>> {
    let band = f.grid_size() / 2 - 1;
    let c = fourier_coeffs(f, band, band)?;
    let mut rows = Vec::new();
    for kind in [MeanKind::NorlundLog, MeanKind::Marcinkiewicz, MeanKind::RieszLog] {
        for &n in &CONVERGE_ORDERS {
            let Ok(spec) = MeanSpec::new(kind, n) else { continue };
            if spec.required_bandwidth()? > band {
                continue;
            }
            let g = evaluate_grid(&c, &Summation::Mean(spec))?;
            rows.push((kind, n, l1_distance(&g, f)?));
        }
    }
    Ok(rows)
}

pub fn converge(cfg: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let g = cfg.grid_size;
    let cases: [(&str, &str, fn(f64, f64) -> f64); 2] =
        [("converge", "|x|", |x, _| x.abs()), ("converge_absxy", "|x|*|y|", |x, y| x.abs() * y.abs())];
    for (name, label, func) in cases {
        let f = GridFunction2D::from_fn_real(g, func)?;
        let rows = convergence_rows(&f)?;
        let mut t = Table::new(name, "kind,n,l1_error");
        t.comment(format!("function={label} grid_size={g}"));
        for (k, n, e) in &rows {
            t.push(format!("{},{},{}", k.label(), n, e12(*e)));
        }
        let tail: Vec<f64> = rows.iter().filter(|r| r.0 == MeanKind::NorlundLog).map(|r| r.2).collect();
        let tail = &tail[tail.len().saturating_sub(3)..];
        let ok = tail.len() == 3 && tail.windows(2).all(|w| w[1] <= w[0]);
        out.checks.push(Check::new(format!("t_n error non-increasing over final three n for {label}"), ok, fmt_list(tail)));
        out.tables.push(t);
    }
    Ok(out)
}

pub fn orlicz_youngs() -> Vec<YoungFunction<f64>> {
    vec![
        YoungFunction::log(),
        YoungFunction::log2(),
        YoungFunction::power(1.5).expect("valid exponent"),
        YoungFunction::power(2.0).expect("valid exponent"),
        YoungFunction::log2_loglog(),
    ]
}

/// Root of `(1/k) log(1 + 1/k) = 1` by bisection on the monotone scalar equation.
pub fn indicator_log_norm() -> f64 {
    let (mut lo, mut hi) = (0.1f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (1.0 / mid) * (1.0 / mid).ln_1p() > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

pub fn orlicz(cfg: &RunConfig) -> CmdResult {
    let mut out = Outcome::default();
    let tol = cfg.tolerances.bisection;
    let g = cfg.grid_size;
    let youngs = orlicz_youngs();
    let square = YoungFunction::power(2.0)?;

    let mut norms = Table::new("orlicz", "function,young,norm,modular_at_norm");
    let one = GridFunction2D::from_fn_real(g, |_, _| 1.0)?;
    let small = GridFunction2D::from_fn_real(g, |_, _| 1.0 / (4.0 * PI))?;
    let unit_sq = SimpleFunction::indicator(1.0, 1.0)?;
    for q in &youngs {
        norms.push(NormReport::compute("one", &one, q, tol)?.csv_row());
        norms.push(NormReport::compute("one_over_4pi", &small, q, tol)?.csv_row());
        norms.push(NormReport::compute("indicator_measure_1", &unit_sq, q, tol)?.csv_row());
        for n in 1..=3 {
            norms.push(NormReport::compute(&format!("bump_n{n}"), &bump_simple(n, false), q, tol)?.csv_row());
        }
    }
    out.tables.push(norms);

    let c = luxemburg_norm_tol(&one, &square, tol)?;
    out.checks.push(Check::new("norm of 1 under u^2 is 2*pi", (c - 2.0 * PI).abs() <= 1e-6, format!("{c:.12}")));
    let k = luxemburg_norm_tol(&unit_sq, &YoungFunction::log(), tol)?;
    let k_ref = indicator_log_norm();
    out.checks.push(Check::new("norm of unit-measure indicator under u log(1+u)", (k - k_ref).abs() <= 1e-6, format!("{k:.12} vs {k_ref:.12}")));

    let mut ball = Table::new("orlicz_unit_ball", "n,young,cond1,norm,member");
    let mut ball_ok = true;
    for q in &youngs {
        for n in 1..=*UNIT_BALL_SCALES.end() {
            let xi = xi_rescaled_bump(n, q);
            let norm = luxemburg_norm_tol(&xi, q, tol)?;
            let member = norm <= 1.0 + 1e-9;
            let c = cond1(n, q);
            if UNIT_BALL_SCALES.contains(&n) && c && !member {
                ball_ok = false;
            }
            ball.push(format!("{},{},{},{},{}", n, q.name(), c, e12(norm), member));
        }
    }
    out.checks.push(Check::new("rescaled bump in unit ball whenever cond1 (n=3..8)", ball_ok, String::new()));
    out.tables.push(ball);

    let mut inc = Table::new("orlicz_inclusion", "young,weight,u,value");
    let grid = dyadic_u_grid::<f64>();
    for q in &youngs {
        for w in [InclusionWeight::Log, InclusionWeight::Log2] {
            let probe = inclusion_deficit(q, w, &grid)?;
            for (u, v) in probe.u.iter().zip(&probe.values) {
                inc.push(format!("{},{},{},{}", q.name(), w.label(), e12(*u), e12(*v)));
            }
        }
    }
    let same = inclusion_deficit(&YoungFunction::log2(), InclusionWeight::Log2, &grid)?;
    let weak = inclusion_deficit(&YoungFunction::log(), InclusionWeight::Log2, &grid)?;
    out.checks.push(Check::new("u log^2 u / Q bounded for Q = u log^2(1+u)", same.max <= 1.0, format!("max {:.4}", same.max)));
    out.checks.push(Check::new("u log^2 u / Q unbounded trend for Q = u log(1+u)", weak.increasing(), format!("last {:.4}", weak.values[weak.values.len() - 1])));
    out.tables.push(inc);

    let family: Vec<(String, SimpleFunction<f64>)> =
        (1..=5).flat_map(|n| [(format!("bump_n{n}"), bump_simple(n, false)), (format!("scaled_bump_n{n}"), bump_simple(n, true))]).collect();
    let mut est = Table::new("orlicz_estimate", "young,function,norm,modular,c_fit");
    est.comment(display_comment("(a)"));
    for q in &youngs[..2] {
        let e = estimate_a_check(&family, q)?;
        for r in &e.rows {
            est.push(format!("{},{},{},{},{}", e.young, r.label, e12(r.norm), e12(r.modular), e12(e.c_fit)));
        }
        out.checks.push(Check::new(format!("estimate (a) holds with fitted c for {}", q.name()), e.holds_with(e.c_fit), format!("c = {:.6}", e.c_fit)));
    }
    out.tables.push(est);
    Ok(out)
}
