//! Grid functions on `T²`, Fourier coefficients, Dirichlet kernels and
//! rectangular partial sums.
//!
//! Sample points are `x_j = -π + 2πj/G`, `j = 0..G`, for a power-of-two grid
//! size `G`. Coefficients come from the rectangle rule, which is exact for
//! trigonometric polynomials below Nyquist.

use std::io::{BufRead, Write};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::means::MeanSpec;
use crate::reduce::{par_map_indexed, tree_sum};
use crate::scalar::{wrap_to_pi, Real};

/// Imaginary parts below this are treated as zero for real-flagged data.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// Samples of a 2π-biperiodic function on the uniform grid over `[-π, π)²`.
///
/// `values` is row-major with the first index along `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D<T> {
    grid_size: usize,
    values: Vec<Complex<T>>,
    real: bool,
}

/// `x_j = -π + 2πj/G`.
#[inline]
pub fn grid_node<T: Real>(grid_size: usize, j: usize) -> T {
    -T::PI() + (T::PI() + T::PI()) * T::from_count(j) / T::from_count(grid_size)
}

fn check_grid_size(grid_size: usize) -> Result<()> {
    if grid_size < 4 || !grid_size.is_power_of_two() {
        return Err(Error::InvalidGridSize(grid_size));
    }
    Ok(())
}

impl<T: Real> GridFunction2D<T> {
    pub fn from_values(grid_size: usize, values: Vec<Complex<T>>, real: bool) -> Result<Self> {
        check_grid_size(grid_size)?;
        if values.len() != grid_size * grid_size {
            return Err(Error::SampleCount { expected: grid_size * grid_size, got: values.len() });
        }
        if real {
            let worst = values.iter().map(|v| v.im.abs()).fold(T::zero(), T::max);
            if worst.as_f64() > REAL_TOLERANCE {
                return Err(Error::NotReal(worst.as_f64()));
            }
        }
        Ok(Self { grid_size, values, real })
    }

    pub fn zeros(grid_size: usize) -> Result<Self> {
        Self::from_values(grid_size, vec![Complex::zero(); grid_size * grid_size], true)
    }

    /// Samples a real function `f(x, y)`.
    pub fn from_fn_real<F>(grid_size: usize, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> T + Sync + Send,
    {
        check_grid_size(grid_size)?;
        let rows = par_map_indexed(grid_size, |i| {
            let x = grid_node::<T>(grid_size, i);
            (0..grid_size)
                .map(|j| Complex::new(f(x, grid_node(grid_size, j)), T::zero()))
                .collect::<Vec<_>>()
        });
        Self::from_values(grid_size, rows.concat(), true)
    }

    /// Samples a complex function `f(x, y)`.
    pub fn from_fn<F>(grid_size: usize, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> Complex<T> + Sync + Send,
    {
        check_grid_size(grid_size)?;
        let rows = par_map_indexed(grid_size, |i| {
            let x = grid_node::<T>(grid_size, i);
            (0..grid_size).map(|j| f(x, grid_node(grid_size, j))).collect::<Vec<_>>()
        });
        Self::from_values(grid_size, rows.concat(), false)
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.grid_size + j]
    }

    /// Coordinate of grid index `j` along either axis.
    #[inline]
    pub fn node(&self, j: usize) -> T {
        grid_node(self.grid_size, j)
    }

    /// `2π / G`.
    pub fn spacing(&self) -> T {
        (T::PI() + T::PI()) / T::from_count(self.grid_size)
    }

    /// Area of one quadrature cell, `(2π/G)²`.
    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        if self.grid_size != other.grid_size {
            return Err(Error::GridMismatch(self.grid_size, other.grid_size));
        }
        let values = self.values.iter().zip(&other.values).map(|(&u, &v)| a * u + b * v).collect();
        let real = self.real && other.real && a.im.is_zero() && b.im.is_zero();
        Ok(Self { grid_size: self.grid_size, values, real })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.grid_size != other.grid_size {
            return Err(Error::GridMismatch(self.grid_size, other.grid_size));
        }
        Ok(self.values.iter().zip(&other.values).map(|(u, v)| (u - v).norm()).fold(T::zero(), T::max))
    }

    /// Writes `grid_size,is_real`, its value row, then one `i,j,re,im` row per sample.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "grid_size,is_real")?;
        writeln!(w, "{},{}", self.grid_size, self.real)?;
        for i in 0..self.grid_size {
            for j in 0..self.grid_size {
                let v = self.get(i, j);
                writeln!(w, "{i},{j},{},{}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Inverse of [`write_csv`](Self::write_csv). An optional `i,j,re,im`
    /// header line before the samples is accepted.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((no, line)) => Ok((no + 1, line?)),
                None => Err(Error::Parse { line: 0, msg: format!("missing {what}") }),
            }
        };
        let (no, header) = next("header")?;
        if header.trim() != "grid_size,is_real" {
            return Err(Error::Parse { line: no, msg: format!("unexpected header {header:?}") });
        }
        let (no, meta) = next("metadata row")?;
        let mut parts = meta.trim().split(',');
        let grid_size: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse { line: no, msg: "bad grid_size".into() })?;
        let real = match parts.next().map(str::trim) {
            Some("true") | Some("1") => true,
            Some("false") | Some("0") => false,
            other => return Err(Error::Parse { line: no, msg: format!("bad is_real {other:?}") }),
        };
        check_grid_size(grid_size)?;
        let mut values = vec![Complex::zero(); grid_size * grid_size];
        let mut seen = vec![false; grid_size * grid_size];
        for (no, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line == "i,j,re,im" {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: no + 1, msg: msg.to_string() };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad("expected 4 fields"));
            }
            let i: usize = f[0].parse().map_err(|_| bad("bad i"))?;
            let j: usize = f[1].parse().map_err(|_| bad("bad j"))?;
            let re: T = f[2].parse().map_err(|_| bad("bad re"))?;
            let im: T = f[3].parse().map_err(|_| bad("bad im"))?;
            if i >= grid_size || j >= grid_size {
                return Err(bad("index out of range"));
            }
            values[i * grid_size + j] = Complex::new(re, im);
            seen[i * grid_size + j] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::Parse { line: 0, msg: format!("sample {missing} missing") });
        }
        Self::from_values(grid_size, values, real)
    }
}

/// Fourier coefficients `f̂(m, n)` for `|m| ≤ M`, `|n| ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs<T> {
    m_band: usize,
    n_band: usize,
    grid_size: usize,
    real_source: bool,
    data: Vec<Complex<T>>,
}

impl<T: Real> SpectralCoeffs<T> {
    /// Builds coefficients from a closure over `(m, n)`; `grid_size` is the
    /// grid that [`evaluate_grid`] will target.
    pub fn from_fn<F>(m_band: usize, n_band: usize, grid_size: usize, real_source: bool, mut f: F) -> Result<Self>
    where
        F: FnMut(i64, i64) -> Complex<T>,
    {
        check_grid_size(grid_size)?;
        check_nyquist(m_band, n_band, grid_size)?;
        let mut data = Vec::with_capacity((2 * m_band + 1) * (2 * n_band + 1));
        for m in -(m_band as i64)..=m_band as i64 {
            for n in -(n_band as i64)..=n_band as i64 {
                data.push(f(m, n));
            }
        }
        Ok(Self { m_band, n_band, grid_size, real_source, data })
    }

    pub fn m_band(&self) -> usize {
        self.m_band
    }

    pub fn n_band(&self) -> usize {
        self.n_band
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn is_real_source(&self) -> bool {
        self.real_source
    }

    /// `f̂(m, n)`; zero outside the band.
    #[inline]
    pub fn get(&self, m: i64, n: i64) -> Complex<T> {
        if m.unsigned_abs() as usize > self.m_band || n.unsigned_abs() as usize > self.n_band {
            return Complex::zero();
        }
        let row = (m + self.m_band as i64) as usize;
        let col = (n + self.n_band as i64) as usize;
        self.data[row * (2 * self.n_band + 1) + col]
    }

    /// `max |f̂(-m,-n) - conj f̂(m,n)|`.
    pub fn hermitian_defect(&self) -> T {
        let (mb, nb) = (self.m_band as i64, self.n_band as i64);
        let mut worst = T::zero();
        for m in -mb..=mb {
            for n in -nb..=nb {
                worst = worst.max((self.get(-m, -n) - self.get(m, n).conj()).norm());
            }
        }
        worst
    }
}

fn check_nyquist(m: usize, n: usize, grid_size: usize) -> Result<()> {
    if 2 * m >= grid_size || 2 * n >= grid_size {
        return Err(Error::BandwidthExceedsNyquist { m, n, grid_size });
    }
    Ok(())
}

/// `D_k(t) = sin((k+1/2)t) / (2 sin(t/2))`, with the limit `k + 1/2` at `t ≡ 0`.
pub fn dirichlet_kernel<T: Real>(k: usize, t: T) -> T {
    let t = wrap_to_pi(t);
    let half = T::lit(0.5);
    let order = T::from_count(k) + half;
    if t.is_zero() {
        return order;
    }
    (order * t).sin() / ((t * half).sin() * T::lit(2.0))
}

/// Table of `e^{2πi k/G}` for `k = 0..G`.
fn unit_roots<T: Real>(grid_size: usize) -> Vec<Complex<T>> {
    (0..grid_size)
        .map(|k| {
            let theta = (T::PI() + T::PI()) * T::from_count(k) / T::from_count(grid_size);
            Complex::new(theta.cos(), theta.sin())
        })
        .collect()
}

/// `e^{i m x_j}` on the grid: `(-1)^m · ω^{mj}` with `ω = e^{2πi/G}`.
#[inline]
fn grid_phase<T: Real>(roots: &[Complex<T>], m: i64, j: usize) -> Complex<T> {
    let g = roots.len() as i64;
    let idx = (m.rem_euclid(g) as usize * j) % roots.len();
    let w = roots[idx];
    if m.rem_euclid(2) == 1 {
        -w
    } else {
        w
    }
}

/// Rectangle-rule Fourier coefficients of `f` for `|m| ≤ m_band`, `|n| ≤ n_band`.
pub fn fourier_coeffs<T: Real>(f: &GridFunction2D<T>, m_band: usize, n_band: usize) -> Result<SpectralCoeffs<T>> {
    let g = f.grid_size();
    check_nyquist(m_band, n_band, g)?;
    let roots = unit_roots::<T>(g);
    let width = 2 * n_band + 1;
    // Stage 1: transform each x-row along y.
    let rows: Vec<Vec<Complex<T>>> = par_map_indexed(g, |i| {
        let row = &f.values()[i * g..(i + 1) * g];
        let mut out = Vec::with_capacity(width);
        let mut terms = vec![Complex::zero(); g];
        for n in -(n_band as i64)..=n_band as i64 {
            for (j, slot) in terms.iter_mut().enumerate() {
                *slot = row[j] * grid_phase(&roots, n, j).conj();
            }
            out.push(tree_sum(&terms));
        }
        out
    });
    // Stage 2: transform along x.
    let norm = T::one() / T::from_count(g * g);
    let blocks: Vec<Vec<Complex<T>>> = par_map_indexed(2 * m_band + 1, |mi| {
        let m = mi as i64 - m_band as i64;
        let phases: Vec<Complex<T>> = (0..g).map(|i| grid_phase(&roots, m, i).conj()).collect();
        let mut terms = vec![Complex::zero(); g];
        (0..width)
            .map(|col| {
                for (i, slot) in terms.iter_mut().enumerate() {
                    *slot = rows[i][col] * phases[i];
                }
                tree_sum(&terms) * norm
            })
            .collect()
    });
    let data = blocks.concat();
    let mut coeffs = SpectralCoeffs { m_band, n_band, grid_size: g, real_source: f.is_real(), data };
    if f.is_real() {
        coeffs.symmetrize();
    }
    Ok(coeffs)
}

impl<T: Real> SpectralCoeffs<T> {
    // Replace each pair by its exact Hermitian average; removes round-off asymmetry.
    fn symmetrize(&mut self) {
        let (mb, nb) = (self.m_band as i64, self.n_band as i64);
        let width = 2 * self.n_band + 1;
        let half = T::lit(0.5);
        for m in -mb..=mb {
            for n in -nb..=nb {
                let a = ((m + mb) as usize) * width + (n + nb) as usize;
                let b = ((-m + mb) as usize) * width + (-n + nb) as usize;
                if a < b {
                    let avg = (self.data[a] + self.data[b].conj()) * half;
                    self.data[a] = avg;
                    self.data[b] = avg.conj();
                } else if a == b {
                    self.data[a].im = T::zero();
                }
            }
        }
    }
}

/// Weighted spectral sum `Σ_{|m|≤M,|n|≤N} w(m,n) f̂(m,n) e^{imx} e^{iny}`.
pub(crate) fn weighted_spectral_sum<T, W>(c: &SpectralCoeffs<T>, m_lim: usize, n_lim: usize, x: T, y: T, w: W) -> Complex<T>
where
    T: Real,
    W: Fn(i64, i64) -> T,
{
    let ey: Vec<Complex<T>> =
        (-(n_lim as i64)..=n_lim as i64).map(|n| Complex::from_polar(T::one(), T::from_i64(n).unwrap() * y)).collect();
    let mut outer = Vec::with_capacity(2 * m_lim + 1);
    let mut inner = Vec::with_capacity(2 * n_lim + 1);
    for m in -(m_lim as i64)..=m_lim as i64 {
        inner.clear();
        for (k, n) in (-(n_lim as i64)..=n_lim as i64).enumerate() {
            inner.push(c.get(m, n) * ey[k] * w(m, n));
        }
        let ex = Complex::from_polar(T::one(), T::from_i64(m).unwrap() * x);
        outer.push(tree_sum(&inner) * ex);
    }
    tree_sum(&outer)
}

fn check_band<T: Real>(c: &SpectralCoeffs<T>, m: usize, n: usize) -> Result<()> {
    if m > c.m_band || n > c.n_band {
        return Err(Error::OutOfBandwidth { m, n, m_band: c.m_band, n_band: c.n_band });
    }
    Ok(())
}

/// Rectangular partial sum `S_{M,N}(f; x, y)`.
pub fn rect_partial_sum<T: Real>(c: &SpectralCoeffs<T>, m: usize, n: usize, x: T, y: T) -> Result<Complex<T>> {
    check_band(c, m, n)?;
    Ok(weighted_spectral_sum(c, m, n, x, y, |_, _| T::one()))
}

/// Quadratical partial sum `S_{n,n}(f; x, y)`.
pub fn quad_partial_sum<T: Real>(c: &SpectralCoeffs<T>, n: usize, x: T, y: T) -> Result<Complex<T>> {
    rect_partial_sum(c, n, n, x, y)
}

/// What [`evaluate_grid`] evaluates at every node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Summation {
    Rect { m: usize, n: usize },
    Quad(usize),
    Mean(MeanSpec),
}

impl Summation {
    fn limits(&self) -> Result<(usize, usize)> {
        Ok(match *self {
            Summation::Rect { m, n } => (m, n),
            Summation::Quad(n) => (n, n),
            Summation::Mean(spec) => {
                let b = spec.required_bandwidth()?;
                (b, b)
            }
        })
    }

    /// Spectral multiplier applied to `f̂(m, n)`.
    pub(crate) fn multiplier<T: Real>(&self, m: i64, n: i64) -> T {
        match *self {
            Summation::Rect { .. } | Summation::Quad(_) => T::one(),
            Summation::Mean(spec) => spec.multiplier(m.unsigned_abs().max(n.unsigned_abs()) as usize),
        }
    }
}

/// Evaluates the given partial sum or mean at every node of the coefficient grid.
pub fn evaluate_grid<T: Real>(c: &SpectralCoeffs<T>, op: &Summation) -> Result<GridFunction2D<T>> {
    let (m_lim, n_lim) = op.limits()?;
    check_band(c, m_lim, n_lim)?;
    let g = c.grid_size;
    let roots = unit_roots::<T>(g);
    // Stage 1: for each m, sum over n at every y_j.
    let partial: Vec<Vec<Complex<T>>> = par_map_indexed(2 * m_lim + 1, |mi| {
        let m = mi as i64 - m_lim as i64;
        let weighted: Vec<Complex<T>> =
            (-(n_lim as i64)..=n_lim as i64).map(|n| c.get(m, n) * op.multiplier::<T>(m, n)).collect();
        let mut terms = vec![Complex::zero(); weighted.len()];
        (0..g)
            .map(|j| {
                for (k, slot) in terms.iter_mut().enumerate() {
                    *slot = weighted[k] * grid_phase(&roots, k as i64 - n_lim as i64, j);
                }
                tree_sum(&terms)
            })
            .collect()
    });
    // Stage 2: sum over m at every x_i.
    let rows: Vec<Vec<Complex<T>>> = par_map_indexed(g, |i| {
        let phases: Vec<Complex<T>> = (0..=2 * m_lim).map(|mi| grid_phase(&roots, mi as i64 - m_lim as i64, i)).collect();
        let mut terms = vec![Complex::zero(); phases.len()];
        (0..g)
            .map(|j| {
                for (mi, slot) in terms.iter_mut().enumerate() {
                    *slot = partial[mi][j] * phases[mi];
                }
                tree_sum(&terms)
            })
            .collect()
    });
    let mut values = rows.concat();
    let mut real = false;
    if c.real_source {
        let worst = values.iter().map(|v| v.im.abs()).fold(T::zero(), T::max);
        if worst.as_f64() <= REAL_TOLERANCE {
            values.iter_mut().for_each(|v| v.im = T::zero());
            real = true;
        }
    }
    GridFunction2D::from_values(g, values, real)
}
