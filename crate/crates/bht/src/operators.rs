//! The bilinear operators: the single-scale polynomial-curve operator, the
//! dyadic curve pieces, the frequency-localized pieces with two independent
//! evaluation paths (frequency-side double sum vs time-side quadrature), and
//! the rescaled restriction operators with and without spatial cell weights.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::{
    gauss_legendre, phi_hat, restrict, rho, rho0, smooth_indicator, IndicatorKind, BumpKind,
    BumpSpec,
};
use crate::error::{BhtError, Result};
use crate::foundation::{
    fourier_transform, make_grid, Band, DenseEval, Direction, Grid1D, SampledSignal,
};
use crate::oscsym::{symbol_md, OscQuadSpec};

/// Scale indices shared by the localized operators: curve degree `d`, dyadic
/// scale `j`, frequency magnitude `m`, spatial cell `n`, and the desk-scale
/// stand-in for the large threshold `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicParams {
    pub d: u32,
    pub j: i32,
    pub m: i32,
    pub n: i64,
    pub l: u32,
}

/// Which side of the scale split `|j| = m/(d-1)` a cell sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `|j| <= m/(d-1)`
    SmallShear,
    /// `|j| >= m/(d-1)`
    LargeShear,
}

impl DyadicParams {
    pub fn new(d: u32, j: i32, m: i32) -> Result<DyadicParams> {
        if d < 2 {
            return Err(BhtError::InvalidParameter("d must be >= 2".into()));
        }
        if m < 0 {
            return Err(BhtError::InvalidParameter("m must be >= 0".into()));
        }
        Ok(DyadicParams {
            d,
            j,
            m,
            n: 0,
            l: 4,
        })
    }

    pub fn with_n(mut self, n: i64) -> DyadicParams {
        self.n = n;
        self
    }

    pub fn regime(&self) -> Regime {
        if (self.j.abs() as f64) * (self.d as f64 - 1.0) <= self.m as f64 {
            Regime::SmallShear
        } else {
            Regime::LargeShear
        }
    }

    /// Cell exponent `(d-1)|j| + m` of the spatial localization.
    pub fn cell_exponent(&self) -> i32 {
        (self.d as i32 - 1) * self.j.abs() + self.m
    }
}

/// Real polynomial in coefficient form (ascending degree).
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSpec {
    pub coefficients: Vec<f64>,
}

impl PolynomialSpec {
    pub fn new(coefficients: Vec<f64>) -> Result<PolynomialSpec> {
        match coefficients.last() {
            Some(&c) if c != 0.0 => Ok(PolynomialSpec { coefficients }),
            _ => Err(BhtError::InvalidParameter(
                "leading coefficient must be nonzero".into(),
            )),
        }
    }

    /// `t^d`.
    pub fn monomial(d: u32) -> PolynomialSpec {
        let mut c = vec![0.0; d as usize + 1];
        c[d as usize] = 1.0;
        PolynomialSpec { coefficients: c }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> PolynomialSpec {
        if self.coefficients.len() <= 1 {
            return PolynomialSpec {
                coefficients: vec![0.0],
            };
        }
        let c: Vec<f64> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| k as f64 * v)
            .collect();
        PolynomialSpec { coefficients: c }
    }

    pub fn nth_derivative(&self, n: usize) -> PolynomialSpec {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// True when the n-th derivative has no sign change on the interval
    /// (sampled check, matching how the hypotheses are consumed downstream).
    pub fn nth_derivative_nonvanishing(&self, n: usize, interval: (f64, f64)) -> bool {
        let p = self.nth_derivative(n);
        let samples = 512;
        let (a, b) = interval;
        let first = p.eval(a);
        if first == 0.0 {
            return false;
        }
        let sign = first.signum();
        (0..=samples).all(|i| {
            let t = a + (b - a) * i as f64 / samples as f64;
            let v = p.eval(t);
            v != 0.0 && v.signum() == sign
        })
    }
}

const OPERATOR_OVERSAMPLE: usize = 64;

/// Fixed composite-GL layout over the two kernel lobes, with the kernel
/// weights precomputed; `cycles` is the worst-case phase variation of the
/// integrand divided by `2 pi`.
struct KernelLayout {
    nodes: Vec<f64>,
    weights: Vec<f64>, // GL weight times rho(t)
}

fn kernel_layout(cycles: f64, spec: &OscQuadSpec, weight: impl Fn(f64) -> f64) -> KernelLayout {
    let per_lobe = ((cycles / 2.0) * spec.min_panels_per_oscillation)
        .ceil()
        .max(spec.base_panels as f64) as usize;
    let (gn, gw) = gauss_legendre(8);
    let mut nodes = Vec::with_capacity(per_lobe * 16);
    let mut weights = Vec::with_capacity(per_lobe * 16);
    for lobe in [(-2.0, -0.5), (0.5, 2.0)] {
        let (a, b) = lobe;
        let h = (b - a) / per_lobe as f64;
        for p in 0..per_lobe {
            let lo = a + p as f64 * h;
            let mid = lo + h / 2.0;
            let half = h / 2.0;
            for (x, w) in gn.iter().zip(gw.iter()) {
                let t = mid + half * x;
                let wt = w * half * weight(t);
                if wt != 0.0 {
                    nodes.push(t);
                    weights.push(wt);
                }
            }
        }
    }
    KernelLayout { nodes, weights }
}

/// Single-scale operator along a polynomial curve:
/// `T(f,g)(x) = int f(x-t) g(x-P(t)) rho(t) dt`.
pub fn apply_tp(
    poly: &PolynomialSpec,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    apply_tp_weighted(poly, f, g, out_grid, spec, None)
}

/// Variant with the localized weight `rho(t) rho0(2^j (t - t0))`.
pub fn apply_tp_localized(
    poly: &PolynomialSpec,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
    j: i32,
    t0: f64,
) -> Result<SampledSignal> {
    apply_tp_weighted(poly, f, g, out_grid, spec, Some((j, t0)))
}

fn apply_tp_weighted(
    poly: &PolynomialSpec,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
    localize: Option<(i32, f64)>,
) -> Result<SampledSignal> {
    let fd = DenseEval::new(f, OPERATOR_OVERSAMPLE);
    let gd = DenseEval::new(g, OPERATOR_OVERSAMPLE);
    let dp = poly.derivative();
    let max_dp = (0..=64)
        .map(|i| dp.eval(-2.0 + 4.0 * i as f64 / 64.0).abs())
        .fold(0.0_f64, f64::max);
    let bf = f.band.hi.abs().max(f.band.lo.abs());
    let bg = g.band.hi.abs().max(g.band.lo.abs());
    let cycles = (bf + bg * max_dp) * 3.0;
    let layout = kernel_layout(cycles, spec, |t| match localize {
        None => rho(t),
        Some((j, t0)) => rho(t) * rho0(2f64.powi(j) * (t - t0)),
    });
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, w) in layout.nodes.iter().zip(layout.weights.iter()) {
                acc += fd.eval(x - t) * gd.eval(x - poly.eval(*t)) * *w;
            }
            acc
        })
        .collect();
    let mut out = SampledSignal::new(*out_grid, samples, Band::full(out_grid))?;
    out.band = Band::full(out_grid);
    Ok(out)
}

/// Dyadic curve piece
/// `T_j(f,g)(x) = int f(x-t) g(x-t^d) 2^j rho(2^j t) dt`, computed after the
/// substitution `s = 2^j t`.
pub fn apply_tgammaj(
    params: &DyadicParams,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    let fd = DenseEval::new(f, OPERATOR_OVERSAMPLE);
    let gd = DenseEval::new(g, OPERATOR_OVERSAMPLE);
    let d = params.d as i32;
    let sj = 2f64.powi(-params.j);
    let sdj = 2f64.powi(-d * params.j);
    let bf = f.band.hi.abs().max(f.band.lo.abs());
    let bg = g.band.hi.abs().max(g.band.lo.abs());
    let dmax = params.d as f64 * 2f64.powi(d - 1);
    let cycles = (bf * sj + bg * sdj * dmax) * 3.0;
    let layout = kernel_layout(cycles, spec, rho);
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, w) in layout.nodes.iter().zip(layout.weights.iter()) {
                acc += fd.eval(x - sj * s) * gd.eval(x - sdj * s.powi(d)) * *w;
            }
            acc
        })
        .collect();
    SampledSignal::new(*out_grid, samples, Band::full(out_grid))
}

/// Sum of dyadic curve pieces over a finite range of scales.
pub fn apply_tgamma_partial_sum(
    d: u32,
    j_range: std::ops::RangeInclusive<i32>,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    let mut acc = SampledSignal::zero(*out_grid);
    for j in j_range {
        let params = DyadicParams::new(d, j, 0)?;
        let piece = apply_tgammaj(&params, f, g, out_grid, spec)?;
        for (a, b) in acc.samples.iter_mut().zip(piece.samples.iter()) {
            *a += *b;
        }
    }
    acc.band = Band::full(out_grid);
    Ok(acc)
}

/// Cache of base-symbol values keyed by `(xi, eta)` bits; shared across scan
/// trials so each oscillatory integral is evaluated once.
pub struct SymbolCache {
    d: u32,
    spec: OscQuadSpec,
    map: RwLock<HashMap<(u64, u64), Complex64>>,
}

impl SymbolCache {
    pub fn new(d: u32, spec: OscQuadSpec) -> SymbolCache {
        SymbolCache {
            d,
            spec,
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn md(&self, xi: f64, eta: f64) -> Complex64 {
        let key = (xi.to_bits(), eta.to_bits());
        if let Some(v) = self.map.read().expect("symbol cache poisoned").get(&key) {
            return *v;
        }
        let v = symbol_md(self.d, xi, eta, &self.spec).value;
        self.map
            .write()
            .expect("symbol cache poisoned")
            .insert(key, v);
        v
    }

    /// `m_j(xi, eta) = m_d(2^{-j} xi, 2^{-dj} eta)`.
    pub fn mj(&self, j: i32, xi: f64, eta: f64) -> Complex64 {
        let sj = 2f64.powi(-j);
        let sdj = 2f64.powi(-(self.d as i32) * j);
        self.md(sj * xi, sdj * eta)
    }
}

/// Grids that resolve the frequency windows of the scale-(j, m) piece: tiny
/// periods so each window holds a tractable number of bins even when the
/// physical frequencies are astronomically large.
pub fn tjm_grids(params: &DyadicParams) -> Result<(Grid1D, Band, Grid1D, Band)> {
    let d = params.d as i32;
    let sf = 2f64.powi(params.j + params.m);
    let sg = 2f64.powi(d * params.j + params.m);
    let gf = make_grid(0.0, 16.0 / sf, 128)?;
    let gg = make_grid(0.0, 16.0 / sg, 128)?;
    Ok((
        gf,
        Band::new(sf / 2.0, sf * 2.0),
        gg,
        Band::new(sg / 2.0, sg * 2.0),
    ))
}

fn window_value(scale: f64, nu: f64) -> f64 {
    phi_hat(nu / scale)
}

/// Frequency-side evaluation of the scale-(j, m) piece: the double sum over
/// windowed spectrum bins against cached symbol values.
pub fn apply_tjm_freq(
    params: &DyadicParams,
    cache: &SymbolCache,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
) -> Result<SampledSignal> {
    if cache.d() != params.d {
        return Err(BhtError::InvalidParameter(
            "symbol cache degree does not match params".into(),
        ));
    }
    let d = params.d as i32;
    let sf = 2f64.powi(params.j + params.m);
    let sg = 2f64.powi(d * params.j + params.m);
    if 2.0 * sf > f.grid.nyquist() || 2.0 * sg > g.grid.nyquist() {
        return Err(BhtError::BandOutOfRange {
            lo: sf / 2.0,
            hi: 2.0 * sf.max(sg),
            nyquist: f.grid.nyquist().min(g.grid.nyquist()),
        });
    }
    let fs = fourier_transform(f, Direction::Forward);
    let gs = fourier_transform(g, Direction::Forward);
    let dnu_f = fs.grid.step;
    let dnu_g = gs.grid.step;
    let f_bins: Vec<(f64, Complex64)> = fs
        .grid
        .points()
        .zip(fs.samples.iter())
        .filter_map(|(nu, c)| {
            let w = window_value(sf, nu);
            (w != 0.0 && c.norm() > 0.0).then(|| (nu, c * w))
        })
        .collect();
    let g_bins: Vec<(f64, Complex64)> = gs
        .grid
        .points()
        .zip(gs.samples.iter())
        .filter_map(|(nu, c)| {
            let w = window_value(sg, nu);
            (w != 0.0 && c.norm() > 0.0).then(|| (nu, c * w))
        })
        .collect();
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(nu, cf) in &f_bins {
                for &(mu, cg) in &g_bins {
                    let sym = cache.mj(params.j, nu, mu);
                    acc += cf * cg * sym * Complex64::from_polar(1.0, TAU * (nu + mu) * x);
                }
            }
            acc * dnu_f * dnu_g
        })
        .collect();
    SampledSignal::new(*out_grid, samples, Band::full(out_grid))
}

/// Time-side evaluation of the same piece: restrict both inputs to their
/// dyadic windows, then run the kernel quadrature. The two paths share no
/// intermediate representation beyond the window profiles, so their
/// agreement is a genuine cross-check.
pub fn apply_tjm_time(
    params: &DyadicParams,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    let d = params.d as i32;
    let sf = 2f64.powi(params.j + params.m);
    let sg = 2f64.powi(d * params.j + params.m);
    if 2.0 * sf > f.grid.nyquist() || 2.0 * sg > g.grid.nyquist() {
        return Err(BhtError::BandOutOfRange {
            lo: sf / 2.0,
            hi: 2.0 * sf.max(sg),
            nyquist: f.grid.nyquist().min(g.grid.nyquist()),
        });
    }
    let fw = restrict(f, &BumpSpec::scaled(BumpKind::PhiHat, sf));
    let gw = restrict(g, &BumpSpec::scaled(BumpKind::PhiHat, sg));
    let fd = DenseEval::new(&fw, OPERATOR_OVERSAMPLE);
    let gd = DenseEval::new(&gw, OPERATOR_OVERSAMPLE);
    let sj = 2f64.powi(-params.j);
    let sdj = 2f64.powi(-d * params.j);
    // Window edges cap the integrand's phase rate at 2^{m+1} per input.
    let dmax = params.d as f64 * 2f64.powi(d - 1);
    let cycles = 2f64.powi(params.m + 1) * (1.0 + dmax) * 3.0;
    let layout = kernel_layout(cycles, spec, rho);
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (s, w) in layout.nodes.iter().zip(layout.weights.iter()) {
                acc += fd.eval(x - sj * s) * gd.eval(x - sdj * s.powi(d)) * *w;
            }
            acc
        })
        .collect();
    SampledSignal::new(*out_grid, samples, Band::full(out_grid))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RestrictionWindow {
    /// Annulus window `phi_hat` (plain restriction operator).
    Annulus,
    /// Wide plateau window `phi1_hat` (cell-localized variant).
    Plateau,
}

fn apply_bjm_windowed(
    params: &DyadicParams,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
    window: RestrictionWindow,
    cell_weight: bool,
) -> Result<SampledSignal> {
    let kind = match window {
        RestrictionWindow::Annulus => BumpKind::PhiHat,
        RestrictionWindow::Plateau => BumpKind::Phi1Hat,
    };
    let rf = restrict(f, &BumpSpec::new(kind));
    let rg = restrict(g, &BumpSpec::new(kind));
    let fd = DenseEval::new(&rf, OPERATOR_OVERSAMPLE);
    let gd = DenseEval::new(&rg, OPERATOR_OVERSAMPLE);
    let d = params.d as i32;
    let j = params.j;
    let scale = 2f64.powi(params.m);
    let prefactor = 2f64.powi(-(d - 1) * j.abs()).sqrt();
    let band_edge = match window {
        RestrictionWindow::Annulus => 2.0,
        RestrictionWindow::Plateau => 19.0 / 8.0,
    };
    let dmax = params.d as f64 * 2f64.powi(d - 1);
    let cycles = band_edge * scale * (1.0 + dmax) * 3.0;
    let layout = kernel_layout(cycles, spec, rho);
    let shear = 2f64.powi(-(d - 1) * j.abs());
    let k = params.cell_exponent();
    let n = params.n;
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            if j >= 0 {
                let xs = shear * x;
                for (t, w) in layout.nodes.iter().zip(layout.weights.iter()) {
                    acc += fd.eval(xs - scale * t) * gd.eval(x - scale * t.powi(d)) * *w;
                }
            } else {
                let xs = shear * x;
                for (t, w) in layout.nodes.iter().zip(layout.weights.iter()) {
                    acc += fd.eval(x - scale * t) * gd.eval(xs - scale * t.powi(d)) * *w;
                }
            }
            let cell = if cell_weight {
                smooth_indicator(IndicatorKind::Star, k, n, x)
            } else {
                1.0
            };
            acc * prefactor * cell
        })
        .collect();
    SampledSignal::new(*out_grid, samples, Band::full(out_grid))
}

/// Rescaled bilinear restriction operator: for `j >= 0`
/// `2^{-(d-1)j/2} int Rf(2^{-(d-1)j} x - 2^m t) Rg(x - 2^m t^d) rho(t) dt`,
/// mirrored for `j < 0`, with both inputs smoothly restricted to the annulus
/// window.
pub fn apply_bjm(
    params: &DyadicParams,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    apply_bjm_windowed(params, f, g, out_grid, spec, RestrictionWindow::Annulus, false)
}

/// Spectral route to the same operator: windowed spectrum bins against
/// cached base-symbol values. With the cache shared across a scan, repeated
/// applications cost a double sum over bins instead of a kernel quadrature
/// per output point; agreement with [`apply_bjm`] is tested.
pub fn apply_bjm_spectral(
    params: &DyadicParams,
    cache: &SymbolCache,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
) -> Result<SampledSignal> {
    if cache.d() != params.d {
        return Err(BhtError::InvalidParameter(
            "symbol cache degree does not match params".into(),
        ));
    }
    let d = params.d as i32;
    let scale = 2f64.powi(params.m);
    let shear = 2f64.powi(-(d - 1) * params.j.abs());
    let prefactor = shear.sqrt();
    let fs = fourier_transform(f, Direction::Forward);
    let gs = fourier_transform(g, Direction::Forward);
    let bins = |s: &SampledSignal| -> Vec<(f64, Complex64)> {
        s.grid
            .points()
            .zip(s.samples.iter())
            .filter_map(|(nu, c)| {
                let w = phi_hat(nu);
                (w != 0.0 && c.norm() > 1e-14).then(|| (nu, c * w))
            })
            .collect()
    };
    let fb = bins(&fs);
    let gb = bins(&gs);
    let dnu2 = fs.grid.step * gs.grid.step;
    // symbol values shared across output points (and across a scan's trials)
    let table: Vec<Vec<Complex64>> = fb
        .par_iter()
        .map(|&(nu, _)| {
            gb.iter()
                .map(|&(mu, _)| cache.md(scale * nu, scale * mu))
                .collect()
        })
        .collect();
    let samples: Vec<Complex64> = out_grid
        .points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &(nu, cf)) in fb.iter().enumerate() {
                let mut inner = Complex64::new(0.0, 0.0);
                for (k, &(mu, cg)) in gb.iter().enumerate() {
                    let xfreq = if params.j >= 0 { mu } else { shear * mu };
                    inner += cg * table[i][k] * Complex64::from_polar(1.0, TAU * xfreq * x);
                }
                let xfreq = if params.j >= 0 { shear * nu } else { nu };
                acc += cf * inner * Complex64::from_polar(1.0, TAU * xfreq * x);
            }
            acc * prefactor * dnu2
        })
        .collect();
    SampledSignal::new(*out_grid, samples, Band::full(out_grid))
}

/// Output window of the cell-localized pieces: the input grid translated to
/// the midpoint of the spatial cell `(d-1)|j| + m, n`, so the window sits in
/// the cell interior whenever the cell is longer than the period.
pub fn cell_centered_out_grid(params: &DyadicParams, template: &Grid1D) -> Grid1D {
    let (lo, hi) = crate::bumps::cell(params.cell_exponent(), params.n);
    let mid = (lo + hi) / 2.0;
    Grid1D {
        origin: mid - template.period() / 2.0,
        step: template.step,
        count: template.count,
    }
}

/// Cell-localized variant: plateau windows plus the smooth indicator of the
/// dyadic cell `(d-1)|j| + m, n`.
pub fn apply_bjmn(
    params: &DyadicParams,
    f: &SampledSignal,
    g: &SampledSignal,
    out_grid: &Grid1D,
    spec: &OscQuadSpec,
) -> Result<SampledSignal> {
    apply_bjm_windowed(params, f, g, out_grid, spec, RestrictionWindow::Plateau, true)
}
