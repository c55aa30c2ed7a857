//! Trilinear forms dual to the localized bilinear operators, the chirp-kernel
//! forms their stationary-phase reduction produces, the multiplier slices the
//! uniformity argument controls, the piecewise decay rates of the scale
//! table, and the matched-chirp witness showing the chirp-kernel forms admit
//! no uniform decay once the shear dominates the frequency scale.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bumps::{gauss_legendre, phi1_hat, phi_hat, smooth_bump};
use crate::error::{BhtError, Result};
use crate::foundation::{derive_seed, fourier_transform, lp_norm, DenseEval, Direction,
    SampledSignal};
use crate::operators::{apply_bjmn, DyadicParams, SymbolCache};
use crate::oscsym::{c_d, OscQuadSpec};
use crate::uniformity::{PairingLayout, PhaseFamily, PhaseFamilyPoint};

/// Which norms a trilinear value was normalized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// `||f1||_2 ||f2||_2 ||f3||_2`
    L2L2L2,
    /// `||f1||_2 ||f2||_2 ||f3-hat||_inf`
    L2L2HatInf,
}

#[derive(Debug, Clone)]
pub struct TrilinearResult {
    pub value: Complex64,
    pub normalized: f64,
    pub norm_kind: NormKind,
    pub params: DyadicParams,
    pub seed: u64,
}

/// Function of a frequency variable with declared support, evaluated by
/// closure; the inputs of the chirp-kernel forms.
pub struct FreqProfile {
    pub support: (f64, f64),
    eval_fn: Box<dyn Fn(f64) -> Complex64 + Sync + Send>,
}

impl FreqProfile {
    pub fn new(
        support: (f64, f64),
        eval_fn: impl Fn(f64) -> Complex64 + Sync + Send + 'static,
    ) -> FreqProfile {
        FreqProfile {
            support,
            eval_fn: Box::new(eval_fn),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if x < self.support.0 || x > self.support.1 {
            return Complex64::new(0.0, 0.0);
        }
        (self.eval_fn)(x)
    }

    /// Profile backed by the band-limited interpolant of sampled data.
    pub fn from_signal(signal: &SampledSignal, support: (f64, f64)) -> FreqProfile {
        let dense = DenseEval::new(signal, 64);
        FreqProfile::new(support, move |x| dense.eval(x))
    }

    /// Smooth random profile: a low-order trig polynomial tapered to vanish
    /// at the support edges, normalized to unit L^2 on the support.
    ///
    /// Backed by a dense table with cubic taps; the raw closure would be too
    /// slow inside the 2D quadrature loops.
    pub fn random_smooth(support: (f64, f64), terms: i32, seed: u64) -> FreqProfile {
        let (lo, hi) = support;
        let width = hi - lo;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<(f64, Complex64)> = (-terms..=terms)
            .map(|k| {
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                (k as f64 / (2.0 * width), Complex64::new(re, im))
            })
            .collect();
        let taper = move |x: f64| {
            let u = (x - lo) / width;
            crate::bumps::smooth_step((u / 0.08).min((1.0 - u) / 0.08))
        };
        let raw = move |x: f64| -> Complex64 {
            let s: Complex64 = coeffs
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, TAU * k * x))
                .sum();
            s * taper(x)
        };
        let norm = profile_l2(&raw, support);
        FreqProfile::tabulated(support, 8192, move |x| raw(x) / norm)
    }

    /// Dense-table profile over the support with cubic interpolation between
    /// samples; values are clamped to zero outside.
    pub fn tabulated(
        support: (f64, f64),
        samples: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> FreqProfile {
        let (lo, hi) = support;
        let n = samples.max(16);
        let step = (hi - lo) / (n - 1) as f64;
        let table: Vec<Complex64> = (0..n).map(|i| f(lo + i as f64 * step)).collect();
        let inv_step = 1.0 / step;
        FreqProfile::new(support, move |x| {
            let u = (x - lo) * inv_step;
            let i0 = (u.floor() as isize).clamp(1, n as isize - 3) as usize;
            let t = u - i0 as f64;
            let wm1 = -t * (t - 1.0) * (t - 2.0) / 6.0;
            let w0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
            let w1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
            let w2 = (t + 1.0) * t * (t - 1.0) / 6.0;
            table[i0 - 1] * wm1 + table[i0] * w0 + table[i0 + 1] * w1 + table[i0 + 2] * w2
        })
    }

    /// Unit-modulus chirp matched to the kernel phase at `eta0`, normalized
    /// to unit L^2 on the support.
    pub fn matched_chirp(d: u32, m: i32, eta0: f64, support: (f64, f64)) -> FreqProfile {
        let cd = c_d(d);
        let df = d as f64;
        let scale = 2f64.powi(m);
        let norm = (support.1 - support.0).sqrt();
        FreqProfile::new(support, move |xi| {
            Complex64::from_polar(
                1.0 / norm,
                -cd * scale * xi.powf(df / (df - 1.0)) * eta0.powf(-1.0 / (df - 1.0)),
            )
        })
    }

    /// Narrow unit-L^2 bump of the given width.
    pub fn narrow_bump(center: f64, width: f64) -> FreqProfile {
        let half = width / 2.0;
        let norm = {
            let raw = move |x: f64| Complex64::new(smooth_bump((x - center) / half), 0.0);
            profile_l2(&raw, (center - half, center + half))
        };
        FreqProfile::new((center - half, center + half), move |x| {
            Complex64::new(smooth_bump((x - center) / half) / norm, 0.0)
        })
    }

    pub fn l2(&self) -> f64 {
        profile_l2(&|x| self.eval(x), self.support)
    }
}

fn profile_l2(f: &dyn Fn(f64) -> Complex64, support: (f64, f64)) -> f64 {
    let (lo, hi) = support;
    crate::bumps::composite_gl(|x| f(x).norm_sqr(), lo, hi, 64, 8).sqrt()
}

/// Piecewise decay rate of the scale-(j, m) pieces: the eighth-root gain in
/// the small-shear regime, the max of the shear gain and the epsilon floor in
/// the large-shear regime; `eps0` defaults to `1/(8d)`.
pub fn gamma_jm(d: u32, j: i32, m: i32, eps0: Option<f64>) -> f64 {
    let eps0 = eps0.unwrap_or(1.0 / (8.0 * d as f64));
    let dj = (d as f64 - 1.0) * j.abs() as f64;
    let mf = m as f64;
    if dj <= mf {
        2f64.powf((dj - mf) / 8.0)
    } else {
        2f64.powf((mf - dj) / 3.0).max(2f64.powf(-eps0 * mf))
    }
}

/// Pairing of the cell-localized operator output against the third input:
/// `<B_{j,m,n}(f1, f2), f3>` over the output grid.
pub fn lambda_jmn(
    params: &DyadicParams,
    f1: &SampledSignal,
    f2: &SampledSignal,
    f3: &SampledSignal,
    spec: &OscQuadSpec,
    seed: u64,
) -> Result<TrilinearResult> {
    for (name, s) in [("f1", f1), ("f2", f2), ("f3", f3)] {
        let b = s.band;
        if b.lo < -39.0 / 16.0 - 1e-9 || b.hi > 39.0 / 16.0 + 1e-9 {
            return Err(BhtError::Precondition(format!(
                "{name} band [{}, {}] escapes the admissible annulus",
                b.lo, b.hi
            )));
        }
    }
    let out_grid = crate::operators::cell_centered_out_grid(params, &f1.grid);
    let b = apply_bjmn(params, f1, f2, &out_grid, spec)?;
    let mut value = Complex64::new(0.0, 0.0);
    let f3d = DenseEval::new(f3, 8);
    for (i, bv) in b.samples.iter().enumerate() {
        let x = out_grid.point(i);
        value += bv * f3d.eval(x).conj();
    }
    value *= out_grid.step;
    // Normalization follows the regime: product of L^2 norms on the
    // small-shear side, sup of the third spectrum on the large-shear side.
    let n1 = lp_norm(f1, 2.0)?;
    let n2 = lp_norm(f2, 2.0)?;
    let (n3, kind) = match params.regime() {
        crate::operators::Regime::SmallShear => (lp_norm(f3, 2.0)?, NormKind::L2L2L2),
        crate::operators::Regime::LargeShear => {
            let spec3 = fourier_transform(f3, Direction::Forward);
            (
                spec3.samples.iter().map(|c| c.norm()).fold(0.0, f64::max),
                NormKind::L2L2HatInf,
            )
        }
    };
    let denom = n1 * n2 * n3;
    Ok(TrilinearResult {
        value,
        normalized: if denom > 0.0 { value.norm() / denom } else { 0.0 },
        norm_kind: kind,
        params: *params,
        seed,
    })
}

/// Frequency-side route to the same pairing: windowed spectrum bins of the
/// first two inputs against cached symbol values and the cell-weighted
/// spectrum of the third. Shares nothing with the time route past the window
/// profiles, so agreement is a real cross-check.
pub fn lambda_jmn_freq(
    params: &DyadicParams,
    cache: &SymbolCache,
    f1: &SampledSignal,
    f2: &SampledSignal,
    f3: &SampledSignal,
    seed: u64,
) -> Result<TrilinearResult> {
    let d = params.d as i32;
    let scale = 2f64.powi(params.m);
    let shear = 2f64.powi(-(d - 1) * params.j.abs());
    let prefactor = shear.sqrt();
    let s1 = fourier_transform(f1, Direction::Forward);
    let s2 = fourier_transform(f2, Direction::Forward);
    let bins = |s: &SampledSignal| -> Vec<(f64, Complex64)> {
        s.grid
            .points()
            .zip(s.samples.iter())
            .filter_map(|(nu, c)| {
                let w = phi1_hat(nu);
                (w != 0.0 && c.norm() > 1e-14).then(|| (nu, c * w))
            })
            .collect()
    };
    let b1 = bins(&s1);
    let b2 = bins(&s2);
    // cell-weighted conjugate spectrum of f3 at arbitrary frequencies
    let out_grid = crate::operators::cell_centered_out_grid(params, &f1.grid);
    let k = params.cell_exponent();
    let weights: Vec<f64> = out_grid
        .points()
        .map(|x| crate::bumps::smooth_indicator(crate::bumps::IndicatorKind::Star, k, params.n, x))
        .collect();
    let f3d = DenseEval::new(f3, 8);
    let f3v: Vec<Complex64> = out_grid.points().map(|x| f3d.eval(x)).collect();
    let w3 = |theta: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, w) in weights.iter().enumerate() {
            let x = out_grid.point(i);
            acc += f3v[i].conj() * w * Complex64::from_polar(1.0, TAU * theta * x);
        }
        acc * out_grid.step
    };
    let dnu1 = s1.grid.step;
    let dnu2 = s2.grid.step;
    let value: Complex64 = b1
        .par_iter()
        .map(|&(nu, c1)| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(mu, c2) in &b2 {
                let sym = cache.md(scale * nu, scale * mu);
                let theta = if params.j >= 0 {
                    shear * nu + mu
                } else {
                    nu + shear * mu
                };
                acc += c1 * c2 * sym * w3(theta);
            }
            acc
        })
        .sum::<Complex64>()
        * prefactor
        * dnu1
        * dnu2;
    let n1 = lp_norm(f1, 2.0)?;
    let n2 = lp_norm(f2, 2.0)?;
    let n3 = lp_norm(f3, 2.0)?;
    let denom = n1 * n2 * n3;
    Ok(TrilinearResult {
        value,
        normalized: if denom > 0.0 { value.norm() / denom } else { 0.0 },
        norm_kind: NormKind::L2L2L2,
        params: *params,
        seed,
    })
}

fn annulus_window() -> (f64, f64) {
    (0.5, 2.0)
}

/// Kernel toggled by `chirp_kernel`: the explicit stationary-phase chirp or
/// the flat kernel (the no-oscillation limit used by cross-checks).
fn lambda_star_general(
    params: &DyadicParams,
    f1: &FreqProfile,
    f2: &FreqProfile,
    f3: Option<&FreqProfile>,
    chirp_kernel: bool,
    spec: &OscQuadSpec,
) -> Complex64 {
    let d = params.d;
    let df = d as f64;
    let cd = c_d(d);
    let scale = 2f64.powi(params.m);
    let shear = 2f64.powi(-(df as i32 - 1).abs() * params.j.abs());
    let (wlo, whi) = annulus_window();
    let xi_lo = wlo.max(f1.support.0);
    let xi_hi = whi.min(f1.support.1);
    let eta_lo = wlo.max(f2.support.0);
    let eta_hi = whi.min(f2.support.1);
    if xi_lo >= xi_hi || eta_lo >= eta_hi {
        return Complex64::new(0.0, 0.0);
    }
    // phase rates on the box bound the panel counts
    let rate_xi = if chirp_kernel {
        cd * scale * df / (df - 1.0) * xi_hi.powf(1.0 / (df - 1.0)) * eta_lo.powf(-1.0 / (df - 1.0))
    } else {
        0.0
    };
    let rate_eta = if chirp_kernel {
        cd * scale / (df - 1.0) * xi_hi.powf(df / (df - 1.0)) * eta_lo.powf(-df / (df - 1.0))
    } else {
        0.0
    };
    let layout = |lo: f64, hi: f64, rate: f64| -> (Vec<f64>, Vec<f64>) {
        let cycles = rate * (hi - lo) / TAU;
        let panels = ((cycles * spec.min_panels_per_oscillation / 8.0).ceil() as usize)
            .max(spec.base_panels);
        let (gn, gw) = gauss_legendre(8);
        let h = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * 8);
        let mut weights = Vec::with_capacity(panels * 8);
        for p in 0..panels {
            let a = lo + p as f64 * h;
            let mid = a + h / 2.0;
            let half = h / 2.0;
            for (x, w) in gn.iter().zip(gw.iter()) {
                nodes.push(mid + half * x);
                weights.push(w * half);
            }
        }
        (nodes, weights)
    };
    let (xi_nodes, xi_weights) = layout(xi_lo, xi_hi, rate_xi);
    let (eta_nodes, eta_weights) = layout(eta_lo, eta_hi, rate_eta);
    let eta_vals: Vec<Complex64> = eta_nodes
        .iter()
        .map(|&eta| f2.eval(eta) * phi_hat(eta))
        .collect();
    xi_nodes
        .par_iter()
        .zip(xi_weights.par_iter())
        .map(|(&xi, &wx)| {
            let f1v = f1.eval(xi) * phi_hat(xi);
            if f1v.norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let chirp_base = cd * scale * xi.powf(df / (df - 1.0));
            let mut inner = Complex64::new(0.0, 0.0);
            for ((&eta, &we), f2v) in eta_nodes.iter().zip(eta_weights.iter()).zip(eta_vals.iter())
            {
                if f2v.norm() == 0.0 {
                    continue;
                }
                let f3v = match f3 {
                    Some(p) => {
                        let arg = if params.j >= 0 {
                            shear * xi + eta
                        } else {
                            xi + shear * eta
                        };
                        p.eval(arg)
                    }
                    None => f2.eval(eta), // surrogate form: third slot rides the second
                };
                if f3v.norm() == 0.0 {
                    continue;
                }
                let kernel = if chirp_kernel {
                    Complex64::from_polar(1.0, chirp_base * eta.powf(-1.0 / (df - 1.0)))
                } else {
                    Complex64::new(1.0, 0.0)
                };
                inner += f2v * f3v * kernel * we;
            }
            f1v * inner * wx
        })
        .sum()
}

/// Chirp-kernel trilinear form: the windowed double frequency integral
/// against `e^{i c_d 2^m xi^{d/(d-1)} eta^{-1/(d-1)}}`, with the third input
/// sampled along the sheared diagonal.
pub fn lambda_star_jm(
    params: &DyadicParams,
    f1: &FreqProfile,
    f2: &FreqProfile,
    f3: &FreqProfile,
    spec: &OscQuadSpec,
    seed: u64,
) -> TrilinearResult {
    let value = lambda_star_general(params, f1, f2, Some(f3), true, spec);
    let denom = f1.l2() * f2.l2() * f3.l2();
    TrilinearResult {
        value,
        normalized: if denom > 0.0 { value.norm() / denom } else { 0.0 },
        norm_kind: NormKind::L2L2L2,
        params: *params,
        seed,
    }
}

/// Infinite-shear surrogate of the chirp-kernel form: the third input rides
/// the second frequency variable directly.
pub fn lambda_star_m(
    params: &DyadicParams,
    f1: &FreqProfile,
    f2: &FreqProfile,
    chirp_kernel: bool,
    spec: &OscQuadSpec,
    seed: u64,
) -> TrilinearResult {
    let value = lambda_star_general(params, f1, f2, None, chirp_kernel, spec);
    let denom = f1.l2() * f2.l2() * f2.l2();
    TrilinearResult {
        value,
        normalized: if denom > 0.0 { value.norm() / denom } else { 0.0 },
        norm_kind: NormKind::L2L2L2,
        params: *params,
        seed,
    }
}

/// Matched-chirp witness: conjugating the kernel phase at one frequency and
/// concentrating the other two inputs there produces a normalized value that
/// does not decay in the scale, while a random first input restores decay.
pub fn failure_witness(d: u32, m: i32, spec: &OscQuadSpec) -> Result<TrilinearResult> {
    let params = DyadicParams::new(d, 0, m)?;
    let eta0 = 1.0;
    let f1 = FreqProfile::matched_chirp(d, m, eta0, annulus_window());
    let f2 = FreqProfile::narrow_bump(eta0, 2f64.powi(-m).min(0.25));
    Ok(lambda_star_m(&params, &f1, &f2, true, spec, 0))
}

/// Same geometry with a random unit-norm first input (the decay contrast).
pub fn failure_witness_random(
    d: u32,
    m: i32,
    seed: u64,
    spec: &OscQuadSpec,
) -> Result<TrilinearResult> {
    let params = DyadicParams::new(d, 0, m)?;
    let eta0 = 1.0;
    let f1 = FreqProfile::random_smooth(annulus_window(), 8, derive_seed(seed, &[m as i64]));
    let f2 = FreqProfile::narrow_bump(eta0, 2f64.powi(-m).min(0.25));
    Ok(lambda_star_m(&params, &f1, &f2, true, spec, seed))
}

/// Probe phases of the multiplier slice at scale `(j, m)`: the chirp-kernel
/// phase plus the cell-anchored linear term, expressed as members of the
/// first phase family (so they can be injected into a deficit grid).
pub fn multiplier_probe_phase(
    params: &DyadicParams,
    eta: f64,
    alpha_cell: f64,
) -> PhaseFamilyPoint {
    let df = params.d as f64;
    let a = c_d(params.d) * 2f64.powi(params.m) * eta.powf(-1.0 / (df - 1.0));
    let b = TAU * 2f64.powi(-(params.d as i32 - 1) * params.j) * alpha_cell;
    // pairing e^{-iq} against the multiplier's e^{+i phase} flips the signs
    PhaseFamilyPoint {
        family: PhaseFamily::Q1,
        a: -a,
        b: -b,
        m_tag: params.m,
        d: params.d,
    }
}

/// Multiplier slice: for each probe `eta`, the pairing of the windowed first
/// input against the chirp phase `c_d 2^m eta^{-1/(d-1)} xi^{d/(d-1)} +
/// 2 pi 2^{-(d-1)j} alpha xi`, evaluated on the shared pairing layout so the
/// uniformity bound is exact up to quadrature error.
pub fn multiplier_mdjm(
    params: &DyadicParams,
    f1: &FreqProfile,
    probes: &[f64],
    alpha_cell: f64,
    layout: &PairingLayout,
) -> Vec<Complex64> {
    let windowed: Vec<Complex64> = layout
        .nodes
        .iter()
        .map(|&xi| f1.eval(xi) * phi1_hat(xi))
        .collect();
    probes
        .iter()
        .map(|&eta| {
            let q = multiplier_probe_phase(params, eta, alpha_cell);
            layout.pairing(&windowed, &q)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bumps::composite_gl_c;
    use crate::foundation::{make_grid, random_bandlimited, Band};
    use crate::harness::fit_slope;
    use crate::uniformity::{uniformity_deficit, FamilyGrid};
    use approx::assert_relative_eq;

    #[test]
    fn gamma_jm_values() {
        // regime boundary: both branches give 1
        assert_relative_eq!(gamma_jm(2, 10, 10, None), 1.0);
        assert_relative_eq!(gamma_jm(3, 5, 10, None), 1.0);
        // small-shear branch
        assert_relative_eq!(gamma_jm(2, 2, 10, None), 2f64.powf(-1.0));
        // large-shear branch with the epsilon floor
        assert_relative_eq!(
            gamma_jm(2, 12, 10, Some(1.0 / 16.0)),
            2f64.powf(-10.0 / 16.0)
        );
        // summability surrogate: partial sums stabilize by the box edge
        let total: f64 = (1..=14)
            .flat_map(|m| (-20..=20).map(move |j| gamma_jm(2, j, m, None)))
            .sum();
        let smaller: f64 = (1..=13)
            .flat_map(|m| (-18..=18).map(move |j| gamma_jm(2, j, m, None)))
            .sum();
        assert!((total - smaller) / total < 0.2, "gamma tail not settling");
    }

    #[test]
    fn lambda_zero_inputs() {
        let g = make_grid(-4.0, 8.0, 128).unwrap();
        let params = DyadicParams::new(2, 1, 4).unwrap();
        let f = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, 1).unwrap();
        let z = SampledSignal::zero(g);
        let spec = OscQuadSpec::fast();
        let r = lambda_jmn(&params, &f, &z, &f, &spec, 0).unwrap();
        assert_eq!(r.value.norm(), 0.0);
        assert_eq!(r.normalized, 0.0);
    }

    #[test]
    fn lambda_band_precondition() {
        let g = make_grid(-4.0, 8.0, 128).unwrap();
        let params = DyadicParams::new(2, 1, 4).unwrap();
        let wide = random_bandlimited(g, Band::new(-4.0, 4.0), 1.0, 2).unwrap();
        let ok = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, 3).unwrap();
        let spec = OscQuadSpec::fast();
        assert!(lambda_jmn(&params, &wide, &ok, &ok, &spec, 0).is_err());
    }

    #[test]
    fn lambda_two_route_agreement() {
        let g = make_grid(-4.0, 8.0, 128).unwrap();
        let cache = SymbolCache::new(2, OscQuadSpec::default());
        let spec = OscQuadSpec::default();
        for (j, m) in [(1i32, 4i32), (2, 5)] {
            let params = DyadicParams::new(2, j, m).unwrap().with_n(0);
            for trial in 0..3u64 {
                let f1 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, 300 + trial).unwrap();
                let f2 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, 400 + trial).unwrap();
                let f3 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, 500 + trial).unwrap();
                let a = lambda_jmn(&params, &f1, &f2, &f3, &spec, trial).unwrap();
                let b = lambda_jmn_freq(&params, &cache, &f1, &f2, &f3, trial).unwrap();
                let rel = (a.value - b.value).norm() / a.value.norm().max(1e-300);
                assert!(
                    rel < 1e-6,
                    "duality routes disagree by {rel} at (j={j}, m={m}, trial={trial})"
                );
            }
        }
    }

    #[test]
    fn lambda_decay_in_scale_small_shear() {
        let g = make_grid(-4.0, 8.0, 128).unwrap();
        let spec = OscQuadSpec::fast();
        let j = 1;
        let pts: Vec<(f64, f64)> = (4..=9)
            .map(|m| {
                let params = DyadicParams::new(2, j, m).unwrap();
                let mut worst = 0.0_f64;
                for trial in 0..6u64 {
                    let s1 = derive_seed(900, &[m as i64, trial as i64, 1]);
                    let s2 = derive_seed(900, &[m as i64, trial as i64, 2]);
                    let s3 = derive_seed(900, &[m as i64, trial as i64, 3]);
                    let f1 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, s1).unwrap();
                    let f2 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, s2).unwrap();
                    let f3 = random_bandlimited(g, Band::new(0.5, 2.0), 1.0, s3).unwrap();
                    let r = lambda_jmn(&params, &f1, &f2, &f3, &spec, trial).unwrap();
                    worst = worst.max(r.normalized);
                }
                (m as f64, worst)
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(fit.slope < 0.0, "no decay in m: slope {}", fit.slope);
    }

    #[test]
    fn lambda_star_decay_past_regime_boundary() {
        // fixed shear deep in the large-shear regime: the chirp-kernel form
        // decays at least at the sixth-root rate once the scale passes the
        // boundary
        let spec = OscQuadSpec::fast();
        let j = 6;
        let pts: Vec<(f64, f64)> = (5..=9)
            .map(|m| {
                let params = DyadicParams::new(2, j, m).unwrap();
                let mut worst = 0.0_f64;
                for t in 0..4u64 {
                    let s = derive_seed(600, &[m as i64, t as i64]);
                    let f1 = FreqProfile::random_smooth((0.5, 2.0), 8, derive_seed(s, &[1]));
                    let f2 = FreqProfile::random_smooth((0.5, 2.0), 8, derive_seed(s, &[2]));
                    let f3 = FreqProfile::random_smooth((0.25, 4.0), 8, derive_seed(s, &[3]));
                    worst = worst.max(lambda_star_jm(&params, &f1, &f2, &f3, &spec, s).normalized);
                }
                (m as f64, worst)
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(
            fit.slope <= -1.0 / 6.0 + 0.08,
            "chirp-kernel form slope {}",
            fit.slope
        );
    }

    #[test]
    fn lambda_star_flat_kernel_factorizes() {
        let params = DyadicParams::new(2, 0, 4).unwrap();
        let f1 = FreqProfile::random_smooth((0.5, 2.0), 6, 11);
        let f2 = FreqProfile::random_smooth((0.5, 2.0), 6, 12);
        let spec = OscQuadSpec {
            base_panels: 128,
            ..OscQuadSpec::default()
        };
        let r = lambda_star_m(&params, &f1, &f2, false, &spec, 0);
        // direct product of the two 1D integrals
        let a = composite_gl_c(|xi| f1.eval(xi) * phi_hat(xi), 0.5, 2.0, 512, 8);
        let b = composite_gl_c(
            |eta| f2.eval(eta) * f2.eval(eta) * phi_hat(eta),
            0.5,
            2.0,
            512,
            8,
        );
        assert!(
            (r.value - a * b).norm() < 1e-10,
            "flat kernel does not factorize: {} vs {}",
            r.value,
            a * b
        );
    }

    #[test]
    fn failure_witness_flat_and_contrast_decays() {
        let spec = OscQuadSpec::fast();
        let witness: Vec<(f64, f64)> = (4..=9)
            .map(|m| (m as f64, failure_witness(2, m, &spec).unwrap().normalized))
            .collect();
        for (m, v) in &witness {
            assert!(*v >= 0.3, "witness value {v} at m={m} below 0.3");
        }
        let fit = fit_slope(&witness).unwrap();
        assert!(fit.slope.abs() < 0.05, "witness slope {}", fit.slope);

        let contrast: Vec<(f64, f64)> = (4..=9)
            .map(|m| {
                let mut worst = 0.0_f64;
                for t in 0..3u64 {
                    worst = worst
                        .max(failure_witness_random(2, m, t, &spec).unwrap().normalized);
                }
                (m as f64, worst)
            })
            .collect();
        let fit = fit_slope(&contrast).unwrap();
        assert!(fit.slope <= -0.2, "random contrast slope {}", fit.slope);
    }

    #[test]
    fn multiplier_bound_is_exact_with_injected_probes() {
        let params = DyadicParams::new(2, 8, 6).unwrap();
        let f1 = FreqProfile::random_smooth((1.0 / 16.0, 39.0 / 16.0), 8, 77);
        let alpha = 2f64.powi(params.m); // left endpoint of the second cell
        let probes: Vec<f64> = (0..12).map(|i| 0.6 + 0.1 * i as f64).collect();
        let injected: Vec<(f64, f64)> = probes
            .iter()
            .map(|&eta| {
                let q = multiplier_probe_phase(&params, eta, alpha);
                (q.a, q.b)
            })
            .collect();
        let grid = FamilyGrid {
            family: PhaseFamily::Q1,
            d: 2,
            m_tag: params.m,
            a_per_sign: 8,
            b_count: 8,
            injected,
        };
        let interval = (1.0 / 16.0, 39.0 / 16.0);
        let layout = PairingLayout::for_family(interval, &grid);
        let vals = multiplier_mdjm(&params, &f1, &probes, alpha, &layout);
        let sup = vals.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
        // deficit of the windowed input over the probe-injected family
        let windowed: Vec<Complex64> = layout
            .nodes
            .iter()
            .map(|&xi| f1.eval(xi) * phi1_hat(xi))
            .collect();
        let rep = uniformity_deficit(&windowed, &layout, &grid).unwrap();
        let bound = rep.sigma_value * layout.norm(&windowed);
        assert!(
            sup <= bound + 1e-9,
            "multiplier sup {sup} exceeds uniformity bound {bound}"
        );
        // modulus bound: sup <= int |f1 phi1_hat|
        let l1: f64 = layout
            .weights
            .iter()
            .zip(windowed.iter())
            .map(|(w, v)| w * v.norm())
            .sum();
        assert!(sup <= l1 + 1e-9);
    }

    #[test]
    fn multiplier_peaks_on_matched_phase() {
        // f1 = e^{iq} with q the exact probe phase at eta0 maximizes |value|
        let params = DyadicParams::new(2, 8, 6).unwrap();
        let alpha = 2f64.powi(params.m);
        let eta0 = 1.0;
        let q0 = multiplier_probe_phase(&params, eta0, alpha);
        let interval = (1.0 / 16.0, 39.0 / 16.0);
        let layout = PairingLayout::with_rate(
            interval,
            q0.phase_deriv_bound(interval) * 1.5,
        );
        let f1 = FreqProfile::new(interval, move |xi| {
            Complex64::from_polar(1.0, q0.phase(xi))
        });
        let vals = multiplier_mdjm(&params, &f1, &[eta0], alpha, &layout);
        let expect: f64 = layout
            .nodes
            .iter()
            .zip(layout.weights.iter())
            .map(|(&xi, w)| w * phi1_hat(xi))
            .sum();
        assert!(
            (vals[0].norm() - expect).abs() < 1e-9,
            "matched phase value {} vs window mass {expect}",
            vals[0].norm()
        );
    }
}
