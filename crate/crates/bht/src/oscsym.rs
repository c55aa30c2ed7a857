//! Oscillatory-integral engine and the symbols attached to each dyadic piece
//! of the operator: the base symbol `m_d`, its rescaling `m_j`, stationary
//! phase evaluation, and the principal parts of the chirp inverses used by
//! the phase-family machinery.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::bumps::{gauss_legendre, phi1_hat, rho};
use crate::error::{BhtError, Result};

/// Controls for oscillatory quadrature.
#[derive(Debug, Clone, Copy)]
pub struct OscQuadSpec {
    pub base_panels: usize,
    pub tol: f64,
    pub max_refine: usize,
    /// Panels per `2 pi` of phase change; 8-node panels at the default of 8
    /// resolve each oscillation 64 times over.
    pub min_panels_per_oscillation: f64,
}

impl Default for OscQuadSpec {
    fn default() -> Self {
        OscQuadSpec {
            base_panels: 32,
            tol: 1e-9,
            max_refine: 10,
            min_panels_per_oscillation: 8.0,
        }
    }
}

impl OscQuadSpec {
    /// Lighter panel rule for scan loops where 1e-6 accuracy suffices.
    pub fn fast() -> Self {
        OscQuadSpec {
            base_panels: 16,
            tol: 1e-7,
            max_refine: 8,
            min_panels_per_oscillation: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 || self.base_panels < 16 {
            return Err(BhtError::InvalidParameter(
                "OscQuadSpec requires tol > 0 and base_panels >= 16".into(),
            ));
        }
        Ok(())
    }
}

/// Value of an oscillatory integral together with the refinement gap.
#[derive(Debug, Clone, Copy)]
pub struct SymbolValue {
    pub value: Complex64,
    /// Difference between the last two refinement levels.
    pub est_error: f64,
    pub refinements_used: usize,
    pub converged: bool,
}

impl SymbolValue {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

const PANEL_ORDER: usize = 8;

fn composite_osc(
    amplitude: &dyn Fn(f64) -> Complex64,
    phase: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(PANEL_ORDER);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        let half = h / 2.0;
        let mut cell = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let t = mid + half * x;
            cell += amplitude(t) * Complex64::from_polar(1.0, -phase(t)) * *w;
        }
        acc += cell * half;
    }
    acc
}

/// Adaptive oscillation-resolving quadrature of
/// `int_a^b amplitude(t) e^{-i phase(t)} dt`.
///
/// The initial panel count honors `min_panels_per_oscillation` against the
/// total phase variation (sampled from `phase_deriv` when supplied, estimated
/// from phase differences otherwise); panel counts then double until two
/// successive values agree within `tol` or `max_refine` is exhausted.
/// Non-convergence is reported in the result, not fatal.
pub fn osc_integral(
    amplitude: &dyn Fn(f64) -> Complex64,
    phase: &dyn Fn(f64) -> f64,
    phase_deriv: Option<&dyn Fn(f64) -> f64>,
    interval: (f64, f64),
    spec: &OscQuadSpec,
) -> SymbolValue {
    let (a, b) = interval;
    if a == b {
        return SymbolValue {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            refinements_used: 0,
            converged: true,
        };
    }
    // Total phase variation from 129 derivative samples (the phases used
    // here are smooth, so moderate sampling cannot alias).
    let samples = 128;
    let mut variation = 0.0;
    match phase_deriv {
        Some(dp) => {
            let h = (b - a) / samples as f64;
            for i in 0..=samples {
                let t = a + i as f64 * h;
                let w = if i == 0 || i == samples { 0.5 } else { 1.0 };
                variation += w * dp(t).abs() * h;
            }
        }
        None => {
            let h = (b - a) / samples as f64;
            let mut prev = phase(a);
            for i in 1..=samples {
                let t = a + i as f64 * h;
                let cur = phase(t);
                variation += (cur - prev).abs();
                prev = cur;
            }
        }
    }
    let osc_panels = (spec.min_panels_per_oscillation * variation / TAU).ceil() as usize;
    let mut panels = spec.base_panels.max(osc_panels).max(1);
    let mut value = composite_osc(amplitude, phase, a, b, panels);
    let mut est_error = f64::INFINITY;
    let mut refinements = 0;
    for r in 1..=spec.max_refine {
        panels *= 2;
        let next = composite_osc(amplitude, phase, a, b, panels);
        est_error = (next - value).norm();
        value = next;
        refinements = r;
        if est_error < spec.tol {
            return SymbolValue {
                value,
                est_error,
                refinements_used: refinements,
                converged: true,
            };
        }
    }
    SymbolValue {
        value,
        est_error,
        refinements_used: refinements,
        converged: false,
    }
}

/// Support of the odd kernel weight.
pub const RHO_SUPPORT: (f64, f64) = (-2.0, 2.0);

/// Base oscillatory symbol
/// `m_d(xi, eta) = int rho(t) e^{-2 pi i (xi t + eta t^d)} dt`.
pub fn symbol_md(d: u32, xi: f64, eta: f64, spec: &OscQuadSpec) -> SymbolValue {
    assert!(d >= 2, "curve degree must be at least 2");
    let amp = |t: f64| Complex64::new(rho(t), 0.0);
    let phase = move |t: f64| TAU * (xi * t + eta * t.powi(d as i32));
    let dphase = move |t: f64| TAU * (xi + eta * d as f64 * t.powi(d as i32 - 1));
    // The two support lobes are integrated separately so panels are never
    // wasted on the gap around the origin.
    let left = osc_integral(&amp, &phase, Some(&dphase), (-2.0, -0.5), spec);
    let right = osc_integral(&amp, &phase, Some(&dphase), (0.5, 2.0), spec);
    SymbolValue {
        value: left.value + right.value,
        est_error: left.est_error + right.est_error,
        refinements_used: left.refinements_used.max(right.refinements_used),
        converged: left.converged && right.converged,
    }
}

/// Rescaled symbol `m_j(xi, eta) = m_d(2^{-j} xi, 2^{-dj} eta)`.
pub fn symbol_mj(d: u32, j: i32, xi: f64, eta: f64, spec: &OscQuadSpec) -> SymbolValue {
    let sj = 2f64.powi(-j);
    let sdj = 2f64.powi(-(d as i32) * j);
    symbol_md(d, sj * xi, sdj * eta, spec)
}

/// Real critical point of `xi t + eta t^d` inside the working window
/// `[-5/2, -1/4] u [1/4, 5/2]`, if any.
pub fn critical_point(d: u32, xi: f64, eta: f64) -> Option<f64> {
    if eta == 0.0 {
        return None;
    }
    let ratio = -xi / (d as f64 * eta);
    let mut roots: Vec<f64> = Vec::new();
    if d == 2 {
        roots.push(ratio);
    } else {
        let p = 1.0 / (d as f64 - 1.0);
        if (d - 1) % 2 == 1 {
            // odd root exists for every sign
            roots.push(ratio.signum() * ratio.abs().powf(p));
        } else if ratio > 0.0 {
            let r = ratio.powf(p);
            roots.push(r);
            roots.push(-r);
        }
    }
    roots
        .into_iter()
        .find(|t| (0.25..=2.5).contains(&t.abs()))
}

/// Phase constant of the stationary regime:
/// `c_d = 2 pi (d-1) d^{-d/(d-1)}`, the coefficient in
/// `e^{i c_d 2^m xi^{d/(d-1)} eta^{-1/(d-1)}}` for frequencies in the
/// positive windows.
pub fn c_d(d: u32) -> f64 {
    let df = d as f64;
    TAU * (df - 1.0) * df.powf(-df / (df - 1.0))
}

/// Stationary-phase evaluation of `m_d(2^m xi, 2^m eta)`: the sum over
/// critical points in the kernel support of
/// `rho(t*) e^{-2 pi i 2^m phi(t*)} sqrt(1 / (2 * 2^m |phi''(t*)|)) e^{i sgn(phi'') pi/4}`.
///
/// Errors when no critical point lies in the support.
pub fn stationary_md(d: u32, m: i32, xi: f64, eta: f64) -> Result<Complex64> {
    if eta == 0.0 {
        return Err(BhtError::Precondition(
            "stationary_md requires eta != 0".into(),
        ));
    }
    let scale = 2f64.powi(m);
    let df = d as f64;
    let ratio = -xi / (df * eta);
    let mut crits: Vec<f64> = Vec::new();
    let p = 1.0 / (df - 1.0);
    if (d - 1) % 2 == 1 {
        crits.push(ratio.signum() * ratio.abs().powf(p));
    } else if ratio > 0.0 {
        let r = ratio.powf(p);
        crits.push(r);
        crits.push(-r);
    }
    let in_supp: Vec<f64> = crits
        .into_iter()
        .filter(|t| (0.5..=2.0).contains(&t.abs()))
        .collect();
    if in_supp.is_empty() {
        return Err(BhtError::Precondition(format!(
            "no critical point of {xi} t + {eta} t^{d} inside the kernel support"
        )));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for t in in_supp {
        let phi = xi * t + eta * t.powi(d as i32);
        // Total phase is Phi = -2 pi 2^m (xi t + eta t^d), so
        // Phi'' = -2 pi 2^m d(d-1) eta t^{d-2}.
        let full_phi2 = -TAU * scale * df * (df - 1.0) * eta * t.powi(d as i32 - 2);
        let magnitude = rho(t) * (TAU / full_phi2.abs()).sqrt();
        let chirp = Complex64::from_polar(1.0, -TAU * scale * phi + full_phi2.signum() * PI / 4.0);
        total += magnitude * chirp;
    }
    Ok(total)
}

/// Principal part of `int phi1_hat(xi) e^{i a xi^{d/(d-1)}} e^{i (x+b) xi} dxi`
/// (positive-frequency window), from second-order stationary phase.
///
/// The critical frequency solves `a (d/(d-1)) xi^{1/(d-1)} + (x+b) = 0`; the
/// value vanishes whenever that frequency leaves the window support.
pub fn principal_part_q1(d: u32, a: f64, b: f64, x: f64) -> Result<Complex64> {
    if a == 0.0 {
        return Err(BhtError::Precondition("principal_part_q1: a = 0".into()));
    }
    let df = d as f64;
    let y = x + b;
    // xi* = (-(x+b) (d-1) / (a d))^{d-1}
    let base = -y * (df - 1.0) / (a * df);
    if base <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let xi_star = base.powf(df - 1.0);
    let window = phi1_hat(xi_star);
    if window == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let psi = a * xi_star.powf(df / (df - 1.0)) + y * xi_star;
    let psi2 = a * df / (df - 1.0).powi(2) * xi_star.powf((2.0 - df) / (df - 1.0));
    let magnitude = window * (TAU / psi2.abs()).sqrt();
    Ok(magnitude * Complex64::from_polar(1.0, psi + psi2.signum() * PI / 4.0))
}

/// Mirrored principal part for the inverse-root phase family:
/// `int phi1_hat(eta) e^{i a eta^{-1/(d-1)}} e^{i (x+b) eta} d eta`.
pub fn principal_part_q2(d: u32, a: f64, b: f64, x: f64) -> Result<Complex64> {
    if a == 0.0 {
        return Err(BhtError::Precondition("principal_part_q2: a = 0".into()));
    }
    let df = d as f64;
    let y = x + b;
    // eta* solves -a/(d-1) eta^{-d/(d-1)} + (x+b) = 0
    let base = y * (df - 1.0) / a;
    if base <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let eta_star = base.powf(-(df - 1.0) / df);
    let window = phi1_hat(eta_star);
    if window == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let psi = a * eta_star.powf(-1.0 / (df - 1.0)) + y * eta_star;
    let psi2 = a * df / (df - 1.0).powi(2) * eta_star.powf(-1.0 / (df - 1.0) - 2.0);
    let magnitude = window * (TAU / psi2.abs()).sqrt();
    Ok(magnitude * Complex64::from_polar(1.0, psi + psi2.signum() * PI / 4.0))
}

/// Direct quadrature of the chirp inverse that [`principal_part_q1`]
/// approximates; the oracle for its validation tests.
pub fn chirp_inverse_q1(d: u32, a: f64, b: f64, x: f64, spec: &OscQuadSpec) -> SymbolValue {
    let df = d as f64;
    let amp = |xi: f64| Complex64::new(phi1_hat(xi), 0.0);
    let phase = move |xi: f64| -(a * xi.powf(df / (df - 1.0)) + (x + b) * xi);
    let dphase = move |xi: f64| -(a * df / (df - 1.0) * xi.powf(1.0 / (df - 1.0)) + (x + b));
    osc_integral(&amp, &phase, Some(&dphase), (1.0 / 8.0, 19.0 / 8.0), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fit_slope;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dspec() -> OscQuadSpec {
        OscQuadSpec::default()
    }

    #[test]
    fn osc_integral_basics() {
        // odd amplitude, zero phase
        let v = osc_integral(
            &|t| Complex64::new(rho(t), 0.0),
            &|_| 0.0,
            None,
            (-2.0, 2.0),
            &dspec(),
        );
        assert!(v.abs() < 1e-9);
        // full periods of a pure tone on [0, 1]
        let xi = 4.0;
        let v = osc_integral(
            &|_| Complex64::new(1.0, 0.0),
            &|t| TAU * xi * t,
            Some(&|_| TAU * xi),
            (0.0, 1.0),
            &dspec(),
        );
        assert!(v.abs() < 1e-9, "full periods must cancel, got {}", v.abs());
        // quadratic phase vs a 4x-refined oracle
        let q = 2f64.powi(6);
        let phase = move |t: f64| TAU * (q * t + q * t * t);
        let dphase = move |t: f64| TAU * (q + 2.0 * q * t);
        let v = osc_integral(
            &|t| Complex64::new(rho(t), 0.0),
            &phase,
            Some(&dphase),
            (0.5, 2.0),
            &dspec(),
        );
        let fine = composite_osc(
            &|t| Complex64::new(rho(t), 0.0),
            &phase,
            0.5,
            2.0,
            4 * 4096,
        );
        assert!((v.value - fine).norm() < 1e-8);
    }

    #[test]
    fn quadrature_self_consistency() {
        // Halving tol never moves the value by more than the previous gap.
        let mut spec = dspec();
        spec.tol = 1e-6;
        let a = symbol_md(2, -37.3, 19.1, &spec);
        spec.tol = 5e-7;
        let b = symbol_md(2, -37.3, 19.1, &spec);
        assert!((a.value - b.value).norm() <= a.est_error + 1e-12);
    }

    #[test]
    fn symbol_md_symmetries() {
        let spec = dspec();
        assert!(symbol_md(2, 0.0, 0.0, &spec).abs() < 1e-9);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let xi: f64 = rng.gen_range(-8.0..8.0);
            let eta: f64 = rng.gen_range(-8.0..8.0);
            for d in [2u32, 3] {
                let v = symbol_md(d, xi, eta, &spec).value;
                let conj = symbol_md(d, -xi, -eta, &spec).value;
                assert!((v.conj() - conj).norm() < 1e-9, "conjugation symmetry");
                // substitution t -> -t
                let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
                let mirrored = symbol_md(d, -xi, sign * eta, &spec).value;
                assert!((v + mirrored).norm() < 1e-9, "oddness under t -> -t");
            }
        }
    }

    #[test]
    fn symbol_mj_scaling_identity() {
        let spec = dspec();
        let d = 2;
        let v0 = symbol_mj(d, 0, 1.3, -0.7, &spec).value;
        let vd = symbol_md(d, 1.3, -0.7, &spec).value;
        assert!((v0 - vd).norm() < 1e-12);
        for j in [-3i32, 2, 5] {
            let v = symbol_mj(d, j, 2f64.powi(j), 2f64.powi(d as i32 * j), &spec).value;
            let w = symbol_md(d, 1.0, 1.0, &spec).value;
            assert!((v - w).norm() < 1e-10);
        }
        // against direct quadrature of the j-scaled defining integral
        let (d, j, xi, eta) = (2u32, 3i32, 5.0, -9.0);
        let sj = 2f64.powi(-j);
        let sdj = 2f64.powi(-(d as i32) * j);
        let direct = osc_integral(
            &|t| Complex64::new(rho(t), 0.0),
            &move |t: f64| TAU * (sj * xi * t + sdj * eta * t * t),
            None,
            (-2.0, 2.0),
            &dspec(),
        );
        let v = symbol_mj(d, j, xi, eta, &spec);
        assert!((v.value - direct.value).norm() < 1e-8);
    }

    #[test]
    fn critical_point_examples() {
        assert_relative_eq!(critical_point(2, -2.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(critical_point(2, 2.0, 1.0).unwrap(), -1.0);
        assert_relative_eq!(critical_point(3, -3.0, 1.0).unwrap(), 1.0);
        assert!(critical_point(2, -100.0, 1.0).is_none());
        assert!(critical_point(2, 1.0, 0.0).is_none());
    }

    #[test]
    fn stationary_phase_matches_symbol() {
        // d = 2: single critical point at t* = 0.909...
        let (xi, eta) = (-2.0, 1.1);
        let m = 12;
        let spec = dspec();
        let exact = symbol_md(2, 2f64.powi(m) * xi, 2f64.powi(m) * eta, &spec).value;
        let approx = stationary_md(2, m, xi, eta).unwrap();
        let rel = (exact - approx).norm() / 2f64.powi(-m / 2);
        assert!(rel < 0.1, "stationary phase relative error {rel}");
        // phase agreement modulo a fixed offset over m = 10..14
        let mut offsets = Vec::new();
        for m in 10..=14 {
            let e = symbol_md(2, 2f64.powi(m) * xi, 2f64.powi(m) * eta, &spec).value;
            let a = stationary_md(2, m, xi, eta).unwrap();
            offsets.push((e / a).arg());
        }
        for w in offsets.windows(2) {
            assert!((w[0] - w[1]).abs() < 0.1, "phase offset drift {offsets:?}");
        }
        assert!(stationary_md(2, 4, 20.0, 1.0).is_err(), "no critical point");
    }

    #[test]
    fn stationary_decay_slope() {
        let spec = dspec();
        let (xi, eta) = (-2.0, 1.1);
        let pts: Vec<(f64, f64)> = (4..=14)
            .map(|m| {
                (
                    m as f64,
                    symbol_md(2, 2f64.powi(m) * xi, 2f64.powi(m) * eta, &spec).abs(),
                )
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(
            (fit.slope + 0.5).abs() < 0.05,
            "stationary slope {} (r2 {})",
            fit.slope,
            fit.r2
        );
        assert!(fit.r2 >= 0.98);
    }

    #[test]
    fn principal_part_q1_contract() {
        let d = 2;
        let m = 12;
        let a = 2f64.powi(m);
        let b = 0.3;
        // modulus bound C_d |a|^{-1/2}
        let cap = (TAU / (a * 2.0 / 1.0)).sqrt() * 1.000001;
        for i in 0..100 {
            let x = -6000.0 + 37.0 * i as f64;
            let v = principal_part_q1(d, a, b, x).unwrap();
            assert!(v.norm() <= cap, "modulus bound violated at x={x}");
        }
        // support: zero when the critical frequency leaves the window
        let v = principal_part_q1(d, a, b, 10.0).unwrap();
        assert_eq!(v.norm(), 0.0);
        assert!(principal_part_q1(d, 0.0, b, 1.0).is_err());

        // relative L^2 error against direct quadrature on the support window
        let spec = dspec();
        let mut num = 0.0;
        let mut den = 0.0;
        // xi* in [1/8, 19/8] maps to x + b in -2 a d/(d-1) * [1/8, 19/8]
        let lo = -2.0 * a * 19.0 / 8.0;
        let hi = -2.0 * a / 8.0;
        let steps = 160;
        for i in 0..=steps {
            let x = lo + (hi - lo) * i as f64 / steps as f64 - b;
            let p = principal_part_q1(d, a, b, x).unwrap();
            let q = chirp_inverse_q1(d, a, b, x, &spec).value;
            num += (p - q).norm_sqr();
            den += q.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 0.15, "principal part relative L2 error {rel}");
    }

    #[test]
    fn principal_part_q2_contract() {
        let d = 2;
        let a = 2f64.powi(12);
        let b = -0.1;
        // agreement with direct quadrature of the q2 chirp inverse
        let spec = dspec();
        let df = d as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        // eta* in the window plateau maps x + b into a/(d-1) * eta*^{-d/(d-1)}
        let steps = 120;
        for i in 0..=steps {
            let eta_star = 0.5 + 1.5 * i as f64 / steps as f64;
            let y = a / (df - 1.0) * eta_star.powf(-df / (df - 1.0));
            let x = y - b;
            let p = principal_part_q2(d, a, b, x).unwrap();
            let amp = |eta: f64| Complex64::new(phi1_hat(eta), 0.0);
            let phase = move |eta: f64| -(a * eta.powf(-1.0 / (df - 1.0)) + (x + b) * eta);
            let q = osc_integral(&amp, &phase, None, (1.0 / 8.0, 19.0 / 8.0), &spec).value;
            num += (p - q).norm_sqr();
            den += q.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel < 0.15, "q2 principal part relative L2 error {rel}");
    }

    #[test]
    fn nonstationary_tail_decay() {
        // |xi| > 5^d |eta|: the symbol minus its eta = 0 slice decays fast.
        let spec = dspec();
        let (xi, eta) = (-2.0, 0.05);
        let pts: Vec<(f64, f64)> = (4..=10)
            .map(|m| {
                let s = 2f64.powi(m);
                let amp = |t: f64| {
                    Complex64::new(rho(t), 0.0)
                        * (Complex64::from_polar(1.0, -TAU * s * eta * t * t)
                            - Complex64::new(1.0, 0.0))
                };
                let phase = move |t: f64| TAU * s * xi * t;
                let v = osc_integral(&amp, &phase, None, (-2.0, 2.0), &spec);
                (m as f64, v.abs().max(1e-18))
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(fit.slope <= -3.0, "nonstationary tail slope {}", fit.slope);
    }
}
