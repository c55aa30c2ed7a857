//! Two-dimensional oscillatory bilinear forms, the decay exponents attached
//! to mixed-derivative lower bounds, analytic derivative witnesses for the
//! difference phases, and the curve-root forms whose scale decay closes the
//! large-shear estimates.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bumps::{gauss_legendre, smooth_bump, smooth_step};
use crate::error::{BhtError, Result};
use crate::trilinear::FreqProfile;

/// Decay exponent from an `ell`-th order mixed-derivative bound:
/// `1/(2 ell)` for `ell >= 2`, `1/(2 + eps)` for `ell = 1`.
pub fn dexp(ell: u32, eps: f64) -> Result<f64> {
    if ell == 0 {
        return Err(BhtError::InvalidParameter("ell must be >= 1".into()));
    }
    Ok(if ell >= 2 {
        1.0 / (2.0 * ell as f64)
    } else {
        if eps <= 0.0 {
            return Err(BhtError::InvalidParameter(
                "ell = 1 requires a positive epsilon".into(),
            ));
        }
        1.0 / (2.0 + eps)
    })
}

/// Two-dimensional phases with analytic derivatives.
pub trait Phase2d: Sync {
    fn phi(&self, x: f64, y: f64) -> f64;
    fn dphi_dx(&self, x: f64, y: f64) -> f64;
    fn dphi_dy(&self, x: f64, y: f64) -> f64;
}

/// Monomial model phase `x^p y^q / (p q)`-style, used for exponent checks.
pub struct MonomialPhase {
    pub px: i32,
    pub py: i32,
    pub coeff: f64,
}

impl Phase2d for MonomialPhase {
    fn phi(&self, x: f64, y: f64) -> f64 {
        self.coeff * x.powi(self.px) * y.powi(self.py)
    }
    fn dphi_dx(&self, x: f64, y: f64) -> f64 {
        self.coeff * self.px as f64 * x.powi(self.px - 1) * y.powi(self.py)
    }
    fn dphi_dy(&self, x: f64, y: f64) -> f64 {
        self.coeff * self.py as f64 * x.powi(self.px) * y.powi(self.py - 1)
    }
}

/// Difference of curve-root phases along a shifted pair:
/// `(x - y^{1/d} + c)^d - (x + 2^{-(d-1)j} tau - (y + tau)^{1/d} ... )`
/// realized as `phi_c(x, y) - phi_c(x + 2^{-(d-1)j} tau, y + tau)`.
pub struct CurveRootDifference {
    pub d: u32,
    pub c: f64,
    pub j: i32,
    pub tau: f64,
}

impl CurveRootDifference {
    fn phi_c(&self, x: f64, y: f64) -> f64 {
        (x - y.powf(1.0 / self.d as f64) + self.c).powi(self.d as i32)
    }

    fn shift(&self) -> f64 {
        2f64.powi(-(self.d as i32 - 1) * self.j)
    }

    /// Analytic mixed derivative `d_x^{d-1} d_y` of the difference phase:
    /// `-(d-1)! ((y)^{1/d - 1} - (y + tau)^{1/d - 1})`.
    pub fn mixed_derivative(&self, _x: f64, y: f64) -> f64 {
        let df = self.d as f64;
        let fact: f64 = (1..self.d).map(|k| k as f64).product();
        -fact * (y.powf(1.0 / df - 1.0) - (y + self.tau).powf(1.0 / df - 1.0))
    }
}

impl Phase2d for CurveRootDifference {
    fn phi(&self, x: f64, y: f64) -> f64 {
        self.phi_c(x, y) - self.phi_c(x + self.shift() * self.tau, y + self.tau)
    }
    fn dphi_dx(&self, x: f64, y: f64) -> f64 {
        let df = self.d as f64;
        let root = |x: f64, y: f64| (x - y.powf(1.0 / df) + self.c).powi(self.d as i32 - 1);
        df * root(x, y) - df * root(x + self.shift() * self.tau, y + self.tau)
    }
    fn dphi_dy(&self, x: f64, y: f64) -> f64 {
        let df = self.d as f64;
        let term = |x: f64, y: f64| {
            -(x - y.powf(1.0 / df) + self.c).powi(self.d as i32 - 1) * y.powf(1.0 / df - 1.0)
        };
        term(x, y) - term(x + self.shift() * self.tau, y + self.tau)
    }
}

/// Difference of inverse-root phases used on the negative-shear side:
/// `(u - v^d)^{1/d} - (u + 2^{(d-1)j} tau - (v + tau)^d)^{1/d}`.
pub struct InverseRootDifference {
    pub d: u32,
    pub j: i32,
    pub tau: f64,
}

impl InverseRootDifference {
    fn shift(&self) -> f64 {
        2f64.powi((self.d as i32 - 1) * self.j)
    }

    /// Analytic `d_v` of the difference phase.
    pub fn dv(&self, u: f64, v: f64) -> f64 {
        let df = self.d as f64;
        let a = u - v.powi(self.d as i32);
        let b = u + self.shift() * self.tau - (v + self.tau).powi(self.d as i32);
        -a.powf(1.0 / df - 1.0) * v.powi(self.d as i32 - 1)
            + b.powf(1.0 / df - 1.0) * (v + self.tau).powi(self.d as i32 - 1)
    }

    pub fn phi(&self, u: f64, v: f64) -> f64 {
        let df = self.d as f64;
        (u - v.powi(self.d as i32)).powf(1.0 / df)
            - (u + self.shift() * self.tau - (v + self.tau).powi(self.d as i32)).powf(1.0 / df)
    }
}

/// `iint_{I1 x I2} e^{i lambda phi(x,y)} f(x) g(y) dx dy` by iterated
/// oscillation-resolving quadrature (the sampled profiles supply the
/// amplitudes).
pub fn bilinear_osc_form(
    phase: &dyn Phase2d,
    lambda: f64,
    f: &FreqProfile,
    g: &FreqProfile,
    i1: (f64, f64),
    i2: (f64, f64),
    nodes_per_cycle: f64,
) -> Complex64 {
    let rate_x = sample_rate(|x, y| phase.dphi_dx(x, y), i1, i2) * lambda.abs();
    let rate_y = sample_rate(|x, y| phase.dphi_dy(x, y), i1, i2) * lambda.abs();
    let xs = osc_layout(i1, rate_x, nodes_per_cycle);
    let ys = osc_layout(i2, rate_y, nodes_per_cycle);
    let gv: Vec<Complex64> = ys.0.iter().map(|&y| g.eval(y)).collect();
    xs.0.par_iter()
        .zip(xs.1.par_iter())
        .map(|(&x, &wx)| {
            let fv = f.eval(x);
            if fv.norm() == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for ((&y, &wy), gvv) in ys.0.iter().zip(ys.1.iter()).zip(gv.iter()) {
                if gvv.norm() == 0.0 {
                    continue;
                }
                inner += gvv * Complex64::from_polar(wy, lambda * phase.phi(x, y));
            }
            fv * inner * wx
        })
        .sum()
}

fn sample_rate(dphi: impl Fn(f64, f64) -> f64, i1: (f64, f64), i2: (f64, f64)) -> f64 {
    let mut worst = 0.0_f64;
    let n = 16;
    for i in 0..=n {
        for j in 0..=n {
            let x = i1.0 + (i1.1 - i1.0) * i as f64 / n as f64;
            let y = i2.0 + (i2.1 - i2.0) * j as f64 / n as f64;
            worst = worst.max(dphi(x, y).abs());
        }
    }
    worst
}

fn osc_layout(interval: (f64, f64), rate: f64, nodes_per_cycle: f64) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = interval;
    let cycles = rate * (hi - lo) / TAU;
    let panels = ((cycles * nodes_per_cycle / 8.0).ceil() as usize).max(16);
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
}

/// Minimum over a 64 x 64 sample box of
/// `|d_x^{d-1} d_y (phase difference)| / |tau|` for the curve-root pair.
/// The box must keep `y, y + tau` inside the admissible range.
pub fn mixed_derivative_witness(
    phase: &CurveRootDifference,
    box_x: (f64, f64),
    box_y: (f64, f64),
) -> Result<f64> {
    if phase.tau == 0.0 {
        return Err(BhtError::Precondition("tau must be nonzero".into()));
    }
    let cap = 2f64.powi(100);
    let lo = 2f64.powi(-100);
    for y in [box_y.0, box_y.1] {
        for yy in [y, y + phase.tau] {
            if !(lo..=cap).contains(&yy) {
                return Err(BhtError::Precondition(format!(
                    "y = {yy} outside the admissible range"
                )));
            }
        }
    }
    let n = 64;
    let mut min = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let x = box_x.0 + (box_x.1 - box_x.0) * i as f64 / (n - 1) as f64;
            let y = box_y.0 + (box_y.1 - box_y.0) * j as f64 / (n - 1) as f64;
            min = min.min(phase.mixed_derivative(x, y).abs() / phase.tau.abs());
        }
    }
    Ok(min)
}

/// Minimum over a sample box of `|d_v (phase difference)| / |tau u|` for the
/// inverse-root pair; the box must respect the lemma's domain.
pub fn phase_deriv_witness_neg(
    phase: &InverseRootDifference,
    box_u: (f64, f64),
    box_v: (f64, f64),
    m: i32,
) -> Result<f64> {
    if phase.tau == 0.0 {
        return Err(BhtError::Precondition("tau must be nonzero".into()));
    }
    if (phase.j.abs() as f64) * (phase.d as f64 - 1.0) < m as f64 {
        return Err(BhtError::Precondition(
            "requires |j| >= m/(d-1)".into(),
        ));
    }
    let admissible = |x: f64| (1.0 / 100.0..=100.0).contains(&x.abs());
    let n = 64;
    let mut min = f64::INFINITY;
    for i in 0..n {
        for jj in 0..n {
            let u = box_u.0 + (box_u.1 - box_u.0) * i as f64 / (n - 1) as f64;
            let v = box_v.0 + (box_v.1 - box_v.0) * jj as f64 / (n - 1) as f64;
            if u.abs() < 2f64.powi(-m) {
                return Err(BhtError::Precondition(format!(
                    "|u| = {} below the 2^-m floor",
                    u.abs()
                )));
            }
            let a = u - v.powi(phase.d as i32);
            let b = u + phase.shift() * phase.tau - (v + phase.tau).powi(phase.d as i32);
            if !admissible(v) || !admissible(v + phase.tau) || !admissible(a) || !admissible(b) {
                return Err(BhtError::Precondition(
                    "sample box escapes the lemma domain".into(),
                ));
            }
            min = min.min(phase.dv(u, v).abs() / (phase.tau * u).abs());
        }
    }
    Ok(min)
}

/// Bump on `[lo, hi]` with smooth shoulders over the outer `frac` of the
/// interval.
pub fn bump_on(lo: f64, hi: f64, frac: f64) -> impl Fn(f64) -> f64 + Copy {
    move |t: f64| {
        let u = (t - lo) / (hi - lo);
        smooth_step((u / frac).min((1.0 - u) / frac))
    }
}

/// Which of the two curve-root form variants to evaluate.
pub enum FormVariant {
    /// Unit interval in space, curve-root phase
    /// `C 2^m (x - t^{1/d} + c)^d`, kernel on `[1/100, 2]`.
    IntervalI { c: f64, coeff: f64 },
    /// Negative-shear variant: phase `C 2^m (x - t^d)^{1/d}` with plateau
    /// windows keeping the root argument in `[1/50, 2]`.
    Neg { coeff: f64 },
}

/// The curve-root bilinear forms whose scale decay closes the large-shear
/// regime. Returns the raw complex value.
pub fn form_lambda_djm(
    variant: &FormVariant,
    d: u32,
    j: i32,
    m: i32,
    f: &FreqProfile,
    g: &FreqProfile,
    nodes_per_cycle: f64,
) -> Result<Complex64> {
    let scale = 2f64.powi(m);
    match variant {
        FormVariant::IntervalI { c, coeff } => {
            if !(2f64.powi(-200)..=2f64.powi(200)).contains(&coeff.abs()) {
                return Err(BhtError::Precondition("|coeff| out of range".into()));
            }
            // x over a unit interval, t over the kernel support
            let i_x = (1.0, 2.0);
            let i_t = (1.0 / 100.0, 2.0);
            let shear = 2f64.powi(-(d as i32 - 1) * j);
            let theta = bump_on(i_t.0, i_t.1, 0.1);
            let df = d as f64;
            let phi = move |x: f64, t: f64| coeff * scale * (x - t.powf(1.0 / df) + c).powi(d as i32);
            let dphi_dx =
                move |x: f64, t: f64| coeff * scale * df * (x - t.powf(1.0 / df) + c).powi(d as i32 - 1);
            let dphi_dt = move |x: f64, t: f64| {
                -coeff
                    * scale
                    * (x - t.powf(1.0 / df) + c).powi(d as i32 - 1)
                    * t.powf(1.0 / df - 1.0)
            };
            let rate_x = sample_rate(dphi_dx, i_x, i_t);
            let rate_t = sample_rate(dphi_dt, i_x, i_t);
            let xs = osc_layout(i_x, rate_x, nodes_per_cycle);
            let ts = osc_layout(i_t, rate_t, nodes_per_cycle);
            let tv: Vec<f64> = ts.0.iter().map(|&t| theta(t)).collect();
            let value = xs
                .0
                .par_iter()
                .zip(xs.1.par_iter())
                .map(|(&x, &wx)| {
                    let gx = g.eval(x);
                    if gx.norm() == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let mut inner = Complex64::new(0.0, 0.0);
                    for ((&t, &wt), &th) in ts.0.iter().zip(ts.1.iter()).zip(tv.iter()) {
                        if th == 0.0 {
                            continue;
                        }
                        inner += f.eval(x - shear * t)
                            * Complex64::from_polar(wt * th, phi(x, t));
                    }
                    gx * inner * wx
                })
                .sum();
            Ok(value)
        }
        FormVariant::Neg { coeff } => {
            if j > 0 || (j.abs() as f64) * (d as f64 - 1.0) < m as f64 {
                return Err(BhtError::Precondition(
                    "negative variant requires j <= 0 with |j| >= m/(d-1)".into(),
                ));
            }
            if !(2f64.powi(-200)..=2f64.powi(200)).contains(&coeff.abs()) {
                return Err(BhtError::Precondition("|coeff| out of range".into()));
            }
            let i_t = (1.0 / 50.0, 1.0);
            let theta2 = bump_on(i_t.0, i_t.1, 0.1);
            // theta1 keeps x - t^d in [1/50, 2]
            let theta1 = bump_on(1.0 / 50.0, 2.0, 0.1);
            let shear = 2f64.powi((d as i32 - 1) * j);
            let df = d as f64;
            let i_x = (1.0 / 50.0, 3.0);
            let phi = move |x: f64, t: f64| {
                let a = x - t.powi(d as i32);
                if a <= 0.0 {
                    0.0
                } else {
                    coeff * scale * a.powf(1.0 / df)
                }
            };
            let dphi_dx = move |x: f64, t: f64| {
                let a = x - t.powi(d as i32);
                if a <= 1.0 / 100.0 {
                    0.0
                } else {
                    coeff * scale / df * a.powf(1.0 / df - 1.0)
                }
            };
            let dphi_dt = move |x: f64, t: f64| {
                let a = x - t.powi(d as i32);
                if a <= 1.0 / 100.0 {
                    0.0
                } else {
                    -coeff * scale * a.powf(1.0 / df - 1.0) * t.powi(d as i32 - 1)
                }
            };
            let rate_x = sample_rate(dphi_dx, i_x, i_t);
            let rate_t = sample_rate(dphi_dt, i_x, i_t);
            let xs = osc_layout(i_x, rate_x, nodes_per_cycle);
            let ts = osc_layout(i_t, rate_t, nodes_per_cycle);
            let tv: Vec<f64> = ts.0.iter().map(|&t| theta2(t)).collect();
            let value = xs
                .0
                .par_iter()
                .zip(xs.1.par_iter())
                .map(|(&x, &wx)| {
                    let gx = g.eval(x);
                    if gx.norm() == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let mut inner = Complex64::new(0.0, 0.0);
                    for ((&t, &wt), &th2) in ts.0.iter().zip(ts.1.iter()).zip(tv.iter()) {
                        if th2 == 0.0 {
                            continue;
                        }
                        let th1 = theta1(x - t.powi(d as i32));
                        if th1 == 0.0 {
                            continue;
                        }
                        inner += f.eval(x - shear * t)
                            * Complex64::from_polar(wt * th2 * th1, phi(x, t));
                    }
                    gx * inner * wx
                })
                .sum();
            Ok(value)
        }
    }
}

/// Sup of a profile's modulus, sampled.
pub fn profile_sup(p: &FreqProfile, interval: (f64, f64)) -> f64 {
    let n = 512;
    (0..=n)
        .map(|i| {
            let x = interval.0 + (interval.1 - interval.0) * i as f64 / n as f64;
            p.eval(x).norm()
        })
        .fold(0.0, f64::max)
}

/// Smooth compactly supported real profile (used as `L^infinity` data).
pub fn bump_profile(lo: f64, hi: f64) -> FreqProfile {
    let mid = (lo + hi) / 2.0;
    let half = (hi - lo) / 2.0;
    FreqProfile::new((lo, hi), move |x| {
        Complex64::new(smooth_bump((x - mid) / half), 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fit_slope;
    use approx::assert_relative_eq;

    #[test]
    fn dexp_values() {
        assert_relative_eq!(dexp(2, 0.0).unwrap(), 0.25);
        assert_relative_eq!(dexp(3, 0.0).unwrap(), 1.0 / 6.0);
        assert_relative_eq!(dexp(1, 0.5).unwrap(), 0.4);
        assert!(dexp(0, 0.5).is_err());
        assert!(dexp(1, 0.0).is_err());
        // strictly decreasing for ell >= 2
        for ell in 2..10 {
            assert!(dexp(ell + 1, 0.0).unwrap() < dexp(ell, 0.0).unwrap());
        }
    }

    #[test]
    fn osc_form_flat_phase_and_oracle() {
        let one = FreqProfile::new((-10.0, 10.0), |_| Complex64::new(1.0, 0.0));
        let phase = MonomialPhase {
            px: 1,
            py: 1,
            coeff: 1.0,
        };
        // lambda = 0: the form is the product of the amplitude integrals
        let v = bilinear_osc_form(&phase, 0.0, &one, &one, (0.0, 1.0), (0.0, 1.0), 16.0);
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-10);

        // e^{2 pi i 8 x y} on the unit square vs a refined direct oracle
        let lam = TAU * 8.0;
        let v = bilinear_osc_form(&phase, lam, &one, &one, (0.0, 1.0), (0.0, 1.0), 16.0);
        // inner integral in closed form: (e^{i lam x} - 1)/(i lam x)
        let oracle = crate::bumps::composite_gl_c(
            |x| {
                let z = Complex64::new(0.0, lam * x);
                if x == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    (z.exp() - Complex64::new(1.0, 0.0)) / z
                }
            },
            0.0,
            1.0,
            256,
            8,
        );
        assert!((v - oracle).norm() < 1e-8, "{v} vs {oracle}");
    }

    #[test]
    fn model_phase_decay_exponent() {
        // phi = x^2 y / 2 has unit mixed second derivative; slope at least as
        // steep as the guaranteed exponent for ell = 2.
        let one = FreqProfile::new((-10.0, 10.0), |_| Complex64::new(1.0, 0.0));
        let phase = MonomialPhase {
            px: 2,
            py: 1,
            coeff: 0.5,
        };
        let pts: Vec<(f64, f64)> = (4..=12)
            .map(|k| {
                let lam = 2f64.powi(k);
                let v = bilinear_osc_form(&phase, lam, &one, &one, (0.0, 1.0), (0.0, 1.0), 16.0);
                (k as f64, v.norm())
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(
            fit.slope <= -(dexp(2, 0.0).unwrap()) + 0.05,
            "model phase slope {}",
            fit.slope
        );
    }

    #[test]
    fn mixed_derivative_witness_positive_and_fd_oracle() {
        let phase = CurveRootDifference {
            d: 2,
            c: 0.0,
            j: 4,
            tau: 0.5,
        };
        let w = mixed_derivative_witness(&phase, (1.0, 2.0), (1.0, 2.0)).unwrap();
        assert!(w > 0.0, "witness must be positive");

        // analytic d_x^{d-1} d_y against central differences (d = 2)
        let h = 1e-4;
        let (x, y) = (1.3, 1.7);
        let fd = (phase.phi(x + h, y + h) - phase.phi(x + h, y - h) - phase.phi(x - h, y + h)
            + phase.phi(x - h, y - h))
            / (4.0 * h * h);
        let an = phase.mixed_derivative(x, y);
        assert!(
            ((fd - an) / an).abs() < 1e-5,
            "fd {fd} vs analytic {an}"
        );

        // tau -> -tau on the shifted box is the same difference relabeled
        let neg = CurveRootDifference {
            tau: -0.5,
            ..phase
        };
        let w2 = mixed_derivative_witness(&neg, (1.0, 2.0), (1.5, 2.5)).unwrap();
        let shifted = mixed_derivative_witness(
            &CurveRootDifference {
                tau: 0.5,
                ..phase
            },
            (1.0, 2.0),
            (1.0, 2.0),
        )
        .unwrap();
        assert!((w2 - shifted).abs() < 1e-9);

        assert!(mixed_derivative_witness(
            &CurveRootDifference {
                tau: 0.0,
                ..phase
            },
            (1.0, 2.0),
            (1.0, 2.0)
        )
        .is_err());
    }

    #[test]
    fn inverse_root_witness_and_fd_oracle() {
        let phase = InverseRootDifference {
            d: 2,
            j: -12,
            tau: 0.3,
        };
        let w = phase_deriv_witness_neg(&phase, (1.0, 1.5), (0.3, 0.5), 6).unwrap();
        assert!(w > 0.0);

        let h = 1e-5;
        let (u, v) = (1.2, 0.4);
        let fd = (phase.phi(u, v + h) - phase.phi(u, v - h)) / (2.0 * h);
        let an = phase.dv(u, v);
        assert!(((fd - an) / an).abs() < 1e-5, "fd {fd} vs analytic {an}");

        // tau = 0 is rejected
        assert!(phase_deriv_witness_neg(
            &InverseRootDifference {
                tau: 0.0,
                ..phase
            },
            (1.0, 1.5),
            (0.3, 0.5),
            6
        )
        .is_err());
        // regime violation rejected
        assert!(phase_deriv_witness_neg(
            &InverseRootDifference {
                j: -2,
                ..phase
            },
            (1.0, 1.5),
            (0.3, 0.5),
            12
        )
        .is_err());
    }

    #[test]
    fn form_zero_data() {
        let zero = FreqProfile::new((0.0, 1.0), |_| Complex64::new(0.0, 0.0));
        let f = FreqProfile::random_smooth((-2.0, 4.0), 6, 3);
        let v = form_lambda_djm(
            &FormVariant::IntervalI { c: 0.0, coeff: 1.0 },
            2,
            2,
            6,
            &f,
            &zero,
            16.0,
        )
        .unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn curve_root_form_decay() {
        // positive variant at d = 2: slope at least -D(1)/2 + 0.06 with
        // eps = 1/2
        let target = -dexp(1, 0.5).unwrap() / 2.0 + 0.06;
        let pts: Vec<(f64, f64)> = (4..=9)
            .map(|m| {
                let mut worst = 0.0_f64;
                for trial in 0..3u64 {
                    let f = FreqProfile::random_smooth((-2.0, 4.0), 8, 100 + trial);
                    let g = FreqProfile::random_smooth((0.5, 2.5), 8, 200 + trial);
                    let v = form_lambda_djm(
                        &FormVariant::IntervalI { c: 0.0, coeff: 1.0 },
                        2,
                        2,
                        m,
                        &f,
                        &g,
                        8.0,
                    )
                    .unwrap();
                    let den = f.l2() * profile_sup(&g, (1.0, 2.0));
                    worst = worst.max(v.norm() / den);
                }
                (m as f64, worst)
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(fit.slope <= target, "interval form slope {}", fit.slope);
    }

    #[test]
    fn inverse_root_form_decay() {
        // negative variant: slope at least -1/4 + 0.06 at j = -m/(d-1) - 2
        let pts: Vec<(f64, f64)> = (4..=9)
            .map(|m| {
                let j = -(m + 2);
                let mut worst = 0.0_f64;
                for trial in 0..3u64 {
                    let f = FreqProfile::random_smooth((-4.0, 4.0), 8, 300 + trial);
                    let g = FreqProfile::random_smooth((0.0, 3.0), 8, 400 + trial);
                    let v = form_lambda_djm(
                        &FormVariant::Neg { coeff: 1.0 },
                        2,
                        j,
                        m,
                        &f,
                        &g,
                        8.0,
                    )
                    .unwrap();
                    let den = f.l2() * profile_sup(&g, (0.0, 3.0));
                    worst = worst.max(v.norm() / den);
                }
                (m as f64, worst)
            })
            .collect();
        let fit = fit_slope(&pts).unwrap();
        assert!(fit.slope <= -0.25 + 0.06, "neg form slope {}", fit.slope);
    }
}
