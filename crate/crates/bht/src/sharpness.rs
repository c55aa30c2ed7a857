//! The sharpness counterexample: the tuned polynomial whose curve hugs the
//! diagonal, the indicator pair concentrating on the sliver between the two
//! curves, the intersection-point enclosures, and the exponent scan showing
//! the norm blow-up rate that pins the admissible exponent range.

use rayon::prelude::*;
use serde::Serialize;

use crate::bumps::{gauss_legendre, rho, smooth_step};
use crate::error::{BhtError, Result};
use crate::harness::fit_slope;
use crate::operators::PolynomialSpec;

/// Parameters of the counterexample: curve degree `d`, the derivative order
/// `n` being probed, the large tuning constant `A`, and the sliver width
/// `delta`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CounterexampleSpec {
    pub d: u32,
    pub n: u32,
    pub a: f64,
    pub delta: f64,
}

impl CounterexampleSpec {
    pub fn new(d: u32, n: u32, a: f64, delta: f64) -> Result<CounterexampleSpec> {
        if d < 2 || n < 2 || n > d {
            return Err(BhtError::InvalidParameter(
                "need 2 <= n <= d".into(),
            ));
        }
        if a < 100.0 {
            return Err(BhtError::InvalidParameter("A must be at least 100".into()));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(BhtError::InvalidParameter("delta must be in (0,1)".into()));
        }
        let spec = CounterexampleSpec { d, n, a, delta };
        // Roots must stay inside the kernel support with the weight bounded
        // below; this working threshold keeps t1 <= 1.5.
        if 2.0 * spec.root_scale() > 0.5 {
            return Err(BhtError::InvalidParameter(format!(
                "delta too large for A: root scale {} exceeds the analyzed window",
                spec.root_scale()
            )));
        }
        Ok(spec)
    }

    fn factorial(k: u32) -> f64 {
        (1..=k).map(|v| v as f64).product()
    }

    /// `(A n!)^{1/n} delta^{1/n}`, the scale of both intersection roots.
    pub fn root_scale(&self) -> f64 {
        (self.a * Self::factorial(self.n)).powf(1.0 / self.n as f64)
            * self.delta.powf(1.0 / self.n as f64)
    }
}

/// The tuned polynomial
/// `Q(t) = (t-1)^d / (A d!) + (t-1)^n / (A n!) + (t-1)` in expanded
/// coefficient form.
pub fn build_q(spec: &CounterexampleSpec) -> PolynomialSpec {
    let d = spec.d as usize;
    let n = spec.n as usize;
    let mut coeffs = vec![0.0_f64; d + 1];
    // binomial expansion of (t-1)^k scaled by c
    let mut add_power = |k: usize, c: f64| {
        let mut binom = 1.0_f64;
        for i in 0..=k {
            // coefficient of t^{k-i} in (t-1)^k is binom(k,i) (-1)^i
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[k - i] += c * sign * binom;
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
    };
    add_power(d, 1.0 / (spec.a * CounterexampleSpec::factorial(spec.d)));
    add_power(n, 1.0 / (spec.a * CounterexampleSpec::factorial(spec.n)));
    add_power(1, 1.0);
    PolynomialSpec::new(coeffs).expect("leading coefficient is 1/(A d!)")
}

/// The two intersection abscissas `t1 > t2 > 1` where the shifted curve meets
/// the two translated diagonals, found by bisection to 1e-12 and checked
/// against the analytic enclosures.
pub fn intersection_roots(spec: &CounterexampleSpec) -> Result<(f64, f64)> {
    // t1: Q(t) + 1 = t + 2^n delta, t2: Q(t) + 1 - delta = t. In the shifted
    // variable s = t - 1 the linear parts cancel structurally, leaving the
    // monotone equation s^d/(A d!) + s^n/(A n!) = level with no catastrophic
    // cancellation near the base point.
    let curve = |s: f64| {
        s.powi(spec.d as i32) / (spec.a * CounterexampleSpec::factorial(spec.d))
            + s.powi(spec.n as i32) / (spec.a * CounterexampleSpec::factorial(spec.n))
    };
    let shift = 2f64.powi(spec.n as i32) * spec.delta;
    let t1 = 1.0 + bisect(|s| curve(s) - shift, 0.0, 1.5)?;
    let t2 = 1.0 + bisect(|s| curve(s) - spec.delta, 0.0, 1.5)?;
    let scale = spec.root_scale();
    let nf = spec.n as f64;
    // When d = n the roots sit exactly on an enclosure edge, so the check
    // carries fp slack.
    let enc = |t: f64, lo_c: f64, hi_c: f64| -> Result<()> {
        let lo = 1.0 + lo_c * scale;
        let hi = 1.0 + hi_c * scale;
        if t < lo - 1e-9 || t > hi + 1e-9 {
            return Err(BhtError::Precondition(format!(
                "root {t} escapes enclosure [{lo}, {hi}]"
            )));
        }
        Ok(())
    };
    enc(t1, 2f64.powf(1.0 - 1.0 / nf), 2.0)?;
    enc(t2, 2f64.powf(-1.0 / nf), 1.0)?;
    Ok((t1, t2))
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() {
        return Err(BhtError::Precondition(format!(
            "root not bracketed on [{lo}, {hi}]"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm == 0.0 || hi - lo < 1e-13 {
            return Ok(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One scan point: the quasi-norm mass against its guaranteed lower bound and
/// the mollified indicator norms.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SharpnessPoint {
    pub delta: f64,
    /// `|| T_Q(f_delta, g_delta) ||_r^r`
    pub lhs: f64,
    pub lower_bound: f64,
    pub f_norm_p: f64,
    pub g_norm_q: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessScan {
    pub points: Vec<SharpnessPoint>,
    pub fitted_exponent: f64,
    pub expected_exponent: f64,
    pub r2: f64,
}

/// Mollified indicator of `[lo, hi]` with shoulder width `w`.
fn soft_indicator(x: f64, lo: f64, hi: f64, w: f64) -> f64 {
    smooth_step((x - lo) / w + 0.5) * smooth_step((hi - x) / w + 0.5)
}

/// Evaluate `T_Q(f_delta, g_delta)(x)` by quadrature over the kernel window
/// that the two indicator constraints carve out.
fn t_q_at(
    q: &PolynomialSpec,
    spec: &CounterexampleSpec,
    x: f64,
    mollifier_width: f64,
) -> f64 {
    // f constrains t to [x - 2^n delta, x]; g constrains Q(t) near x - 1.
    let shift = 2f64.powi(spec.n as i32) * spec.delta;
    let t_lo = x - shift - 2.0 * mollifier_width;
    let t_hi = x + 2.0 * mollifier_width;
    // 1 - delta <= x - Q(t) <= 1 pins Q(t) to [x - 1, x - 1 + delta]; Q is
    // monotone near t = 1+ (Q' ~ 1), so this is also a t-interval.
    let g_lo = invert_q(q, x - 1.0) - 4.0 * mollifier_width;
    let g_hi = invert_q(q, x - 1.0 + spec.delta) + 4.0 * mollifier_width;
    let lo = t_lo.max(g_lo);
    let hi = t_hi.min(g_hi);
    if lo >= hi {
        return 0.0;
    }
    let (gn, gw) = gauss_legendre(16);
    let mut acc = 0.0;
    let panels = 4;
    let h = (hi - lo) / panels as f64;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let mid = a + h / 2.0;
        let half = h / 2.0;
        for (u, w) in gn.iter().zip(gw.iter()) {
            let t = mid + half * u;
            let fv = soft_indicator(x - t, 0.0, shift, mollifier_width);
            if fv == 0.0 {
                continue;
            }
            let gv = soft_indicator(x - q.eval(t), 1.0 - spec.delta, 1.0, mollifier_width);
            if gv == 0.0 {
                continue;
            }
            acc += w * half * fv * gv * rho(t);
        }
    }
    acc
}

fn invert_q(q: &PolynomialSpec, y: f64) -> f64 {
    // Newton from t = 1 + y (Q(1 + s) ~ s near the base point)
    let dq = q.derivative();
    let mut t = 1.0 + y;
    for _ in 0..60 {
        let step = (q.eval(t) - y) / dq.eval(t);
        t -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    t
}

/// Norm mass `|| T_Q(f_delta, g_delta) ||_r^r` for one `delta`, by an
/// x-quadrature resolving the `delta`-scale structure, with indicators
/// mollified at `delta / 100`.
pub fn t_q_mass(spec: &CounterexampleSpec, r: f64) -> Result<f64> {
    t_q_mass_with_width(spec, r, spec.delta / 100.0)
}

/// Same mass with an explicit mollifier width (for convergence checks).
pub fn t_q_mass_with_width(spec: &CounterexampleSpec, r: f64, w: f64) -> Result<f64> {
    let q = build_q(spec);
    let (t1, t2) = intersection_roots(spec)?;
    // The output is supported between the two intersection abscissas, with
    // delta-scale skirts.
    let x_lo = t2 - 8.0 * spec.delta - 8.0 * w;
    let x_hi = t1 + 2f64.powi(spec.n as i32 + 1) * spec.delta + 8.0 * w;
    let samples_per_delta = 8.0;
    let count = (((x_hi - x_lo) / spec.delta) * samples_per_delta).ceil() as usize;
    let count = count.clamp(64, 40_000_000);
    let dx = (x_hi - x_lo) / count as f64;
    let chunk = 8192;
    let total: f64 = (0..count)
        .collect::<Vec<_>>()
        .par_chunks(chunk)
        .map(|idx| {
            let mut acc = 0.0;
            for &i in idx {
                let x = x_lo + (i as f64 + 0.5) * dx;
                let v = t_q_at(&q, spec, x, w);
                if v != 0.0 {
                    acc += v.abs().powf(r);
                }
            }
            acc * dx
        })
        .sum();
    Ok(total)
}

/// Exponent scan over a list of sliver widths: fits
/// `log2 ||T_Q(f,g)||_r^r` against `log2 delta` and carries the per-point
/// lower bounds and indicator norms.
pub fn sharpness_scan(
    d: u32,
    n: u32,
    a: f64,
    r: f64,
    p: f64,
    q_exp: f64,
    deltas: &[f64],
) -> Result<SharpnessScan> {
    if p < 1.0 || q_exp < 1.0 {
        return Err(BhtError::InvalidParameter(
            "exponents p, q must be at least 1".into(),
        ));
    }
    if (1.0 / p + 1.0 / q_exp - 1.0 / r).abs() > 1e-9 {
        return Err(BhtError::InvalidParameter(
            "scaling requires 1/p + 1/q = 1/r".into(),
        ));
    }
    let mut points = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let spec = CounterexampleSpec::new(d, n, a, delta)?;
        let lhs = t_q_mass(&spec, r)?;
        let lower = (delta / 2.0).powf(r) * spec.root_scale() / 100.0;
        let shift = 2f64.powi(n as i32) * delta;
        points.push(SharpnessPoint {
            delta,
            lhs,
            lower_bound: lower,
            f_norm_p: shift.powf(1.0 / p),
            g_norm_q: delta.powf(1.0 / q_exp),
        });
    }
    let fit_pts: Vec<(f64, f64)> = points
        .iter()
        .map(|pt| (pt.delta.log2(), pt.lhs))
        .collect();
    // slope defined only with enough scan points; short scans carry NaN
    let (fitted, r2) = match fit_slope(&fit_pts) {
        Ok(fit) => (fit.slope, fit.r2),
        Err(_) => (f64::NAN, f64::NAN),
    };
    Ok(SharpnessScan {
        points,
        fitted_exponent: fitted,
        expected_exponent: r + 1.0 / n as f64,
        r2,
    })
}

/// Default sliver widths keeping the intersection roots inside the kernel
/// support for the given `(n, A)`.
pub fn default_deltas(n: u32) -> Vec<f64> {
    match n {
        2 => vec![3e-6, 1e-6, 3e-7, 1e-7],
        _ => vec![1e-6, 3e-7, 1e-7, 3e-8],
    }
}

pub fn default_tuning(n: u32) -> f64 {
    match n {
        2 => 1e4,
        _ => 100.0,
    }
}
