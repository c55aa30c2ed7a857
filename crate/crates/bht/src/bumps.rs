//! Concrete realizations of every cutoff the decomposition needs: the
//! low-pass plateau `theta`, the dyadic annulus window `phi_hat` and its
//! telescoped partial sums, the odd kernel weight `rho`, the wide/narrow
//! plateau windows `phi1_hat`/`phi2_hat`, the cell mollifier, smooth cell
//! indicators, and frequency restriction of signals.
//!
//! All profiles are assembled from one `C^infinity` template pair: the
//! compactly supported bump `b(x) = exp(1 - 1/(1 - x^2))` and the smooth step
//! `s(x) = B(x) / (B(x) + B(1 - x))` with `B(x) = exp(-1/x) [x > 0]`.

use num_complex::Complex64;

use crate::error::{BhtError, Result};
use crate::foundation::{fourier_transform, inverse_onto, Band, Direction, SampledSignal};

/// `exp(1 - 1/(1 - x^2))` on `|x| < 1`, zero outside; peak value 1 at 0.
pub fn smooth_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

fn ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`, strictly increasing between.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = ramp(x);
        a / (a + ramp(1.0 - x))
    }
}

/// Even plateau window: 1 on `[lo_full, hi_full]`, 0 outside
/// `[lo_supp, hi_supp]`, applied to `|x|`.
fn plateau_even(x: f64, lo_supp: f64, lo_full: f64, hi_full: f64, hi_supp: f64) -> f64 {
    let a = x.abs();
    smooth_step((a - lo_supp) / (lo_full - lo_supp)) * smooth_step((hi_supp - a) / (hi_supp - hi_full))
}

/// `theta`: even, 1 on `|x| <= 1/2`, supported on `(-1, 1)`, values in [0,1].
pub fn theta(x: f64) -> f64 {
    smooth_step((1.0 - x.abs()) * 2.0)
}

/// Annulus window `theta(x/2) - theta(x)`, supported on `1/2 < |x| < 2`; the
/// dyadic dilates sum to 1 away from the origin.
pub fn phi_hat(x: f64) -> f64 {
    theta(x / 2.0) - theta(x)
}

/// One-sided profile of the odd kernel weight: a bump on `[1/2, 2]`.
pub fn rho1(t: f64) -> f64 {
    smooth_bump((t - 1.25) / 0.75)
}

/// Odd kernel weight: `rho1(t)` for `t > 0`, `-rho1(-t)` for `t < 0`.
pub fn rho(t: f64) -> f64 {
    if t > 0.0 {
        rho1(t)
    } else if t < 0.0 {
        -rho1(-t)
    } else {
        0.0
    }
}

/// Dyadic partition profile in time: supported on `1/2 <= |t| <= 2` with
/// `sum_j rho0(2^j t) = 1` for `t != 0`.
pub fn rho0(t: f64) -> f64 {
    phi_hat(t)
}

/// Wide plateau window: 1 on `3/8 <= |x| <= 17/8`, supported on
/// `1/8 <= |x| <= 19/8`.
pub fn phi1_hat(x: f64) -> f64 {
    plateau_even(x, 1.0 / 8.0, 3.0 / 8.0, 17.0 / 8.0, 19.0 / 8.0)
}

/// Slightly enlarged plateau window: 1 on the support of [`phi1_hat`],
/// supported on `1/16 <= |x| <= 39/16`.
pub fn phi2_hat(x: f64) -> f64 {
    plateau_even(x, 1.0 / 16.0, 1.0 / 8.0, 19.0 / 8.0, 39.0 / 16.0)
}

/// Half-width of the cell mollifier support.
pub const MOLLIFIER_HALF_WIDTH: f64 = 0.01;

const MOLLIFIER_NORMALIZER: f64 = 1.206_900_322_437_874_3; // integral of smooth_bump

/// Unit-mass nonnegative mollifier supported on `[-1/100, 1/100]`.
pub fn mollifier_phi(x: f64) -> f64 {
    smooth_bump(x / MOLLIFIER_HALF_WIDTH) / (MOLLIFIER_HALF_WIDTH * MOLLIFIER_NORMALIZER)
}

/// CDF of the mollifier, used to evaluate mollified cell indicators.
///
/// Backed by a cached cumulative table (1024 cells, 16-node Gauss-Legendre
/// each) plus a partial-cell correction; accurate to ~1e-13 and cheap enough
/// for the inner loops of the spatially localized operators.
pub fn mollifier_cdf(v: f64) -> f64 {
    use std::sync::OnceLock;
    const CELLS: usize = 1024;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let h = MOLLIFIER_HALF_WIDTH;
        let dx = 2.0 * h / CELLS as f64;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(CELLS + 1);
        out.push(0.0);
        for i in 0..CELLS {
            let lo = -h + i as f64 * dx;
            acc += composite_gl(mollifier_phi, lo, lo + dx, 1, 16);
            out.push(acc);
        }
        out
    });
    let h = MOLLIFIER_HALF_WIDTH;
    if v <= -h {
        return 0.0;
    }
    if v >= h {
        return 1.0;
    }
    let dx = 2.0 * h / CELLS as f64;
    let cell = (((v + h) / dx) as usize).min(CELLS - 1);
    let edge = -h + cell as f64 * dx;
    table[cell] + composite_gl(mollifier_phi, edge, v, 1, 16)
}

/// Named cutoff profiles. `scale` and `shift` evaluate the base profile at
/// `(x - shift) / scale`, which is how dyadic dilates like
/// `phi_hat(xi / 2^m)` are expressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub kind: BumpKind,
    pub scale: f64,
    pub shift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BumpKind {
    Theta,
    PhiHat,
    /// Telescoped partial sum `theta(x / 2^{m0+1})`; set `scale = 2^{m0+1}`.
    PhiM0Hat,
    Rho,
    Rho0,
    Phi1Hat,
    Phi2Hat,
    MollifierPhi,
}

impl BumpSpec {
    pub fn new(kind: BumpKind) -> BumpSpec {
        BumpSpec {
            kind,
            scale: 1.0,
            shift: 0.0,
        }
    }

    pub fn scaled(kind: BumpKind, scale: f64) -> BumpSpec {
        BumpSpec {
            kind,
            scale,
            shift: 0.0,
        }
    }
}

/// Evaluate a cutoff profile at a point.
pub fn eval_bump(spec: &BumpSpec, point: f64) -> f64 {
    let x = (point - spec.shift) / spec.scale;
    match spec.kind {
        BumpKind::Theta => theta(x),
        BumpKind::PhiHat => phi_hat(x),
        BumpKind::PhiM0Hat => theta(x),
        BumpKind::Rho => rho(x),
        BumpKind::Rho0 => rho0(x),
        BumpKind::Phi1Hat => phi1_hat(x),
        BumpKind::Phi2Hat => phi2_hat(x),
        BumpKind::MollifierPhi => mollifier_phi(x),
    }
}

/// Partial sum `sum_{m=m_lo}^{m_hi} phi_hat(xi / 2^m)`. Telescopes to
/// `theta(xi / 2^{m_hi+1}) - theta(xi / 2^{m_lo})`, so with a wide enough
/// range it equals 1; summed only up to `m0` it equals `theta(xi/2^{m0+1})`.
pub fn check_partition(xi: f64, m_lo: i32, m_hi: i32) -> Result<f64> {
    if xi == 0.0 {
        return Err(BhtError::InvalidParameter(
            "partition of unity is undefined at xi = 0".into(),
        ));
    }
    let mut acc = 0.0;
    for m in m_lo..=m_hi {
        acc += phi_hat(xi / 2f64.powi(m));
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatorKind {
    Star,
    DoubleStar,
}

/// Dyadic cell `I_{k,n} = [2^k n, 2^k (n+1)]`.
pub fn cell(k: i32, n: i64) -> (f64, f64) {
    let w = 2f64.powi(k);
    (w * n as f64, w * (n as f64 + 1.0))
}

/// Smooth cell indicators.
///
/// `star` mollifies the indicator of `I_{k,n}` with the rescaled mollifier
/// `2^{-k} phi(2^{-k} x)`; the shifted copies sum to 1 exactly. `double_star`
/// is the 200th-power kernel average over the cell, evaluated in closed form
/// from the kernel antiderivative.
pub fn smooth_indicator(kind: IndicatorKind, k: i32, n: i64, x: f64) -> f64 {
    let scale = 2f64.powi(-k);
    let u = x * scale; // cell rescaled to [n, n+1]
    match kind {
        IndicatorKind::Star => {
            mollifier_cdf(u - n as f64) - mollifier_cdf(u - (n as f64 + 1.0))
        }
        IndicatorKind::DoubleStar => {
            // antiderivative of (1 + |s|)^{-200}
            fn anti(s: f64) -> f64 {
                s.signum() * (1.0 - (1.0 + s.abs()).powi(-199)) / 199.0
            }
            anti(u - n as f64) - anti(u - (n as f64 + 1.0))
        }
    }
}

/// Sum of `star` indicator copies over the period lattice, for pairing
/// periodic signals against a cell weight that is much longer than a period.
pub fn smooth_indicator_periodized(k: i32, n: i64, x: f64, period: f64) -> f64 {
    let w = 2f64.powi(k);
    let (lo, hi) = cell(k, n);
    let margin = MOLLIFIER_HALF_WIDTH * w;
    // shifts l with supp(1*) intersecting x + l*period
    let l_lo = ((lo - margin - x) / period).floor() as i64;
    let l_hi = ((hi + margin - x) / period).ceil() as i64;
    let mut acc = 0.0;
    for l in l_lo..=l_hi {
        acc += smooth_indicator(IndicatorKind::Star, k, n, x + l as f64 * period);
    }
    acc
}

/// Multiply the spectrum of `signal` pointwise by the cutoff, realizing the
/// smooth frequency restriction.
pub fn restrict(signal: &SampledSignal, spec: &BumpSpec) -> SampledSignal {
    let freq = fourier_transform(signal, Direction::Forward);
    let mut shaped = freq.clone();
    for (i, c) in shaped.samples.iter_mut().enumerate() {
        let nu = shaped.grid.point(i);
        *c *= eval_bump(spec, nu);
    }
    let mut out = inverse_onto(&shaped, signal.grid);
    out.band = match spec.kind {
        // The annulus windows vanish outside their stated supports, so the
        // output band is the intersection with the window support.
        BumpKind::PhiHat => intersect_band(signal.band, 2.0 * spec.scale),
        BumpKind::Phi1Hat => intersect_band(signal.band, 19.0 / 8.0 * spec.scale),
        BumpKind::Phi2Hat => intersect_band(signal.band, 39.0 / 16.0 * spec.scale),
        BumpKind::Theta | BumpKind::PhiM0Hat => intersect_band(signal.band, spec.scale),
        _ => signal.band,
    };
    out
}

fn intersect_band(b: Band, half_width: f64) -> Band {
    Band::new(b.lo.max(-half_width), b.hi.min(half_width))
}

/// Nodes and weights of 64-point Gauss-Legendre on [-1, 1], computed once by
/// Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_64() -> (&'static [f64; 64], &'static [f64; 64]) {
    use std::sync::OnceLock;
    static TABLE: OnceLock<([f64; 64], [f64; 64])> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let (n, w) = gauss_legendre(64);
        let mut na = [0.0; 64];
        let mut wa = [0.0; 64];
        na.copy_from_slice(&n);
        wa.copy_from_slice(&w);
        (na, wa)
    });
    (&t.0, &t.1)
}

/// Gauss-Legendre nodes and weights on [-1, 1] for arbitrary order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_deriv(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Quadrature of `f` over `[a, b]` with `panels` equal Gauss-Legendre panels
/// of `order` nodes each.
pub fn composite_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        let half = h / 2.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += w * f(mid + half * x);
        }
    }
    acc * (b - a) / (2.0 * panels as f64)
}

/// Complex-valued counterpart of [`composite_gl`].
pub fn composite_gl_c(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + h / 2.0;
        let half = h / 2.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += f(mid + half * x) * *w;
        }
    }
    acc * (b - a) / (2.0 * panels as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{l2_norm, make_grid, random_bandlimited};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn theta_plateau_and_support() {
        assert_eq!(theta(0.25), 1.0);
        assert_eq!(theta(-0.5), 1.0);
        assert_eq!(theta(1.5), 0.0);
        assert!(theta(0.75) > 0.0 && theta(0.75) < 1.0);
        for x in [-0.9, -0.3, 0.0, 0.6, 0.99] {
            assert_relative_eq!(theta(x), theta(-x));
            assert!((0.0..=1.0).contains(&theta(x)));
        }
    }

    #[test]
    fn rho_is_odd_and_supported() {
        let g = make_grid(-4.0, 8.0, 256).unwrap();
        for t in g.points() {
            assert_eq!(rho(t) + rho(-t), 0.0, "rho must be odd exactly");
        }
        assert_eq!(rho(0.4), 0.0);
        assert_eq!(rho(2.1), 0.0);
        assert!(rho(1.25) > 0.9);
    }

    #[test]
    fn partition_of_unity() {
        // 1e4 log-spaced xi over +-[2^-18, 2^18]
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let e: f64 = rng.gen_range(-18.0..18.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let xi = sign * 2f64.powf(e);
            let s = check_partition(xi, -20, 20).unwrap();
            worst = worst.max((s - 1.0).abs());
        }
        assert!(worst < 1e-10, "partition defect {worst}");
        assert!(check_partition(0.0, -20, 20).is_err());
    }

    #[test]
    fn partition_telescopes_to_theta() {
        assert_relative_eq!(check_partition(1.0, -20, 0).unwrap(), theta(0.5));
        assert_relative_eq!(
            check_partition(2f64.powi(10), -20, 8).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let e: f64 = rng.gen_range(-8.0..8.0);
            let xi = 2f64.powf(e) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            for m0 in -10..=10 {
                let s = check_partition(xi, -20, m0).unwrap();
                let t = theta(xi / 2f64.powi(m0 + 1));
                assert!((s - t).abs() < 1e-10, "telescoping at xi={xi}, m0={m0}");
            }
        }
    }

    #[test]
    fn rho0_dyadic_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let e: f64 = rng.gen_range(-8.0..8.0);
            let t = 2f64.powf(e);
            let s: f64 = (-20..=20).map(|j| rho0(2f64.powi(j) * t)).sum();
            assert!((s - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn plateau_windows() {
        for x in [0.4, 1.0, 2.0, 17.0 / 8.0] {
            assert_eq!(phi1_hat(x), 1.0);
            assert_eq!(phi1_hat(-x), 1.0);
        }
        assert_eq!(phi1_hat(0.12), 0.0);
        assert_eq!(phi1_hat(2.38), 0.0);
        for x in [1.0 / 8.0, 19.0 / 8.0, 1.0, 0.1] {
            assert!(phi2_hat(x) >= phi1_hat(x));
        }
        assert_eq!(phi2_hat(0.05), 0.0);
        assert_eq!(phi2_hat(2.5), 0.0);
    }

    #[test]
    fn mollifier_mass_and_cdf() {
        let total = composite_gl(mollifier_phi, -0.01, 0.01, 256, 16);
        assert_relative_eq!(total, 1.0, epsilon = 1e-12);
        assert_eq!(mollifier_cdf(-0.02), 0.0);
        assert_relative_eq!(mollifier_cdf(0.02), 1.0, epsilon = 1e-12);
        assert_relative_eq!(mollifier_cdf(0.0), 0.5, epsilon = 1e-12);
        // cdf vs direct quadrature at an interior point
        let v = 0.0031;
        let direct = composite_gl(mollifier_phi, -0.01, v, 128, 16);
        assert_relative_eq!(mollifier_cdf(v), direct, epsilon = 1e-12);
    }

    #[test]
    fn star_indicator_interior_and_partition() {
        // deep interior of I_{0,3} = [3, 4]
        assert_relative_eq!(
            smooth_indicator(IndicatorKind::Star, 0, 3, 3.5),
            1.0,
            epsilon = 1e-10
        );
        // sum over n at fixed x
        for &x in &[0.37, -1.2, 5.003, 100.7] {
            let s: f64 = (-256..256)
                .map(|n| smooth_indicator(IndicatorKind::Star, 0, n, x))
                .sum();
            assert!((s - 1.0).abs() < 1e-10, "partition at x={x}: {s}");
        }
        // scale covariance at k = 3
        assert_relative_eq!(
            smooth_indicator(IndicatorKind::Star, 3, 1, 12.0),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn double_star_far_field_and_quadrature_oracle() {
        let k = 0;
        let n = 0;
        // distance 10 cell-widths from I_{0,0} = [0,1]
        let far = smooth_indicator(IndicatorKind::DoubleStar, k, n, 11.0);
        assert!(far < 1e-10, "far-field value {far}");
        // closed form vs direct quadrature
        let x = 0.73;
        // split at the |x - y| kink so the oracle panels see smooth integrands
        let direct = composite_gl(|y| (1.0 + (x - y).abs()).powi(-200), 0.0, x, 512, 16)
            + composite_gl(|y| (1.0 + (x - y).abs()).powi(-200), x, 1.0, 512, 16);
        assert_relative_eq!(
            smooth_indicator(IndicatorKind::DoubleStar, k, n, x),
            direct,
            epsilon = 1e-10
        );
    }

    #[test]
    fn restrict_contract() {
        let g = make_grid(-32.0, 64.0, 1024).unwrap();
        let spec = BumpSpec::new(BumpKind::PhiHat);
        // spectrum where phi_hat vanishes -> zero output
        let s = random_bandlimited(g, Band::new(3.0, 5.0), 1.0, 3).unwrap();
        let r = restrict(&s, &spec);
        assert!(l2_norm(&r) < 1e-12);
        // non-expansive
        let s = random_bandlimited(g, Band::new(-4.0, 4.0), 1.0, 4).unwrap();
        let r = restrict(&s, &spec);
        assert!(l2_norm(&r) <= l2_norm(&s) + 1e-12);
        // restricting twice equals restricting by the squared window
        let twice = restrict(&restrict(&s, &spec), &spec);
        let freq = fourier_transform(&s, Direction::Forward);
        let mut shaped = freq.clone();
        for (i, c) in shaped.samples.iter_mut().enumerate() {
            let nu = shaped.grid.point(i);
            let v = eval_bump(&spec, nu);
            *c *= v * v;
        }
        let squared = inverse_onto(&shaped, g);
        let diff: f64 = twice
            .samples
            .iter()
            .zip(squared.samples.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "idempotence defect {diff}");
    }

    #[test]
    fn gauss_legendre_sanity() {
        // degree-7 polynomial integrated exactly by 4-node GL
        let (n, w) = gauss_legendre(4);
        let val: f64 = n
            .iter()
            .zip(w.iter())
            .map(|(x, w)| w * (x.powi(7) + 2.0 * x.powi(4) + 1.0))
            .sum();
        assert_relative_eq!(val, 2.0 * (2.0 / 5.0 + 1.0) - 2.0 + 2.0, epsilon = 1e-13);
        let quad = composite_gl(|x| x * x, 0.0, 3.0, 4, 8);
        assert_relative_eq!(quad, 9.0, epsilon = 1e-12);
    }
}
