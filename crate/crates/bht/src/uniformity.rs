//! Sigma-uniformity against the two chirp phase families, the bound
//! certificate built from the uniform/nonuniform dichotomy, and the
//! two-term orthogonal decomposition identity it rests on.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bumps::gauss_legendre;
use crate::error::{BhtError, Result};

/// The two chirp families: fractional-power phases indexed by `(a, b)` with
/// `|a|` pinned near `2^{m_tag}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseFamily {
    /// `a xi^{d/(d-1)} + b xi`
    Q1,
    /// `a eta^{-1/(d-1)} + b eta`
    Q2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseFamilyPoint {
    pub family: PhaseFamily,
    pub a: f64,
    pub b: f64,
    pub m_tag: i32,
    pub d: u32,
}

impl PhaseFamilyPoint {
    pub fn validate(&self) -> Result<()> {
        let cap = 2f64.powi(self.m_tag - 100).max(f64::MIN_POSITIVE);
        if self.a.abs() < cap || self.a.abs() > 2f64.powi(self.m_tag.saturating_add(100)) {
            return Err(BhtError::InvalidParameter(format!(
                "|a| = {} outside the admissible range of scale m = {}",
                self.a.abs(),
                self.m_tag
            )));
        }
        Ok(())
    }

    pub fn phase(&self, x: f64) -> f64 {
        let df = self.d as f64;
        match self.family {
            PhaseFamily::Q1 => self.a * x.powf(df / (df - 1.0)) + self.b * x,
            PhaseFamily::Q2 => self.a * x.powf(-1.0 / (df - 1.0)) + self.b * x,
        }
    }

    pub fn phase_deriv_bound(&self, interval: (f64, f64)) -> f64 {
        let df = self.d as f64;
        let (lo, hi) = interval;
        let edge = |x: f64| match self.family {
            PhaseFamily::Q1 => {
                self.a.abs() * df / (df - 1.0) * x.powf(1.0 / (df - 1.0)) + self.b.abs()
            }
            PhaseFamily::Q2 => {
                self.a.abs() / (df - 1.0) * x.powf(-df / (df - 1.0)) + self.b.abs()
            }
        };
        edge(lo).max(edge(hi))
    }
}

/// Finite (a, b) grid over a phase family, plus exactly injected probe
/// points so multiplier probes can be members of the maximized family.
#[derive(Debug, Clone)]
pub struct FamilyGrid {
    pub family: PhaseFamily,
    pub d: u32,
    pub m_tag: i32,
    pub a_per_sign: usize,
    pub b_count: usize,
    pub injected: Vec<(f64, f64)>,
}

impl FamilyGrid {
    pub fn standard(family: PhaseFamily, d: u32, m_tag: i32) -> FamilyGrid {
        FamilyGrid {
            family,
            d,
            m_tag,
            a_per_sign: 64,
            b_count: 256,
            injected: Vec::new(),
        }
    }

    pub fn with_injected(mut self, pts: Vec<(f64, f64)>) -> FamilyGrid {
        self.injected = pts;
        self
    }

    /// Deterministic enumeration: log grid in `|a|` over
    /// `2^{m-2}..2^{m+2}` per sign, linear grid in `b` over
    /// `[-2^{m+2}, 2^{m+2}]`, then the injected points.
    pub fn points(&self) -> Vec<PhaseFamilyPoint> {
        let mut out = Vec::with_capacity(2 * self.a_per_sign * self.b_count + self.injected.len());
        let amin = 2f64.powi(self.m_tag - 2);
        let amax = 2f64.powi(self.m_tag + 2);
        let bmax = 2f64.powi(self.m_tag + 2);
        for sign in [1.0, -1.0] {
            for ia in 0..self.a_per_sign {
                let t = ia as f64 / (self.a_per_sign - 1).max(1) as f64;
                let a = sign * amin * (amax / amin).powf(t);
                for ib in 0..self.b_count {
                    let b = -bmax + 2.0 * bmax * ib as f64 / (self.b_count - 1).max(1) as f64;
                    out.push(PhaseFamilyPoint {
                        family: self.family,
                        a,
                        b,
                        m_tag: self.m_tag,
                        d: self.d,
                    });
                }
            }
        }
        for &(a, b) in &self.injected {
            out.push(PhaseFamilyPoint {
                family: self.family,
                a,
                b,
                m_tag: self.m_tag,
                d: self.d,
            });
        }
        out
    }
}

/// Composite Gauss-Legendre layout on an interval, shared by every pairing
/// so that deficits, certificates, and multiplier probes are evaluated with
/// the same discrete integral.
#[derive(Debug, Clone)]
pub struct PairingLayout {
    pub interval: (f64, f64),
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PairingLayout {
    /// Panel count resolves the worst phase rate of the family grid
    /// (16 nodes per oscillation).
    pub fn for_family(interval: (f64, f64), grid: &FamilyGrid) -> PairingLayout {
        let worst = grid
            .points()
            .iter()
            .map(|q| q.phase_deriv_bound(interval))
            .fold(0.0_f64, f64::max);
        PairingLayout::with_rate(interval, worst)
    }

    pub fn with_rate(interval: (f64, f64), max_phase_rate: f64) -> PairingLayout {
        let (lo, hi) = interval;
        let cycles = max_phase_rate * (hi - lo) / TAU;
        let panels = (2.0 * cycles).ceil().max(16.0) as usize;
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
        PairingLayout {
            interval,
            nodes,
            weights,
        }
    }

    /// `int_I f e^{-i q}` on this layout.
    pub fn pairing(&self, f: &[Complex64], q: &PhaseFamilyPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((x, w), v) in self.nodes.iter().zip(self.weights.iter()).zip(f.iter()) {
            acc += v * Complex64::from_polar(*w, -q.phase(*x));
        }
        acc
    }

    /// Plain inner product `<f, g> = int_I f conj(g)`.
    pub fn inner(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((w, a), b) in self.weights.iter().zip(f.iter()).zip(g.iter()) {
            acc += a * b.conj() * *w;
        }
        acc
    }

    pub fn norm(&self, f: &[Complex64]) -> f64 {
        self.inner(f, f).re.max(0.0).sqrt()
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }

    pub fn phasor(&self, q: &PhaseFamilyPoint) -> Vec<Complex64> {
        self.nodes
            .iter()
            .map(|&x| Complex64::from_polar(1.0, q.phase(x)))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UniformityReport {
    /// Cauchy-Schwarz-normalized pairing maximum
    /// `max_q |<f, e^{iq}>| / (||f|| ||e^{iq}||)`, always in [0, 1];
    /// self-pairing with a family member gives exactly 1.
    pub deficit: f64,
    /// The raw uniformity level `max_q |<f, e^{iq}>| / ||f||`; `f` is
    /// sigma-uniform against the grid family iff this is at most sigma.
    /// Differs from `deficit` by the factor `|I|^{1/2}`.
    pub sigma_value: f64,
    pub argmax: PhaseFamilyPoint,
    pub family_points: usize,
    pub interval: (f64, f64),
}

/// Exact maximization of the normalized pairing over the finite family grid.
/// Ties break toward the lexicographically smallest `(a, b)`.
pub fn uniformity_deficit(
    fvals: &[Complex64],
    layout: &PairingLayout,
    grid: &FamilyGrid,
) -> Result<UniformityReport> {
    let pts = grid.points();
    if pts.is_empty() {
        return Err(BhtError::InvalidParameter("empty family grid".into()));
    }
    let norm = layout.norm(fvals);
    if norm == 0.0 {
        return Err(BhtError::InvalidParameter(
            "deficit undefined for the zero function".into(),
        ));
    }
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|q| layout.pairing(fvals, q).norm())
        .collect();
    let mut best = 0usize;
    for i in 1..pts.len() {
        let better = vals[i] > vals[best] + 1e-15 * vals[best].max(1.0);
        let tie = (vals[i] - vals[best]).abs() <= 1e-15 * vals[best].max(1.0);
        let lex_smaller = (pts[i].a, pts[i].b) < (pts[best].a, pts[best].b);
        if better || (tie && lex_smaller) {
            best = i;
        }
    }
    let sigma_value = vals[best] / norm;
    Ok(UniformityReport {
        deficit: sigma_value / layout.measure().sqrt(),
        sigma_value,
        argmax: pts[best],
        family_points: pts.len(),
        interval: layout.interval,
    })
}

/// Orthogonal two-term expansion of `f` against a witness phase:
/// `f = <f,g> g + <f,e^{iq}> e^{iq} / |I|` with `g` the normalized residual.
pub struct Decomposition {
    pub proj_phase: Complex64,
    pub proj_residual: Complex64,
    pub reconstruction_error: f64,
    pub pythagoras_defect: f64,
}

pub fn decompose_against_phase(
    fvals: &[Complex64],
    layout: &PairingLayout,
    q: &PhaseFamilyPoint,
) -> Decomposition {
    let eq = layout.phasor(q);
    let measure = layout.measure();
    let f_eq = layout.inner(fvals, &eq);
    // residual r = f - <f, e^{iq}> e^{iq} / |I|
    let r: Vec<Complex64> = fvals
        .iter()
        .zip(eq.iter())
        .map(|(f, e)| f - e * f_eq / measure)
        .collect();
    let rnorm = layout.norm(&r);
    let g: Vec<Complex64> = if rnorm > 0.0 {
        r.iter().map(|v| v / rnorm).collect()
    } else {
        vec![Complex64::new(0.0, 0.0); r.len()]
    };
    let f_g = layout.inner(fvals, &g);
    let recon: Vec<Complex64> = g
        .iter()
        .zip(eq.iter())
        .map(|(gv, ev)| gv * f_g + ev * f_eq / measure)
        .collect();
    let err: Vec<Complex64> = fvals
        .iter()
        .zip(recon.iter())
        .map(|(a, b)| a - b)
        .collect();
    let f_f = layout.inner(fvals, fvals).re;
    let pythag = (f_f - (f_g.norm_sqr() + f_eq.norm_sqr() / measure)).abs();
    Decomposition {
        proj_phase: f_eq,
        proj_residual: f_g,
        reconstruction_error: layout.norm(&err),
        pythagoras_defect: pythag,
    }
}

/// Functionals admitted by the certificate: the modulus of a fixed inner
/// product (sub-linear and bounded by construction).
pub struct CertFunctional<'a> {
    pub h: &'a [Complex64],
}

impl CertFunctional<'_> {
    pub fn eval(&self, layout: &PairingLayout, fvals: &[Complex64]) -> f64 {
        layout.inner(fvals, self.h).norm()
    }
}

/// Certificate `max{ U_est, 2 sigma^{-1} Q }`: `Q` is the exact grid max of
/// `|L(e^{iq})|`, `U_est` the observed max of `|L(f)|/||f||` over a corpus of
/// sigma-uniform test functions (the uniform-set supremum itself is not
/// computable and is never claimed).
pub fn certificate_bound(
    functional: &CertFunctional,
    sigma: f64,
    layout: &PairingLayout,
    grid: &FamilyGrid,
    uniform_corpus: &[Vec<Complex64>],
) -> Result<f64> {
    if sigma <= 0.0 {
        return Err(BhtError::InvalidParameter("sigma must be positive".into()));
    }
    let pts = grid.points();
    let q_grid = pts
        .par_iter()
        .map(|q| functional.eval(layout, &layout.phasor(q)))
        .reduce(|| 0.0, f64::max);
    let mut u_est = 0.0_f64;
    for f in uniform_corpus {
        let n = layout.norm(f);
        if n > 0.0 {
            u_est = u_est.max(functional.eval(layout, f) / n);
        }
    }
    Ok(u_est.max(2.0 / sigma * q_grid))
}

/// Both sides of the proof-level inequality behind the certificate: for any
/// `f`, witness `q`, and functional `L = |<., h>|`,
/// `|L(f)| <= sqrt(1 - |<f,e^{iq}>|^2 / (|I| ||f||^2)) ||h|| ||f||
///           + |I|^{-1} |<f,e^{iq}>| |L(e^{iq})|`.
pub fn proof_inequality_sides(
    fvals: &[Complex64],
    h: &[Complex64],
    layout: &PairingLayout,
    q: &PhaseFamilyPoint,
) -> (f64, f64) {
    let functional = CertFunctional { h };
    let lhs = functional.eval(layout, fvals);
    let eq = layout.phasor(q);
    let measure = layout.measure();
    let f_eq = layout.inner(fvals, &eq);
    let fnorm = layout.norm(fvals);
    let hnorm = layout.norm(h);
    let frac = (f_eq.norm_sqr() / (measure * fnorm * fnorm)).min(1.0);
    let rhs = (1.0 - frac).sqrt() * hnorm * fnorm
        + f_eq.norm() / measure * functional.eval(layout, &eq);
    (lhs, rhs)
}
