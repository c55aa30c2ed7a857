//! Runners for the acceptance criteria: each one pins its scan ranges,
//! tolerances, and thresholds, runs the measurement, and reports one
//! pass/fail outcome with the measured numbers attached. The CLI `report`
//! subcommand and the acceptance test suite both consume these.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bumps::{check_partition, theta};
use crate::error::Result;
use crate::foundation::{
    derive_seed, l2_norm, lp_norm, make_grid, random_bandlimited, Band, SampledSignal,
};
use crate::harness::fit_slope;
use crate::operators::{
    apply_bjm_spectral, apply_tjm_freq, apply_tjm_time, tjm_grids, DyadicParams, SymbolCache,
};
use crate::oscsym::{critical_point, osc_integral, symbol_md, OscQuadSpec};
use crate::paraproducts::{coeff_at, fourier_coeffs_c1, max_coeff};
use crate::sharpness::{default_deltas, default_tuning, sharpness_scan};
use crate::trilinear::{
    failure_witness, failure_witness_random, multiplier_mdjm, multiplier_probe_phase, FreqProfile,
};
use crate::uniformity::{
    decompose_against_phase, proof_inequality_sides, uniformity_deficit, FamilyGrid, PairingLayout,
    PhaseFamily,
};
use crate::vandercorput::{
    bilinear_osc_form, dexp, form_lambda_djm, profile_sup, FormVariant, MonomialPhase,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub details: serde_json::Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceReport {
    pub seed: u64,
    pub criteria: Vec<CriterionOutcome>,
    pub all_pass: bool,
}

fn outcome(id: u32, name: &str, pass: bool, details: serde_json::Value) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name: name.to_string(),
        pass,
        details,
    }
}

/// Partition of unity and its telescoped partial sums.
pub fn criterion_01_partition(seed: u64) -> Result<CriterionOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[1]));
    let mut worst_full = 0.0_f64;
    for _ in 0..10_000 {
        let e: f64 = rng.gen_range(-18.0..18.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let xi = sign * 2f64.powf(e);
        worst_full = worst_full.max((check_partition(xi, -20, 20)? - 1.0).abs());
    }
    let mut worst_tel = 0.0_f64;
    for _ in 0..500 {
        let e: f64 = rng.gen_range(-8.0..8.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let xi = sign * 2f64.powf(e);
        for m0 in -10..=10 {
            let s = check_partition(xi, -20, m0)?;
            worst_tel = worst_tel.max((s - theta(xi / 2f64.powi(m0 + 1))).abs());
        }
    }
    let pass = worst_full < 1e-10 && worst_tel < 1e-10;
    Ok(outcome(
        1,
        "partition of unity and telescoping",
        pass,
        json!({"max_partition_defect": worst_full, "max_telescope_defect": worst_tel, "tolerance": 1e-10}),
    ))
}

/// Stationary-phase decay rate of the base symbol at critical-point
/// configurations, for degrees 2 and 3.
pub fn criterion_02_stationary_rate(_seed: u64) -> Result<CriterionOutcome> {
    let spec = OscQuadSpec::default();
    let mut details = serde_json::Map::new();
    let mut pass = true;
    for d in [2u32, 3] {
        // For d = 3 both symmetric critical points contribute, so the
        // configuration pins the critical phase at an integer: the two-point
        // interference factor is then constant across dyadic scales.
        let (xi0, eta0) = if d == 2 {
            (-2.0, 1.1)
        } else {
            (-(1.5 * 3f64.sqrt()).powf(2.0 / 3.0), 1.0)
        };
        debug_assert!(critical_point(d, xi0, eta0).is_some());
        let pts: Vec<(f64, f64)> = (4..=14)
            .map(|m| {
                let s = 2f64.powi(m);
                (m as f64, symbol_md(d, s * xi0, s * eta0, &spec).abs())
            })
            .collect();
        let fit = fit_slope(&pts)?;
        let ok = (fit.slope + 0.5).abs() < 0.05 && fit.r2 >= 0.98;
        pass &= ok;
        details.insert(
            format!("d{d}"),
            json!({"slope": fit.slope, "r2": fit.r2, "xi0": xi0, "eta0": eta0, "pass": ok}),
        );
    }
    details.insert("expected_slope".into(), json!(-0.5));
    details.insert("tolerance".into(), json!(0.05));
    Ok(outcome(
        2,
        "stationary-phase decay rate of the symbol",
        pass,
        serde_json::Value::Object(details),
    ))
}

/// Rapid tail decay of the remainder symbol in the dominated-frequency
/// regime.
pub fn criterion_03_nonstationary_tail(_seed: u64) -> Result<CriterionOutcome> {
    let spec = OscQuadSpec::default();
    let (xi0, eta0) = (-2.0, 0.05);
    let pts: Vec<(f64, f64)> = (4..=10)
        .map(|m| {
            let s = 2f64.powi(m);
            let amp = move |t: f64| {
                Complex64::new(crate::bumps::rho(t), 0.0)
                    * (Complex64::from_polar(1.0, -std::f64::consts::TAU * s * eta0 * t * t)
                        - Complex64::new(1.0, 0.0))
            };
            let phase = move |t: f64| std::f64::consts::TAU * s * xi0 * t;
            let v = osc_integral(&amp, &phase, None, (-2.0, 2.0), &spec);
            (m as f64, v.abs().max(1e-18))
        })
        .collect();
    let fit = fit_slope(&pts)?;
    let pass = fit.slope <= -3.0;
    Ok(outcome(
        3,
        "nonstationary tail decay",
        pass,
        json!({"slope": fit.slope, "threshold": -3.0, "values": pts.iter().map(|p| p.1).collect::<Vec<_>>()}),
    ))
}

/// Agreement of the frequency-side and time-side evaluations of the
/// scale-(j, m) pieces.
pub fn criterion_04_two_path(seed: u64) -> Result<CriterionOutcome> {
    let d = 2u32;
    let cache = SymbolCache::new(d, OscQuadSpec::default());
    let out = make_grid(0.0, 1.0, 16)?;
    let mut worst = 0.0_f64;
    let mut cells = serde_json::Map::new();
    for j in [-6i32, -2, 2, 6] {
        for m in [4i32, 8] {
            let params = DyadicParams::new(d, j, m)?;
            let (gf, bf, gg, bg) = tjm_grids(&params)?;
            let gaps: Vec<f64> = (0..50u64)
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&trial| {
                    let sf = derive_seed(seed, &[4, j as i64, m as i64, trial as i64, 0]);
                    let sg = derive_seed(seed, &[4, j as i64, m as i64, trial as i64, 1]);
                    let f = random_bandlimited(gf, bf, 1.0, sf)?;
                    let g = random_bandlimited(gg, bg, 1.0, sg)?;
                    let a = apply_tjm_freq(&params, &cache, &f, &g, &out)?;
                    let tspec = OscQuadSpec {
                        base_panels: 32,
                        tol: 1e-8,
                        max_refine: 0,
                        min_panels_per_oscillation: 2.0,
                    };
                    let b = apply_tjm_time(&params, &f, &g, &out, &tspec)?;
                    let diff = SampledSignal::new(
                        out,
                        a.samples
                            .iter()
                            .zip(b.samples.iter())
                            .map(|(x, y)| x - y)
                            .collect(),
                        Band::full(&out),
                    )?;
                    Ok(l2_norm(&diff) / l2_norm(&a).max(1e-300))
                })
                .collect::<Result<Vec<_>>>()?;
            let cell_worst = gaps.iter().copied().fold(0.0, f64::max);
            worst = worst.max(cell_worst);
            cells.insert(format!("j{j}_m{m}"), json!(cell_worst));
        }
    }
    let pass = worst < 1e-6;
    let mut details = serde_json::Map::new();
    details.insert("max_relative_gap".into(), json!(worst));
    details.insert("tolerance".into(), json!(1e-6));
    details.insert("cells".into(), serde_json::Value::Object(cells));
    Ok(outcome(
        4,
        "two-path equality of the scale pieces",
        pass,
        serde_json::Value::Object(details),
    ))
}

fn bjm_ratio_scan(
    d: u32,
    cells: &[(i32, i32)],
    trials: u32,
    seed: u64,
) -> Result<Vec<((i32, i32), f64)>> {
    let g = make_grid(-4.0, 8.0, 128)?;
    let out = make_grid(-4.0, 8.0, 64)?;
    let band = Band::new(0.5, 2.0);
    // the symbol cache turns the 200-trial scan into bin sums; entries are
    // shared across trials and scan cells
    let cache = SymbolCache::new(d, OscQuadSpec::fast());
    let mut results = Vec::with_capacity(cells.len());
    for &(j, m) in cells {
        let params = DyadicParams::new(d, j, m)?;
        let ratios: Vec<f64> = (0..trials)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&t| {
                let sf = derive_seed(seed, &[5, j as i64, m as i64, t as i64, 0]);
                let sg = derive_seed(seed, &[5, j as i64, m as i64, t as i64, 1]);
                let f = random_bandlimited(g, band, 1.0, sf)?;
                let h = random_bandlimited(g, band, 1.0, sg)?;
                let b = apply_bjm_spectral(&params, &cache, &f, &h, &out)?;
                Ok(lp_norm(&b, 1.0)? / (l2_norm(&f) * l2_norm(&h)))
            })
            .collect::<Result<Vec<_>>>()?;
        results.push(((j, m), ratios.iter().copied().fold(0.0, f64::max)));
    }
    Ok(results)
}

/// Small-shear decay of the randomized restriction-operator ratios in the
/// frequency scale.
pub fn criterion_05_small_shear_decay(seed: u64) -> Result<CriterionOutcome> {
    let cells: Vec<(i32, i32)> = (4..=12).map(|m| (2, m)).collect();
    let scan = bjm_ratio_scan(2, &cells, 200, seed)?;
    let pts: Vec<(f64, f64)> = scan.iter().map(|((_, m), v)| (*m as f64, *v)).collect();
    let fit = fit_slope(&pts)?;
    let threshold = -1.0 / 8.0 + 0.05;
    let pass = fit.slope <= threshold;
    Ok(outcome(
        5,
        "small-shear scale decay of the restriction operator",
        pass,
        json!({"slope": fit.slope, "threshold": threshold, "r2": fit.r2,
               "ratios": pts.iter().map(|p| p.1).collect::<Vec<_>>()}),
    ))
}

/// Large-shear behavior: ratios non-increasing in the shear and below the
/// two-branch envelope anchored at the regime boundary.
pub fn criterion_06_large_shear_shape(seed: u64) -> Result<CriterionOutcome> {
    let m = 8i32;
    let cells: Vec<(i32, i32)> = (8..=16).map(|j| (j, m)).collect();
    let scan = bjm_ratio_scan(2, &cells, 200, seed)?;
    let ratios: Vec<f64> = scan.iter().map(|(_, v)| *v).collect();
    // Non-increasing up to the sampling noise of randomized suprema (25%
    // one-sided hedge per step), with the overall decrease enforced
    // unconditionally.
    let monotone = ratios.windows(2).all(|w| w[1] <= w[0] * 1.25)
        && ratios.last().unwrap() < &(ratios[0] * 0.5);
    // envelope max{2^{(m-(d-1)|j|)/3}, 2^{-m/16}} anchored at |j| = 8
    let envelope = |j: i32| 2f64.powf(((m - j) as f64) / 3.0).max(2f64.powf(-(m as f64) / 16.0));
    let anchor = ratios[0] / envelope(8);
    let below = scan
        .iter()
        .all(|((j, _), v)| *v <= anchor * envelope(*j) * 1.02);
    let pass = monotone && below;
    Ok(outcome(
        6,
        "large-shear shape of the restriction operator",
        pass,
        json!({"ratios": ratios, "monotone": monotone, "below_envelope": below,
               "fitted_constant": anchor}),
    ))
}

/// Matched-chirp witness: no decay for the aligned input, restored decay for
/// random inputs.
pub fn criterion_07_failure_witness(seed: u64) -> Result<CriterionOutcome> {
    let spec = OscQuadSpec::fast();
    let witness: Vec<(f64, f64)> = (4..=12)
        .collect::<Vec<i32>>()
        .par_iter()
        .map(|&m| Ok((m as f64, failure_witness(2, m, &spec)?.normalized)))
        .collect::<Result<Vec<_>>>()?;
    let min_value = witness.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let wfit = fit_slope(&witness)?;
    let contrast: Vec<(f64, f64)> = (4..=12)
        .collect::<Vec<i32>>()
        .par_iter()
        .map(|&m| {
            let mut worst = 0.0_f64;
            for t in 0..3u64 {
                worst = worst.max(
                    failure_witness_random(2, m, derive_seed(seed, &[7, t as i64]), &spec)?
                        .normalized,
                );
            }
            Ok((m as f64, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let cfit = fit_slope(&contrast)?;
    let pass = min_value >= 0.3 && wfit.slope.abs() < 0.05 && cfit.slope <= -0.2;
    Ok(outcome(
        7,
        "matched-chirp failure witness",
        pass,
        json!({"witness_min": min_value, "witness_slope": wfit.slope,
               "contrast_slope": cfit.slope,
               "witness_values": witness.iter().map(|p| p.1).collect::<Vec<_>>()}),
    ))
}

/// Counterexample sharpness: root enclosures at the reference point and the
/// norm-mass exponent for both probed derivative orders, with the guaranteed
/// lower bound at every sliver width.
pub fn criterion_08_sharpness(_seed: u64) -> Result<CriterionOutcome> {
    // root enclosures at the reference instance
    let spec = crate::sharpness::CounterexampleSpec::new(2, 2, 1e4, 1e-6)?;
    let (t1, t2) = crate::sharpness::intersection_roots(&spec)?;
    let enclosures_ok =
        (1.2 - 1e-9..=1.2829).contains(&t1) && (1.1 - 1e-9..=1.1415).contains(&t2);
    let mut pass = enclosures_ok;
    let mut details = serde_json::Map::new();
    details.insert("t1".into(), json!(t1));
    details.insert("t2".into(), json!(t2));
    for (d, n) in [(2u32, 2u32), (3, 3)] {
        let r = 0.5;
        let scan = sharpness_scan(d, n, default_tuning(n), r, 1.0, 1.0, &default_deltas(n))?;
        let exponent_ok = (scan.fitted_exponent - scan.expected_exponent).abs() < 0.1;
        let lower_ok = scan.points.iter().all(|p| p.lhs >= p.lower_bound);
        pass &= exponent_ok && lower_ok;
        details.insert(
            format!("d{d}n{n}"),
            json!({"fitted_exponent": scan.fitted_exponent,
                   "expected_exponent": scan.expected_exponent,
                   "lower_bound_holds": lower_ok, "pass": exponent_ok && lower_ok}),
        );
    }
    details.insert("tolerance".into(), json!(0.1));
    Ok(outcome(
        8,
        "counterexample sharpness",
        pass,
        serde_json::Value::Object(details),
    ))
}

/// Coefficient decay of the dominated-frequency expansion and paraproduct
/// shift stability.
pub fn criterion_09_paraproduct(seed: u64) -> Result<CriterionOutcome> {
    let c = fourier_coeffs_c1(2, 2, -10, 48)?;
    let peak = max_coeff(&c);
    let at88 = coeff_at(&c, 8, 8).norm();
    let decay_ok = at88 / peak < 1e-3;
    let c4 = fourier_coeffs_c1(2, 2, -4, 6)?;
    let c12 = fourier_coeffs_c1(2, 2, -12, 6)?;
    let smallness_ratio = max_coeff(&c12) / max_coeff(&c4);
    let smallness_ok = smallness_ratio <= 2f64.powf(-4.0) * 4.0;

    // shift stability of the paraproduct ratios
    let mut ratios = Vec::new();
    for shift in [-10i32, -5, 0, 5, 10] {
        let dil = 2f64.powi(-shift);
        let g = make_grid(-8.0 * dil, 16.0 * dil, 1024)?;
        let params = crate::paraproducts::ParaparamSet::new(1, 1, -1..=1)?.with_offsets(shift, shift);
        let worst: f64 = (0..100u64)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&trial| {
                let f1 = random_bandlimited(
                    g,
                    Band::new(2f64.powi(shift - 2), 2f64.powi(shift + 2)),
                    1.0,
                    derive_seed(seed, &[9, shift as i64, trial as i64, 1]),
                )?;
                let f2 = random_bandlimited(
                    g,
                    Band::new(-2f64.powi(shift + 1), 2f64.powi(shift + 1)),
                    1.0,
                    derive_seed(seed, &[9, shift as i64, trial as i64, 2]),
                )?;
                let out = crate::paraproducts::apply_paraproduct(&params, &f1, &f2, &g)?;
                lp_norm(&out, 1.0)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        ratios.push(worst);
    }
    let hi = ratios.iter().copied().fold(0.0_f64, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let stability_ok = hi / lo < 2.0;
    let pass = decay_ok && smallness_ok && stability_ok;
    Ok(outcome(
        9,
        "paraproduct coefficient decay and shift stability",
        pass,
        json!({"coeff_8_8_over_peak": at88 / peak, "smallness_ratio": smallness_ratio,
               "smallness_cap": 0.25, "shift_ratios": ratios, "stability_spread": hi / lo}),
    ))
}

/// Uniformity machinery: the orthogonal decomposition identities, the
/// proof-level inequality over seeded trials, and the exact multiplier bound
/// with injected probes.
pub fn criterion_10_uniformity(seed: u64) -> Result<CriterionOutcome> {
    let interval = (1.0 / 16.0, 39.0 / 16.0);
    let grid = FamilyGrid {
        family: PhaseFamily::Q1,
        d: 2,
        m_tag: 4,
        a_per_sign: 16,
        b_count: 32,
        injected: Vec::new(),
    };
    let layout = PairingLayout::for_family(interval, &grid);
    let q = grid.points()[413];
    let random_vals = |s: u64| -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let coeffs: Vec<(f64, Complex64)> = (-6..=6)
            .map(|k| {
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                (k as f64 / 4.0, Complex64::new(re, im))
            })
            .collect();
        layout.sample(|x| {
            coeffs
                .iter()
                .map(|(k, c)| c * Complex64::from_polar(1.0, std::f64::consts::TAU * k * x))
                .sum()
        })
    };
    let mut worst_recon = 0.0_f64;
    let mut worst_pythag = 0.0_f64;
    for t in 0..50u64 {
        let f = random_vals(derive_seed(seed, &[10, 1, t as i64]));
        let dec = decompose_against_phase(&f, &layout, &q);
        worst_recon = worst_recon.max(dec.reconstruction_error);
        worst_pythag = worst_pythag.max(dec.pythagoras_defect);
    }
    let identities_ok = worst_recon < 1e-10 && worst_pythag < 1e-10;

    let mut worst_violation = f64::NEG_INFINITY;
    for t in 0..1000u64 {
        let f = random_vals(derive_seed(seed, &[10, 2, t as i64]));
        let h = random_vals(derive_seed(seed, &[10, 3, t as i64]));
        let (lhs, rhs) = proof_inequality_sides(&f, &h, &layout, &q);
        worst_violation = worst_violation.max(lhs - rhs);
    }
    let inequality_ok = worst_violation <= 1e-9;

    // multiplier bound with probe phases injected into the family
    let params = DyadicParams::new(2, 8, 6)?;
    let alpha = 2f64.powi(params.m);
    let probes: Vec<f64> = (0..12).map(|i| 0.6 + 0.1 * i as f64).collect();
    let injected: Vec<(f64, f64)> = probes
        .iter()
        .map(|&eta| {
            let qq = multiplier_probe_phase(&params, eta, alpha);
            (qq.a, qq.b)
        })
        .collect();
    let mgrid = FamilyGrid {
        family: PhaseFamily::Q1,
        d: 2,
        m_tag: params.m,
        a_per_sign: 8,
        b_count: 8,
        injected,
    };
    let mlayout = PairingLayout::for_family(interval, &mgrid);
    let f1 = FreqProfile::random_smooth(interval, 8, derive_seed(seed, &[10, 4]));
    let vals = multiplier_mdjm(&params, &f1, &probes, alpha, &mlayout);
    let sup = vals.iter().map(|v| v.norm()).fold(0.0_f64, f64::max);
    let windowed: Vec<Complex64> = mlayout
        .nodes
        .iter()
        .map(|&xi| f1.eval(xi) * crate::bumps::phi1_hat(xi))
        .collect();
    let rep = uniformity_deficit(&windowed, &mlayout, &mgrid)?;
    let bound = rep.sigma_value * mlayout.norm(&windowed);
    let multiplier_ok = sup <= bound + 1e-9;

    let pass = identities_ok && inequality_ok && multiplier_ok;
    Ok(outcome(
        10,
        "uniformity machinery",
        pass,
        json!({"max_reconstruction_error": worst_recon, "max_pythagoras_defect": worst_pythag,
               "max_inequality_violation": worst_violation,
               "multiplier_sup": sup, "multiplier_bound": bound}),
    ))
}

/// Van der Corput rates: the exact exponent table, the model-phase decay,
/// and the two curve-root form slopes.
pub fn criterion_11_van_der_corput(seed: u64) -> Result<CriterionOutcome> {
    let exact_ok = dexp(2, 0.0)? == 0.25 && dexp(3, 0.0)? == 1.0 / 6.0;

    let one = FreqProfile::new((-10.0, 10.0), |_| Complex64::new(1.0, 0.0));
    let phase = MonomialPhase {
        px: 2,
        py: 1,
        coeff: 0.5,
    };
    let pts: Vec<(f64, f64)> = (4..=12)
        .map(|k| {
            let lam = 2f64.powi(k);
            let v = bilinear_osc_form(&phase, lam, &one, &one, (0.0, 1.0), (0.0, 1.0), 8.0);
            (k as f64, v.norm())
        })
        .collect();
    let model_fit = fit_slope(&pts)?;
    let model_ok = model_fit.slope <= -0.2;

    // curve-root form, positive variant
    let interval_pts: Vec<(f64, f64)> = (4..=11)
        .collect::<Vec<i32>>()
        .par_iter()
        .map(|&m| {
            let mut worst = 0.0_f64;
            for trial in 0..3u64 {
                let f = FreqProfile::random_smooth(
                    (-2.0, 4.0),
                    8,
                    derive_seed(seed, &[11, 1, m as i64, trial as i64]),
                );
                let g = FreqProfile::random_smooth(
                    (0.5, 2.5),
                    8,
                    derive_seed(seed, &[11, 2, m as i64, trial as i64]),
                );
                let v = form_lambda_djm(
                    &FormVariant::IntervalI { c: 0.0, coeff: 1.0 },
                    2,
                    2,
                    m,
                    &f,
                    &g,
                    4.0,
                )?;
                worst = worst.max(v.norm() / (f.l2() * profile_sup(&g, (1.0, 2.0))));
            }
            Ok((m as f64, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let interval_fit = fit_slope(&interval_pts)?;
    let interval_threshold = -dexp(1, 0.5)? / 2.0 + 0.06;
    let interval_ok = interval_fit.slope <= interval_threshold;

    // inverse-root form, negative-shear variant
    let neg_pts: Vec<(f64, f64)> = (4..=11)
        .collect::<Vec<i32>>()
        .par_iter()
        .map(|&m| {
            let j = -(m + 2);
            let mut worst = 0.0_f64;
            for trial in 0..3u64 {
                let f = FreqProfile::random_smooth(
                    (-4.0, 4.0),
                    8,
                    derive_seed(seed, &[11, 3, m as i64, trial as i64]),
                );
                let g = FreqProfile::random_smooth(
                    (0.0, 3.0),
                    8,
                    derive_seed(seed, &[11, 4, m as i64, trial as i64]),
                );
                let v = form_lambda_djm(&FormVariant::Neg { coeff: 1.0 }, 2, j, m, &f, &g, 4.0)?;
                worst = worst.max(v.norm() / (f.l2() * profile_sup(&g, (0.0, 3.0))));
            }
            Ok((m as f64, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let neg_fit = fit_slope(&neg_pts)?;
    let neg_ok = neg_fit.slope <= -0.25 + 0.06;

    let pass = exact_ok && model_ok && interval_ok && neg_ok;
    Ok(outcome(
        11,
        "van der Corput rates",
        pass,
        json!({"dexp_exact": exact_ok, "model_slope": model_fit.slope,
               "interval_form_slope": interval_fit.slope,
               "interval_threshold": interval_threshold,
               "neg_form_slope": neg_fit.slope, "neg_threshold": -0.25 + 0.06}),
    ))
}

/// All non-meta criteria (determinism of this very report is the remaining
/// one, and is checked by running the CLI twice).
pub fn run_all(seed: u64) -> Result<AcceptanceReport> {
    let criteria = vec![
        criterion_01_partition(seed)?,
        criterion_02_stationary_rate(seed)?,
        criterion_03_nonstationary_tail(seed)?,
        criterion_04_two_path(seed)?,
        criterion_05_small_shear_decay(seed)?,
        criterion_06_large_shear_shape(seed)?,
        criterion_07_failure_witness(seed)?,
        criterion_08_sharpness(seed)?,
        criterion_09_paraproduct(seed)?,
        criterion_10_uniformity(seed)?,
        criterion_11_van_der_corput(seed)?,
    ];
    let all_pass = criteria.iter().all(|c| c.pass);
    Ok(AcceptanceReport {
        seed,
        criteria,
        all_pass,
    })
}


pub fn run_one(id: u32, seed: u64) -> Result<CriterionOutcome> {
    match id {
        1 => criterion_01_partition(seed),
        2 => criterion_02_stationary_rate(seed),
        3 => criterion_03_nonstationary_tail(seed),
        4 => criterion_04_two_path(seed),
        5 => criterion_05_small_shear_decay(seed),
        6 => criterion_06_large_shear_shape(seed),
        7 => criterion_07_failure_witness(seed),
        8 => criterion_08_sharpness(seed),
        9 => criterion_09_paraproduct(seed),
        10 => criterion_10_uniformity(seed),
        11 => criterion_11_van_der_corput(seed),
        other => Err(crate::error::BhtError::InvalidParameter(format!(
            "no criterion {other}; runnable criteria are 1..=11"
        ))),
    }
}
