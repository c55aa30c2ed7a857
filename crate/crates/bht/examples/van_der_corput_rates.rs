//! Oscillatory-form decay from mixed-derivative lower bounds: the exponent
//! table, a model phase scan, and the derivative witnesses of the curve-root
//! difference phases.

use bht::harness::fit_slope;
use bht::trilinear::FreqProfile;
use bht::vandercorput::{
    bilinear_osc_form, dexp, mixed_derivative_witness, CurveRootDifference, MonomialPhase,
};
use bht::Complex64;

fn main() {
    for ell in 1..=4 {
        let eps = if ell == 1 { 0.5 } else { 0.0 };
        println!("decay exponent at order {ell}: {:.4}", dexp(ell, eps).unwrap());
    }

    let one = FreqProfile::new((-10.0, 10.0), |_| Complex64::new(1.0, 0.0));
    let phase = MonomialPhase {
        px: 2,
        py: 1,
        coeff: 0.5,
    };
    let pts: Vec<(f64, f64)> = (4..=11)
        .map(|k| {
            let v = bilinear_osc_form(&phase, 2f64.powi(k), &one, &one, (0.0, 1.0), (0.0, 1.0), 8.0);
            (k as f64, v.norm())
        })
        .collect();
    let fit = fit_slope(&pts).unwrap();
    println!(
        "model phase slope {:.4} vs guaranteed -{:.4}",
        fit.slope,
        dexp(2, 0.0).unwrap()
    );

    let diff = CurveRootDifference {
        d: 2,
        c: 0.0,
        j: 4,
        tau: 0.5,
    };
    let witness = mixed_derivative_witness(&diff, (1.0, 2.0), (1.0, 2.0)).unwrap();
    println!("mixed-derivative witness over the unit box: {witness:.6}");
}
