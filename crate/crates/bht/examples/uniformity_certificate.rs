//! The uniformity dichotomy at work: deficit of a test function over a chirp
//! family, the two-term orthogonal decomposition behind the certificate, and
//! the certificate bound dominating a sample functional.

use bht::trilinear::FreqProfile;
use bht::uniformity::{
    certificate_bound, decompose_against_phase, uniformity_deficit, CertFunctional, FamilyGrid,
    PairingLayout, PhaseFamily,
};
use bht::Complex64;

fn main() {
    let interval = (1.0 / 16.0, 39.0 / 16.0);
    let grid = FamilyGrid {
        a_per_sign: 24,
        b_count: 48,
        ..FamilyGrid::standard(PhaseFamily::Q1, 2, 4)
    };
    let layout = PairingLayout::for_family(interval, &grid);
    let profile = FreqProfile::random_smooth(interval, 8, 21);
    let fvals: Vec<Complex64> = layout.nodes.iter().map(|&x| profile.eval(x)).collect();

    let rep = uniformity_deficit(&fvals, &layout, &grid).unwrap();
    println!(
        "deficit {:.6} (sigma value {:.6}) at (a, b) = ({:.4}, {:.4})",
        rep.deficit, rep.sigma_value, rep.argmax.a, rep.argmax.b
    );

    let dec = decompose_against_phase(&fvals, &layout, &rep.argmax);
    println!(
        "decomposition: reconstruction error {:.2e}, pythagoras defect {:.2e}",
        dec.reconstruction_error, dec.pythagoras_defect
    );

    let q0 = grid.points()[grid.points().len() / 3];
    let h = layout.phasor(&q0);
    let functional = CertFunctional { h: &h };
    let cert = certificate_bound(&functional, 0.5, &layout, &grid, &[fvals.clone()]).unwrap();
    let value = functional.eval(&layout, &fvals);
    println!(
        "certificate {:.4} dominates |L(f)| / ||f|| = {:.4}",
        cert,
        value / layout.norm(&fvals)
    );
}
