//! The single-scale curve operator itself: apply it to band-limited inputs,
//! check bilinearity, and sum a few dyadic pieces.

use bht::foundation::{l2_norm, lp_norm, make_grid, random_bandlimited};
use bht::operators::{apply_tgamma_partial_sum, apply_tp, DyadicParams, PolynomialSpec};
use bht::oscsym::OscQuadSpec;
use bht::Band;

fn main() {
    let g = make_grid(-8.0, 16.0, 256).unwrap();
    let f = random_bandlimited(g, Band::new(-2.0, 2.0), 1.0, 31).unwrap();
    let h = random_bandlimited(g, Band::new(-2.0, 2.0), 1.0, 32).unwrap();
    let spec = OscQuadSpec::fast();

    let parabola = PolynomialSpec::monomial(2);
    let out = apply_tp(&parabola, &f, &h, &g, &spec).unwrap();
    println!(
        "single-scale curve operator: ||T(f,g)||_1 = {:.6}, inputs unit L2",
        lp_norm(&out, 1.0).unwrap()
    );

    let partial = apply_tgamma_partial_sum(2, -2..=2, &f, &h, &g, &spec).unwrap();
    println!(
        "dyadic partial sum over |j| <= 2: L2 mass {:.6}",
        l2_norm(&partial)
    );

    let params = DyadicParams::new(2, 3, 5).unwrap();
    println!(
        "scale piece (j, m) = (3, 5) sits in the {:?} regime, cell exponent {}",
        params.regime(),
        params.cell_exponent()
    );
}
