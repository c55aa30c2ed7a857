//! Randomized norm ratios of the rescaled restriction operator across the
//! frequency scale, fitted against the eighth-root decay of the small-shear
//! regime.

use bht::foundation::{derive_seed, l2_norm, lp_norm, make_grid, random_bandlimited};
use bht::harness::fit_slope;
use bht::operators::{apply_bjm_spectral, DyadicParams, SymbolCache};
use bht::oscsym::OscQuadSpec;
use bht::Band;

fn main() {
    let g = make_grid(-4.0, 8.0, 128).unwrap();
    let out = make_grid(-4.0, 8.0, 64).unwrap();
    let band = Band::new(0.5, 2.0);
    let cache = SymbolCache::new(2, OscQuadSpec::fast());
    let j = 2;
    let mut pts = Vec::new();
    for m in 4..=10 {
        let params = DyadicParams::new(2, j, m).unwrap();
        let mut worst = 0.0_f64;
        for t in 0..40u64 {
            let f = random_bandlimited(g, band, 1.0, derive_seed(1, &[m as i64, t as i64, 0]))
                .unwrap();
            let h = random_bandlimited(g, band, 1.0, derive_seed(1, &[m as i64, t as i64, 1]))
                .unwrap();
            let b = apply_bjm_spectral(&params, &cache, &f, &h, &out).unwrap();
            worst = worst.max(lp_norm(&b, 1.0).unwrap() / (l2_norm(&f) * l2_norm(&h)));
        }
        println!("m = {m:2}: max ratio over 40 trials {worst:.6}");
        pts.push((m as f64, worst));
    }
    let fit = fit_slope(&pts).unwrap();
    println!(
        "fitted slope {:.4} against the guaranteed -1/8 = -0.125",
        fit.slope
    );
}
