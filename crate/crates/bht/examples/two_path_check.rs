//! The frequency-side double sum and the time-side kernel quadrature compute
//! the same scale piece; their gap is pure numerics.

use bht::foundation::{l2_norm, make_grid, random_bandlimited};
use bht::operators::{apply_tjm_freq, apply_tjm_time, tjm_grids, DyadicParams, SymbolCache};
use bht::oscsym::OscQuadSpec;
use bht::{Band, SampledSignal};

fn main() {
    let d = 2;
    let cache = SymbolCache::new(d, OscQuadSpec::default());
    let out = make_grid(0.0, 1.0, 16).unwrap();
    for (j, m) in [(2, 4), (-2, 5), (4, 6)] {
        let params = DyadicParams::new(d, j, m).unwrap();
        let (gf, bf, gg, bg) = tjm_grids(&params).unwrap();
        let f = random_bandlimited(gf, bf, 1.0, 11).unwrap();
        let g = random_bandlimited(gg, bg, 1.0, 12).unwrap();
        let a = apply_tjm_freq(&params, &cache, &f, &g, &out).unwrap();
        let b = apply_tjm_time(&params, &f, &g, &out, &OscQuadSpec::default()).unwrap();
        let diff = SampledSignal::new(
            out,
            a.samples
                .iter()
                .zip(b.samples.iter())
                .map(|(x, y)| x - y)
                .collect(),
            Band::full(&out),
        )
        .unwrap();
        println!(
            "(j, m) = ({j:2}, {m}): relative L2 gap {:.3e}",
            l2_norm(&diff) / l2_norm(&a)
        );
    }
}
