//! Square-root decay of the oscillatory symbol along a ray through a
//! critical-point configuration, with the closed stationary-phase formula
//! tracking the quadrature.

use bht::harness::fit_slope;
use bht::oscsym::{stationary_md, symbol_md, OscQuadSpec};

fn main() {
    let spec = OscQuadSpec::default();
    let (xi0, eta0) = (-2.0, 1.1);
    let mut pts = Vec::new();
    println!(" m   |symbol|      stationary-phase    rel gap");
    for m in 4..=12 {
        let s = 2f64.powi(m);
        let exact = symbol_md(2, s * xi0, s * eta0, &spec);
        let approx = stationary_md(2, m, xi0, eta0).unwrap();
        let gap = (exact.value - approx).norm() / exact.abs();
        println!(
            "{m:2}   {:.6e}   {:.6e}   {gap:.2e}",
            exact.abs(),
            approx.norm()
        );
        pts.push((m as f64, exact.abs()));
    }
    let fit = fit_slope(&pts).unwrap();
    println!("fitted log2 slope: {:.4} (r2 = {:.5})", fit.slope, fit.r2);
}
