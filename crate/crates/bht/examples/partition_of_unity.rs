//! The dyadic annulus windows sum to one away from the origin, and partial
//! sums telescope to the low-pass plateau.

use bht::bumps::{check_partition, theta};

fn main() {
    let mut worst = 0.0_f64;
    for k in 0..2000 {
        let xi = 2f64.powf(-18.0 + 36.0 * k as f64 / 1999.0);
        worst = worst.max((check_partition(xi, -20, 20).unwrap() - 1.0).abs());
        worst = worst.max((check_partition(-xi, -20, 20).unwrap() - 1.0).abs());
    }
    println!("max |partition - 1| over 4000 log-spaced points: {worst:.3e}");

    let xi = 3.0;
    for m0 in [-4, 0, 4] {
        let partial = check_partition(xi, -20, m0).unwrap();
        let plateau = theta(xi / 2f64.powi(m0 + 1));
        println!("partial sum to m0 = {m0:2}: {partial:.12}  plateau value: {plateau:.12}");
    }
}
