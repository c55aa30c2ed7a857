//! The tuned polynomial whose sliver geometry pins the admissible exponent:
//! intersection-point enclosures and the norm-mass growth rate in the sliver
//! width.

use bht::sharpness::{
    default_deltas, intersection_roots, sharpness_scan, CounterexampleSpec,
};

fn main() {
    let spec = CounterexampleSpec::new(2, 2, 1e4, 1e-6).unwrap();
    let (t1, t2) = intersection_roots(&spec).unwrap();
    println!("intersection abscissas: t1 = {t1:.9}, t2 = {t2:.9}");
    println!("root scale (A n! delta)^(1/n) = {:.9}", spec.root_scale());

    let scan = sharpness_scan(2, 2, 1e4, 0.5, 1.0, 1.0, &default_deltas(2)).unwrap();
    println!("\n  delta        mass           guaranteed lower bound");
    for p in &scan.points {
        println!("  {:.1e}   {:.6e}   {:.6e}", p.delta, p.lhs, p.lower_bound);
    }
    println!(
        "\nfitted exponent {:.4} vs predicted r + 1/n = {:.4}",
        scan.fitted_exponent, scan.expected_exponent
    );
}
