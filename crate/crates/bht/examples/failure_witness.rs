//! Why the TT*-style estimate cannot hold past the regime boundary: a chirp
//! matched to the kernel phase keeps the normalized trilinear value pinned
//! near its maximum at every scale, while any random input decays.

use bht::harness::fit_slope;
use bht::oscsym::OscQuadSpec;
use bht::trilinear::{failure_witness, failure_witness_random};

fn main() {
    let spec = OscQuadSpec::fast();
    let mut matched = Vec::new();
    let mut random = Vec::new();
    println!(" m   matched chirp   random input");
    for m in 4..=12 {
        let w = failure_witness(2, m, &spec).unwrap().normalized;
        let r = failure_witness_random(2, m, 7, &spec).unwrap().normalized;
        println!("{m:2}   {w:.6}        {r:.6}");
        matched.push((m as f64, w));
        random.push((m as f64, r));
    }
    let fw = fit_slope(&matched).unwrap();
    let fr = fit_slope(&random).unwrap();
    println!("matched-chirp slope {:.4} (no decay)", fw.slope);
    println!("random-input slope  {:.4} (decay restored)", fr.slope);
}
