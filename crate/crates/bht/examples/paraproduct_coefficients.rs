//! Box Fourier coefficients of the dominated-frequency remainder symbol:
//! smallness in the subordinate scale and decay past the window band.

use bht::paraproducts::{coeff_at, fourier_coeffs_c1, max_coeff};

fn main() {
    let (d, m) = (2, 2);
    for m_prime in [-4, -8, -12] {
        let c = fourier_coeffs_c1(d, m, m_prime, 12).unwrap();
        println!(
            "m' = {m_prime:3}: peak |C| = {:.3e}, |C(8,8)| = {:.3e}",
            max_coeff(&c),
            coeff_at(&c, 8, 8).norm()
        );
    }
    let c = fourier_coeffs_c1(d, m, -10, 48).unwrap();
    let peak = max_coeff(&c);
    println!("\ndiagonal profile at m' = -10 (relative to peak):");
    for n in [0i64, 1, 2, 4, 8, 16, 32, 48] {
        println!("  |C({n:2},{n:2})| / peak = {:.3e}", coeff_at(&c, n, n).norm() / peak);
    }
}
