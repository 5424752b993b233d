//! Largest eigenvalue and maximal row sum of GOE samples against their
//! leading-order scales.

use kpartite::linalg::symmetric_eigenvalues;
use kpartite::matrices::sample_goe;
use kpartite::sdp::{certify_condition_c1, max_abs_row_sum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> kpartite::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("{:>5} {:>10} {:>8} {:>8} {:>12} {:>14}", "n", "λ_max", "2√n", "√(2n)", "max row sum", "√(2n ln n)");
    for n in [50, 100, 200, 400] {
        let w = sample_goe(n, &mut rng);
        let top = *symmetric_eigenvalues(&w)?.last().expect("n > 0");
        let nf = n as f64;
        println!(
            "{n:>5} {top:>10.2} {:>8.2} {:>8.2} {:>12.2} {:>14.2}",
            2.0 * nf.sqrt(),
            (2.0 * nf).sqrt(),
            max_abs_row_sum(&w),
            (2.0 * nf * nf.ln()).sqrt()
        );
    }

    let n = 256;
    let w = sample_goe(n, &mut rng);
    let unit = (n as f64).sqrt() / (2.0 * (n as f64).ln()).sqrt();
    for mult in [0.5, 1.0, 2.0] {
        let sigma = mult * unit;
        let c1 = certify_condition_c1(&w, sigma, n)?;
        println!(
            "σ = {mult}·σ₀: σ‖ΔW‖ = {:.1} (majorant {:.1}) ≤ n = {n}: {}",
            c1.lhs,
            sigma * c1.majorant,
            c1.holds
        );
    }
    Ok(())
}
