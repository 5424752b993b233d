//! Gaussian tail bounds and the levels bracketing the maximum of N normals,
//! with a quick simulation of the maximum.

use kpartite::statistics::{gaussian_max_bounds, gaussian_tail_bounds};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> kpartite::Result<()> {
    for x in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let (lo, hi) = gaussian_tail_bounds(x)?;
        println!("Pr(G > {x}) in [{lo:.4e}, {hi:.4e}]");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (count, eps) in [(100u64, 0.1), (1000, 0.2), (10_000, 0.2), (10_000, 0.5)] {
        let b = gaussian_max_bounds(count, eps)?;
        let trials = 500;
        let (mut above, mut below) = (0, 0);
        for _ in 0..trials {
            let m = (0..count).map(|_| rng.sample::<f64, _>(StandardNormal)).fold(f64::MIN, f64::max);
            above += (m > b.level_hi) as usize;
            below += (m < b.level_lo) as usize;
        }
        println!(
            "N={count} ε={eps}: Pr(max > {:.3}) ≤ {:.3} (seen {:.3}); Pr(max < {:.3}) ≤ {:.2e} if independence condition ({}) (seen {:.3})",
            b.level_hi,
            b.upper_prob,
            above as f64 / trials as f64,
            b.level_lo,
            b.lower_prob,
            if b.indep_condition_holds { "holds" } else { "fails" },
            below as f64 / trials as f64
        );
    }
    Ok(())
}
