//! Complex SDP on the conjugated-GOE model: solve, round, and check the
//! analytic dual certificate across noise levels.

use std::sync::Arc;

use kpartite::matrices::{build_p, observe, ModelKind};
use kpartite::mle::{recovery_check, RecoveryMode};
use kpartite::model::{Assignment, Palette};
use kpartite::rng::{stream, trial_seed, Role};
use kpartite::sdp::{dual_certificate, round_solution, solve_sdp, SdpParams};

fn main() -> kpartite::Result<()> {
    let (n, k) = (64, 4);
    let palette = Arc::new(Palette::roots(k)?);
    let truth = Assignment::new((0..n).map(|i| (i * 7) % k).collect(), palette)?;
    let unit = (n as f64).sqrt() / (2.0 * (n as f64).ln()).sqrt();
    let planted = build_p(&truth)?;

    println!("{:>6} {:>9} {:>10} {:>10} {:>6} {:>10} {:>9}", "σ/σ₀", "certified", "λ_min", "λ₂", "iters", "‖X−yyᴴ‖/n", "recovered");
    for mult in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let seed = trial_seed(1, 0);
        let obs = observe(&truth, ModelKind::ConjugatedGoeV, mult * unit, &mut stream(seed, Role::Noise))?;
        let v = obs.hermitian().expect("hermitian model");
        let cert = dual_certificate(v, &truth)?;
        let sol = solve_sdp(v, &SdpParams { max_iters: 400, ..SdpParams::default() })?;
        let est = round_solution(&sol.x, k)?;
        println!(
            "{mult:>6} {:>9} {:>10.2} {:>10.2} {:>6} {:>10.2e} {:>9}",
            cert.certified,
            cert.lambda_min,
            cert.lambda_second,
            sol.iterations,
            sol.x.sub(&planted).frobenius_norm() / n as f64,
            recovery_check(&est, &truth, RecoveryMode::Phase)?
        );
    }
    Ok(())
}
