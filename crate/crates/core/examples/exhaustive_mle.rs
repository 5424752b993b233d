//! Exhaustive maximum-likelihood search on a small partition-model instance,
//! swept over a few noise levels.

use std::sync::Arc;

use kpartite::matrices::{observe, ModelKind};
use kpartite::mle::{mle, recovery_check, RecoveryMode};
use kpartite::model::{Assignment, Palette, SampleSpace};
use kpartite::rng::{stream, trial_seed, Role};
use kpartite::statistics::{balanced_sizes, threshold, FormulaId};

fn main() -> kpartite::Result<()> {
    let (n, k) = (10, 2);
    let palette = Arc::new(Palette::real(vec![0.0, 1.0])?);
    let truth = Assignment::new(vec![0, 1, 0, 1, 1, 0, 0, 1, 1, 0], palette.clone())?;
    let report = threshold(FormulaId::Thm2, n, &palette, Some(&balanced_sizes(n, k)?))?;
    println!("critical σ² = {:.4}", report.sigma_sq_critical);

    for space in [SampleSpace::omega(n, palette.clone())?, SampleSpace::fixed_counts(vec![5, 5], palette.clone())?] {
        println!("space {:?} ({} states)", space.kind(), space.size());
        for mult in [0.25, 1.0, 4.0] {
            let sigma = (mult * report.sigma_sq_critical).sqrt();
            let mut hits = 0;
            for t in 0..20 {
                let seed = trial_seed(11, t);
                let obs = observe(&truth, ModelKind::PartitionR, sigma, &mut stream(seed, Role::Noise))?;
                let res = mle(&obs, &space)?;
                hits += recovery_check(&res.argbest, &truth, RecoveryMode::Partition)? as usize;
            }
            println!("  σ²/σ²_c = {mult:<4} recovered {hits}/20");
        }
    }
    Ok(())
}
