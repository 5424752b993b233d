//! Seeded sweep around the vector-model threshold, read from a TOML config.
//! Pass a config path to run something else:
//! `cargo run --release --example phase_transition_sweep -- examples/configs/gue.toml`

use std::path::PathBuf;

use kpartite::experiments::{fit_logistic, sweep, ExperimentConfig};

fn main() -> kpartite::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/vector.toml")));
    let cfg = ExperimentConfig::load(&path)?;
    let out = sweep(&cfg)?;
    let crit = out.plan.threshold.sigma_sq_critical;
    println!("{} {} n={} k={}: critical σ² = {crit:.4}", cfg.model, out.plan.threshold.formula_id, cfg.n, cfg.k);
    println!("{:>8} {:>8} {:>6}  ", "σ²/σ²_c", "rate", "");
    for row in &out.summary {
        let bar = "#".repeat((row.rate * 40.0).round() as usize);
        println!("{:>8.3} {:>8.3}  {bar}", row.sigma * row.sigma / crit, row.rate);
    }
    if let Some(fit) = fit_logistic(&out.records) {
        println!("logistic 50% crossing at σ²/σ²_c = {:.3}", fit.sigma_half * fit.sigma_half / crit);
    }
    Ok(())
}
