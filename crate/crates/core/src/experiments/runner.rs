use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Estimator, ExperimentConfig, Plan};
use crate::error::{Error, Result};
use crate::matrices::{observe, Observation};
use crate::mle::{mle, recovery_check, RecoveryMode};
use crate::model::Assignment;
use crate::rng::{stream, trial_seed, Role};
use crate::sdp::{dual_certificate, round_solution, solve_sdp};
use crate::statistics::Scorer;

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub sigma: f64,
    pub trial: u64,
    pub seed: u64,
    pub recovered: bool,
    /// MLE: oriented gap to the runner-up class when recovered, otherwise
    /// the (negative) oriented gap from the optimum down to the truth.
    /// SDP: λ₂ of the dual certificate when it is PSD, otherwise λ_min.
    pub margin: f64,
    /// Zero unless timing is recorded.
    pub wall_ms: f64,
}

/// Per-σ aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub sigma: f64,
    pub rate: f64,
    pub trials: usize,
    pub mean_margin: f64,
}

/// Draws a uniformly random arrangement of the truth's group sizes.
pub fn sample_truth(plan: &Plan, seed: u64) -> Result<Assignment> {
    let mut colors: Vec<usize> = plan
        .truth_sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    colors.shuffle(&mut stream(seed, Role::Truth));
    Assignment::new(colors, plan.palette.clone())
}

/// The recovery criterion applied to an estimator's output.
pub fn recovery_mode(plan: &Plan) -> RecoveryMode {
    match plan.config.estimator {
        Estimator::Sdp => RecoveryMode::Phase,
        Estimator::Mle => RecoveryMode::for_model(plan.config.model),
    }
}

/// Runs trial `trial` of `cfg` at noise level `sigma`.
pub fn run_trial(cfg: &ExperimentConfig, sigma: f64, trial: u64) -> Result<TrialRecord> {
    run_planned_trial(&cfg.plan()?, sigma, trial)
}

pub fn run_planned_trial(plan: &Plan, sigma: f64, trial: u64) -> Result<TrialRecord> {
    let detail = run_trial_detail(plan, sigma, trial)?;
    Ok(detail.record)
}

/// A trial record together with the objects that produced it.
#[derive(Debug, Clone)]
pub struct TrialDetail {
    pub record: TrialRecord,
    pub truth: Assignment,
    pub estimate: Assignment,
    pub observation: Observation,
    /// Populated by the SDP estimator.
    pub certified: Option<bool>,
    pub converged: Option<bool>,
}

pub fn run_trial_detail(plan: &Plan, sigma: f64, trial: u64) -> Result<TrialDetail> {
    let cfg = &plan.config;
    let started = Instant::now();
    let seed = trial_seed(cfg.seed, trial);
    let truth = sample_truth(plan, seed)?;
    let obs = observe(&truth, cfg.model, sigma, &mut stream(seed, Role::Noise))?;
    let mode = recovery_mode(plan);

    let (estimate, recovered, margin, certified, converged) = match cfg.estimator {
        Estimator::Mle => {
            let res = mle(&obs, &plan.estimator_space)?;
            let recovered = recovery_check(&res.argbest, &truth, mode)?;
            let orient = res.score_kind.orientation();
            let margin = if recovered {
                res.margin().unwrap_or(f64::INFINITY)
            } else {
                let scorer = Scorer::new(&obs, res.score_kind, &plan.palette)?;
                orient.orient(scorer.eval(truth.colors())) - orient.orient(res.best_score)
            };
            (res.argbest, recovered, margin, None, None)
        }
        Estimator::Sdp => {
            let v = obs.hermitian().ok_or_else(|| Error::Model("sdp needs a Hermitian model".into()))?;
            let sol = solve_sdp(v, &cfg.solver)?;
            let estimate = round_solution(&sol.x, cfg.k)?;
            let recovered = recovery_check(&estimate, &truth, mode)?;
            let cert = dual_certificate(v, &truth)?;
            let psd = cert.lambda_min >= -1e-8 * cert.s.frobenius_norm();
            let margin = if psd { cert.lambda_second } else { cert.lambda_min };
            (estimate, recovered, margin, Some(cert.certified), Some(sol.converged))
        }
    };
    let wall_ms = if cfg.record_timing { started.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok(TrialDetail {
        record: TrialRecord { sigma, trial, seed, recovered, margin, wall_ms },
        truth,
        estimate,
        observation: obs,
        certified,
        converged,
    })
}

/// Result of a full sweep.
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub plan: Plan,
    /// Ordered by σ grid position, then trial index.
    pub records: Vec<TrialRecord>,
    /// One row per σ, in grid order.
    pub summary: Vec<SummaryRow>,
}

/// Runs every `(σ, trial)` pair on a pool of `cfg.threads` workers (0 uses
/// the rayon default) and aggregates in grid order.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    let plan = cfg.plan()?;
    let jobs: Vec<(f64, u64)> = plan
        .sigmas
        .iter()
        .flat_map(|&s| (0..cfg.trials as u64).map(move |t| (s, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|&(s, t)| run_planned_trial(&plan, s, t))
            .collect::<Result<Vec<_>>>()
    })?;
    let summary = summarize(&plan.sigmas, &records);
    Ok(SweepOutcome { plan, records, summary })
}

/// Aggregates records into one row per grid σ.
pub fn summarize(sigmas: &[f64], records: &[TrialRecord]) -> Vec<SummaryRow> {
    sigmas
        .iter()
        .map(|&s| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.sigma == s).collect();
            let trials = rows.len();
            let hits = rows.iter().filter(|r| r.recovered).count();
            let finite: Vec<f64> = rows.iter().map(|r| r.margin).filter(|m| m.is_finite()).collect();
            let mean_margin = if finite.is_empty() {
                f64::NAN
            } else {
                finite.iter().sum::<f64>() / finite.len() as f64
            };
            SummaryRow {
                sigma: s,
                rate: if trials == 0 { 0.0 } else { hits as f64 / trials as f64 },
                trials,
                mean_margin,
            }
        })
        .collect()
}
