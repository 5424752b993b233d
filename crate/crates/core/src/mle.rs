//! Exhaustive maximum-likelihood estimation and recovery verdicts.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{ModelKind, Observation};
use crate::model::{
    canonical_colors, is_equivalent, Assignment, EquivalenceMode, SampleSpace, DEFAULT_ENUMERATION_CAP,
};
use crate::statistics::{ScoreKind, Scorer};

/// Relative tolerance under which two scores count as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// How an estimate is compared with the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoveryMode {
    Exact,
    Partition,
    Phase,
}

impl RecoveryMode {
    /// The natural identifiability of each model.
    pub fn for_model(model: ModelKind) -> RecoveryMode {
        match model {
            ModelKind::VectorT => RecoveryMode::Exact,
            ModelKind::PartitionR => RecoveryMode::Partition,
            ModelKind::GueU | ModelKind::ConjugatedGoeV => RecoveryMode::Phase,
        }
    }

    fn equivalence(self) -> Option<EquivalenceMode> {
        match self {
            RecoveryMode::Exact => None,
            RecoveryMode::Partition => Some(EquivalenceMode::Partition),
            RecoveryMode::Phase => Some(EquivalenceMode::Phase),
        }
    }
}

pub fn recovery_check(estimate: &Assignment, truth: &Assignment, mode: RecoveryMode) -> Result<bool> {
    match mode.equivalence() {
        None => {
            if estimate.n() != truth.n() {
                return Err(Error::Input("estimate and truth differ in n".into()));
            }
            Ok(estimate.colors() == truth.colors())
        }
        Some(eq) => is_equivalent(estimate, truth, eq),
    }
}

#[derive(Debug, Clone)]
pub struct MleResult {
    /// First optimal state in enumeration order.
    pub argbest: Assignment,
    /// Raw (unoriented) score of `argbest`.
    pub best_score: f64,
    /// Distinct equivalence classes attaining the optimum within tolerance.
    pub tie_count: usize,
    /// Best raw score among states outside the class of `argbest`.
    pub runner_up: Option<f64>,
    pub score_kind: ScoreKind,
    pub space: SampleSpace,
    pub states_visited: u64,
}

impl MleResult {
    /// Oriented gap between the optimum and the best competing class.
    pub fn margin(&self) -> Option<f64> {
        let o = self.score_kind.orientation();
        self.runner_up.map(|r| o.orient(self.best_score) - o.orient(r))
    }
}

pub fn mle(obs: &Observation, space: &SampleSpace) -> Result<MleResult> {
    mle_with_cap(obs, space, DEFAULT_ENUMERATION_CAP)
}

/// Scans the space twice: once for the optimum, once to merge ties by the
/// model's equivalence and to find the runner-up class.
pub fn mle_with_cap(obs: &Observation, space: &SampleSpace, cap: u64) -> Result<MleResult> {
    if space.n() != obs.n() {
        return Err(Error::Input(format!("space has n={}, observation n={}", space.n(), obs.n())));
    }
    let kind = ScoreKind::for_problem(obs.model(), space)?;
    let orient = kind.orientation();
    let scorer = Scorer::new(obs, kind, space.palette())?;
    let equivalence = RecoveryMode::for_model(obs.model()).equivalence();
    let canon = |x: &Assignment| -> Result<Vec<usize>> {
        match equivalence {
            Some(eq) => canonical_colors(x, eq),
            None => Ok(x.colors().to_vec()),
        }
    };

    let mut best = f64::NEG_INFINITY;
    let mut visited = 0u64;
    for x in space.enumerate(cap)? {
        visited += 1;
        let s = orient.orient(scorer.eval(x.colors()));
        if s > best {
            best = s;
        }
    }
    if visited == 0 {
        return Err(Error::Input("sample space is empty".into()));
    }

    let tol = TIE_TOLERANCE * best.abs().max(1.0);
    let mut argbest: Option<(Assignment, f64, Vec<usize>)> = None;
    let mut classes = HashSet::new();
    let mut runner_up = f64::NEG_INFINITY;
    for x in space.enumerate(cap)? {
        let s = orient.orient(scorer.eval(x.colors()));
        let c = canon(&x)?;
        if best - s <= tol {
            if argbest.is_none() {
                argbest = Some((x.clone(), s, c.clone()));
            }
            classes.insert(c.clone());
        }
        // Earlier states score below the tie band, so none share argbest's class.
        let own = argbest.as_ref().map(|a| &a.2);
        if own.is_none_or(|own| *own != c) && s > runner_up {
            runner_up = s;
        }
    }
    let (argbest, best_oriented, _) = argbest.expect("optimum is revisited");

    Ok(MleResult {
        argbest,
        best_score: orient.orient(best_oriented),
        tie_count: classes.len(),
        runner_up: runner_up.is_finite().then(|| orient.orient(runner_up)),
        score_kind: kind,
        space: space.clone(),
        states_visited: visited,
    })
}
