use super::runner::TrialRecord;

/// Logistic curve `Pr(recovered | σ) = 1 / (1 + exp(−(a + b·σ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticFit {
    pub intercept: f64,
    pub slope: f64,
    /// σ at which the fitted recovery probability is one half.
    pub sigma_half: f64,
}

/// Maximum-likelihood fit by Newton's method on the per-trial outcomes.
/// Returns `None` when the outcomes do not bracket a transition (all
/// recovered, none recovered, or perfectly separated by σ).
pub fn fit_logistic(records: &[TrialRecord]) -> Option<LogisticFit> {
    let hits = records.iter().filter(|r| r.recovered).count();
    if hits == 0 || hits == records.len() {
        return None;
    }
    // Center and scale σ for conditioning.
    let m = records.len() as f64;
    let mean = records.iter().map(|r| r.sigma).sum::<f64>() / m;
    let sd = (records.iter().map(|r| (r.sigma - mean).powi(2)).sum::<f64>() / m).sqrt();
    if sd == 0.0 {
        return None;
    }
    let (mut a, mut b) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (mut ga, mut gb, mut haa, mut hab, mut hbb) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for r in records {
            let z = (r.sigma - mean) / sd;
            let p = 1.0 / (1.0 + (-(a + b * z)).exp());
            let y = if r.recovered { 1.0 } else { 0.0 };
            let w = p * (1.0 - p);
            ga += y - p;
            gb += (y - p) * z;
            haa += w;
            hab += w * z;
            hbb += w * z * z;
        }
        let det = haa * hbb - hab * hab;
        if !(det > 1e-12) {
            return None;
        }
        let da = (hbb * ga - hab * gb) / det;
        let db = (haa * gb - hab * ga) / det;
        a += da;
        b += db;
        if !(a.is_finite() && b.is_finite()) || b.abs() > 1e6 {
            return None;
        }
        if da.abs().max(db.abs()) < 1e-12 {
            break;
        }
    }
    if b == 0.0 {
        return None;
    }
    let slope = b / sd;
    let intercept = a - b * mean / sd;
    Some(LogisticFit { intercept, slope, sigma_half: -intercept / slope })
}
