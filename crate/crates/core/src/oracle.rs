//! Exhaustive small-instance checks of the closed forms against their
//! matrix definitions.

use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{HermitianMatrix, RealMatrix};
use crate::matrices::{build_g, build_k, build_p};
use crate::model::{contingency, Assignment, Palette, SampleSpace, DEFAULT_ENUMERATION_CAP};
use crate::statistics::{
    phase_histogram_contingency, phase_histogram_pairwise, separation, SeparationKind,
};

/// Outcome of one identity over every pair of a family of spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// Largest absolute discrepancy seen.
    pub worst: f64,
}

impl OracleCheck {
    fn new(name: &'static str) -> Self {
        OracleCheck { name, cases: 0, failures: 0, worst: 0.0 }
    }

    fn record(&mut self, got: f64, want: f64, tol: f64) {
        self.cases += 1;
        let diff = (got - want).abs();
        self.worst = self.worst.max(diff);
        if diff > tol {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Dyadic colors, so every sum in the identities is exact in `f64`.
fn dyadic_palette(k: usize) -> Arc<Palette> {
    let values = [0.0, 1.0, -1.5, 2.25, 0.5];
    Arc::new(Palette::real(values[..k].to_vec()).expect("distinct"))
}

fn members(space: &SampleSpace) -> Result<Vec<Assignment>> {
    Ok(space.enumerate(DEFAULT_ENUMERATION_CAP)?.collect())
}

/// Runs every identity over all pairs of `Ω` (real and root palettes), for
/// `2 ≤ k ≤ max_k` and `k ≤ n ≤ max_n`. The M and U checks take the pairs
/// with equal group sizes.
pub fn run_oracle_suite(max_n: usize, max_k: usize) -> Result<Vec<OracleCheck>> {
    let mut m = OracleCheck::new("M closed form = -<G(y), G(x)-G(y)>");
    let mut q = OracleCheck::new("Q closed form = |G(x)-G(y)|^2");
    let mut pg = OracleCheck::new("<G(x),G(y)> contingency identity");
    let mut l = OracleCheck::new("L closed form = |K(x)-K(y)|^2");
    let mut u = OracleCheck::new("U closed form = <K(y), K(y)-K(x)>");
    let mut ul = OracleCheck::new("U = L/2 on fixed counts");
    let mut j = OracleCheck::new("J closed form = n^2 - Re<P(y),P(x)>");
    let mut jr = OracleCheck::new("J contingency and pairwise histograms agree");

    for k in 2..=max_k {
        for n in k..=max_n {
            let palette = dyadic_palette(k);
            let omega = members(&SampleSpace::omega(n, palette.clone())?)?;
            let gs: Vec<RealMatrix> = omega.iter().map(build_g).collect::<Result<_>>()?;
            let ks: Vec<RealMatrix> = omega.iter().map(build_k).collect();
            for (a, x) in omega.iter().enumerate() {
                for (b, y) in omega.iter().enumerate() {
                    let dg = gs[a].sub(&gs[b]);
                    q.record(separation(x, y, SeparationKind::Q)?.mean_gap, dg.inner(&dg), 0.0);
                    let dk = ks[a].sub(&ks[b]);
                    l.record(separation(x, y, SeparationKind::L)?.mean_gap, dk.inner(&dk), 0.0);
                    pg.record(pgxy(x, y)?, gs[a].inner(&gs[b]), 0.0);
                    if x.group_sizes() == y.group_sizes() {
                        let mm = -gs[b].inner(&dg);
                        m.record(separation(x, y, SeparationKind::M)?.mean_gap, mm, 0.0);
                        let uu = ks[b].inner(&ks[b].sub(&ks[a]));
                        let us = separation(x, y, SeparationKind::U)?.mean_gap;
                        u.record(us, uu, 0.0);
                        ul.record(us, 0.5 * dk.inner(&dk), 0.0);
                    }
                }
            }

            let roots = Arc::new(Palette::roots(k)?);
            let theta = members(&SampleSpace::omega(n, roots)?)?;
            let ps: Vec<HermitianMatrix> = theta.iter().map(build_p).collect::<Result<_>>()?;
            let tol = 1e-9 * (n * n) as f64;
            for (a, x) in theta.iter().enumerate() {
                for (b, y) in theta.iter().enumerate() {
                    let want = (n * n) as f64 - ps[b].inner_re(&ps[a]);
                    j.record(separation(x, y, SeparationKind::J)?.mean_gap, want, tol);
                    let same = phase_histogram_contingency(x, y)? == phase_histogram_pairwise(x, y);
                    jr.record(if same { 0.0 } else { 1.0 }, 0.0, 0.0);
                }
            }
        }
    }
    Ok(vec![m, q, pg, l, u, ul, j, jr])
}

/// `2n·Σ t_ij c_i c_j − 2(Σ n_i(x) c_i)(Σ n_j(y) c_j)`.
fn pgxy(x: &Assignment, y: &Assignment) -> Result<f64> {
    let t = contingency(x, y)?;
    let c = x.palette().real_values().expect("real palette").to_vec();
    let k = t.k();
    let n = t.n() as f64;
    let mut cross = 0.0;
    for i in 0..k {
        for jj in 0..k {
            cross += t.get(i, jj) as f64 * c[i] * c[jj];
        }
    }
    let sx: f64 = (0..k).map(|i| t.row_marginals()[i] as f64 * c[i]).sum();
    let sy: f64 = (0..k).map(|i| t.col_marginals()[i] as f64 * c[i]).sum();
    Ok(2.0 * n * cross - 2.0 * sx * sy)
}
