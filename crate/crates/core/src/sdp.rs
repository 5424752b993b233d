//! Complex SDP relaxation `max Re⟨V, X⟩ s.t. X ⪰ 0, X_ii = 1`, solved on
//! its real embedding, plus rounding and the analytic dual certificate.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{psd_projection, symmetric_spectral_norm, HermitianMatrix, RealMatrix};
use crate::matrices::{laplacian, laplacian_real};
use crate::model::{Assignment, Palette};

/// Hermitian input may deviate from exact symmetry by this much, relative to
/// its largest entry.
const HERMITIAN_TOLERANCE: f64 = 1e-12;

fn check_hermitian(v: &HermitianMatrix) -> Result<()> {
    let scale = v.re().iter().chain(v.im()).fold(1.0f64, |m, x| m.max(x.abs()));
    if v.hermitian_residual() > HERMITIAN_TOLERANCE * scale {
        return Err(Error::Input("matrix is not Hermitian".into()));
    }
    Ok(())
}

/// `[[V₁, −V₂], [V₂, V₁]]` for `V = V₁ + iV₂`; `⟨Ṽ, X̃⟩ = 2·Re⟨V, X⟩`.
pub fn real_embed(v: &HermitianMatrix) -> Result<RealMatrix> {
    check_hermitian(v)?;
    Ok(v.real_embedding())
}

/// Inverse of [`real_embed`].
pub fn extract(m: &RealMatrix) -> Result<HermitianMatrix> {
    HermitianMatrix::from_real_embedding(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdpParams {
    pub max_iters: usize,
    /// Penalty parameter; `None` picks `max(1, ‖V‖_F / n)`.
    pub rho: Option<f64>,
    /// Over-relaxation factor in `(0, 2)`.
    pub alpha: f64,
    /// Primal and dual residual tolerance, multiplied by `n`.
    pub tol: f64,
    /// Constraint residual tolerance, multiplied by `n`.
    pub tol_constraint: f64,
    /// Start from the rank-one point found by a spectral estimate refined by
    /// the generalized power method, with the matching dual guess.
    pub warm_start: bool,
}

impl Default for SdpParams {
    fn default() -> Self {
        SdpParams {
            max_iters: 5000,
            rho: None,
            alpha: 1.6,
            tol: 1e-7,
            tol_constraint: 1e-9,
            warm_start: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: HermitianMatrix,
    pub iterations: usize,
    /// `‖X − Z‖_F` between the affine and PSD iterates, per complex entry.
    pub primal_residual: f64,
    /// `ρ‖Z − Z_prev‖_F`, per complex entry.
    pub dual_residual: f64,
    /// Worst unit-diagonal or block-tie violation of the PSD iterate.
    pub constraint_residual: f64,
    pub converged: bool,
    /// `Re⟨V, X⟩`.
    pub objective: f64,
}

/// ADMM with over-relaxation on the real embedding. The affine step projects
/// onto the block-tied matrices with unit diagonal; the cone step clips
/// negative eigenvalues to zero.
pub fn solve_sdp(v: &HermitianMatrix, params: &SdpParams) -> Result<SdpSolution> {
    check_hermitian(v)?;
    if !(params.alpha > 0.0 && params.alpha < 2.0) {
        return Err(Error::Input("alpha must lie in (0, 2)".into()));
    }
    let n = v.n();
    if n == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    let rho = params.rho.unwrap_or_else(|| (v.frobenius_norm() / n as f64).max(1.0));
    if !(rho > 0.0) {
        return Err(Error::Input("rho must be positive".into()));
    }
    let vt = v.real_embedding();
    let v_over_rho = vt.scaled(1.0 / rho);
    let (mut z, mut u) = if params.warm_start {
        let x = power_phases(v)?;
        let s = certificate_matrix(v, &x);
        (
            HermitianMatrix::outer(&x).real_embedding(),
            s.real_embedding().scaled(-0.5 / rho),
        )
    } else {
        (RealMatrix::identity(2 * n), RealMatrix::zeros(2 * n))
    };

    let tol = params.tol * n as f64;
    let tol_c = params.tol_constraint * n as f64;
    let alpha = params.alpha;
    let mut primal = f64::INFINITY;
    let mut dual = f64::INFINITY;
    let mut constraint = constraint_residual(&z);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iters {
        iterations += 1;
        let mut x = z.sub(&u).add(&v_over_rho);
        project_affine(&mut x);
        let xhat = x.scaled(alpha).add(&z.scaled(1.0 - alpha));
        let z_next = psd_projection(&xhat.add(&u))?;
        u = u.add(&xhat).sub(&z_next);
        primal = x.sub(&z_next).frobenius_norm() / std::f64::consts::SQRT_2;
        dual = rho * z_next.sub(&z).frobenius_norm() / std::f64::consts::SQRT_2;
        z = z_next;
        constraint = constraint_residual(&z);
        if primal < tol && dual < tol && constraint < tol_c {
            converged = true;
            break;
        }
    }
    let x = extract(&z)?;
    let objective = v.inner_re(&x);
    Ok(SdpSolution {
        x,
        iterations,
        primal_residual: primal,
        dual_residual: dual,
        constraint_residual: constraint,
        converged,
        objective,
    })
}

/// Orthogonal projection onto `{[[A, −B], [B, A]] : diag(A) = 1}`.
fn project_affine(m: &mut RealMatrix) {
    let n = m.n() / 2;
    for p in 0..n {
        for q in 0..n {
            let a = 0.5 * (m[(p, q)] + m[(p + n, q + n)]);
            let b = 0.5 * (m[(p + n, q)] - m[(p, q + n)]);
            let a = if p == q { 1.0 } else { a };
            m[(p, q)] = a;
            m[(p + n, q + n)] = a;
            m[(p + n, q)] = b;
            m[(p, q + n)] = -b;
        }
    }
}

fn constraint_residual(m: &RealMatrix) -> f64 {
    let n = m.n() / 2;
    let mut worst: f64 = 0.0;
    for p in 0..n {
        worst = worst.max((m[(p, p)] - 1.0).abs());
        for q in 0..n {
            worst = worst.max((m[(p, q)] - m[(p + n, q + n)]).abs());
            worst = worst.max((m[(p, q + n)] + m[(p + n, q)]).abs());
        }
    }
    worst
}

/// Unit-modulus vector from the top eigenvector of `v`, refined by
/// `x ← phase(Vx)` until it stops moving.
fn power_phases(v: &HermitianMatrix) -> Result<Vec<(f64, f64)>> {
    let (_, vectors) = v.eigen()?;
    let mut x = unit_phases(vectors.last().expect("n ≥ 1"));
    for _ in 0..1000 {
        let next = unit_phases(&v.matvec(&x));
        let moved = x
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a.0 - b.0).hypot(a.1 - b.1)));
        x = next;
        if moved < 1e-13 {
            break;
        }
    }
    Ok(x)
}

/// Entrywise `z / |z|`, with zeros mapped to 1.
fn unit_phases(v: &[(f64, f64)]) -> Vec<(f64, f64)> {
    v.iter()
        .map(|&(a, b)| {
            let r = a.hypot(b);
            if r > 0.0 {
                (a / r, b / r)
            } else {
                (1.0, 0.0)
            }
        })
        .collect()
}

/// Top eigenvector of `X`, normalized to unit modulus, anchored so vertex 0
/// has phase 0, and quantized to the nearest `k`-th root of unity.
pub fn round_solution(x: &HermitianMatrix, k: usize) -> Result<Assignment> {
    let palette = Arc::new(Palette::roots(k)?);
    let (_, vectors) = x.eigen()?;
    let top = unit_phases(vectors.last().ok_or_else(|| Error::Input("empty matrix".into()))?);
    let (ar, ai) = top[0];
    let turn = std::f64::consts::TAU;
    let colors = top
        .iter()
        .map(|&(a, b)| {
            // Multiply by the conjugate of the anchor.
            let (re, im) = (a * ar + b * ai, b * ar - a * ai);
            let frac = im.atan2(re).rem_euclid(turn) / turn;
            ((frac * k as f64).round() as usize) % k
        })
        .collect();
    Assignment::new(colors, palette)
}

/// `S = 2·diag(x)·Δ(diag(x̄)·V·diag(x))·diag(x̄)` for a unit-modulus `x`,
/// with the diagonal of the Laplacian restricted to its real part.
pub fn certificate_matrix(v: &HermitianMatrix, x: &[(f64, f64)]) -> HermitianMatrix {
    let conj: Vec<(f64, f64)> = x.iter().map(|&(a, b)| (a, -b)).collect();
    let mut lap = laplacian(&v.diag_sandwich(&conj, x));
    for i in 0..v.n() {
        let (re, _) = lap.get(i, i);
        lap.set(i, i, (re, 0.0));
    }
    lap.diag_sandwich(x, &conj).scaled(2.0)
}

#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub s: HermitianMatrix,
    pub lambda_min: f64,
    pub lambda_second: f64,
    /// `‖S·y‖₂`.
    pub null_vector_residual: f64,
    pub certified: bool,
}

/// Builds the dual matrix for the candidate `y` and checks that it is PSD
/// with `y` spanning its kernel.
pub fn dual_certificate(v: &HermitianMatrix, y: &Assignment) -> Result<CertificateReport> {
    if v.n() != y.n() {
        return Err(Error::Input(format!("matrix has n={}, assignment n={}", v.n(), y.n())));
    }
    check_hermitian(v)?;
    let n = y.n();
    let yv = y.unit_values()?;
    let s = certificate_matrix(v, &yv);
    let values = s.eigenvalues()?;
    let lambda_min = values[0];
    let lambda_second = values.get(1).copied().unwrap_or(f64::INFINITY);
    let null_vector_residual = s.matvec(&yv).iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    let norm = s.frobenius_norm();
    let certified = lambda_min >= -1e-8 * norm
        && lambda_second > 1e-6 * n as f64
        && null_vector_residual <= 1e-8 * norm * (n as f64).sqrt();
    Ok(CertificateReport { s, lambda_min, lambda_second, null_vector_residual, certified })
}

/// Largest eigenvalue modulus of a Hermitian matrix.
pub fn spectral_norm(m: &HermitianMatrix) -> Result<f64> {
    check_hermitian(m)?;
    let values = m.eigenvalues()?;
    Ok(values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// Largest eigenvalue modulus of a real symmetric matrix.
pub fn spectral_norm_real(m: &RealMatrix) -> Result<f64> {
    let scale = m.data().iter().fold(1.0f64, |a, x| a.max(x.abs()));
    if m.symmetry_residual() > HERMITIAN_TOLERANCE * scale {
        return Err(Error::Input("matrix is not symmetric".into()));
    }
    symmetric_spectral_norm(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionC1 {
    /// `σ·‖Δ(W_s)‖`.
    pub lhs: f64,
    /// `lhs ≤ n`.
    pub holds: bool,
    /// `max_i |Σ_j W_s(i,j)| + ‖W_s‖`, an upper bound on `‖Δ(W_s)‖`.
    pub majorant: f64,
    pub max_row_sum: f64,
}

/// Sufficient condition for the certificate: `σ·‖Δ(W_s)‖ ≤ n`.
pub fn certify_condition_c1(w: &RealMatrix, sigma: f64, n: usize) -> Result<ConditionC1> {
    if w.n() != n {
        return Err(Error::Input(format!("matrix has n={}, expected {n}", w.n())));
    }
    let lap = laplacian_real(w);
    let lap_norm = spectral_norm_real(&lap)?;
    let w_norm = spectral_norm_real(w)?;
    let max_row_sum = max_abs_row_sum(w);
    let lhs = sigma * lap_norm;
    Ok(ConditionC1 { lhs, holds: lhs <= n as f64, majorant: max_row_sum + w_norm, max_row_sum })
}

/// `max_i |Σ_j W(i,j)|`.
pub fn max_abs_row_sum(w: &RealMatrix) -> f64 {
    w.row_sums().iter().fold(0.0f64, |m, s| m.max(s.abs()))
}
