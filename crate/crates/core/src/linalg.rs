//! Dense square matrices and a symmetric eigensolver.
//!
//! Hermitian matrices keep separate real and imaginary planes over the full
//! square. Their spectra are taken through the real embedding
//! `A + iB ↦ [[A, −B], [B, A]]`, which repeats every eigenvalue twice.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Row-major `n × n` real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        RealMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix rows must form a square".into()));
        }
        Ok(RealMatrix { n, data: rows.concat() })
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Input(format!("expected {} entries, got {}", n * n, data.len())));
        }
        Ok(RealMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// `max |M_ij − M_ji|`.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `Σ_ij A_ij B_ij`.
    pub fn inner(&self, other: &RealMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        RealMatrix { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, other: &RealMatrix) -> Self {
        RealMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &RealMatrix) -> Self {
        RealMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Complex `n × n` matrix in split real/imaginary planes.
///
/// Builders in this crate produce exactly Hermitian matrices;
/// [`HermitianMatrix::from_parts`] does not validate, and operations that
/// require Hermitian input check [`HermitianMatrix::hermitian_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.re[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_parts(n: usize, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != n * n || im.len() != n * n {
            return Err(Error::Input("complex matrix planes must hold n² entries".into()));
        }
        Ok(HermitianMatrix { n, re, im })
    }

    pub fn from_real(m: &RealMatrix) -> Self {
        HermitianMatrix { n: m.n, re: m.data.clone(), im: vec![0.0; m.n * m.n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> (f64, f64)) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = f(i, j);
                out.re[i * n + j] = a;
                out.im[i * n + j] = b;
            }
        }
        out
    }

    /// Outer product `v v̄ᵗ`.
    pub fn outer(v: &[(f64, f64)]) -> Self {
        Self::from_fn(v.len(), |a, b| {
            let (ar, ai) = v[a];
            let (br, bi) = v[b];
            (ar * br + ai * bi, ai * br - ar * bi)
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn re(&self) -> &[f64] {
        &self.re
    }

    pub fn im(&self) -> &[f64] {
        &self.im
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[i * self.n + j], self.im[i * self.n + j])
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: (f64, f64)) {
        self.re[i * self.n + j] = v.0;
        self.im[i * self.n + j] = v.1;
    }

    pub fn real_part(&self) -> RealMatrix {
        RealMatrix { n: self.n, data: self.re.clone() }
    }

    /// `max |M_ij − conj(M_ji)|` over all entries, diagonal included.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            worst = worst.max(self.im[i * n + i].abs());
            for j in i + 1..n {
                let dr = self.re[i * n + j] - self.re[j * n + i];
                let di = self.im[i * n + j] + self.im[j * n + i];
                worst = worst.max(dr.hypot(di));
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.re
            .iter()
            .chain(&self.im)
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    /// `Re⟨A, B⟩ = Re Σ A_ij conj(B_ij)`.
    pub fn inner_re(&self, other: &HermitianMatrix) -> f64 {
        let r: f64 = self.re.iter().zip(&other.re).map(|(a, b)| a * b).sum();
        let i: f64 = self.im.iter().zip(&other.im).map(|(a, b)| a * b).sum();
        r + i
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix {
            n: self.n,
            re: self.re.iter().zip(&other.re).map(|(a, b)| a - b).collect(),
            im: self.im.iter().zip(&other.im).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        HermitianMatrix {
            n: self.n,
            re: self.re.iter().zip(&other.re).map(|(a, b)| a + b).collect(),
            im: self.im.iter().zip(&other.im).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        HermitianMatrix {
            n: self.n,
            re: self.re.iter().map(|v| v * s).collect(),
            im: self.im.iter().map(|v| v * s).collect(),
        }
    }

    pub fn matvec(&self, v: &[(f64, f64)]) -> Vec<(f64, f64)> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let (mut sr, mut si) = (0.0, 0.0);
                let rr = &self.re[i * n..(i + 1) * n];
                let ri = &self.im[i * n..(i + 1) * n];
                for j in 0..n {
                    let (vr, vi) = v[j];
                    sr += rr[j] * vr - ri[j] * vi;
                    si += rr[j] * vi + ri[j] * vr;
                }
                (sr, si)
            })
            .collect()
    }

    /// `diag(a) · M · diag(b)`.
    pub fn diag_sandwich(&self, a: &[(f64, f64)], b: &[(f64, f64)]) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let (mr, mi) = self.get(i, j);
                let (ar, ai) = a[i];
                let (tr, ti) = (ar * mr - ai * mi, ar * mi + ai * mr);
                let (br, bi) = b[j];
                out.set(i, j, (tr * br - ti * bi, tr * bi + ti * br));
            }
        }
        out
    }

    /// Real embedding `[[A, −B], [B, A]]` of `A + iB`.
    pub fn real_embedding(&self) -> RealMatrix {
        let n = self.n;
        let m = 2 * n;
        let mut out = RealMatrix::zeros(m);
        for p in 0..n {
            for q in 0..n {
                let (a, b) = self.get(p, q);
                out.data[p * m + q] = a;
                out.data[(p + n) * m + q + n] = a;
                out.data[p * m + q + n] = -b;
                out.data[(p + n) * m + q] = b;
            }
        }
        out
    }

    /// Inverse of [`HermitianMatrix::real_embedding`], averaging the tied blocks.
    pub fn from_real_embedding(m: &RealMatrix) -> Result<Self> {
        if m.n % 2 != 0 {
            return Err(Error::Input("real embedding must have even size".into()));
        }
        let n = m.n / 2;
        Ok(Self::from_fn(n, |p, q| {
            let a = 0.5 * (m[(p, q)] + m[(p + n, q + n)]);
            let b = 0.5 * (m[(p + n, q)] - m[(p, q + n)]);
            (a, b)
        }))
    }

    /// Ascending eigenvalues (Hermitian input assumed).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let doubled = symmetric_eigenvalues(&self.real_embedding())?;
        Ok(doubled.into_iter().step_by(2).collect())
    }

    /// Ascending eigenvalues with unit eigenvectors.
    pub fn eigen(&self) -> Result<(Vec<f64>, Vec<Vec<(f64, f64)>>)> {
        let n = self.n;
        let eig = symmetric_eigen(&self.real_embedding())?;
        let mut values = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        for idx in (0..2 * n).step_by(2) {
            // Any real vector in the doubled eigenspace maps to a complex one.
            let row = eig.vectors.row(idx + 1);
            let v: Vec<(f64, f64)> = (0..n).map(|p| (row[p], row[p + n])).collect();
            let norm = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            values.push(0.5 * (eig.values[idx] + eig.values[idx + 1]));
            vectors.push(v.into_iter().map(|(a, b)| (a / norm, b / norm)).collect());
        }
        Ok((values, vectors))
    }
}

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Row `i` is the unit eigenvector of `values[i]`.
    pub vectors: RealMatrix,
}

/// Full eigen-decomposition: Householder tridiagonalization followed by the
/// implicit-shift QL iteration. Only the lower triangle is trusted to be
/// consistent with the upper; callers pass symmetric input.
pub fn symmetric_eigen(a: &RealMatrix) -> Result<SymmetricEigen> {
    let n = a.n;
    let (mut d, mut e, q) = tridiagonalize(a, true);
    let mut vt = q.expect("requested").transpose();
    tql2(&mut d, &mut e, Some(&mut vt))?;
    Ok(SymmetricEigen { values: d, vectors: if n == 0 { RealMatrix::zeros(0) } else { vt } })
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn symmetric_eigenvalues(a: &RealMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e, _) = tridiagonalize(a, false);
    tql2(&mut d, &mut e, None)?;
    Ok(d)
}

/// Reduces `a` to `Q T Qᵗ`; returns the diagonal, the sub-diagonal
/// (`e[i]` couples `i` and `i+1`, `e[n-1] = 0`) and optionally `Q`.
fn tridiagonalize(a: &RealMatrix, want_q: bool) -> (Vec<f64>, Vec<f64>, Option<RealMatrix>) {
    let n = a.n;
    let mut w = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut betas = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let off = k * n + k + 1;
        d[k] = w[k * n + k];
        let scale = w[off..off + m].iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if scale == 0.0 {
            e[k] = 0.0;
            betas[k] = 0.0;
            continue;
        }
        // Tiny columns would underflow vᵗv; the reflector ignores the scale of v.
        w[off..off + m].iter_mut().for_each(|v| *v /= scale);
        let norm = w[off..off + m].iter().map(|v| v * v).sum::<f64>().sqrt();
        let x0 = w[off];
        let alpha = if x0 > 0.0 { -norm } else { norm };
        w[off] = x0 - alpha;
        let vtv: f64 = w[off..off + m].iter().map(|v| v * v).sum();
        let beta = 2.0 / vtv;
        e[k] = alpha * scale;
        betas[k] = beta;

        let (head, tail) = w.split_at_mut((k + 1) * n);
        let v = &head[off..off + m];
        // p = β·A22·v
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let row = &tail[i * n + k + 1..i * n + n];
            *pi = beta * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
        let pv: f64 = p[..m].iter().zip(v).map(|(a, b)| a * b).sum();
        let half = 0.5 * beta * pv;
        for (pi, vi) in p[..m].iter_mut().zip(v) {
            *pi -= half * vi;
        }
        // A22 -= v pᵗ + p vᵗ
        for i in 0..m {
            let (vi, pi) = (v[i], p[i]);
            let row = &mut tail[i * n + k + 1..i * n + n];
            for ((r, &vj), &pj) in row.iter_mut().zip(v).zip(&p[..m]) {
                *r -= vi * pj + pi * vj;
            }
        }
    }
    if n >= 2 {
        d[n - 2] = w[(n - 2) * n + n - 2];
        e[n - 2] = w[(n - 2) * n + n - 1];
        d[n - 1] = w[(n - 1) * n + n - 1];
    } else if n == 1 {
        d[0] = w[0];
    }

    let q = want_q.then(|| {
        let mut q = RealMatrix::identity(n);
        let mut r = vec![0.0; n];
        for k in (0..n.saturating_sub(2)).rev() {
            let beta = betas[k];
            if beta == 0.0 {
                continue;
            }
            let lo = k + 1;
            let v = &w[k * n + lo..k * n + n];
            let r = &mut r[lo..n];
            r.iter_mut().for_each(|x| *x = 0.0);
            for (i, &vi) in v.iter().enumerate() {
                let row = &q.data[(lo + i) * n + lo..(lo + i) * n + n];
                for (rj, qj) in r.iter_mut().zip(row) {
                    *rj += vi * qj;
                }
            }
            for (i, &vi) in v.iter().enumerate() {
                let s = beta * vi;
                let row = &mut q.data[(lo + i) * n + lo..(lo + i) * n + n];
                for (qj, rj) in row.iter_mut().zip(r.iter()) {
                    *qj -= s * rj;
                }
            }
        }
        q
    });
    (d, e, q)
}

/// Implicit QL on a symmetric tridiagonal matrix; rotations are applied to
/// the rows of `vt` when given. Leaves ascending eigenvalues in `d`.
fn tql2(d: &mut [f64], e: &mut [f64], mut vt: Option<&mut RealMatrix>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 100 {
                    return Err(Error::Numerical("QL iteration did not converge".into()));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(vt) = vt.as_deref_mut() {
                        let nn = vt.n;
                        let (top, bottom) = vt.data.split_at_mut((i + 1) * nn);
                        let ri = &mut top[i * nn..];
                        let rj = &mut bottom[..nn];
                        for (a, b) in ri.iter_mut().zip(rj.iter_mut()) {
                            let hb = *b;
                            *b = s * *a + c * hb;
                            *a = c * *a - s * hb;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps eigenvector rows paired with their values.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            if let Some(vt) = vt.as_deref_mut() {
                let nn = vt.n;
                let (top, bottom) = vt.data.split_at_mut(k * nn);
                top[i * nn..(i + 1) * nn].swap_with_slice(&mut bottom[..nn]);
            }
        }
    }
    Ok(())
}

/// Projection onto the PSD cone: eigenvalues below zero are clipped to zero.
pub fn psd_projection(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.n;
    let eig = symmetric_eigen(a)?;
    let mut out = RealMatrix::zeros(n);
    let mut scaled = vec![0.0; n];
    for (idx, &lambda) in eig.values.iter().enumerate() {
        if lambda <= 0.0 {
            continue;
        }
        let v = eig.vectors.row(idx);
        for (s, &vi) in scaled.iter_mut().zip(v) {
            *s = lambda * vi;
        }
        for i in 0..n {
            let vi = v[i];
            let row = &mut out.data[i * n..(i + 1) * n];
            for (r, &sj) in row.iter_mut().zip(&scaled) {
                *r += vi * sj;
            }
        }
    }
    Ok(out)
}

/// Spectral norm `max |λ_i|` of a symmetric matrix.
pub fn symmetric_spectral_norm(a: &RealMatrix) -> Result<f64> {
    let values = symmetric_eigenvalues(a)?;
    Ok(values.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}
