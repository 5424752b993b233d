//! Model matrices, random-matrix samplers and observation synthesis.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, RealMatrix};
use crate::model::{root_of_unity, Assignment};

/// The four observation models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// `T = G(y) + σW` with `G_ij = y(i) − y(j)`.
    VectorT,
    /// `R = K(y) + σW` with `K_ij = [y(i) ≠ y(j)]`.
    PartitionR,
    /// `U = P(y) + σW_c`, `W_c` from the GUE.
    GueU,
    /// `V = P(y) + σ·diag(y)·W_s·diag(ȳ)`, `W_s` from the GOE.
    ConjugatedGoeV,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] =
        [ModelKind::VectorT, ModelKind::PartitionR, ModelKind::GueU, ModelKind::ConjugatedGoeV];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::VectorT => "vector-t",
            ModelKind::PartitionR => "partition-r",
            ModelKind::GueU => "gue-u",
            ModelKind::ConjugatedGoeV => "conjugated-goe-v",
        }
    }

    pub fn is_hermitian(self) -> bool {
        matches!(self, ModelKind::GueU | ModelKind::ConjugatedGoeV)
    }

    fn check_palette(self, y: &Assignment) -> Result<()> {
        let ok = match self {
            ModelKind::VectorT => y.palette().is_real(),
            ModelKind::PartitionR => true,
            ModelKind::GueU | ModelKind::ConjugatedGoeV => y.palette().is_roots(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Model(format!("palette kind does not fit model {}", self.name())))
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vector-t" | "vector" | "t" => Ok(ModelKind::VectorT),
            "partition-r" | "partition" | "r" => Ok(ModelKind::PartitionR),
            "gue-u" | "gue" | "u" => Ok(ModelKind::GueU),
            "conjugated-goe-v" | "goe" | "v" => Ok(ModelKind::ConjugatedGoeV),
            other => Err(Error::Input(format!("unknown model '{other}'"))),
        }
    }
}

/// The observed matrix, real for `T`/`R` and Hermitian for `U`/`V`.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservedMatrix {
    Real(RealMatrix),
    Hermitian(HermitianMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    matrix: ObservedMatrix,
    model: ModelKind,
    sigma: f64,
    truth: Option<Assignment>,
}

impl Observation {
    /// Wraps an externally supplied matrix.
    pub fn new(matrix: ObservedMatrix, model: ModelKind, sigma: f64) -> Result<Self> {
        let fits = matches!(
            (&matrix, model.is_hermitian()),
            (ObservedMatrix::Real(_), false) | (ObservedMatrix::Hermitian(_), true)
        );
        if !fits {
            return Err(Error::Model(format!("matrix type does not fit model {}", model.name())));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::Input("sigma must be finite and ≥ 0".into()));
        }
        Ok(Observation { matrix, model, sigma, truth: None })
    }

    pub fn matrix(&self) -> &ObservedMatrix {
        &self.matrix
    }

    pub fn real(&self) -> Option<&RealMatrix> {
        match &self.matrix {
            ObservedMatrix::Real(m) => Some(m),
            ObservedMatrix::Hermitian(_) => None,
        }
    }

    pub fn hermitian(&self) -> Option<&HermitianMatrix> {
        match &self.matrix {
            ObservedMatrix::Hermitian(m) => Some(m),
            ObservedMatrix::Real(_) => None,
        }
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Planted assignment, present for synthetic observations.
    pub fn truth(&self) -> Option<&Assignment> {
        self.truth.as_ref()
    }

    pub fn n(&self) -> usize {
        match &self.matrix {
            ObservedMatrix::Real(m) => m.n(),
            ObservedMatrix::Hermitian(m) => m.n(),
        }
    }
}

/// `G_ij = x(i) − x(j)`.
pub fn build_g(x: &Assignment) -> Result<RealMatrix> {
    let v = x.real_values()?;
    Ok(RealMatrix::from_fn(v.len(), |i, j| v[i] - v[j]))
}

/// `K_ij = 1` when `x(i) ≠ x(j)`.
pub fn build_k(x: &Assignment) -> RealMatrix {
    let c = x.colors();
    RealMatrix::from_fn(c.len(), |i, j| if c[i] != c[j] { 1.0 } else { 0.0 })
}

/// `P_ab = x(a)·conj(x(b))`, evaluated on phase indices so it is exactly
/// Hermitian with a real unit diagonal.
pub fn build_p(x: &Assignment) -> Result<HermitianMatrix> {
    if !x.palette().is_roots() {
        return Err(Error::Model("P(x) needs a root-of-unity palette".into()));
    }
    let k = x.k();
    let c = x.colors();
    Ok(HermitianMatrix::from_fn(c.len(), |a, b| root_of_unity((c[a] + k - c[b]) % k, k)))
}

/// `n²` independent standard normal entries.
pub fn sample_iid_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    RealMatrix::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Symmetric matrix with i.i.d. `N(0,1)` diagonal and upper triangle.
pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealMatrix {
    let mut m = RealMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = rng.sample(StandardNormal);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Hermitian matrix with real `N(0,1)` diagonal and standard complex
/// Gaussian upper triangle (each component `N(0, 1/2)`).
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m.set(i, i, (d, 0.0));
        for j in i + 1..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            m.set(i, j, (half * a, half * b));
            m.set(j, i, (half * a, -half * b));
        }
    }
    m
}

/// Synthesizes the observation of `y` under `model` at noise level `sigma`.
/// At `sigma = 0` the clean model matrix is returned without drawing noise.
pub fn observe<R: Rng + ?Sized>(
    y: &Assignment,
    model: ModelKind,
    sigma: f64,
    rng: &mut R,
) -> Result<Observation> {
    model.check_palette(y)?;
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::Input("sigma must be finite and ≥ 0".into()));
    }
    let n = y.n();
    let noisy = sigma > 0.0;
    let matrix = match model {
        ModelKind::VectorT | ModelKind::PartitionR => {
            let clean = if model == ModelKind::VectorT { build_g(y)? } else { build_k(y) };
            if noisy {
                let w = sample_iid_gaussian(n, rng);
                ObservedMatrix::Real(clean.add(&w.scaled(sigma)))
            } else {
                ObservedMatrix::Real(clean)
            }
        }
        ModelKind::GueU => {
            let p = build_p(y)?;
            if noisy {
                ObservedMatrix::Hermitian(p.add(&sample_gue(n, rng).scaled(sigma)))
            } else {
                ObservedMatrix::Hermitian(p)
            }
        }
        ModelKind::ConjugatedGoeV => {
            let p = build_p(y)?;
            if noisy {
                // diag(y)·W_s·diag(ȳ) has entries W_s(a,b)·P_ab.
                let w = sample_goe(n, rng);
                ObservedMatrix::Hermitian(HermitianMatrix::from_fn(n, |a, b| {
                    let (pr, pi) = p.get(a, b);
                    let s = 1.0 + sigma * w[(a, b)];
                    (pr * s, pi * s)
                }))
            } else {
                ObservedMatrix::Hermitian(p)
            }
        }
    };
    Ok(Observation { matrix, model, sigma, truth: Some(y.clone()) })
}

/// `Δ(M) = diag(M𝟙) − M`.
pub fn laplacian(m: &HermitianMatrix) -> HermitianMatrix {
    let n = m.n();
    let mut out = m.scaled(-1.0);
    for i in 0..n {
        let (mut sr, mut si) = (0.0, 0.0);
        for j in 0..n {
            let (r, im) = m.get(i, j);
            sr += r;
            si += im;
        }
        let (r, im) = out.get(i, i);
        out.set(i, i, (r + sr, im + si));
    }
    out
}

/// Real counterpart of [`laplacian`].
pub fn laplacian_real(m: &RealMatrix) -> RealMatrix {
    let sums = m.row_sums();
    let mut out = m.scaled(-1.0);
    for (i, s) in sums.iter().enumerate() {
        out[(i, i)] += s;
    }
    out
}

/// Plain-text dump: one row per line, 17 significant digits. Hermitian
/// matrices print the real block, a blank line, then the imaginary block.
pub fn dump(m: &ObservedMatrix) -> String {
    fn block(out: &mut String, n: usize, data: &[f64]) {
        for i in 0..n {
            let row: Vec<String> = data[i * n..(i + 1) * n].iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    let mut out = String::new();
    match m {
        ObservedMatrix::Real(r) => block(&mut out, r.n(), r.data()),
        ObservedMatrix::Hermitian(h) => {
            block(&mut out, h.n(), h.re());
            out.push('\n');
            block(&mut out, h.n(), h.im());
        }
    }
    out
}
