//! Scores, separation statistics, recovery thresholds and Gaussian bounds.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::linalg::{HermitianMatrix, RealMatrix};
use crate::matrices::{ModelKind, Observation};
use crate::model::{contingency, root_of_unity, Assignment, ContingencyTable, Palette, SampleSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// Maps a raw score to "larger is better".
    pub fn orient(self, value: f64) -> f64 {
        match self {
            Orientation::Maximize => value,
            Orientation::Minimize => -value,
        }
    }
}

/// Which likelihood score applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScoreKind {
    /// `f(x) = ⟨G(x), T⟩`
    F,
    /// `d(x) = ‖G(x)‖² − 2⟨G(x), T⟩`
    D,
    /// `g(x) = Σ n_j(x)² + 2⟨K(x), R⟩`
    G,
    /// `h(x) = ⟨K(x), R⟩`
    H,
    /// `r(x) = Re⟨U, P(x)⟩`
    R,
}

impl ScoreKind {
    pub fn orientation(self) -> Orientation {
        match self {
            ScoreKind::D => Orientation::Minimize,
            _ => Orientation::Maximize,
        }
    }

    /// The score for an observation model estimated over `space`.
    pub fn for_problem(model: ModelKind, space: &SampleSpace) -> Result<ScoreKind> {
        let fixed = space.has_fixed_counts();
        let kind = match model {
            ModelKind::VectorT if space.palette().is_real() => {
                if fixed {
                    ScoreKind::F
                } else {
                    ScoreKind::D
                }
            }
            ModelKind::PartitionR => {
                if fixed {
                    ScoreKind::H
                } else {
                    ScoreKind::G
                }
            }
            ModelKind::GueU | ModelKind::ConjugatedGoeV if space.palette().is_roots() => ScoreKind::R,
            _ => {
                return Err(Error::Model(format!(
                    "model {model} cannot be scored over this sample space"
                )))
            }
        };
        Ok(kind)
    }

    fn fits(self, model: ModelKind) -> bool {
        match self {
            ScoreKind::F | ScoreKind::D => model == ModelKind::VectorT,
            ScoreKind::G | ScoreKind::H => model == ModelKind::PartitionR,
            ScoreKind::R => model.is_hermitian(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub value: f64,
    pub kind: ScoreKind,
    pub orientation: Orientation,
}

impl Score {
    pub fn oriented(&self) -> f64 {
        self.orientation.orient(self.value)
    }
}

/// Scores colorings against one observation. The matrix-dependent parts are
/// reduced once so each evaluation is cheap: `f` and `d` need only the row
/// minus column sums of `T`.
#[derive(Debug, Clone)]
pub struct Scorer {
    kind: ScoreKind,
    n: usize,
    values: Vec<f64>,
    roots: Vec<(f64, f64)>,
    row_minus_col: Vec<f64>,
    real: Option<RealMatrix>,
    total: f64,
    herm: Option<HermitianMatrix>,
}

impl Scorer {
    pub fn new(obs: &Observation, kind: ScoreKind, palette: &Palette) -> Result<Self> {
        if !kind.fits(obs.model()) {
            return Err(Error::Model(format!("score {kind:?} does not apply to model {}", obs.model())));
        }
        let n = obs.n();
        let mut s = Scorer {
            kind,
            n,
            values: Vec::new(),
            roots: Vec::new(),
            row_minus_col: Vec::new(),
            real: None,
            total: 0.0,
            herm: None,
        };
        match kind {
            ScoreKind::F | ScoreKind::D => {
                let t = obs.real().expect("vector model is real");
                s.values = palette
                    .real_values()
                    .ok_or_else(|| Error::Model("f and d need real colors".into()))?
                    .to_vec();
                let rows = t.row_sums();
                let mut cols = vec![0.0; n];
                for i in 0..n {
                    for (c, v) in cols.iter_mut().zip(t.row(i)) {
                        *c += v;
                    }
                }
                s.row_minus_col = rows.iter().zip(&cols).map(|(r, c)| r - c).collect();
            }
            ScoreKind::G | ScoreKind::H => {
                let r = obs.real().expect("partition model is real");
                s.total = r.data().iter().sum();
                s.real = Some(r.clone());
            }
            ScoreKind::R => {
                if !palette.is_roots() {
                    return Err(Error::Model("r needs a root-of-unity palette".into()));
                }
                s.roots = crate::model::roots_table(palette.k());
                s.herm = Some(obs.hermitian().expect("hermitian model").clone());
            }
        }
        Ok(s)
    }

    pub fn kind(&self) -> ScoreKind {
        self.kind
    }

    /// Raw score of a color vector (palette indices).
    pub fn eval(&self, colors: &[usize]) -> f64 {
        debug_assert_eq!(colors.len(), self.n);
        match self.kind {
            ScoreKind::F => self.f(colors),
            ScoreKind::D => self.g_norm_sq(colors) - 2.0 * self.f(colors),
            ScoreKind::H => self.h(colors),
            ScoreKind::G => {
                let mut counts = vec![0usize; colors.iter().max().map_or(0, |m| m + 1)];
                for &c in colors {
                    counts[c] += 1;
                }
                counts.iter().map(|&m| (m * m) as f64).sum::<f64>() + 2.0 * self.h(colors)
            }
            ScoreKind::R => self.r(colors),
        }
    }

    fn f(&self, colors: &[usize]) -> f64 {
        colors
            .iter()
            .zip(&self.row_minus_col)
            .map(|(&c, d)| self.values[c] * d)
            .sum()
    }

    /// `‖G(x)‖² = 2n Σ n_i c_i² − 2(Σ n_i c_i)²`
    fn g_norm_sq(&self, colors: &[usize]) -> f64 {
        let (s1, s2) = colors.iter().fold((0.0, 0.0), |(a, b), &c| {
            let v = self.values[c];
            (a + v, b + v * v)
        });
        2.0 * self.n as f64 * s2 - 2.0 * s1 * s1
    }

    fn h(&self, colors: &[usize]) -> f64 {
        let r = self.real.as_ref().expect("set for g and h");
        let mut same = 0.0;
        for (i, &ci) in colors.iter().enumerate() {
            let row = r.row(i);
            for (j, &cj) in colors.iter().enumerate() {
                if ci == cj {
                    same += row[j];
                }
            }
        }
        self.total - same
    }

    /// `Re(x̄ᵗ U x)`, which equals `Re⟨U, P(x)⟩`.
    fn r(&self, colors: &[usize]) -> f64 {
        let u = self.herm.as_ref().expect("set for r");
        let n = self.n;
        let (re, im) = (u.re(), u.im());
        let mut total = 0.0;
        for a in 0..n {
            let (xr, xi) = self.roots[colors[a]];
            let (mut sr, mut si) = (0.0, 0.0);
            for b in 0..n {
                let (yr, yi) = self.roots[colors[b]];
                let (ur, ui) = (re[a * n + b], im[a * n + b]);
                sr += ur * yr - ui * yi;
                si += ur * yi + ui * yr;
            }
            total += xr * sr + xi * si;
        }
        total
    }
}

/// Scores `x` against `obs` with the score matching `space`.
pub fn score(x: &Assignment, obs: &Observation, space: &SampleSpace) -> Result<Score> {
    if x.n() != obs.n() {
        return Err(Error::Input(format!("assignment has n={}, observation n={}", x.n(), obs.n())));
    }
    let kind = ScoreKind::for_problem(obs.model(), space)?;
    let scorer = Scorer::new(obs, kind, x.palette())?;
    Ok(Score { value: scorer.eval(x.colors()), kind, orientation: kind.orientation() })
}

/// Scores `x` with an explicitly chosen score.
pub fn score_with(x: &Assignment, obs: &Observation, kind: ScoreKind) -> Result<Score> {
    if x.n() != obs.n() {
        return Err(Error::Input(format!("assignment has n={}, observation n={}", x.n(), obs.n())));
    }
    let scorer = Scorer::new(obs, kind, x.palette())?;
    Ok(Score { value: scorer.eval(x.colors()), kind, orientation: kind.orientation() })
}

/// Separation statistic: the expected score deficit of `x` against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeparationKind {
    /// Vector model, fixed counts, score `f`.
    M,
    /// Vector model, free space, score `d`.
    Q,
    /// Partition model, free space, score `g`.
    L,
    /// Partition model, fixed counts, score `h`.
    U,
    /// Unit-modulus model, score `r`.
    J,
}

impl SeparationKind {
    /// `v` in `Var[score(x) − score(y)] = v·σ²·mean_gap`.
    pub fn variance_coeff(self) -> f64 {
        match self {
            SeparationKind::M | SeparationKind::U | SeparationKind::J => 2.0,
            SeparationKind::Q | SeparationKind::L => 4.0,
        }
    }

    pub fn score_kind(self) -> ScoreKind {
        match self {
            SeparationKind::M => ScoreKind::F,
            SeparationKind::Q => ScoreKind::D,
            SeparationKind::L => ScoreKind::G,
            SeparationKind::U => ScoreKind::H,
            SeparationKind::J => ScoreKind::R,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub kind: SeparationKind,
    pub mean_gap: f64,
    pub variance_coeff: f64,
}

/// Closed-form separation statistic from the contingency table of `(x, y)`.
pub fn separation(x: &Assignment, y: &Assignment, kind: SeparationKind) -> Result<Separation> {
    let mean_gap = match kind {
        SeparationKind::J => j_statistic(x, y)?,
        _ => table_statistic(x, y, kind)?,
    };
    Ok(Separation { kind, mean_gap, variance_coeff: kind.variance_coeff() })
}

/// J from the phase histogram: the contingency route when `k⁴ < n²`, the
/// pair scan otherwise.
fn j_statistic(x: &Assignment, y: &Assignment) -> Result<f64> {
    x.check_compatible(y)?;
    if !x.palette().is_roots() {
        return Err(Error::Model("J needs root-of-unity palettes".into()));
    }
    let k = x.k();
    let mut hist: SmallVec<[u64; 16]> = smallvec![0; k];
    if k.pow(4) < x.n() * x.n() {
        contingency_histogram_into(x, y, &mut hist)?;
    } else {
        pairwise_histogram_into(x, y, &mut hist);
    }
    Ok(j_from_histogram(&hist, k))
}

fn table_statistic(x: &Assignment, y: &Assignment, kind: SeparationKind) -> Result<f64> {
    let t = contingency(x, y)?;
    let k = t.k();
    let n = t.n() as f64;
    let same_sizes = t.row_marginals() == t.col_marginals();
    let need_same = |what: &str| -> Result<()> {
        if same_sizes {
            Ok(())
        } else {
            Err(Error::Input(format!("{what} needs equal group-size vectors")))
        }
    };
    let sq = |v: &[usize]| v.iter().map(|&m| (m * m) as f64).sum::<f64>();

    let mean_gap = match kind {
        SeparationKind::M => {
            need_same("M")?;
            let c = real_colors(x)?;
            let a: f64 = (0..k).map(|i| t.row_marginals()[i] as f64 * c[i] * c[i]).sum();
            let b = cell_sum(&t, |i, j| c[i] * c[j]);
            2.0 * n * a - 2.0 * n * b
        }
        SeparationKind::Q => {
            let c = real_colors(x)?;
            let a = cell_sum(&t, |i, j| (c[i] - c[j]).powi(2));
            let sx: f64 = (0..k).map(|i| t.row_marginals()[i] as f64 * c[i]).sum();
            let sy: f64 = (0..k).map(|j| t.col_marginals()[j] as f64 * c[j]).sum();
            2.0 * n * a - 2.0 * (sx - sy).powi(2)
        }
        SeparationKind::L => sq(t.row_marginals()) + sq(t.col_marginals()) - 2.0 * t.sum_sq() as f64,
        SeparationKind::U => {
            need_same("U")?;
            sq(t.col_marginals()) - t.sum_sq() as f64
        }
        SeparationKind::J => unreachable!("J is computed by j_statistic"),
    };
    Ok(mean_gap)
}

/// `variance_coeff · σ² · mean_gap`.
pub fn variance_gap(x: &Assignment, y: &Assignment, kind: SeparationKind, sigma: f64) -> Result<f64> {
    let s = separation(x, y, kind)?;
    Ok(s.variance_coeff * sigma * sigma * s.mean_gap)
}

fn real_colors(x: &Assignment) -> Result<&[f64]> {
    x.palette()
        .real_values()
        .ok_or_else(|| Error::Model("statistic needs real colors".into()))
}

/// `Σ_{i,j} t_{i,j}·f(i, j)`.
fn cell_sum(t: &ContingencyTable, f: impl Fn(usize, usize) -> f64) -> f64 {
    let k = t.k();
    let mut acc = 0.0;
    for i in 0..k {
        for j in 0..k {
            acc += t.get(i, j) as f64 * f(i, j);
        }
    }
    acc
}

/// `hist[m]` counts ordered vertex pairs `(a, b)` whose phase combination
/// `x(b) − x(a) + y(a) − y(b)` is `m` modulo `k`; built from the table.
///
/// With `w[d] = Σ_{(j − i) mod k = d} t_{i,j}`, a pair drawn from cells
/// `(i, j)` and `(p, q)` lands in `(d − e) mod k` for `d = j − i`, `e = q − p`,
/// so `hist[m] = Σ_d w[d]·w[(d − m) mod k]`.
pub fn phase_histogram_contingency(x: &Assignment, y: &Assignment) -> Result<Vec<u64>> {
    let mut hist = vec![0u64; x.k()];
    contingency_histogram_into(x, y, &mut hist)?;
    Ok(hist)
}

fn contingency_histogram_into(x: &Assignment, y: &Assignment, hist: &mut [u64]) -> Result<()> {
    let t = contingency(x, y)?;
    let k = t.k();
    let mut buf: SmallVec<[u64; 16]> = smallvec![0; k];
    let w = &mut buf[..];
    for i in 0..k {
        for j in 0..k {
            w[(j + k - i) % k] += t.get(i, j) as u64;
        }
    }
    for (m, h) in hist.iter_mut().enumerate() {
        *h = 0;
        for d in 0..k {
            let e = d + k - m;
            *h += w[d] * w[if e >= k { e - k } else { e }];
        }
    }
    Ok(())
}

/// Same histogram as [`phase_histogram_contingency`], by direct pair scan
/// over the per-vertex phase differences `x(a) − y(a)`.
pub fn phase_histogram_pairwise(x: &Assignment, y: &Assignment) -> Vec<u64> {
    let mut hist = vec![0u64; x.k()];
    pairwise_histogram_into(x, y, &mut hist);
    hist
}

fn pairwise_histogram_into(x: &Assignment, y: &Assignment, hist: &mut [u64]) {
    let k = x.k();
    let wrap = |m: usize| if m >= k { m - k } else { m };
    let mut e: SmallVec<[usize; 64]> = smallvec![0; x.n()];
    for (slot, (&a, &b)) in e.iter_mut().zip(x.colors().iter().zip(y.colors())) {
        *slot = wrap(a + k - b);
    }
    let mut modk: SmallVec<[usize; 32]> = smallvec![0; 2 * k];
    for (m, slot) in modk.iter_mut().enumerate() {
        *slot = wrap(m);
    }
    // Four counter lanes keep consecutive increments independent.
    let mut buf: SmallVec<[u64; 64]> = smallvec![0; 4 * k];
    let (l0, rest) = buf.split_at_mut(k);
    let (l1, rest) = rest.split_at_mut(k);
    let (l2, l3) = rest.split_at_mut(k);
    for &ea in &e {
        let shift = &modk[k - ea..2 * k - ea];
        let mut quads = e.chunks_exact(4);
        for q in &mut quads {
            l0[shift[q[0]]] += 1;
            l1[shift[q[1]]] += 1;
            l2[shift[q[2]]] += 1;
            l3[shift[q[3]]] += 1;
        }
        for &eb in quads.remainder() {
            l0[shift[eb]] += 1;
        }
    }
    for (m, h) in hist.iter_mut().enumerate() {
        *h = l0[m] + l1[m] + l2[m] + l3[m];
    }
}

/// `J = Σ_m hist[m]·(1 − cos(2πm/k))`.
pub fn j_from_histogram(hist: &[u64], k: usize) -> f64 {
    // Phases m and k − m share a cosine.
    (1..=k / 2)
        .map(|m| {
            let h = if 2 * m == k { hist[m] } else { hist[m] + hist[k - m] };
            h as f64 * (1.0 - root_of_unity(m, k).0)
        })
        .sum()
}

/// Which recovery boundary a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    /// Vector model: `n·C₀ / (4 ln n)` with `C₀ = min (c_i − c_j)²`.
    Thm1,
    /// Partition model: `(n_k + n_{k−1}) / (4 ln n)`.
    Thm2,
    /// Unit-modulus model, MLE: `n(1 − cos(2π/k)) / (2 ln n)`.
    Thm3,
    /// SDP sufficient bound on σ, `√n / √(2 ln n)`, reported squared.
    #[serde(rename = "thm5-bound")]
    Thm5Bound,
}

impl FormulaId {
    pub const ALL: [FormulaId; 4] = [FormulaId::Thm1, FormulaId::Thm2, FormulaId::Thm3, FormulaId::Thm5Bound];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Thm1 => "thm1",
            FormulaId::Thm2 => "thm2",
            FormulaId::Thm3 => "thm3",
            FormulaId::Thm5Bound => "thm5-bound",
        }
    }

    /// The boundary a given model and estimator is compared against.
    pub fn for_model(model: ModelKind, sdp: bool) -> FormulaId {
        match model {
            ModelKind::VectorT => FormulaId::Thm1,
            ModelKind::PartitionR => FormulaId::Thm2,
            ModelKind::GueU if !sdp => FormulaId::Thm3,
            ModelKind::GueU | ModelKind::ConjugatedGoeV => FormulaId::Thm5Bound,
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown formula '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub formula_id: FormulaId,
    pub n: usize,
    pub k: usize,
    /// Formula inputs beyond `n` and `k`, as a JSON object.
    pub param_json: String,
    /// Critical σ² at δ = 0.
    pub sigma_sq_critical: f64,
}

/// Evaluates a threshold at δ = 0 (natural logarithm). `group_sizes` is used
/// by `thm2` only and defaults to the most balanced split of `n`.
pub fn threshold(
    formula: FormulaId,
    n: usize,
    palette: &Palette,
    group_sizes: Option<&[usize]>,
) -> Result<ThresholdReport> {
    if n < 2 {
        return Err(Error::Range("thresholds need n ≥ 2".into()));
    }
    let k = palette.k();
    let ln = (n as f64).ln();
    let (value, params) = match formula {
        FormulaId::Thm1 => {
            let c0 = palette
                .min_sq_gap()
                .ok_or_else(|| Error::Model("thm1 needs real colors".into()))?;
            let colors = palette.real_values().expect("checked");
            (n as f64 * c0 / (4.0 * ln), json!({ "colors": colors, "c0": c0 }))
        }
        FormulaId::Thm2 => {
            let mut sizes = match group_sizes {
                Some(s) => {
                    if s.len() != k || s.iter().sum::<usize>() != n {
                        return Err(Error::Input("group sizes must have k entries summing to n".into()));
                    }
                    s.to_vec()
                }
                None => balanced_sizes(n, k)?,
            };
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            let smallest_two = (sizes[k - 1] + sizes[k - 2]) as f64;
            (smallest_two / (4.0 * ln), json!({ "group_sizes": sizes }))
        }
        FormulaId::Thm3 => {
            let gap = 1.0 - root_of_unity(1, k).0;
            (n as f64 * gap / (2.0 * ln), json!({}))
        }
        FormulaId::Thm5Bound => (n as f64 / (2.0 * ln), json!({})),
    };
    Ok(ThresholdReport {
        formula_id: formula,
        n,
        k,
        param_json: params.to_string(),
        sigma_sq_critical: value,
    })
}

/// Most even split of `n` into `k` non-increasing parts.
pub fn balanced_sizes(n: usize, k: usize) -> Result<Vec<usize>> {
    if k < 2 || n < k {
        return Err(Error::Range(format!("cannot split n={n} into k={k} nonempty groups")));
    }
    Ok((0..k).map(|i| n / k + usize::from(i < n % k)).collect())
}

/// Writes `formula_id,n,k,param_json,sigma_sq_critical` rows.
pub fn write_threshold_csv<W: Write>(reports: &[ThresholdReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["formula_id", "n", "k", "param_json", "sigma_sq_critical"])?;
    for r in reports {
        w.write_record([
            r.formula_id.name().to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.param_json.clone(),
            format!("{:?}", r.sigma_sq_critical),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Levels and probabilities bounding the maximum of `N` unit-variance
/// Gaussians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMaxBounds {
    /// `Pr(max > level_hi) ≤ upper_prob = N^{−ε}`.
    pub upper_prob: f64,
    /// `Pr(max < level_lo) ≤ lower_prob = exp(−N^ε)` for independent variables
    /// when `indep_condition_holds`.
    pub lower_prob: f64,
    pub level_hi: f64,
    pub level_lo: f64,
    pub indep_condition_holds: bool,
}

pub fn gaussian_max_bounds(count: u64, eps: f64) -> Result<GaussianMaxBounds> {
    if count < 2 {
        return Err(Error::Range("N must be at least 2".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Range("eps must lie in (0, 1)".into()));
    }
    let nf = count as f64;
    let ln = nf.ln();
    let root = (2.0 * ln).sqrt();
    let lhs = nf.powf(eps - eps * eps) * (1.0 - eps) * root
        / ((2.0 * std::f64::consts::PI).sqrt() * (1.0 + 2.0 * (1.0 - eps).powi(2) * ln));
    Ok(GaussianMaxBounds {
        upper_prob: nf.powf(-eps),
        lower_prob: (-nf.powf(eps)).exp(),
        level_hi: (1.0 + eps) * root,
        level_lo: (1.0 - eps) * root,
        indep_condition_holds: lhs > 1.0,
    })
}

/// `(lower, upper)` with `lower ≤ Pr(G > x) ≤ upper` for standard normal `G`.
pub fn gaussian_tail_bounds(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Range("tail bounds need x > 0".into()));
    }
    let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok((x * density / (1.0 + x * x), density / x))
}
