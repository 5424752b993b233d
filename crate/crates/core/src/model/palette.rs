use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The color set of a model.
///
/// Real palettes hold `k` distinct reals. Root-of-unity palettes hold the
/// `k`-th roots of unity, addressed by integer phase index `l` standing for
/// `exp(2πi·l/k)`, so products and conjugates stay exact modulo `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum Palette {
    Real(Vec<f64>),
    RootsOfUnity(usize),
}

impl Palette {
    pub fn real(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Model(format!(
                "a palette needs at least two colors, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Model("palette values must be finite".into()));
        }
        for (i, a) in values.iter().enumerate() {
            if values[i + 1..].iter().any(|b| b == a) {
                return Err(Error::Model(format!("palette value {a} is repeated")));
            }
        }
        Ok(Palette::Real(values))
    }

    pub fn roots(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::Model(format!("k must be at least 2, got {k}")));
        }
        Ok(Palette::RootsOfUnity(k))
    }

    pub fn k(&self) -> usize {
        match self {
            Palette::Real(v) => v.len(),
            Palette::RootsOfUnity(k) => *k,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Palette::Real(_))
    }

    pub fn is_roots(&self) -> bool {
        matches!(self, Palette::RootsOfUnity(_))
    }

    /// Real color values, or `None` for a root-of-unity palette.
    pub fn real_values(&self) -> Option<&[f64]> {
        match self {
            Palette::Real(v) => Some(v),
            Palette::RootsOfUnity(_) => None,
        }
    }

    /// `min_{i<j} (c_i - c_j)^2` for real palettes.
    pub fn min_sq_gap(&self) -> Option<f64> {
        let v = self.real_values()?;
        let mut best = f64::INFINITY;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.min((v[i] - v[j]).powi(2));
            }
        }
        Some(best)
    }
}

/// `(cos, sin)` of `2π·m/k`.
///
/// Quarter turns are returned exactly and `m` and `k - m` give exact
/// conjugates, so matrices assembled from this table are Hermitian bit for bit.
pub fn root_of_unity(m: usize, k: usize) -> (f64, f64) {
    let m = m % k;
    if (4 * m) % k == 0 {
        return match 4 * m / k {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    if 2 * m > k {
        let (c, s) = root_of_unity(k - m, k);
        return (c, -s);
    }
    if (6 * m) % k == 0 {
        // Sixth-turn multiples: cosine ±1/2 exactly.
        let c = if 6 * m / k == 1 { 0.5 } else { -0.5 };
        return (c, 0.75f64.sqrt());
    }
    let (s, c) = (2.0 * PI * m as f64 / k as f64).sin_cos();
    (c, s)
}

/// All `k` roots of unity in phase-index order.
pub fn roots_table(k: usize) -> Vec<(f64, f64)> {
    (0..k).map(|m| root_of_unity(m, k)).collect()
}

impl fmt::Display for Palette {
    /// `k v_1 … v_k` for real colors, `roots k` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Palette::Real(v) => {
                write!(f, "{}", v.len())?;
                for c in v {
                    write!(f, " {c:?}")?;
                }
                Ok(())
            }
            Palette::RootsOfUnity(k) => write!(f, "roots {k}"),
        }
    }
}

impl FromStr for Palette {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tok = s.split_whitespace();
        let head = tok
            .next()
            .ok_or_else(|| Error::Input("empty palette line".into()))?;
        let parse_usize = |t: Option<&str>| -> Result<usize> {
            t.ok_or_else(|| Error::Input("truncated palette line".into()))?
                .parse()
                .map_err(|_| Error::Input(format!("bad integer in palette line {s:?}")))
        };
        if head == "roots" {
            let k = parse_usize(tok.next())?;
            if tok.next().is_some() {
                return Err(Error::Input(format!("trailing tokens in {s:?}")));
            }
            return Palette::roots(k);
        }
        let k = parse_usize(Some(head))?;
        let values = tok
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Input(format!("bad color value {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != k {
            return Err(Error::Input(format!(
                "palette declares {k} colors but lists {}",
                values.len()
            )));
        }
        Palette::real(values)
    }
}
