use std::fmt;
use std::sync::Arc;

use super::palette::{root_of_unity, Palette};
use crate::error::{Error, Result};

/// A color assignment `x: [n] → palette`, stored as palette indices.
///
/// For root-of-unity palettes the index is the phase index `l` of
/// `exp(2πi·l/k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    colors: Vec<usize>,
    palette: Arc<Palette>,
}

impl Assignment {
    pub fn new(colors: Vec<usize>, palette: Arc<Palette>) -> Result<Self> {
        let k = palette.k();
        if let Some(bad) = colors.iter().find(|&&c| c >= k) {
            return Err(Error::Input(format!(
                "color index {bad} out of range for palette of size {k}"
            )));
        }
        if colors.is_empty() {
            return Err(Error::Input("assignment must cover at least one vertex".into()));
        }
        Ok(Assignment { colors, palette })
    }

    pub(crate) fn from_parts_unchecked(colors: Vec<usize>, palette: Arc<Palette>) -> Self {
        Assignment { colors, palette }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn k(&self) -> usize {
        self.palette.k()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    /// `n_i(x)` for every palette index `i`.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &c in &self.colors {
            sizes[c] += 1;
        }
        sizes
    }

    /// Color values `x(1..n)` for a real palette.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        let v = self
            .palette
            .real_values()
            .ok_or_else(|| Error::Model("assignment does not use real colors".into()))?;
        Ok(self.colors.iter().map(|&c| v[c]).collect())
    }

    /// Unit complex values `x(1..n)` as `(re, im)` for a root-of-unity palette.
    pub fn unit_values(&self) -> Result<Vec<(f64, f64)>> {
        match *self.palette {
            Palette::RootsOfUnity(k) => Ok(self.colors.iter().map(|&c| root_of_unity(c, k)).collect()),
            Palette::Real(_) => Err(Error::Model("assignment does not use roots of unity".into())),
        }
    }

    pub(crate) fn check_compatible(&self, other: &Assignment) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Input(format!(
                "assignments cover {} and {} vertices",
                self.n(),
                other.n()
            )));
        }
        if self.k() != other.k() {
            return Err(Error::Input(format!(
                "assignments use {} and {} colors",
                self.k(),
                other.k()
            )));
        }
        Ok(())
    }

    /// Parses the record form `n k mode idx_1 … idx_n` against a palette.
    pub fn parse_record(line: &str, palette: Arc<Palette>) -> Result<Self> {
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() < 3 {
            return Err(Error::Input(format!("truncated assignment record {line:?}")));
        }
        let int = |t: &str| -> Result<usize> {
            t.parse()
                .map_err(|_| Error::Input(format!("bad integer {t:?} in assignment record")))
        };
        let n = int(tok[0])?;
        let k = int(tok[1])?;
        let mode_ok = match tok[2] {
            "real" => palette.is_real(),
            "roots" => palette.is_roots(),
            other => return Err(Error::Input(format!("unknown assignment mode {other:?}"))),
        };
        if !mode_ok || k != palette.k() {
            return Err(Error::Input("assignment record does not match palette".into()));
        }
        if tok.len() != 3 + n {
            return Err(Error::Input(format!(
                "assignment record declares {n} vertices but lists {}",
                tok.len() - 3
            )));
        }
        let colors = tok[3..].iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?;
        Assignment::new(colors, palette)
    }
}

impl fmt::Display for Assignment {
    /// Record form `n k mode idx_1 … idx_n` with zero-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = if self.palette.is_roots() { "roots" } else { "real" };
        write!(f, "{} {} {}", self.n(), self.k(), mode)?;
        for c in &self.colors {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}
