use smallvec::{smallvec, SmallVec};

use super::assignment::Assignment;
use crate::error::{Error, Result};

/// Counts `t_{i,j} = |{l : x(l) = c_i, y(l) = c_j}|` with both marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    k: usize,
    /// `k²` counts row-major, then the `k` row and `k` column marginals.
    /// Stored inline up to `k = 4`.
    data: SmallVec<[usize; 24]>,
}

impl ContingencyTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.row_marginals().iter().sum()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.data[i * self.k + j]
    }

    /// Row marginals `n_i(x)`.
    pub fn row_marginals(&self) -> &[usize] {
        let kk = self.k * self.k;
        &self.data[kk..kk + self.k]
    }

    /// Column marginals `n_j(y)`.
    pub fn col_marginals(&self) -> &[usize] {
        &self.data[self.k * self.k + self.k..]
    }

    pub fn trace(&self) -> usize {
        (0..self.k).map(|i| self.get(i, i)).sum()
    }

    /// `Σ_{i,j} t_{i,j}^2`.
    pub fn sum_sq(&self) -> usize {
        self.data[..self.k * self.k].iter().map(|&t| t * t).sum()
    }
}

pub fn contingency(x: &Assignment, y: &Assignment) -> Result<ContingencyTable> {
    x.check_compatible(y)?;
    let k = x.k();
    let kk = k * k;
    let mut t = ContingencyTable { k, data: smallvec![0; kk + 2 * k] };
    let (cells, marginals) = t.data.split_at_mut(kk);
    let (rows, cols) = marginals.split_at_mut(k);
    for (&a, &b) in x.colors().iter().zip(y.colors()) {
        cells[a * k + b] += 1;
        rows[a] += 1;
        cols[b] += 1;
    }
    Ok(t)
}

/// `D_Ω(x, y) = n − Σ_i t_{i,i}(x, y)`.
pub fn distance_omega(x: &Assignment, y: &Assignment) -> Result<usize> {
    let t = contingency(x, y)?;
    Ok(t.n() - t.trace())
}

/// `D_Θ(x, y) = Σ_{i≠j} t_{i,j}(x, y)` on root-of-unity assignments.
pub fn distance_theta(x: &Assignment, y: &Assignment) -> Result<usize> {
    if !x.palette().is_roots() || !y.palette().is_roots() {
        return Err(Error::Model("distance_theta needs root-of-unity palettes".into()));
    }
    let t = contingency(x, y)?;
    let k = t.k();
    let mut off = 0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                off += t.get(i, j);
            }
        }
    }
    Ok(off)
}
