//! Color cycles between two assignments with equal group sizes.
//!
//! An `l`-cycle `(i_1, …, i_l)` for `(x, y)` is a sequence of distinct colors
//! with `t_{i_{s-1}, i_s}(x, y) > 0` for every `s`, indices taken cyclically.
//! Relabeling one representative vertex per step moves `y` exactly `l`
//! vertices closer to `x` while keeping every group size.

use super::assignment::Assignment;
use super::contingency::{contingency, ContingencyTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    colors: Vec<usize>,
    representatives: Vec<usize>,
}

impl Cycle {
    /// Ordered colors `(i_1, …, i_l)`.
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// `representatives()[s]` lies in `S_{i_s, i_{s+1}}(x, y)` (zero-based,
    /// cyclic): it has color `i_s` under `x` and `i_{s+1}` under `y`.
    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// Finds a cycle for `(x, y)` by the constructive walk: start at the first
/// color with an off-diagonal count, follow the smallest positive successor,
/// and close as soon as the newest color points back into the path, picking
/// the latest such path position.
pub fn find_cycle(x: &Assignment, y: &Assignment) -> Result<Cycle> {
    x.check_compatible(y)?;
    if x.group_sizes() != y.group_sizes() {
        return Err(Error::Input("find_cycle needs equal group-size vectors".into()));
    }
    let t = contingency(x, y)?;
    let k = t.k();
    let sizes = t.row_marginals();
    let start = (0..k)
        .find(|&i| t.get(i, i) < sizes[i])
        .ok_or(Error::NoCycle)?;

    let mut path = vec![start];
    let colors = loop {
        let last = *path.last().expect("path is never empty");
        let next = (0..k)
            .find(|&j| j != last && t.get(last, j) > 0)
            .ok_or_else(|| Error::Numerical("cycle walk stalled; marginals inconsistent".into()))?;
        if let Some(r) = path.iter().position(|&c| c == next) {
            break path[r..].to_vec();
        }
        path.push(next);
        let back = (0..path.len() - 1).rev().find(|&g| t.get(next, path[g]) > 0);
        if let Some(g) = back {
            break path[g..].to_vec();
        }
        if path.len() > k {
            return Err(Error::Numerical("cycle walk exceeded k colors".into()));
        }
    };

    let representatives = representatives_for(x, y, &colors);
    Ok(Cycle { colors, representatives })
}

fn representatives_for(x: &Assignment, y: &Assignment, colors: &[usize]) -> Vec<usize> {
    let l = colors.len();
    (0..l)
        .map(|s| {
            let (a, b) = (colors[s], colors[(s + 1) % l]);
            x.colors()
                .iter()
                .zip(y.colors())
                .position(|(&xc, &yc)| xc == a && yc == b)
                .expect("cycle edges have positive counts")
        })
        .collect()
}

/// Checks the cycle conditions against a contingency table.
pub fn is_valid_cycle(t: &ContingencyTable, colors: &[usize]) -> bool {
    let l = colors.len();
    if l < 2 || l > t.k() {
        return false;
    }
    for (i, a) in colors.iter().enumerate() {
        if *a >= t.k() || colors[i + 1..].contains(a) {
            return false;
        }
    }
    (0..l).all(|s| t.get(colors[s], colors[(s + 1) % l]) > 0)
}

/// Moves each representative of `cycle` to its `x` color, producing `y₁`.
///
/// Fails when a representative is not in the set the cycle claims, i.e. the
/// cycle was not derived from this `y`.
pub fn apply_cycle(y: &Assignment, cycle: &Cycle) -> Result<Assignment> {
    let l = cycle.len();
    let mut colors = y.colors().to_vec();
    for s in 0..l {
        let u = cycle.representatives[s];
        let (from_x, in_y) = (cycle.colors[s], cycle.colors[(s + 1) % l]);
        if u >= colors.len() || y.colors()[u] != in_y {
            return Err(Error::Input(format!(
                "vertex {u} does not carry color {in_y} in y"
            )));
        }
        colors[u] = from_x;
    }
    Assignment::new(colors, y.palette().clone())
}
