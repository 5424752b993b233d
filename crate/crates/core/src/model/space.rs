use std::sync::Arc;

use super::assignment::Assignment;
use super::palette::Palette;
use crate::error::{Error, Result};

/// Default cap on exhaustively enumerated states.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceKind {
    /// Every map `[n] → palette`.
    Omega,
    /// Exactly `n_i` vertices of color `i`, with `n_1 ≥ … ≥ n_k ≥ 1`.
    FixedCounts(Vec<usize>),
    /// Every color used by at least `⌈c·n⌉` vertices.
    MinFraction(f64),
    /// Roots of unity with `n/k` vertices per color.
    ThetaA,
}

/// A sample space of assignments over a shared palette.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpace {
    kind: SpaceKind,
    n: usize,
    palette: Arc<Palette>,
}

impl SampleSpace {
    pub fn omega(n: usize, palette: Arc<Palette>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("a sample space needs n ≥ 1".into()));
        }
        Ok(SampleSpace { kind: SpaceKind::Omega, n, palette })
    }

    pub fn fixed_counts(sizes: Vec<usize>, palette: Arc<Palette>) -> Result<Self> {
        if sizes.len() != palette.k() {
            return Err(Error::Input(format!(
                "{} group sizes for a palette of {} colors",
                sizes.len(),
                palette.k()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::Input("every group size must be at least 1".into()));
        }
        if sizes.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input(format!(
                "group sizes must be non-increasing, got {sizes:?}"
            )));
        }
        let n = sizes.iter().sum();
        Ok(SampleSpace { kind: SpaceKind::FixedCounts(sizes), n, palette })
    }

    pub fn min_fraction(n: usize, c: f64, palette: Arc<Palette>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("a sample space needs n ≥ 1".into()));
        }
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::Range(format!("min fraction must lie in (0, 1], got {c}")));
        }
        Ok(SampleSpace { kind: SpaceKind::MinFraction(c), n, palette })
    }

    pub fn theta_a(n: usize, k: usize) -> Result<Self> {
        let palette = Arc::new(Palette::roots(k)?);
        if n == 0 || n % k != 0 {
            return Err(Error::Input(format!("theta-A needs k | n, got n={n}, k={k}")));
        }
        Ok(SampleSpace { kind: SpaceKind::ThetaA, n, palette })
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.palette.k()
    }

    pub fn palette(&self) -> &Arc<Palette> {
        &self.palette
    }

    /// Whether every member shares a single group-size vector.
    pub fn has_fixed_counts(&self) -> bool {
        matches!(self.kind, SpaceKind::FixedCounts(_) | SpaceKind::ThetaA)
    }

    /// The shared group-size vector of fixed-count spaces.
    pub fn group_sizes(&self) -> Option<Vec<usize>> {
        match &self.kind {
            SpaceKind::FixedCounts(s) => Some(s.clone()),
            SpaceKind::ThetaA => Some(vec![self.n / self.k(); self.k()]),
            _ => None,
        }
    }

    /// `⌈c·n⌉` for min-fraction spaces. A 1e-9 slack absorbs products like
    /// `0.3 * 10` landing just above an integer.
    pub fn min_count(&self) -> Option<usize> {
        match self.kind {
            SpaceKind::MinFraction(c) => Some((c * self.n as f64 - 1e-9).ceil().max(0.0) as usize),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Assignment) -> bool {
        if x.n() != self.n || **x.palette() != *self.palette {
            return false;
        }
        self.contains_colors(x.colors())
    }

    fn contains_colors(&self, colors: &[usize]) -> bool {
        let mut sizes = vec![0usize; self.k()];
        for &c in colors {
            sizes[c] += 1;
        }
        match &self.kind {
            SpaceKind::Omega => true,
            SpaceKind::FixedCounts(s) => sizes == *s,
            SpaceKind::MinFraction(_) => {
                let m = self.min_count().unwrap_or(0);
                sizes.iter().all(|&s| s >= m)
            }
            SpaceKind::ThetaA => sizes.iter().all(|&s| s * self.k() == self.n),
        }
    }

    /// Number of members (as a float, since it can be astronomically large).
    pub fn size(&self) -> f64 {
        let k = self.k();
        match &self.kind {
            SpaceKind::Omega => (k as f64).powi(self.n as i32),
            SpaceKind::FixedCounts(s) => multinomial(s),
            SpaceKind::ThetaA => multinomial(&vec![self.n / k; k]),
            SpaceKind::MinFraction(_) => {
                let m = self.min_count().unwrap_or(0);
                let mut total = 0.0;
                compositions(self.n, k, m, &mut Vec::new(), &mut |c| total += multinomial(c));
                total
            }
        }
    }

    /// Streams every member exactly once in colexicographic order (vertex 1
    /// varies fastest). Refuses when the space holds more than `cap` states.
    pub fn enumerate(&self, cap: u64) -> Result<Enumeration> {
        let count = self.size();
        if count > cap as f64 {
            return Err(Error::CapExceeded { count, cap });
        }
        let k = self.k();
        let (state, start) = match &self.kind {
            SpaceKind::FixedCounts(s) => (State::Multiset, first_multiset(s)),
            SpaceKind::ThetaA => (State::Multiset, first_multiset(&vec![self.n / k; k])),
            _ => (State::Odometer, vec![0; self.n]),
        };
        Ok(Enumeration { space: self.clone(), state, current: Some(start) })
    }
}

/// `n! / (n_1! ⋯ n_k!)` evaluated in floating point.
pub fn multinomial(sizes: &[usize]) -> f64 {
    let mut remaining = 0usize;
    let mut acc = 1.0f64;
    for &s in sizes {
        for j in 1..=s {
            remaining += 1;
            acc *= remaining as f64 / j as f64;
        }
    }
    acc
}

fn compositions(n: usize, parts: usize, min: usize, prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if parts == 1 {
        if n >= min {
            prefix.push(n);
            f(prefix);
            prefix.pop();
        }
        return;
    }
    let mut first = min;
    while first <= n {
        prefix.push(first);
        compositions(n - first, parts - 1, min, prefix, f);
        prefix.pop();
        first += 1;
    }
}

// Colex-first arrangement: the reversed vector is sorted ascending.
fn first_multiset(sizes: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect();
    v.reverse();
    v
}

#[derive(Clone, Copy, PartialEq)]
enum State {
    Odometer,
    Multiset,
}

/// Stream of assignments produced by [`SampleSpace::enumerate`].
pub struct Enumeration {
    space: SampleSpace,
    state: State,
    current: Option<Vec<usize>>,
}

impl Enumeration {
    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else { return };
        let k = self.space.k();
        let done = match self.state {
            State::Odometer => {
                let mut i = 0;
                loop {
                    if i == cur.len() {
                        break true;
                    }
                    cur[i] += 1;
                    if cur[i] < k {
                        break false;
                    }
                    cur[i] = 0;
                    i += 1;
                }
            }
            // Lexicographic successor of the reversed vector.
            State::Multiset => !next_colex_permutation(cur),
        };
        if done {
            self.current = None;
        }
    }
}

/// Advances `v` to its colexicographic successor among rearrangements of
/// the same multiset; returns false after the last one.
fn next_colex_permutation(v: &mut [usize]) -> bool {
    v.reverse();
    let n = v.len();
    let ok = if n < 2 {
        false
    } else {
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            false
        } else {
            let mut j = n - 1;
            while v[j] <= v[i - 1] {
                j -= 1;
            }
            v.swap(i - 1, j);
            v[i..].reverse();
            true
        }
    };
    v.reverse();
    ok
}

impl Iterator for Enumeration {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        loop {
            let cur = self.current.clone()?;
            self.advance();
            if self.state == State::Multiset || self.space.contains_colors(&cur) {
                return Some(Assignment::from_parts_unchecked(cur, self.space.palette.clone()));
            }
        }
    }
}
