use serde::{Deserialize, Serialize};

use super::assignment::Assignment;
use crate::error::{Error, Result};

/// Equivalence used when comparing assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    /// Same partition of the vertices, colors permuted arbitrarily.
    Partition,
    /// Same up to a global root-of-unity rotation.
    Phase,
}

fn check_phase(x: &Assignment) -> Result<()> {
    if x.palette().is_roots() {
        Ok(())
    } else {
        Err(Error::Model("phase equivalence needs a root-of-unity palette".into()))
    }
}

pub fn is_equivalent(x: &Assignment, y: &Assignment, mode: EquivalenceMode) -> Result<bool> {
    x.check_compatible(y)?;
    let k = x.k();
    match mode {
        EquivalenceMode::Partition => {
            let mut fwd = vec![usize::MAX; k];
            let mut back = vec![usize::MAX; k];
            for (&a, &b) in x.colors().iter().zip(y.colors()) {
                if fwd[a] == usize::MAX && back[b] == usize::MAX {
                    fwd[a] = b;
                    back[b] = a;
                } else if fwd[a] != b || back[b] != a {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        EquivalenceMode::Phase => {
            check_phase(x)?;
            check_phase(y)?;
            let shift = (x.colors()[0] + k - y.colors()[0]) % k;
            Ok(x
                .colors()
                .iter()
                .zip(y.colors())
                .all(|(&a, &b)| a == (b + shift) % k))
        }
    }
}

/// Canonical member of the class of `x`: first-appearance relabeling for
/// partitions, rotation putting vertex 1 at phase 0 for phases.
pub fn canonical_representative(x: &Assignment, mode: EquivalenceMode) -> Result<Assignment> {
    Ok(Assignment::from_parts_unchecked(canonical_colors(x, mode)?, x.palette().clone()))
}

pub(crate) fn canonical_colors(x: &Assignment, mode: EquivalenceMode) -> Result<Vec<usize>> {
    let k = x.k();
    match mode {
        EquivalenceMode::Partition => {
            let mut relabel = vec![usize::MAX; k];
            let mut next = 0;
            Ok(x
                .colors()
                .iter()
                .map(|&c| {
                    if relabel[c] == usize::MAX {
                        relabel[c] = next;
                        next += 1;
                    }
                    relabel[c]
                })
                .collect())
        }
        EquivalenceMode::Phase => {
            check_phase(x)?;
            let anchor = x.colors()[0];
            Ok(x.colors().iter().map(|&c| (c + k - anchor) % k).collect())
        }
    }
}
