//! Assignments, palettes, sample spaces, equivalence classes, contingency
//! tables and color cycles.

mod assignment;
mod contingency;
mod cycle;
mod equivalence;
mod palette;
mod space;

pub use assignment::Assignment;
pub use contingency::{contingency, distance_omega, distance_theta, ContingencyTable};
pub use cycle::{apply_cycle, find_cycle, is_valid_cycle, Cycle};
pub use equivalence::{canonical_representative, is_equivalent, EquivalenceMode};
pub(crate) use equivalence::canonical_colors;
pub use palette::{root_of_unity, roots_table, Palette};
pub use space::{multinomial, Enumeration, SampleSpace, SpaceKind, DEFAULT_ENUMERATION_CAP};
