//! Seed derivation. Every random draw in a trial comes from a stream keyed by
//! `(base seed, trial index, role)`, so results never depend on scheduling.
//! The same trial index at different σ reuses the same truth and noise draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a random stream is used for inside one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Truth,
    Noise,
}

impl Role {
    fn tag(self) -> u64 {
        match self {
            Role::Truth => 0x7472_7574,
            Role::Noise => 0x6e6f_6973,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed identifying trial `trial` of an experiment seeded with `base`.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(base) ^ trial)
}

/// Stream for one role inside the trial identified by `trial_seed`.
pub fn stream(trial_seed: u64, role: Role) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(trial_seed ^ role.tag()))
}
