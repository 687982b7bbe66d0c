//! Majority vote over repeated runs of a randomized yes/no procedure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MajorityVote {
    pub outcome: bool,
    pub yes: usize,
    pub no: usize,
}

/// Runs `trial` with sub-seeds `derive_seed(rng_seed, i)` for `i < trials` and
/// returns the majority answer. `trials` must be odd so there is no tie.
pub fn majority_amplify(
    mut trial: impl FnMut(u64) -> Result<bool>,
    trials: usize,
    rng_seed: u64,
) -> Result<MajorityVote> {
    if trials.is_multiple_of(2) {
        return Err(Error::invalid("trials", format!("{trials} is not odd")));
    }
    let mut yes = 0;
    for i in 0..trials {
        if trial(derive_seed(rng_seed, i as u64))? {
            yes += 1;
        }
    }
    Ok(MajorityVote {
        outcome: 2 * yes > trials,
        yes,
        no: trials - yes,
    })
}
