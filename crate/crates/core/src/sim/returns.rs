use serde::{Deserialize, Serialize};

use crate::algebra::Site;
use crate::error::{MixerError, Result};

use super::chain::ChainState;
use super::rng::SeedStream;

/// Default number of steps after which a return sample is censored.
pub const DEFAULT_RETURN_CAP: u64 = 10_000_000;

/// First return of the mixer to a tile, `T_1(z) = inf{t ≥ 1 : S_t = σ_t(z)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReturnSample {
    /// `(T_1(z), σ_T(z) − z)`.
    Returned { time: u64, offset: Site },
    /// No return within the step cap.
    Censored,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnSamples {
    pub tile: Site,
    pub cap: u64,
    pub samples: Vec<ReturnSample>,
}

impl ReturnSamples {
    pub fn censored(&self) -> usize {
        self.samples
            .iter()
            .filter(|s| matches!(s, ReturnSample::Censored))
            .count()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.censored() as f64 / self.samples.len() as f64
    }

    pub fn offsets(&self) -> impl Iterator<Item = Site> + '_ {
        self.samples.iter().filter_map(|s| match s {
            ReturnSample::Returned { offset, .. } => Some(*offset),
            ReturnSample::Censored => None,
        })
    }
}

/// Runs one fresh chain until it first stands on the tile marked `tile`.
pub fn first_return(tile: Site, cap: u64, seed: u64) -> ReturnSample {
    let mut chain = ChainState::new(seed);
    while chain.time() < cap {
        chain.step();
        if chain.current_tile() == tile {
            return ReturnSample::Returned {
                time: chain.time(),
                offset: chain.position() - tile,
            };
        }
    }
    ReturnSample::Censored
}

/// `n_samples` independent first returns to `tile`; sample `i` uses seed
/// `SeedStream::new(seed).seed(i)`.
pub fn return_time_samples(
    tile: Site,
    n_samples: usize,
    seed: u64,
    cap: u64,
) -> Result<ReturnSamples> {
    if n_samples == 0 {
        return Err(MixerError::Config("n_samples must be at least 1".into()));
    }
    let seeds = SeedStream::new(seed);
    let samples = (0..n_samples as u64)
        .map(|i| first_return(tile, cap, seeds.seed(i)))
        .collect();
    Ok(ReturnSamples { tile, cap, samples })
}
