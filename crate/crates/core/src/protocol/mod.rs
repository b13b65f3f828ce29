//! The teleportation circuit and the dense-coding comparison.

mod dense;
mod teleport;

pub use dense::{
    dense_coding_outcomes, encode_message, run_dense_coding, DenseCodingResult, DenseOutcomeTrace,
    DECODE_RESERVOIR, ENCODE_RESERVOIR,
};
pub use teleport::{
    bell_state_analysis, classify, feed_forward, prepare_entangled_pair, prepare_unknown_state,
    run_teleportation, target_state, BellAnalysis, BellOutcome, Classification, Correction,
    FeedForwardStatus, OutcomeResult, TeleportationResult, UnknownStateSpec, ANALYSIS_RESERVOIR,
    PREP_RESERVOIR,
};

use crate::error::Result;
use crate::reservoir::PhaseFrame;

/// Whether the preparation and analysis steps draw on one condensate or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReservoirConfig {
    Shared,
    Distinct,
}

impl ReservoirConfig {
    pub fn name(self) -> &'static str {
        match self {
            ReservoirConfig::Shared => "shared",
            ReservoirConfig::Distinct => "distinct",
        }
    }
}

/// Register `first` with `points` grid points and `second` either as its own
/// symbol or as an alias of `first`.
pub(crate) fn two_reservoir_frame(
    first: &str,
    second: &str,
    config: ReservoirConfig,
    points: usize,
) -> Result<PhaseFrame> {
    let mut frame = PhaseFrame::new();
    frame.register(first, points)?;
    match config {
        ReservoirConfig::Shared => frame.alias(second, first)?,
        ReservoirConfig::Distinct => frame.register(second, points)?,
    };
    Ok(frame)
}

/// Generator behind [`seeded_specs`], recorded in sweep reports.
pub const CORPUS_GENERATOR: &str = "ChaCha8Rng::seed_from_u64";

/// `n` specs with `theta'` uniform on `[0, pi/2]` and `phi` uniform on `[0, 2 pi)`.
pub fn seeded_specs(n: usize, seed: u64) -> Vec<UnknownStateSpec> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| UnknownStateSpec {
            theta_prime: rng.random_range(0.0..=std::f64::consts::FRAC_PI_2),
            phi: rng.random_range(0.0..std::f64::consts::TAU),
        })
        .collect()
}
