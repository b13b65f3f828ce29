use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use super::teleport::bell_state_analysis;
use super::{two_reservoir_frame, ReservoirConfig};
use crate::error::{Error, Result};
use crate::fock::{apply_phased, embed_and_apply, ModeRegister, QuantumState};
use crate::gates::{hopping_gate, number_rotation_gate, phase_gate, HoppingConvention};
use crate::hamiltonian::{MODE_ALICE, MODE_BOB};
use crate::reservoir::PhaseFrame;
use crate::tolerances::DETERMINISTIC;

pub const ENCODE_RESERVOIR: &str = "encode";
pub const DECODE_RESERVOIR: &str = "decode";

/// Outcome `(n_A, n_B)` of Bob's analysis for each message.
const DECODING: [((usize, usize), u8); 4] = [((0, 0), 0), ((0, 1), 1), ((1, 1), 2), ((1, 0), 3)];

/// Alice's local encoding of `message` on her mode of the shared pair:
/// identity, Z, a half rotation with the reservoir (X-like), or Z then the
/// half rotation.
pub fn encode_message(
    pair: &QuantumState,
    message: u8,
    frame: &PhaseFrame,
) -> Result<QuantumState> {
    let reg = pair.register().clone();
    let z = |s: &QuantumState| embed_and_apply(s, &phase_gate(&reg, MODE_ALICE, PI)?);
    let x = |s: &QuantumState| {
        apply_phased(
            s,
            &number_rotation_gate(&reg, MODE_ALICE, FRAC_PI_2, ENCODE_RESERVOIR, frame)?,
        )
    };
    match message {
        0 => Ok(pair.clone()),
        1 => z(pair),
        2 => x(pair),
        3 => x(&z(pair)?),
        m => Err(Error::InvalidParameter(format!(
            "message must be 0..=3, got {m}"
        ))),
    }
}

/// Outcome probabilities of Bob's analysis for one message.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOutcomeTrace {
    pub outcome: (usize, usize),
    /// Decoded message this outcome stands for.
    pub decodes_to: u8,
    pub probability: f64,
    pub per_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseCodingResult {
    pub message: u8,
    pub decoded: u8,
    pub config: ReservoirConfig,
    pub trace: Vec<DenseOutcomeTrace>,
    /// True when one outcome occurs with certainty at every grid point.
    pub deterministic: bool,
}

/// Run the dense-coding circuit and report the outcome distribution, whatever
/// the reservoir configuration.
pub fn dense_coding_outcomes(
    message: u8,
    config: ReservoirConfig,
    grid_points: usize,
) -> Result<DenseCodingResult> {
    let frame = two_reservoir_frame(ENCODE_RESERVOIR, DECODE_RESERVOIR, config, grid_points)?;
    let reg = ModeRegister::new([(MODE_ALICE, 2), (MODE_BOB, 2)])?;
    let start = QuantumState::basis(reg.clone(), &[1, 0])?;
    let pair = embed_and_apply(
        &start,
        &hopping_gate(
            &reg,
            MODE_ALICE,
            MODE_BOB,
            FRAC_PI_4,
            HoppingConvention::RealRotation,
        )?,
    )?;
    let encoded = encode_message(&pair, message, &frame)?;
    let analysis = bell_state_analysis(&encoded, MODE_ALICE, MODE_BOB, DECODE_RESERVOIR, &frame)?;
    let n = analysis.state.num_points();
    let trace: Vec<DenseOutcomeTrace> = DECODING
        .iter()
        .map(|&(outcome, decodes_to)| {
            let per_point = analysis
                .branch(outcome.0, outcome.1)
                .map_or(vec![0.0; n], |b| b.probabilities().to_vec());
            DenseOutcomeTrace {
                outcome,
                decodes_to,
                probability: per_point.iter().sum::<f64>() / n as f64,
                per_point,
            }
        })
        .collect();
    let certain = trace
        .iter()
        .find(|t| t.per_point.iter().all(|p| (p - 1.0).abs() <= DETERMINISTIC));
    let best = trace
        .iter()
        .max_by(|a, b| a.probability.total_cmp(&b.probability))
        .expect("four outcomes");
    Ok(DenseCodingResult {
        message,
        decoded: certain.unwrap_or(best).decodes_to,
        config,
        deterministic: certain.is_some(),
        trace,
    })
}

/// Send two bits through the shared single-particle pair. Only a shared
/// reservoir lets the encoding phase cancel against the analysis phase, so
/// distinct reservoirs are refused.
pub fn run_dense_coding(
    message: u8,
    config: ReservoirConfig,
    grid_points: usize,
) -> Result<DenseCodingResult> {
    if config == ReservoirConfig::Distinct {
        return Err(Error::PhaseMatching(
            "dense coding needs the encoding and decoding reservoirs to be the same condensate"
                .into(),
        ));
    }
    dense_coding_outcomes(message, config, grid_points)
}
