//! Tolerances and pinned thresholds shared by the self-test and the test
//! suites.

/// Unitarity / hermiticity checks (max-entry norm).
pub const OPERATOR: f64 = 1e-12;
/// Probabilities summing to one at each grid point.
pub const PROBABILITY_SUM: f64 = 1e-12;
/// Success probability of teleportation against 1/2.
pub const SUCCESS_PROBABILITY: f64 = 1e-9;
/// Per-phase fidelity of Bob's corrected state against the target.
pub const SUCCESS_FIDELITY: f64 = 1e-9;
/// Trace distance of the failure-branch mode state from the maximally mixed state.
pub const FAILURE_MIXEDNESS: f64 = 1e-9;
/// Upper bound on Bob's failure-branch fidelity reached by some corpus spec.
pub const FAILURE_FIDELITY_BOUND: f64 = 0.75 + 1e-9;
/// Bell-analysis outcome certainty.
pub const BELL_CERTAINTY: f64 = 1e-12;
/// Twirl idempotence.
pub const TWIRL_IDEMPOTENCE: f64 = 1e-12;
/// Entanglement entropy of the two-boson mode state.
pub const ENTROPY: f64 = 1e-9;
/// Hard-core swap infidelity at U/J = 1000.
pub const HARDCORE_INFIDELITY_AT_1000: f64 = 1e-3;
/// Resolved-reservoir deviation from the ideal rotation at nbar = 256.
pub const RESERVOIR_DEVIATION_AT_256: f64 = 0.05;
/// Minimum probability spread across the grid for a decoding to count as
/// phase dependent.
pub const PHASE_DEPENDENCE: f64 = 1e-3;
/// Deterministic decoding: probability 1 within this.
pub const DETERMINISTIC: f64 = 1e-12;
