use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::DVector;

use super::{two_reservoir_frame, ReservoirConfig};
use crate::error::{Error, Result};
use crate::fock::{
    apply_phased, embed_and_apply, fidelity, measure_number, partial_trace, trace_distance, Branch,
    Measurement, ModeRegister, QuantumState, C64,
};
use crate::gates::{
    fermionic_swap_gate, hopping_gate, number_rotation_gate, phase_gate, HoppingConvention,
};
use crate::hamiltonian::{MODE_ALICE, MODE_BOB, MODE_SOURCE};
use crate::reservoir::{ssr_compliance_check, twirl_all, PhaseFrame};

/// Charlie's condensate, used to prepare the unknown state.
pub const PREP_RESERVOIR: &str = "charlie";
/// Alice's condensate, used in the Bell analysis.
pub const ANALYSIS_RESERVOIR: &str = "alice";

/// The state Charlie prepares on mode `a`:
/// `cos(theta') |0> - i sin(theta') e^{i(theta + phi)} |1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnknownStateSpec {
    pub theta_prime: f64,
    pub phi: f64,
}

/// Closed-form target on a single qubit mode at preparation phase `theta`.
pub fn target_state(spec: &UnknownStateSpec, mode: &str, theta: f64) -> Result<QuantumState> {
    let (s, c) = spec.theta_prime.sin_cos();
    let v = DVector::from_vec(vec![
        C64::new(c, 0.0),
        C64::new(0.0, -s) * C64::from_polar(1.0, theta + spec.phi),
    ]);
    QuantumState::pure(ModeRegister::new([(mode, 2)])?, v)
}

fn prepare_on(
    state: &QuantumState,
    spec: &UnknownStateSpec,
    frame: &PhaseFrame,
) -> Result<QuantumState> {
    let reg = state.register().clone();
    let rotated = apply_phased(
        state,
        &number_rotation_gate(&reg, MODE_SOURCE, spec.theta_prime, PREP_RESERVOIR, frame)?,
    )?;
    embed_and_apply(&rotated, &phase_gate(&reg, MODE_SOURCE, spec.phi)?)
}

/// Rotate the vacuum of mode `a` with the preparation reservoir, then apply
/// the bias phase. `frame` must register [`PREP_RESERVOIR`].
pub fn prepare_unknown_state(spec: &UnknownStateSpec, frame: &PhaseFrame) -> Result<QuantumState> {
    let vac = QuantumState::basis(ModeRegister::new([(MODE_SOURCE, 2)])?, &[0])?;
    prepare_on(&vac, spec, frame)
}

fn distribute_pair(state: &QuantumState) -> Result<QuantumState> {
    let gate = hopping_gate(
        state.register(),
        MODE_ALICE,
        MODE_BOB,
        FRAC_PI_4,
        HoppingConvention::RealRotation,
    )?;
    embed_and_apply(state, &gate)
}

/// One particle starting in A, half-swapped into B: `(|10> + |01>)/sqrt 2`.
pub fn prepare_entangled_pair() -> Result<QuantumState> {
    let start = QuantumState::basis(
        ModeRegister::new([(MODE_ALICE, 2), (MODE_BOB, 2)])?,
        &[1, 0],
    )?;
    distribute_pair(&start)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PsiPlus,
    PsiMinus,
    Failure,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::PsiPlus => "psi_plus",
            Classification::PsiMinus => "psi_minus",
            Classification::Failure => "failure",
        }
    }
}

/// Occupations of the two analysed modes after the Bell analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BellOutcome {
    pub n_a: usize,
    pub n_alice: usize,
    pub classification: Classification,
}

/// `(0,0)` is psi+, `(0,1)` psi-, and any outcome with a particle left in the
/// first mode is a failure.
pub fn classify(n_a: usize, n_alice: usize) -> BellOutcome {
    let classification = match (n_a, n_alice) {
        (0, 0) => Classification::PsiPlus,
        (0, _) => Classification::PsiMinus,
        _ => Classification::Failure,
    };
    BellOutcome {
        n_a,
        n_alice,
        classification,
    }
}

#[derive(Debug, Clone)]
pub struct BellAnalysis {
    /// State after the three analysis steps, before read-out.
    pub state: QuantumState,
    pub measurement: Measurement,
    /// Positions of (`first`, `second`) within each outcome tuple.
    order: (usize, usize),
}

impl BellAnalysis {
    /// Classified outcomes paired with their branches.
    pub fn outcomes(&self) -> Vec<(BellOutcome, &Branch)> {
        self.measurement
            .branches
            .iter()
            .map(|b| {
                (
                    classify(b.outcome()[self.order.0], b.outcome()[self.order.1]),
                    b,
                )
            })
            .collect()
    }

    pub fn branch(&self, n_first: usize, n_second: usize) -> Option<&Branch> {
        self.measurement
            .branches
            .iter()
            .find(|b| b.outcome()[self.order.0] == n_first && b.outcome()[self.order.1] == n_second)
    }

    pub fn probability(&self, n_first: usize, n_second: usize) -> f64 {
        self.branch(n_first, n_second)
            .map_or(0.0, Branch::probability)
    }
}

/// Bell analysis of modes `first` and `second`: rotate `second` by a quarter
/// turn with `reservoir`, swap the two modes with the fermionic sign, rotate
/// both again, and read out both occupations.
pub fn bell_state_analysis(
    state: &QuantumState,
    first: &str,
    second: &str,
    reservoir: &str,
    frame: &PhaseFrame,
) -> Result<BellAnalysis> {
    let reg = state.register().clone();
    let mut s = apply_phased(
        state,
        &number_rotation_gate(&reg, second, FRAC_PI_4, reservoir, frame)?,
    )?;
    s = embed_and_apply(&s, &fermionic_swap_gate(&reg, first, second)?)?;
    s = apply_phased(
        &s,
        &number_rotation_gate(&reg, first, FRAC_PI_4, reservoir, frame)?,
    )?;
    s = apply_phased(
        &s,
        &number_rotation_gate(&reg, second, FRAC_PI_4, reservoir, frame)?,
    )?;
    let measurement = measure_number(&s, &[first, second])?;
    let pos = |label: &str| measurement.measured.position(label);
    let order = (pos(first)?, pos(second)?);
    Ok(BellAnalysis {
        state: s,
        measurement,
        order,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    Identity,
    PauliZ,
    None,
}

impl Correction {
    pub fn for_outcome(outcome: BellOutcome) -> Self {
        match outcome.classification {
            Classification::PsiPlus => Correction::Identity,
            Classification::PsiMinus => Correction::PauliZ,
            Classification::Failure => Correction::None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Correction::Identity => "identity",
            Correction::PauliZ => "z",
            Correction::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedForwardStatus {
    Success,
    Failed,
}

/// Bob's conditional correction on `mode` of `state`.
pub fn feed_forward(
    outcome: BellOutcome,
    state: &QuantumState,
    mode: &str,
) -> Result<(QuantumState, FeedForwardStatus, Correction)> {
    match outcome.classification {
        Classification::PsiPlus => Ok((
            state.clone(),
            FeedForwardStatus::Success,
            Correction::Identity,
        )),
        Classification::PsiMinus => {
            let z = phase_gate(state.register(), mode, PI)?;
            Ok((
                embed_and_apply(state, &z)?,
                FeedForwardStatus::Success,
                Correction::PauliZ,
            ))
        }
        Classification::Failure => Ok((state.clone(), FeedForwardStatus::Failed, Correction::None)),
    }
}

/// One read-out of Alice's modes and what Bob ends up with.
#[derive(Debug, Clone)]
pub struct OutcomeResult {
    pub outcome: BellOutcome,
    pub correction: Correction,
    /// Phase-averaged probability.
    pub probability: f64,
    /// Bob's state per grid point, before the correction.
    pub raw: Branch,
    /// Bob's state per grid point, after the correction.
    pub corrected: Branch,
    /// Fidelity of the corrected state with the target at each grid point
    /// where the outcome occurs.
    pub fidelities: Vec<Option<f64>>,
}

impl OutcomeResult {
    pub fn fidelity_min(&self) -> f64 {
        self.fidelities
            .iter()
            .flatten()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn fidelity_mean(&self) -> f64 {
        let v: Vec<f64> = self.fidelities.iter().flatten().cloned().collect();
        v.iter().sum::<f64>() / v.len() as f64
    }
}

#[derive(Debug, Clone)]
pub struct TeleportationResult {
    pub spec: UnknownStateSpec,
    pub config: ReservoirConfig,
    pub grid_points: usize,
    /// Canonical phase symbols of the preparation and analysis reservoirs.
    pub prep_symbol: String,
    pub analysis_symbol: String,
    pub outcomes: Vec<OutcomeResult>,
    /// Phase-averaged `P(n_a = 0)`.
    pub success_probability: f64,
    /// `P(n_a = 0)` at every grid point.
    pub success_per_point: Vec<f64>,
    /// Largest `|sum_outcomes p - 1|` over the grid.
    pub probability_sum_error: f64,
    /// Trace distance of the twirled mode-A state, conditioned on a particle in
    /// mode a, from the maximally mixed state.
    pub failure_mode_a_distance: f64,
    /// Twirled mode-A state on the failure branch.
    pub failure_mode_a: QuantumState,
    /// Largest per-phase fidelity of Bob's failure-branch state, after
    /// averaging over the analysis phase, with the target (distinct
    /// reservoirs only).
    pub failure_bob_fidelity: Option<f64>,
    /// Bob's twirled reduced state averaged over all outcomes.
    pub bob_unconditional: QuantumState,
    /// Largest inter-sector coherence over all twirled terminal states.
    pub ssr_max_offblock: f64,
    pub ssr_compliant: bool,
}

fn phase_of(branch: &Branch, point: usize, symbol: &str) -> f64 {
    branch
        .phases_at(point)
        .into_iter()
        .find(|(s, _)| s == symbol)
        .map_or(0.0, |(_, t)| t)
}

/// Full teleportation run over the phase grid(s): preparation, Bell analysis
/// by Alice, and Bob's feed-forward.
pub fn run_teleportation(
    spec: &UnknownStateSpec,
    config: ReservoirConfig,
    grid_points: usize,
) -> Result<TeleportationResult> {
    if !(spec.theta_prime.is_finite() && spec.phi.is_finite()) {
        return Err(Error::InvalidParameter("spec angles must be finite".into()));
    }
    let frame = two_reservoir_frame(PREP_RESERVOIR, ANALYSIS_RESERVOIR, config, grid_points)?;
    let prep_symbol = frame.resolve(PREP_RESERVOIR)?.symbol.clone();
    let analysis_symbol = frame.resolve(ANALYSIS_RESERVOIR)?.symbol.clone();

    let register = ModeRegister::new([(MODE_SOURCE, 2), (MODE_ALICE, 2), (MODE_BOB, 2)])?;
    let start = QuantumState::basis(register, &[0, 1, 0])?;
    let initial = distribute_pair(&prepare_on(&start, spec, &frame)?)?;
    let analysis = bell_state_analysis(
        &initial,
        MODE_SOURCE,
        MODE_ALICE,
        ANALYSIS_RESERVOIR,
        &frame,
    )?;

    let mut ssr_worst = ssr_compliance_check(&twirl_all(&analysis.state)?)?.max_offblock_norm;
    let mut outcomes = Vec::new();
    for (outcome, branch) in analysis.outcomes() {
        let correction = Correction::for_outcome(outcome);
        let corrected = branch.map_states(|s| Ok(feed_forward(outcome, s, MODE_BOB)?.0))?;
        let fidelities = (0..corrected.num_points())
            .map(|i| {
                corrected
                    .conditional(i)
                    .map(|s| {
                        fidelity(
                            s,
                            &target_state(spec, MODE_BOB, phase_of(&corrected, i, &prep_symbol))?,
                        )
                    })
                    .transpose()
            })
            .collect::<Result<Vec<_>>>()?;
        if let (_, Some(avg)) = corrected.averaged()? {
            ssr_worst = ssr_worst.max(ssr_compliance_check(&avg)?.max_offblock_norm);
        }
        outcomes.push(OutcomeResult {
            outcome,
            correction,
            probability: branch.probability(),
            raw: branch.clone(),
            corrected,
            fidelities,
        });
    }
    outcomes.sort_by_key(|o| (o.outcome.n_a, o.outcome.n_alice));

    let n = analysis.state.num_points();
    let mut success_per_point = vec![0.0; n];
    let mut sums = vec![0.0; n];
    for o in &outcomes {
        for (i, p) in o.raw.probabilities().iter().enumerate() {
            sums[i] += p;
            if o.outcome.classification != Classification::Failure {
                success_per_point[i] += p;
            }
        }
    }
    let probability_sum_error = sums.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    let success_probability = success_per_point.iter().sum::<f64>() / n as f64;

    // Failure branch: condition on a particle in mode a only.
    let by_a = measure_number(&analysis.state, &[MODE_SOURCE])?;
    let failure = by_a
        .branch(&[1])
        .ok_or_else(|| Error::InvalidParameter("failure branch never occurs".into()))?;
    let (_, failure_ab) = failure.averaged()?;
    let failure_ab = failure_ab.expect("failure branch has nonzero probability");
    ssr_worst = ssr_worst.max(ssr_compliance_check(&failure_ab)?.max_offblock_norm);
    let failure_mode_a = partial_trace(&failure_ab, &[MODE_ALICE])?;
    ssr_worst = ssr_worst.max(ssr_compliance_check(&failure_mode_a)?.max_offblock_norm);
    let mixed = QuantumState::mixed(
        failure_mode_a.register().clone(),
        nalgebra::DMatrix::from_diagonal_element(2, 2, C64::new(0.5, 0.0)),
    )?;
    let failure_mode_a_distance = trace_distance(&failure_mode_a, &mixed)?;

    let failure_bob_fidelity = match config {
        ReservoirConfig::Distinct => {
            let bob = failure
                .map_states(|s| partial_trace(s, &[MODE_BOB]))?
                .twirl(&analysis_symbol)?;
            let mut best = 0.0f64;
            for i in 0..bob.num_points() {
                if let Some(s) = bob.conditional(i) {
                    let t = target_state(spec, MODE_BOB, phase_of(&bob, i, &prep_symbol))?;
                    best = best.max(fidelity(s, &t)?);
                }
            }
            Some(best)
        }
        ReservoirConfig::Shared => None,
    };

    let bob_unconditional = twirl_all(&partial_trace(&analysis.state, &[MODE_BOB])?)?;
    ssr_worst = ssr_worst.max(ssr_compliance_check(&bob_unconditional)?.max_offblock_norm);

    Ok(TeleportationResult {
        spec: *spec,
        config,
        grid_points,
        prep_symbol,
        analysis_symbol,
        outcomes,
        success_probability,
        success_per_point,
        probability_sum_error,
        failure_mode_a_distance,
        failure_mode_a,
        failure_bob_fidelity,
        bob_unconditional,
        ssr_max_offblock: ssr_worst,
        ssr_compliant: ssr_worst <= crate::reservoir::SSR_TOL,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::fock::entropy_of_bipartition;

    fn frame(points: usize) -> PhaseFrame {
        two_reservoir_frame(
            PREP_RESERVOIR,
            ANALYSIS_RESERVOIR,
            ReservoirConfig::Distinct,
            points,
        )
        .unwrap()
    }

    #[test]
    fn unknown_state_matches_closed_form() {
        let f = frame(16);
        for spec in [
            UnknownStateSpec {
                theta_prime: 0.0,
                phi: 1.1,
            },
            UnknownStateSpec {
                theta_prime: FRAC_PI_2,
                phi: 0.0,
            },
            UnknownStateSpec {
                theta_prime: FRAC_PI_4,
                phi: FRAC_PI_2,
            },
            UnknownStateSpec {
                theta_prime: 0.3,
                phi: 4.0,
            },
        ] {
            let s = prepare_unknown_state(&spec, &f).unwrap();
            assert_eq!(s.num_points(), 16);
            for i in 0..16 {
                let theta = s.phases_at(i)[0].1;
                let want = target_state(&spec, MODE_SOURCE, theta).unwrap();
                let got = s.point(i);
                let d = got.amplitudes().unwrap() - want.amplitudes().unwrap();
                assert!(d.norm() < 1e-12, "{spec:?} at {theta}");
            }
        }
    }

    #[test]
    fn unknown_state_edge_cases() {
        let f = frame(16);
        let s = prepare_unknown_state(
            &UnknownStateSpec {
                theta_prime: 0.0,
                phi: 2.0,
            },
            &f,
        )
        .unwrap();
        for i in 0..16 {
            assert!((s.point(i).amplitudes().unwrap()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let s = prepare_unknown_state(
            &UnknownStateSpec {
                theta_prime: FRAC_PI_2,
                phi: 0.0,
            },
            &f,
        )
        .unwrap();
        for i in 0..16 {
            let theta = s.phases_at(i)[0].1;
            let v = s.point(i).amplitudes().unwrap().clone();
            assert!(v[0].norm() < 1e-15);
            assert!((v[1] - C64::new(0.0, -1.0) * C64::from_polar(1.0, theta)).norm() < 1e-15);
        }
    }

    #[test]
    fn entangled_pair() {
        let pair = prepare_entangled_pair().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = pair.amplitudes().unwrap();
        assert!(
            (v[1] - C64::new(r, 0.0)).norm() < 1e-15 && (v[2] - C64::new(r, 0.0)).norm() < 1e-15
        );
        let bob = partial_trace(&pair, &[MODE_BOB])
            .unwrap()
            .density_matrix()
            .unwrap();
        assert!(
            (bob - nalgebra::DMatrix::from_diagonal_element(2, 2, C64::new(0.5, 0.0))).norm()
                < 1e-15
        );
        assert!(ssr_compliance_check(&pair).unwrap().compliant);
        assert!((entropy_of_bipartition(&pair, &[MODE_ALICE]).unwrap() - 1.0).abs() < 1e-12);
    }

    fn bell_input(terms: &[(&[usize], f64)]) -> QuantumState {
        let reg = ModeRegister::new([(MODE_SOURCE, 2), (MODE_ALICE, 2)]).unwrap();
        let t: Vec<(&[usize], C64)> = terms.iter().map(|(o, a)| (*o, C64::new(*a, 0.0))).collect();
        QuantumState::superposition(reg, &t).unwrap()
    }

    #[test]
    fn bell_analysis_truth_table() {
        let f = frame(16);
        let psi_plus = bell_input(&[(&[0, 1], 1.0), (&[1, 0], 1.0)]);
        let a = bell_state_analysis(&psi_plus, MODE_SOURCE, MODE_ALICE, ANALYSIS_RESERVOIR, &f)
            .unwrap();
        let b = a.branch(0, 0).unwrap();
        assert!(b.probabilities().iter().all(|p| (p - 1.0).abs() < 1e-12));

        let psi_minus = bell_input(&[(&[0, 1], 1.0), (&[1, 0], -1.0)]);
        let a = bell_state_analysis(&psi_minus, MODE_SOURCE, MODE_ALICE, ANALYSIS_RESERVOIR, &f)
            .unwrap();
        assert!(a
            .branch(0, 1)
            .unwrap()
            .probabilities()
            .iter()
            .all(|p| (p - 1.0).abs() < 1e-12));

        // phi+ at theta = 0 ends in |11>; phi- in |10>
        let phi_plus = bell_input(&[(&[0, 0], 1.0), (&[1, 1], 1.0)]);
        let a = bell_state_analysis(&phi_plus, MODE_SOURCE, MODE_ALICE, ANALYSIS_RESERVOIR, &f)
            .unwrap();
        assert!((a.branch(1, 1).unwrap().probabilities()[0] - 1.0).abs() < 1e-12);
        let n_a_one: f64 = a
            .outcomes()
            .iter()
            .filter(|(o, _)| o.n_a == 1)
            .map(|(_, b)| b.probability())
            .sum();
        assert!((n_a_one - 1.0).abs() < 1e-12);
        let phi_minus = bell_input(&[(&[0, 0], 1.0), (&[1, 1], -1.0)]);
        let a = bell_state_analysis(&phi_minus, MODE_SOURCE, MODE_ALICE, ANALYSIS_RESERVOIR, &f)
            .unwrap();
        assert!((a.branch(1, 0).unwrap().probabilities()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn feed_forward_table() {
        let reg = ModeRegister::new([(MODE_BOB, 2)]).unwrap();
        let s = QuantumState::superposition(
            reg,
            &[(&[0], C64::new(0.6, 0.0)), (&[1], C64::new(0.0, 0.8))],
        )
        .unwrap();
        let (out, st, c) = feed_forward(classify(0, 0), &s, MODE_BOB).unwrap();
        assert_eq!((st, c), (FeedForwardStatus::Success, Correction::Identity));
        assert_eq!(out, s);
        let (out, st, c) = feed_forward(classify(0, 1), &s, MODE_BOB).unwrap();
        assert_eq!((st, c), (FeedForwardStatus::Success, Correction::PauliZ));
        assert!((out.amplitudes().unwrap()[1] - C64::new(0.0, -0.8)).norm() < 1e-15);
        for o in [classify(1, 0), classify(1, 1)] {
            let (out, st, _) = feed_forward(o, &s, MODE_BOB).unwrap();
            assert_eq!(st, FeedForwardStatus::Failed);
            assert_eq!(out, s);
        }
    }

    #[test]
    fn teleportation_succeeds_half_the_time() {
        for config in [ReservoirConfig::Distinct, ReservoirConfig::Shared] {
            let r = run_teleportation(
                &UnknownStateSpec {
                    theta_prime: 0.7,
                    phi: 2.1,
                },
                config,
                16,
            )
            .unwrap();
            assert!((r.success_probability - 0.5).abs() < 1e-9);
            assert!(r.success_per_point.iter().all(|p| (p - 0.5).abs() < 1e-9));
            assert!(r.probability_sum_error < 1e-12);
            for o in r
                .outcomes
                .iter()
                .filter(|o| o.outcome.classification != Classification::Failure)
            {
                assert!(
                    (o.fidelity_min() - 1.0).abs() < 1e-9,
                    "{config:?} {:?}",
                    o.outcome
                );
            }
            assert!(r.failure_mode_a_distance < 1e-9);
            assert!(r.ssr_compliant, "{}", r.ssr_max_offblock);
        }
    }

    #[test]
    fn vacuum_input_is_delivered_on_both_success_branches() {
        let r = run_teleportation(
            &UnknownStateSpec {
                theta_prime: 0.0,
                phi: 0.4,
            },
            ReservoirConfig::Distinct,
            16,
        )
        .unwrap();
        let success: Vec<_> = r.outcomes.iter().filter(|o| o.outcome.n_a == 0).collect();
        assert_eq!(success.len(), 2);
        for o in success {
            assert!((o.fidelity_min() - 1.0).abs() < 1e-12);
        }
        // the failure branch hands Bob |1> for a |0> input
        assert!(r.failure_bob_fidelity.unwrap() < 1e-12);
    }
}
