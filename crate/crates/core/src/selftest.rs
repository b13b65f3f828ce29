//! The acceptance checks, runnable from the binary (`modeport selftest`) and
//! from the test suite.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::fock::{
    apply_phased, embed_and_apply, entropy_of_bipartition, ladder_operator, max_abs,
    measure_number, unitarity_deviation, Ladder, LinearOperator, ModeRegister, OperatorKind,
    PhasedOperator, QuantumState, C64,
};
use crate::gates::{
    fermionic_swap_gate, hopping_gate, number_rotation_at, phase_gate, HoppingConvention,
};
use crate::hamiltonian::{
    hardcore_limit_scan, reservoir_resolved_rotation, ScanPoint, MODE_ALICE, MODE_SOURCE,
};
use crate::protocol::{
    bell_state_analysis, dense_coding_outcomes, run_teleportation, seeded_specs, Classification,
    ReservoirConfig, TeleportationResult, ANALYSIS_RESERVOIR,
};
use crate::reservoir::{ssr_compliance_check, twirl_all, PhaseFrame, DEFAULT_GRID_POINTS, SSR_TOL};
use crate::tolerances as tol;

/// Size and seed of the spec corpus the checks run over.
pub const CORPUS_SIZE: usize = 100;
pub const CORPUS_SEED: u64 = 0;
pub const HARDCORE_RATIOS: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
pub const RESERVOIR_NBARS: [f64; 4] = [4.0, 16.0, 64.0, 256.0];

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Criterion {
    fn new(id: u8, name: &'static str, passed: bool, detail: String) -> Self {
        Criterion {
            id,
            name,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Teleportation runs over the seeded corpus, in both reservoir configurations.
pub struct Corpus {
    pub distinct: Vec<TeleportationResult>,
    pub shared: Vec<TeleportationResult>,
}

impl Corpus {
    pub fn build(n: usize, seed: u64, grid_points: usize) -> Result<Self> {
        let specs = seeded_specs(n, seed);
        let run = |c| {
            specs
                .iter()
                .map(|s| run_teleportation(s, c, grid_points))
                .collect::<Result<Vec<_>>>()
        };
        Ok(Corpus {
            distinct: run(ReservoirConfig::Distinct)?,
            shared: run(ReservoirConfig::Shared)?,
        })
    }

    fn all(&self) -> impl Iterator<Item = &TeleportationResult> {
        self.distinct.iter().chain(&self.shared)
    }
}

pub fn success_probability(corpus: &Corpus) -> Criterion {
    let worst = corpus
        .distinct
        .iter()
        .map(|r| (r.success_probability - 0.5).abs())
        .fold(0.0, f64::max);
    Criterion::new(
        1,
        "teleportation success probability",
        worst <= tol::SUCCESS_PROBABILITY,
        format!(
            "max |P(success) - 1/2| = {worst:.3e} over {} specs",
            corpus.distinct.len()
        ),
    )
}

pub fn success_fidelity(corpus: &Corpus) -> Criterion {
    let mut worst = 0.0f64;
    let mut missing = 0usize;
    for r in &corpus.distinct {
        for o in r
            .outcomes
            .iter()
            .filter(|o| o.outcome.classification != Classification::Failure)
        {
            for f in &o.fidelities {
                match f {
                    Some(f) => worst = worst.max((1.0 - f).abs()),
                    None => missing += 1,
                }
            }
        }
        let branches = r.outcomes.iter().filter(|o| o.outcome.n_a == 0).count();
        missing += 2 - branches.min(2);
    }
    Criterion::new(
        2,
        "success-branch fidelity",
        worst <= tol::SUCCESS_FIDELITY && missing == 0,
        format!("max |1 - F| = {worst:.3e}, missing branch points = {missing}"),
    )
}

pub fn failure_mixedness(corpus: &Corpus) -> Criterion {
    let worst = corpus
        .distinct
        .iter()
        .map(|r| r.failure_mode_a_distance)
        .fold(0.0, f64::max);
    Criterion::new(
        3,
        "failure-branch mixedness",
        worst <= tol::FAILURE_MIXEDNESS,
        format!("max trace distance from I/2 = {worst:.3e}"),
    )
}

pub fn ssr_compliance(corpus: &Corpus) -> Criterion {
    let worst = corpus.all().map(|r| r.ssr_max_offblock).fold(0.0, f64::max);
    let flagged = corpus.all().filter(|r| !r.ssr_compliant).count();
    Criterion::new(
        4,
        "superselection compliance",
        worst <= SSR_TOL && flagged == 0,
        format!(
            "max off-block norm = {worst:.3e} over {} runs",
            corpus.all().count()
        ),
    )
}

/// Worst deviation from certainty of the expected Bell-analysis outcomes.
pub fn bell_truth_table(grid_points: usize) -> Result<Criterion> {
    let mut frame = PhaseFrame::new();
    frame.register(ANALYSIS_RESERVOIR, grid_points)?;
    let reg = ModeRegister::new([(MODE_SOURCE, 2), (MODE_ALICE, 2)])?;
    let one = C64::new(1.0, 0.0);
    let input = |s: f64, occ: [&[usize]; 2]| {
        QuantumState::superposition(reg.clone(), &[(occ[0], one), (occ[1], one * s)])
    };
    let mut worst = 0.0f64;
    for (sign, outcome) in [(1.0, (0, 0)), (-1.0, (0, 1))] {
        let a = bell_state_analysis(
            &input(sign, [&[0, 1], &[1, 0]])?,
            MODE_SOURCE,
            MODE_ALICE,
            ANALYSIS_RESERVOIR,
            &frame,
        )?;
        let per_point = a
            .branch(outcome.0, outcome.1)
            .map(|b| b.probabilities().to_vec())
            .unwrap_or_default();
        worst = worst.max(if per_point.len() == grid_points {
            per_point
                .iter()
                .map(|p| (1.0 - p).abs())
                .fold(0.0, f64::max)
        } else {
            1.0
        });
    }
    for sign in [1.0, -1.0] {
        let a = bell_state_analysis(
            &input(sign, [&[0, 0], &[1, 1]])?,
            MODE_SOURCE,
            MODE_ALICE,
            ANALYSIS_RESERVOIR,
            &frame,
        )?;
        let by_a = measure_number(&a.state, &[MODE_SOURCE])?;
        let p = by_a
            .branch(&[1])
            .map(|b| b.probabilities().to_vec())
            .unwrap_or_default();
        worst = worst.max(if p.len() == grid_points {
            p.iter().map(|p| (1.0 - p).abs()).fold(0.0, f64::max)
        } else {
            1.0
        });
    }
    Ok(Criterion::new(
        5,
        "Bell-analysis truth table",
        worst <= tol::BELL_CERTAINTY,
        format!("max deviation from certainty = {worst:.3e}"),
    ))
}

pub fn dense_coding_contrast(grid_points: usize) -> Result<Criterion> {
    let mut shared_ok = true;
    let mut decoded = Vec::new();
    for m in 0..4 {
        let r = dense_coding_outcomes(m, ReservoirConfig::Shared, grid_points)?;
        shared_ok &= r.deterministic && r.decoded == m;
        decoded.push(r.decoded);
    }
    let mut spread = f64::INFINITY;
    for m in [2, 3] {
        let r = dense_coding_outcomes(m, ReservoirConfig::Distinct, grid_points)?;
        let s = r
            .trace
            .iter()
            .map(|t| {
                let hi = t
                    .per_point
                    .iter()
                    .cloned()
                    .fold(f64::NEG_INFINITY, f64::max);
                let lo = t.per_point.iter().cloned().fold(f64::INFINITY, f64::min);
                hi - lo
            })
            .fold(0.0, f64::max);
        spread = spread.min(if r.deterministic { 0.0 } else { s });
    }
    Ok(Criterion::new(
        6,
        "dense-coding contrast",
        shared_ok && spread > tol::PHASE_DEPENDENCE,
        format!("shared decodes {decoded:?}; distinct phi-sector probability spread over the grid = {spread:.3}"),
    ))
}

fn monotone(points: &[ScanPoint]) -> bool {
    points.windows(2).all(|w| w[1].value <= w[0].value)
}

fn scan_detail(points: &[ScanPoint]) -> String {
    points
        .iter()
        .map(|p| format!("{}:{:.3e}", p.parameter, p.value))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn hardcore_limit() -> Result<Criterion> {
    let pts = hardcore_limit_scan(&HARDCORE_RATIOS)?;
    let last = pts.last().expect("non-empty scan").value;
    Ok(Criterion::new(
        7,
        "hard-core limit",
        monotone(&pts) && last < tol::HARDCORE_INFIDELITY_AT_1000,
        format!("infidelity by U/J {}", scan_detail(&pts)),
    ))
}

pub fn reservoir_limit() -> Result<Criterion> {
    let pts = reservoir_resolved_rotation(&RESERVOIR_NBARS)?;
    let last = pts.last().expect("non-empty scan").value;
    Ok(Criterion::new(
        8,
        "reservoir limit",
        monotone(&pts) && last < tol::RESERVOIR_DEVIATION_AT_256,
        format!("deviation by nbar {}", scan_detail(&pts)),
    ))
}

/// The two-boson state `(a_A^dag + a_B^dag)^2 |vac>`, normalized.
pub fn two_boson_state() -> Result<QuantumState> {
    let r = ModeRegister::new([("A", 3), ("B", 3)])?;
    let sum = ladder_operator(&r, "A", Ladder::Create)?.matrix()
        + ladder_operator(&r, "B", Ladder::Create)?.matrix();
    let op = LinearOperator::new(r.clone(), &sum * &sum, OperatorKind::General)?;
    let raw = embed_and_apply(&QuantumState::basis(r.clone(), &[0, 0])?, &op)?;
    let v = raw.amplitudes().expect("pure input stays pure");
    QuantumState::pure(r, v / C64::new(v.norm(), 0.0))
}

fn gate_deviations(grid_points: usize) -> Result<f64> {
    let reg = ModeRegister::new([(MODE_SOURCE, 2), (MODE_ALICE, 2), ("B", 2)])?;
    let mut ops = vec![
        fermionic_swap_gate(&reg, MODE_SOURCE, MODE_ALICE)?,
        fermionic_swap_gate(&reg, MODE_ALICE, "B")?,
    ];
    for angle in [0.0, 0.3, FRAC_PI_4, FRAC_PI_2, PI, 2.5] {
        ops.push(phase_gate(&reg, "B", angle)?);
        for conv in [
            HoppingConvention::Evolution,
            HoppingConvention::RealRotation,
        ] {
            ops.push(hopping_gate(&reg, MODE_ALICE, "B", angle, conv)?);
        }
        for j in 0..grid_points {
            let theta = std::f64::consts::TAU * j as f64 / grid_points as f64;
            ops.push(number_rotation_at(&reg, MODE_SOURCE, angle, theta)?);
        }
    }
    Ok(ops
        .iter()
        .map(|o| unitarity_deviation(o.matrix()))
        .fold(0.0, f64::max))
}

/// `U(theta)` = phase rotation of every mode by `theta`, sampled on a grid.
fn global_phase_kick(
    reg: &ModeRegister,
    symbol: &str,
    grid_points: usize,
) -> Result<PhasedOperator> {
    let ops = (0..grid_points)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / grid_points as f64;
            let mut m = DMatrix::<C64>::identity(reg.dimension(), reg.dimension());
            for label in reg.labels() {
                m = phase_gate(reg, label, theta)?.matrix() * m;
            }
            LinearOperator::new(reg.clone(), m, OperatorKind::Unitary)
        })
        .collect::<Result<Vec<_>>>()?;
    let order = reg.modes().iter().map(|m| (m.dim - 1) as u32).sum();
    Ok(PhasedOperator {
        symbol: symbol.to_string(),
        order,
        ops,
    })
}

/// Twirling a twirled terminal state again, after a fresh phase kick, changes
/// nothing.
fn twirl_idempotence(corpus: &Corpus) -> Result<f64> {
    let mut worst = 0.0f64;
    for r in corpus.distinct.iter().take(10) {
        for state in [&r.bob_unconditional, &r.failure_mode_a] {
            let kicked = apply_phased(
                state,
                &global_phase_kick(state.register(), "kick", DEFAULT_GRID_POINTS)?,
            )?;
            let again = twirl_all(&kicked)?;
            let d = max_abs(&(again.density_matrix()? - state.density_matrix()?));
            worst = worst.max(d).max(max_abs(
                &(twirl_all(state)?.density_matrix()? - state.density_matrix()?),
            ));
        }
    }
    Ok(worst)
}

pub fn structural_checks(corpus: &Corpus, grid_points: usize) -> Result<Criterion> {
    let s = two_boson_state()?;
    let r = s.register().clone();
    let v = s.amplitudes().expect("pure");
    let want = [
        ([2usize, 0], 0.5),
        ([1, 1], 2f64.sqrt() / 2.0),
        ([0, 2], 0.5),
    ];
    let amp_err = want
        .iter()
        .map(|(occ, a)| Ok((v[r.index_of(occ)?] - C64::new(*a, 0.0)).norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let entropy = entropy_of_bipartition(&s, &["A"])?;
    let gates = gate_deviations(grid_points)?;
    let twirl = twirl_idempotence(corpus)?;
    let ssr = ssr_compliance_check(&twirl_all(&s)?)?.compliant;
    Ok(Criterion::new(
        9,
        "structural checks",
        amp_err <= 1e-15 && (entropy - 1.5).abs() <= tol::ENTROPY && gates <= tol::OPERATOR && twirl <= tol::TWIRL_IDEMPOTENCE && ssr,
        format!(
            "two-boson amplitude error {amp_err:.1e}, entropy {entropy:.12} bits, gate unitarity {gates:.1e}, twirl idempotence {twirl:.1e}"
        ),
    ))
}

/// Every acceptance check, in order.
pub fn run_selftest() -> Result<Vec<Criterion>> {
    let m = DEFAULT_GRID_POINTS;
    let corpus = Corpus::build(CORPUS_SIZE, CORPUS_SEED, m)?;
    Ok(vec![
        success_probability(&corpus),
        success_fidelity(&corpus),
        failure_mixedness(&corpus),
        ssr_compliance(&corpus),
        bell_truth_table(m)?,
        dense_coding_contrast(m)?,
        hardcore_limit()?,
        reservoir_limit()?,
        structural_checks(&corpus, m)?,
    ])
}
