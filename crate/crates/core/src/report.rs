//! JSON and CSV serialization of protocol results and scans.
//!
//! Every float is rounded to 12 significant digits before it is written, so
//! identical runs produce byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;

use crate::hamiltonian::ScanPoint;
use crate::protocol::{DenseCodingResult, TeleportationResult, CORPUS_GENERATOR};
use crate::tolerances::PROBABILITY_SUM;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Round to [`SIGNIFICANT_DIGITS`] significant digits. Rust's float
/// formatting rounds the exact binary value half to even.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn fmt_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpecJson {
    pub theta_prime: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReservoirsJson {
    pub configuration: &'static str,
    pub preparation: String,
    pub analysis: String,
    pub grid_points: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OutcomeJson {
    pub n_a: usize,
    #[serde(rename = "n_A")]
    pub n_alice: usize,
    pub classification: &'static str,
    pub probability: f64,
    pub fidelity_min: Option<f64>,
    pub fidelity_mean: Option<f64>,
}

/// Serialized form of a teleportation run.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TeleportReport {
    pub spec: SpecJson,
    pub reservoirs: ReservoirsJson,
    pub outcomes: Vec<OutcomeJson>,
    pub success_probability: f64,
    pub ssr_compliant: bool,
}

impl TeleportReport {
    pub fn new(r: &TeleportationResult) -> Self {
        let outcomes = r
            .outcomes
            .iter()
            .map(|o| {
                let success = o.outcome.classification != crate::protocol::Classification::Failure;
                OutcomeJson {
                    n_a: o.outcome.n_a,
                    n_alice: o.outcome.n_alice,
                    classification: o.outcome.classification.name(),
                    probability: round_sig(o.probability),
                    fidelity_min: success.then(|| round_sig(o.fidelity_min())),
                    fidelity_mean: success.then(|| round_sig(o.fidelity_mean())),
                }
            })
            .collect();
        TeleportReport {
            spec: SpecJson {
                theta_prime: round_sig(r.spec.theta_prime),
                phi: round_sig(r.spec.phi),
            },
            reservoirs: ReservoirsJson {
                configuration: r.config.name(),
                preparation: r.prep_symbol.clone(),
                analysis: r.analysis_symbol.clone(),
                grid_points: r.grid_points,
            },
            outcomes,
            success_probability: round_sig(r.success_probability),
            ssr_compliant: r.ssr_compliant,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepReport {
    pub generator: &'static str,
    pub seed: u64,
    pub n: usize,
    pub runs: Vec<TeleportReport>,
}

impl SweepReport {
    pub fn new(seed: u64, results: &[TeleportationResult]) -> Self {
        SweepReport {
            generator: CORPUS_GENERATOR,
            seed,
            n: results.len(),
            runs: results.iter().map(TeleportReport::new).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DenseOutcomeJson {
    #[serde(rename = "n_A")]
    pub n_alice: usize,
    #[serde(rename = "n_B")]
    pub n_bob: usize,
    pub decodes_to: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DenseCodingReport {
    pub message: u8,
    pub decoded: u8,
    pub deterministic: bool,
    pub reservoirs: &'static str,
    pub outcomes: Vec<DenseOutcomeJson>,
}

impl DenseCodingReport {
    pub fn new(r: &DenseCodingResult) -> Self {
        DenseCodingReport {
            message: r.message,
            decoded: r.decoded,
            deterministic: r.deterministic,
            reservoirs: r.config.name(),
            outcomes: r
                .trace
                .iter()
                .map(|t| DenseOutcomeJson {
                    n_alice: t.outcome.0,
                    n_bob: t.outcome.1,
                    decodes_to: t.decodes_to,
                    probability: round_sig(t.probability),
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Two-column CSV with the given header names.
pub fn scan_csv(points: &[ScanPoint], parameter: &str, value: &str) -> String {
    let mut out = format!("{parameter},{value}\n");
    for p in points {
        let _ = writeln!(out, "{},{}", fmt_sig(p.parameter), fmt_sig(p.value));
    }
    out
}

pub fn hardcore_csv(points: &[ScanPoint]) -> String {
    scan_csv(points, "ratio", "infidelity")
}

pub fn reservoir_csv(points: &[ScanPoint]) -> String {
    scan_csv(points, "nbar", "deviation")
}

/// A failed invariant, as reported on exit code 1.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

/// Range checks on everything a teleport report would emit.
pub fn teleport_violations(r: &TeleportationResult) -> Vec<Violation> {
    let mut v = Vec::new();
    let label =
        |o: &crate::protocol::OutcomeResult| format!("({},{})", o.outcome.n_a, o.outcome.n_alice);
    for o in &r.outcomes {
        if !(0.0..=1.0).contains(&o.probability) {
            v.push(Violation::new(
                "probability_range",
                format!("{} has probability {}", label(o), o.probability),
            ));
        }
        for f in o.fidelities.iter().flatten() {
            if !(0.0..=1.0 + 1e-12).contains(f) {
                v.push(Violation::new(
                    "fidelity_range",
                    format!("{} has fidelity {f}", label(o)),
                ));
                break;
            }
        }
    }
    if r.probability_sum_error > PROBABILITY_SUM {
        v.push(Violation::new(
            "probability_sum",
            format!(
                "outcome probabilities miss 1 by {}",
                r.probability_sum_error
            ),
        ));
    }
    if !r.ssr_compliant {
        v.push(Violation::new(
            "ssr",
            format!("off-block norm {}", r.ssr_max_offblock),
        ));
    }
    v
}

pub fn scan_violations(points: &[ScanPoint], name: &str) -> Vec<Violation> {
    points
        .windows(2)
        .filter(|w| w[1].value > w[0].value)
        .map(|w| {
            Violation::new(
                format!("{name}_monotone"),
                format!(
                    "{} at {} exceeds {} at {}",
                    w[1].value, w[1].parameter, w[0].value, w[0].parameter
                ),
            )
        })
        .collect()
}
