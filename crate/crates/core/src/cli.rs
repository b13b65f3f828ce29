//! Command execution for the `modeport` binary.

use std::io::Write;

use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::hamiltonian::{hardcore_limit_scan, reservoir_resolved_rotation};
use crate::protocol::{
    dense_coding_outcomes, run_teleportation, seeded_specs, Classification, ReservoirConfig,
    TeleportationResult,
};
use crate::report::{
    hardcore_csv, reservoir_csv, scan_violations, teleport_violations, to_json, DenseCodingReport,
    SweepReport, TeleportReport, Violation,
};
use crate::selftest::run_selftest;
use crate::tolerances as tol;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// What a command produced: the artifact text and any failed invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub artifact: String,
    pub violations: Vec<Violation>,
}

#[derive(Serialize)]
struct ViolationList<'a> {
    violations: &'a [Violation],
}

pub fn violations_json(v: &[Violation]) -> String {
    to_json(&ViolationList { violations: v })
}

fn reservoir_config(cfg: &RunConfig) -> ReservoirConfig {
    if cfg.shared_reservoir {
        ReservoirConfig::Shared
    } else {
        ReservoirConfig::Distinct
    }
}

/// Protocol-level checks on top of the range checks in [`teleport_violations`].
fn protocol_violations(r: &TeleportationResult) -> Vec<Violation> {
    let mut v = teleport_violations(r);
    let tag = format!("theta_prime={} phi={}", r.spec.theta_prime, r.spec.phi);
    if (r.success_probability - 0.5).abs() > tol::SUCCESS_PROBABILITY {
        v.push(Violation::new(
            "success_probability",
            format!("{tag}: {}", r.success_probability),
        ));
    }
    for o in r
        .outcomes
        .iter()
        .filter(|o| o.outcome.classification != Classification::Failure)
    {
        if (1.0 - o.fidelity_min()).abs() > tol::SUCCESS_FIDELITY {
            v.push(Violation::new(
                "success_fidelity",
                format!("{tag}: min fidelity {}", o.fidelity_min()),
            ));
        }
    }
    if r.failure_mode_a_distance > tol::FAILURE_MIXEDNESS {
        v.push(Violation::new(
            "failure_mixedness",
            format!("{tag}: distance {}", r.failure_mode_a_distance),
        ));
    }
    v
}

fn from_error(e: Error) -> Execution {
    let check = match e {
        Error::PhaseMatching(_) => "phase_matching",
        _ => "error",
    };
    Execution {
        artifact: String::new(),
        violations: vec![Violation::new(check, e.to_string())],
    }
}

/// Run the configured command without touching the filesystem.
pub fn execute(cfg: &RunConfig) -> Execution {
    run(cfg).unwrap_or_else(from_error)
}

fn run(cfg: &RunConfig) -> crate::Result<Execution> {
    let config = reservoir_config(cfg);
    Ok(match cfg.command {
        Command::Teleport => {
            let spec = crate::protocol::UnknownStateSpec {
                theta_prime: cfg.theta_prime,
                phi: cfg.phi,
            };
            let r = run_teleportation(&spec, config, cfg.grid)?;
            Execution {
                artifact: to_json(&TeleportReport::new(&r)),
                violations: protocol_violations(&r),
            }
        }
        Command::Sweep => {
            let results = seeded_specs(cfg.n, cfg.seed)
                .iter()
                .map(|s| run_teleportation(s, config, cfg.grid))
                .collect::<crate::Result<Vec<_>>>()?;
            Execution {
                artifact: to_json(&SweepReport::new(cfg.seed, &results)),
                violations: results.iter().flat_map(protocol_violations).collect(),
            }
        }
        Command::Hardcore => {
            let pts = hardcore_limit_scan(&cfg.ratios)?;
            Execution {
                artifact: hardcore_csv(&pts),
                violations: scan_violations(&pts, "hardcore"),
            }
        }
        Command::Reservoir => {
            let pts = reservoir_resolved_rotation(&cfg.nbars)?;
            Execution {
                artifact: reservoir_csv(&pts),
                violations: scan_violations(&pts, "reservoir"),
            }
        }
        Command::Densecoding => {
            let messages: Vec<u8> = cfg.message.map_or((0..4).collect(), |m| vec![m]);
            let mut reports = Vec::new();
            let mut violations = Vec::new();
            for m in messages {
                let r = dense_coding_outcomes(m, config, cfg.grid)?;
                if !(r.deterministic && r.decoded == m) {
                    violations.push(Violation::new(
                        "dense_decoding",
                        format!(
                            "message {m} decoded as {} (deterministic: {})",
                            r.decoded, r.deterministic
                        ),
                    ));
                }
                reports.push(DenseCodingReport::new(&r));
            }
            if config == ReservoirConfig::Distinct {
                violations.insert(
                    0,
                    Violation::new(
                        "phase_matching",
                        "dense coding needs a shared reservoir; outcomes below are diagnostic only",
                    ),
                );
            }
            Execution {
                artifact: to_json(&reports),
                violations,
            }
        }
        Command::Selftest => {
            let criteria = run_selftest()?;
            let violations = criteria
                .iter()
                .filter(|c| !c.passed)
                .map(|c| Violation::new(format!("criterion_{}", c.id), c.line()))
                .collect();
            Execution {
                artifact: criteria.iter().map(|c| c.line() + "\n").collect(),
                violations,
            }
        }
    })
}

/// Run, write the artifact to `--out` or `stdout`, report violations on
/// `stderr`, and return the process exit code.
pub fn execute_and_report(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let exec = execute(cfg);
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &exec.artifact)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(exec.artifact.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "{msg}");
        return EXIT_IO;
    }
    if cfg.out.is_some() && cfg.command == Command::Selftest {
        let _ = stdout.write_all(exec.artifact.as_bytes());
    }
    if exec.violations.is_empty() {
        EXIT_OK
    } else {
        let _ = stderr.write_all(violations_json(&exec.violations).as_bytes());
        EXIT_INVARIANT
    }
}
