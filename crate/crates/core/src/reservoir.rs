//! Condensate phase reference: phase grids, twirling, superselection checks
//! and truncated coherent states.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fock::{collapse_axis, ModeRegister, QuantumState, StateData, C64};

pub const DEFAULT_GRID_POINTS: usize = 16;

/// Coherences between particle-number sectors above this break compliance.
pub const SSR_TOL: f64 = 1e-12;

/// Largest truncation loss tolerated for a resolved reservoir.
pub const RESERVOIR_NORM_DEFICIT: f64 = 1e-10;

/// `points` equally spaced phases `2*pi*j/points` with uniform weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseGrid {
    pub symbol: String,
    pub points: usize,
}

impl PhaseGrid {
    pub fn new(symbol: impl Into<String>, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidParameter(
                "phase grid needs at least one point".into(),
            ));
        }
        Ok(PhaseGrid {
            symbol: symbol.into(),
            points,
        })
    }

    pub fn phase(&self, j: usize) -> f64 {
        TAU * j as f64 / self.points as f64
    }

    pub fn phases(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.phase(j))
    }
}

/// Registry of reservoir phase symbols. Reservoir names may alias one another,
/// which is how a shared condensate is expressed.
#[derive(Debug, Clone, Default)]
pub struct PhaseFrame {
    grids: BTreeMap<String, PhaseGrid>,
    aliases: BTreeMap<String, String>,
}

impl PhaseFrame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, symbol: &str, points: usize) -> Result<&mut Self> {
        self.grids
            .insert(symbol.to_string(), PhaseGrid::new(symbol, points)?);
        Ok(self)
    }

    /// Make `name` refer to the same phase as `target`.
    pub fn alias(&mut self, name: &str, target: &str) -> Result<&mut Self> {
        let canonical = self.resolve(target)?.symbol.clone();
        self.aliases.insert(name.to_string(), canonical);
        Ok(self)
    }

    pub fn resolve(&self, name: &str) -> Result<&PhaseGrid> {
        let key = self.aliases.get(name).map(String::as_str).unwrap_or(name);
        self.grids
            .get(key)
            .ok_or_else(|| Error::UnregisteredReservoir(name.to_string()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.grids.keys().map(String::as_str)
    }
}

/// Uniform average over the named phase. Exact provided the grid resolves the
/// recorded Fourier order; the result is a density matrix without that symbol.
pub fn twirl_state(state: &QuantumState, symbol: &str) -> Result<QuantumState> {
    let axis = state
        .axes()
        .iter()
        .position(|a| a.symbol == symbol)
        .ok_or_else(|| Error::SymbolAbsent(symbol.to_string()))?;
    state.axes()[axis].check_exact()?;
    let (rest, groups) = collapse_axis(state.axes(), axis);
    let m = C64::new(state.axes()[axis].points as f64, 0.0);
    let dim = state.register().dimension();
    let points = groups
        .into_iter()
        .map(|group| {
            let mut acc = DMatrix::<C64>::zeros(dim, dim);
            for i in group {
                acc += state.data(i).density();
            }
            StateData::Mixed(acc / m)
        })
        .collect();
    Ok(QuantumState::from_parts(
        state.register().clone(),
        rest,
        points,
    ))
}

/// Twirl over every phase symbol the state carries.
pub fn twirl_all(state: &QuantumState) -> Result<QuantumState> {
    let mut s = state.clone();
    for symbol in state.phase_symbols() {
        s = twirl_state(&s, &symbol)?;
    }
    if s.axes().is_empty() && s.is_pure() {
        s = s.to_mixed();
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsrReport {
    pub compliant: bool,
    /// Largest coherence magnitude between different total-number sectors.
    pub max_offblock_norm: f64,
}

/// Check that the density matrix is block diagonal in total particle number.
pub fn ssr_compliance_check(state: &QuantumState) -> Result<SsrReport> {
    state.require_phase_free()?;
    let rho = state.data(0).density();
    let reg = state.register();
    let numbers: Vec<usize> = (0..reg.dimension()).map(|i| reg.total_number(i)).collect();
    let mut worst = 0.0f64;
    for i in 0..numbers.len() {
        for j in 0..numbers.len() {
            if numbers[i] != numbers[j] {
                worst = worst.max(rho[(i, j)].norm());
            }
        }
    }
    Ok(SsrReport {
        compliant: worst <= SSR_TOL,
        max_offblock_norm: worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReservoirMode {
    SymbolicPhase,
    Resolved { cutoff: usize },
}

/// A condensate used as particle reservoir and phase reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirSpec {
    pub label: String,
    pub mean_occupation: f64,
    pub mode: ReservoirMode,
}

impl ReservoirSpec {
    pub fn symbolic(label: impl Into<String>, mean_occupation: f64) -> Result<Self> {
        check_nbar(mean_occupation)?;
        Ok(ReservoirSpec {
            label: label.into(),
            mean_occupation,
            mode: ReservoirMode::SymbolicPhase,
        })
    }

    pub fn resolved(label: impl Into<String>, mean_occupation: f64, cutoff: usize) -> Result<Self> {
        check_nbar(mean_occupation)?;
        let required = required_cutoff(mean_occupation);
        if cutoff < required {
            return Err(Error::ReservoirCutoff {
                cutoff,
                required,
                nbar: mean_occupation,
            });
        }
        Ok(ReservoirSpec {
            label: label.into(),
            mean_occupation,
            mode: ReservoirMode::Resolved { cutoff },
        })
    }

    /// Resolved reservoir at the smallest admissible cutoff.
    pub fn resolved_minimal(label: impl Into<String>, mean_occupation: f64) -> Result<Self> {
        check_nbar(mean_occupation)?;
        Self::resolved(label, mean_occupation, required_cutoff(mean_occupation))
    }

    pub fn cutoff(&self) -> Result<usize> {
        match self.mode {
            ReservoirMode::Resolved { cutoff } => Ok(cutoff),
            ReservoirMode::SymbolicPhase => Err(Error::ReservoirNotResolved(self.label.clone())),
        }
    }
}

fn check_nbar(nbar: f64) -> Result<()> {
    if nbar.is_finite() && nbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "mean occupation must be positive, got {nbar}"
        )))
    }
}

/// Smallest cutoff with `cutoff >= nbar + 10 sqrt(nbar)` that also keeps the
/// Poisson tail beyond it below [`RESERVOIR_NORM_DEFICIT`].
pub fn required_cutoff(nbar: f64) -> usize {
    let mut c = ((nbar + 10.0 * nbar.sqrt()).ceil() as usize).max(2);
    while 1.0 - coherent_weights(nbar, c).iter().sum::<f64>() > RESERVOIR_NORM_DEFICIT {
        c += 1;
    }
    c
}

/// Poisson weights `|c_n|^2` for `n < cutoff`, computed in log space.
fn coherent_weights(nbar: f64, cutoff: usize) -> Vec<f64> {
    let mut log_fact = 0.0;
    (0..cutoff)
        .map(|n| {
            if n > 0 {
                log_fact += (n as f64).ln();
            }
            (-nbar + n as f64 * nbar.ln() - log_fact).exp()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub state: QuantumState,
    /// `1 - sum |c_n|^2` over the retained occupations, before renormalizing.
    pub norm_deficit: f64,
}

/// Truncated coherent state `e^{-nbar/2} sum (sqrt(nbar) e^{i theta})^n / sqrt(n!) |n>`
/// on a single mode labelled after the reservoir, renormalized.
pub fn coherent_state(spec: &ReservoirSpec, theta: f64) -> Result<CoherentState> {
    let cutoff = spec.cutoff()?;
    let required = required_cutoff(spec.mean_occupation);
    if cutoff < required {
        return Err(Error::ReservoirCutoff {
            cutoff,
            required,
            nbar: spec.mean_occupation,
        });
    }
    let weights = coherent_weights(spec.mean_occupation, cutoff);
    let norm_deficit = 1.0 - weights.iter().sum::<f64>();
    let amps = DVector::from_iterator(
        cutoff,
        weights
            .iter()
            .enumerate()
            .map(|(n, w)| C64::from_polar(w.sqrt(), n as f64 * theta)),
    );
    let norm = amps.norm();
    let register = ModeRegister::new([(spec.label.as_str(), cutoff)])?;
    let state = QuantumState::pure(register, amps / C64::new(norm, 0.0))?;
    Ok(CoherentState {
        state,
        norm_deficit: norm_deficit.max(0.0),
    })
}
