use nalgebra::{DMatrix, DVector};

use super::register::ModeRegister;
use super::state::{collapse_axis, grid_phases, PhaseAxis, QuantumState, StateData};
use super::C64;
use crate::error::{Error, Result};

/// Outcomes (and grid points) with probability below this are dropped.
pub const OUTCOME_CUTOFF: f64 = 1e-14;

/// One measurement outcome, resolved over the state's phase grid.
///
/// `conditionals[i]` is the normalized post-measurement state of the
/// unmeasured modes at grid point `i`, or `None` where the outcome has
/// vanishing probability at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    outcome: Vec<usize>,
    register: ModeRegister,
    axes: Vec<PhaseAxis>,
    probabilities: Vec<f64>,
    conditionals: Vec<Option<QuantumState>>,
}

impl Branch {
    pub fn outcome(&self) -> &[usize] {
        &self.outcome
    }

    /// Register of the unmeasured modes.
    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn axes(&self) -> &[PhaseAxis] {
        &self.axes
    }

    pub fn num_points(&self) -> usize {
        self.probabilities.len()
    }

    pub fn phases_at(&self, point: usize) -> Vec<(String, f64)> {
        grid_phases(&self.axes, point)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability averaged uniformly over the phase grid.
    pub fn probability(&self) -> f64 {
        self.probabilities.iter().sum::<f64>() / self.probabilities.len() as f64
    }

    pub fn conditional(&self, point: usize) -> Option<&QuantumState> {
        self.conditionals[point].as_ref()
    }

    pub fn conditionals(&self) -> &[Option<QuantumState>] {
        &self.conditionals
    }

    /// Apply `f` to every defined conditional state.
    pub fn map_states<F>(&self, f: F) -> Result<Branch>
    where
        F: Fn(&QuantumState) -> Result<QuantumState>,
    {
        let conditionals = self
            .conditionals
            .iter()
            .map(|c| c.as_ref().map(&f).transpose())
            .collect::<Result<Vec<_>>>()?;
        let register = conditionals
            .iter()
            .flatten()
            .next()
            .map(|s| s.register().clone())
            .unwrap_or_else(|| self.register.clone());
        Ok(Branch {
            conditionals,
            register,
            ..self.clone()
        })
    }

    /// Average the branch over one phase symbol: probabilities are averaged and
    /// conditional states are combined with their probabilities as weights.
    pub fn twirl(&self, symbol: &str) -> Result<Branch> {
        let axis = self
            .axes
            .iter()
            .position(|a| a.symbol == symbol)
            .ok_or_else(|| Error::SymbolAbsent(symbol.to_string()))?;
        self.axes[axis].check_exact()?;
        let (rest, groups) = collapse_axis(&self.axes, axis);
        let m = self.axes[axis].points as f64;
        let dim = self.register.dimension();
        let mut probabilities = Vec::with_capacity(groups.len());
        let mut conditionals = Vec::with_capacity(groups.len());
        for group in groups {
            let p: f64 = group.iter().map(|&i| self.probabilities[i]).sum::<f64>() / m;
            let mut acc = DMatrix::<C64>::zeros(dim, dim);
            for &i in &group {
                if let Some(s) = &self.conditionals[i] {
                    acc += s.data(0).density() * C64::new(self.probabilities[i] / m, 0.0);
                }
            }
            probabilities.push(p);
            conditionals.push(if p < OUTCOME_CUTOFF {
                None
            } else {
                let rho = acc / C64::new(p, 0.0);
                Some(QuantumState::from_parts(
                    self.register.clone(),
                    Vec::new(),
                    vec![StateData::Mixed(rho)],
                ))
            });
        }
        Ok(Branch {
            outcome: self.outcome.clone(),
            register: self.register.clone(),
            axes: rest,
            probabilities,
            conditionals,
        })
    }

    /// Fully phase-averaged conditional state and probability.
    pub fn averaged(&self) -> Result<(f64, Option<QuantumState>)> {
        let mut b = self.clone();
        for s in self
            .axes
            .iter()
            .map(|a| a.symbol.clone())
            .collect::<Vec<_>>()
        {
            b = b.twirl(&s)?;
        }
        Ok((b.probabilities[0], b.conditionals[0].clone()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub measured: ModeRegister,
    pub branches: Vec<Branch>,
}

impl Measurement {
    pub fn branch(&self, outcome: &[usize]) -> Option<&Branch> {
        self.branches.iter().find(|b| b.outcome == outcome)
    }

    /// Phase-averaged probability of `outcome` (0 if it never occurs).
    pub fn probability(&self, outcome: &[usize]) -> f64 {
        self.branch(outcome).map_or(0.0, Branch::probability)
    }

    /// Sum of outcome probabilities at each grid point.
    pub fn probability_sums(&self) -> Vec<f64> {
        let n = self.branches.first().map_or(0, |b| b.num_points());
        (0..n)
            .map(|i| self.branches.iter().map(|b| b.probabilities[i]).sum())
            .collect()
    }
}

/// Projective occupation-number measurement of `modes` (Born rule), resolved
/// over the phase grid. Outcome tuples follow the register order of the
/// measured modes.
pub fn measure_number(state: &QuantumState, modes: &[&str]) -> Result<Measurement> {
    let measured = state.register().subregister(modes)?;
    let rest = state.register().complement(modes);
    let split = state.register().split_indices(&measured)?;
    let n_out = measured.dimension();
    let rest_dim = rest.dimension();
    let mut branches = Vec::new();
    for outcome in 0..n_out {
        let rows: Vec<(usize, usize)> = split
            .iter()
            .enumerate()
            .filter(|(_, &(p, _))| p == outcome)
            .map(|(i, &(_, r))| (i, r))
            .collect();
        let mut probabilities = Vec::with_capacity(state.num_points());
        let mut conditionals = Vec::with_capacity(state.num_points());
        for d in state.points() {
            let (p, cond) = match d {
                StateData::Pure(v) => {
                    let mut w = DVector::<C64>::zeros(rest_dim);
                    for &(i, r) in &rows {
                        w[r] = v[i];
                    }
                    let p = w.norm_squared();
                    (
                        p,
                        StateData::Pure(w / C64::new(p.sqrt().max(f64::MIN_POSITIVE), 0.0)),
                    )
                }
                StateData::Mixed(rho) => {
                    let mut w = DMatrix::<C64>::zeros(rest_dim, rest_dim);
                    for &(i, r) in &rows {
                        for &(j, s) in &rows {
                            w[(r, s)] = rho[(i, j)];
                        }
                    }
                    let p = w.trace().re;
                    (
                        p,
                        StateData::Mixed(w / C64::new(p.max(f64::MIN_POSITIVE), 0.0)),
                    )
                }
            };
            probabilities.push(p);
            conditionals.push(
                (p >= OUTCOME_CUTOFF)
                    .then(|| QuantumState::from_parts(rest.clone(), Vec::new(), vec![cond])),
            );
        }
        if probabilities.iter().all(|&p| p < OUTCOME_CUTOFF) {
            continue;
        }
        branches.push(Branch {
            outcome: measured.occupations(outcome),
            register: rest.clone(),
            axes: state.axes().to_vec(),
            probabilities,
            conditionals,
        });
    }
    Ok(Measurement { measured, branches })
}
