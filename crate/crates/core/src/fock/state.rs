use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use super::register::ModeRegister;
use super::{max_abs, C64};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// One reservoir phase the state depends on, sampled on `points` equally
/// spaced values `2*pi*j/points`. `order` bounds the largest `|k|` of any
/// `exp(i k theta)` factor in the amplitudes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseAxis {
    pub symbol: String,
    pub points: usize,
    pub order: u32,
}

impl PhaseAxis {
    pub fn phase(&self, j: usize) -> f64 {
        TAU * j as f64 / self.points as f64
    }

    /// Smallest grid that averages a density matrix built from amplitudes of
    /// this order exactly.
    pub fn required_points(order: u32) -> usize {
        2 * order as usize + 1
    }

    pub fn check_exact(&self) -> Result<()> {
        let required = Self::required_points(self.order);
        if self.points < required {
            return Err(Error::GridTooCoarse {
                symbol: self.symbol.clone(),
                points: self.points,
                order: self.order,
                required,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Pure(DVector<C64>),
    Mixed(DMatrix<C64>),
}

impl StateData {
    pub fn density(&self) -> DMatrix<C64> {
        match self {
            StateData::Pure(v) => v * v.adjoint(),
            StateData::Mixed(m) => m.clone(),
        }
    }

    fn dim(&self) -> usize {
        match self {
            StateData::Pure(v) => v.len(),
            StateData::Mixed(m) => m.nrows(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            StateData::Pure(v) => {
                let norm = v.norm();
                if (norm - 1.0).abs() > NORM_TOL {
                    return Err(Error::NotNormalized(norm));
                }
            }
            StateData::Mixed(m) => {
                let herm = max_abs(&(m - m.adjoint()));
                if herm > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not hermitian ({herm:e})"
                    )));
                }
                let tr = m.trace();
                if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
                    return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
                }
                let min = super::hermitian_eigenvalues(m)
                    .iter()
                    .cloned()
                    .fold(f64::INFINITY, f64::min);
                if min < -PSD_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "negative eigenvalue {min:e}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A pure or mixed state over a register, optionally resolved over a grid of
/// reservoir phases.
///
/// With no phase axes there is exactly one point. With axes, points are laid
/// out row-major over the axes (first axis most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    register: ModeRegister,
    axes: Vec<PhaseAxis>,
    points: Vec<StateData>,
}

impl QuantumState {
    pub fn pure(register: ModeRegister, amplitudes: DVector<C64>) -> Result<Self> {
        Self::single(register, StateData::Pure(amplitudes))
    }

    pub fn mixed(register: ModeRegister, rho: DMatrix<C64>) -> Result<Self> {
        Self::single(register, StateData::Mixed(rho))
    }

    fn single(register: ModeRegister, data: StateData) -> Result<Self> {
        if data.dim() != register.dimension() {
            return Err(Error::DimensionMismatch {
                expected: register.dimension(),
                found: data.dim(),
            });
        }
        data.validate()?;
        Ok(QuantumState {
            register,
            axes: Vec::new(),
            points: vec![data],
        })
    }

    /// Fock basis state with the given occupation tuple.
    pub fn basis(register: ModeRegister, occupations: &[usize]) -> Result<Self> {
        let idx = register.index_of(occupations)?;
        let mut v = DVector::zeros(register.dimension());
        v[idx] = C64::new(1.0, 0.0);
        Ok(QuantumState {
            register,
            axes: Vec::new(),
            points: vec![StateData::Pure(v)],
        })
    }

    /// Normalized superposition of basis states.
    pub fn superposition(register: ModeRegister, terms: &[(&[usize], C64)]) -> Result<Self> {
        let mut v = DVector::zeros(register.dimension());
        for (occ, amp) in terms {
            v[register.index_of(occ)?] += amp;
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::pure(register, v / C64::new(norm, 0.0))
    }

    pub(crate) fn from_parts(
        register: ModeRegister,
        axes: Vec<PhaseAxis>,
        points: Vec<StateData>,
    ) -> Self {
        debug_assert_eq!(
            points.len(),
            axes.iter().map(|a| a.points).product::<usize>()
        );
        QuantumState {
            register,
            axes,
            points,
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn axes(&self) -> &[PhaseAxis] {
        &self.axes
    }

    pub fn axis(&self, symbol: &str) -> Option<&PhaseAxis> {
        self.axes.iter().find(|a| a.symbol == symbol)
    }

    pub fn phase_symbols(&self) -> Vec<String> {
        self.axes.iter().map(|a| a.symbol.clone()).collect()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn data(&self, point: usize) -> &StateData {
        &self.points[point]
    }

    pub(crate) fn points(&self) -> &[StateData] {
        &self.points
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.points[0], StateData::Pure(_))
    }

    /// The phase-free state at one grid point.
    pub fn point(&self, point: usize) -> QuantumState {
        QuantumState {
            register: self.register.clone(),
            axes: Vec::new(),
            points: vec![self.points[point].clone()],
        }
    }

    /// Phase values `(symbol, theta)` at a grid point.
    pub fn phases_at(&self, point: usize) -> Vec<(String, f64)> {
        grid_phases(&self.axes, point)
    }

    /// Amplitudes of a phase-free pure state.
    pub fn amplitudes(&self) -> Option<&DVector<C64>> {
        match (self.axes.is_empty(), &self.points[0]) {
            (true, StateData::Pure(v)) => Some(v),
            _ => None,
        }
    }

    /// Density matrix of a phase-free state.
    pub fn density_matrix(&self) -> Result<DMatrix<C64>> {
        self.require_phase_free()?;
        Ok(self.points[0].density())
    }

    pub fn to_mixed(&self) -> QuantumState {
        QuantumState {
            register: self.register.clone(),
            axes: self.axes.clone(),
            points: self
                .points
                .iter()
                .map(|d| StateData::Mixed(d.density()))
                .collect(),
        }
    }

    pub fn require_phase_free(&self) -> Result<()> {
        if self.axes.is_empty() {
            Ok(())
        } else {
            Err(Error::UnresolvedPhases(self.phase_symbols()))
        }
    }

    /// Check the state invariants at every grid point.
    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if p.dim() != self.register.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: self.register.dimension(),
                    found: p.dim(),
                });
            }
            p.validate()?;
        }
        Ok(())
    }

    pub(crate) fn map_points<F>(&self, register: ModeRegister, f: F) -> Result<QuantumState>
    where
        F: Fn(usize, &StateData) -> Result<StateData>,
    {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, d)| f(i, d))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuantumState {
            register,
            axes: self.axes.clone(),
            points,
        })
    }

    /// Broadcast the state onto an additional phase axis (no-op if present
    /// with the same grid size). Returns the axis position.
    pub(crate) fn with_axis(&self, symbol: &str, points: usize) -> Result<(QuantumState, usize)> {
        if let Some(pos) = self.axes.iter().position(|a| a.symbol == symbol) {
            if self.axes[pos].points != points {
                return Err(Error::GridMismatch {
                    symbol: symbol.to_string(),
                    expected: self.axes[pos].points,
                    found: points,
                });
            }
            return Ok((self.clone(), pos));
        }
        let mut axes = self.axes.clone();
        axes.push(PhaseAxis {
            symbol: symbol.to_string(),
            points,
            order: 0,
        });
        let mut data = Vec::with_capacity(self.points.len() * points);
        for d in &self.points {
            for _ in 0..points {
                data.push(d.clone());
            }
        }
        Ok((
            QuantumState {
                register: self.register.clone(),
                axes,
                points: data,
            },
            self.axes.len(),
        ))
    }

    pub(crate) fn bump_order(&mut self, axis: usize, by: u32) {
        self.axes[axis].order += by;
    }
}

/// Index along axis `axis` of flat grid point `point`.
pub(crate) fn axis_index(axes: &[PhaseAxis], point: usize, axis: usize) -> usize {
    let stride: usize = axes[axis + 1..].iter().map(|a| a.points).product();
    (point / stride) % axes[axis].points
}

pub(crate) fn grid_phases(axes: &[PhaseAxis], point: usize) -> Vec<(String, f64)> {
    (0..axes.len())
        .map(|k| {
            (
                axes[k].symbol.clone(),
                axes[k].phase(axis_index(axes, point, k)),
            )
        })
        .collect()
}

/// For each point of the grid without `axis`, the flat indices (over the full
/// grid) that collapse onto it.
pub(crate) fn collapse_axis(axes: &[PhaseAxis], axis: usize) -> (Vec<PhaseAxis>, Vec<Vec<usize>>) {
    let mut rest = axes.to_vec();
    rest.remove(axis);
    let n_rest: usize = rest.iter().map(|a| a.points).product();
    let mut groups = vec![Vec::new(); n_rest];
    let total: usize = axes.iter().map(|a| a.points).product();
    for p in 0..total {
        let mut q = 0;
        for k in 0..axes.len() {
            if k != axis {
                q = q * axes[k].points + axis_index(axes, p, k);
            }
        }
        groups[q].push(p);
    }
    (rest, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_register;

    #[test]
    fn pure_state_must_be_normalized() {
        let r = build_register([("A", 2)]).unwrap();
        let v = DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(matches!(
            QuantumState::pure(r, v),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn density_matrix_checks() {
        let r = build_register([("A", 2)]).unwrap();
        let bad = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(matches!(
            QuantumState::mixed(r.clone(), bad),
            Err(Error::InvalidDensityMatrix(_))
        ));
        let good = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
        ]));
        assert!(QuantumState::mixed(r, good).is_ok());
    }

    #[test]
    fn collapse_groups_cover_grid() {
        let axes = vec![
            PhaseAxis {
                symbol: "x".into(),
                points: 3,
                order: 0,
            },
            PhaseAxis {
                symbol: "y".into(),
                points: 2,
                order: 0,
            },
        ];
        let (rest, groups) = collapse_axis(&axes, 0);
        assert_eq!(rest.len(), 1);
        assert_eq!(groups, vec![vec![0, 2, 4], vec![1, 3, 5]]);
        let (_, groups) = collapse_axis(&axes, 1);
        assert_eq!(groups, vec![vec![0, 1], vec![2, 3], vec![4, 5]]);
    }
}
