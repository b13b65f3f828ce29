use nalgebra::{DMatrix, DVector};

use super::operator::LinearOperator;
use super::register::ModeRegister;
use super::state::{axis_index, QuantumState, StateData};
use super::C64;
use crate::error::{Error, Result};

/// An operator that depends on one reservoir phase, sampled on that phase's
/// grid. `order` is the largest `|k|` of `exp(i k theta)` it introduces.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasedOperator {
    pub symbol: String,
    pub order: u32,
    pub ops: Vec<LinearOperator>,
}

impl PhasedOperator {
    pub fn grid_points(&self) -> usize {
        self.ops.len()
    }

    pub fn register(&self) -> &ModeRegister {
        self.ops[0].register()
    }
}

/// Precomputed gather/scatter layout for applying a subregister operator.
struct Layout {
    split: Vec<(usize, usize)>,
    sub: usize,
    rest: usize,
}

impl Layout {
    fn new(target: &ModeRegister, part: &ModeRegister) -> Result<Self> {
        let split = target.split_indices(part)?;
        let sub = part.dimension();
        Ok(Layout {
            rest: target.dimension() / sub,
            split,
            sub,
        })
    }

    fn apply_vec(&self, m: &DMatrix<C64>, v: &DVector<C64>) -> DVector<C64> {
        let mut x = DMatrix::zeros(self.sub, self.rest);
        for (i, &(p, r)) in self.split.iter().enumerate() {
            x[(p, r)] = v[i];
        }
        let y = m * x;
        DVector::from_iterator(self.split.len(), self.split.iter().map(|&(p, r)| y[(p, r)]))
    }

    fn apply_mat(&self, m: &DMatrix<C64>, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let left = self.apply_columns(m, rho);
        self.apply_columns(m, &left.adjoint()).adjoint()
    }

    fn apply_columns(&self, m: &DMatrix<C64>, a: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(a.nrows(), a.ncols());
        for c in 0..a.ncols() {
            let col = self.apply_vec(m, &a.column(c).into_owned());
            out.set_column(c, &col);
        }
        out
    }

    fn apply(&self, m: &DMatrix<C64>, d: &StateData) -> StateData {
        match d {
            StateData::Pure(v) => StateData::Pure(self.apply_vec(m, v)),
            StateData::Mixed(rho) => StateData::Mixed(self.apply_mat(m, rho)),
        }
    }
}

/// Apply `op` (defined on a subset of the state's modes) tensored with the
/// identity elsewhere: `U|psi>` for pure states, `U rho U^dag` for mixed.
/// Applied pointwise across any phase grid.
pub fn embed_and_apply(state: &QuantumState, op: &LinearOperator) -> Result<QuantumState> {
    let layout = Layout::new(state.register(), op.register())?;
    state.map_points(state.register().clone(), |_, d| {
        Ok(layout.apply(op.matrix(), d))
    })
}

/// Apply a phase-dependent operator: the state gains the operator's phase axis
/// if it lacks it, and at each grid point the operator instance for that
/// point's phase is applied. The axis's Fourier order grows by `op.order`.
pub fn apply_phased(state: &QuantumState, op: &PhasedOperator) -> Result<QuantumState> {
    if op.ops.is_empty() {
        return Err(Error::InvalidParameter(
            "phased operator has an empty grid".into(),
        ));
    }
    let layout = Layout::new(state.register(), op.register())?;
    let (expanded, axis) = state.with_axis(&op.symbol, op.grid_points())?;
    let axes = expanded.axes().to_vec();
    let mut out = expanded.map_points(state.register().clone(), |i, d| {
        let j = axis_index(&axes, i, axis);
        Ok(layout.apply(op.ops[j].matrix(), d))
    })?;
    out.bump_order(axis, op.order);
    Ok(out)
}
