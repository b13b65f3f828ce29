use nalgebra::DMatrix;

use super::state::{QuantumState, StateData};
use super::C64;
use crate::error::{Error, Result};

/// Reduced density matrix on `keep` (kept modes stay in register order).
pub fn partial_trace(state: &QuantumState, keep: &[&str]) -> Result<QuantumState> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let kept = state.register().subregister(keep)?;
    let split = state.register().split_indices(&kept)?;
    let k = kept.dimension();
    let rest = state.register().dimension() / k;
    state.map_points(kept, |_, d| {
        let reduced = match d {
            StateData::Pure(v) => {
                let mut x = DMatrix::<C64>::zeros(k, rest);
                for (i, &(p, r)) in split.iter().enumerate() {
                    x[(p, r)] = v[i];
                }
                &x * x.adjoint()
            }
            StateData::Mixed(rho) => {
                let mut out = DMatrix::<C64>::zeros(k, k);
                for (i, &(p, r)) in split.iter().enumerate() {
                    for (j, &(q, s)) in split.iter().enumerate() {
                        if r == s {
                            out[(p, q)] += rho[(i, j)];
                        }
                    }
                }
                out
            }
        };
        Ok(StateData::Mixed(reduced))
    })
}
