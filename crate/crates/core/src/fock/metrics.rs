use nalgebra::DMatrix;

use super::state::{QuantumState, StateData};
use super::trace::partial_trace;
use super::{hermitian_eigen, hermitian_eigenvalues, C64};
use crate::error::{Error, Result};

/// Eigenvalues below this are dropped before taking logarithms.
pub const ENTROPY_CLIP: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub enum Metric<'a> {
    Fidelity,
    TraceDistance,
    /// Entropy of the reduced state on these modes.
    EntropyOfBipartition(&'a [&'a str]),
}

/// Dispatch on [`Metric`]. Two-state metrics require `y`.
pub fn state_metric(x: &QuantumState, y: Option<&QuantumState>, metric: Metric<'_>) -> Result<f64> {
    match metric {
        Metric::Fidelity => fidelity(x, y.ok_or(Error::RegisterMismatch)?),
        Metric::TraceDistance => trace_distance(x, y.ok_or(Error::RegisterMismatch)?),
        Metric::EntropyOfBipartition(cut) => entropy_of_bipartition(x, cut),
    }
}

fn check_pair(x: &QuantumState, y: &QuantumState) -> Result<()> {
    if x.register() != y.register() {
        return Err(Error::RegisterMismatch);
    }
    x.require_phase_free()?;
    y.require_phase_free()
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`; `|<x|y>|^2` for
/// pure states.
pub fn fidelity(x: &QuantumState, y: &QuantumState) -> Result<f64> {
    check_pair(x, y)?;
    let f = match (x.data(0), y.data(0)) {
        (StateData::Pure(a), StateData::Pure(b)) => a.dotc(b).norm_sqr(),
        (StateData::Pure(a), StateData::Mixed(r)) | (StateData::Mixed(r), StateData::Pure(a)) => {
            (a.adjoint() * r * a)[(0, 0)].re
        }
        (StateData::Mixed(r), StateData::Mixed(s)) => {
            let root = psd_sqrt(r);
            let inner = &root * s * &root;
            let t: f64 = hermitian_eigenvalues(&inner)
                .iter()
                .map(|&l| l.max(0.0).sqrt())
                .sum();
            t * t
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `1/2 || rho - sigma ||_1`.
pub fn trace_distance(x: &QuantumState, y: &QuantumState) -> Result<f64> {
    check_pair(x, y)?;
    let diff = x.data(0).density() - y.data(0).density();
    let d: f64 = hermitian_eigenvalues(&diff)
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
        / 2.0;
    Ok(d.clamp(0.0, 1.0))
}

/// Von Neumann entropy in bits of a phase-free state.
pub fn von_neumann_entropy(x: &QuantumState) -> Result<f64> {
    x.require_phase_free()?;
    if let StateData::Pure(_) = x.data(0) {
        return Ok(0.0);
    }
    let s: f64 = hermitian_eigenvalues(&x.data(0).density())
        .iter()
        .filter(|&&l| l > ENTROPY_CLIP)
        .map(|&l| -l * l.log2())
        .sum();
    Ok(s.max(0.0))
}

/// Entanglement entropy (bits) across the cut separating `side` from the rest
/// of the register.
pub fn entropy_of_bipartition(x: &QuantumState, side: &[&str]) -> Result<f64> {
    von_neumann_entropy(&partial_trace(x, side)?)
}

fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let d = DMatrix::from_diagonal(&vals.map(|l| C64::new(l.max(0.0).sqrt(), 0.0)));
    &vecs * d * vecs.adjoint()
}
