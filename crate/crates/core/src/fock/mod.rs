//! Dense Fock-space engine: registers, operators, states and the basic
//! operations on them (application, partial trace, number measurement,
//! metrics).

mod apply;
mod measure;
mod metrics;
mod operator;
mod register;
mod state;
mod trace;

use nalgebra::{DMatrix, DVector};

pub use apply::{apply_phased, embed_and_apply, PhasedOperator};
pub use measure::{measure_number, Branch, Measurement, OUTCOME_CUTOFF};
pub use metrics::{
    entropy_of_bipartition, fidelity, state_metric, trace_distance, von_neumann_entropy, Metric,
};
pub use operator::{
    ladder_operator, unitarity_deviation, Ladder, LinearOperator, OperatorKind, OPERATOR_TOL,
};
pub use register::{build_register, Mode, ModeRegister};
pub use state::{PhaseAxis, QuantumState, StateData, HERMITIAN_TOL, NORM_TOL, PSD_TOL};
pub use trace::partial_trace;

pub(crate) use state::collapse_axis;

pub type C64 = num_complex::Complex64;

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix (the lower triangle is trusted).
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> DVector<f64> {
    m.clone().symmetric_eigenvalues()
}

/// Eigen-decomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}
