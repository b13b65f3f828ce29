use nalgebra::DMatrix;

use super::register::ModeRegister;
use super::{max_abs, C64};
use crate::error::{Error, Result};

/// Tolerance on `U^dag U = I` and `M = M^dag` checks.
pub const OPERATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Unitary,
    Hermitian,
    General,
}

impl OperatorKind {
    fn name(self) -> &'static str {
        match self {
            OperatorKind::Unitary => "unitary",
            OperatorKind::Hermitian => "hermitian",
            OperatorKind::General => "general",
        }
    }
}

/// A square matrix over a register's Fock basis.
///
/// The register may be a subset of the modes of a state it is applied to; see
/// [`embed_and_apply`](super::embed_and_apply).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    register: ModeRegister,
    matrix: DMatrix<C64>,
    kind: OperatorKind,
}

impl LinearOperator {
    /// Construct and verify the `kind` tag.
    pub fn new(register: ModeRegister, matrix: DMatrix<C64>, kind: OperatorKind) -> Result<Self> {
        let dim = register.dimension();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        let op = LinearOperator {
            register,
            matrix,
            kind,
        };
        let deviation = op.kind_deviation();
        if deviation > OPERATOR_TOL {
            return Err(Error::OperatorKind {
                kind: kind.name(),
                deviation,
            });
        }
        Ok(op)
    }

    pub fn identity(register: ModeRegister) -> Self {
        let d = register.dimension();
        LinearOperator {
            register,
            matrix: DMatrix::identity(d, d),
            kind: OperatorKind::Unitary,
        }
    }

    pub(crate) fn new_unchecked(
        register: ModeRegister,
        matrix: DMatrix<C64>,
        kind: OperatorKind,
    ) -> Self {
        debug_assert_eq!(matrix.nrows(), register.dimension());
        LinearOperator {
            register,
            matrix,
            kind,
        }
    }

    pub fn register(&self) -> &ModeRegister {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// Max-entry deviation from the property implied by `kind` (0 for general).
    pub fn kind_deviation(&self) -> f64 {
        match self.kind {
            OperatorKind::Unitary => unitarity_deviation(&self.matrix),
            OperatorKind::Hermitian => max_abs(&(&self.matrix - self.matrix.adjoint())),
            OperatorKind::General => 0.0,
        }
    }

    pub fn adjoint(&self) -> LinearOperator {
        LinearOperator {
            register: self.register.clone(),
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    /// `self * other`, i.e. `other` acts first. Both must share a register.
    pub fn compose(&self, other: &LinearOperator) -> Result<LinearOperator> {
        if self.register != other.register {
            return Err(Error::RegisterMismatch);
        }
        let kind = if self.kind == OperatorKind::Unitary && other.kind == OperatorKind::Unitary {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        Ok(LinearOperator {
            register: self.register.clone(),
            matrix: &self.matrix * &other.matrix,
            kind,
        })
    }

    /// This operator tensored with the identity on the remaining modes of `target`.
    pub fn embed(&self, target: &ModeRegister) -> Result<LinearOperator> {
        let split = target.split_indices(&self.register)?;
        let dim = target.dimension();
        let mut m = DMatrix::zeros(dim, dim);
        for (row, &(pr, rr)) in split.iter().enumerate() {
            for (col, &(pc, rc)) in split.iter().enumerate() {
                if rr == rc {
                    m[(row, col)] = self.matrix[(pr, pc)];
                }
            }
        }
        Ok(LinearOperator {
            register: target.clone(),
            matrix: m,
            kind: self.kind,
        })
    }
}

pub fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - DMatrix::<C64>::identity(n, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
    Number,
}

/// Truncated creation, annihilation or number operator on `mode`, identity on
/// every other mode of `register`. Creation maps the top occupation to zero.
pub fn ladder_operator(
    register: &ModeRegister,
    mode: &str,
    which: Ladder,
) -> Result<LinearOperator> {
    let dim = register.dim_of(mode)?;
    let single = ModeRegister::new([(mode, dim)])?;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for n in 0..dim {
        match which {
            Ladder::Create if n + 1 < dim => m[(n + 1, n)] = C64::new(((n + 1) as f64).sqrt(), 0.0),
            Ladder::Annihilate if n > 0 => m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0),
            Ladder::Number => m[(n, n)] = C64::new(n as f64, 0.0),
            _ => {}
        }
    }
    let kind = if which == Ladder::Number {
        OperatorKind::Hermitian
    } else {
        OperatorKind::General
    };
    LinearOperator::new_unchecked(single, m, kind).embed(register)
}
