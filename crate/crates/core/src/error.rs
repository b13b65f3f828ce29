use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register must contain at least one mode")]
    EmptyRegister,
    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),
    #[error("mode `{label}` has occupation cutoff {dim}, need at least 2")]
    CutoffTooSmall { label: String, dim: usize },
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),
    #[error("mode `{label}` has dimension {found} here but {expected} in the target register")]
    ModeDimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("registers do not match")]
    RegisterMismatch,
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("density matrix is invalid: {0}")]
    InvalidDensityMatrix(String),
    #[error("operator tagged {kind} fails its check (deviation {deviation:e})")]
    OperatorKind { kind: &'static str, deviation: f64 },
    #[error("mode `{0}` is not a qubit mode (cutoff 2)")]
    NotQubit(String),
    #[error("gate needs two distinct modes, got `{0}` twice")]
    IdenticalModes(String),
    #[error("keep list is empty")]
    EmptyKeep,
    #[error("phase symbol `{0}` is not present on the state")]
    SymbolAbsent(String),
    #[error("reservoir `{0}` is not registered")]
    UnregisteredReservoir(String),
    #[error("phase grid for `{symbol}` has {points} points, Fourier order {order} needs at least {required}")]
    GridTooCoarse {
        symbol: String,
        points: usize,
        order: u32,
        required: usize,
    },
    #[error("phase grid for `{symbol}` has {found} points, expected {expected}")]
    GridMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("state still depends on phase symbols {0:?}; twirl first")]
    UnresolvedPhases(Vec<String>),
    #[error(
        "reservoir cutoff {cutoff} is below the required {required} for mean occupation {nbar}"
    )]
    ReservoirCutoff {
        cutoff: usize,
        required: usize,
        nbar: f64,
    },
    #[error("reservoir `{0}` has a symbolic phase; a resolved cutoff is required")]
    ReservoirNotResolved(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operator is not hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("phase matching unsatisfiable: {0}")]
    PhaseMatching(String),
}

pub type Result<T> = std::result::Result<T, Error>;
