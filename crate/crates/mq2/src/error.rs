use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the engine, the verifier and the machine builders.
#[derive(Debug, Error)]
pub enum Error {
    /// A state vector and a matrix family disagree about the space they live in.
    #[error("dimension mismatch: state has dimension {state_dim}, family `{family}` has dimension {family_dim} at size parameter {size_param}")]
    DimensionMismatch {
        family: String,
        state_dim: u64,
        family_dim: u64,
        size_param: u32,
    },

    /// A configuration index does not fit the declared dimension.
    #[error("index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: u64, dimension: u64 },

    /// An engine sum stopped being finite; `(from, to)` names the entry whose
    /// contribution first broke it.
    #[error("non-finite amplitude while accumulating entry ({from}, {to}) at size parameter {size_param}")]
    NonFiniteAmplitude { from: u64, to: u64, size_param: u32 },

    /// The requested object is bigger than this laboratory is willing to build.
    /// Deliberate: the point is small, exactly checkable instances.
    #[error("dimension {dimension} exceeds the cap {cap}; refusing")]
    DimensionCap { dimension: u64, cap: u64 },

    /// A family declared one kind but behaved like another, e.g. a stochastic
    /// family producing an entry with a nonzero imaginary part.
    #[error("family `{family}` violates its {kind} contract: {detail}")]
    KindContract {
        family: String,
        kind: &'static str,
        detail: String,
    },

    /// Caller handed in something structurally invalid (bad modulus, zero
    /// application count, input symbol outside the tape alphabet, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A machine description or oracle file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors that mean "instance too large", as opposed to misuse.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::DimensionCap { .. })
    }
}
