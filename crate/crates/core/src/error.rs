use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix that must be Hermitian is not, to tolerance.
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    Hermiticity { residual: f64 },

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A proposed set of matrices fails one of the *-algebra axioms. Carries the
    /// residual that exceeded tolerance.
    #[error("not a unital *-algebra: {reason} (residual {residual:.3e})")]
    NotAnAlgebra { reason: String, residual: f64 },

    /// The identity is missing from a span that must be unital.
    #[error("span does not contain the identity (residual {residual:.3e})")]
    NotUnital { residual: f64 },

    /// The span is not closed under adjoints.
    #[error("span is not closed under the adjoint (residual {residual:.3e})")]
    NotStarClosed { residual: f64 },

    /// Supplied vectors are not an orthonormal basis.
    #[error("basis error: {reason} (residual {residual:.3e})")]
    Basis { reason: String, residual: f64 },

    /// A matrix required to be unitary is not.
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    /// A Choi matrix has an eigenvalue below the negative tolerance.
    #[error("map is not completely positive (eigenvalue {eigenvalue:.3e})")]
    NotCompletelyPositive { eigenvalue: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    /// Two routes to the same quantity disagree. Indicates a bug upstream, usually in
    /// algebra validation.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// A failure inside one randomized trial, with what is needed to reproduce it.
    #[error("trial {trial} (seed {seed}): {source}")]
    Trial { trial: usize, seed: u64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Dimension(_) => "DimensionError",
            Self::Hermiticity { .. } => "HermiticityError",
            Self::EmptyInput(_) => "EmptyInputError",
            Self::NotAnAlgebra { .. } => "NotAnAlgebraError",
            Self::NotUnital { .. } => "NotUnitalError",
            Self::NotStarClosed { .. } => "NotStarClosedError",
            Self::Basis { .. } => "BasisError",
            Self::NotUnitary { .. } => "NotUnitaryError",
            Self::NotCompletelyPositive { .. } => "NotCPError",
            Self::Input(_) => "InputError",
            Self::InternalConsistency(_) => "InternalConsistencyError",
            Self::Trial { source, .. } => source.kind(),
        }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Self::Dimension(msg.into())
    }

    pub(crate) fn not_algebra(reason: impl Into<String>, residual: f64) -> Self {
        Self::NotAnAlgebra { reason: reason.into(), residual }
    }

    pub(crate) fn basis(reason: impl Into<String>, residual: f64) -> Self {
        Self::Basis { reason: reason.into(), residual }
    }
}
