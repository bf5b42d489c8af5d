use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::regularity::HomogeneityReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    // instance validation
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error("DuplicateVertex: vertices {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },
    #[error("AsymmetricPredicate: the edge rule depends on vertex order")]
    AsymmetricPredicate,
    #[error("BadFormulaAtom: atom {atom} is outside 1..={m}")]
    BadFormulaAtom { atom: usize, m: usize },
    #[error("formula nesting exceeds depth {0}")]
    FormulaTooDeep(usize),
    #[error("InvalidKind: {0}")]
    InvalidKind(String),
    #[error("RepeatedVertexInTuple: {0:?}")]
    RepeatedVertexInTuple(Vec<usize>),
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },

    // stores and budgets
    #[error("BudgetExceeded: needs {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("EmptyPart")]
    EmptyPart,
    #[error("OverlappingParts")]
    OverlappingParts,
    #[error("expected {expected} parts, got {got}")]
    PartCountMismatch { expected: usize, got: usize },

    // tensors
    #[error("AxisMismatch: axes have different lengths")]
    AxisMismatch,
    #[error("NotSemidiagonal")]
    NotSemidiagonal,

    // extraction
    #[error("DensityTooLow: density {density} below {required}")]
    DensityTooLow { density: f64, required: f64 },
    #[error("AlphaOutOfRange: {0}")]
    AlphaOutOfRange(f64),
    #[error("EmptyHypergraph")]
    EmptyHypergraph,
    #[error("TooDense: density {density} above {limit}")]
    TooDense { density: f64, limit: f64 },
    #[error("StepBudgetExceeded after {0} steps")]
    StepBudgetExceeded(usize),
    #[error("PostconditionFailed: {0}")]
    PostconditionFailed(String),
    #[error("InternalInconsistency: {0}")]
    InternalInconsistency(String),
    #[error("operation requires {0}")]
    Unsupported(String),

    // regularity
    #[error("EpsilonOutOfRange: {0}")]
    EpsilonOutOfRange(String),
    #[error("VerificationFailed: bad fraction {}", crate::exact::to_text(&.0.bad_fraction))]
    VerificationFailed(Box<HomogeneityReport>),
    #[error("ResampleBudgetExceeded")]
    ResampleBudgetExceeded,

    // constructions
    #[error("BadPrime: {0}")]
    BadPrime(u64),
    #[error("BadParameters: {0}")]
    BadParameters(String),
    #[error("DegenerateInstance: every redraw symmetrized to zero")]
    DegenerateInstance,
}

impl Error {
    /// True for errors that describe an invalid instance description.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Algebra(_)
                | Error::Malformed(_)
                | Error::DuplicateVertex { .. }
                | Error::AsymmetricPredicate
                | Error::BadFormulaAtom { .. }
                | Error::FormulaTooDeep(_)
                | Error::InvalidKind(_)
                | Error::BadPrime(_)
                | Error::BadParameters(_)
                | Error::DegenerateInstance
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
