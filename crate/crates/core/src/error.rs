use crate::field::Field;
use crate::series::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification of failures, used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: bad JSON shape, unparsable scalar, wrong dimensions.
    Schema,
    /// A computation needed more t-adic precision than was supplied.
    Precision,
    /// An exhaustive search would exceed its configured budget.
    Budget,
    /// Well-formed input outside the mathematical domain of the operation.
    Domain,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("{0} is not a prime at most 2^31")]
    InvalidModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {input:?} as an element of {field}")]
    ParseScalar { input: String, field: Field },
    #[error("cannot parse field descriptor {0:?}")]
    ParseField(String),
    #[error("precision must be at least {min}, got {got}")]
    PrecisionTooSmall { min: usize, got: usize },
    #[error("precision exhausted: result vanishes to order >= {precision}")]
    PrecisionExhausted { precision: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not invertible over the base ring")]
    NotInvertible,
    #[error("polynomial is not monic of positive degree")]
    NotMonic,
    #[error("branches {i} and {j} agree to order {valuation}")]
    IndistinctBranches {
        i: usize,
        j: usize,
        valuation: Valuation,
    },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("characteristic {characteristic} is too small for degree {degree} discriminants")]
    CharacteristicTooSmall { characteristic: u64, degree: usize },
    #[error("degree {degree} is not invertible in {field}")]
    DegreeNotInvertible { degree: usize, field: Field },
    #[error("b - a = {b} - {a} is negative or odd; the crimp space is empty")]
    Parity { a: usize, b: usize },
    #[error("cover has branch valuation {found}, expected {expected}")]
    BranchMismatch { expected: usize, found: usize },
    #[error("cover has no embedding into its normalization")]
    MissingEmbedding,
    #[error("{0} requires a finite scalar field")]
    InfiniteField(&'static str),
    #[error("search space of {search_space} candidates exceeds the budget of {budget}")]
    BudgetExceeded { search_space: u128, budget: u128 },
    #[error("crimps belong to different problems")]
    InconsistentProblems,
    #[error("operation requires a split normalization")]
    NonSplit,
    #[error("degenerate tangent configuration: {0}")]
    DegenerateTangency(String),
    #[error("automorphism {index} is not a unit-preserving table automorphism")]
    InvalidAutomorphism { index: usize },
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("epsilon must be a rational in (0, 1], got {0}")]
    InvalidEpsilon(String),
    #[error("no nonnegative integral solution: {0}")]
    NoSolution(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid input: {0}")]
    Schema(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            ParseScalar { .. }
            | ParseField(_)
            | Shape(_)
            | InvalidPermutation(_)
            | Schema(_)
            | Json(_)
            | InvalidEpsilon(_)
            | InvalidModulus(_)
            | NotSquare { .. } => ErrorKind::Schema,
            PrecisionTooSmall { .. } | PrecisionExhausted { .. } => ErrorKind::Precision,
            BudgetExceeded { .. } => ErrorKind::Budget,
            _ => ErrorKind::Domain,
        }
    }
}
