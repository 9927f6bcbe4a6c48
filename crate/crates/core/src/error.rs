use alloc::vec::Vec;

use thiserror::Error;

/// Every failure the library reports.
///
/// Variants fall into two families: violated preconditions (bad input or an
/// input that is outside the generic situation an algorithm needs) and
/// numerical failures. [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator of degree {operator} cannot act on a form of degree {form}")]
    DegreeMismatch { operator: u32, form: u32 },
    #[error("the zero vector does not define a projective point")]
    ZeroPoint,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected a form of degree {expected}, found degree {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("expected {expected} points, found {found}")]
    WrongCardinality { expected: usize, found: usize },
    #[error("point {index} repeats an earlier point")]
    DuplicatePoint { index: usize },
    #[error("exponent {exponent:?} does not have degree {degree}")]
    ExponentDegree { exponent: [u32; 3], degree: u32 },
    #[error("exponent {exponent:?} appears twice")]
    DuplicateExponent { exponent: [u32; 3] },
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("order {order} exceeds the degree {degree} of the form")]
    OrderOutOfRange { order: u32, degree: u32 },
    #[error("rank target {rank} is outside 1..=10")]
    RankTargetOutOfRange { rank: usize },
    #[error("the curves share a common component")]
    PositiveDimensional,
    #[error("intersection points did not converge after {attempts} coordinate changes")]
    IllConditioned { attempts: usize },
    #[error("cubics through the points form a space of dimension {dimension}, expected 1")]
    DegenerateCubicSystem { dimension: usize },
    #[error("R/C^2 disagrees between auxiliary points (relative gap {gap:e})")]
    InconsistentQuotient { gap: f64 },
    #[error("kernel of the cubic catalecticant has dimension {found}, expected {expected}")]
    KernelWrongSize { expected: usize, found: usize },
    #[error("intersection has a point of multiplicity {multiplicity}")]
    NonReducedIntersection { multiplicity: usize },
    #[error("relative residual {residual:e} exceeds the acceptance threshold")]
    ResidualTooLarge { residual: f64 },
    #[error("degenerate configuration: {reason}")]
    DegenerateConfiguration { reason: &'static str },
    #[error("point set has h-vector {found:?}, expected (1, 2, 3, 3)")]
    WrongHVector { found: Vec<usize> },
    #[error("syzygy space has dimension {found}, expected 3")]
    SyzygyRankUnexpected { found: usize },
    #[error("apolarity system has a solution space of dimension {dimension}, expected 1")]
    NoSolution { dimension: usize },
    #[error("{found} intersection points satisfy every generator, expected 9")]
    FilterMiscount { found: usize },
    #[error("points do not decompose the form (relative residual {residual:e})")]
    NotADecomposition { residual: f64 },
    #[error("linked decomposition failed its structural check: {reason}")]
    LiaisonCheckFailed { reason: &'static str },
}

impl Error {
    /// Stable identifier used on the command line and in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::ZeroPoint => "ZeroPoint",
            Error::NotSquare { .. } => "NotSquare",
            Error::WrongDegree { .. } => "WrongDegree",
            Error::WrongCardinality { .. } => "WrongCardinality",
            Error::DuplicatePoint { .. } => "DuplicatePoint",
            Error::ExponentDegree { .. } => "ExponentDegree",
            Error::DuplicateExponent { .. } => "DuplicateExponent",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::OrderOutOfRange { .. } => "OrderOutOfRange",
            Error::RankTargetOutOfRange { .. } => "RankTargetOutOfRange",
            Error::PositiveDimensional => "PositiveDimensional",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::DegenerateCubicSystem { .. } => "DegenerateCubicSystem",
            Error::InconsistentQuotient { .. } => "InconsistentQuotient",
            Error::KernelWrongSize { .. } => "KernelWrongSize",
            Error::NonReducedIntersection { .. } => "NonReducedIntersection",
            Error::ResidualTooLarge { .. } => "ResidualTooLarge",
            Error::DegenerateConfiguration { .. } => "DegenerateConfiguration",
            Error::WrongHVector { .. } => "WrongHVector",
            Error::SyzygyRankUnexpected { .. } => "SyzygyRankUnexpected",
            Error::NoSolution { .. } => "NoSolution",
            Error::FilterMiscount { .. } => "FilterMiscount",
            Error::NotADecomposition { .. } => "NotADecomposition",
            Error::LiaisonCheckFailed { .. } => "LiaisonCheckFailed",
        }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::IllConditioned { .. }
                | Error::InconsistentQuotient { .. }
                | Error::ResidualTooLarge { .. }
                | Error::NoSolution { .. }
                | Error::FilterMiscount { .. }
                | Error::LiaisonCheckFailed { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
