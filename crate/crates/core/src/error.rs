use thiserror::Error;

use crate::operator::MultiIndex;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero operator has no order or characteristic polynomial")]
    DegenerateOperator,
    #[error("substitution matrix has determinant {det}, expected +1 or -1")]
    NotUnimodular { det: i64 },
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("operator collection is empty or all operators vanish")]
    EmptyCollection,
    #[error("monomial {0} lies strictly above the line")]
    AboveLine(MultiIndex),
    #[error("monomial {0} lies outside the region under the broken line")]
    AboveDiagram(MultiIndex),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("operator is not supported on the lattice points of the segment: {0}")]
    NotHomogeneous(String),
    #[error("trigonometric polynomial is not proper (has coefficients on the axes)")]
    NotProper,
    #[error("annihilation residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("final equation violated: residual {residual:e} exceeds tolerance {tolerance:e}")]
    FinalEquationViolated { residual: f64, tolerance: f64 },
    #[error("monomial ({alpha}, {beta}) is not subordinate: alpha/a + beta/b >= 1")]
    NotSubordinate { alpha: u32, beta: u32 },
    #[error("denominator vanishes off the origin for this sign choice")]
    DenominatorVanishes,
    #[error("coefficient {what} has modulus {modulus} < 1/2 at (p, q) = ({p}, {q}); increase Cmin")]
    NeedLargerC {
        what: &'static str,
        modulus: f64,
        p: u64,
        q: u64,
    },
    #[error("no index pairs satisfy the index condition")]
    NoIndices,
    #[error("argument must be non-real")]
    RealArgument,
    #[error("quadrature did not converge: estimated error {error:e} after {intervals} intervals")]
    QuadratureFailure { error: f64, intervals: usize },
    #[error("grid function does not vanish on the boundary")]
    NotCompactlySupported,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
