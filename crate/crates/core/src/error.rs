use thiserror::Error;

/// Errors raised while constructing or loading algebras and fields.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("generator index {0} repeated in a monomial")]
    RepeatedIndex(usize),
    #[error("at most {max} generators are supported, got {n}")]
    TooManyGenerators { n: usize, max: usize },
    #[error("{0} is not prime (or exceeds 2^63)")]
    NotPrime(u64),
    #[error("rational {0} has a denominator that vanishes in the target field")]
    NotReducible(String),
    #[error("matrix entry ({row}, {col}) outside {nrows}x{ncols}")]
    MatrixIndex { row: usize, col: usize, nrows: usize, ncols: usize },
    #[error("{family}({n}) needs {requirement}")]
    Precondition { family: String, n: usize, requirement: String },
    #[error("basis element {0} is linearly dependent on the previous ones")]
    DependentBasis(usize),
    #[error("basis element {0} is not homogeneous ({1})")]
    Inhomogeneous(usize, &'static str),
    #[error("bracket of basis elements {a} and {b} leaves the span")]
    NonClosure { a: usize, b: usize },
    #[error("Cartan element {h} does not act diagonally on basis element {k}")]
    NonDiagonalCartan { h: usize, k: usize },
    #[error("Cartan elements {0} and {1} do not commute")]
    CartanNotAbelian(usize, usize),
    #[error("structure constant [{a}, {b}] -> {k} violates {property}")]
    InvalidTable { a: usize, b: usize, k: usize, property: &'static str },
    #[error("weights too large to encode for block routing")]
    GradingTooWide,
    #[error("table format: line {line}: {message}")]
    Format { line: usize, message: String },
}
