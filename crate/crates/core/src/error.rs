use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("zero input")]
    ZeroInput,
    #[error("not expandable at infinity")]
    NotExpandable,
    #[error("non-removable singularity (pole order {0})")]
    Pole(usize),
    #[error("family not commutative")]
    NotCommutative,
    #[error("non-diagonalizable Cartan action")]
    NotDiagonalizable,
    #[error("requires split characteristic polynomial")]
    NotSplit,
    #[error("Bethe vector undefined at this configuration")]
    BetheUndefined,
    #[error("R-matrix undefined: {0}")]
    RMatrixPole(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("factorization budget exceeded for degree {0}")]
    FactorBudget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
