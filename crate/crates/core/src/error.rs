use thiserror::Error;

use crate::monomial::Multidegree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the unit ideal has no nontrivial resolution")]
    UnitIdeal,

    #[error("complex is not augmented by a rank-one module of multidegree 0 in homological degree 0")]
    NotAugmented,

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("input complex fails verification: {0}")]
    Unverified(String),

    #[error("coefficient fields differ: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("generator {generator} appears in more than one ideal of the family")]
    SharedGenerator { generator: Multidegree },

    #[error("basis multidegree {0} is not squarefree")]
    NotSquarefree(Multidegree),

    #[error("right factor is not a simplicial DG algebra: {0}")]
    NotSimplicial(String),

    #[error("product table fails the DG axioms: {0}")]
    InvalidProduct(String),

    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
