//! Derived equivalences between bound quiver algebras and the stable functors
//! they induce, computed over prime fields.

pub mod algebra;
pub mod cli;
pub mod complexes;
pub mod corpus;
pub mod exactlin;
pub mod functors;
pub mod gorenstein;
pub mod stable;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Lin(#[from] exactlin::LinError),
    #[error("complex: {0}")]
    Complex(String),
    #[error("nonzero homology in negative degree {0}")]
    NegativeHomology(i64),
    #[error("functor data: {0}")]
    Functor(String),
    #[error("stable: {0}")]
    Stable(String),
    #[error("gorenstein: {0}")]
    Gorenstein(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
