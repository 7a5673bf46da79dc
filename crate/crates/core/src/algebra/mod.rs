//! Exact arithmetic shared by every other module: rationals, multivariate
//! polynomials, rational functions, polynomial matrices and integer lattices.

pub mod intmat;
pub mod poly;
pub mod polymat;
pub mod ratfun;
pub mod rational;
pub mod unipoly;

pub use intmat::IntMatrix;
pub use poly::MultiPoly;
pub use polymat::PolyMatrix;
pub use ratfun::RationalFunction;
pub use rational::{format_rational, parse_rational, Q};
pub use unipoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial or by a non-unit")]
    DivisionByZeroPoly,
    #[error("rational function is not expandable: denominator vanishes at 0")]
    NotExpandable,
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("malformed rational literal {0:?}")]
    BadRational(String),
}
