//! Affine and finite Coxeter groups as exact affine reflection groups:
//! lengths by alcove descent, parabolic subgroups, coset decompositions and
//! Poincaré series.

pub mod affine;
pub mod cartan;
pub mod element;
pub mod poincare;
pub mod system;

pub use affine::{AffineMap, R64};
pub use element::{
    coset_decompose, enumerate_ball, length_and_word, parabolic_enumerate, Ball, CoxeterElement,
    ParabolicSubset,
};
pub use poincare::{
    alternating_coset_sum, alternating_product_sum, poincare_rational, poincare_truncated,
    HeckeRepresentation, PoincareRational, Restriction,
};
pub use system::{CoxeterSystem, CustomSystem, Order, TypeTag};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("generator {0} does not act as an involution")]
    NonInvolutiveGenerator(usize),
    #[error("braid relation between generators {0} and {1} fails in the action")]
    BraidRelationViolated(usize, usize),
    #[error("unsupported Coxeter label {0}")]
    UnsupportedCoxeterLabel(String),
    #[error("unknown type tag {0:?}")]
    UnknownTypeTag(String),
    #[error("malformed Coxeter data: {0}")]
    MalformedMatrix(String),
    #[error("affine map is not an element of the group")]
    NotInGroup,
    #[error("parabolic subgroup generated by {0:?} is infinite")]
    InfiniteParabolic(Vec<String>),
    #[error("alternating sum of inverse parabolic series is singular")]
    SingularParabolicSum,
    #[error("representation data invalid: {0}")]
    BadRepresentation(String),
}
