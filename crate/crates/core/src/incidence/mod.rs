//! Finite posets and their incidence algebras: Möbius functions,
//! restricted inverses, the theta polynomial and exhaustive checks of the
//! identities relating them.

mod algebra;
mod mobius;
mod poset;
mod theta;
pub mod verify;

pub use algebra::{Coefficient, IncidenceElement};
pub use mobius::{
    complementing_pairs, gamma, gamma_closed_form, mobius, mobius_by_chains, mobius_completion_check, SubposetPair,
    MAX_INTERIOR,
};
pub use poset::{Chain, DivisorPoset, ElementSet, FinitePoset, MAX_POSET_SIZE};
pub use theta::{
    admissible_form, admissible_monomials, inverse_theta, specialize_to_u, theta, theta_coefficient_check,
    theta_element, theta_inverse_coefficient, theta_inversion_check, theta_vars, AdmissibleForm, ThetaContext,
};

use crate::arith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IncidenceError {
    #[error("element {0} is not in the poset")]
    UnknownElement(u64),
    #[error("{0} is not below {1}")]
    NotComparable(u64, u64),
    #[error("element {0} is not in the subset")]
    OutsideSubset(u64),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("size {0} exceeds the supported limit")]
    TooLarge(usize),
    #[error("sequence is not a proper chain")]
    NotAChain,
    #[error("elements belong to different posets")]
    PosetMismatch,
    #[error("diagonal value at {0} is not invertible")]
    NotInvertible(u64),
    #[error("diagonal value at {0} is not one")]
    NonUnitDiagonal(u64),
    #[error("invalid complementing pair: {0}")]
    InvalidPair(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
