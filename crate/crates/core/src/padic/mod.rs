//! Finite-precision arithmetic in unramified extensions of `Q_p`.
//!
//! `O_K / p^M` is a Galois ring. Elements are value types; every operation
//! takes the context explicitly.

mod galois;
mod modint;
mod phi;
mod resfield;
mod roots;

pub use galois::{ElementDegree, GaloisRingContext, GaloisRingElement};
pub use modint::ModRing;
pub use phi::{disc_valuation, inertial_count, phi, phi_relative, DiscValuation, PhiValue};
pub use resfield::{first_irreducible, is_irreducible_mod_p, ResidueField, MAX_FIELD_SIZE};
pub use roots::{count_generating_roots, integral_roots, FoundRoot, PadicPolynomial, RootCountResult, RootSearch};

/// Default working precision `M`.
pub const DEFAULT_PRECISION: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("precision {0} is below the minimum of 4")]
    PrecisionTooSmall(u32),
    #[error("{p}^{m} does not fit below 2^127")]
    ModulusTooLarge { p: u64, m: u32 },
    #[error("residue field larger than {MAX_FIELD_SIZE} elements")]
    FieldTooLarge,
    #[error("no monic irreducible of degree {n} modulo {p}")]
    NoIrreducible { p: u64, n: u32 },
    #[error("Hensel lifting of the Frobenius image did not converge")]
    HenselFailure,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial vanishes modulo p^M")]
    ZeroPolynomial,
    #[error("{0} does not divide the extension degree")]
    NotADivisor(u32),
    #[error("integer overflow")]
    Overflow,
}
