//! Finitely generated abelian groups and their homomorphisms.
//!
//! Everything is exact integer arithmetic on `i64` with overflow checks.
//! Groups are kept in invariant-factor form; presentations, kernels, images
//! and quotients all reduce to a Smith normal form computation.

mod group;
mod hom;
mod matrix;
mod snf;
mod subgroup;

pub use group::{ElementOrder, FgAbGroup, GroupElement, Presentation};
pub use hom::GroupHom;
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};
pub use subgroup::{direct_sum, quotient, DirectSum, Subgroup};

/// Enumeration refuses groups with more torsion elements than this.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AbelianError {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("element or map does not belong to the expected group")]
    AmbientMismatch,
    #[error("group has {size} elements, above the enumeration cap {cap}")]
    TooLarge { size: u128, cap: u64 },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("map is not an isomorphism")]
    NotIsomorphism,
}

pub type Result<T> = std::result::Result<T, AbelianError>;

/// Whether `x` lies in `sub`.
pub fn element_in_subgroup(x: &GroupElement, sub: &Subgroup) -> Result<bool> {
    sub.contains(x)
}

pub(crate) mod checked {
    use super::{AbelianError, Result};

    pub fn add(a: i64, b: i64) -> Result<i64> {
        a.checked_add(b).ok_or(AbelianError::Overflow)
    }

    pub fn mul(a: i64, b: i64) -> Result<i64> {
        a.checked_mul(b).ok_or(AbelianError::Overflow)
    }

    pub fn neg(a: i64) -> Result<i64> {
        a.checked_neg().ok_or(AbelianError::Overflow)
    }
}
