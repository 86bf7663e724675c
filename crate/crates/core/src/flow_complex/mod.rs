//! Chain complexes of synthetic ordered marked flow categories.
//!
//! Levels are `λ = −𝒜`, so differentials lower the level; see
//! [`complex::FilteredComplex`].

pub mod category;
pub mod complex;
pub mod poset;

use alloc::string::String;

use crate::novikov::NovikovError;

pub use category::{
    build_differential, d_squared_identity, random_consistent_category, verify_d_squared, CountKey, DSquaredReport,
    Generator, RandomCategoryOptions, SyntheticFlowCategory,
};
pub use complex::{
    check_product, gamma_invariant_subcomplex, group_closure, parse_class, random_product, spectral_invariant,
    verify_subadditivity, FilteredComplex, ProductTable, SignedPermutation, SubadditivitySample,
};
pub use poset::{boundary_glue, enumerate_poset, is_homogeneous, poset_leq, verify_boundary_iso, FlowPosetElem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlowError {
    #[error("category violates an invariant: {0}")]
    InvariantViolation(String),
    #[error("differential entry from {from} to {to} does not lower the level")]
    FiltrationViolation { from: usize, to: usize },
    #[error("deformation parameter must have nonnegative valuation")]
    NegativeAlpha,
    #[error("group action does not commute with the differential")]
    NonEquivariant,
    #[error("class is not a cycle")]
    NotACycle,
    #[error("product table is incompatible: {0}")]
    IncompatibleProduct(String),
    #[error("matrix dimensions do not match")]
    Shape,
    #[error("cannot parse class: {0}")]
    Parse(String),
    #[error(transparent)]
    Novikov(#[from] NovikovError),
}
