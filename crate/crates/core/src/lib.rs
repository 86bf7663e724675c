//! Exact algebra behind bulk-deformed orbifold Floer computations on
//! symmetric products.
//!
//! Everything here is `no_std` + `alloc` and works over ℚ: the Novikov
//! field with rational exponents, Chen-Ruan sector combinatorics, finite
//! commutative algebras and their idempotents, disc potentials of circle
//! links on the two-sphere, synthetic flow-category complexes with
//! spectral invariants, capped-orbit action ledgers and quasimorphism
//! bounds on finite groups. File formats, reports and the command line
//! live in the companion `orbiweyl` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod capped_orbits;
pub mod flow_complex;
pub mod linalg;
pub mod novikov;
pub mod orbifold_cohomology;
pub mod poly;
pub mod potential;
pub mod quantum_algebra;
pub mod quasimorphism;

pub use novikov::{int, rat, NovikovSeries, Rational, Valuation};
