//! Exact reconstruction and verification of joint spectral measures for the
//! seven finite irreducible subgroups of the exceptional Lie group G2.
//!
//! The library is organized bottom-up:
//!
//! - [`cyclotomic`]: exact arithmetic in cyclotomic fields Q(ζ_N) — the scalar
//!   type carrying every character value, eigenvalue, density value and moment.
//! - [`torus`]: the maximal torus T², the Weyl group D12 action, the character
//!   restrictions Φ1/Φ2, the Jacobian-squared and K densities, the domain D
//!   membership test, and a floating-point preimage solver for (Φ1, Φ2).
//! - [`chartable`]: character-table data model, text parser, and validation.
//! - [`tables`]: the bundled corpus of the seven character tables.
//! - [`reptheory`]: tensor-product decomposition, McKay graphs, per-class
//!   eigenvalue reconstruction, and the embedding-search pipeline deciding
//!   which 7-dimensional characters embed a group into G2.
//! - [`measurelib`]: the catalog of atomic measures on T² (product measures,
//!   Weyl-grid measures, S3-orbit measures, Dirac orbits), density weights,
//!   and the thirteen spectral measures attached to the subgroup embeddings.
//! - [`verifier`]: exact reconciliation of measure moments against
//!   conjugacy-class moments and of pointwise masses against class weights.
//!
//! All mathematical data is exact: rational numbers are arbitrary precision
//! and irrational quantities live in explicit cyclotomic fields, so every
//! verification in this crate is a zero-tolerance identity check.

pub mod chartable;
pub mod cyclotomic;
pub mod measurelib;
pub mod reptheory;
pub mod tables;
pub mod torus;
pub mod verifier;

pub use chartable::CharacterTable;
pub use cyclotomic::Cyclotomic;
pub use reptheory::{Embedding, McKayGraph};
pub use torus::TorusPoint;
