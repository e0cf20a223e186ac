//! Exact computational algebra for idempotent ("tropical") semirings.
//!
//! The crate represents finitely presented semirings over the
//! semifields B, Zv and Qv, decides order and equality through
//! monomial-ideal normal forms, computes localizations and prime
//! spectra, builds polytope semirings, dual-intersection cell complexes
//! and the flat-circle skeleton of a degenerating elliptic curve, and
//! tropicalizes polynomials over t-adic coefficients.
//!
//! All arithmetic is exact (integers and rationals); there is no
//! floating point anywhere in the decision procedures.
//!
//! The `examples/` directory contains one runnable example per major
//! capability; `skeleta` is a thin command-line front end over the
//! library (`skeleta --help`).

pub mod accept;
pub mod complexes;
pub mod dsl;
pub mod error;
pub mod geometry;
pub mod localize;
pub mod monoid_ideal;
pub mod polytope;
pub mod presentation;
pub mod semifield;
pub mod span;
pub mod spectrum;
pub mod svg;
pub mod tropicalize;

pub use error::{Error, Result};
pub use semifield::{SemifieldTag, SemifieldValue};
