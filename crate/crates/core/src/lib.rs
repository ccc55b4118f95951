//! Exact symbolic workbench for Weyl-type algebras with hyperbolic sine and
//! power generators: canonical-form arithmetic over exact coefficient towers,
//! growth and Gelfand-Kirillov dimension measurement, bounded-degree center
//! computation (associative and non-associative), and automorphism /
//! isomorphism decision procedures.
//!
//! Everything is exact: coefficients live in a tower of rationals extended by
//! named constants, and every reported number is the result of exact linear
//! algebra over that field.
//!
//! Presentations are immutable after construction and every operation is a
//! pure function of its inputs, so independent computations can run from
//! concurrent contexts without coordination.

pub mod algebra;
pub mod center;
pub mod dsl;
pub mod error;
pub mod exponents;
pub mod growth;
pub mod linalg;
pub mod morphisms;
pub mod nonassoc;
pub mod presets;
pub mod scalars;

pub use algebra::{Element, Monomial, Presentation};
pub use error::{Error, Result};
pub use scalars::{Scalar, Tower};
