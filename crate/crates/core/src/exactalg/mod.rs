//! Exact coefficient fields, sparse polynomials, monomial substitutions and
//! linear algebra over fields.

pub mod ambient;
pub mod linalg;
pub mod modp;
pub mod monomap;
pub mod poly;
pub mod scalar;

pub use ambient::{Ambient, VarSet, L, L_INDICES};
pub use linalg::{determinant, rank};
pub use monomap::MonomialMap;
pub use poly::{Mono, Poly};
pub use scalar::{FieldKind, Fp, Gaussian, PrimeField, Scalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgError {
    #[error("ambient mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: String, found: String },
    #[error("substitution produced negative exponents but the map is not Laurent-flagged")]
    LaurentOutput,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field error: {0}")]
    Field(String),
    #[error("monomial budget exceeded: {needed} > {budget}")]
    Budget { needed: usize, budget: usize },
}
