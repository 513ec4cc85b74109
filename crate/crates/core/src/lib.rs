//! Exact commutative algebra for descent along completions of a polynomial
//! ring at a strict-normal-crossings divisor.
//!
//! Everything is exact; there is no floating point anywhere in this crate.
//! Elements of rings are normal forms against cached reduced Gröbner bases,
//! modules are finite presentations, and all verdicts (isomorphy, exactness,
//! gluing) come with certificates that are re-checked by multiplication.

pub mod error;
pub mod scalar;
pub mod monomial;
pub mod poly;
pub mod parse;
pub mod groebner;
pub mod ring;
pub mod morphism;
pub mod precision;
pub mod module;
pub mod smith;
pub mod localize;
pub mod tower;
pub mod laurent;
pub mod tower_module;
pub mod strata;
pub mod chainring;
pub mod sample;
pub mod blseq;
pub mod diagram;
pub mod descent;

pub use error::{CoreError, Result};
pub use precision::Precision;
pub use scalar::{FieldDesc, Scalar};
