//! Exact representation theory of the Drinfel'd double D(Λ_{n,d}) of the
//! truncated cyclic path algebra.

pub mod acceptance;
pub mod arlab;
pub mod catalog;
pub mod cyclo;
pub mod dalgebra;
pub mod factor;
pub mod field;
pub mod hopfbim;
pub mod label;
pub mod linalg;
pub mod modrep;
pub mod poly;
pub mod tensor_theorems;

pub use num_rational::BigRational;

/// Scalars of every module: the cyclotomic field Q(ζ_n).
pub type Scalar = cyclo::CycloScalar;
pub type Rational = BigRational;
