//! Demazure roots of affine toric varieties, the homogeneous derivations they
//! index, and generating sets of automorphism groups acting infinitely
//! transitively.

pub mod automorphism;
pub mod cox;
pub mod derivation;
pub mod error;
pub mod generators;
pub mod json;
pub mod lattice;
pub mod roots;
pub mod scalar;
pub mod selftest;
pub mod serial;
pub mod transitivity;

pub use error::{Error, Result};
pub use derivation::{AlgebraElement, Derivation, HomogeneousComponent};
pub use lattice::{Cone, LatticeTag, LatticeVector};
pub use roots::RootDatum;
pub use scalar::{Cyclotomic, Field};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// The default coefficient field.
pub type Rational = BigRational;

pub type QDerivation = Derivation<Rational>;
pub type QComponent = HomogeneousComponent<Rational>;
pub type QAlgebraElement = AlgebraElement<Rational>;
