//! Exact arithmetic: integer matrices, normal forms, lattices, finite
//! fields, polynomial factorization and simultaneous spectra.

pub mod field;
pub mod intpoly;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod spectra;

use thiserror::Error;

pub use field::{is_prime_u64, valuation, valuation_rational, Field, FieldDescriptor, FiniteField, FqElem, Rationals};
pub use intpoly::IntPoly;
pub use lattice::{int_kernel, quotient_invariants, Lattice, QuotientInvariants};
pub use matrix::{IntMatrix, Mat, RatMatrix};
pub use normal_form::{hermite, smith, Hermite, Smith};
pub use spectra::{
    joint_eigenspace, reduce_matrix, simultaneous_spectra, spectra_finite, spectra_rational, BaseField, FfCharacter,
    FfSpectrum, JointEigenspace, QCharacter, QSpectrum, QValue, Spectrum,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} is invalid")]
    InvalidDegree(usize),
    #[error("F_{p}^{k} has more than 2^64 elements")]
    FieldTooLarge { p: u64, k: usize },
    #[error("field descriptor does not match the canonical modulus")]
    DescriptorMismatch,
    #[error("first lattice is not contained in the second")]
    NotSublattice,
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("no operators given")]
    NoOperators,
}
