//! Exact computations around cluster algebras of surfaces: Laurent
//! mutation, Bratteli quotients of mutation trees, their dimension groups,
//! the annulus algebra A(1,1), and Temperley–Lieb/Jones invariants.
//!
//! The containers are generic over the scalar (see [`scalar`]); the aliases
//! below fix the types used throughout the command line.

pub mod annulus;
pub mod bratteli;
pub mod cli;
pub mod cluster;
pub mod jones;
pub mod k0;
pub mod laurent;
pub mod matrix;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use bratteli::{BratteliDiagram, EquivalenceMode};
pub use cluster::{ExchangeMatrix, Seed};
pub use jones::{BraidWord, HalfIntLaurent};
pub use k0::K0Element;
pub use laurent::LaurentPolynomial;
pub use matrix::IntMatrix;
pub use scalar::{Field, QuadraticExt, Ring};

/// Integer Laurent polynomials, the home of cluster variables.
pub type LaurentPoly = LaurentPolynomial<BigInt>;
/// Laurent polynomials with rational coefficients.
pub type RationalLaurent = LaurentPolynomial<BigRational>;
/// Temperley–Lieb elements over `Z[A, A^-1]`.
pub type TlElementA = jones::TlElement<jones::KauffmanPoly>;
/// Temperley–Lieb elements over `Q(√t)`.
pub type TlElementQ = jones::TlElement<QuadraticExt>;
pub type TraceState64 = k0::TraceState<f64>;
pub type ModulusSolution64 = annulus::ModulusSolution<f64>;
