//! Temperley–Lieb algebras, braid closures and the Jones polynomial.
//!
//! Conventions, fixed once here:
//!
//! * The loop value is `δ = -A^2 - A^-2`.
//! * `σ_i ↦ A·1 + A^-1·E_i` and `σ_i^-1 ↦ A^-1·1 + A·E_i`.
//! * `V(t) = (-A)^(-3w) · δ^(n-1) · tr(braid image)` with `A = t^(1/4)`,
//!   where `w` is the writhe. This puts the closure of `σ_1^3` at
//!   `-t^-4 + t^-3 + t^-1`. The projection parameter
//!   `τ = δ^-2 = t/(1+t)^2` does not depend on the choice of `A = t^(±1/4)`.

mod algebra;
mod braid;
mod pairing;
mod relations;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::UniLaurent;

pub use algebra::{TlAlgebra, TlElement};
pub use braid::{braid_to_tl, jones_from_bracket, jones_polynomial, kauffman_algebra, kauffman_oracle, BraidWord, MAX_ORACLE_CROSSINGS};
pub use pairing::PlanarPairing;
pub use relations::{verify_tl_relations, RelationsReport};

/// Coefficients in `Z[A, A^-1]`.
pub type KauffmanPoly = UniLaurent<BigInt>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JonesError {
    #[error("StrandMismatch: {left} strands vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("GeneratorOutOfRange: generator {index} needs 1 <= index < {strands}")]
    GeneratorOutOfRange { index: usize, strands: usize },
    #[error("InvalidBraid: {0}")]
    InvalidBraid(String),
    #[error("TooManyCrossings: {crossings} > {limit}")]
    TooManyCrossings { crossings: usize, limit: usize },
    #[error("RelationViolated: {relation}: {witness}")]
    RelationViolated { relation: String, witness: String },
    #[error("InvalidParameters: {0}")]
    InvalidParameters(String),
    #[error("MixedParity: exponents of {0} are not uniformly integral or half-integral")]
    MixedParity(String),
}

/// The loop value `-A^2 - A^-2`.
pub fn kauffman_delta() -> KauffmanPoly {
    KauffmanPoly::monomial(2, BigInt::from(-1)) + KauffmanPoly::monomial(-2, BigInt::from(-1))
}

/// A Laurent polynomial in `t^(1/2)`, stored with doubled exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HalfIntLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl HalfIntLaurent {
    /// From `(doubled exponent, coefficient)` pairs; all exponents must have
    /// the same parity.
    pub fn from_doubled<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Result<Self, JonesError> {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        let out = Self { terms: map };
        let parities: std::collections::BTreeSet<i64> = out.terms.keys().map(|e| e.rem_euclid(2)).collect();
        if parities.len() > 1 {
            return Err(JonesError::MixedParity(out.to_string()));
        }
        Ok(out)
    }

    /// Integer powers of `t` given as `(exponent, coefficient)`.
    pub fn from_integer_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_doubled(terms.iter().map(|&(e, c)| (2 * e, BigInt::from(c)))).expect("integral exponents")
    }

    pub fn one() -> Self {
        Self::from_integer_terms(&[(0, 1)])
    }

    /// `(doubled exponent, coefficient)` in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Substitutes `t -> t^-1` (the mirror image).
    pub fn mirror(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }
}

impl fmt::Display for HalfIntLaurent {
    /// Ascending powers of `t`: `-t^-4 + t^-3 + t^-1`, `-t^(-5/2) - t^(-1/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            let power = match (e % 2 == 0, e / 2) {
                (true, 0) => String::new(),
                (true, 1) => "t".to_string(),
                (true, k) => format!("t^{k}"),
                (false, _) => format!("t^({e}/2)"),
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{power}")?,
                (false, false) => write!(f, "{mag}*{power}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let trefoil = HalfIntLaurent::from_integer_terms(&[(-4, -1), (-3, 1), (-1, 1)]);
        assert_eq!(trefoil.to_string(), "-t^-4 + t^-3 + t^-1");
        let hopf = HalfIntLaurent::from_doubled([(-5, BigInt::from(-1)), (-1, BigInt::from(-1))]).unwrap();
        assert_eq!(hopf.to_string(), "-t^(-5/2) - t^(-1/2)");
        assert!(!hopf.is_integral());
        let fig8 = HalfIntLaurent::from_integer_terms(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
        assert_eq!(fig8.to_string(), "t^-2 - t^-1 + 1 - t + t^2");
        assert_eq!(fig8.mirror(), fig8);
        assert_eq!(HalfIntLaurent::default().to_string(), "0");
        assert_eq!(HalfIntLaurent::from_integer_terms(&[(3, 2)]).to_string(), "2*t^3");
    }

    #[test]
    fn mixed_parity_is_rejected() {
        assert!(HalfIntLaurent::from_doubled([(1, BigInt::from(1)), (2, BigInt::from(1))]).is_err());
    }
}
