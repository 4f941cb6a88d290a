//! The cluster algebra A(1,1) of the annulus.
//!
//! Cluster variables `x_i` satisfy `x_{i-1} x_{i+1} = x_i^2 + 1`, with
//! `x_1, x_2` the initial cluster; the recurrence is run in both directions,
//! so `i` may be zero or negative.

mod moduli;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{chebyshev_t_dense, LaurentError, LaurentPolynomial};

pub use moduli::{
    admissible_moduli, gaussian_unit_check, roots_of_unity_residual, solve_moduli, tau_identity_residuals,
    verify_trace_exchange, AdmissibleModuli, HeckeModulus, ModulusSolution,
};

type Poly = LaurentPolynomial<BigInt>;

pub const DEFAULT_BOUND: i64 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnulusError {
    #[error("BoundExceeded: |{index}| > {bound}")]
    BoundExceeded { index: i64, bound: i64 },
    #[error("InvalidParameters: {0}")]
    InvalidParameters(String),
    #[error("DiscriminantNegative: t = {t} < 4, so t^2 (t^2 - 16) < 0")]
    DiscriminantNegative { t: f64 },
    #[error("ResidualTooLarge: {what} = {value:e}")]
    ResidualTooLarge { what: &'static str, value: f64 },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Lazily computed `x_i` for `|i| <= bound`.
#[derive(Clone, Debug)]
pub struct A11Sequence {
    bound: i64,
    cache: BTreeMap<i64, Poly>,
}

impl Default for A11Sequence {
    fn default() -> Self {
        Self::new(DEFAULT_BOUND)
    }
}

impl A11Sequence {
    pub fn new(bound: i64) -> Self {
        let cache = BTreeMap::from([(1, Poly::variable(2, 0)), (2, Poly::variable(2, 1))]);
        Self { bound: bound.max(2), cache }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn variable(&mut self, i: i64) -> Result<Poly, AnnulusError> {
        if i.abs() > self.bound {
            return Err(AnnulusError::BoundExceeded { index: i, bound: self.bound });
        }
        if let Some(p) = self.cache.get(&i) {
            return Ok(p.clone());
        }
        let one = Poly::one(2);
        if i > 2 {
            let mut k = *self.cache.range(..i).next_back().expect("x2 cached").0;
            while k < i {
                // x_{k+1} = (x_k^2 + 1) / x_{k-1}
                let (prev, cur) = (&self.cache[&(k - 1)], &self.cache[&k]);
                let next = (&cur.pow(2) + &one).div_exact(prev)?;
                k += 1;
                self.cache.insert(k, next);
            }
        } else {
            let mut k = *self.cache.range(i + 1..).next().expect("x1 cached").0;
            while k > i {
                // x_{k-1} = (x_k^2 + 1) / x_{k+1}
                let (cur, next) = (&self.cache[&k], &self.cache[&(k + 1)]);
                let prev = (&cur.pow(2) + &one).div_exact(next)?;
                k -= 1;
                self.cache.insert(k, prev);
            }
        }
        Ok(self.cache[&i].clone())
    }
}

/// `x_i` with the default bound.
pub fn a11_variable(i: i64) -> Result<Poly, AnnulusError> {
    A11Sequence::default().variable(i)
}

/// `x1 x4 - x2 x3`, checked against `(x1^2 + 1 + x2^2) / (x1 x2)`.
pub fn casimir() -> Poly {
    let mut seq = A11Sequence::default();
    let x: Vec<Poly> = (1..=4).map(|i| seq.variable(i).expect("within bound")).collect();
    let c = &(&x[0] * &x[3]) - &(&x[1] * &x[2]);
    let expected = Poly::from_int_terms(2, &[(&[1, -1], 1), (&[-1, -1], 1), (&[-1, 1], 1)]);
    assert_eq!(c, expected, "Casimir element has the wrong expansion");
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisElement {
    /// `x_i^p x_{i+1}^q`
    Monomial { i: i64, p: u32, q: u32 },
    /// `T_n` of the Casimir element
    Chebyshev { n: usize },
}

pub fn canonical_basis_element(kind: BasisElement) -> Result<Poly, AnnulusError> {
    match kind {
        BasisElement::Monomial { i, p, q } => {
            let mut seq = A11Sequence::new(DEFAULT_BOUND.max(i.abs() + 1));
            Ok(&seq.variable(i)?.pow(p) * &seq.variable(i + 1)?.pow(q))
        }
        BasisElement::Chebyshev { n } if n >= 3 => {
            let c = casimir();
            // Horner on the dense coefficients
            let mut acc = Poly::zero(2);
            for coeff in chebyshev_t_dense(n).into_iter().rev() {
                acc = &(&acc * &c) + &Poly::constant(2, coeff);
            }
            Ok(acc)
        }
        BasisElement::Chebyshev { n } => Err(AnnulusError::InvalidParameters(format!(
            "the Chebyshev family starts at n = 3, got {n}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn lp(s: &str) -> Poly {
        Poly::parse(s, 2).unwrap()
    }

    #[test]
    fn variable_examples() {
        assert_eq!(a11_variable(1).unwrap(), lp("x1"));
        assert_eq!(a11_variable(3).unwrap(), lp("x1^-1 + x1^-1*x2^2"));
        assert_eq!(
            a11_variable(4).unwrap(),
            lp("x1^-2*x2^-1*x1^2 + x1^-2*x2^-1 + 2*x1^-2*x2 + x1^-2*x2^3")
        );
        // backwards: x0 = (x1^2 + 1)/x2
        assert_eq!(a11_variable(0).unwrap(), lp("x1^2*x2^-1 + x2^-1"));
        assert_eq!(
            a11_variable(13),
            Err(AnnulusError::BoundExceeded { index: 13, bound: 12 })
        );
        assert!(a11_variable(-12).is_ok());
    }

    #[test]
    fn recurrence_and_positivity() {
        let mut seq = A11Sequence::default();
        let one = Poly::one(2);
        for i in -10..=10 {
            let lhs = &seq.variable(i - 1).unwrap() * &seq.variable(i + 1).unwrap();
            let x = seq.variable(i).unwrap();
            assert_eq!(lhs, &(&x * &x) + &one, "i = {i}");
        }
        for i in -12..=12 {
            assert!(seq.variable(i).unwrap().is_nonneg());
        }
    }

    #[test]
    fn casimir_properties() {
        let c = casimir();
        assert_eq!(c.len(), 3);
        assert!(c.terms().all(|(_, k)| *k == BigInt::from(1)));
        let one = BigRational::from_integer(1.into());
        assert_eq!(c.eval(&[one.clone(), one]).unwrap(), BigRational::from_integer(3.into()));
        assert_eq!(c.swap_variables(0, 1), c);
    }

    #[test]
    fn basis_examples() {
        let m = |i, p, q| canonical_basis_element(BasisElement::Monomial { i, p, q }).unwrap();
        assert_eq!(m(1, 1, 0), lp("x1"));
        assert_eq!(m(1, 0, 0), Poly::one(2));
        assert_eq!(m(2, 1, 1), &lp("x2") * &a11_variable(3).unwrap());

        let t3 = canonical_basis_element(BasisElement::Chebyshev { n: 3 }).unwrap();
        assert_eq!(t3.len(), 10);
        assert_eq!(t3.swap_variables(0, 1), t3);
        // direct expansion: 4c^3 - 3c
        let c = casimir();
        let direct = &c.pow(3).scale(&BigInt::from(4)) - &c.scale(&BigInt::from(3));
        assert_eq!(t3, direct);
        assert!(canonical_basis_element(BasisElement::Chebyshev { n: 2 }).is_err());
    }
}
