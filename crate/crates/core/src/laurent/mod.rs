//! Exact multivariate Laurent polynomials.
//!
//! A [`LaurentPolynomial`] is a finitely supported map from integer exponent
//! vectors to nonzero coefficients. Terms are kept in a `BTreeMap`, so the
//! iteration order (lexicographic on exponent vectors) is canonical and equal
//! polynomials render identically.

mod chebyshev;
mod text;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::scalar::{ExactDiv, Field, Ring, Sign};

pub use chebyshev::{chebyshev_t, chebyshev_t_dense};
pub use text::ParseError;
pub use univariate::UniLaurent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("VariableCountMismatch: operands have {left} and {right} variables")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("DivisionByZero: divisor is the zero polynomial")]
    DivisionByZero,
    #[error("NotDivisible: {dividend} is not an exact multiple of {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("ZeroCoordinate: coordinate {index} is zero but carries a negative exponent")]
    ZeroCoordinate { index: usize },
    #[error("PointLength: expected {expected} coordinates, got {got}")]
    PointLength { expected: usize, got: usize },
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// Exponents of a Laurent monomial, one signed entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, index: usize) -> Self {
        let mut v = vec![0; n];
        v[index] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    fn plus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn minus(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|e| e * k).collect())
    }
}

/// A Laurent polynomial in `nvars` variables with coefficients in `C`.
///
/// Stored coefficients are never zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPolynomial<C> {
    nvars: usize,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Ring> LaurentPolynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, ExponentVector::zeros(nvars), c)
    }

    /// The variable `x_{index+1}`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        Self::monomial(nvars, ExponentVector::unit(nvars, index), C::one())
    }

    pub fn monomial(nvars: usize, exponents: ExponentVector, c: C) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        Self { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated or zero terms.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, C)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[i64]) -> C {
        self.terms
            .get(&ExponentVector(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    fn add_term(&mut self, e: ExponentVector, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), LaurentError> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(LaurentError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.plus(e2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())),
        )
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &ExponentVector) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.plus(shift), c.clone())).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Componentwise minimum exponent over all terms (zeros for the zero polynomial).
    pub fn min_exponents(&self) -> ExponentVector {
        self.fold_exponents(i64::min)
    }

    pub fn max_exponents(&self) -> ExponentVector {
        self.fold_exponents(i64::max)
    }

    fn fold_exponents(&self, f: fn(i64, i64) -> i64) -> ExponentVector {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return ExponentVector::zeros(self.nvars);
        };
        let mut acc = first.0.clone();
        for e in iter {
            for (a, &b) in acc.iter_mut().zip(&e.0) {
                *a = f(*a, b);
            }
        }
        ExponentVector(acc)
    }

    /// True when every exponent is nonnegative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.0.iter().all(|&x| x >= 0))
    }

    pub fn map_coefficients<D: Ring>(&self, f: impl Fn(&C) -> D) -> LaurentPolynomial<D> {
        LaurentPolynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Swaps the roles of two variables.
    pub fn swap_variables(&self, i: usize, j: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = e.0.clone();
                    v.swap(i, j);
                    (ExponentVector(v), c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `arg` into a univariate polynomial (one variable, nonnegative exponents).
    pub fn compose_univariate(&self, arg: &Self) -> Self {
        assert_eq!(self.nvars, 1, "compose_univariate expects a univariate outer polynomial");
        assert!(self.is_polynomial(), "outer polynomial must have nonnegative exponents");
        let degree = self.max_exponents().0[0];
        let mut acc = LaurentPolynomial::zero(arg.nvars);
        for k in (0..=degree).rev() {
            acc = &acc * arg;
            let c = self.coefficient(&[k]);
            acc = acc.checked_add(&LaurentPolynomial::constant(arg.nvars, c)).expect("same nvars");
        }
        acc
    }

    /// Evaluates at `point`, lifting coefficients into the field `F`.
    pub fn eval_with<F: Field>(&self, point: &[F], lift: impl Fn(&C) -> F) -> Result<F, LaurentError> {
        if point.len() != self.nvars {
            return Err(LaurentError::PointLength {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut total = F::zero();
        for (e, c) in &self.terms {
            let mut term = lift(c);
            for (i, (&k, x)) in e.0.iter().zip(point).enumerate() {
                if k == 0 {
                    continue;
                }
                let base = if k > 0 {
                    x.clone()
                } else {
                    x.inv().ok_or(LaurentError::ZeroCoordinate { index: i })?
                };
                term = term * base.pow_u32(k.unsigned_abs() as u32);
            }
            total = total + term;
        }
        Ok(total)
    }
}

impl<C: Ring + Clone + Into<BigRational>> LaurentPolynomial<C> {
    /// Exact rational value at `point`.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational, LaurentError> {
        self.eval_with(point, |c| c.clone().into())
    }
}

impl<C: Ring + Sign> LaurentPolynomial<C> {
    /// True iff every stored coefficient is positive.
    pub fn is_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative_value())
    }
}

impl<C: Ring + Ord> LaurentPolynomial<C> {
    /// True iff `self - other` has only nonnegative coefficients.
    pub fn dominates(&self, other: &Self) -> Result<bool, LaurentError> {
        let diff = self.checked_sub(other)?;
        Ok(diff.terms.values().all(|c| *c >= C::zero()))
    }
}

impl<C: ExactDiv> LaurentPolynomial<C> {
    /// Exact quotient `self / divisor`.
    ///
    /// Both operands are shifted by their componentwise-minimum exponent so
    /// they become ordinary polynomials, then divided by graded-lex long
    /// division. A nonzero remainder (or an inexact coefficient division)
    /// yields [`LaurentError::NotDivisible`].
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, LaurentError>
    where
        C: fmt::Display + Signed,
    {
        self.check_vars(divisor)?;
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        let not_divisible = || LaurentError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };

        let p_shift = self.min_exponents();
        let q_shift = divisor.min_exponents();
        let neg_p = p_shift.scaled(-1);
        let neg_q = q_shift.scaled(-1);

        let mut remainder: BTreeMap<(i64, ExponentVector), C> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let e = e.plus(&neg_p);
                ((e.total_degree(), e), c.clone())
            })
            .collect();
        let q_terms: Vec<(ExponentVector, C)> = divisor
            .terms
            .iter()
            .map(|(e, c)| (e.plus(&neg_q), c.clone()))
            .collect();
        let (lead_e, lead_c) = q_terms
            .iter()
            .max_by(|a, b| (a.0.total_degree(), &a.0).cmp(&(b.0.total_degree(), &b.0)))
            .cloned()
            .expect("divisor is nonzero");

        let mut quotient = Self::zero(self.nvars);
        while let Some(((_, e), c)) = remainder.pop_last() {
            let diff = e.minus(&lead_e);
            if diff.0.iter().any(|&x| x < 0) {
                return Err(not_divisible());
            }
            let coef = c.exact_div(&lead_c).ok_or_else(not_divisible)?;
            for (qe, qc) in &q_terms {
                if *qe == lead_e {
                    continue;
                }
                let te = qe.plus(&diff);
                let key = (te.total_degree(), te);
                let delta = -(coef.clone() * qc.clone());
                match remainder.remove(&key) {
                    Some(old) => {
                        let sum = old + delta;
                        if !sum.is_zero() {
                            remainder.insert(key, sum);
                        }
                    }
                    None => {
                        remainder.insert(key, delta);
                    }
                }
            }
            quotient.add_term(diff, coef);
        }
        Ok(quotient.shift(&p_shift.minus(&q_shift)))
    }
}

impl<'a, C: Ring> Add<&'a LaurentPolynomial<C>> for &'a LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    /// Panics on a variable-count mismatch; use [`LaurentPolynomial::checked_add`] otherwise.
    fn add(self, rhs: Self) -> LaurentPolynomial<C> {
        self.checked_add(rhs).expect("variable counts differ")
    }
}

impl<'a, C: Ring> Sub<&'a LaurentPolynomial<C>> for &'a LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn sub(self, rhs: Self) -> LaurentPolynomial<C> {
        self.checked_sub(rhs).expect("variable counts differ")
    }
}

impl<'a, C: Ring> Mul<&'a LaurentPolynomial<C>> for &'a LaurentPolynomial<C> {
    type Output = LaurentPolynomial<C>;
    fn mul(self, rhs: Self) -> LaurentPolynomial<C> {
        self.checked_mul(rhs).expect("variable counts differ")
    }
}

impl<C: Ring> Neg for LaurentPolynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl LaurentPolynomial<BigInt> {
    /// Convenience constructor from `(exponents, coefficient)` pairs.
    pub fn from_int_terms(nvars: usize, terms: &[(&[i64], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e.to_vec()), BigInt::from(*c))),
        )
    }
}
