use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::Ring;

/// A univariate Laurent polynomial `Σ c_k v^k`.
///
/// Unlike [`super::LaurentPolynomial`] the variable count is fixed, so this
/// type is itself a [`Ring`] and can serve as a coefficient ring (the
/// Temperley-Lieb algebra over `Z[A, A^-1]` uses it that way).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct UniLaurent<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Ring> UniLaurent<C> {
    pub fn monomial(exp: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::monomial(1, C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: C) {
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

    pub fn coefficient(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `v -> v^k` (k may be negative).
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0, "substitution by v^0 collapses terms");
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, v)| (e, v.clone() * c.clone())))
    }

    /// Writes the polynomial with the given variable name, highest power first.
    pub fn render(&self, var: &str) -> String
    where
        C: Signed + fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = c.abs();
            let power = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            if power.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}*{power}"));
            }
        }
        out
    }
}

impl<C: Ring> Zero for UniLaurent<C> {
    fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Ring> One for UniLaurent<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Ring> Add for UniLaurent<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<C: Ring> Sub for UniLaurent<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Ring> Neg for UniLaurent<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Ring> Mul for UniLaurent<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<'a, C: Ring> Mul<&'a UniLaurent<C>> for &'a UniLaurent<C> {
    type Output = UniLaurent<C>;
    fn mul(self, rhs: Self) -> UniLaurent<C> {
        let mut out = UniLaurent::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}
