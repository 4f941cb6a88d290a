//! Scalar traits shared by every algebraic container in the crate.
//!
//! Polynomials, Temperley-Lieb elements and the numeric routines are generic
//! over these traits. Exact work uses [`BigInt`] and [`BigRational`]; the
//! floating-point routines accept any [`num_traits::Float`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with identity.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// `self^exp` by repeated squaring.
    fn pow_u32(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        result
    }
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
{
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }
}

impl Field for f32 {}
impl Field for f64 {}
impl Field for BigRational {}

/// Rings with a partial exact division: `a.exact_div(b) == Some(q)` iff `q * b == a`.
pub trait ExactDiv: Ring {
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

impl ExactDiv for BigInt {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

impl ExactDiv for BigRational {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

impl ExactDiv for i64 {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0 || self % rhs != 0 {
            None
        } else {
            self.checked_div(*rhs)
        }
    }
}

/// Sign information for coefficient rings that carry an order.
pub trait Sign {
    fn is_negative_value(&self) -> bool;
}

impl<T: Signed> Sign for T {
    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

/// `a + b·√d` over the rationals.
///
/// The radicand travels with every element that has a nonzero irrational
/// part; pure rationals carry none, so [`Zero`] and [`One`] need no context.
#[derive(Clone, Debug)]
pub struct QuadraticExt {
    pub rational: BigRational,
    pub irrational: BigRational,
    radicand: Option<BigRational>,
}

/// `√r` when `r >= 0` is the square of a rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl QuadraticExt {
    pub fn from_rational(r: BigRational) -> Self {
        Self {
            rational: r,
            irrational: BigRational::zero(),
            radicand: None,
        }
    }

    /// The element `√d`; rational when `d` is the square of a rational.
    pub fn sqrt_of(d: BigRational) -> Self {
        if let Some(r) = rational_sqrt(&d) {
            return Self::from_rational(r);
        }
        Self {
            rational: BigRational::zero(),
            irrational: BigRational::one(),
            radicand: Some(d),
        }
    }

    pub fn new(rational: BigRational, irrational: BigRational, radicand: BigRational) -> Self {
        Self {
            rational,
            irrational,
            radicand: Some(radicand),
        }
    }

    pub fn radicand(&self) -> Option<&BigRational> {
        self.radicand.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    fn merged_radicand(&self, other: &Self) -> Option<BigRational> {
        match (&self.radicand, &other.radicand) {
            (Some(a), Some(b)) => {
                assert_eq!(a, b, "mixing elements of different quadratic fields");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn norm(&self) -> BigRational {
        let d = self.radicand.clone().unwrap_or_else(BigRational::zero);
        &self.rational * &self.rational - &self.irrational * &self.irrational * d
    }

    fn conjugate(&self) -> Self {
        Self {
            rational: self.rational.clone(),
            irrational: -self.irrational.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl PartialEq for QuadraticExt {
    fn eq(&self, other: &Self) -> bool {
        self.rational == other.rational && self.irrational == other.irrational
    }
}

impl fmt::Display for QuadraticExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.radicand {
            Some(d) if !self.irrational.is_zero() => {
                write!(f, "{} + {}*sqrt({})", self.rational, self.irrational, d)
            }
            _ => write!(f, "{}", self.rational),
        }
    }
}

impl Zero for QuadraticExt {
    fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }
}

impl One for QuadraticExt {
    fn one() -> Self {
        Self::from_rational(BigRational::one())
    }
}

impl Add for QuadraticExt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let radicand = self.merged_radicand(&rhs);
        Self {
            rational: self.rational + rhs.rational,
            irrational: self.irrational + rhs.irrational,
            radicand,
        }
    }
}

impl Sub for QuadraticExt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for QuadraticExt {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            rational: -self.rational,
            irrational: -self.irrational,
            radicand: self.radicand,
        }
    }
}

impl Mul for QuadraticExt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let radicand = self.merged_radicand(&rhs);
        let mut rational = &self.rational * &rhs.rational;
        if !self.irrational.is_zero() && !rhs.irrational.is_zero() {
            let d = radicand.clone().expect("irrational parts carry their radicand");
            rational += &self.irrational * &rhs.irrational * d;
        }
        let irrational = &self.rational * &rhs.irrational + &self.irrational * &rhs.rational;
        Self {
            rational,
            irrational,
            radicand,
        }
    }
}

impl Div for QuadraticExt {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let norm = rhs.norm();
        assert!(!norm.is_zero(), "division by zero in quadratic extension");
        let num = self * rhs.conjugate();
        Self {
            rational: num.rational / &norm,
            irrational: num.irrational / &norm,
            radicand: num.radicand,
        }
    }
}

impl Field for QuadraticExt {}
