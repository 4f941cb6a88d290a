use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::K0Error;
use crate::laurent::{ExponentVector, LaurentPolynomial, UniLaurent};

/// An integer polynomial in `x`, the K0 group of the GICAR algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GicarElement {
    /// Ascending coefficients, no trailing zeros.
    coeffs: Vec<BigInt>,
}

impl GicarElement {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses text such as `x^2 - x + 1` (also `x1`).
    pub fn parse(text: &str) -> Result<Self, K0Error> {
        let p = LaurentPolynomial::<BigInt>::parse(text, 1).map_err(|e| K0Error::InvalidElement(e.to_string()))?;
        Self::from_laurent(&p)
    }

    pub fn from_laurent(p: &LaurentPolynomial<BigInt>) -> Result<Self, K0Error> {
        if p.nvars() != 1 || !p.is_polynomial() {
            return Err(K0Error::InvalidElement(format!(
                "expected a polynomial in one variable, got {p}"
            )));
        }
        let degree = p.max_exponents().as_slice().first().copied().unwrap_or(0);
        Ok(Self::from_coeffs((0..=degree).map(|k| p.coefficient(&[k])).collect()))
    }

    pub fn to_laurent(&self) -> LaurentPolynomial<BigInt> {
        LaurentPolynomial::from_terms(
            1,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (ExponentVector::new(vec![k as i64]), c.clone())),
        )
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).cloned().unwrap_or_default() + other.coeffs.get(k).cloned().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl fmt::Display for GicarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = UniLaurent::from_terms(self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c.clone())));
        write!(f, "{}", u.render("x"))
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// `x^k (1 - x)^(n - k)` expanded.
pub fn gicar_rho(k: i64, n: i64) -> Result<GicarElement, K0Error> {
    if k < 0 || k > n {
        return Err(K0Error::IndexOutOfRange { k, n });
    }
    let (k, n) = (k as usize, n as usize);
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for j in 0..=n - k {
        let c = binomial(n - k, j);
        coeffs[k + j] = if j % 2 == 0 { c } else { -c };
    }
    Ok(GicarElement::from_coeffs(coeffs))
}

/// Coordinates of `p` in the basis `{x^k (1 - x)^(n - k)}_{k=0..n}`, or
/// `None` when `deg p > n`. The basis is unit lower-triangular in the
/// monomial order, so forward substitution is exact over the integers.
pub fn bernstein_coordinates(p: &GicarElement, n: usize) -> Option<Vec<BigInt>> {
    if !p.is_zero() && p.degree() > n {
        return None;
    }
    let basis: Vec<GicarElement> = (0..=n).map(|k| gicar_rho(k as i64, n as i64).expect("k <= n")).collect();
    let mut residual: Vec<BigInt> = (0..=n).map(|k| p.coeffs.get(k).cloned().unwrap_or_default()).collect();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let c = residual[k].clone();
        if !c.is_zero() {
            for (j, b) in basis[k].coeffs.iter().enumerate() {
                residual[j] -= &c * b;
            }
        }
        out.push(c);
    }
    debug_assert!(residual.iter().all(Zero::is_zero));
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GicarPositivity {
    /// All coordinates at this degree are nonnegative.
    Positive { degree: usize, coordinates: Vec<BigInt> },
    /// `p(point) = value < 0` with `0 < point < 1`.
    NotPositive { point: BigRational, value: BigRational },
    Unknown,
}

const GRID_LEVELS: u32 = 6;
const REFINE_LEVELS: u32 = 16;

/// Decides positivity on `(0, 1)` up to `max_degree`.
///
/// A negative value is searched for on dyadic points, coarse to fine
/// (denominators 2, 4, ..., 64, first negative point wins), then refined
/// near the grid minimum down to spacing `2^-16`.
pub fn gicar_is_positive(p: &GicarElement, max_degree: usize) -> Result<GicarPositivity, K0Error> {
    if p.is_zero() {
        return Err(K0Error::InvalidElement("the zero polynomial has no positivity class".into()));
    }
    for n in p.degree()..=max_degree.max(p.degree()) {
        let coordinates = bernstein_coordinates(p, n).expect("n >= degree");
        if coordinates.iter().all(|c| !c.is_negative()) {
            return Ok(GicarPositivity::Positive { degree: n, coordinates });
        }
    }
    Ok(match negative_point(p) {
        Some((point, value)) => GicarPositivity::NotPositive { point, value },
        None => GicarPositivity::Unknown,
    })
}

fn dyadic(num: i64, level: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::one() << level)
}

fn negative_point(p: &GicarElement) -> Option<(BigRational, BigRational)> {
    let mut best: Option<(BigRational, BigRational)> = None;
    for level in 1..=GRID_LEVELS {
        for num in (1..1i64 << level).step_by(2) {
            let x = dyadic(num, level);
            let v = p.eval(&x);
            if v.is_negative() {
                return Some((x, v));
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some((x, v));
            }
        }
    }
    let (center, _) = best?;
    let mut center = center;
    for level in GRID_LEVELS + 1..=REFINE_LEVELS {
        // scan ±2^-6 around the current best point at spacing 2^-level
        let span = 1i64 << (level - GRID_LEVELS);
        let scaled = center.clone() * BigRational::from_integer(BigInt::one() << level);
        let mid = scaled.round().to_integer();
        let mid: i64 = mid.try_into().ok()?;
        let mut local: Option<(BigRational, BigRational)> = None;
        for num in (mid - span).max(1)..=(mid + span).min((1i64 << level) - 1) {
            let x = dyadic(num, level);
            let v = p.eval(&x);
            if v.is_negative() {
                return Some((x, v));
            }
            if local.as_ref().is_none_or(|(_, b)| v < *b) {
                local = Some((x, v));
            }
        }
        if let Some((x, _)) = local {
            center = x;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GicarElement {
        GicarElement::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rho_examples() {
        assert_eq!(gicar_rho(0, 0).unwrap().to_string(), "1");
        assert_eq!(gicar_rho(1, 2).unwrap().to_string(), "-x^2 + x");
        assert_eq!(gicar_rho(1, 1).unwrap(), g("x"));
        assert_eq!(gicar_rho(3, 2), Err(K0Error::IndexOutOfRange { k: 3, n: 2 }));
    }

    #[test]
    fn pascal_relation_under_rho() {
        for n in 0..=10 {
            for k in 0..=n {
                let lhs = gicar_rho(k, n).unwrap();
                let rhs = gicar_rho(k, n + 1).unwrap().add(&gicar_rho(k + 1, n + 1).unwrap());
                assert_eq!(lhs, rhs, "k = {k}, n = {n}");
            }
        }
    }

    #[test]
    fn coordinates_match_closed_form() {
        // c_k = Σ_{j<=k} a_j C(n-j, k-j)
        let p = g("3*x^3 - 5*x^2 + x - 2");
        for n in 3..12usize {
            let coords = bernstein_coordinates(&p, n).unwrap();
            for (k, c) in coords.iter().enumerate() {
                let mut expected = BigInt::zero();
                for (j, a) in p.coeffs().iter().enumerate().take(k + 1) {
                    expected += a * binomial(n - j, k - j);
                }
                assert_eq!(*c, expected);
            }
        }
        assert_eq!(bernstein_coordinates(&p, 2), None);
    }

    #[test]
    fn positivity_examples() {
        assert_eq!(
            gicar_is_positive(&g("x"), 64).unwrap(),
            GicarPositivity::Positive {
                degree: 1,
                coordinates: vec![BigInt::zero(), BigInt::one()]
            }
        );
        assert_eq!(
            gicar_is_positive(&g("x^2 - x + 1"), 64).unwrap(),
            GicarPositivity::Positive {
                degree: 2,
                coordinates: vec![BigInt::one(); 3]
            }
        );
        assert!(matches!(gicar_is_positive(&g("1 - x"), 64).unwrap(), GicarPositivity::Positive { .. }));
        assert!(matches!(gicar_is_positive(&g("x - x^2"), 64).unwrap(), GicarPositivity::Positive { .. }));
        assert_eq!(
            gicar_is_positive(&g("2*x - 1"), 64).unwrap(),
            GicarPositivity::NotPositive { point: q(1, 4), value: q(-1, 2) }
        );
        assert_eq!(
            gicar_is_positive(&g("-x"), 64).unwrap(),
            GicarPositivity::NotPositive { point: q(1, 2), value: q(-1, 2) }
        );
        assert!(gicar_is_positive(&GicarElement::from_ints(&[]), 64).is_err());
    }

    #[test]
    fn needs_higher_degree() {
        // 4x^2 - 4x + 2 = 2(2x - 1)^2 + ... stays positive; coordinates go positive only at n >= 3
        let p = g("4*x^2 - 3*x + 1");
        match gicar_is_positive(&p, 64).unwrap() {
            GicarPositivity::Positive { degree, .. } => assert!(degree > 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn refinement_finds_narrow_dips() {
        // 4(100x - 1)^2 - 1 is negative only on (0.005, 0.015), between grid points
        let tight = g("40000*x^2 - 800*x + 3");
        match gicar_is_positive(&tight, 8).unwrap() {
            GicarPositivity::NotPositive { point, value } => {
                assert!(value.is_negative());
                assert_eq!(tight.eval(&point), value);
                assert!(point > q(0, 1) && point < q(1, 1));
            }
            other => panic!("{other:?}"),
        }
        // a double root at 1/2 is nonnegative but not certified at low degree
        assert_eq!(gicar_is_positive(&g("4*x^2 - 4*x + 1"), 8).unwrap(), GicarPositivity::Unknown);
    }
}
