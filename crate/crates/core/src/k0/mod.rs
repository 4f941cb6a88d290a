//! Dimension groups of Bratteli diagrams.
//!
//! An element is a pair (level, integer vector); it is identified with its
//! pushes along the incidence matrices. Decisions that would need the whole
//! infinite limit are made up to a finite horizon and may answer `Unknown`.

mod gicar;
mod supernatural;
mod trace;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::bratteli::BratteliDiagram;
use crate::laurent::{ExponentVector, LaurentError, LaurentPolynomial};
use crate::matrix::{all_nonnegative, IntMatrix};

pub use gicar::{bernstein_coordinates, gicar_is_positive, gicar_rho, GicarElement, GicarPositivity};
pub use supernatural::{qn_contains, supernatural_of, Exponent, SupernaturalNumber};
pub use trace::{perron_left_eigenvector, trace_state, TraceState};

pub const DEFAULT_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum K0Error {
    #[error("LevelOutOfRange: level {level} is outside 0..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("LengthMismatch: level {level} has {expected} vertices, vector has {got} entries")]
    LengthMismatch { level: usize, expected: usize, got: usize },
    #[error("InvalidFactor: {0} (block entries must be at least 2)")]
    InvalidFactor(i64),
    #[error("NotPrimitive: {0}")]
    NotPrimitive(String),
    #[error("NotStationary: {0}")]
    NotStationary(String),
    #[error("IndexOutOfRange: need 0 <= k <= n, got k = {k}, n = {n}")]
    IndexOutOfRange { k: i64, n: i64 },
    #[error("NotComparable: {0}")]
    NotComparable(String),
    #[error("InvalidElement: {0}")]
    InvalidElement(String),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K0Element {
    pub level: usize,
    pub vector: Vec<BigInt>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct K0Json {
    level: usize,
    vector: Vec<i64>,
}

impl K0Element {
    pub fn new(level: usize, vector: Vec<BigInt>) -> Self {
        Self { level, vector }
    }

    pub fn from_ints(level: usize, vector: &[i64]) -> Self {
        Self::new(level, vector.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// `{"level": n, "vector": [...]}`
    pub fn from_json(text: &str) -> Result<Self, K0Error> {
        let j: K0Json = serde_json::from_str(text).map_err(|e| K0Error::InvalidElement(e.to_string()))?;
        Ok(Self::from_ints(j.level, &j.vector))
    }

    pub fn to_json(&self) -> String {
        let v: Vec<String> = self.vector.iter().map(BigInt::to_string).collect();
        format!("{{\"level\":{},\"vector\":[{}]}}", self.level, v.join(","))
    }

    pub fn is_zero(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }

    /// `α·self + β·other`, both at the same level.
    pub fn combine(&self, alpha: &BigInt, other: &Self, beta: &BigInt) -> Self {
        assert_eq!(self.level, other.level, "elements must share a level");
        Self::new(
            self.level,
            self.vector
                .iter()
                .zip(&other.vector)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
    }

    fn check(&self, d: &BratteliDiagram) -> Result<(), K0Error> {
        let depth = d.depth();
        let expected = *d
            .levels()
            .get(self.level)
            .ok_or(K0Error::LevelOutOfRange { level: self.level, depth })?;
        if expected != self.vector.len() {
            return Err(K0Error::LengthMismatch {
                level: self.level,
                expected,
                got: self.vector.len(),
            });
        }
        Ok(())
    }
}

/// Pushes `e` to `target_level` through the incidence matrices.
pub fn k0_push(e: &K0Element, d: &BratteliDiagram, target_level: usize) -> Result<K0Element, K0Error> {
    e.check(d)?;
    if target_level < e.level || target_level > d.depth() {
        return Err(K0Error::LevelOutOfRange {
            level: target_level,
            depth: d.depth(),
        });
    }
    let mut v = e.vector.clone();
    for m in e.level..target_level {
        v = d.incidence_matrix(m).apply(&v);
    }
    Ok(K0Element::new(target_level, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equality {
    /// The pushes agree from this level on.
    Equal { level: usize },
    NotEqual,
    Unknown,
}

fn horizon_level(d: &BratteliDiagram, horizon: usize) -> usize {
    horizon.min(d.depth())
}

/// Decides equality in the limit up to `horizon` (an absolute level, capped
/// at the diagram depth).
pub fn k0_equal(a: &K0Element, b: &K0Element, d: &BratteliDiagram, horizon: usize) -> Result<Equality, K0Error> {
    a.check(d)?;
    b.check(d)?;
    let common = a.level.max(b.level);
    let h = horizon_level(d, horizon);
    if common > h {
        return Ok(Equality::Unknown);
    }
    let mut x = k0_push(a, d, common)?.vector;
    let mut y = k0_push(b, d, common)?.vector;
    for m in common..=h {
        if x == y {
            return Ok(Equality::Equal { level: m });
        }
        if m < h {
            let step = d.incidence_matrix(m);
            x = step.apply(&x);
            y = step.apply(&y);
        }
    }
    // differing vectors stay different under injective maps
    let injective = (common..d.depth()).all(|m| d.incidence_matrix(m).is_injective());
    Ok(if injective { Equality::NotEqual } else { Equality::Unknown })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Positivity {
    /// Some push is nonnegative and nonzero.
    Positive { level: usize },
    /// The element pushes to zero.
    PositiveZero { level: usize },
    /// The Perron functional is negative at `level`; `value` is
    /// `⟨w, v⟩ / max|v|` with `w` normalized to sum 1.
    NotPositive { level: usize, value: f64 },
    Unknown,
}

/// Positivity up to `horizon`. When no push is nonnegative and the tail of
/// the diagram is a repeated primitive matrix, a negative Perron functional
/// certifies `NotPositive`.
pub fn k0_is_positive(e: &K0Element, d: &BratteliDiagram, horizon: usize) -> Result<Positivity, K0Error> {
    e.check(d)?;
    let h = horizon_level(d, horizon);
    if e.level > h {
        return Ok(Positivity::Unknown);
    }
    let mut v = e.vector.clone();
    for m in e.level..=h {
        if v.iter().all(Zero::is_zero) {
            return Ok(Positivity::PositiveZero { level: m });
        }
        if all_nonnegative(&v) {
            return Ok(Positivity::Positive { level: m });
        }
        if m < h {
            v = d.incidence_matrix(m).apply(&v);
        }
    }
    if let Some(a) = stationary_tail(d, h) {
        if a.is_primitive() {
            let w: Vec<f64> = perron_left_eigenvector(&a, 1e-14)?.1;
            let scale = v
                .iter()
                .filter_map(|x| x.to_f64())
                .fold(0.0f64, |acc, x| acc.max(x.abs()));
            let value: f64 = w
                .iter()
                .zip(&v)
                .map(|(wi, x)| wi * x.to_f64().unwrap_or(f64::NAN) / scale)
                .sum();
            if value < -1e-9 {
                return Ok(Positivity::NotPositive { level: h, value });
            }
        }
    }
    Ok(Positivity::Unknown)
}

/// The matrix repeated on every step from `level` to the end, if any.
fn stationary_tail(d: &BratteliDiagram, level: usize) -> Option<IntMatrix> {
    let mats = d.incidence_matrices();
    let last = mats.last()?.clone();
    let from = level.min(mats.len() - 1);
    mats[from..].iter().all(|m| *m == last).then_some(last)
}

/// An interpolant `c` with `a_i <= c <= b_j` coefficientwise: the
/// coefficientwise maximum of `a1` and `a2`.
pub fn riesz_interpolate(
    a1: &LaurentPolynomial<BigInt>,
    a2: &LaurentPolynomial<BigInt>,
    b1: &LaurentPolynomial<BigInt>,
    b2: &LaurentPolynomial<BigInt>,
) -> Result<LaurentPolynomial<BigInt>, K0Error> {
    let names = ["a1", "a2", "b1", "b2"];
    let (a, b) = ([a1, a2], [b1, b2]);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if !bj.checked_sub(ai)?.is_nonneg() {
                return Err(K0Error::NotComparable(format!(
                    "{} - {} has a negative coefficient",
                    names[2 + j],
                    names[i]
                )));
            }
        }
    }
    let support: BTreeSet<&ExponentVector> = a1.terms().chain(a2.terms()).map(|(e, _)| e).collect();
    let c = LaurentPolynomial::from_terms(
        a1.nvars(),
        support.into_iter().map(|e| {
            let (x, y) = (a1.coefficient(e.as_slice()), a2.coefficient(e.as_slice()));
            (e.clone(), x.max(y))
        }),
    );
    for x in [a1, a2] {
        assert!(c.checked_sub(x)?.is_nonneg(), "interpolant is not above {x:?}");
    }
    for y in [b1, b2] {
        assert!(y.checked_sub(&c)?.is_nonneg(), "interpolant is not below {y:?}");
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib(repeat: usize) -> BratteliDiagram {
        BratteliDiagram::stationary(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap(), repeat).unwrap()
    }

    fn lp(s: &str) -> LaurentPolynomial<BigInt> {
        LaurentPolynomial::parse(s, 2).unwrap()
    }

    #[test]
    fn push_examples() {
        let pascal = BratteliDiagram::pascal(3);
        let e = K0Element::from_ints(1, &[0, 1]);
        assert_eq!(k0_push(&e, &pascal, 2).unwrap(), K0Element::from_ints(2, &[0, 1, 1]));
        assert_eq!(k0_push(&e, &pascal, 1).unwrap(), e);
        let f = K0Element::from_ints(0, &[1, -1]);
        assert_eq!(k0_push(&f, &fib(4), 1).unwrap(), K0Element::from_ints(1, &[0, 1]));
        assert!(matches!(k0_push(&e, &pascal, 9), Err(K0Error::LevelOutOfRange { .. })));
        assert!(matches!(
            k0_push(&K0Element::from_ints(1, &[1]), &pascal, 2),
            Err(K0Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn equality_examples() {
        let collapse = BratteliDiagram::stationary(&IntMatrix::from_rows(&[vec![1, 1]]).unwrap(), 1).unwrap();
        let (a, b) = (K0Element::from_ints(0, &[1, 0]), K0Element::from_ints(0, &[0, 1]));
        assert_eq!(k0_equal(&a, &b, &collapse, 64).unwrap(), Equality::Equal { level: 1 });
        assert_eq!(k0_equal(&a, &b, &fib(10), 64).unwrap(), Equality::NotEqual);
        assert_eq!(k0_equal(&a, &a, &fib(10), 64).unwrap(), Equality::Equal { level: 0 });
        // a non-injective step that does not identify the pair
        let proj = BratteliDiagram::stationary(&IntMatrix::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap(), 2).unwrap();
        assert_eq!(k0_equal(&a, &b, &proj, 64).unwrap(), Equality::Unknown);
    }

    #[test]
    fn positivity_examples() {
        let d = fib(64);
        assert_eq!(
            k0_is_positive(&K0Element::from_ints(0, &[1, -1]), &d, 64).unwrap(),
            Positivity::Positive { level: 1 }
        );
        assert_eq!(
            k0_is_positive(&K0Element::from_ints(0, &[0, 0]), &d, 64).unwrap(),
            Positivity::PositiveZero { level: 0 }
        );
        assert!(matches!(
            k0_is_positive(&K0Element::from_ints(0, &[-1, 0]), &d, 64).unwrap(),
            Positivity::NotPositive { .. }
        ));
        // (2, -3): 2φ - 3 > 0, so it becomes positive after a few pushes
        assert!(matches!(
            k0_is_positive(&K0Element::from_ints(0, &[2, -3]), &d, 64).unwrap(),
            Positivity::Positive { .. }
        ));
        // no certificate on a non-primitive diagram
        let id = BratteliDiagram::stationary(&IntMatrix::identity(2), 5).unwrap();
        assert_eq!(
            k0_is_positive(&K0Element::from_ints(0, &[-1, 0]), &id, 64).unwrap(),
            Positivity::Unknown
        );
    }

    #[test]
    fn push_is_linear() {
        let d = fib(8);
        let (u, v) = (K0Element::from_ints(0, &[3, -2]), K0Element::from_ints(0, &[-5, 7]));
        let (alpha, beta) = (BigInt::from(4), BigInt::from(-9));
        let lhs = k0_push(&u.combine(&alpha, &v, &beta), &d, 8).unwrap();
        let rhs = k0_push(&u, &d, 8).unwrap().combine(&alpha, &k0_push(&v, &d, 8).unwrap(), &beta);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn riesz_examples() {
        let x1 = lp("x1");
        assert_eq!(riesz_interpolate(&x1, &x1, &x1, &x1).unwrap(), x1);
        let c = riesz_interpolate(&x1, &lp("3*x1"), &lp("4*x1 + x2"), &lp("5*x1")).unwrap();
        assert_eq!(c, lp("3*x1"));
        let s = lp("x1 + x2");
        assert_eq!(riesz_interpolate(&x1, &lp("x2"), &s, &s).unwrap(), s);
        assert!(matches!(
            riesz_interpolate(&lp("2*x1"), &x1, &x1, &x1),
            Err(K0Error::NotComparable(_))
        ));
        // negative coefficients: max(-3, 0) = 0 at x1
        let c = riesz_interpolate(&lp("-3*x1 + x2"), &lp("x2"), &lp("2*x2"), &lp("x1 + x2")).unwrap();
        assert_eq!(c, lp("x2"));
    }

    #[test]
    fn element_json() {
        let e = K0Element::from_json(r#"{"level": 2, "vector": [1, -1, 0]}"#).unwrap();
        assert_eq!(e, K0Element::from_ints(2, &[1, -1, 0]));
        assert_eq!(e.to_json(), r#"{"level":2,"vector":[1,-1,0]}"#);
        assert!(K0Element::from_json(r#"{"level": 2}"#).is_err());
    }
}
