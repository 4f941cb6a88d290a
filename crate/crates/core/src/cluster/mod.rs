//! Seeds, exchange matrices and mutation.
//!
//! Indices in this API are 0-based: direction `k` mutates `cluster[k]`.
//! The command line and the JSON seed format use 1-based directions.

mod explore;
mod json;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPolynomial};
use crate::scalar::Field;

pub use explore::{check_positivity, enumerate_cluster_variables, is_finite_type, FiniteType, Positivity};
pub use json::SeedSpec;

pub type ClusterVariable = LaurentPolynomial<BigInt>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("IndexOutOfRange: direction {index} is outside 0..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("NotSkewSymmetric: B[{i}][{j}] = {bij} but B[{j}][{i}] = {bji}")]
    NotSkewSymmetric { i: usize, j: usize, bij: i64, bji: i64 },
    #[error("InvalidMatrix: {0}")]
    InvalidMatrix(String),
    #[error("InvalidSeed: {0}")]
    InvalidSeed(String),
    #[error("LaurentViolation: mutation in direction {direction} is not a Laurent polynomial ({source})")]
    LaurentViolation { direction: usize, source: LaurentError },
    #[error("ZeroEntry: numeric cluster entry {index} is zero")]
    ZeroEntry { index: usize },
    #[error("BudgetExceeded: more than {cap} seeds")]
    BudgetExceeded { cap: usize },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// A skew-symmetric integer exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExchangeMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, ClusterError> {
        let n = rows.len();
        if n == 0 {
            return Err(ClusterError::InvalidMatrix("matrix must have at least one row".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ClusterError::InvalidMatrix(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        let m = Self {
            n,
            entries: rows.iter().flatten().copied().collect(),
        };
        m.check_skew_symmetric()?;
        Ok(m)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    /// The rank-2 matrix `[[0, b], [-b, 0]]`.
    pub fn rank2(b: i64) -> Self {
        Self {
            n: 2,
            entries: vec![0, b, -b, 0],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn check_skew_symmetric(&self) -> Result<(), ClusterError> {
        for i in 0..self.n {
            for j in i..self.n {
                let (bij, bji) = (self.get(i, j), self.get(j, i));
                if bij != -bji {
                    return Err(ClusterError::NotSkewSymmetric { i, j, bij, bji });
                }
            }
        }
        Ok(())
    }

    fn check_index(&self, k: usize) -> Result<(), ClusterError> {
        if k < self.n {
            Ok(())
        } else {
            Err(ClusterError::IndexOutOfRange { index: k, n: self.n })
        }
    }

    /// Matrix mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<Self, ClusterError> {
        self.check_index(k)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let b = self.get(i, j);
                let v = if i == k || j == k {
                    -b
                } else {
                    let (bik, bkj) = (self.get(i, k), self.get(k, j));
                    b + (bik.abs() * bkj + bik * bkj.abs()) / 2
                };
                entries.push(v);
            }
        }
        Ok(Self { n, entries })
    }

    /// Conjugation by the cyclic relabeling `i -> i + shift (mod n)`:
    /// entry `(i, j)` of the result is entry `(i + shift, j + shift)` of `self`.
    pub fn rotate(&self, shift: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get((i + shift) % n, (j + shift) % n));
            }
        }
        Self { n, entries }
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// A cluster of Laurent polynomials in the initial variables, with its exchange matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Seed {
    cluster: Vec<ClusterVariable>,
    matrix: ExchangeMatrix,
}

impl Seed {
    /// The initial seed `((x1, ..., xn), B)`.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        Self {
            cluster: (0..n).map(|i| LaurentPolynomial::variable(n, i)).collect(),
            matrix,
        }
    }

    pub fn new(cluster: Vec<ClusterVariable>, matrix: ExchangeMatrix) -> Result<Self, ClusterError> {
        let n = matrix.n();
        if cluster.len() != n {
            return Err(ClusterError::InvalidSeed(format!(
                "cluster has {} entries but B is {n}x{n}",
                cluster.len()
            )));
        }
        if let Some((i, x)) = cluster.iter().enumerate().find(|(_, x)| x.nvars() != n) {
            return Err(ClusterError::InvalidSeed(format!(
                "cluster entry {} uses {} variables, expected {n}",
                i + 1,
                x.nvars()
            )));
        }
        Ok(Self { cluster, matrix })
    }

    /// Rank-2 seed of the annulus algebra A(1,1), `B = [[0,2],[-2,0]]`.
    pub fn annulus() -> Self {
        Self::initial(ExchangeMatrix::rank2(2))
    }

    /// The Markov seed `B = [[0,2,-2],[-2,0,2],[2,-2,0]]`.
    pub fn markov() -> Self {
        Self::initial(
            ExchangeMatrix::from_rows(&[vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]]).expect("skew-symmetric"),
        )
    }

    /// Finite type A2, `B = [[0,1],[-1,0]]`.
    pub fn a2() -> Self {
        Self::initial(ExchangeMatrix::rank2(1))
    }

    pub fn rank(&self) -> usize {
        self.matrix.n()
    }

    pub fn cluster(&self) -> &[ClusterVariable] {
        &self.cluster
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    /// The two monomials `Π x_i^{max(b_ik,0)}` and `Π x_i^{max(-b_ik,0)}`
    /// evaluated on the current cluster.
    pub fn exchange_terms(&self, k: usize) -> Result<(ClusterVariable, ClusterVariable), ClusterError> {
        self.matrix.check_index(k)?;
        let n = self.rank();
        let mut plus = LaurentPolynomial::one(n);
        let mut minus = LaurentPolynomial::one(n);
        for (i, x) in self.cluster.iter().enumerate() {
            let b = self.matrix.get(i, k);
            if b > 0 {
                plus = plus.checked_mul(&x.pow(b as u32))?;
            } else if b < 0 {
                minus = minus.checked_mul(&x.pow((-b) as u32))?;
            }
        }
        Ok((plus, minus))
    }

    /// Seed mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<Self, ClusterError> {
        let (plus, minus) = self.exchange_terms(k)?;
        let numerator = plus.checked_add(&minus)?;
        let replacement = numerator
            .div_exact(&self.cluster[k])
            .map_err(|source| ClusterError::LaurentViolation { direction: k, source })?;
        let mut cluster = self.cluster.clone();
        cluster[k] = replacement;
        Ok(Self {
            cluster,
            matrix: self.matrix.mutate(k)?,
        })
    }

    /// Applies mutations along `path` in order.
    pub fn mutate_path(&self, path: &[usize]) -> Result<Self, ClusterError> {
        path.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    /// Cyclic relabeling: `cluster[i]` of the result is `cluster[i + shift]`,
    /// and the matrix is conjugated by the same rotation.
    pub fn rotate(&self, shift: usize) -> Self {
        let n = self.rank();
        Self {
            cluster: (0..n).map(|i| self.cluster[(i + shift) % n].clone()).collect(),
            matrix: self.matrix.rotate(shift),
        }
    }

    /// Evaluates every cluster entry at `point`.
    pub fn evaluate(&self, point: &[num_rational::BigRational]) -> Result<Vec<num_rational::BigRational>, ClusterError> {
        self.cluster.iter().map(|x| x.eval(point).map_err(ClusterError::from)).collect()
    }

    /// Rendered cluster entries, used as stable keys.
    pub fn cluster_strings(&self) -> Vec<String> {
        self.cluster.iter().map(ToString::to_string).collect()
    }
}

/// Numeric shadow of mutation: replaces `mu[k]` by
/// `(Π mu_i^{max(b_ik,0)} + Π mu_i^{max(-b_ik,0)}) / mu[k]`.
pub fn numeric_mutate<F: Field>(mu: &[F], matrix: &ExchangeMatrix, k: usize) -> Result<Vec<F>, ClusterError> {
    matrix.check_index(k)?;
    if mu.len() != matrix.n() {
        return Err(ClusterError::InvalidSeed(format!(
            "numeric cluster has {} entries, expected {}",
            mu.len(),
            matrix.n()
        )));
    }
    let inv = mu[k].inv().ok_or(ClusterError::ZeroEntry { index: k })?;
    let mut plus = F::one();
    let mut minus = F::one();
    for (i, v) in mu.iter().enumerate() {
        let b = matrix.get(i, k);
        if b > 0 {
            plus = plus * v.pow_u32(b as u32);
        } else if b < 0 {
            minus = minus * v.pow_u32((-b) as u32);
        }
    }
    let mut out = mu.to_vec();
    out[k] = (plus + minus) * inv;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;
    use num_rational::BigRational;

    fn lp(s: &str, n: usize) -> ClusterVariable {
        ClusterVariable::parse(s, n).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn matrix_mutation_examples() {
        let bt = ExchangeMatrix::rank2(2);
        assert_eq!(bt.mutate(0).unwrap(), ExchangeMatrix::rank2(-2));
        let markov = Seed::markov().matrix().clone();
        assert_eq!(
            markov.mutate(0).unwrap().rows(),
            vec![vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]
        );
        assert_eq!(ExchangeMatrix::zero(3).mutate(1).unwrap(), ExchangeMatrix::zero(3));
        assert_eq!(bt.mutate(2), Err(ClusterError::IndexOutOfRange { index: 2, n: 2 }));
    }

    #[test]
    fn non_trivial_matrix_mutation() {
        // A3 quiver 1 -> 2 -> 3; mutating at 2 creates the arrow 3 -> 1.
        let b = ExchangeMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(
            b.mutate(1).unwrap().rows(),
            vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]
        );
    }

    #[test]
    fn matrix_validation() {
        assert!(matches!(
            ExchangeMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            Err(ClusterError::NotSkewSymmetric { .. })
        ));
        assert!(matches!(
            ExchangeMatrix::from_rows(&[vec![0, 1]]),
            Err(ClusterError::InvalidMatrix(_))
        ));
        assert!(ExchangeMatrix::from_rows(&[vec![1]]).is_err());
    }

    #[test]
    fn seed_mutation_examples() {
        let s = Seed::annulus().mutate(0).unwrap();
        assert_eq!(s.cluster()[0], lp("x1^-1 + x1^-1*x2^2", 2));
        assert_eq!(s.cluster()[1], lp("x2", 2));

        let m = Seed::markov().mutate(0).unwrap();
        assert_eq!(m.cluster()[0], lp("x1^-1*x2^2 + x1^-1*x3^2", 3));

        let back = m.mutate(0).unwrap();
        assert_eq!(back, Seed::markov());
    }

    #[test]
    fn rank_one_seed() {
        let s = Seed::initial(ExchangeMatrix::zero(1));
        let t = s.mutate(0).unwrap();
        assert_eq!(t.cluster()[0], lp("2*x1^-1", 1));
        assert_eq!(t.mutate(0).unwrap(), s);
    }

    #[test]
    fn non_laurent_cluster_is_reported() {
        // A cluster that is not reachable from an identity seed: dividing by x1 + x2 fails.
        let seed = Seed::new(vec![lp("x1 + x2", 2), lp("x2", 2)], ExchangeMatrix::rank2(1)).unwrap();
        assert!(matches!(seed.mutate(0), Err(ClusterError::LaurentViolation { direction: 0, .. })));
    }

    #[test]
    fn numeric_mutation_examples() {
        let bt = ExchangeMatrix::rank2(2);
        assert_eq!(numeric_mutate(&[q(1, 1), q(1, 1)], &bt, 0).unwrap(), vec![q(2, 1), q(1, 1)]);
        assert_eq!(numeric_mutate(&[q(2, 1), q(3, 1)], &bt, 0).unwrap(), vec![q(5, 1), q(3, 1)]);
        let markov = Seed::markov().matrix().clone();
        assert_eq!(
            numeric_mutate(&[q(1, 1), q(1, 1), q(1, 1)], &markov, 0).unwrap(),
            vec![q(2, 1), q(1, 1), q(1, 1)]
        );
        assert_eq!(
            numeric_mutate(&[q(0, 1), q(1, 1)], &bt, 0),
            Err(ClusterError::ZeroEntry { index: 0 })
        );
        assert!(numeric_mutate(&[q(1, 1), q(1, 1)], &bt, 5).is_err());
        // f64 shadow
        let v = numeric_mutate(&[2.0f64, 3.0], &bt, 0).unwrap();
        assert!((v[0] - 5.0).abs() < 1e-15);
        assert_eq!(BigInt::from(2).pow_u32(3), BigInt::from(8));
    }

    #[test]
    fn rotation_relabels_consistently() {
        let s = Seed::markov().mutate(1).unwrap();
        let r = s.rotate(1);
        assert_eq!(r.cluster()[0], s.cluster()[1]);
        assert_eq!(r.matrix().get(0, 2), s.matrix().get(1, 0));
        assert_eq!(r.rotate(2), s);
    }
}
