//! Small dense integer matrices: incidence matrices of Bratteli diagrams.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from row vectors; `None` if the rows are ragged or empty.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let cols = rows.first()?.len();
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols).map(<[i64]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0)
    }

    /// `self · v` over the integers.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| self.get(r, c) != 0)
                    .map(|c| &v[c] * self.get(r, c))
                    .sum()
            })
            .collect()
    }

    /// Rank over the rationals by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in rank + 1..self.rows {
                if a[r][col].is_zero() {
                    continue;
                }
                let (f, g) = (a[rank][col].clone(), a[r][col].clone());
                for c in col..self.cols {
                    let v = &a[r][c] * &f - &a[rank][c] * &g;
                    a[r][c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Injective as a map `Z^cols -> Z^rows`.
    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    /// Some power has all entries positive. Uses boolean powers up to the
    /// Wielandt bound `(n-1)^2 + 1`.
    pub fn is_primitive(&self) -> bool {
        if !self.is_square() || !self.is_nonnegative() {
            return false;
        }
        let n = self.rows;
        let pattern: Vec<bool> = self.data.iter().map(|&v| v > 0).collect();
        let mut power = pattern.clone();
        for _ in 0..((n - 1) * (n - 1) + 1) {
            if power.iter().all(|&b| b) {
                return true;
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for k in 0..n {
                    if power[i * n + k] {
                        for j in 0..n {
                            next[i * n + j] |= pattern[k * n + j];
                        }
                    }
                }
            }
            power = next;
        }
        power.iter().all(|&b| b)
    }

    /// Largest absolute entry, used for budget estimates.
    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `true` when every entry is `>= 0`.
pub(crate) fn all_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
