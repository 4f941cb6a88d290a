use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ExponentVector, LaurentPolynomial};

/// Coefficients (ascending) of the Chebyshev polynomial of the first kind,
/// from `T_0 = 1`, `T_1 = x`, `T_n = 2x T_{n-1} - T_{n-2}`.
pub fn chebyshev_t_dense(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c * 2;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `T_n` as a univariate polynomial in `x1`.
pub fn chebyshev_t(n: usize) -> LaurentPolynomial<BigInt> {
    LaurentPolynomial::from_terms(
        1,
        chebyshev_t_dense(n)
            .into_iter()
            .enumerate()
            .map(|(k, c)| (ExponentVector::new(vec![k as i64]), c)),
    )
}
