use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::K0Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// A formal product `Π p^{e_p}` with `e_p ∈ {0, 1, ..., ∞}`; absent primes have exponent 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    pub fn new(exponents: BTreeMap<u64, Exponent>) -> Self {
        Self {
            exponents: exponents
                .into_iter()
                .filter(|(_, e)| *e != Exponent::Finite(0))
                .collect(),
        }
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents.get(&p).copied().unwrap_or(Exponent::Finite(0))
    }

    pub fn primes(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exponents.iter().map(|(&p, &e)| (p, e))
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| match e {
                Exponent::Infinite => format!("{p}^inf"),
                Exponent::Finite(k) => format!("{p}^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Supernatural number of the periodic sequence repeating `block`: every
/// prime dividing a block entry occurs infinitely often.
pub fn supernatural_of(block: &[i64]) -> Result<SupernaturalNumber, K0Error> {
    let mut exponents = BTreeMap::new();
    for &k in block {
        if k < 2 {
            return Err(K0Error::InvalidFactor(k));
        }
        for p in prime_factors(k as u64) {
            exponents.insert(p, Exponent::Infinite);
        }
    }
    Ok(SupernaturalNumber::new(exponents))
}

/// Whether `r` lies in `Q(n)`: its reduced denominator divides `n`.
pub fn qn_contains(n: &SupernaturalNumber, r: &BigRational) -> bool {
    let mut den: BigInt = r.denom().abs();
    for (p, e) in n.primes() {
        let p = BigInt::from(p);
        let mut budget = match e {
            Exponent::Infinite => u32::MAX,
            Exponent::Finite(k) => k,
        };
        while budget > 0 && den.is_multiple_of(&p) {
            den /= &p;
            budget -= 1;
        }
    }
    den.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn membership_table() {
        let two = supernatural_of(&[2]).unwrap();
        assert_eq!(two.exponent(2), Exponent::Infinite);
        assert!(qn_contains(&two, &q(3, 8)));
        assert!(!qn_contains(&two, &q(1, 6)));
        let six = supernatural_of(&[6]).unwrap();
        assert_eq!(six.to_string(), "2^inf * 3^inf");
        assert!(qn_contains(&six, &q(5, 36)));
        assert!(!qn_contains(&six, &q(1, 5)));
        assert!(qn_contains(&six, &q(7, 1)));
        // reduction happens before the test: 6/12 = 1/2
        assert!(qn_contains(&two, &q(6, 12)));
        assert_eq!(supernatural_of(&[1]), Err(K0Error::InvalidFactor(1)));
        assert_eq!(supernatural_of(&[4, 9, 10]).unwrap().to_string(), "2^inf * 3^inf * 5^inf");
    }

    #[test]
    fn finite_exponents() {
        let n = SupernaturalNumber::new(BTreeMap::from([(2, Exponent::Finite(3)), (7, Exponent::Finite(0))]));
        assert!(qn_contains(&n, &q(1, 8)));
        assert!(!qn_contains(&n, &q(1, 16)));
        assert_eq!(n.to_string(), "2^3");
    }
}
