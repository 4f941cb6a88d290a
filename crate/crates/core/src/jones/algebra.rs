use std::collections::{BTreeMap, HashMap};

use super::{JonesError, PlanarPairing};
use crate::scalar::{Field, Ring};

/// An element of TL_n: a finite combination of pairings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TlElement<R> {
    n: usize,
    terms: BTreeMap<PlanarPairing, R>,
}

impl<R: Ring> TlElement<R> {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn basis(d: PlanarPairing, c: R) -> Self {
        let mut e = Self::zero(d.strands());
        e.add_term(d, c);
        e
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarPairing, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &PlanarPairing) -> R {
        self.terms.get(d).cloned().unwrap_or_else(R::zero)
    }

    fn add_term(&mut self, d: PlanarPairing, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&d) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(d, s);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), JonesError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(JonesError::StrandMismatch { left: self.n, right: other.n })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, JonesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, JonesError> {
        self.add(&other.scale(&-R::one()))
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.n);
        for (d, v) in &self.terms {
            out.add_term(d.clone(), v.clone() * c.clone());
        }
        out
    }
}

/// TL_n with loop value `delta` and a precomputed product table on the
/// pairing basis.
#[derive(Debug)]
pub struct TlAlgebra<R> {
    n: usize,
    delta: R,
    basis: Vec<PlanarPairing>,
    index: HashMap<PlanarPairing, usize>,
    /// `table[i * dim + j]` = (index of `b_i b_j`, loops formed)
    table: Vec<(usize, usize)>,
    delta_powers: Vec<R>,
}

impl<R: Ring> TlAlgebra<R> {
    pub fn new(n: usize, delta: R) -> Self {
        let basis = PlanarPairing::enumerate(n);
        let index: HashMap<PlanarPairing, usize> = basis.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let dim = basis.len();
        let mut table = Vec::with_capacity(dim * dim);
        for a in &basis {
            for b in &basis {
                let (c, loops) = a.compose(b);
                table.push((index[&c], loops));
            }
        }
        // at most n loops can close in one product
        let mut delta_powers = vec![R::one()];
        for k in 1..=n {
            let next = delta_powers[k - 1].clone() * delta.clone();
            delta_powers.push(next);
        }
        Self {
            n,
            delta,
            basis,
            index,
            table,
            delta_powers,
        }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn delta(&self) -> &R {
        &self.delta
    }

    pub fn identity(&self) -> TlElement<R> {
        TlElement::basis(PlanarPairing::identity(self.n), R::one())
    }

    /// `E_i` for 0-based `i < n - 1`.
    pub fn generator(&self, i: usize) -> Result<TlElement<R>, JonesError> {
        if i + 1 >= self.n {
            return Err(JonesError::GeneratorOutOfRange { index: i + 1, strands: self.n });
        }
        Ok(TlElement::basis(PlanarPairing::cup_cap(self.n, i), R::one()))
    }

    fn check(&self, x: &TlElement<R>) -> Result<(), JonesError> {
        if x.n == self.n {
            Ok(())
        } else {
            Err(JonesError::StrandMismatch { left: self.n, right: x.n })
        }
    }

    /// `a` stacked on top of `b`; closed loops become factors of `delta`.
    pub fn mul(&self, a: &TlElement<R>, b: &TlElement<R>) -> Result<TlElement<R>, JonesError> {
        self.check(a)?;
        self.check(b)?;
        let dim = self.basis.len();
        let mut acc: BTreeMap<usize, R> = BTreeMap::new();
        for (da, ca) in &a.terms {
            let i = self.index[da];
            for (db, cb) in &b.terms {
                let (k, loops) = self.table[i * dim + self.index[db]];
                let c = ca.clone() * cb.clone() * self.delta_powers[loops].clone();
                let slot = acc.entry(k).or_insert_with(R::zero);
                *slot = slot.clone() + c;
            }
        }
        let mut out = TlElement::zero(self.n);
        for (k, c) in acc {
            out.add_term(self.basis[k].clone(), c);
        }
        Ok(out)
    }

    pub fn product<'a, I>(&self, factors: I) -> Result<TlElement<R>, JonesError>
    where
        I: IntoIterator<Item = &'a TlElement<R>>,
        R: 'a,
    {
        factors.into_iter().try_fold(self.identity(), |acc, f| self.mul(&acc, f))
    }

    /// The Markov trace as a finite sum `Σ c_k δ^k` (map `k -> c_k`), where
    /// a pairing with `l` closure loops contributes `δ^(l - n)`.
    pub fn trace_in_delta(&self, x: &TlElement<R>) -> BTreeMap<i64, R> {
        let mut out: BTreeMap<i64, R> = BTreeMap::new();
        for (d, c) in &x.terms {
            let k = d.closure_loops() as i64 - self.n as i64;
            let slot = out.entry(k).or_insert_with(R::zero);
            *slot = slot.clone() + c.clone();
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Markov trace over a field: `tr(1) = 1`.
    pub fn markov_trace(&self, x: &TlElement<R>) -> R
    where
        R: Field,
    {
        let inv = self.delta.inv().expect("loop value must be invertible");
        self.trace_in_delta(x)
            .into_iter()
            .fold(R::zero(), |acc, (k, c)| {
                let p = if k >= 0 {
                    self.delta.pow_u32(k as u32)
                } else {
                    inv.pow_u32((-k) as u32)
                };
                acc + c * p
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::UniLaurent;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;

    type K = UniLaurent<BigInt>;

    fn delta_a() -> K {
        K::monomial(2, BigInt::from(-1)) + K::monomial(-2, BigInt::from(-1))
    }

    #[test]
    fn loop_and_isotopy_relations() {
        let tl2 = TlAlgebra::new(2, delta_a());
        let e1 = tl2.generator(0).unwrap();
        assert_eq!(tl2.mul(&e1, &e1).unwrap(), e1.scale(&delta_a()));

        let tl3 = TlAlgebra::new(3, delta_a());
        let (a, b) = (tl3.generator(0).unwrap(), tl3.generator(1).unwrap());
        assert_eq!(tl3.product([&a, &b, &a]).unwrap(), a);
        assert_eq!(tl3.mul(&tl3.identity(), &b).unwrap(), b);
        assert!(tl3.generator(2).is_err());
        assert!(tl3.mul(&a, &e1).is_err());
    }

    #[test]
    fn traces() {
        let tl2 = TlAlgebra::new(2, delta_a());
        assert_eq!(tl2.trace_in_delta(&tl2.identity()), BTreeMap::from([(0, K::one())]));
        let e1 = tl2.generator(0).unwrap();
        assert_eq!(tl2.trace_in_delta(&e1), BTreeMap::from([(-1, K::one())]));

        // over Q with δ = 2: tr(e_1) = tr(E_1)/δ = δ^-2 = 1/4
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let tl = TlAlgebra::new(2, q(2, 1));
        let e = tl.generator(0).unwrap().scale(&q(1, 2));
        assert_eq!(tl.markov_trace(&e), q(1, 4));
        assert_eq!(tl.markov_trace(&tl.identity()), q(1, 1));
    }

    #[test]
    fn dimensions() {
        for (n, c) in [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42)] {
            assert_eq!(TlAlgebra::new(n, delta_a()).dimension(), c);
        }
    }
}
