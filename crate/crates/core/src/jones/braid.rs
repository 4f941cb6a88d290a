use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{kauffman_delta, HalfIntLaurent, JonesError, KauffmanPoly, TlAlgebra, TlElement};

pub const MAX_ORACLE_CROSSINGS: usize = 20;

/// A word in the braid group on `strands` strands; letter `±i` is `σ_i^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, JonesError> {
        if strands == 0 {
            return Err(JonesError::InvalidBraid("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(JonesError::InvalidBraid(format!(
                    "letter {l} is not a generator of the {strands}-strand braid group (use ±1..±{})",
                    strands - 1
                )));
            }
        }
        Ok(Self { strands, letters })
    }

    /// Whitespace-separated letters, e.g. `"1 -2 1 -2"`.
    pub fn parse(strands: usize, text: &str) -> Result<Self, JonesError> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| JonesError::InvalidBraid(format!("'{tok}' is not an integer letter")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// `self` followed by `other` (same strand count).
    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.strands, other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self {
            strands: self.strands,
            letters,
        }
    }

    /// Markov stabilization: `w σ_n^{±1}` on `n + 1` strands.
    pub fn stabilize(&self, positive: bool) -> Self {
        let n = self.strands as i32;
        let mut letters = self.letters.clone();
        letters.push(if positive { n } else { -n });
        Self {
            strands: self.strands + 1,
            letters,
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.letters.iter().map(i32::to_string).collect();
        write!(f, "{}", w.join(" "))
    }
}

/// TL_n over `Z[A, A^-1]`, built once per strand count.
pub fn kauffman_algebra(n: usize) -> Arc<TlAlgebra<KauffmanPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TlAlgebra<KauffmanPoly>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().expect("cache lock").get(&n) {
        return Arc::clone(a);
    }
    let built = Arc::new(TlAlgebra::new(n, kauffman_delta()));
    Arc::clone(cache.lock().expect("cache lock").entry(n).or_insert(built))
}

fn a_pow(k: i64) -> KauffmanPoly {
    KauffmanPoly::monomial(k, BigInt::one())
}

/// Image of the braid in TL_n, letters multiplied left to right.
pub fn braid_to_tl(w: &BraidWord) -> TlElement<KauffmanPoly> {
    let alg = kauffman_algebra(w.strands());
    let mut acc = alg.identity();
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize - 1;
        let e = alg.generator(i).expect("validated letter");
        let (one_coeff, e_coeff) = if l > 0 { (a_pow(1), a_pow(-1)) } else { (a_pow(-1), a_pow(1)) };
        let factor = alg
            .identity()
            .scale(&one_coeff)
            .add(&e.scale(&e_coeff))
            .expect("same strand count");
        acc = alg.mul(&acc, &factor).expect("same strand count");
    }
    acc
}

/// Normalizes a Kauffman bracket (`<unknot> = 1`) into the Jones polynomial:
/// multiply by `(-A)^(-3 writhe)` and substitute `A = t^(1/4)`.
pub fn jones_from_bracket(bracket: &KauffmanPoly, writhe: i64) -> Result<HalfIntLaurent, JonesError> {
    let sign = if writhe % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let v = bracket.shift(-3 * writhe).scale(&sign);
    if let Some((e, _)) = v.terms().find(|(e, _)| e % 2 != 0) {
        return Err(JonesError::MixedParity(format!("A^{e} in {}", v.render("A"))));
    }
    // A^e = t^(e/4), i.e. doubled exponent e/2
    HalfIntLaurent::from_doubled(v.terms().map(|(e, c)| (e / 2, c.clone())))
}

/// Jones polynomial of the closure of `w`.
pub fn jones_polynomial(w: &BraidWord) -> Result<HalfIntLaurent, JonesError> {
    let n = w.strands();
    let alg = kauffman_algebra(n);
    let image = braid_to_tl(w);
    let delta = kauffman_delta();
    // δ^(n-1) tr(x): exponents loops - 1 >= 0
    let mut bracket = KauffmanPoly::zero();
    for (k, c) in alg.trace_in_delta(&image) {
        let power = u32::try_from(k + n as i64 - 1).expect("closures have at least one loop");
        bracket = bracket + c * delta.pow_u32(power);
    }
    jones_from_bracket(&bracket, w.writhe())
}

use crate::scalar::Ring;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Kauffman bracket of the closed braid by summing over all `2^c` states.
///
/// Arc endpoints sit at (height, position) with heights `0..=c`; crossing
/// `j` joins heights `j` and `j + 1`. For `σ_i` the A-smoothing keeps the
/// strands vertical and the B-smoothing turns them into a cap and a cup;
/// for `σ_i^-1` the roles are swapped.
pub fn kauffman_oracle(w: &BraidWord) -> Result<KauffmanPoly, JonesError> {
    let c = w.letters().len();
    if c > MAX_ORACLE_CROSSINGS {
        return Err(JonesError::TooManyCrossings {
            crossings: c,
            limit: MAX_ORACLE_CROSSINGS,
        });
    }
    let n = w.strands();
    let node = |h: usize, p: usize| h * n + p;
    let counts: BTreeMap<(i64, usize), u64> = (0u32..1 << c)
        .into_par_iter()
        .map(|state| {
            let mut uf = UnionFind::new((c + 1) * n);
            let mut a_minus_b = 0i64;
            for (j, &l) in w.letters().iter().enumerate() {
                let i = l.unsigned_abs() as usize - 1;
                let a_smoothing = state >> j & 1 == 0;
                a_minus_b += if a_smoothing { 1 } else { -1 };
                let vertical = a_smoothing == (l > 0);
                for p in 0..n {
                    if p != i && p != i + 1 {
                        uf.union(node(j, p), node(j + 1, p));
                    }
                }
                if vertical {
                    uf.union(node(j, i), node(j + 1, i));
                    uf.union(node(j, i + 1), node(j + 1, i + 1));
                } else {
                    uf.union(node(j, i), node(j, i + 1));
                    uf.union(node(j + 1, i), node(j + 1, i + 1));
                }
            }
            for p in 0..n {
                uf.union(node(c, p), node(0, p));
            }
            (a_minus_b, uf.components())
        })
        .fold(BTreeMap::new, |mut m, key| {
            *m.entry(key).or_insert(0u64) += 1;
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let delta = kauffman_delta();
    let mut total = KauffmanPoly::zero();
    for ((e, loops), count) in counts {
        total = total + a_pow(e).scale(&BigInt::from(count)) * delta.pow_u32(loops as u32 - 1);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, s: &str) -> BraidWord {
        BraidWord::parse(n, s).unwrap()
    }

    fn v(terms: &[(i64, i64)]) -> HalfIntLaurent {
        HalfIntLaurent::from_integer_terms(terms)
    }

    #[test]
    fn braid_images() {
        let alg = kauffman_algebra(2);
        assert_eq!(braid_to_tl(&word(1, "")), kauffman_algebra(1).identity());
        let s1 = braid_to_tl(&word(2, "1"));
        let expected = alg
            .identity()
            .scale(&a_pow(1))
            .add(&alg.generator(0).unwrap().scale(&a_pow(-1)))
            .unwrap();
        assert_eq!(s1, expected);
        assert_eq!(braid_to_tl(&word(2, "1 -1")), alg.identity());
    }

    #[test]
    fn braid_relations_hold() {
        for n in 3..=5 {
            for i in 1..n as i32 - 1 {
                let lhs = braid_to_tl(&BraidWord::new(n, vec![i, i + 1, i]).unwrap());
                let rhs = braid_to_tl(&BraidWord::new(n, vec![i + 1, i, i + 1]).unwrap());
                assert_eq!(lhs, rhs, "n = {n}, i = {i}");
            }
        }
        let far = |a, b| braid_to_tl(&BraidWord::new(4, vec![a, b]).unwrap());
        assert_eq!(far(1, 3), far(3, 1));
    }

    #[test]
    fn pinned_values() {
        assert_eq!(jones_polynomial(&word(1, "")).unwrap(), HalfIntLaurent::one());
        assert_eq!(jones_polynomial(&word(2, "1 1 1")).unwrap(), v(&[(-4, -1), (-3, 1), (-1, 1)]));
        assert_eq!(jones_polynomial(&word(2, "1 1 1")).unwrap().to_string(), "-t^-4 + t^-3 + t^-1");
        assert_eq!(
            jones_polynomial(&word(3, "1 -2 1 -2")).unwrap(),
            v(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)])
        );
        let hopf = HalfIntLaurent::from_doubled([(-5, BigInt::from(-1)), (-1, BigInt::from(-1))]).unwrap();
        assert_eq!(jones_polynomial(&word(2, "1 1")).unwrap(), hopf);
        assert_eq!(jones_polynomial(&word(2, "-1 -1 -1")).unwrap(), v(&[(1, 1), (3, 1), (4, -1)]));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(kauffman_oracle(&word(1, "")).unwrap(), KauffmanPoly::one());
        assert_eq!(kauffman_oracle(&word(2, "1")).unwrap(), a_pow(3).scale(&BigInt::from(-1)));
        assert_eq!(jones_from_bracket(&kauffman_oracle(&word(2, "1")).unwrap(), 1).unwrap(), HalfIntLaurent::one());
        for (n, s) in [(2, "1 1"), (2, "1 1 1"), (3, "1 -2 1 -2"), (3, "1 2 -1 2 2")] {
            let w = word(n, s);
            let oracle = jones_from_bracket(&kauffman_oracle(&w).unwrap(), w.writhe()).unwrap();
            assert_eq!(jones_polynomial(&w).unwrap(), oracle, "{s}");
        }
        let long = BraidWord::new(2, vec![1; 21]).unwrap();
        assert!(matches!(kauffman_oracle(&long), Err(JonesError::TooManyCrossings { .. })));
    }

    #[test]
    fn word_validation() {
        assert!(BraidWord::parse(2, "2").is_err());
        assert!(BraidWord::parse(3, "1 0").is_err());
        assert!(BraidWord::parse(3, "1 x").is_err());
        assert!(BraidWord::parse(0, "").is_err());
        let w = word(3, "1 -2 2");
        assert_eq!(w.writhe(), 1);
        assert_eq!(w.inverse().to_string(), "-2 2 -1");
        assert_eq!(w.stabilize(false).to_string(), "1 -2 2 -3");
    }
}
