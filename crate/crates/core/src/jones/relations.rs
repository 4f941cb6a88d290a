use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{JonesError, TlAlgebra, TlElement};
use crate::scalar::QuadraticExt;

const MARKOV_SAMPLES: usize = 50;
const MAX_WORD_LENGTH: usize = 8;

/// What [`verify_tl_relations`] checked.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationsReport {
    pub n: usize,
    pub t: BigRational,
    pub tau: BigRational,
    /// `δ = (1+t)/√t`
    pub delta: QuadraticExt,
    pub commutation_checks: usize,
    pub projection_checks: usize,
    pub braid_checks: usize,
    pub markov_samples: usize,
}

type Elt = TlElement<QuadraticExt>;

fn q(r: &BigRational) -> QuadraticExt {
    QuadraticExt::from_rational(r.clone())
}

fn violated(relation: &str, witness: String) -> JonesError {
    JonesError::RelationViolated {
        relation: relation.to_string(),
        witness,
    }
}

fn describe(x: &Elt) -> String {
    let parts: Vec<String> = x.terms().map(|(d, c)| format!("({c})·{d:?}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Checks the projection relations, the braid relations of
/// `s_i = t·e_i − (1 − e_i)` and the Markov property of the trace in TL_n,
/// exactly over `Q(√t)`.
///
/// The loop value is fixed by `t` (`δ^2 = (1+t)^2/t`) and `e_i = E_i/δ`;
/// relation (b) is tested against `claimed_tau`, defaulting to `t/(1+t)^2`.
pub fn verify_tl_relations(
    n: usize,
    t: &BigRational,
    claimed_tau: Option<BigRational>,
) -> Result<RelationsReport, JonesError> {
    if !(2..=6).contains(&n) {
        return Err(JonesError::InvalidParameters(format!("n must be in 2..=6, got {n}")));
    }
    if !t.is_positive() {
        return Err(JonesError::InvalidParameters(format!("t must be positive, got {t}")));
    }
    let one_r = BigRational::one();
    let one_plus_t = &one_r + t;
    let tau = claimed_tau.unwrap_or_else(|| t / (&one_plus_t * &one_plus_t));
    let delta = QuadraticExt::sqrt_of(&one_plus_t * &one_plus_t / t);

    let alg = TlAlgebra::new(n, delta.clone());
    let inv_delta = QuadraticExt::one() / delta.clone();
    let e: Vec<Elt> = (0..n - 1)
        .map(|i| alg.generator(i).map(|g| g.scale(&inv_delta)))
        .collect::<Result<_, _>>()?;
    let one = alg.identity();
    let s: Vec<Elt> = e
        .iter()
        .map(|ei| ei.scale(&q(&one_plus_t)).sub(&one))
        .collect::<Result<_, _>>()?;

    let mut report = RelationsReport {
        n,
        t: t.clone(),
        tau: tau.clone(),
        delta: delta.clone(),
        commutation_checks: 0,
        projection_checks: 0,
        braid_checks: 0,
        markov_samples: 0,
    };

    // e_i^2 = e_i
    for (i, ei) in e.iter().enumerate() {
        let sq = alg.mul(ei, ei)?;
        if sq != *ei {
            return Err(violated("idempotent", format!("e_{}^2 = {}", i + 1, describe(&sq))));
        }
    }

    for i in 0..e.len() {
        for j in i + 2..e.len() {
            let (lhs, rhs) = (alg.mul(&e[i], &e[j])?, alg.mul(&e[j], &e[i])?);
            if lhs != rhs {
                return Err(violated(
                    "(a) e_i e_j = e_j e_i",
                    format!("i = {}, j = {}: {} vs {}", i + 1, j + 1, describe(&lhs), describe(&rhs)),
                ));
            }
            report.commutation_checks += 1;
        }
    }

    for i in 0..e.len() {
        for j in [i.wrapping_sub(1), i + 1] {
            if j >= e.len() {
                continue;
            }
            let lhs = alg.product([&e[i], &e[j], &e[i]])?;
            let rhs = e[i].scale(&q(&tau));
            if lhs != rhs {
                return Err(violated(
                    "(b) e_i e_j e_i = τ e_i",
                    format!(
                        "i = {}, j = {}, τ = {tau}: lhs = {}, rhs = {}",
                        i + 1,
                        j + 1,
                        describe(&lhs),
                        describe(&rhs)
                    ),
                ));
            }
            report.projection_checks += 1;
        }
    }

    for i in 0..s.len() {
        if i + 1 < s.len() {
            let lhs = alg.product([&s[i], &s[i + 1], &s[i]])?;
            let rhs = alg.product([&s[i + 1], &s[i], &s[i + 1]])?;
            if lhs != rhs {
                return Err(violated(
                    "(c) s_i s_(i+1) s_i = s_(i+1) s_i s_(i+1)",
                    format!("i = {}: {} vs {}", i + 1, describe(&lhs), describe(&rhs)),
                ));
            }
            report.braid_checks += 1;
        }
        for j in i + 2..s.len() {
            let (lhs, rhs) = (alg.mul(&s[i], &s[j])?, alg.mul(&s[j], &s[i])?);
            if lhs != rhs {
                return Err(violated(
                    "(c) s_i s_j = s_j s_i",
                    format!("i = {}, j = {}: {} vs {}", i + 1, j + 1, describe(&lhs), describe(&rhs)),
                ));
            }
            report.braid_checks += 1;
        }
    }

    // Markov property in TL_(n+1): words in e_1..e_(n-1) against e_n
    let big = TlAlgebra::new(n + 1, delta);
    let big_e: Vec<Elt> = (0..n)
        .map(|i| big.generator(i).map(|g| g.scale(&inv_delta)))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e3f_0000 + n as u64);
    for sample in 0..MARKOV_SAMPLES {
        let len = rng.gen_range(0..=MAX_WORD_LENGTH);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n - 1)).collect();
        let x = big.product(word.iter().map(|&k| &big_e[k]))?;
        let lhs = big.markov_trace(&big.mul(&x, &big_e[n - 1])?);
        let rhs = q(&tau) * big.markov_trace(&x);
        if lhs != rhs {
            let letters: Vec<String> = word.iter().map(|k| format!("e_{}", k + 1)).collect();
            return Err(violated(
                "(d) tr(x e_n) = τ tr(x)",
                format!("sample {sample}, x = {}: {lhs} vs {rhs}", letters.join("·")),
            ));
        }
        report.markov_samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        let rep = verify_tl_relations(3, &r(1, 1), None).unwrap();
        assert_eq!(rep.tau, r(1, 4));
        assert_eq!(rep.delta, QuadraticExt::from_rational(r(2, 1)));
        assert_eq!(rep.markov_samples, 50);
        let rep = verify_tl_relations(4, &r(4, 1), None).unwrap();
        assert_eq!(rep.tau, r(4, 25));
        assert_eq!(rep.commutation_checks, 1);
        assert_eq!(rep.projection_checks, 4);
    }

    #[test]
    fn irrational_loop_value() {
        let rep = verify_tl_relations(4, &r(2, 3), None).unwrap();
        assert!(!rep.delta.is_rational());
        assert_eq!(rep.tau, r(6, 25));
    }

    #[test]
    fn wrong_tau_is_caught() {
        match verify_tl_relations(3, &r(1, 1), Some(r(1, 3))) {
            Err(JonesError::RelationViolated { relation, .. }) => assert!(relation.starts_with("(b)")),
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn preconditions() {
        assert!(verify_tl_relations(1, &r(1, 1), None).is_err());
        assert!(verify_tl_relations(7, &r(1, 1), None).is_err());
        assert!(verify_tl_relations(3, &r(0, 1), None).is_err());
    }
}
