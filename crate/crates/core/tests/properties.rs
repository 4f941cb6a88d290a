use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use clusterk::cluster::numeric_mutate;
use clusterk::jones::{braid_to_tl, jones_polynomial};
use clusterk::k0::{gicar_is_positive, k0_push, GicarElement, GicarPositivity};
use clusterk::{BraidWord, BratteliDiagram, ExchangeMatrix, IntMatrix, K0Element, LaurentPoly, Seed};

fn exchange_matrix() -> impl Strategy<Value = ExchangeMatrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let b = it.next().unwrap();
                    rows[i][j] = b;
                    rows[j][i] = -b;
                }
            }
            ExchangeMatrix::from_rows(&rows).unwrap()
        })
    })
}

fn seed() -> impl Strategy<Value = Seed> {
    (exchange_matrix(), prop::collection::vec(0usize..4, 0..3)).prop_map(|(b, path)| {
        let n = b.n();
        let path: Vec<usize> = path.into_iter().map(|k| k % n).collect();
        Seed::initial(b).mutate_path(&path).unwrap()
    })
}

fn laurent(nvars: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, nvars), -5i64..=5), 0..5).prop_map(move |terms| {
        LaurentPoly::from_terms(
            nvars,
            terms
                .into_iter()
                .map(|(e, c)| (clusterk::laurent::ExponentVector::new(e), BigInt::from(c))),
        )
    })
}

fn braid(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_strands).prop_flat_map(move |n| {
        prop::collection::vec((1..n as i32, any::<bool>()), 0..=max_len).prop_map(move |letters| {
            BraidWord::new(n, letters.into_iter().map(|(i, s)| if s { i } else { -i }).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mutation_is_an_involution(s in seed(), k in 0usize..4) {
        let k = k % s.rank();
        let once = s.mutate(k).unwrap();
        prop_assert!(once.matrix().check_skew_symmetric().is_ok());
        prop_assert_eq!(once.mutate(k).unwrap(), s);
    }

    #[test]
    fn numeric_mutation_shadows_symbolic(s in seed(), k in 0usize..4, raw in prop::collection::vec((1i64..40, 1i64..40), 4)) {
        let k = k % s.rank();
        let point: Vec<BigRational> = raw[..s.rank()].iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect();
        let symbolic = s.mutate(k).unwrap().evaluate(&point).unwrap();
        let numeric = numeric_mutate(&s.evaluate(&point).unwrap(), s.matrix(), k).unwrap();
        prop_assert_eq!(symbolic, numeric);
    }

    #[test]
    fn exact_division_round_trips(p in laurent(2), q in laurent(2)) {
        prop_assume!(!q.is_zero());
        let product = &p * &q;
        prop_assert_eq!(product.div_exact(&q).unwrap(), p);
    }

    #[test]
    fn text_round_trips(p in laurent(3)) {
        prop_assert_eq!(LaurentPoly::parse(&p.to_string(), 3).unwrap(), p);
    }

    #[test]
    fn push_is_linear(u in prop::collection::vec(-20i64..=20, 2), v in prop::collection::vec(-20i64..=20, 2),
                      alpha in -5i64..=5, beta in -5i64..=5, target in 0usize..=6) {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let d = BratteliDiagram::stationary(&a, 6).unwrap();
        let (u, v) = (K0Element::from_ints(0, &u), K0Element::from_ints(0, &v));
        let (alpha, beta) = (BigInt::from(alpha), BigInt::from(beta));
        let lhs = k0_push(&u.combine(&alpha, &v, &beta), &d, target).unwrap();
        let rhs = k0_push(&u, &d, target).unwrap().combine(&alpha, &k0_push(&v, &d, target).unwrap(), &beta);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gicar_verdicts_are_sound(coeffs in prop::collection::vec(-6i64..=6, 1..5)) {
        let p = GicarElement::from_ints(&coeffs);
        prop_assume!(!p.is_zero());
        match gicar_is_positive(&p, 24).unwrap() {
            GicarPositivity::Positive { .. } => {
                for k in 1..=101 {
                    let x = BigRational::new(k.into(), 102.into());
                    prop_assert!(p.eval(&x) >= BigRational::zero());
                }
            }
            GicarPositivity::NotPositive { point, value } => {
                prop_assert_eq!(p.eval(&point), value.clone());
                prop_assert!(value < BigRational::zero());
            }
            GicarPositivity::Unknown => {}
        }
    }

    #[test]
    fn jones_is_a_conjugation_invariant(w in braid(3, 5), u in braid(3, 3)) {
        prop_assume!(w.strands() == u.strands());
        let conj = u.concat(&w).concat(&u.inverse());
        prop_assert_eq!(jones_polynomial(&conj).unwrap(), jones_polynomial(&w).unwrap());
    }

    #[test]
    fn inverse_braid_maps_to_inverse(w in braid(4, 4)) {
        let id = BraidWord::new(w.strands(), vec![]).unwrap();
        prop_assert_eq!(braid_to_tl(&w.concat(&w.inverse())), braid_to_tl(&id));
    }
}
