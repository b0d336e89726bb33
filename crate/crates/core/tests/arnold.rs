use num_traits::One;
use opw_core::arnold::*;
use opw_core::scalar::{self, Scalar};
use opw_core::selfcheck::oracles::{random_free, stirling, FreeQuotient};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn w(n: usize, i: usize, j: usize) -> ArnoldElement {
    ArnoldElement::gen(n, i, j)
}

fn as_free(e: &ArnoldElement) -> Vec<(Scalar, Vec<Pair>)> {
    e.terms().iter().map(|(m, c)| (c.clone(), m.clone())).collect()
}

/// A random element of `coGer(n)^k` with small integer coefficients.
fn element(n: usize, k: usize, seed: &[i64]) -> ArnoldElement {
    let basis = enumerate_g(n, k);
    let mut e = ArnoldElement::zero(n);
    for (m, c) in basis.iter().zip(seed) {
        e.add_scaled(&ArnoldElement::product_of(n, m, Scalar::one()), &scalar::int(*c));
    }
    e
}

#[test]
fn dimensions_match_stirling_and_the_free_quotient() {
    for n in 1..=6 {
        for k in 0..n {
            let g = enumerate_g(n, k).len();
            assert_eq!(g as u64, stirling(n, n - k), "n={n} k={k}");
            assert_eq!(g, FreeQuotient::new(n, k).dim(), "n={n} k={k}");
        }
    }
    let row = |n: usize| (0..n).map(|k| enumerate_g(n, k).len()).collect::<Vec<_>>();
    assert_eq!(row(4), vec![1, 6, 11, 6]);
    assert_eq!(row(5), vec![1, 10, 35, 50, 24]);
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_g(3, 1), vec![vec![(1, 2)], vec![(1, 3)], vec![(2, 3)]]);
    assert_eq!(enumerate_g(3, 2), vec![vec![(1, 2), (1, 3)], vec![(1, 3), (2, 3)]]);
    assert_eq!(enumerate_g(4, 3).len(), 6);
    assert!(enumerate_g(5, 3).iter().all(|m| is_basis_monomial(m)));
}

#[test]
fn normal_forms_agree_with_the_free_quotient() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 3..=5 {
        for k in 2..n {
            let q = FreeQuotient::new(n, k);
            for _ in 0..40 {
                let free = random_free(&mut rng, n, k);
                let nf = ArnoldElement::normal_form(n, &free).unwrap();
                assert!(nf.terms().keys().all(|m| is_basis_monomial(m)));
                assert!(q.same_coset(&free, &as_free(&nf)));
            }
        }
    }
}

#[test]
fn rewriting_and_relation_examples() {
    let lhs = w(3, 1, 2).multiply(&w(3, 2, 3)).unwrap();
    let rhs = w(3, 1, 2)
        .multiply(&w(3, 1, 3))
        .unwrap()
        .sub(&w(3, 2, 3).multiply(&w(3, 1, 3)).unwrap())
        .unwrap();
    assert_eq!(lhs, rhs);
    assert!(w(3, 1, 2).multiply(&w(3, 1, 2)).unwrap().is_zero());
    let rel = ArnoldElement::normal_form(
        3,
        &[
            (Scalar::one(), vec![(1, 2), (2, 3)]),
            (Scalar::one(), vec![(2, 3), (1, 3)]),
            (Scalar::one(), vec![(1, 3), (1, 2)]),
        ],
    )
    .unwrap();
    assert!(rel.is_zero());
}

#[test]
fn multiplication_examples() {
    assert_eq!(ArnoldElement::one(3).multiply(&w(3, 1, 3)).unwrap(), w(3, 1, 3));
    let p = w(3, 1, 3).multiply(&w(3, 2, 3)).unwrap();
    assert_eq!(p.terms().len(), 1);
    assert_eq!(p.coefficient(&[(1, 3), (2, 3)]), Scalar::one());
    assert!(matches!(
        w(3, 1, 2).multiply(&w(4, 1, 2)),
        Err(ArnoldError::ArityMismatch(3, 4))
    ));
}

#[test]
fn cocomposition_examples() {
    let one = ArnoldElement::one(2);
    let t = w(4, 1, 2).cocompose(2, 2).unwrap();
    assert_eq!(t, ArnoldTensor::pure(&w(3, 1, 2), &one));
    let t = w(4, 1, 2).cocompose(1, 2).unwrap();
    assert_eq!(t, ArnoldTensor::pure(&ArnoldElement::one(3), &w(2, 1, 2)));
    let t = ArnoldElement::one(5).cocompose(2, 3).unwrap();
    assert_eq!(t, ArnoldTensor::pure(&ArnoldElement::one(3), &ArnoldElement::one(3)));
    assert!(matches!(
        w(4, 1, 2).cocompose(4, 2),
        Err(ArnoldError::BlockOutOfRange { .. })
    ));
}

#[test]
fn pullback_examples() {
    let e = w(2, 1, 2);
    assert_eq!(e.pullback(&[1, 2], 2).unwrap(), e);
    assert_eq!(e.pullback(&[1, 3], 4).unwrap(), w(4, 1, 3));
    assert!(e.pullback(&[3, 1], 4).is_err());
    assert!(e.pullback(&[1, 1], 4).is_err());
}

#[test]
fn iota_examples() {
    assert_eq!(w(3, 1, 2).iota_v(), ArnoldElement::one(3));
    let e = w(3, 1, 2).multiply(&w(3, 1, 3)).unwrap();
    assert_eq!(e.iota_v(), w(3, 1, 3).sub(&w(3, 1, 2)).unwrap());
}

#[test]
fn json_round_trip() {
    let e = element(4, 2, &[1, -2, 0, 3, 5, 0, 0, 1, 0, 0, 7]);
    let v = e.to_json();
    assert_eq!(v["cooperad"], "coGer");
    assert_eq!(v["arity"], 4);
    assert_eq!(ArnoldElement::from_json(&v), Some(e));
}

fn coef_vec(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-3i64..=3, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iota_squares_to_zero(c in coef_vec(35)) {
        let e = element(5, 2, &c);
        prop_assert!(e.iota_v().iota_v().is_zero());
    }

    #[test]
    fn iota_is_an_odd_derivation(a in coef_vec(10), b in coef_vec(35)) {
        let x = element(5, 1, &a);
        let y = element(5, 2, &b);
        let lhs = x.multiply(&y).unwrap().iota_v();
        let rhs = x.iota_v().multiply(&y).unwrap().sub(&x.multiply(&y.iota_v()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cocompositions_are_algebra_maps(a in coef_vec(10), b in coef_vec(10), blk in 0usize..9) {
        let (i, k) = opw_core::moduli::blocks(5)[blk];
        let x = element(5, 1, &a);
        let y = element(5, 1, &b);
        let lhs = x.multiply(&y).unwrap().cocompose(i, k).unwrap();
        let rhs = x.cocompose(i, k).unwrap().multiply(&y.cocompose(i, k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullbacks_are_algebra_maps(a in coef_vec(6), b in coef_vec(6), skip in 1usize..=5) {
        let iota: Vec<usize> = (1..=5).filter(|&x| x != skip).collect();
        let x = element(4, 1, &a);
        let y = element(4, 1, &b);
        let lhs = x.multiply(&y).unwrap().pullback(&iota, 5).unwrap();
        let rhs = x.pullback(&iota, 5).unwrap().multiply(&y.pullback(&iota, 5).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullbacks_compose(c in coef_vec(11), s1 in 1usize..=5, s2 in 1usize..=6) {
        let x = element(4, 2, &c);
        let kappa: Vec<usize> = (1..=5).filter(|&v| v != s1).collect();
        let iota: Vec<usize> = (1..=6).filter(|&v| v != s2).collect();
        let both: Vec<usize> = kappa.iter().map(|&v| iota[v - 1]).collect();
        let lhs = x.pullback(&kappa, 5).unwrap().pullback(&iota, 6).unwrap();
        prop_assert_eq!(lhs, x.pullback(&both, 6).unwrap());
    }

    #[test]
    fn nested_collapses_agree(c in coef_vec(50)) {
        // collapsing {2,3} and then {2,3,4}, or {2,3,4} and then its first two inputs
        type Triple = std::collections::BTreeMap<(Monomial, Monomial, Monomial), Scalar>;
        let x = element(5, 3, &c);
        let push = |t: &mut Triple, k: (Monomial, Monomial, Monomial), v: Scalar| {
            let e = t.entry(k.clone()).or_insert_with(scalar::zero);
            *e += v;
            if num_traits::Zero::is_zero(e) {
                t.remove(&k);
            }
        };
        let mut first_small = Triple::new();
        for ((a, b), s) in x.cocompose(2, 2).unwrap().terms() {
            let outer = ArnoldElement::product_of(4, a, s.clone());
            for ((a2, b2), s2) in outer.cocompose(2, 2).unwrap().terms() {
                push(&mut first_small, (a2.clone(), b2.clone(), b.clone()), s2.clone());
            }
        }
        let mut first_big = Triple::new();
        for ((a, b), s) in x.cocompose(2, 3).unwrap().terms() {
            let inner = ArnoldElement::product_of(3, b, s.clone());
            for ((a2, b2), s2) in inner.cocompose(1, 2).unwrap().terms() {
                push(&mut first_big, (a.clone(), a2.clone(), b2.clone()), s2.clone());
            }
        }
        prop_assert_eq!(first_small, first_big);
    }
}
