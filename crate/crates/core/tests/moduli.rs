use opw_core::arnold::{enumerate_g, ArnoldElement, ArnoldTensor};
use opw_core::moduli::*;
use opw_core::scalar::Scalar;
use opw_core::words::{alpha_of, enumerate_p};
use proptest::prelude::*;

fn w(n: usize, i: usize, j: usize) -> ArnoldElement {
    ArnoldElement::gen(n, i, j)
}

fn zeta2_form() -> ArnoldElement {
    let prod = |a: ArnoldElement, b: ArnoldElement| a.multiply(&b).unwrap();
    prod(w(4, 1, 3), w(4, 2, 4))
        .sub(&prod(w(4, 1, 4), w(4, 2, 4)))
        .unwrap()
        .sub(&prod(w(4, 1, 3), w(4, 1, 4)))
        .unwrap()
}

fn comp(ks: &[usize]) -> MzvComposition {
    MzvComposition::new(ks.to_vec()).unwrap()
}

#[test]
fn chord_examples() {
    assert_eq!(chords(4), vec![(1, 3), (2, 4)]);
    assert_eq!(chords(5).len(), 5);
    for m in 4..=8 {
        assert_eq!(chords(m).len(), m * (m - 3) / 2);
    }
    assert!(!is_chord(1, 2, 5));
    assert!(!is_chord(1, 5, 5));
}

#[test]
fn embedded_chord_forms() {
    assert_eq!(alpha_embed((1, 4), 4).unwrap(), w(4, 2, 4).sub(&w(4, 1, 4)).unwrap());
    assert_eq!(alpha_embed((3, 5), 4).unwrap(), w(4, 1, 3).sub(&w(4, 1, 4)).unwrap());
    assert!(alpha_embed((1, 2), 4).is_err());
    for n in 3..=6 {
        for c in chords(n + 1) {
            assert!(alpha_embed(c, n).unwrap().iota_v().is_zero());
        }
    }
}

#[test]
fn crossing_relations_hold() {
    let three = crossing_relation_check(3);
    assert_eq!(three.len(), 2);
    assert!(three.iter().all(|c| c.vanishes));
    let four = crossing_relation_check(4);
    assert!(four.iter().any(|c| c.a == vec![(1, 4)] && c.b == vec![(2, 5), (3, 5)]));
    for n in 3..=5 {
        assert!(crossing_relation_check(n).iter().all(|c| c.vanishes), "n={n}");
    }
}

#[test]
fn crossing_products_vanish_directly() {
    // independent of the enumeration: a chord times the sum over the chords crossing it
    let a = alpha_embed((1, 4), 4).unwrap();
    let b = alpha_embed((2, 5), 4)
        .unwrap()
        .add(&alpha_embed((3, 5), 4).unwrap())
        .unwrap();
    assert!(a.multiply(&b).unwrap().is_zero());
    let x = alpha_embed((1, 3), 3).unwrap();
    let y = alpha_embed((2, 4), 3).unwrap();
    assert!(x.multiply(&y).unwrap().is_zero());
}

#[test]
fn residue_examples() {
    for (i, k) in blocks(4) {
        assert!(residue(&ArnoldElement::one(4), i, k).unwrap().is_zero());
        assert!(residue(&zeta2_form(), i, k).unwrap().is_zero(), "block ({i},{k})");
    }
    assert_eq!(blocks(4).len(), 5);
    // the (1,2) residue detects the 1 (x) w12 component
    let e = w(3, 1, 2).sub(&w(3, 1, 3)).unwrap();
    let r = residue(&e, 1, 2).unwrap();
    assert_eq!(r, ArnoldTensor::pure(&ArnoldElement::one(2), &ArnoldElement::one(2)));
    assert!(matches!(residue(&w(3, 1, 2), 1, 2), Err(ModuliError::NotInKernel)));
}

#[test]
fn adelta_dimensions() {
    for (n, p) in [(2, 1), (3, 0), (4, 1), (5, 4)] {
        let b = adelta_basis(n, n - 2);
        assert_eq!(b.basis.len(), p, "n={n}");
        assert_eq!(enumerate_p(n).len(), p);
        assert!(b.warning.is_none());
    }
    let top = adelta_basis(4, 2).basis;
    assert_eq!(top.len(), 1);
    assert!(same_span(4, 2, &top, &[zeta2_form()]));
    assert!(adelta_basis(3, 1).basis.is_empty());
    for n in 2..=5 {
        assert_eq!(adelta_basis(n, 0).basis, vec![ArnoldElement::one(n)]);
    }
}

#[test]
fn adelta_elements_are_regular_on_both_sides() {
    for n in 3..=5 {
        for d in 0..=n - 2 {
            for e in adelta_basis(n, d).basis {
                assert!(is_regular(&e));
                for (i, k) in blocks(n) {
                    let t = e.cocompose(i, k).unwrap();
                    assert!(t.id_iota().is_zero());
                    assert!(t.iota_id().is_zero());
                }
            }
        }
    }
}

#[test]
fn prime_alphas_lie_in_the_regular_kernel() {
    for n in 2..=5 {
        let primes: Vec<ArnoldElement> = enumerate_p(n).iter().map(|p| alpha_of(p).unwrap()).collect();
        assert!(same_span(n, n - 2, &primes, &regular_kernel(n, n - 2)));
    }
}

#[test]
fn mzv_forms() {
    let f = mzv_form(&comp(&[2])).unwrap();
    assert_eq!(f.form, zeta2_form());
    for ks in [vec![3], vec![1, 2], vec![2, 2], vec![1, 3], vec![4]] {
        let f = mzv_form(&comp(&ks)).unwrap();
        let n = ks.iter().sum::<usize>() + 2;
        assert_eq!(f.form.arity(), n);
        assert_eq!(f.form.degree(), Some(n - 2));
        assert!(is_regular(&f.form), "{ks:?}");
    }
    assert!(matches!(MzvComposition::new(vec![1]), Err(ModuliError::Divergent(_))));
    assert!(matches!(
        MzvComposition::new(vec![2, 1]),
        Err(ModuliError::Divergent(_))
    ));
    assert_eq!(comp(&[1, 2]).word(), vec![0, 1, 1]);
}

#[test]
fn zeta_values() {
    let pi2 = std::f64::consts::PI.powi(2) / 6.0;
    let z2 = zeta_numeric(&comp(&[2]), 1e-9);
    assert!((z2.value - pi2).abs() <= 1e-8);
    assert!(z2.error_bound <= 1e-9);
    let z3 = zeta_numeric(&comp(&[3]), 1e-8);
    let z12 = zeta_numeric(&comp(&[1, 2]), 1e-8);
    assert!((z12.value - z3.value).abs() <= 1e-6);
    // zeta(4) = pi^4 / 90
    let z4 = zeta_numeric(&comp(&[4]), 1e-10);
    assert!((z4.value - std::f64::consts::PI.powi(4) / 90.0).abs() <= 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn zeta_is_at_least_one(k in 2usize..8) {
        prop_assert!(zeta_numeric(&comp(&[k]), 1e-6).value >= 1.0);
    }

    #[test]
    fn projection_lands_in_the_kernel(c in proptest::collection::vec(-3i64..=3, 35)) {
        let mut x = ArnoldElement::zero(5);
        for (m, v) in enumerate_g(5, 2).iter().zip(&c) {
            x.add_scaled(&ArnoldElement::product_of(5, m, Scalar::from_integer((*v).into())), &Scalar::from_integer(1.into()));
        }
        let p = opw_core::words::project_ker_iota(&x);
        prop_assert!(p.iota_v().is_zero());
        prop_assert_eq!(opw_core::words::project_ker_iota(&p), p);
    }
}
