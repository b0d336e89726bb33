use std::collections::BTreeSet;

use opw_core::arnold::{enumerate_g, ArnoldElement};
use opw_core::words::*;
use proptest::prelude::*;

/// Full binary trees over the leaf set, filtered by normalization.
fn all_trees(leaves: &[usize]) -> Vec<Bracketing> {
    if leaves.len() == 1 {
        return vec![Bracketing::leaf(leaves[0])];
    }
    let mut out = Vec::new();
    let n = leaves.len();
    for mask in 1..(1u32 << n) - 1 {
        let (l, r): (Vec<usize>, Vec<usize>) = {
            let l = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| leaves[i]).collect();
            let r = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| leaves[i]).collect();
            (l, r)
        };
        for a in all_trees(&l) {
            for b in all_trees(&r) {
                out.push(Bracketing::node(a.clone(), b));
            }
        }
    }
    out
}

fn brute_force_l(n: usize) -> BTreeSet<String> {
    let leaves: Vec<usize> = (1..=n).collect();
    all_trees(&leaves)
        .into_iter()
        .filter(|t| t.is_normalized())
        .map(|t| print_bracketing(&t))
        .collect()
}

#[test]
fn bracketing_counts() {
    for n in 2..=6 {
        let l = enumerate_l(n);
        let fact: usize = (1..n).product();
        assert_eq!(l.len(), fact);
        if n <= 5 {
            let mine: BTreeSet<String> = l.iter().map(print_bracketing).collect();
            assert_eq!(mine, brute_force_l(n));
        }
    }
    assert_eq!(
        enumerate_l(2).iter().map(print_bracketing).collect::<Vec<_>>(),
        vec!["[1,2]"]
    );
    let three: BTreeSet<String> = enumerate_l(3).iter().map(print_bracketing).collect();
    assert_eq!(
        three,
        BTreeSet::from(["[1,[2,3]]".to_string(), "[[1,2],3]".to_string()])
    );
}

#[test]
fn prime_counts_match_the_series() {
    let series = opw_core::selfcheck::oracles::prime_counts_from_series(6);
    for n in 2..=6 {
        assert_eq!(enumerate_p(n).len() as i64, series[n], "n={n}");
    }
    assert_eq!(&series[2..6], &[1, 0, 1, 4]);
    assert_eq!(
        enumerate_p(4).iter().map(print_bracketing).collect::<Vec<_>>(),
        vec!["[[1,3],[2,4]]"]
    );
}

#[test]
fn primes_are_interval_free_and_others_have_witnesses() {
    for n in 3..=6 {
        let primes = enumerate_p(n);
        for l in enumerate_l(n) {
            let witness = l.interval_witness();
            assert_eq!(primes.contains(&l), witness.is_none());
            if let Some(b) = witness {
                let mut leaves = b.leaves();
                leaves.sort_unstable();
                assert!(leaves.windows(2).all(|w| w[1] == w[0] + 1));
                assert!(leaves.len() >= 2 && leaves.len() < n);
            }
        }
    }
}

#[test]
fn monomials_biject_onto_top_degree() {
    let l = parse_bracketing("[[1,3],[2,4]]").unwrap();
    let mut m = to_monomial(&l).unwrap();
    m.sort_unstable();
    assert_eq!(m, vec![(1, 3), (1, 4), (2, 4)]);
    assert_eq!(to_monomial(&parse_bracketing("[1,2]").unwrap()).unwrap(), vec![(1, 2)]);
    for n in 2..=5 {
        let mut image: Vec<Vec<(usize, usize)>> = enumerate_l(n)
            .iter()
            .map(|l| {
                let mut m = to_monomial(l).unwrap();
                m.sort_unstable();
                m
            })
            .collect();
        image.sort();
        let before = image.len();
        image.dedup();
        assert_eq!(image.len(), before);
        let mut top = enumerate_g(n, n - 1);
        top.sort();
        assert_eq!(image, top);
    }
}

#[test]
fn alpha_examples() {
    let w = ArnoldElement::gen;
    let prod = |a: ArnoldElement, b: ArnoldElement| a.multiply(&b).unwrap();
    let expected = prod(w(4, 1, 3), w(4, 2, 4))
        .sub(&prod(w(4, 1, 4), w(4, 2, 4)))
        .unwrap()
        .sub(&prod(w(4, 1, 3), w(4, 1, 4)))
        .unwrap();
    assert_eq!(alpha_of(&parse_bracketing("[[1,3],[2,4]]").unwrap()).unwrap(), expected);
    assert_eq!(
        alpha_of(&parse_bracketing("[1,2]").unwrap()).unwrap(),
        ArnoldElement::one(2)
    );
    for n in 2..=5 {
        for l in enumerate_l(n) {
            let a = alpha_of(&l).unwrap();
            assert!(a.iota_v().is_zero());
            assert_eq!(a.degree(), Some(n - 2));
        }
    }
}

#[test]
fn parser_errors_are_distinct() {
    assert!(matches!(
        parse_bracketing("[2,[1,3]]"),
        Err(ParseError::NotNormalized(_))
    ));
    assert!(matches!(parse_bracketing("[1,1]"), Err(ParseError::RepeatedLabel(1))));
    assert!(matches!(parse_bracketing("[1,2"), Err(ParseError::Syntax { .. })));
    assert!(matches!(
        parse_bracketing("[1;2]"),
        Err(ParseError::Syntax { pos: 2, .. })
    ));
}

proptest! {
    #[test]
    fn printing_round_trips(n in 2usize..=6, pick in 0usize..120) {
        let all = enumerate_l(n);
        let l = &all[pick % all.len()];
        let text = print_bracketing(l);
        prop_assert_eq!(&parse_bracketing(&text).unwrap(), l);
        let spaced = text.replace(',', " , ");
        prop_assert_eq!(&parse_bracketing(&spaced).unwrap(), l);
    }
}
