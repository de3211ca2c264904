mod common;

use proptest::prelude::*;
use rand::Rng;

use cocycle_core::sft::{Point, Word};
use cocycle_core::table::{cocycle_data_of, pullback_table};
use cocycle_core::{Error, TableElement};
use common::{golden, matrix, points, setup};

proptest! {
    #[test]
    fn group_laws((a, mut rng) in setup()) {
        let t1 = TableElement::random_with(&a, 4, &mut rng);
        let t2 = TableElement::random_with(&a, 4, &mut rng);
        let t3 = TableElement::random_with(&a, 4, &mut rng);
        let id = TableElement::identity(&a);
        prop_assert_eq!(t3.compose(&t2).compose(&t1), t3.compose(&t2.compose(&t1)));
        prop_assert_eq!(id.compose(&t1), t1.clone());
        prop_assert_eq!(t1.compose(&id), t1.clone());
        prop_assert_eq!(t1.compose(&t1.invert()), id.clone());
        prop_assert_eq!(t1.pow(3).compose(&t1.pow(-2)), t1.clone());
        prop_assert_eq!(t1.invert().invert(), t1);
    }

    #[test]
    fn d_is_a_cocycle((a, mut rng) in setup()) {
        let t1 = TableElement::random_with(&a, 4, &mut rng);
        let t2 = TableElement::random_with(&a, 4, &mut rng);
        let d = |t: &TableElement| t.cocycle_data().d;
        prop_assert_eq!(d(&t2.compose(&t1)), &d(&t1) + &pullback_table(&d(&t2), &t1));
    }

    #[test]
    fn padding_is_invisible((a, mut rng) in setup(), p in 1usize..4) {
        let t = TableElement::random_with(&a, 3, &mut rng);
        let padded = t.padded(p);
        prop_assert!(padded.len() >= t.len());
        prop_assert_eq!(cocycle_data_of(&a, padded.iter().map(|(n, m)| (n, m))).d, t.cocycle_data().d);
        prop_assert_eq!(TableElement::new(&a, padded).unwrap(), t);
    }

    #[test]
    fn composition_acts_pointwise((a, mut rng) in setup()) {
        let t1 = TableElement::random_with(&a, 4, &mut rng);
        let t2 = TableElement::random_with(&a, 4, &mut rng);
        let c = t2.compose(&t1);
        let parts = t1.domain().refine(&c.domain());
        for x in parts.representatives(&a).into_iter().chain(points(&a, 3)) {
            prop_assert_eq!(c.apply(&x), t2.apply(&t1.apply(&x)));
            prop_assert_eq!(t1.invert().apply(&t1.apply(&x)), x);
        }
    }

    #[test]
    fn prefix_swaps_are_involutions(i in 0usize..3) {
        let a = matrix(i);
        let id = TableElement::identity(&a);
        for z1 in a.symbols() {
            for z2 in a.successors(z1).filter(|&z2| z2 != z1).collect::<Vec<_>>() {
                let s = TableElement::prefix_swap(&a, z1, z2).unwrap();
                prop_assert_eq!(s.compose(&s), id.clone());
                prop_assert!(!s.is_identity());
            }
        }
    }

    #[test]
    fn random_elements_are_reproducible(i in 0usize..3, seed in any::<u64>()) {
        let a = matrix(i);
        prop_assert_eq!(TableElement::random_element(&a, 4, seed), TableElement::random_element(&a, 4, seed));
    }
}

#[test]
fn invalid_tables_are_rejected() {
    let a = golden();
    let w = |s: &str| s.parse::<Word>().unwrap();
    let t = |items: &[(&str, &str)]| TableElement::new(&a, items.iter().map(|&(n, m)| (w(n), w(m))));
    assert!(matches!(t(&[("-", "1"), ("2", "2")]), Err(Error::InadmissibleWord(_))));
    assert!(matches!(
        t(&[("2.2", "1"), ("1", "2")]),
        Err(Error::InadmissibleWord(_))
    ));
    assert!(matches!(t(&[("1", "1")]), Err(Error::DomainNotPartition(_))));
    assert!(matches!(
        t(&[("1", "1"), ("1", "1"), ("2", "2")]),
        Err(Error::DomainNotPartition(_))
    ));
    assert!(matches!(t(&[("1", "1"), ("2", "1")]), Err(Error::ImageNotPartition(_))));
    assert!(matches!(
        t(&[("1", "2"), ("2", "1")]),
        Err(Error::FollowerMismatch { .. })
    ));
    assert!(matches!(
        TableElement::prefix_swap(&a, 2, 2),
        Err(Error::EqualSymbols(2))
    ));
    assert!(matches!(TableElement::prefix_swap(&a, 2, 3), Err(Error::BadSymbol(3))));
    assert_eq!(t(&[("1", "1"), ("2", "2")]).unwrap(), TableElement::identity(&a));
}

#[test]
fn tau0_moves_the_expected_points() {
    let a = golden();
    let tau0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
    let p = |s: &str| Point::parse(&a, s).unwrap();
    assert_eq!(tau0.apply(&p("1.2|1")), p("2|1"));
    assert_eq!(tau0.apply(&p("2|1")), p("1.2|1"));
    assert_eq!(tau0.apply(&p("|1")), p("|1"));
    let mut rng = common::rng(3);
    let k = rng.gen_range(2..5);
    assert_eq!(tau0.pow(2 * k), TableElement::identity(&a));
}
