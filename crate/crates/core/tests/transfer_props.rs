mod common;

use proptest::prelude::*;

use cocycle_core::cocycle::in_cocycle_group;
use cocycle_core::coe::{
    check_transported_exponents, check_xihg, compose_cocycles, conjugate_table, psi, pullback_map, random_conjugacy,
    random_twisted, transported_exponents, CoeMap,
};
use cocycle_core::{LocFun, TableElement};
use common::{points, setup};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_is_additive_and_transports_coboundaries((a, mut rng) in setup()) {
        let h = random_twisted(&a, &mut rng);
        let g1 = LocFun::random(h.target(), 2, &mut rng);
        let g2 = LocFun::random(h.target(), 2, &mut rng);
        prop_assert_eq!(psi(&h, &(&g1 + &g2)), &psi(&h, &g1) + &psi(&h, &g2));
        let pulled = pullback_map(&g1, &h);
        prop_assert_eq!(psi(&h, &(&g1 - &g1.compose_shift())), &pulled - &pulled.compose_shift());
    }

    #[test]
    fn psi_of_a_conjugacy_is_the_pullback((a, mut rng) in setup()) {
        let h = CoeMap::from_code(random_conjugacy(&a, &mut rng));
        let g = LocFun::random(h.target(), 3, &mut rng);
        prop_assert!(h.is_pure_code());
        prop_assert_eq!(psi(&h, &g), pullback_map(&g, &h));
        prop_assert!(h.k1().is_zero());
        prop_assert_eq!(h.l1(), &LocFun::constant(&a, 1));
    }

    #[test]
    fn conjugation_transports_groups((a, mut rng) in setup()) {
        let h = random_twisted(&a, &mut rng);
        let t1 = TableElement::random_with(&a, 3, &mut rng);
        let t2 = TableElement::random_with(&a, 3, &mut rng);
        let g = LocFun::random(h.target(), 2, &mut rng);
        prop_assert!(check_xihg(&h, &t1, &g));
        prop_assert!(check_transported_exponents(&h, &t1));
        prop_assert_eq!(
            in_cocycle_group(&t1, &psi(&h, &g)),
            in_cocycle_group(&conjugate_table(&h, &t1), &g)
        );
        prop_assert_eq!(
            conjugate_table(&h, &t2.compose(&t1)),
            conjugate_table(&h, &t2).compose(&conjugate_table(&h, &t1))
        );
        let xi = conjugate_table(&h, &t1);
        for x in points(&a, 3) {
            prop_assert_eq!(xi.apply(&h.apply(&x)), h.apply(&t1.apply(&x)));
        }
    }

    #[test]
    fn orbit_relation_is_exact((a, mut rng) in setup()) {
        let h = random_twisted(&a, &mut rng);
        let one = LocFun::constant(&a, 1);
        prop_assert!(h.transducer().relation_holds(h.shifted(), h.k1(), h.l1()));
        prop_assert!(!h.transducer().relation_holds(h.shifted(), &(h.k1() + &one), h.l1()));
        let tau = TableElement::random_with(&a, 3, &mut rng);
        let (k, l) = transported_exponents(&h, &tau);
        let h_tau = h.transducer().pre_table(&tau);
        prop_assert!(h.transducer().relation_holds(&h_tau, &k, &l));
        prop_assert!(!h.transducer().relation_holds(&h_tau, &k, &(&l + &one)));
        for x in points(&a, 3) {
            let k1: usize = h.k1().eval(&x).try_into().unwrap();
            let l1: usize = h.l1().eval(&x).try_into().unwrap();
            prop_assert_eq!(h.apply(&x.shift()).shift_by(k1), h.apply(&x).shift_by(l1));
        }
    }

    #[test]
    fn chains_compose_and_invert((a, mut rng) in setup()) {
        let h1 = random_twisted(&a, &mut rng);
        let h2 = random_twisted(h1.target(), &mut rng);
        prop_assert!(compose_cocycles(&h1, &h2).is_ok());
        let both = h1.then(&h2).unwrap();
        let inv = h1.invert();
        for x in points(&a, 3) {
            prop_assert_eq!(both.apply(&x), h2.apply(&h1.apply(&x)));
            prop_assert_eq!(inv.apply(&h1.apply(&x)), x.clone());
        }
        prop_assert!(compose_cocycles(&h2, &h2).is_err() || h2.source() == h2.target());
    }
}
