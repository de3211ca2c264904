mod common;

use proptest::prelude::*;

use cocycle_core::cocycle::{ck_word_weight, gauge_weight, in_af_group, in_cocycle_group, rho, rho_entries};
use cocycle_core::table::pullback_table;
use cocycle_core::{LocFun, TableElement};
use common::{golden, setup};

proptest! {
    #[test]
    fn cocycle_identity((a, mut rng) in setup()) {
        let f = LocFun::random(&a, 3, &mut rng);
        let t1 = TableElement::random_with(&a, 3, &mut rng);
        let t2 = TableElement::random_with(&a, 3, &mut rng);
        prop_assert_eq!(rho(&f, &t2.compose(&t1)), &rho(&f, &t1) + &pullback_table(&rho(&f, &t2), &t1));
        prop_assert_eq!(rho(&f, &t1.invert()), -&pullback_table(&rho(&f, &t1), &t1.invert()));
        prop_assert!(rho(&f, &TableElement::identity(&a)).is_zero());
    }

    #[test]
    fn rho_ignores_padding((a, mut rng) in setup(), p in 1usize..4) {
        let f = LocFun::random(&a, 3, &mut rng);
        let t = TableElement::random_with(&a, 3, &mut rng);
        prop_assert_eq!(rho_entries(&f, &t.padded(p)), rho(&f, &t));
    }

    #[test]
    fn rho_is_linear_in_f((a, mut rng) in setup()) {
        let f = LocFun::random(&a, 3, &mut rng);
        let g = LocFun::random(&a, 3, &mut rng);
        let t = TableElement::random_with(&a, 3, &mut rng);
        prop_assert_eq!(rho(&(&f + &g), &t), &rho(&f, &t) + &rho(&g, &t));
    }

    #[test]
    fn cocycle_groups_are_subgroups((a, mut rng) in setup()) {
        let f = if rand::Rng::gen_bool(&mut rng, 0.5) {
            LocFun::constant(&a, 1)
        } else {
            LocFun::random(&a, 1, &mut rng)
        };
        let pool: Vec<TableElement> = (0..24).map(|_| TableElement::random_with(&a, 3, &mut rng)).collect();
        let members: Vec<&TableElement> = pool.iter().filter(|t| in_cocycle_group(t, &f)).collect();
        for t1 in &members {
            prop_assert!(in_cocycle_group(&t1.invert(), &f));
            for t2 in &members {
                prop_assert!(in_cocycle_group(&t2.compose(t1), &f));
            }
        }
    }

    #[test]
    fn af_group_is_gamma_of_one((a, mut rng) in setup()) {
        let t = TableElement::random_with(&a, 4, &mut rng);
        prop_assert_eq!(in_af_group(&t), in_cocycle_group(&t, &LocFun::constant(&a, 1)));
        prop_assert_eq!(in_af_group(&t), t.entries().all(|(n, m)| n.len() == m.len()));
    }

    #[test]
    fn gauge_weights((a, mut rng) in setup()) {
        let f = LocFun::random(&a, 2, &mut rng);
        let t = TableElement::random_with(&a, 3, &mut rng);
        let w = gauge_weight(&t, &f);
        prop_assert_eq!(w.is_zero(), in_cocycle_group(&t, &f));
        // per image part U_μ: f^{|μ|} - f^{|ν|}∘τ^{-1}
        let mut expected = LocFun::zero(&a);
        for (nu, mu) in t.entries() {
            let on_mu = &ck_word_weight(mu, &f) - &pullback_table(&ck_word_weight(nu, &f), &t.invert());
            let chi = LocFun::indicator(&a, mu).unwrap();
            expected = &expected + &chi.zip_with(&on_mu, |c, v| c * v);
        }
        prop_assert_eq!(w, expected);
    }
}

#[test]
fn golden_values_on_g() {
    let a = golden();
    let tau0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
    let chi = |s: u32| LocFun::indicator(&a, &cocycle_core::sft::Word::single(s)).unwrap();
    assert_eq!(rho(&chi(1), &tau0).to_string(), "function\n1.1 0\n1.2 1\n2 -1\n");
    assert!(rho(&chi(2), &tau0).is_zero());
    assert!(!in_af_group(&tau0));
    assert!(in_cocycle_group(&tau0, &chi(2)));
}

fn inclusive_sum(f: &LocFun, x: &cocycle_core::sft::Point, n: usize) -> num_bigint::BigInt {
    (0..=n).map(|i| f.eval(&x.shift_by(i))).sum()
}

proptest! {
    #[test]
    fn inclusive_sums_give_the_same_cocycle((a, mut rng) in setup()) {
        let f = LocFun::random(&a, 3, &mut rng);
        let t = TableElement::random_with(&a, 3, &mut rng);
        let r = rho(&f, &t);
        for x in common::points(&a, 5) {
            let (nu, mu) = t.entries().find(|(nu, _)| x.starts_with(nu)).unwrap();
            let direct = inclusive_sum(&f, &x, nu.len()) - inclusive_sum(&f, &t.apply(&x), mu.len());
            prop_assert_eq!(r.eval(&x), direct);
        }
    }
}

#[test]
fn printed_inverse_identity_differs_from_the_derived_one() {
    let a = golden();
    let tau0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
    let chi1 = LocFun::indicator(&a, &cocycle_core::sft::Word::single(1)).unwrap();
    let derived = -&pullback_table(&rho(&chi1, &tau0), &tau0.invert());
    assert_eq!(rho(&chi1, &tau0.invert()), derived);
    assert_ne!(rho(&chi1, &tau0.invert()), -&rho(&chi1, &tau0));
}
