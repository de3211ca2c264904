mod common;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use cocycle_core::sft::Point;
use cocycle_core::LocFun;
use common::{points, setup};

fn literal_sum(f: &LocFun, x: &Point, n: usize) -> BigInt {
    (0..n).map(|i| f.eval(&x.shift_by(i))).sum()
}

proptest! {
    #[test]
    fn birkhoff_sums_split((a, mut rng) in setup(), n in 0usize..5, m in 0usize..5) {
        let f = LocFun::random(&a, 3, &mut rng);
        let split = LocFun::linear(1, &f.birkhoff_const(m), 1, &f.birkhoff_const(n).compose_shift_pow(m));
        prop_assert_eq!(f.birkhoff_const(n + m), split);
    }

    #[test]
    fn birkhoff_matches_literal_sums((a, mut rng) in setup(), n in 0usize..6) {
        let f = LocFun::random(&a, 3, &mut rng);
        let e = LocFun::random(&a, 2, &mut rng).map_values(|v| v.abs());
        let fixed = f.birkhoff_const(n);
        let variable = f.birkhoff(&e).unwrap();
        for x in points(&a, 5) {
            prop_assert_eq!(fixed.eval(&x), literal_sum(&f, &x, n));
            let k: usize = e.eval(&x).try_into().unwrap();
            prop_assert_eq!(variable.eval(&x), literal_sum(&f, &x, k));
        }
        prop_assert!(f.birkhoff(&LocFun::constant(&a, -1)).is_err());
    }

    #[test]
    fn canonical_form_is_unique((a, mut rng) in setup()) {
        let f = LocFun::random(&a, 3, &mut rng);
        let depth = f.depth() + rng.gen_range(0..2);
        let refined = a
            .words(depth)
            .into_iter()
            .map(|w| {
                let v = f.eval(&Point::representative(&a, &w));
                (w, v)
            });
        prop_assert_eq!(LocFun::new(&a, refined).unwrap(), f.clone());
        let g = LocFun::random(&a, 3, &mut rng);
        let agree = points(&a, f.depth().max(g.depth()).max(1)).iter().all(|x| f.eval(x) == g.eval(x));
        prop_assert_eq!(agree, f == g);
    }

    #[test]
    fn arithmetic_is_pointwise((a, mut rng) in setup(), p in -3i64..4, q in -3i64..4) {
        let f = LocFun::random(&a, 3, &mut rng);
        let g = LocFun::random(&a, 3, &mut rng);
        let sum = &f + &g;
        let diff = &f - &g;
        let lin = LocFun::linear(p, &f, q, &g);
        let shifted = f.compose_shift();
        for x in points(&a, 4) {
            prop_assert_eq!(sum.eval(&x), f.eval(&x) + g.eval(&x));
            prop_assert_eq!(diff.eval(&x), f.eval(&x) - g.eval(&x));
            prop_assert_eq!(lin.eval(&x), p * f.eval(&x) + q * g.eval(&x));
            prop_assert_eq!(shifted.eval(&x), f.eval(&x.shift()));
        }
        prop_assert!((&f - &f).is_zero());
    }
}
