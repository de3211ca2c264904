//! The cocycle `ρ^f`, cocycle full groups `Γ_{A,f}`, the AF full group and
//! gauge weights.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::locfun::LocFun;
use crate::sft::Word;
use crate::table::{cocycle_data_of, pullback_entries, TableElement};

/// `φ_τ(f)(x) = ρ^f(x, τ) = f^{l_τ(x)}(x) - f^{k_τ(x)}(τ(x))`.
pub fn rho(f: &LocFun, tau: &TableElement) -> LocFun {
    assert_eq!(
        f.matrix(),
        tau.matrix(),
        "function and table over different shift spaces"
    );
    rho_of_entries(f, tau.entries())
}

/// `ρ^f` computed from an arbitrary presentation of a table, e.g. a padded
/// one; equal to [`rho`] of the canonical table.
pub fn rho_entries(f: &LocFun, entries: &[(Word, Word)]) -> LocFun {
    rho_of_entries(f, entries.iter().map(|(n, m)| (n, m)))
}

fn rho_of_entries<'a>(f: &LocFun, entries: impl Iterator<Item = (&'a Word, &'a Word)> + Clone) -> LocFun {
    let a = f.matrix();
    let data = cocycle_data_of(a, entries.clone());
    // |μ| as a function on the image side, so that its pullback along τ is k_τ
    let image_len: BTreeMap<Word, BigInt> = entries
        .clone()
        .map(|(_, mu)| (mu.clone(), BigInt::from(mu.len())))
        .collect();
    let image_len = LocFun::from_map(a, image_len);
    let fk = f.birkhoff(&image_len).expect("lengths are nonnegative");
    let fl = f.birkhoff(&data.l).expect("lengths are nonnegative");
    &fl - &pullback_entries(&fk, entries)
}

/// `τ ∈ Γ_{A,f}`, i.e. `ρ^f(·, τ) ≡ 0`.
pub fn in_cocycle_group(tau: &TableElement, f: &LocFun) -> bool {
    rho(f, tau).is_zero()
}

/// `τ` lies in the AF full group, i.e. `d_τ ≡ 0`.
pub fn in_af_group(tau: &TableElement) -> bool {
    tau.cocycle_data().d.is_zero()
}

/// Exponent of the phase picked up by the table unitary `u_τ` under the
/// gauge action with potential `f`: `φ_{τ^{-1}}(f)`.
pub fn gauge_weight(tau: &TableElement, f: &LocFun) -> LocFun {
    rho(f, &tau.invert())
}

/// Exponent `f^{|μ|}` attached to the word `S_μ` by the gauge action.
pub fn ck_word_weight(mu: &Word, f: &LocFun) -> LocFun {
    f.birkhoff_const(mu.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{Point, TransitionMatrix};
    use crate::table::pullback_table;

    fn g() -> TransitionMatrix {
        TransitionMatrix::from_rows([[1, 1], [1, 0]]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fun(a: &TransitionMatrix, items: &[(&str, i64)]) -> LocFun {
        LocFun::new(a, items.iter().map(|&(s, v)| (w(s), BigInt::from(v)))).unwrap()
    }

    /// Direct evaluation of `f^{|ν|}(x) - f^{|μ|}(τx)` at a point of `U_ν`.
    fn rho_oracle(f: &LocFun, tau: &TableElement, x: &Point) -> BigInt {
        let (nu, mu) = tau.entries().find(|(nu, _)| x.starts_with(nu)).unwrap();
        let y = tau.apply(x);
        let sum = |p: &Point, n: usize| -> BigInt { (0..n).map(|i| f.eval(&p.shift_by(i))).sum() };
        sum(x, nu.len()) - sum(&y, mu.len())
    }

    #[test]
    fn golden_values() {
        let a = g();
        let t0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
        let c1 = LocFun::indicator(&a, &w("1")).unwrap();
        let c2 = LocFun::indicator(&a, &w("2")).unwrap();
        let r = rho(&c1, &t0);
        assert_eq!(r, fun(&a, &[("1.2", 1), ("2", -1), ("1.1", 0)]));
        for word in a.words(4) {
            let x = Point::representative(&a, &word);
            assert_eq!(r.eval(&x), rho_oracle(&c1, &t0, &x));
        }
        assert!(rho(&c2, &t0).is_zero());
        assert!(rho(&c1, &TableElement::identity(&a)).is_zero());
    }

    #[test]
    fn membership() {
        let a = g();
        let t0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
        let c2 = LocFun::indicator(&a, &w("2")).unwrap();
        let one = LocFun::constant(&a, 1);
        assert!(in_cocycle_group(&t0, &c2));
        assert!(!in_cocycle_group(&t0, &one));
        assert!(in_cocycle_group(&TableElement::identity(&a), &c2));
        assert!(in_af_group(&TableElement::identity(&a)));
        assert!(!in_af_group(&t0));
        assert!(in_af_group(&t0.compose(&t0)));
    }

    #[test]
    fn gauge_weights() {
        let a = g();
        let t0 = TableElement::prefix_swap(&a, 1, 2).unwrap();
        let one = LocFun::constant(&a, 1);
        let c2 = LocFun::indicator(&a, &w("2")).unwrap();
        assert!(gauge_weight(&TableElement::identity(&a), &c2).is_zero());
        assert_eq!(gauge_weight(&t0, &one), fun(&a, &[("1.2", 1), ("2", -1), ("1.1", 0)]));
        assert!(gauge_weight(&t0, &c2).is_zero());
    }

    #[test]
    fn word_weights() {
        let a = g();
        let one = LocFun::constant(&a, 1);
        assert_eq!(ck_word_weight(&w("1.2.1"), &one), LocFun::constant(&a, 3));
        let c1 = LocFun::indicator(&a, &w("1")).unwrap();
        assert_eq!(
            ck_word_weight(&w("1.1"), &c1),
            fun(&a, &[("1.1", 2), ("1.2", 1), ("2.1", 1)])
        );
        assert!(ck_word_weight(&Word::empty(), &c1).is_zero());
    }

    #[test]
    fn inverse_identity() {
        let a = g();
        let c1 = LocFun::indicator(&a, &w("1")).unwrap();
        for seed in 0..10 {
            let t = TableElement::random_element(&a, 3, seed);
            let inv = t.invert();
            assert_eq!(rho(&c1, &inv), -&pullback_table(&rho(&c1, &t), &inv));
        }
    }
}
