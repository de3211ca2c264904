//! Continuous orbit equivalences given as chains of tables and block codes,
//! the transfer map `Ψ_h` and conjugation `ξ_h` of full-group elements.

mod chain;
mod code;
mod transducer;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;

pub use chain::{conjugate_by_code, CoeMap, Stage};
pub use code::BlockCode;
pub use transducer::Transducer;

use crate::cocycle::rho;
use crate::error::{Error, Result};
use crate::locfun::LocFun;
use crate::sft::TransitionMatrix;
use crate::table::{pullback_table, TableElement};

/// `g ∘ t` for a function `g` on the target of the transducer.
pub fn pullback_transducer(g: &LocFun, t: &Transducer) -> LocFun {
    assert_eq!(g.matrix(), t.target(), "function is not over the target");
    LocFun::tabulate(t.source(), |w| {
        let beta = t.output_on(w)?;
        g.value_on(&beta).cloned()
    })
}

/// `x ↦ g^{n(x)}(t(x))`, Birkhoff sums taken along the target shift.
pub fn birkhoff_pullback(g: &LocFun, n: &LocFun, t: &Transducer) -> LocFun {
    let mut cache: HashMap<usize, LocFun> = HashMap::new();
    for v in n.values() {
        let e = v.to_usize().expect("nonnegative exponent");
        cache
            .entry(e)
            .or_insert_with(|| pullback_transducer(&g.birkhoff_const(e), t));
    }
    LocFun::tabulate(n.matrix(), |w| {
        let e = n.value_on(w)?.to_usize()?;
        cache[&e].value_on(w).cloned()
    })
}

/// `g ∘ h`.
pub fn pullback_map(g: &LocFun, h: &CoeMap) -> LocFun {
    pullback_transducer(g, h.transducer())
}

/// `Ψ_h(g)(x) = g^{l₁(x)}(h(x)) - g^{k₁(x)}(h(σ_A x))`.
pub fn psi(h: &CoeMap, g: &LocFun) -> LocFun {
    let direct = birkhoff_pullback(g, h.l1(), h.transducer());
    let shifted = birkhoff_pullback(g, h.k1(), h.shifted());
    &direct - &shifted
}

/// `ξ_h(τ) = h ∘ τ ∘ h^{-1}`, a table over the target.
pub fn conjugate_table(h: &CoeMap, tau: &TableElement) -> TableElement {
    let t = h.reduced_table();
    t.compose(&conjugate_by_code(h.core(), tau)).compose(&t.invert())
}

/// `ρ^g(h(x), ξ_h(τ)) = ρ^{Ψ_h(g)}(x, τ)` for all `x`.
pub fn check_xihg(h: &CoeMap, tau: &TableElement, g: &LocFun) -> bool {
    let lhs = pullback_map(&rho(g, &conjugate_table(h, tau)), h);
    let rhs = rho(&psi(h, g), tau);
    lhs == rhs
}

/// Cocycle pair `(k, l)` of `second ∘ first`:
/// `k(x) = l₁'^{k₁(x)}(h₁(σx)) + k₁'^{l₁(x)}(h₁(x))` and
/// `l(x) = k₁'^{k₁(x)}(h₁(σx)) + l₁'^{l₁(x)}(h₁(x))`, where primes refer to
/// `second`. The relation is re-verified exactly on the composite.
pub fn compose_cocycles(first: &CoeMap, second: &CoeMap) -> Result<(LocFun, LocFun)> {
    if first.target() != second.source() {
        return Err(Error::IncompatibleChain("maps do not compose".into()));
    }
    let (t, ts) = (first.transducer(), first.shifted());
    let k = &birkhoff_pullback(second.l1(), first.k1(), ts) + &birkhoff_pullback(second.k1(), first.l1(), t);
    let l = &birkhoff_pullback(second.k1(), first.k1(), ts) + &birkhoff_pullback(second.l1(), first.l1(), t);
    let composite = first.then(second)?;
    if !composite.transducer().relation_holds(composite.shifted(), &k, &l) {
        return Err(Error::VerificationFailed("composite orbit relation".into()));
    }
    Ok((k, l))
}

/// Exponents of `ξ_h(τ)` read through `h`:
/// `K(x) = l₁^{k_τ(x)}(τx) + k₁^{l_τ(x)}(x)` and
/// `L(x) = k₁^{k_τ(x)}(τx) + l₁^{l_τ(x)}(x)`.
pub fn transported_exponents(h: &CoeMap, tau: &TableElement) -> (LocFun, LocFun) {
    let data = tau.cocycle_data();
    // k_τ ∘ τ^{-1}: the length of μ on U_μ
    let image_len = pullback_table(&data.k, &tau.invert());
    let at_image = |f: &LocFun| pullback_table(&f.birkhoff(&image_len).expect("lengths"), tau);
    let k = &at_image(h.l1()) + &h.k1().birkhoff(&data.l).expect("lengths");
    let l = &at_image(h.k1()) + &h.l1().birkhoff(&data.l).expect("lengths");
    (k, l)
}

/// The transported exponents satisfy `σ^{K(x)}(h(τx)) = σ^{L(x)}(h(x))`
/// exactly, and `L - K = d_{ξ_h(τ)} ∘ h`.
pub fn check_transported_exponents(h: &CoeMap, tau: &TableElement) -> bool {
    let (k, l) = transported_exponents(h, tau);
    let d = conjugate_table(h, tau).cocycle_data().d;
    let h_tau = h.transducer().pre_table(tau);
    h.transducer().relation_holds(&h_tau, &k, &l) && &l - &k == pullback_map(&d, h)
}

/// A random genuine conjugacy out of `a`: a higher block recoding, a
/// relabeling, or a composition of those.
pub fn random_conjugacy<R: Rng>(a: &TransitionMatrix, rng: &mut R) -> BlockCode {
    let relabel = |a: &TransitionMatrix, rng: &mut R| {
        let mut perm: Vec<u32> = a.symbols().collect();
        perm.shuffle(rng);
        BlockCode::relabel(a, &perm).expect("permutations relabel")
    };
    match rng.gen_range(0..4) {
        0 => BlockCode::higher_block(a, 2),
        1 => relabel(a, rng),
        2 => {
            let hb = BlockCode::higher_block(a, 2);
            let r = relabel(hb.target(), rng);
            hb.then(&r).expect("compatible")
        }
        _ => {
            let r = relabel(a, rng);
            let hb = BlockCode::higher_block(r.target(), 2);
            let back = hb.inverse();
            r.then(&hb).and_then(|c| c.then(&back)).expect("compatible")
        }
    }
}

/// A random chain `post ∘ c ∘ pre` with a random conjugacy core and random
/// tables on either side; at least one table is drawn nontrivially.
pub fn random_twisted<R: Rng>(a: &TransitionMatrix, rng: &mut R) -> CoeMap {
    let code = random_conjugacy(a, rng);
    let b = code.target().clone();
    let mut stages = Vec::new();
    let side = rng.gen_range(0..3);
    if side != 1 {
        stages.push(Stage::Table(TableElement::random_with(a, 3, rng)));
    }
    stages.push(Stage::Code(code));
    if side != 0 {
        stages.push(Stage::Table(TableElement::random_with(&b, 2, rng)));
    }
    CoeMap::from_chain(stages).expect("random chain is valid")
}
