//! Deciding whether an orbit equivalence is a conjugacy, and certificates
//! when it is not.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::cocycle::{in_cocycle_group, rho};
use crate::coe::{conjugate_by_code, pullback_map, CoeMap};
use crate::error::{Error, Result};
use crate::locfun::LocFun;
use crate::sft::{HigherBlock, Point, Symbol, Word};
use crate::table::TableElement;

/// Default cap on the higher block level used by the searches.
pub const DEFAULT_MAX_LEVEL: usize = 6;
/// Default cap on the depth of the separating cylinder.
pub const DEFAULT_MAX_DEPTH: usize = 12;

/// Certificate that `h` is not a conjugacy: with `G = g ∘ h_m` on the
/// `m`-block presentation, `τ₀` lies in `Γ_{G - G∘σ}` but `ρ^{G - g∘σ∘h_m}`
/// does not vanish at `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub recode_level: usize,
    /// The point, over the original source shift.
    pub z: Point,
    /// Characteristic function of a cylinder of the target shift.
    pub g: LocFun,
    /// Prefix swap over the `m`-block presentation of the source.
    pub tau0: TableElement,
    pub z1: Symbol,
    pub z2: Symbol,
    /// The source word `z[0..m+1]`, i.e. the cylinder `U_{z₁z₂}` read over the
    /// original alphabet.
    pub cylinder: Word,
}

/// A table over the source of `h₀` not commuting with `h₀`, with a point
/// where the two compositions differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantWitness {
    pub tau: TableElement,
    pub level: usize,
    pub point: Point,
}

/// Parts of the common refinement on which `h ∘ σ_A` and `σ_B ∘ h` differ.
pub fn difference_locus(h: &CoeMap) -> Vec<Word> {
    h.shifted().compare(&h.transducer().post_shift())
}

/// `h ∘ σ_A = σ_B ∘ h`, decided exactly on the normal forms.
pub fn is_conjugacy(h: &CoeMap) -> bool {
    difference_locus(h).is_empty()
}

/// True when `h₀` is the identity map of its source.
pub fn is_identity(h0: &CoeMap) -> bool {
    if h0.source() != h0.target() || !is_conjugacy(h0) {
        return false;
    }
    let t = h0.transducer();
    let mut stack = vec![Word::empty()];
    while let Some(w) = stack.pop() {
        match t.output_on(&w) {
            Some(beta) if !w.is_empty() && !beta.is_empty() => {
                if beta.first() != w.first() {
                    return false;
                }
            }
            _ => {
                for s in h0.source().extensions(&w) {
                    stack.push(w.pushed(s));
                }
            }
        }
    }
    true
}

/// Candidate points inside the difference locus: representatives of short
/// extensions of each locus word, and periodic points through it; points of
/// period at least 2 first.
fn candidates(h: &CoeMap, locus: &[Word]) -> Vec<Point> {
    let a = h.source();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for w in locus {
        for len in 0..=2 {
            for v in a.extend_by(w, len) {
                let z = Point::representative(a, &v);
                if seen.insert(z.clone()) {
                    out.push(z);
                }
            }
        }
        if let (Some(first), Some(last)) = (w.first(), w.last()) {
            let mut cycle = w.symbols().to_vec();
            cycle.extend(a.shortest_path(last, first));
            let z = Point::canonical(Vec::new(), cycle);
            if seen.insert(z.clone()) {
                out.push(z);
            }
        }
    }
    out.sort_by_key(|z| z.period() < 2);
    out
}

/// Constructs a [`Witness`] when `h` is not a conjugacy; `None` when it is.
pub fn witness_non_conjugacy(h: &CoeMap, max_level: usize, max_depth: usize) -> Result<Option<Witness>> {
    let locus = difference_locus(h);
    if locus.is_empty() {
        return Ok(None);
    }
    let usable: Vec<(Point, Point)> = candidates(h, &locus)
        .into_iter()
        .filter_map(|z| {
            let sz = z.shift();
            let hz = h.apply(&z);
            let shz = hz.shift();
            (sz != z && h.apply(&sz) != shz && shz != hz).then_some((z, shz))
        })
        .collect();
    for m in 1..=max_level {
        for (z, shz) in &usable {
            let u = z.prefix(m + 1);
            if u.is_constant() {
                continue;
            }
            for depth in 1..=max_depth {
                let t = shz.prefix(depth);
                if h.transducer().prefixes(&u, depth).contains(&t) || h.shifted().prefixes(&u, depth).contains(&t) {
                    continue;
                }
                let hb = HigherBlock::new(h.source(), m);
                let z1 = hb.symbol_of(&u.prefix(m)).unwrap();
                let z2 = hb.symbol_of(&u.suffix_from(1)).unwrap();
                let witness = Witness {
                    recode_level: m,
                    z: z.clone(),
                    g: LocFun::indicator(h.target(), &t)?,
                    tau0: TableElement::prefix_swap(hb.matrix(), z1, z2)?,
                    z1,
                    z2,
                    cylinder: u,
                };
                if !check_witness(h, &witness) {
                    return Err(Error::VerificationFailed(format!(
                        "witness at level {m} for z = {z} does not check"
                    )));
                }
                return Ok(Some(witness));
            }
        }
    }
    Err(Error::SearchBudgetExceeded { max_level, max_depth })
}

/// Verifies both conditions of a witness on the recoded map `h_m`:
/// `τ₀ ∈ Γ_{G - G∘σ}` for `G = g ∘ h_m`, and
/// `ρ^{G - g∘σ_B∘h_m}(z, τ₀) ≠ 0`.
pub fn check_witness(h: &CoeMap, w: &Witness) -> bool {
    if w.recode_level == 0 || w.g.matrix() != h.target() {
        return false;
    }
    let hm = h.recode_source(w.recode_level);
    if w.tau0.matrix() != hm.source() {
        return false;
    }
    let zm = HigherBlock::new(h.source(), w.recode_level).encode(&w.z);
    let gh = pullback_map(&w.g, &hm);
    let coboundary = &gh - &gh.compose_shift();
    if !in_cocycle_group(&w.tau0, &coboundary) {
        return false;
    }
    let q = &gh - &pullback_map(&w.g.compose_shift(), &hm);
    !rho(&q, &w.tau0).eval(&zm).is_zero()
}

/// Searches lifted prefix swaps `(w₁c ↔ σ(w₁)c)` at increasing levels for one
/// that does not commute with `h₀`; `None` when `h₀` is the identity.
pub fn commutant_witness(h0: &CoeMap, max_level: usize) -> Result<Option<CommutantWitness>> {
    let a = h0.source();
    if a != h0.target() {
        return Err(Error::IncompatibleChain("commutant needs a self-map".into()));
    }
    if is_identity(h0) {
        return Ok(None);
    }
    let t = h0.reduced_table();
    let c = h0.core();
    for level in 1..=max_level {
        for w1c in a.words(level + 1) {
            let w2 = w1c.suffix_from(1);
            if w2 == w1c.prefix(level) {
                continue;
            }
            let tau = TableElement::transposition(a, &w1c, &w2)?;
            // h₀∘τ = (T∘ξ_c(τ))∘c and τ∘h₀ = (τ∘T)∘c
            let lhs = t.compose(&conjugate_by_code(c, &tau));
            let rhs = tau.compose(t);
            if lhs == rhs {
                continue;
            }
            let parts = lhs.domain().refine(&rhs.domain());
            for extra in 0..=2 {
                for p in parts.parts() {
                    for v in a.extend_by(p, extra) {
                        let x = c.decode(&Point::representative(a, &v));
                        if h0.apply(&tau.apply(&x)) != tau.apply(&h0.apply(&x)) {
                            return Ok(Some(CommutantWitness { tau, level, point: x }));
                        }
                    }
                }
            }
        }
    }
    Err(Error::SearchBudgetExceeded {
        max_level,
        max_depth: 0,
    })
}
