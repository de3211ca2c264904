//! Elements of the continuous full group `Γ_A` as prefix-exchange tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::locfun::{find_prefix, LocFun};
use crate::sft::{check_antichain, complement, CylinderPartition, Point, Symbol, TransitionMatrix, Word};

/// A homeomorphism `τ` of `X_A` given by a table of entries `ν -> μ` with
/// `τ(ν·y) = μ·y`.
///
/// Both word families are complete antichains and the last symbols of `ν`
/// and `μ` have the same row in `A`. Tables are kept in canonical form: no
/// family `νa -> μa` over all followers `a` of `ν` that could be collapsed to
/// `ν -> μ` remains, so structural equality is equality of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TableElement {
    matrix: TransitionMatrix,
    entries: BTreeMap<Word, Word>,
}

/// Cocycle data `(k, l, d)` of a table: on `U_ν`, `k = |μ|`, `l = |ν|` and
/// `d = l - k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleData {
    pub k: LocFun,
    pub l: LocFun,
    pub d: LocFun,
}

fn merge_rec(
    a: &TransitionMatrix,
    map: &BTreeMap<Word, Word>,
    node: &Word,
    out: &mut BTreeMap<Word, Word>,
) -> Option<Word> {
    if let Some(mu) = map.get(node) {
        return Some(mu.clone());
    }
    let children: Vec<(Symbol, Word, Option<Word>)> = a
        .extensions(node)
        .into_iter()
        .map(|s| {
            let c = node.pushed(s);
            let v = merge_rec(a, map, &c, out);
            (s, c, v)
        })
        .collect();
    let merged = node.last().and_then(|last| {
        let (_, _, first) = children.first()?;
        let q = first.as_ref()?.parent()?;
        let fits = children.iter().all(|(s, _, v)| {
            v.as_ref()
                .is_some_and(|v| v.last() == Some(*s) && v.parent().as_ref() == Some(&q))
        });
        (fits && !q.is_empty() && a.same_followers(last, q.last().unwrap())).then_some(q)
    });
    if merged.is_some() {
        return merged;
    }
    for (_, c, v) in children {
        if let Some(v) = v {
            out.insert(c, v);
        }
    }
    None
}

impl TableElement {
    /// Validates a list of entries and returns the canonical table.
    pub fn new(a: &TransitionMatrix, entries: impl IntoIterator<Item = (Word, Word)>) -> Result<TableElement> {
        let entries: Vec<(Word, Word)> = entries.into_iter().collect();
        for (nu, mu) in &entries {
            for w in [nu, mu] {
                if w.is_empty() || !a.is_admissible(w.symbols()) {
                    return Err(Error::InadmissibleWord(w.clone()));
                }
            }
        }
        let mut dom = BTreeSet::new();
        let mut img = BTreeSet::new();
        for (nu, mu) in &entries {
            if !dom.insert(nu.clone()) {
                return Err(Error::DomainNotPartition(format!("{nu} occurs twice")));
            }
            if !img.insert(mu.clone()) {
                return Err(Error::ImageNotPartition(format!("{mu} occurs twice")));
            }
        }
        check_antichain(a, &dom).map_err(Error::DomainNotPartition)?;
        check_antichain(a, &img).map_err(Error::ImageNotPartition)?;
        for (nu, mu) in &entries {
            if !a.same_followers(nu.last().unwrap(), mu.last().unwrap()) {
                return Err(Error::FollowerMismatch {
                    from: nu.clone(),
                    to: mu.clone(),
                });
            }
        }
        Ok(Self::from_map(a, entries.into_iter().collect()))
    }

    /// Canonicalizes entries already known to form a valid table.
    pub(crate) fn from_map(a: &TransitionMatrix, map: BTreeMap<Word, Word>) -> TableElement {
        let mut entries = BTreeMap::new();
        let root = merge_rec(a, &map, &Word::empty(), &mut entries);
        debug_assert!(root.is_none());
        TableElement {
            matrix: a.clone(),
            entries,
        }
    }

    pub fn identity(a: &TransitionMatrix) -> TableElement {
        TableElement {
            matrix: a.clone(),
            entries: a.symbols().map(|s| (Word::single(s), Word::single(s))).collect(),
        }
    }

    /// Exchanges the disjoint cylinders `U_α` and `U_β` (whose last symbols
    /// must have equal rows) and fixes everything else.
    pub fn transposition(a: &TransitionMatrix, alpha: &Word, beta: &Word) -> Result<TableElement> {
        let ok = !alpha.is_empty()
            && !beta.is_empty()
            && a.is_admissible(alpha.symbols())
            && a.is_admissible(beta.symbols())
            && !alpha.comparable(beta)
            && a.same_followers(alpha.last().unwrap(), beta.last().unwrap());
        if !ok {
            return Err(Error::BadTransposition(alpha.clone(), beta.clone()));
        }
        let mut map: BTreeMap<Word, Word> = complement(a, &[alpha.clone(), beta.clone()])
            .into_iter()
            .map(|w| (w.clone(), w))
            .collect();
        map.insert(alpha.clone(), beta.clone());
        map.insert(beta.clone(), alpha.clone());
        Ok(Self::from_map(a, map))
    }

    /// The involution `τ₀` with `z₁z₂·x ↦ z₂·x`, `z₂·x ↦ z₁z₂·x`, identity
    /// elsewhere.
    pub fn prefix_swap(a: &TransitionMatrix, z1: Symbol, z2: Symbol) -> Result<TableElement> {
        for z in [z1, z2] {
            if !a.has_symbol(z) {
                return Err(Error::BadSymbol(z));
            }
        }
        if z1 == z2 {
            return Err(Error::EqualSymbols(z1));
        }
        if !a.allowed(z1, z2) {
            return Err(Error::InadmissiblePair(z1, z2));
        }
        Self::transposition(a, &Word::new(vec![z1, z2]), &Word::single(z2))
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    /// Entries `(ν, μ)` sorted by `ν`.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word)> + Clone {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(|(nu, mu)| nu == mu)
    }

    pub fn domain(&self) -> CylinderPartition {
        CylinderPartition::new(&self.matrix, self.entries.keys().cloned()).expect("valid table")
    }

    pub fn image(&self) -> CylinderPartition {
        CylinderPartition::new(&self.matrix, self.entries.values().cloned()).expect("valid table")
    }

    /// The entry whose domain word prefixes `w`, if `w` is deep enough.
    pub fn entry_for(&self, w: &Word) -> Option<(&Word, &Word)> {
        find_prefix(&self.entries, w)
    }

    pub fn apply(&self, x: &Point) -> Point {
        let depth = self.entries.keys().map(Word::len).max().unwrap_or(0);
        let p = x.prefix(depth);
        let (nu, mu) = self.entry_for(&p).expect("complete domain");
        x.shift_by(nu.len()).prepend(mu)
    }

    /// Image of a cylinder word deep enough to lie in one entry: `ν·s ↦ μ·s`.
    pub fn apply_word(&self, w: &Word) -> Option<Word> {
        let (nu, mu) = self.entry_for(w)?;
        Some(mu.concat(&w.suffix_from(nu.len())))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TableElement) -> TableElement {
        assert_eq!(self.matrix, first.matrix, "tables over different shift spaces");
        let mut map = BTreeMap::new();
        for (nu1, mu1) in &first.entries {
            if let Some((nu2, mu2)) = self.entry_for(mu1) {
                map.insert(nu1.clone(), mu2.concat(&mu1.suffix_from(nu2.len())));
            } else {
                for (nu2, mu2) in self.entries.range(mu1..).take_while(|(n, _)| mu1.is_prefix_of(n)) {
                    map.insert(nu1.concat(&nu2.suffix_from(mu1.len())), mu2.clone());
                }
            }
        }
        Self::from_map(&self.matrix, map)
    }

    pub fn invert(&self) -> TableElement {
        let map = self.entries.iter().map(|(nu, mu)| (mu.clone(), nu.clone())).collect();
        Self::from_map(&self.matrix, map)
    }

    /// Integer power, negative exponents meaning powers of the inverse.
    pub fn pow(&self, e: i64) -> TableElement {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut r = TableElement::identity(&self.matrix);
        for _ in 0..e.unsigned_abs() {
            r = base.compose(&r);
        }
        r
    }

    pub fn cocycle_data(&self) -> CocycleData {
        cocycle_data_of(&self.matrix, self.entries.iter())
    }

    /// Non-canonical presentation with every entry `ν -> μ` replaced by the
    /// entries `ν·s -> μ·s` over all admissible continuations `s` of length
    /// `p`.
    pub fn padded(&self, p: usize) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        for (nu, mu) in &self.entries {
            for ext in self.matrix.extend_by(nu, p) {
                let s = ext.suffix_from(nu.len());
                out.push((ext, mu.concat(&s)));
            }
        }
        out
    }

    /// Random product of one to three lifted prefix swaps and AF
    /// transpositions, using words of length at most `depth_budget`.
    pub fn random_with<R: Rng>(a: &TransitionMatrix, depth_budget: usize, rng: &mut R) -> TableElement {
        assert!(depth_budget >= 2, "depth budget must be at least 2");
        let factors = rng.gen_range(1..=3);
        let mut t = TableElement::identity(a);
        for _ in 0..factors {
            let f = loop {
                let candidate = if rng.gen_bool(0.5) {
                    random_lifted_swap(a, depth_budget, rng)
                } else {
                    random_af_transposition(a, depth_budget, rng)
                };
                if let Some(f) = candidate {
                    break f;
                }
            };
            t = f.compose(&t);
        }
        t
    }

    /// [`random_with`](Self::random_with) driven by a ChaCha8 stream seeded
    /// with `seed`.
    pub fn random_element(a: &TransitionMatrix, depth_budget: usize, seed: u64) -> TableElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(a, depth_budget, &mut rng)
    }
}

/// `transposition(w₁·c, σ(w₁)·c)` for a random admissible `w₁·c`: the prefix
/// swap of the `m`-block presentation, read back over `A`.
fn random_lifted_swap<R: Rng>(a: &TransitionMatrix, budget: usize, rng: &mut R) -> Option<TableElement> {
    let m = rng.gen_range(1..budget);
    let long = a.words(m + 1);
    let w1c = long.choose(rng)?;
    let w2 = w1c.suffix_from(1);
    if w2 == w1c.prefix(m) {
        return None;
    }
    TableElement::transposition(a, w1c, &w2).ok()
}

/// Exchange of two distinct equal-length words with equal last rows.
fn random_af_transposition<R: Rng>(a: &TransitionMatrix, budget: usize, rng: &mut R) -> Option<TableElement> {
    let len = rng.gen_range(1..=budget);
    let words = a.words(len);
    let u = words.choose(rng)?;
    let partners: Vec<&Word> = words
        .iter()
        .filter(|v| *v != u && a.same_followers(u.last().unwrap(), v.last().unwrap()))
        .collect();
    let v = partners.choose(rng)?;
    TableElement::transposition(a, u, v).ok()
}

/// Cocycle data computed from any list of entries, canonical or not.
pub fn cocycle_data_of<'a>(a: &TransitionMatrix, entries: impl Iterator<Item = (&'a Word, &'a Word)>) -> CocycleData {
    let mut k = BTreeMap::new();
    let mut l = BTreeMap::new();
    let mut d = BTreeMap::new();
    for (nu, mu) in entries {
        k.insert(nu.clone(), BigInt::from(mu.len()));
        l.insert(nu.clone(), BigInt::from(nu.len()));
        d.insert(nu.clone(), BigInt::from(nu.len() as i64 - mu.len() as i64));
    }
    CocycleData {
        k: LocFun::from_map(a, k),
        l: LocFun::from_map(a, l),
        d: LocFun::from_map(a, d),
    }
}

/// `f ∘ τ`.
pub fn pullback_table(f: &LocFun, tau: &TableElement) -> LocFun {
    pullback_entries(f, tau.entries())
}

pub(crate) fn pullback_entries<'a>(f: &LocFun, entries: impl Iterator<Item = (&'a Word, &'a Word)>) -> LocFun {
    let mut map = BTreeMap::new();
    for (nu, mu) in entries {
        for (w, v) in f.restrict(mu) {
            map.insert(nu.concat(&w.suffix_from(mu.len())), v);
        }
    }
    LocFun::from_map(f.matrix(), map)
}

/// Table file format: a `table` header, then `ν -> μ` lines sorted by `ν`.
impl fmt::Display for TableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table")?;
        for (nu, mu) in &self.entries {
            writeln!(f, "{nu} -> {mu}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TableElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|(n, m)| format!("{n}->{m}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}
