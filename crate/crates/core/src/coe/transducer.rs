use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::coe::code::BlockCode;
use crate::locfun::{find_prefix, LocFun};
use crate::sft::{Point, TransitionMatrix, Word};
use crate::table::TableElement;

/// Normal form of a map `h: X_A -> X_B` sharing a fixed core code `c` with
/// window `m`: entries `w -> α` over a complete antichain of `A`-words with
/// `|w| ≥ m - 1`, meaning `h(x) = α · c(σ^{|w|-m+1}(x))` on `U_w`.
///
/// The form is canonical for a fixed core, so two transducers with the same
/// core are equal as maps iff they are structurally equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Transducer {
    code: Arc<BlockCode>,
    entries: BTreeMap<Word, Word>,
}

impl Transducer {
    /// `T ∘ c`.
    pub fn build(table: &TableElement, code: Arc<BlockCode>) -> Transducer {
        assert_eq!(table.matrix(), code.target(), "table and code target differ");
        let a = code.source().clone();
        let m = code.window();
        let mut map = BTreeMap::new();
        let mut stack = a.words(m - 1);
        while let Some(w) = stack.pop() {
            let e = code.encode_word(&w);
            match table.entry_for(&e) {
                Some((nu, mu)) => {
                    map.insert(w, mu.concat(&e.suffix_from(nu.len())));
                }
                None => {
                    for s in a.extensions(&w) {
                        stack.push(w.pushed(s));
                    }
                }
            }
        }
        Self::from_map(code, map)
    }

    pub(crate) fn from_map(code: Arc<BlockCode>, map: BTreeMap<Word, Word>) -> Transducer {
        let mut entries = BTreeMap::new();
        let a = code.source().clone();
        let m = code.window();
        let mut roots = a.words(m - 1);
        roots.reverse();
        for root in roots {
            if let Some(alpha) = merge_rec(&code, &map, &root, &mut entries) {
                entries.insert(root, alpha);
            }
        }
        // a root may merge further only for m = 1, where the root is ε
        let t = Transducer { code, entries };
        debug_assert!(t.entries.keys().all(|w| w.len() + 1 >= m));
        t
    }

    pub fn code(&self) -> &Arc<BlockCode> {
        &self.code
    }

    pub fn source(&self) -> &TransitionMatrix {
        self.code.source()
    }

    pub fn target(&self) -> &TransitionMatrix {
        self.code.target()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.entries.iter()
    }

    fn m(&self) -> usize {
        self.code.window()
    }

    /// Output prefix for `U_w` when `w` lies below an entry: `h(x) = β ·
    /// c(σ^{|w|-m+1}(x))` on `U_w`.
    pub fn output_on(&self, w: &Word) -> Option<Word> {
        let (p, alpha) = find_prefix(&self.entries, w)?;
        let r = p.len() + 1 - self.m();
        Some(alpha.concat(&self.code.encode_word(&w.suffix_from(r))))
    }

    /// Entries covering `U_u`, refined so that every word extends `u` and has
    /// length at least `min_len`.
    pub fn restrict(&self, u: &Word, min_len: usize) -> Vec<(Word, Word)> {
        let a = self.source();
        let min_len = min_len.max(self.m() - 1);
        let mut out = Vec::new();
        let mut stack = vec![u.clone()];
        while let Some(w) = stack.pop() {
            if w.len() >= min_len {
                if let Some(beta) = self.output_on(&w) {
                    out.push((w, beta));
                    continue;
                }
            }
            for s in a.extensions(&w).into_iter().rev() {
                stack.push(w.pushed(s));
            }
        }
        out
    }

    pub fn apply(&self, x: &Point) -> Point {
        let depth = self.entries.keys().map(Word::len).max().unwrap_or(0);
        let (p, alpha) = find_prefix(&self.entries, &x.prefix(depth)).expect("complete domain");
        let r = p.len() + 1 - self.m();
        self.code.encode(&x.shift_by(r)).prepend(alpha)
    }

    /// `h ∘ σ_A`.
    pub fn pre_shift(&self) -> Transducer {
        let a = self.source();
        let mut map = BTreeMap::new();
        for (w, alpha) in &self.entries {
            let heads: Vec<_> = match w.first() {
                Some(f) => a.symbols().filter(|&s| a.allowed(s, f)).collect(),
                None => a.symbols().collect(),
            };
            for s in heads {
                map.insert(Word::single(s).concat(w), alpha.clone());
            }
        }
        Self::from_map(self.code.clone(), map)
    }

    /// `σ_B ∘ h`.
    pub fn post_shift(&self) -> Transducer {
        let mut map = BTreeMap::new();
        for (w, alpha) in &self.entries {
            if alpha.is_empty() {
                for (v, beta) in self.restrict(w, w.len() + 1) {
                    map.insert(v, beta.suffix_from(1));
                }
            } else {
                map.insert(w.clone(), alpha.suffix_from(1));
            }
        }
        Self::from_map(self.code.clone(), map)
    }

    /// `T ∘ h` for a table `T` over the target.
    pub fn post_table(&self, table: &TableElement) -> Transducer {
        let mut map = BTreeMap::new();
        for (w, alpha) in &self.entries {
            let mut stack = vec![(w.clone(), alpha.clone())];
            while let Some((v, beta)) = stack.pop() {
                if let Some(out) = table.apply_word(&beta) {
                    map.insert(v, out);
                } else {
                    for (v2, beta2) in self.restrict(&v, v.len() + 1) {
                        stack.push((v2, beta2));
                    }
                }
            }
        }
        Self::from_map(self.code.clone(), map)
    }

    /// `h ∘ τ` for a table `τ` over the source.
    pub fn pre_table(&self, tau: &TableElement) -> Transducer {
        let m = self.m();
        let mut map = BTreeMap::new();
        for (nu, mu) in tau.entries() {
            for (v, beta) in self.restrict(mu, mu.len() + m - 1) {
                map.insert(nu.concat(&v.suffix_from(mu.len())), beta);
            }
        }
        Self::from_map(self.code.clone(), map)
    }

    /// Parts of the common refinement of two same-core transducers, with the
    /// output prefixes of `self` and `other` on each part.
    pub fn common_refinement(&self, other: &Transducer) -> Vec<(Word, Word, Word)> {
        assert!(
            Arc::ptr_eq(&self.code, &other.code) || self.code == other.code,
            "different cores"
        );
        let a = self.source();
        let mut out = Vec::new();
        let mut stack = vec![Word::empty()];
        while let Some(w) = stack.pop() {
            if let (Some(b1), Some(b2)) = (self.output_on(&w), other.output_on(&w)) {
                out.push((w, b1, b2));
                continue;
            }
            for s in a.extensions(&w).into_iter().rev() {
                stack.push(w.pushed(s));
            }
        }
        out
    }

    /// Parts of the common refinement on which the two maps differ.
    pub fn compare(&self, other: &Transducer) -> Vec<Word> {
        self.common_refinement(other)
            .into_iter()
            .filter(|(_, b1, b2)| b1 != b2)
            .map(|(w, _, _)| w)
            .collect()
    }

    /// Exact check of `σ^{k(x)}(other(x)) = σ^{l(x)}(self(x))` for all `x`,
    /// where `other` is a same-core transducer.
    pub fn relation_holds(&self, other: &Transducer, k: &LocFun, l: &LocFun) -> bool {
        let a = self.source();
        let mut stack = vec![Word::empty()];
        while let Some(w) = stack.pop() {
            // both outputs continue with the same tail c(σ^{|w|-m+1}x); if
            // the tail sits at different offsets after shifting, equality
            // would force every point of the cylinder to be eventually
            // periodic
            let found = (|| {
                let b1 = self.output_on(&w)?;
                let b2 = other.output_on(&w)?;
                let kv = k.value_on(&w)?.to_usize()?;
                let lv = l.value_on(&w)?.to_usize()?;
                let (off1, off2) = (b1.len() as i64 - lv as i64, b2.len() as i64 - kv as i64);
                Some(off1 == off2 && (off1 < 0 || b2.suffix_from(kv) == b1.suffix_from(lv)))
            })();
            match found {
                Some(true) => {}
                Some(false) => return false,
                None => {
                    for s in a.extensions(&w) {
                        stack.push(w.pushed(s));
                    }
                }
            }
        }
        true
    }

    /// The set of length-`depth` prefixes of points of `h(U_u)`.
    pub fn prefixes(&self, u: &Word, depth: usize) -> BTreeSet<Word> {
        let a = self.source();
        let m = self.m();
        let mut out = BTreeSet::new();
        for (w, beta) in self.restrict(u, 0) {
            if beta.len() >= depth {
                out.insert(beta.prefix(depth));
                continue;
            }
            // the tail c(σ^r x) ranges over codes of all continuations of
            // the last m - 1 symbols of w
            let r = w.len() + 1 - m;
            let state = w.suffix_from(r);
            let need = depth - beta.len();
            let conts: Vec<Word> = if state.is_empty() {
                let starts: Vec<Word> = match w.last() {
                    Some(l) => a.successors(l).map(Word::single).collect(),
                    None => a.symbols().map(Word::single).collect(),
                };
                starts.into_iter().flat_map(|s| a.extend_by(&s, need + m - 2)).collect()
            } else {
                a.extend_by(&state, need)
            };
            for c in conts {
                out.insert(beta.concat(&self.code.encode_word(&c)));
            }
        }
        out
    }
}

/// Bottom-up canonical merge: a node collapses when every admissible child
/// `node·a` carries `α · Φ(window)` for one common `α`.
fn merge_rec(
    code: &BlockCode,
    map: &BTreeMap<Word, Word>,
    node: &Word,
    out: &mut BTreeMap<Word, Word>,
) -> Option<Word> {
    if let Some(alpha) = map.get(node) {
        return Some(alpha.clone());
    }
    let a = code.source();
    let m = code.window();
    let r = node.len() + 1 - m;
    let children: Vec<(Word, Option<Word>)> = a
        .extensions(node)
        .into_iter()
        .map(|s| {
            let c = node.pushed(s);
            let v = merge_rec(code, map, &c, out);
            (c, v)
        })
        .collect();
    let merged = (|| {
        let (c0, v0) = children.first()?;
        let v0 = v0.as_ref()?;
        let alpha = v0.prefix(v0.len().checked_sub(1)?);
        let fits = children.iter().all(|(c, v)| {
            v.as_ref()
                .is_some_and(|v| *v == alpha.pushed(code.symbol(&c.suffix_from(r))))
        });
        let _ = c0;
        fits.then_some(alpha)
    })();
    if merged.is_some() {
        return merged;
    }
    for (c, v) in children {
        if let Some(v) = v {
            out.insert(c, v);
        }
    }
    None
}

impl std::fmt::Debug for Transducer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.entries.iter().map(|(w, a)| format!("{w}=>{a}")).collect();
        write!(f, "Transducer[m={}]{{{}}}", self.m(), items.join(", "))
    }
}
