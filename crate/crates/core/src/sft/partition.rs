use std::collections::BTreeSet;
use std::ops::Bound;

use crate::error::{Error, Result};
use crate::sft::matrix::TransitionMatrix;
use crate::sft::point::Point;
use crate::sft::word::Word;

/// Finite partition of `X_A` into cylinder sets, stored as a sorted
/// prefix-free complete set of admissible words.
///
/// The trivial partition is `{ε}`; every other partition consists of nonempty
/// words.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CylinderPartition {
    parts: Vec<Word>,
}

/// First element of `set` that has `w` as a proper or improper prefix.
fn first_extension<'a>(set: &'a BTreeSet<Word>, w: &Word) -> Option<&'a Word> {
    set.range((Bound::Included(w), Bound::Unbounded))
        .next()
        .filter(|p| w.is_prefix_of(p))
}

/// Checks prefix-freeness and completeness of a sorted word set, returning a
/// description of the first defect.
pub(crate) fn check_antichain(a: &TransitionMatrix, set: &BTreeSet<Word>) -> std::result::Result<(), String> {
    if set.is_empty() {
        return Err("no parts".into());
    }
    for w in set {
        if !a.is_admissible(w.symbols()) {
            return Err(format!("{w} is not admissible"));
        }
    }
    if set.len() > 1 && set.contains(&Word::empty()) {
        return Err("the empty word overlaps every other part".into());
    }
    let v: Vec<&Word> = set.iter().collect();
    for pair in v.windows(2) {
        if pair[0].is_prefix_of(pair[1]) {
            return Err(format!("{} is a prefix of {}", pair[0], pair[1]));
        }
    }
    // tree exhaustion: every node either is a part or all its extensions
    // lead to parts
    let mut stack = vec![Word::empty()];
    while let Some(node) = stack.pop() {
        if set.contains(&node) {
            continue;
        }
        if first_extension(set, &node).is_none() {
            return Err(format!("cylinder {node} is not covered"));
        }
        for s in a.extensions(&node) {
            stack.push(node.pushed(s));
        }
    }
    Ok(())
}

impl CylinderPartition {
    pub fn new(a: &TransitionMatrix, words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for w in words {
            if !set.insert(w.clone()) {
                return Err(Error::NotPartition(format!("{w} occurs twice")));
            }
        }
        check_antichain(a, &set).map_err(Error::NotPartition)?;
        Ok(CylinderPartition {
            parts: set.into_iter().collect(),
        })
    }

    pub fn trivial() -> Self {
        CylinderPartition {
            parts: vec![Word::empty()],
        }
    }

    /// All admissible words of a fixed length `m ≥ 1`.
    pub fn uniform(a: &TransitionMatrix, m: usize) -> Self {
        CylinderPartition { parts: a.words(m) }
    }

    pub fn parts(&self) -> &[Word] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.parts.iter().map(Word::len).max().unwrap_or(0)
    }

    /// The part containing `x`.
    pub fn locate(&self, x: &Point) -> &Word {
        for len in 0..=self.depth() {
            let p = x.prefix(len);
            if let Ok(i) = self.parts.binary_search(&p) {
                return &self.parts[i];
            }
        }
        panic!("partition does not cover {x}")
    }

    /// Coarsest common refinement.
    pub fn refine(&self, other: &CylinderPartition) -> CylinderPartition {
        let mut out = BTreeSet::new();
        for p in &self.parts {
            for q in &other.parts {
                if q.is_prefix_of(p) {
                    out.insert(p.clone());
                } else if p.is_prefix_of(q) {
                    out.insert(q.clone());
                }
            }
        }
        CylinderPartition {
            parts: out.into_iter().collect(),
        }
    }

    /// True when every part lies inside some part of `coarser`.
    pub fn refines(&self, coarser: &CylinderPartition) -> bool {
        self.parts
            .iter()
            .all(|p| coarser.parts.iter().any(|q| q.is_prefix_of(p)))
    }

    /// One representative point per part.
    pub fn representatives(&self, a: &TransitionMatrix) -> Vec<Point> {
        self.parts.iter().map(|p| Point::representative(a, p)).collect()
    }
}

/// Nonempty words covering the complement of the union of the cylinders in
/// `taken` (which must be pairwise disjoint).
pub fn complement(a: &TransitionMatrix, taken: &[Word]) -> Vec<Word> {
    let set: BTreeSet<Word> = taken.iter().cloned().collect();
    let mut out = Vec::new();
    let mut stack: Vec<Word> = a.symbols().rev().map(Word::single).collect();
    while let Some(node) = stack.pop() {
        if set.contains(&node) {
            continue;
        }
        if first_extension(&set, &node).is_some() {
            for s in a.extensions(&node).into_iter().rev() {
                stack.push(node.pushed(s));
            }
        } else {
            out.push(node);
        }
    }
    out
}
