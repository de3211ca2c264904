use std::collections::HashMap;

use crate::sft::matrix::TransitionMatrix;
use crate::sft::point::Point;
use crate::sft::word::{Symbol, Word};

/// The `m`-block presentation `A^[m]`: its symbols are the admissible words
/// of length `m`, numbered from 1 in lexicographic order, and `w -> w'` is an
/// edge iff the two words overlap in `m - 1` symbols with admissible union.
#[derive(Clone, Debug)]
pub struct HigherBlock {
    source: TransitionMatrix,
    matrix: TransitionMatrix,
    m: usize,
    blocks: Vec<Word>,
    index: HashMap<Word, Symbol>,
}

impl HigherBlock {
    pub fn new(a: &TransitionMatrix, m: usize) -> HigherBlock {
        assert!(m >= 1, "block length must be positive");
        let blocks = a.words(m);
        let index: HashMap<Word, Symbol> = blocks
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as Symbol + 1))
            .collect();
        let grid: Vec<Vec<i64>> = blocks
            .iter()
            .map(|u| {
                blocks
                    .iter()
                    .map(|v| {
                        let overlap = u.symbols()[1..] == v.symbols()[..m - 1];
                        let joint = a.allowed(u.last().unwrap(), v.last().unwrap());
                        i64::from(overlap && joint)
                    })
                    .collect()
            })
            .collect();
        let matrix = TransitionMatrix::new(&grid).expect("higher block of a valid matrix is valid");
        HigherBlock {
            source: a.clone(),
            matrix,
            m,
            blocks,
            index,
        }
    }

    pub fn source(&self) -> &TransitionMatrix {
        &self.source
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }

    /// The block named by symbol `s` of `A^[m]`.
    pub fn block(&self, s: Symbol) -> &Word {
        &self.blocks[s as usize - 1]
    }

    pub fn symbol_of(&self, block: &Word) -> Option<Symbol> {
        self.index.get(block).copied()
    }

    /// Sliding encoding of a word of length `L ≥ m` to a word of length
    /// `L - m + 1`.
    pub fn encode_word(&self, w: &Word) -> Word {
        let s = w.symbols();
        if s.len() < self.m {
            return Word::empty();
        }
        Word::new(s.windows(self.m).map(|b| self.index[&Word::from(b)]).collect())
    }

    /// Inverse of [`encode_word`](Self::encode_word) on nonempty words.
    pub fn decode_word(&self, w: &Word) -> Word {
        let Some(first) = w.first() else {
            return Word::empty();
        };
        let mut out = self.block(first).clone();
        for &s in &w.symbols()[1..] {
            out.push(self.block(s).last().unwrap());
        }
        out
    }

    pub fn encode(&self, x: &Point) -> Point {
        let u = x.transient().len();
        let p = x.period();
        let sym = |i: usize| self.index[&Word::new((i..i + self.m).map(|j| x.symbol_at(j)).collect())];
        Point::canonical((0..u).map(sym).collect(), (u..u + p).map(sym).collect())
    }

    pub fn decode(&self, y: &Point) -> Point {
        let first = |s: Symbol| self.block(s).symbols()[0];
        Point::canonical(
            y.transient().iter().map(|&s| first(s)).collect(),
            y.cycle().iter().map(|&s| first(s)).collect(),
        )
    }
}
