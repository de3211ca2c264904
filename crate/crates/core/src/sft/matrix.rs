use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sft::word::{Symbol, Word};

/// Irreducible, non-permutation 0/1 transition matrix. Symbols are `1..=n`.
/// Cloning is cheap; the rows are shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    n: usize,
    rows: Arc<Vec<Vec<bool>>>,
}

impl TransitionMatrix {
    pub fn ptr_eq(&self, other: &TransitionMatrix) -> bool {
        Arc::ptr_eq(&self.rows, &other.rows)
    }

    /// Validates an integer grid.
    pub fn new(grid: &[Vec<i64>]) -> Result<Self> {
        let n = grid.len();
        if n == 0 || grid.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let mut rows = vec![vec![false; n]; n];
        for (i, row) in grid.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                rows[i][j] = match v {
                    0 => false,
                    1 => true,
                    _ => {
                        return Err(Error::NotZeroOne {
                            row: i + 1,
                            col: j + 1,
                            value: v,
                        })
                    }
                };
            }
        }
        let m = TransitionMatrix {
            n,
            rows: Arc::new(rows),
        };
        m.check_irreducible()?;
        if m.rows.iter().all(|r| r.iter().filter(|&&b| b).count() == 1) {
            return Err(Error::Permutation);
        }
        Ok(m)
    }

    /// Convenience for literals in tests and examples.
    pub fn from_rows<const N: usize>(rows: [[i64; N]; N]) -> Result<Self> {
        let grid: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::new(&grid)
    }

    /// Every symbol reaches every symbol (itself included) by a path of
    /// positive length.
    fn check_irreducible(&self) -> Result<()> {
        for start in 1..=self.n as Symbol {
            let mut seen = vec![false; self.n + 1];
            let mut queue: VecDeque<Symbol> = self.successors(start).collect();
            for &s in &queue {
                seen[s as usize] = true;
            }
            while let Some(s) = queue.pop_front() {
                for t in self.successors(s) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        queue.push_back(t);
                    }
                }
            }
            if let Some(to) = (1..=self.n as Symbol).find(|&t| !seen[t as usize]) {
                return Err(Error::Reducible { from: start, to });
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> impl DoubleEndedIterator<Item = Symbol> {
        1..=self.n as Symbol
    }

    pub fn allowed(&self, a: Symbol, b: Symbol) -> bool {
        self.rows[a as usize - 1][b as usize - 1]
    }

    pub fn row(&self, a: Symbol) -> &[bool] {
        &self.rows[a as usize - 1]
    }

    pub fn successors(&self, a: Symbol) -> impl Iterator<Item = Symbol> + '_ {
        self.rows[a as usize - 1]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j as Symbol + 1)
    }

    pub fn out_degree(&self, a: Symbol) -> usize {
        self.row(a).iter().filter(|&&b| b).count()
    }

    /// Least symbol that may follow `a`.
    pub fn least_successor(&self, a: Symbol) -> Symbol {
        self.successors(a).next().expect("irreducible matrix has no sinks")
    }

    pub fn has_symbol(&self, s: Symbol) -> bool {
        s >= 1 && s as usize <= self.n
    }

    /// Symbols that may extend `w` by one position: all symbols for the empty
    /// word, the successors of the last symbol otherwise.
    pub fn extensions(&self, w: &Word) -> Vec<Symbol> {
        match w.last() {
            None => self.symbols().collect(),
            Some(a) => self.successors(a).collect(),
        }
    }

    pub fn is_admissible(&self, w: &[Symbol]) -> bool {
        w.iter().all(|&s| self.has_symbol(s)) && w.windows(2).all(|p| self.allowed(p[0], p[1]))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if let Some(&s) = w.symbols().iter().find(|&&s| !self.has_symbol(s)) {
            return Err(Error::BadSymbol(s));
        }
        if self.is_admissible(w.symbols()) {
            Ok(())
        } else {
            Err(Error::Inadmissible(w.clone()))
        }
    }

    /// Same row in the matrix, i.e. the same follower set.
    pub fn same_followers(&self, a: Symbol, b: Symbol) -> bool {
        self.row(a) == self.row(b)
    }

    /// All admissible words of length `m`, in lexicographic order.
    pub fn words(&self, m: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Word::empty();
        self.words_rec(m, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, m: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for s in self.extensions(cur) {
            cur.push(s);
            self.words_rec(m, cur, out);
            cur.pop();
        }
    }

    /// All admissible extensions `w·s` with `|s| = k`, in lexicographic order.
    pub fn extend_by(&self, w: &Word, k: usize) -> Vec<Word> {
        let mut layer = vec![w.clone()];
        for _ in 0..k {
            layer = layer
                .iter()
                .flat_map(|u| self.extensions(u).into_iter().map(move |s| u.pushed(s)))
                .collect();
        }
        layer
    }

    /// Symbols strictly between `a` and `b` on a shortest path `a -> ... -> b`
    /// of positive length.
    pub fn shortest_path(&self, a: Symbol, b: Symbol) -> Vec<Symbol> {
        if self.allowed(a, b) {
            return Vec::new();
        }
        // parent[s] = Some(p) for BFS tree edges, Some(0) when reached from `a`
        let mut parent: Vec<Option<Symbol>> = vec![None; self.n + 1];
        let mut queue = VecDeque::new();
        for s in self.successors(a) {
            parent[s as usize] = Some(0);
            queue.push_back(s);
        }
        while let Some(s) = queue.pop_front() {
            if self.allowed(s, b) {
                let mut path = vec![s];
                let mut cur = s;
                while let Some(p) = parent[cur as usize].filter(|&p| p != 0) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return path;
            }
            for t in self.successors(s) {
                if parent[t as usize].is_none() {
                    parent[t as usize] = Some(s);
                    queue.push_back(t);
                }
            }
        }
        unreachable!("irreducible matrix")
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "matrix {}", self.n)?;
        for row in self.rows.iter() {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect();
        write!(f, "TransitionMatrix[{}]", rows.join(","))
    }
}
