use std::fmt;

use crate::error::{Error, Result};
use crate::sft::matrix::TransitionMatrix;
use crate::sft::word::{parse_dotted, write_dotted, Symbol, Word};

/// Eventually periodic point `u·w^∞` in canonical form: `w` is primitive and
/// the transient part is as short as possible.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    transient: Vec<Symbol>,
    cycle: Vec<Symbol>,
}

fn primitive_root(w: &[Symbol]) -> &[Symbol] {
    let n = w.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]) {
            return &w[..p];
        }
    }
    w
}

impl Point {
    /// Canonical form of `u·w^∞`, checking admissibility against `a`.
    pub fn new(a: &TransitionMatrix, u: &Word, w: &Word) -> Result<Point> {
        if w.is_empty() {
            return Err(Error::EmptyCycle);
        }
        let mut unfolded = u.concat(w);
        unfolded.push(w.symbols()[0]);
        a.check_word(&unfolded)?;
        Ok(Self::canonical(u.symbols().to_vec(), w.symbols().to_vec()))
    }

    /// Canonicalizes without any admissibility check.
    pub(crate) fn canonical(mut u: Vec<Symbol>, w: Vec<Symbol>) -> Point {
        debug_assert!(!w.is_empty());
        let mut w = primitive_root(&w).to_vec();
        while let (Some(&lu), Some(&lw)) = (u.last(), w.last()) {
            if lu != lw {
                break;
            }
            u.pop();
            w.rotate_right(1);
        }
        Point { transient: u, cycle: w }
    }

    pub fn transient(&self) -> &[Symbol] {
        &self.transient
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        if i < self.transient.len() {
            self.transient[i]
        } else {
            self.cycle[(i - self.transient.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word::new((0..len).map(|i| self.symbol_at(i)).collect())
    }

    pub fn starts_with(&self, w: &Word) -> bool {
        w.symbols().iter().enumerate().all(|(i, &s)| self.symbol_at(i) == s)
    }

    pub fn shift(&self) -> Point {
        if self.transient.is_empty() {
            let mut w = self.cycle.clone();
            w.rotate_left(1);
            Point {
                transient: Vec::new(),
                cycle: w,
            }
        } else {
            Point {
                transient: self.transient[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    pub fn shift_by(&self, k: usize) -> Point {
        if k <= self.transient.len() {
            return Point {
                transient: self.transient[k..].to_vec(),
                cycle: self.cycle.clone(),
            };
        }
        let r = (k - self.transient.len()) % self.cycle.len();
        let mut w = self.cycle.clone();
        w.rotate_left(r);
        Point {
            transient: Vec::new(),
            cycle: w,
        }
    }

    /// `prefix · self`; the caller guarantees the junction is admissible.
    pub fn prepend(&self, prefix: &Word) -> Point {
        let mut u = prefix.symbols().to_vec();
        u.extend_from_slice(&self.transient);
        Self::canonical(u, self.cycle.clone())
    }

    /// Length of the primitive period.
    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_admissible(&self, a: &TransitionMatrix) -> bool {
        let mut w = self.transient.clone();
        w.extend_from_slice(&self.cycle);
        w.push(self.cycle[0]);
        a.is_admissible(&w)
    }

    /// Deterministic point of `U_mu`: after `mu`, keep appending the least
    /// admissible successor until a symbol repeats, then close the cycle there.
    pub fn representative(a: &TransitionMatrix, mu: &Word) -> Point {
        let mut seq: Vec<Symbol> = if mu.is_empty() { vec![1] } else { mu.symbols().to_vec() };
        let head = seq.len() - 1;
        let mut visited: Vec<Option<usize>> = vec![None; a.size() + 1];
        let mut pos = head;
        loop {
            let s = seq[pos];
            if let Some(start) = visited[s as usize] {
                let cycle = seq[start..pos].to_vec();
                seq.truncate(start);
                return Self::canonical(seq, cycle);
            }
            visited[s as usize] = Some(pos);
            seq.push(a.least_successor(s));
            pos += 1;
        }
    }

    /// Parses `u|w` with dot-separated symbols and checks it against `a`.
    pub fn parse(a: &TransitionMatrix, s: &str) -> Result<Point> {
        let bad = |msg: String| Error::Parse {
            line: 0,
            token: s.to_string(),
            message: msg,
        };
        let (u, w) = s
            .trim()
            .split_once('|')
            .ok_or_else(|| bad("point literal must look like `u|w`".into()))?;
        let u = parse_dotted(u).map_err(bad)?;
        let w = parse_dotted(w).map_err(bad)?;
        Point::new(a, &Word::new(u), &Word::new(w))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dotted(f, &self.transient)?;
        f.write_str("|")?;
        write_dotted(f, &self.cycle)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> TransitionMatrix {
        TransitionMatrix::from_rows([[1, 1], [1, 0]]).unwrap()
    }

    fn full() -> TransitionMatrix {
        TransitionMatrix::from_rows([[1, 1], [1, 1]]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// Two literals denote the same sequence iff their first `n` symbols agree
    /// for `n` beyond both preperiods plus a common multiple of the periods.
    fn same_sequence(x: &Point, y: &Point) -> bool {
        let n = x.transient().len() + y.transient().len() + 2 * x.period() * y.period();
        x.prefix(n) == y.prefix(n)
    }

    #[test]
    fn canonical_forms() {
        let f = full();
        let p = Point::new(&f, &w("1"), &w("2.1")).unwrap();
        assert_eq!(p.to_string(), "|1.2");
        let unfolded = Point::canonical(vec![1], vec![2, 1]);
        assert_eq!(unfolded.prefix(6), w("1.2.1.2.1.2"));
        assert_eq!(
            Point::new(&f, &Word::empty(), &w("1.2.1.2")).unwrap().to_string(),
            "|1.2"
        );
        let p = Point::new(&g(), &w("2"), &w("1.1")).unwrap();
        assert_eq!(p.to_string(), "2|1");
        assert!(matches!(
            Point::new(&g(), &w("2"), &w("2")),
            Err(Error::Inadmissible(_))
        ));
        assert_eq!(Point::new(&g(), &w("1"), &Word::empty()), Err(Error::EmptyCycle));
    }

    #[test]
    fn shifting() {
        let a = g();
        assert_eq!(Point::parse(&a, "|1.2").unwrap().shift().to_string(), "|2.1");
        assert_eq!(Point::parse(&a, "2|1").unwrap().shift().to_string(), "|1");
        assert_eq!(Point::parse(&a, "|1").unwrap().shift().to_string(), "|1");
        let p = Point::parse(&a, "2.1.1.2|1.2").unwrap();
        assert_eq!(p.to_string(), "2.1|1.2");
        for k in 0..8 {
            let mut q = p.clone();
            for _ in 0..k {
                q = q.shift();
            }
            assert_eq!(q, p.shift_by(k));
        }
    }

    #[test]
    fn representatives() {
        assert_eq!(Point::representative(&g(), &w("1.2")).to_string(), "1.2|1");
        assert_eq!(Point::representative(&g(), &Word::empty()).to_string(), "|1");
        assert_eq!(Point::representative(&full(), &w("2")).to_string(), "2|1");
        let m3 = TransitionMatrix::from_rows([[0, 1, 0], [0, 0, 1], [1, 1, 0]]).unwrap();
        let r = Point::representative(&m3, &w("3"));
        assert!(r.starts_with(&w("3")) && r.is_admissible(&m3));
    }

    #[test]
    fn canonical_detects_equal_sequences() {
        let f = full();
        let cases = [
            ("1", "2.1"),
            ("", "1.2"),
            ("1.2.1", "2.1"),
            ("2", "2"),
            ("2.2.2", "2.2"),
        ];
        for (u1, w1) in cases {
            for (u2, w2) in cases {
                let parse = |s: &str| if s.is_empty() { Word::empty() } else { w(s) };
                let x = Point::new(&f, &parse(u1), &parse(w1)).unwrap();
                let y = Point::new(&f, &parse(u2), &parse(w2)).unwrap();
                assert_eq!(x == y, same_sequence(&x, &y), "{u1}|{w1} vs {u2}|{w2}");
            }
        }
    }
}
