use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::sft::{HigherBlock, Point, Symbol, TransitionMatrix, Word};

/// A sliding block code `X_A -> X_B` with memory 0 and anticipation `m - 1`,
/// together with its inverse code: a topological conjugacy.
#[derive(Clone, PartialEq, Eq)]
pub struct BlockCode {
    source: TransitionMatrix,
    target: TransitionMatrix,
    m: usize,
    phi: HashMap<Word, Symbol>,
    m_inv: usize,
    phi_inv: HashMap<Word, Symbol>,
}

fn check_map(from: &TransitionMatrix, to: &TransitionMatrix, m: usize, map: &HashMap<Word, Symbol>) -> Result<()> {
    if m == 0 {
        return Err(Error::NotAdmissibleImage("window length must be positive".into()));
    }
    let windows = from.words(m);
    for w in &windows {
        match map.get(w) {
            None => return Err(Error::MissingWindow(w.clone())),
            Some(&s) if !to.has_symbol(s) => {
                return Err(Error::NotAdmissibleImage(format!("{w} -> {s}: no such symbol")))
            }
            Some(_) => {}
        }
    }
    if map.len() != windows.len() {
        let extra = map
            .keys()
            .find(|w| w.len() != m || !from.is_admissible(w.symbols()))
            .unwrap();
        return Err(Error::NotAdmissibleImage(format!(
            "{extra} is not an admissible window of length {m}"
        )));
    }
    for w in from.words(m + 1) {
        let (s, t) = (map[&w.prefix(m)], map[&w.suffix_from(1)]);
        if !to.allowed(s, t) {
            return Err(Error::NotAdmissibleImage(format!("{w} encodes to {s}.{t}")));
        }
    }
    Ok(())
}

fn encode_with(map: &HashMap<Word, Symbol>, m: usize, w: &Word) -> Word {
    if w.len() < m {
        return Word::empty();
    }
    Word::new(w.symbols().windows(m).map(|b| map[&Word::from(b)]).collect())
}

fn encode_point_with(map: &HashMap<Word, Symbol>, m: usize, x: &Point) -> Point {
    let u = x.transient().len();
    let p = x.period();
    let sym = |i: usize| map[&x.prefix(i + m).suffix_from(i)];
    Point::canonical((0..u).map(sym).collect(), (u..u + p).map(sym).collect())
}

impl BlockCode {
    /// Validates the pair of block maps exactly: both are total on admissible
    /// windows, produce admissible outputs, and invert each other on every
    /// window long enough to determine a round trip.
    pub fn new(
        source: &TransitionMatrix,
        target: &TransitionMatrix,
        m: usize,
        phi: HashMap<Word, Symbol>,
        m_inv: usize,
        phi_inv: HashMap<Word, Symbol>,
    ) -> Result<BlockCode> {
        check_map(source, target, m, &phi)?;
        check_map(target, source, m_inv, &phi_inv)?;
        for u in source.words(m + m_inv - 1) {
            let v = encode_with(&phi, m, &u);
            if phi_inv[&v] != u.symbols()[0] {
                return Err(Error::NotInverse(u));
            }
        }
        for v in target.words(m + m_inv - 1) {
            let u = encode_with(&phi_inv, m_inv, &v);
            if phi[&u] != v.symbols()[0] {
                return Err(Error::NotInverse(v));
            }
        }
        Ok(BlockCode {
            source: source.clone(),
            target: target.clone(),
            m,
            phi,
            m_inv,
            phi_inv,
        })
    }

    pub fn identity(a: &TransitionMatrix) -> BlockCode {
        let phi: HashMap<Word, Symbol> = a.symbols().map(|s| (Word::single(s), s)).collect();
        BlockCode {
            source: a.clone(),
            target: a.clone(),
            m: 1,
            phi: phi.clone(),
            m_inv: 1,
            phi_inv: phi,
        }
    }

    /// Renames symbol `s` to `perm[s - 1]`; the target matrix is permuted
    /// accordingly.
    pub fn relabel(a: &TransitionMatrix, perm: &[Symbol]) -> Result<BlockCode> {
        let n = a.size();
        let mut seen = vec![false; n + 1];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p == 0 || p as usize > n || std::mem::replace(&mut seen[p as usize], true))
        {
            return Err(Error::NotInverse(Word::new(perm.to_vec())));
        }
        let mut grid = vec![vec![0i64; n]; n];
        for i in a.symbols() {
            for j in a.symbols() {
                if a.allowed(i, j) {
                    grid[perm[i as usize - 1] as usize - 1][perm[j as usize - 1] as usize - 1] = 1;
                }
            }
        }
        let b = TransitionMatrix::new(&grid)?;
        let phi = a.symbols().map(|s| (Word::single(s), perm[s as usize - 1])).collect();
        let phi_inv = a.symbols().map(|s| (Word::single(perm[s as usize - 1]), s)).collect();
        BlockCode::new(a, &b, 1, phi, 1, phi_inv)
    }

    /// The conjugacy `X_A -> X_{A^[m]}` onto the `m`-block presentation.
    pub fn higher_block(a: &TransitionMatrix, m: usize) -> BlockCode {
        let hb = HigherBlock::new(a, m);
        let phi = hb
            .blocks()
            .iter()
            .map(|w| (w.clone(), hb.symbol_of(w).unwrap()))
            .collect();
        let phi_inv = hb
            .blocks()
            .iter()
            .map(|w| (Word::single(hb.symbol_of(w).unwrap()), w.symbols()[0]))
            .collect();
        BlockCode {
            source: a.clone(),
            target: hb.matrix().clone(),
            m,
            phi,
            m_inv: 1,
            phi_inv,
        }
    }

    pub fn source(&self) -> &TransitionMatrix {
        &self.source
    }

    pub fn target(&self) -> &TransitionMatrix {
        &self.target
    }

    pub fn window(&self) -> usize {
        self.m
    }

    pub fn inverse_window(&self) -> usize {
        self.m_inv
    }

    /// Image symbol of an admissible window of length `m`.
    pub fn symbol(&self, window: &Word) -> Symbol {
        self.phi[window]
    }

    /// Block map sorted by window, for printing.
    pub fn map(&self) -> BTreeMap<Word, Symbol> {
        self.phi.iter().map(|(w, &s)| (w.clone(), s)).collect()
    }

    pub fn inverse_map(&self) -> BTreeMap<Word, Symbol> {
        self.phi_inv.iter().map(|(w, &s)| (w.clone(), s)).collect()
    }

    /// Encodes a word of length `L ≥ m` to a word of length `L - m + 1`.
    pub fn encode_word(&self, w: &Word) -> Word {
        encode_with(&self.phi, self.m, w)
    }

    pub fn decode_word(&self, w: &Word) -> Word {
        encode_with(&self.phi_inv, self.m_inv, w)
    }

    pub fn encode(&self, x: &Point) -> Point {
        encode_point_with(&self.phi, self.m, x)
    }

    pub fn decode(&self, y: &Point) -> Point {
        encode_point_with(&self.phi_inv, self.m_inv, y)
    }

    pub fn inverse(&self) -> BlockCode {
        BlockCode {
            source: self.target.clone(),
            target: self.source.clone(),
            m: self.m_inv,
            phi: self.phi_inv.clone(),
            m_inv: self.m,
            phi_inv: self.phi.clone(),
        }
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &BlockCode) -> Result<BlockCode> {
        if self.target != then.source {
            return Err(Error::IncompatibleChain(
                "code target does not match the next code's source".into(),
            ));
        }
        let m = self.m + then.m - 1;
        let phi = self
            .source
            .words(m)
            .into_iter()
            .map(|w| {
                let s = then.phi[&self.encode_word(&w)];
                (w, s)
            })
            .collect();
        let m_inv = self.m_inv + then.m_inv - 1;
        let phi_inv = then
            .target
            .words(m_inv)
            .into_iter()
            .map(|w| {
                let s = self.phi_inv[&then.decode_word(&w)];
                (w, s)
            })
            .collect();
        BlockCode::new(&self.source, &then.target, m, phi, m_inv, phi_inv)
    }
}

fn write_map(f: &mut fmt::Formatter<'_>, map: &BTreeMap<Word, Symbol>) -> fmt::Result {
    f.write_str("{")?;
    for (w, s) in map {
        write!(f, " {w} -> {s}")?;
    }
    f.write_str(" }")
}

/// The `code` stage syntax of the chain file format.
impl fmt::Display for BlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "code {} ", self.m)?;
        write_map(f, &self.map())?;
        write!(f, " inverse {} ", self.m_inv)?;
        write_map(f, &self.inverse_map())
    }
}

impl fmt::Debug for BlockCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockCode({self})")
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

    fn check_round_trips(c: &BlockCode) {
        let depth = c.window() + c.inverse_window() + 1;
        for word in c.source().words(depth) {
            let x = Point::representative(c.source(), &word);
            let y = c.encode(&x);
            assert!(y.is_admissible(c.target()));
            assert_eq!(c.decode(&y), x);
            assert_eq!(c.encode(&x.shift()), y.shift());
        }
    }

    #[test]
    fn constructions() {
        let a = g();
        let id = BlockCode::identity(&a);
        assert_eq!(
            BlockCode::new(&a, &a, 1, id.phi.clone(), 1, id.phi_inv.clone()).unwrap(),
            id
        );
        check_round_trips(&id);

        let f = full();
        let swap = BlockCode::relabel(&f, &[2, 1]).unwrap();
        assert_eq!(swap.target(), &f);
        assert_eq!(swap.encode(&Point::parse(&f, "|1").unwrap()).to_string(), "|2");
        check_round_trips(&swap);

        let hb = BlockCode::higher_block(&a, 2);
        let rebuilt = BlockCode::new(&a, hb.target(), 2, hb.phi.clone(), 1, hb.phi_inv.clone()).unwrap();
        assert_eq!(rebuilt, hb);
        check_round_trips(&hb);
    }

    #[test]
    fn rejections() {
        let a = g();
        let mut phi: HashMap<Word, Symbol> = HashMap::new();
        phi.insert(w("1"), 1);
        let inv: HashMap<Word, Symbol> = [(w("1"), 1), (w("2"), 2)].into_iter().collect();
        assert_eq!(
            BlockCode::new(&a, &a, 1, phi, 1, inv.clone()),
            Err(Error::MissingWindow(w("2")))
        );
        // 1 <-> 2 is not an automorphism of the golden mean graph
        let swap: HashMap<Word, Symbol> = [(w("1"), 2), (w("2"), 1)].into_iter().collect();
        assert!(matches!(
            BlockCode::new(&a, &a, 1, swap.clone(), 1, swap),
            Err(Error::NotAdmissibleImage(_))
        ));
        let f = full();
        let collapse: HashMap<Word, Symbol> = [(w("1"), 1), (w("2"), 1)].into_iter().collect();
        assert!(matches!(
            BlockCode::new(&f, &f, 1, collapse, 1, inv),
            Err(Error::NotInverse(_))
        ));
    }

    #[test]
    fn composition() {
        let m3 = TransitionMatrix::from_rows([[1, 1, 0], [0, 0, 1], [1, 1, 1]]).unwrap();
        for a in [g(), full(), m3] {
            let hb2 = BlockCode::higher_block(&a, 2);
            let hb3 = BlockCode::higher_block(hb2.target(), 2);
            let c = hb2.then(&hb3).unwrap();
            assert_eq!(c.window(), 3);
            check_round_trips(&c);
            let back = c.then(&c.inverse()).unwrap();
            for word in a.words(4) {
                let x = Point::representative(&a, &word);
                assert_eq!(back.encode(&x), x);
            }
        }
    }
}
