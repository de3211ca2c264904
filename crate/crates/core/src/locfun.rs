//! Integer-valued locally constant functions on `X_A`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::sft::{check_antichain, complement, CylinderPartition, Point, TransitionMatrix, Word};

/// A locally constant function `X_A -> Z`, stored as values on a complete
/// cylinder partition in canonical (maximally merged) form.
///
/// Because the form is canonical, structural equality is equality of
/// functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocFun {
    matrix: TransitionMatrix,
    parts: BTreeMap<Word, BigInt>,
}

/// Part of a prefix-free map whose word is a prefix of `w`.
pub(crate) fn find_prefix<'a, V>(map: &'a BTreeMap<Word, V>, w: &Word) -> Option<(&'a Word, &'a V)> {
    map.range(..=w).next_back().filter(|(p, _)| p.is_prefix_of(w))
}

fn merge_rec(
    a: &TransitionMatrix,
    map: &BTreeMap<Word, BigInt>,
    node: &Word,
    out: &mut BTreeMap<Word, BigInt>,
) -> Option<BigInt> {
    if let Some(v) = map.get(node) {
        return Some(v.clone());
    }
    let children: Vec<(Word, Option<BigInt>)> = a
        .extensions(node)
        .into_iter()
        .map(|s| {
            let c = node.pushed(s);
            let v = merge_rec(a, map, &c, out);
            (c, v)
        })
        .collect();
    if let Some(Some(v0)) = children.first().map(|c| c.1.as_ref()) {
        if children.iter().all(|c| c.1.as_ref() == Some(v0)) {
            return Some(v0.clone());
        }
    }
    for (c, v) in children {
        if let Some(v) = v {
            out.insert(c, v);
        }
    }
    None
}

impl LocFun {
    /// Builds a function from `(word, value)` pairs forming a complete
    /// antichain.
    pub fn new(a: &TransitionMatrix, entries: impl IntoIterator<Item = (Word, BigInt)>) -> Result<LocFun> {
        let mut map = BTreeMap::new();
        for (w, v) in entries {
            if map.insert(w.clone(), v).is_some() {
                return Err(Error::NotPartition(format!("{w} occurs twice")));
            }
        }
        let keys = map.keys().cloned().collect();
        check_antichain(a, &keys).map_err(Error::NotPartition)?;
        Ok(Self::from_map(a, map))
    }

    /// Canonicalizes a map that is already known to be a complete antichain.
    pub(crate) fn from_map(a: &TransitionMatrix, map: BTreeMap<Word, BigInt>) -> LocFun {
        let mut parts = BTreeMap::new();
        if let Some(v) = merge_rec(a, &map, &Word::empty(), &mut parts) {
            parts.insert(Word::empty(), v);
        }
        LocFun {
            matrix: a.clone(),
            parts,
        }
    }

    /// Builds a function by exploring the prefix tree: `leaf(w)` returns the
    /// value when the function is constant on `U_w`, and `None` to descend.
    pub fn tabulate(a: &TransitionMatrix, mut leaf: impl FnMut(&Word) -> Option<BigInt>) -> LocFun {
        let mut map = BTreeMap::new();
        let mut stack = vec![Word::empty()];
        while let Some(node) = stack.pop() {
            match leaf(&node) {
                Some(v) => {
                    map.insert(node, v);
                }
                None => {
                    for s in a.extensions(&node) {
                        stack.push(node.pushed(s));
                    }
                }
            }
        }
        Self::from_map(a, map)
    }

    pub fn constant(a: &TransitionMatrix, c: impl Into<BigInt>) -> LocFun {
        let mut parts = BTreeMap::new();
        parts.insert(Word::empty(), c.into());
        LocFun {
            matrix: a.clone(),
            parts,
        }
    }

    pub fn zero(a: &TransitionMatrix) -> LocFun {
        Self::constant(a, 0)
    }

    /// Characteristic function of the cylinder `U_w`.
    pub fn indicator(a: &TransitionMatrix, w: &Word) -> Result<LocFun> {
        a.check_word(w)?;
        let mut map: BTreeMap<Word, BigInt> = complement(a, std::slice::from_ref(w))
            .into_iter()
            .map(|c| (c, BigInt::zero()))
            .collect();
        map.insert(w.clone(), BigInt::from(1));
        Ok(Self::from_map(a, map))
    }

    /// Glues functions given on the cylinders of a partition: on `U_w` the
    /// result agrees with the function attached to `w`.
    pub fn piecewise(a: &TransitionMatrix, pieces: &BTreeMap<Word, LocFun>) -> LocFun {
        Self::tabulate(a, |node| match find_prefix(pieces, node) {
            Some((_, f)) => f.value_on(node).cloned(),
            None => None,
        })
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    /// `(word, value)` pairs of the canonical form, sorted by word.
    pub fn parts(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.parts.iter()
    }

    pub fn partition(&self) -> CylinderPartition {
        CylinderPartition::new(&self.matrix, self.parts.keys().cloned()).expect("canonical parts")
    }

    pub fn depth(&self) -> usize {
        self.parts.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &Point) -> BigInt {
        for len in 0..=self.depth() {
            if let Some(v) = self.parts.get(&x.prefix(len)) {
                return v.clone();
            }
        }
        unreachable!("complete partition covers {x}")
    }

    /// The value on `U_w` when the function is constant there.
    pub fn value_on(&self, w: &Word) -> Option<&BigInt> {
        find_prefix(&self.parts, w).map(|(_, v)| v)
    }

    /// Parts of the function inside `U_w`, as full words with values.
    pub fn restrict(&self, w: &Word) -> Vec<(Word, BigInt)> {
        if let Some(v) = self.value_on(w) {
            return vec![(w.clone(), v.clone())];
        }
        self.parts
            .range(w..)
            .take_while(|(p, _)| w.is_prefix_of(p))
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect()
    }

    pub fn constant_value(&self) -> Option<&BigInt> {
        self.parts.get(&Word::empty())
    }

    pub fn is_zero(&self) -> bool {
        self.constant_value().is_some_and(Zero::is_zero)
    }

    /// First part (in sorted order) with a nonzero value.
    pub fn first_nonzero(&self) -> Option<&Word> {
        self.parts.iter().find(|(_, v)| !v.is_zero()).map(|(w, _)| w)
    }

    pub fn min_value(&self) -> &BigInt {
        self.parts.values().min().expect("nonempty")
    }

    pub fn values(&self) -> impl Iterator<Item = &BigInt> {
        self.parts.values()
    }

    fn check_same(&self, other: &LocFun) {
        assert_eq!(self.matrix, other.matrix, "functions live on different shift spaces");
    }

    /// Pointwise combination on the common refinement.
    pub fn zip_with(&self, other: &LocFun, op: impl Fn(&BigInt, &BigInt) -> BigInt) -> LocFun {
        self.check_same(other);
        Self::tabulate(&self.matrix, |w| Some(op(self.value_on(w)?, other.value_on(w)?)))
    }

    pub fn map_values(&self, op: impl Fn(&BigInt) -> BigInt) -> LocFun {
        Self::from_map(
            &self.matrix,
            self.parts.iter().map(|(w, v)| (w.clone(), op(v))).collect(),
        )
    }

    /// `a·f + b·g`.
    pub fn linear(a: impl Into<BigInt>, f: &LocFun, b: impl Into<BigInt>, g: &LocFun) -> LocFun {
        let (a, b) = (a.into(), b.into());
        f.zip_with(g, |x, y| &a * x + &b * y)
    }

    /// `f ∘ σ_A`.
    pub fn compose_shift(&self) -> LocFun {
        if self.constant_value().is_some() {
            return self.clone();
        }
        Self::tabulate(&self.matrix, |w| {
            if w.is_empty() {
                None
            } else {
                self.value_on(&w.suffix_from(1)).cloned()
            }
        })
    }

    /// `f ∘ σ_A^m`.
    pub fn compose_shift_pow(&self, m: usize) -> LocFun {
        let mut r = self.clone();
        for _ in 0..m {
            r = r.compose_shift();
        }
        r
    }

    /// `f^n = Σ_{i<n} f∘σ^i` for a constant `n`.
    pub fn birkhoff_const(&self, n: usize) -> LocFun {
        let mut acc = LocFun::zero(&self.matrix);
        for _ in 0..n {
            acc = self + &acc.compose_shift();
        }
        acc
    }

    /// `x ↦ f^{n(x)}(x)` for a nonnegative locally constant exponent `n`.
    pub fn birkhoff(&self, n: &LocFun) -> Result<LocFun> {
        self.check_same(n);
        if let Some(v) = n.values().find(|v| v.is_negative()) {
            return Err(Error::NegativeExponent(v.to_string()));
        }
        let mut sums: HashMap<usize, LocFun> = HashMap::new();
        let mut exps: Vec<usize> = n.values().map(exponent).collect();
        exps.sort_unstable();
        exps.dedup();
        // F_{k+1} = f + F_k∘σ, built incrementally up to the largest exponent
        let mut acc = LocFun::zero(&self.matrix);
        let mut k = 0;
        for e in exps {
            while k < e {
                acc = self + &acc.compose_shift();
                k += 1;
            }
            sums.insert(e, acc.clone());
        }
        Ok(Self::tabulate(&self.matrix, |w| {
            let e = exponent(n.value_on(w)?);
            sums[&e].value_on(w).cloned()
        }))
    }

    /// Random function with parts of length at most `max_depth` and values
    /// in `-3..=3`.
    pub fn random<R: Rng>(a: &TransitionMatrix, max_depth: usize, rng: &mut R) -> LocFun {
        let mut map = BTreeMap::new();
        let mut stack = vec![Word::empty()];
        while let Some(node) = stack.pop() {
            if node.len() >= max_depth || (!node.is_empty() && rng.gen_bool(0.5)) {
                map.insert(node, BigInt::from(rng.gen_range(-3..=3)));
            } else {
                for s in a.extensions(&node) {
                    stack.push(node.pushed(s));
                }
            }
        }
        Self::from_map(a, map)
    }
}

fn exponent(v: &BigInt) -> usize {
    v.to_usize().expect("Birkhoff exponent out of range")
}

impl Add for &LocFun {
    type Output = LocFun;
    fn add(self, rhs: &LocFun) -> LocFun {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &LocFun {
    type Output = LocFun;
    fn sub(self, rhs: &LocFun) -> LocFun {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Neg for &LocFun {
    type Output = LocFun;
    fn neg(self) -> LocFun {
        self.map_values(|v| -v)
    }
}

impl Mul<&LocFun> for i64 {
    type Output = LocFun;
    fn mul(self, rhs: &LocFun) -> LocFun {
        rhs.map_values(|v| v * self)
    }
}

/// Function file format: a `function` header, then `word value` lines.
impl fmt::Display for LocFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "function")?;
        for (w, v) in &self.parts {
            writeln!(f, "{w} {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LocFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.parts.iter().map(|(w, v)| format!("{w}:{v}")).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g() -> TransitionMatrix {
        TransitionMatrix::from_rows([[1, 1], [1, 0]]).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fun(a: &TransitionMatrix, items: &[(&str, i64)]) -> LocFun {
        LocFun::new(a, items.iter().map(|&(s, v)| (w(s), BigInt::from(v)))).unwrap()
    }

    fn chi(a: &TransitionMatrix, s: &str) -> LocFun {
        LocFun::indicator(a, &w(s)).unwrap()
    }

    /// Independent oracle: the literal sum `Σ_{i<n} f(σ^i x)`.
    fn literal_sum(f: &LocFun, x: &Point, n: usize) -> BigInt {
        (0..n).map(|i| f.eval(&x.shift_by(i))).sum()
    }

    #[test]
    fn evaluation() {
        let a = g();
        let c2 = chi(&a, "2");
        assert_eq!(c2.eval(&Point::parse(&a, "|2.1").unwrap()), BigInt::from(1));
        assert_eq!(c2.eval(&Point::parse(&a, "|1").unwrap()), BigInt::from(0));
        assert_eq!(
            LocFun::constant(&a, 7).eval(&Point::parse(&a, "2|1").unwrap()),
            BigInt::from(7)
        );
    }

    #[test]
    fn canonical_merging() {
        let a = g();
        let f = fun(&a, &[("1.1", 5), ("1.2", 5), ("2", 5)]);
        assert_eq!(f, LocFun::constant(&a, 5));
        assert_eq!(f.to_string(), "function\n- 5\n");
        let h = fun(&a, &[("1.1", 0), ("1.2", 1), ("2.1", 0)]);
        assert_eq!(format!("{h:?}"), "{1.1:0, 1.2:1, 2:0}");
        assert!(LocFun::new(&a, [(w("1"), BigInt::from(1))]).is_err());
    }

    #[test]
    fn linear_combinations() {
        let a = g();
        let f = fun(&a, &[("1.1", 3), ("1.2", -1), ("2", 4)]);
        assert!(LocFun::linear(1, &f, -1, &f).is_zero());
        assert_eq!(&chi(&a, "1") + &chi(&a, "2"), LocFun::constant(&a, 1));
        let r = LocFun::linear(2, &chi(&a, "1.2"), 3, &chi(&a, "2"));
        assert_eq!(r, fun(&a, &[("1.1", 0), ("1.2", 2), ("2", 3)]));
    }

    #[test]
    fn shift_precomposition() {
        let a = g();
        let r = chi(&a, "2").compose_shift();
        assert_eq!(r, fun(&a, &[("1.1", 0), ("1.2", 1), ("2.1", 0)]));
        assert_eq!(r.eval(&Point::parse(&a, "|1.2").unwrap()), BigInt::from(1));
        assert_eq!(LocFun::constant(&a, 4).compose_shift(), LocFun::constant(&a, 4));
    }

    #[test]
    fn birkhoff_sums() {
        let a = g();
        let one = LocFun::constant(&a, 1);
        assert_eq!(one.birkhoff_const(3), LocFun::constant(&a, 3));
        let c1 = chi(&a, "1");
        assert_eq!(c1.birkhoff_const(2), fun(&a, &[("1.1", 2), ("1.2", 1), ("2.1", 1)]));
        assert!(c1.birkhoff_const(0).is_zero());
        let n = fun(&a, &[("1", 2), ("2", 0)]);
        assert_eq!(c1.birkhoff(&n).unwrap(), fun(&a, &[("1.1", 2), ("1.2", 1), ("2", 0)]));
        assert!(matches!(
            c1.birkhoff(&LocFun::constant(&a, -1)),
            Err(Error::NegativeExponent(_))
        ));
    }

    #[test]
    fn equality_on_refinements() {
        let a = g();
        assert_eq!(chi(&a, "1"), &chi(&a, "1.1") + &chi(&a, "1.2"));
        assert_ne!(chi(&a, "1"), chi(&a, "2"));
    }

    #[test]
    fn birkhoff_matches_literal_sums() {
        let m3 = TransitionMatrix::from_rows([[1, 1, 0], [0, 0, 1], [1, 1, 1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in [g(), m3] {
            for _ in 0..20 {
                let f = LocFun::random(&a, 3, &mut rng);
                let n = LocFun::random(&a, 2, &mut rng).map_values(|v| v.abs());
                let fn_ = f.birkhoff(&n).unwrap();
                for word in a.words(5) {
                    let x = Point::representative(&a, &word);
                    let e = n.eval(&x).to_usize().unwrap();
                    assert_eq!(fn_.eval(&x), literal_sum(&f, &x, e));
                }
            }
        }
    }
}
