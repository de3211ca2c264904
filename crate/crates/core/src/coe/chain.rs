use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::coe::code::BlockCode;
use crate::coe::transducer::Transducer;
use crate::error::{Error, Result};
use crate::locfun::LocFun;
use crate::sft::{Point, TransitionMatrix, Word};
use crate::table::TableElement;

/// One stage of a chain, applied in order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Stage {
    Table(TableElement),
    Code(BlockCode),
}

impl Stage {
    fn source(&self) -> &TransitionMatrix {
        match self {
            Stage::Table(t) => t.matrix(),
            Stage::Code(c) => c.source(),
        }
    }

    fn target(&self) -> &TransitionMatrix {
        match self {
            Stage::Table(t) => t.matrix(),
            Stage::Code(c) => c.target(),
        }
    }

    fn apply(&self, x: &Point) -> Point {
        match self {
            Stage::Table(t) => t.apply(x),
            Stage::Code(c) => c.encode(x),
        }
    }

    fn inverse(&self) -> Stage {
        match self {
            Stage::Table(t) => Stage::Table(t.invert()),
            Stage::Code(c) => Stage::Code(c.inverse()),
        }
    }
}

/// A continuous orbit equivalence `h: X_A -> X_B` given as a chain of table
/// and code stages, with its reduced form `h = T ∘ c` (a table over `B` after
/// a single conjugacy), the transducer normal form and the cocycle pair
/// `(k₁, l₁)` with `σ_B^{k₁(x)}(h(σ_A x)) = σ_B^{l₁(x)}(h(x))`.
#[derive(Clone)]
pub struct CoeMap {
    source: TransitionMatrix,
    target: TransitionMatrix,
    stages: Vec<Stage>,
    table: TableElement,
    code: Arc<BlockCode>,
    transducer: Transducer,
    shifted: Transducer,
    k1: LocFun,
    l1: LocFun,
}

/// Conjugates a table over the source of `code` to one over its target:
/// `c ∘ τ ∘ c^{-1}`.
pub fn conjugate_by_code(code: &BlockCode, tau: &TableElement) -> TableElement {
    assert_eq!(tau.matrix(), code.source(), "table is not over the code's source");
    let b = code.target();
    let m = code.window();
    let m_inv = code.inverse_window();
    let mut entries = Vec::new();
    let mut stack = vec![Word::empty()];
    while let Some(beta) = stack.pop() {
        let e = code.decode_word(&beta);
        if beta.len() >= m_inv {
            if let Some((nu, mu)) = tau.entry_for(&e) {
                if e.len() >= nu.len() + m - 1 {
                    let s = e.suffix_from(nu.len());
                    let head = code.encode_word(&mu.concat(&s));
                    let tail = beta.suffix_from(e.len() + 1 - m);
                    entries.push((beta, head.concat(&tail)));
                    continue;
                }
            }
        }
        for s in b.extensions(&beta) {
            stack.push(beta.pushed(s));
        }
    }
    TableElement::new(b, entries).expect("conjugated table is valid")
}

/// Removes the longest common suffix of two words.
fn cancel_suffix(a: &Word, b: &Word) -> (usize, usize) {
    let (x, y) = (a.symbols(), b.symbols());
    let mut common = 0;
    while common < x.len() && common < y.len() && x[x.len() - 1 - common] == y[y.len() - 1 - common] {
        common += 1;
    }
    (x.len() - common, y.len() - common)
}

impl CoeMap {
    /// Reduces a chain and computes its normal form and cocycle pair, checking
    /// the orbit relation at one representative per part.
    pub fn from_chain(stages: Vec<Stage>) -> Result<CoeMap> {
        let source = stages
            .first()
            .ok_or_else(|| Error::IncompatibleChain("empty chain".into()))?
            .source()
            .clone();
        let mut current = source.clone();
        let mut table = TableElement::identity(&source);
        let mut code = BlockCode::identity(&source);
        for (i, stage) in stages.iter().enumerate() {
            if stage.source() != &current {
                return Err(Error::IncompatibleChain(format!(
                    "stage {} expects a different shift space",
                    i + 1
                )));
            }
            match stage {
                Stage::Table(t) => table = t.compose(&table),
                Stage::Code(d) => {
                    table = conjugate_by_code(d, &table);
                    code = code.then(d)?;
                }
            }
            current = stage.target().clone();
        }
        Self::from_reduced(stages, table, Arc::new(code))
    }

    fn from_reduced(stages: Vec<Stage>, table: TableElement, code: Arc<BlockCode>) -> Result<CoeMap> {
        let transducer = Transducer::build(&table, code.clone());
        let shifted = transducer.pre_shift();
        let mut k1 = BTreeMap::new();
        let mut l1 = BTreeMap::new();
        let mut parts = Vec::new();
        for (w, direct, after_shift) in transducer.common_refinement(&shifted) {
            let (l, k) = cancel_suffix(&direct, &after_shift);
            k1.insert(w.clone(), BigInt::from(k));
            l1.insert(w.clone(), BigInt::from(l));
            parts.push(w);
        }
        let source = code.source().clone();
        let map = CoeMap {
            target: code.target().clone(),
            k1: LocFun::from_map(&source, k1),
            l1: LocFun::from_map(&source, l1),
            source,
            stages,
            table,
            code,
            transducer,
            shifted,
        };
        map.verify_orbit_relation(&parts)?;
        Ok(map)
    }

    fn verify_orbit_relation(&self, parts: &[Word]) -> Result<()> {
        if !self.transducer.relation_holds(&self.shifted, &self.k1, &self.l1) {
            return Err(Error::VerificationFailed("orbit relation on the normal form".into()));
        }
        for x in parts.iter().map(|w| Point::representative(&self.source, w)) {
            let k: usize = self.k1.eval(&x).try_into().unwrap();
            let l: usize = self.l1.eval(&x).try_into().unwrap();
            let hx = self.apply(&x);
            if self.apply(&x.shift()).shift_by(k) != hx.shift_by(l) || self.transducer.apply(&x) != hx {
                return Err(Error::VerificationFailed(format!("orbit relation at {x}")));
            }
        }
        Ok(())
    }

    pub fn identity(a: &TransitionMatrix) -> CoeMap {
        Self::from_chain(vec![Stage::Code(BlockCode::identity(a))]).expect("identity chain")
    }

    pub fn from_code(code: BlockCode) -> CoeMap {
        Self::from_chain(vec![Stage::Code(code)]).expect("code chain")
    }

    /// The table `τ` regarded as a self-map of `X_A`.
    pub fn from_table(tau: TableElement) -> CoeMap {
        let code = BlockCode::identity(tau.matrix());
        Self::from_chain(vec![Stage::Code(code), Stage::Table(tau)]).expect("table chain")
    }

    pub fn source(&self) -> &TransitionMatrix {
        &self.source
    }

    pub fn target(&self) -> &TransitionMatrix {
        &self.target
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// The table `T` of the reduced form `h = T ∘ c`.
    pub fn reduced_table(&self) -> &TableElement {
        &self.table
    }

    /// The core code `c` of the reduced form `h = T ∘ c`.
    pub fn core(&self) -> &Arc<BlockCode> {
        &self.code
    }

    pub fn transducer(&self) -> &Transducer {
        &self.transducer
    }

    /// Normal form of `h ∘ σ_A`.
    pub fn shifted(&self) -> &Transducer {
        &self.shifted
    }

    pub fn k1(&self) -> &LocFun {
        &self.k1
    }

    pub fn l1(&self) -> &LocFun {
        &self.l1
    }

    /// Stage-by-stage application.
    pub fn apply(&self, x: &Point) -> Point {
        self.stages.iter().fold(x.clone(), |p, s| s.apply(&p))
    }

    pub fn invert(&self) -> CoeMap {
        let stages = self.stages.iter().rev().map(Stage::inverse).collect();
        Self::from_chain(stages).expect("inverse of a valid chain")
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &CoeMap) -> Result<CoeMap> {
        let mut stages = self.stages.clone();
        stages.extend(then.stages.iter().cloned());
        Self::from_chain(stages)
    }

    /// `h ∘ e_m^{-1}`, the same map read on the `m`-block presentation of the
    /// source.
    pub fn recode_source(&self, m: usize) -> CoeMap {
        let e = BlockCode::higher_block(&self.source, m);
        let mut stages = vec![Stage::Code(e.inverse())];
        stages.extend(self.stages.iter().cloned());
        Self::from_chain(stages).expect("recoding a valid chain")
    }

    /// True when the chain contains no table stage.
    pub fn is_pure_code(&self) -> bool {
        self.stages.iter().all(|s| matches!(s, Stage::Code(_)))
    }
}

impl fmt::Debug for CoeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeMap({:?} then {:?})", self.code, self.table)
    }
}
