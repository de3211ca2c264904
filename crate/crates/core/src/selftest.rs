//! Seeded property battery behind the `selftest` command.
//!
//! All randomness comes from one ChaCha8 stream seeded with the given seed,
//! so a report is a pure function of `(seed, cases)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cocycle::{gauge_weight, in_af_group, in_cocycle_group, rho, rho_entries};
use crate::coe::{
    check_transported_exponents, check_xihg, psi, pullback_map, random_conjugacy, random_twisted, CoeMap,
};
use crate::conjugacy::{check_witness, is_conjugacy, witness_non_conjugacy, DEFAULT_MAX_DEPTH, DEFAULT_MAX_LEVEL};
use crate::format::{parse_function, parse_point, parse_table};
use crate::locfun::LocFun;
use crate::sft::{Point, TransitionMatrix};
use crate::table::{cocycle_data_of, pullback_table, TableElement};

/// One line per property and matrix, then `ALL PASS` or a failure count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub cases: usize,
    pub lines: Vec<(String, String, usize, usize)>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| l.2 != l.3).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failures() == 0
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selftest seed={} cases={} prng=ChaCha8", self.seed, self.cases)?;
        for (name, matrix, ok, total) in &self.lines {
            let verdict = if ok == total { "PASS" } else { "FAIL" };
            writeln!(f, "{name:<20} {matrix:<3} {ok}/{total} {verdict}")?;
        }
        if self.all_pass() {
            writeln!(f, "ALL PASS")
        } else {
            writeln!(f, "FAILED {}", self.failures())
        }
    }
}

/// The three matrices the battery runs over.
pub fn test_matrices() -> Vec<(&'static str, TransitionMatrix)> {
    vec![
        ("G", TransitionMatrix::from_rows([[1, 1], [1, 0]]).unwrap()),
        ("F2", TransitionMatrix::from_rows([[1, 1], [1, 1]]).unwrap()),
        (
            "M3",
            TransitionMatrix::from_rows([[1, 1, 0], [0, 0, 1], [1, 1, 1]]).unwrap(),
        ),
    ]
}

type Property = fn(&TransitionMatrix, &mut ChaCha8Rng) -> bool;

fn group_laws(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let t1 = TableElement::random_with(a, 4, rng);
    let t2 = TableElement::random_with(a, 4, rng);
    let t3 = TableElement::random_with(a, 4, rng);
    let id = TableElement::identity(a);
    let z1 = rng.gen_range(1..=a.size() as u32);
    let swap_ok = a
        .successors(z1)
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|&z2| z2 != z1)
        .all(|z2| {
            let s = TableElement::prefix_swap(a, z1, z2).unwrap();
            s.compose(&s) == id
        });
    t3.compose(&t2).compose(&t1) == t3.compose(&t2.compose(&t1))
        && id.compose(&t1) == t1
        && t1.compose(&id) == t1
        && t1.compose(&t1.invert()) == id
        && t1.invert().compose(&t1) == id
        && swap_ok
}

fn cocycle_identity(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let f = LocFun::random(a, 3, rng);
    let t1 = TableElement::random_with(a, 3, rng);
    let t2 = TableElement::random_with(a, 3, rng);
    let chained = &rho(&f, &t1) + &pullback_table(&rho(&f, &t2), &t1);
    let inverse = -&pullback_table(&rho(&f, &t1), &t1.invert());
    rho(&f, &t2.compose(&t1)) == chained && rho(&f, &t1.invert()) == inverse
}

fn padding(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let f = LocFun::random(a, 3, rng);
    let t = TableElement::random_with(a, 3, rng);
    let p = rng.gen_range(1..=2);
    let padded = t.padded(p);
    let data = cocycle_data_of(a, padded.iter().map(|(n, m)| (n, m)));
    data.d == t.cocycle_data().d && rho_entries(&f, &padded) == rho(&f, &t)
}

fn af_membership(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let t = TableElement::random_with(a, 4, rng);
    in_cocycle_group(&t, &LocFun::constant(a, 1)) == in_af_group(&t)
}

fn gauge(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let f = LocFun::random(a, 2, rng);
    let t = TableElement::random_with(a, 3, rng);
    gauge_weight(&t, &f).is_zero() == in_cocycle_group(&t, &f)
}

fn literals(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let f = LocFun::random(a, 3, rng);
    let t = TableElement::random_with(a, 3, rng);
    let mu = a.words(rng.gen_range(0..4)).swap_remove(0);
    let x = Point::representative(a, &mu);
    parse_function(a, &f.to_string()).as_ref() == Ok(&f)
        && parse_table(a, &t.to_string()).as_ref() == Ok(&t)
        && parse_point(a, &x.to_string()).as_ref() == Ok(&x)
}

fn transfer(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let h = random_twisted(a, rng);
    let tau = TableElement::random_with(a, 3, rng);
    let g1 = LocFun::random(h.target(), 2, rng);
    let g2 = LocFun::random(h.target(), 2, rng);
    let coboundary = &g1 - &g1.compose_shift();
    let pulled = pullback_map(&g1, &h);
    psi(&h, &(&g1 + &g2)) == &psi(&h, &g1) + &psi(&h, &g2)
        && psi(&h, &coboundary) == &pulled - &pulled.compose_shift()
        && check_transported_exponents(&h, &tau)
        && check_xihg(&h, &tau, &g1)
}

fn conjugacy(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> bool {
    let c = CoeMap::from_code(random_conjugacy(a, rng));
    let genuine = is_conjugacy(&c) && witness_non_conjugacy(&c, DEFAULT_MAX_LEVEL, DEFAULT_MAX_DEPTH) == Ok(None);
    let h = random_twisted(a, rng);
    let twisted = match witness_non_conjugacy(&h, DEFAULT_MAX_LEVEL, DEFAULT_MAX_DEPTH) {
        Ok(None) => is_conjugacy(&h),
        Ok(Some(w)) => !is_conjugacy(&h) && check_witness(&h, &w),
        Err(_) => false,
    };
    genuine && twisted
}

/// Runs every property `cases` times per matrix; the orbit equivalence
/// properties run on a tenth of the cases.
pub fn run(seed: u64, cases: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heavy = cases.div_ceil(10);
    let properties: [(&str, Property, usize); 8] = [
        ("group-laws", group_laws, cases),
        ("cocycle-identity", cocycle_identity, cases),
        ("padding", padding, cases),
        ("af-membership", af_membership, cases),
        ("gauge-weight", gauge, cases),
        ("literals", literals, cases),
        ("transfer", transfer, heavy),
        ("conjugacy", conjugacy, heavy),
    ];
    let mut lines = Vec::new();
    for (mname, a) in test_matrices() {
        for (pname, prop, n) in properties {
            let ok = (0..n).filter(|_| prop(&a, &mut rng)).count();
            lines.push((pname.to_string(), mname.to_string(), ok, n));
        }
    }
    Report { seed, cases, lines }
}
