#![allow(dead_code)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cocycle_core::selftest::test_matrices;
use cocycle_core::sft::{Point, TransitionMatrix};

pub fn matrix(i: usize) -> TransitionMatrix {
    test_matrices().swap_remove(i % 3).1
}

pub fn golden() -> TransitionMatrix {
    matrix(0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A test matrix together with a seed for everything drawn over it.
pub fn setup() -> impl Strategy<Value = (TransitionMatrix, ChaCha8Rng)> {
    (0usize..3, any::<u64>()).prop_map(|(i, s)| (matrix(i), rng(s)))
}

pub fn points(a: &TransitionMatrix, len: usize) -> Vec<Point> {
    a.words(len).iter().map(|w| Point::representative(a, w)).collect()
}
