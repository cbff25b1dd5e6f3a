#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rank1_core::{int, BimatrixGame, EquilibriumPoint, MixedStrategyPair, RMatrix, Rational};

pub fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize, lo: i64, hi: i64) -> RMatrix {
    let data = (0..m * n).map(|_| int(rng.gen_range(lo..=hi))).collect();
    RMatrix::from_vec(m, n, data).unwrap()
}

pub fn random_vec(rng: &mut ChaCha8Rng, k: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..k).map(|_| int(rng.gen_range(lo..=hi))).collect()
}

pub fn outer(b: &[Rational], c: &[Rational]) -> RMatrix {
    let data = b
        .iter()
        .flat_map(|bi| c.iter().map(move |cj| bi * cj))
        .collect();
    RMatrix::from_vec(b.len(), c.len(), data).unwrap()
}

/// `A` random, `B = b·cᵀ − A`, entries of `A`, `b`, `c` in `[−9, 9]`.
pub fn random_rank1(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BimatrixGame {
    let a = random_matrix(rng, m, n, -9, 9);
    let b = random_vec(rng, m, -9, 9);
    let c = random_vec(rng, n, -9, 9);
    let sum = outer(&b, &c);
    BimatrixGame::new(a.clone(), sum.add(&a.neg()).unwrap()).unwrap()
}

pub fn random_zero_sum(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BimatrixGame {
    let a = random_matrix(rng, m, n, -9, 9);
    BimatrixGame::new(a.clone(), a.neg()).unwrap()
}

pub fn strategies(eq: &[EquilibriumPoint]) -> Vec<MixedStrategyPair> {
    let mut s: Vec<_> = eq.iter().map(|e| e.strategies.clone()).collect();
    s.sort();
    s.dedup();
    s
}
