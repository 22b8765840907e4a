//! Deterministic inputs shared by the benchmarks.

use boolforge::evolution::{EvoRng, Problem};
use boolforge::gp::{ramped_half_and_half, GpConfig, SyntaxTree, TreeMode};
use boolforge::TruthTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_table(n: usize, seed: u64) -> TruthTable {
    TruthTable::random(n, &mut rng(seed)).expect("supported n")
}

/// Ramped half-and-half trees over `vars` variables.
pub fn random_trees(vars: usize, count: usize, seed: u64) -> Vec<SyntaxTree> {
    let mut r = rng(seed);
    let cfg = GpConfig::default();
    (0..count)
        .map(|_| ramped_half_and_half(TreeMode::Direct { vars }, &cfg, &mut r))
        .collect()
}

pub fn random_genotypes<P: Problem>(p: &P, count: usize, seed: u64) -> Vec<P::Genotype> {
    let mut r = EvoRng::seed_from_u64(seed);
    (0..count).map(|_| p.random_genotype(&mut r)).collect()
}
