//! Reference implementations that share no code with the library kernels.
#![allow(dead_code)]

use boolforge::TruthTable;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dot(a: usize, x: usize) -> bool {
    (a & x).count_ones() & 1 == 1
}

/// `W(a) = sum_x (-1)^(f(x) xor a.x)`, straight from the definition.
pub fn naive_walsh(tt: &TruthTable) -> Vec<i64> {
    let size = tt.len();
    (0..size)
        .map(|a| {
            (0..size)
                .map(|x| if tt.get(x) ^ dot(a, x) { -1 } else { 1 })
                .sum()
        })
        .collect()
}

/// Minimum Hamming distance to the `2^(n+1)` affine functions.
pub fn brute_force_nl(tt: &TruthTable) -> u64 {
    let size = tt.len();
    let mut best = u64::MAX;
    for a in 0..size {
        let disagree = (0..size).filter(|&x| tt.get(x) != dot(a, x)).count() as u64;
        // The complement affine function disagrees everywhere else.
        best = best.min(disagree).min(size as u64 - disagree);
    }
    best
}

/// Rotation of an index read as an `n`-bit word, one position towards the
/// low end with wrap-around.
pub fn rotate(x: usize, n: usize) -> usize {
    (x >> 1) | ((x & 1) << (n - 1))
}

pub fn is_rotation_invariant(tt: &TruthTable) -> bool {
    let n = tt.n();
    (0..tt.len()).all(|x| tt.get(x) == tt.get(rotate(x, n)))
}

/// Lower median of integer values.
pub fn lower_median(values: &[u64]) -> u64 {
    let mut v = values.to_vec();
    v.sort_unstable();
    v[(v.len() - 1) / 2]
}
