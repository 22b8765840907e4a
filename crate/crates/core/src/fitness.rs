//! Nonlinearity plus a tie-breaking term that rewards spectra in which the
//! maximal absolute Walsh value occurs rarely.

use std::cmp::Ordering;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::boolfn::walsh::{max_abs_and_count, nonlinearity_from_max, transform_bits};
use crate::boolfn::TruthTable;
use crate::error::{Error, Result};
use crate::gp::{
    eval_into, ColumnSet, ConstructionContext, SyntaxTree, TreeScratch, SEEDS_PER_GROUP,
};

/// Group count used by the secondary-construction fitness.
pub const SEED_GROUPS: usize = 10;

/// An exact non-negative rational `numer / denom`.
///
/// For a single function of `n` variables the value is
/// `nl + (2^n - #max) / 2^n`, where `#max` counts the spectrum positions
/// attaining the maximal absolute value.
#[derive(Clone, Copy, Debug)]
pub struct FitnessValue {
    numer: u64,
    denom: u64,
}

impl FitnessValue {
    pub const ZERO: FitnessValue = FitnessValue { numer: 0, denom: 1 };

    pub fn from_spectrum_stats(n: usize, nl: u64, max_count: u64) -> Self {
        let size = 1u64 << n;
        debug_assert!(max_count >= 1 && max_count <= size);
        FitnessValue {
            numer: nl * size + (size - max_count),
            denom: size,
        }
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Config("fitness denominator must be positive".into()));
        }
        Ok(FitnessValue { numer, denom })
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Integer part; the nonlinearity for a single-function fitness.
    pub fn nl(&self) -> u64 {
        self.numer / self.denom
    }

    pub fn frac(&self) -> f64 {
        (self.numer % self.denom) as f64 / self.denom as f64
    }

    pub fn value(&self) -> f64 {
        self.nl() as f64 + self.frac()
    }

    /// Exact mean of values sharing one denominator.
    pub fn mean(values: &[FitnessValue]) -> Option<FitnessValue> {
        let first = values.first()?;
        if values.iter().any(|v| v.denom != first.denom) {
            return None;
        }
        let sum: u64 = values.iter().map(|v| v.numer).sum();
        Some(FitnessValue {
            numer: sum,
            denom: first.denom * values.len() as u64,
        })
    }
}

impl PartialEq for FitnessValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FitnessValue {}

impl PartialOrd for FitnessValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FitnessValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numer as u128 * other.denom as u128).cmp(&(other.numer as u128 * self.denom as u128))
    }
}

impl fmt::Display for FitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.value())
    }
}

/// Fitness of an already transformed spectrum of length `2^n`.
pub fn fitness_from_spectrum(n: usize, spectrum: &[i32]) -> FitnessValue {
    let (max, count) = max_abs_and_count(spectrum);
    FitnessValue::from_spectrum_stats(n, nonlinearity_from_max(n, max) as u64, count as u64)
}

/// Fitness of the function whose table is `bits`; `buf` is scratch.
#[inline]
pub(crate) fn score_bits(n: usize, bits: &Bits, buf: &mut Vec<i32>) -> FitnessValue {
    transform_bits(bits, buf);
    fitness_from_spectrum(n, buf)
}

/// Writes `out[x] = bits[map[x]]`, expanding per-orbit bits to a table.
pub(crate) fn expand_mapped(bits: &Bits, map: &[u32], out: &mut Bits) {
    let src = bits.words();
    for (word, chunk) in out.words_mut().iter_mut().zip(map.chunks(64)) {
        let mut acc = 0u64;
        for (b, &k) in chunk.iter().enumerate() {
            let k = k as usize;
            acc |= ((src[k >> 6] >> (k & 63)) & 1) << b;
        }
        *word = acc;
    }
}

pub fn fitness_nl(tt: &TruthTable) -> FitnessValue {
    score_bits(tt.n(), tt.bits(), &mut Vec::new())
}

/// Input columns for every seed group, built once and reused per tree.
#[derive(Clone, Debug)]
pub struct ConstructionFitness {
    out_n: usize,
    columns: Vec<ColumnSet>,
}

/// Reusable buffers for [`ConstructionFitness::evaluate_with`].
#[derive(Clone, Debug, Default)]
pub struct ConstructionScratch {
    tree: TreeScratch,
    out: Option<Bits>,
    signs: Vec<i32>,
}

impl ConstructionFitness {
    /// Requires exactly [`SEED_GROUPS`] groups of equal seed size.
    pub fn new(groups: &[ConstructionContext]) -> Result<Self> {
        if groups.len() != SEED_GROUPS {
            return Err(Error::Config(format!(
                "expected {SEED_GROUPS} seed groups, got {}",
                groups.len()
            )));
        }
        ConstructionFitness::with_any_group_count(groups)
    }

    pub fn with_any_group_count(groups: &[ConstructionContext]) -> Result<Self> {
        let first = groups
            .first()
            .ok_or_else(|| Error::Config("at least one seed group is required".into()))?;
        if let Some(g) = groups.iter().find(|g| g.n() != first.n()) {
            return Err(Error::LengthMismatch {
                expected: first.n(),
                actual: g.n(),
            });
        }
        Ok(ConstructionFitness {
            out_n: first.n() + 2,
            columns: groups.iter().map(ColumnSet::construction).collect(),
        })
    }

    /// Variable count of the constructed functions.
    pub fn output_n(&self) -> usize {
        self.out_n
    }

    pub fn group_count(&self) -> usize {
        self.columns.len()
    }

    pub fn check(&self, tree: &SyntaxTree) -> Result<()> {
        self.columns[0].check(tree)
    }

    pub fn evaluate(&self, tree: &SyntaxTree) -> Result<FitnessValue> {
        self.check(tree)?;
        Ok(self.evaluate_with(tree, &mut ConstructionScratch::default()))
    }

    /// Mean fitness over the groups. The tree must pass [`Self::check`].
    pub fn evaluate_with(
        &self,
        tree: &SyntaxTree,
        scratch: &mut ConstructionScratch,
    ) -> FitnessValue {
        let out = scratch
            .out
            .get_or_insert_with(|| Bits::zeros(1 << self.out_n));
        let mut sum = 0u64;
        for cols in &self.columns {
            eval_into(tree, cols, &mut scratch.tree, out);
            sum += score_bits(self.out_n, out, &mut scratch.signs).numer();
        }
        FitnessValue {
            numer: sum,
            denom: (1u64 << self.out_n) * self.columns.len() as u64,
        }
    }
}

/// Average fitness of the functions a construction tree builds from each
/// seed group. Exactly [`SEED_GROUPS`] groups are required.
pub fn fitness_construction(
    tree: &SyntaxTree,
    groups: &[ConstructionContext],
) -> Result<FitnessValue> {
    ConstructionFitness::new(groups)?.evaluate(tree)
}

/// `count` groups of four random balanced `n`-variable seeds from a
/// generator seeded with `seed`.
pub fn random_seed_groups(n: usize, count: usize, seed: u64) -> Result<Vec<ConstructionContext>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let seeds = (0..SEEDS_PER_GROUP)
                .map(|_| TruthTable::random_balanced(n, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            ConstructionContext::new(seeds)
        })
        .collect()
}

/// Reads seed groups from text: one truth table per non-empty line (binary
/// or hex, `#` starts a comment), consecutive runs of four forming a group.
pub fn parse_seed_groups(text: &str) -> Result<Vec<ConstructionContext>> {
    let tables = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse::<TruthTable>)
        .collect::<Result<Vec<_>>>()?;
    if tables.is_empty() || tables.len() % SEEDS_PER_GROUP != 0 {
        return Err(Error::Config(format!(
            "seed file holds {} tables, not a positive multiple of {SEEDS_PER_GROUP}",
            tables.len()
        )));
    }
    tables
        .chunks(SEEDS_PER_GROUP)
        .map(|c| ConstructionContext::new(c.to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{nonlinearity, walsh_transform};
    use crate::gp::apply_construction;
    use proptest::prelude::*;

    fn tt(n: usize, f: impl Fn(usize) -> bool) -> TruthTable {
        TruthTable::from_fn(n, f).unwrap()
    }

    #[test]
    fn reference_values() {
        let bent = tt(4, |x| ((x >> 3) & (x >> 2) & 1) ^ ((x >> 1) & x & 1) == 1);
        let f = fitness_nl(&bent);
        assert_eq!((f.nl(), f.frac()), (6, 0.0));
        assert_eq!(f.value(), 6.0);
        assert_eq!(fitness_nl(&TruthTable::zero(3).unwrap()).value(), 0.875);
        let x1 = tt(3, |x| TruthTable::variable(3, x, 1));
        assert_eq!(fitness_nl(&x1).value(), 0.875);
        assert_eq!(fitness_nl(&x1), fitness_nl(&TruthTable::zero(3).unwrap()));
    }

    #[test]
    fn ordering_is_exact() {
        let a = FitnessValue::from_ratio(1, 3).unwrap();
        let b = FitnessValue::from_ratio(2, 6).unwrap();
        assert_eq!(a, b);
        assert!(FitnessValue::from_ratio(1, 2).unwrap() > a);
        assert!(FitnessValue::from_ratio(0, 0).is_err());
        let m = FitnessValue::mean(&[
            FitnessValue::from_spectrum_stats(3, 2, 8),
            FitnessValue::from_spectrum_stats(3, 2, 6),
        ])
        .unwrap();
        assert_eq!(m.value(), 2.125);
        assert!(FitnessValue::mean(&[]).is_none());
        assert_eq!(format!("{}", m), "2.125000");
    }

    #[test]
    fn floor_is_nonlinearity_exhaustive_n3() {
        for v in 0..256usize {
            let f = tt(3, |x| (v >> x) & 1 == 1);
            let fit = fitness_nl(&f);
            assert_eq!(fit.nl(), nonlinearity(&walsh_transform(&f)) as u64);
            assert!(fit.frac() < 1.0);
            let spec = walsh_transform(&f);
            assert_eq!(
                fit.frac() == 0.0,
                spec.max_abs_count() as usize == spec.values().len()
            );
        }
    }

    proptest! {
        #[test]
        fn floor_is_nonlinearity(n in 4usize..=9, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = TruthTable::random(n, &mut rng).unwrap();
            let fit = fitness_nl(&f);
            prop_assert_eq!(fit.nl(), nonlinearity(&walsh_transform(&f)) as u64);
            prop_assert!(fit.frac() < 1.0);
            prop_assert_eq!(fit, fitness_nl(&f.complement()));
        }
    }

    fn tree(s: &str) -> SyntaxTree {
        s.parse().unwrap()
    }

    #[test]
    fn construction_matches_per_group_oracle() {
        let groups = random_seed_groups(3, SEED_GROUPS, 11).unwrap();
        let t = tree("IF(x4,XOR(f1,f2),AND2(XNOR(f3,x5),f4))");
        let got = fitness_construction(&t, &groups).unwrap();
        let sum: f64 = groups
            .iter()
            .map(|g| fitness_nl(&apply_construction(&t, g).unwrap()).value())
            .sum();
        assert!((got.value() - sum / 10.0).abs() < 1e-12);

        let mut shuffled = groups.clone();
        shuffled.reverse();
        shuffled.swap(2, 7);
        assert_eq!(fitness_construction(&t, &shuffled).unwrap(), got);
    }

    #[test]
    fn construction_edge_cases() {
        let groups = random_seed_groups(3, SEED_GROUPS, 12).unwrap();
        let same = vec![groups[0].clone(); SEED_GROUPS];
        let t = tree("XOR(f1,AND(f2,x4))");
        assert_eq!(
            fitness_construction(&t, &same).unwrap(),
            fitness_nl(&apply_construction(&t, &groups[0]).unwrap())
        );
        let affine = fitness_construction(&tree("x4"), &groups).unwrap();
        assert_eq!(affine.nl(), 0);
        assert!(affine.value() < 1.0);
        assert!(fitness_construction(&t, &groups[..9]).is_err());
        assert!(ConstructionFitness::with_any_group_count(&groups[..3]).is_ok());
        assert!(fitness_construction(&tree("x1"), &groups).is_err());
    }

    #[test]
    fn seed_groups_are_balanced_and_reproducible() {
        let a = random_seed_groups(5, 10, 3).unwrap();
        assert_eq!(a, random_seed_groups(5, 10, 3).unwrap());
        assert_ne!(a, random_seed_groups(5, 10, 4).unwrap());
        for g in &a {
            for s in g.seeds() {
                assert_eq!(s.weight(), 16);
            }
        }
    }

    #[test]
    fn seed_file_parsing() {
        let text = "# group 1\n0110\n1001\n0011\n0101 # last\n";
        let groups = parse_seed_groups(text).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].n(), 2);
        assert!(parse_seed_groups("0110\n1001\n").is_err());
        assert!(parse_seed_groups("").is_err());
    }
}
