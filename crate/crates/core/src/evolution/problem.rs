//! Genotype spaces paired with their decoders and the fitness function.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::boolfn::{enumerate_orbits, expand_rs, OrbitTable, TruthTable};
use crate::encodings::{float_dim_truncating, write_float_bits};
use crate::error::{Error, Result};
use crate::fitness::{
    expand_mapped, score_bits, ConstructionFitness, ConstructionScratch, FitnessValue,
};
use crate::gp::{
    eval_into, part_variable_count, ramped_half_and_half, random_crossover, subtree_mutation,
    ColumnSet, ConstructionContext, GpConfig, SyntaxTree, TreeMode, TreeScratch,
};

use super::operators::{bitstring_crossover, bitstring_mutation, float_crossover, float_mutation};

pub type EvoRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub fitness: FitnessValue,
    pub phenotype_hash: u64,
}

/// A search space together with its variation operators and objective.
pub trait Problem: Sync {
    type Genotype: Clone + Send + Sync;
    type Scratch: Send;

    fn scratch(&self) -> Self::Scratch;
    fn random_genotype(&self, rng: &mut EvoRng) -> Self::Genotype;
    fn crossover(&self, a: &Self::Genotype, b: &Self::Genotype, rng: &mut EvoRng)
        -> Self::Genotype;
    fn mutate(&self, g: &mut Self::Genotype, rng: &mut EvoRng);
    fn evaluate(&self, g: &Self::Genotype, scratch: &mut Self::Scratch) -> Evaluation;
    /// The decoded function, when the genotype denotes a single one.
    fn phenotype(&self, g: &Self::Genotype) -> Option<TruthTable>;
    /// Text form written to result files.
    fn describe(&self, g: &Self::Genotype) -> String;

    /// Genotype length in bits, for spaces that admit single-bit flips.
    fn flip_len(&self) -> Option<usize> {
        None
    }

    fn flip(&self, _g: &mut Self::Genotype, _i: usize) {
        unreachable!("flip on a space without bit access")
    }
}

/// A full-table buffer for expanded rotation-symmetric functions and the
/// spectrum buffer.
#[derive(Clone, Debug)]
pub struct TableScratch {
    table: Bits,
    spectrum: Vec<i32>,
}

impl TableScratch {
    fn new(n: usize) -> Self {
        TableScratch {
            table: Bits::zeros(1 << n),
            spectrum: Vec::with_capacity(1 << n),
        }
    }

    fn score_mapped(&mut self, n: usize, bits: &Bits, map: &[u32]) -> FitnessValue {
        expand_mapped(bits, map, &mut self.table);
        score_bits(n, &self.table, &mut self.spectrum)
    }
}

fn fingerprint_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Full truth tables of `n` variables.
#[derive(Clone, Debug)]
pub struct BitstringProblem {
    n: usize,
}

impl BitstringProblem {
    pub fn new(n: usize) -> Result<Self> {
        TruthTable::zero(n)?;
        Ok(BitstringProblem { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Problem for BitstringProblem {
    type Genotype = Bits;
    type Scratch = Vec<i32>;

    fn scratch(&self) -> Vec<i32> {
        Vec::with_capacity(1 << self.n)
    }

    fn random_genotype(&self, rng: &mut EvoRng) -> Bits {
        Bits::random(1 << self.n, rng)
    }

    fn crossover(&self, a: &Bits, b: &Bits, rng: &mut EvoRng) -> Bits {
        bitstring_crossover(a, b, rng)
    }

    fn mutate(&self, g: &mut Bits, rng: &mut EvoRng) {
        bitstring_mutation(g, rng)
    }

    fn evaluate(&self, g: &Bits, buf: &mut Vec<i32>) -> Evaluation {
        Evaluation {
            fitness: score_bits(self.n, g, buf),
            phenotype_hash: g.fingerprint(),
        }
    }

    fn phenotype(&self, g: &Bits) -> Option<TruthTable> {
        TruthTable::new(self.n, g.clone()).ok()
    }

    fn describe(&self, g: &Bits) -> String {
        TruthTable::new(self.n, g.clone())
            .expect("genotype length")
            .to_hex_string()
    }

    fn flip_len(&self) -> Option<usize> {
        Some(1 << self.n)
    }

    fn flip(&self, g: &mut Bits, i: usize) {
        g.flip(i)
    }
}

/// One bit per rotation orbit; every phenotype is rotation symmetric.
#[derive(Clone, Debug)]
pub struct RsBitstringProblem {
    orbits: Arc<OrbitTable>,
}

impl RsBitstringProblem {
    pub fn new(n: usize) -> Result<Self> {
        Ok(RsBitstringProblem::with_orbits(Arc::new(enumerate_orbits(
            n,
        )?)))
    }

    pub fn with_orbits(orbits: Arc<OrbitTable>) -> Self {
        RsBitstringProblem { orbits }
    }

    pub fn orbits(&self) -> &OrbitTable {
        &self.orbits
    }
}

impl Problem for RsBitstringProblem {
    type Genotype = Bits;
    type Scratch = TableScratch;

    fn scratch(&self) -> TableScratch {
        TableScratch::new(self.orbits.n())
    }

    fn random_genotype(&self, rng: &mut EvoRng) -> Bits {
        Bits::random(self.orbits.count(), rng)
    }

    fn crossover(&self, a: &Bits, b: &Bits, rng: &mut EvoRng) -> Bits {
        bitstring_crossover(a, b, rng)
    }

    fn mutate(&self, g: &mut Bits, rng: &mut EvoRng) {
        bitstring_mutation(g, rng)
    }

    fn evaluate(&self, g: &Bits, s: &mut TableScratch) -> Evaluation {
        Evaluation {
            fitness: s.score_mapped(self.orbits.n(), g, self.orbits.orbit_indices()),
            phenotype_hash: g.fingerprint(),
        }
    }

    fn phenotype(&self, g: &Bits) -> Option<TruthTable> {
        expand_rs(g, &self.orbits).ok()
    }

    fn describe(&self, g: &Bits) -> String {
        expand_rs(g, &self.orbits)
            .expect("genotype length")
            .to_hex_string()
    }

    fn flip_len(&self) -> Option<usize> {
        Some(self.orbits.count())
    }

    fn flip(&self, g: &mut Bits, i: usize) {
        g.flip(i)
    }
}

/// Real vectors in `[0, 1]^dim`, each coordinate standing for `dec` bits
/// of a full or rotation-symmetric truth table.
#[derive(Clone, Debug)]
pub struct FloatProblem {
    n: usize,
    dec: u32,
    gsize: usize,
    dim: usize,
    orbits: Option<Arc<OrbitTable>>,
}

#[derive(Clone, Debug)]
pub struct FloatScratch {
    bits: Bits,
    table: TableScratch,
}

impl FloatProblem {
    /// Over full truth tables of `n` variables.
    pub fn new(n: usize, dec: u32) -> Result<Self> {
        TruthTable::zero(n)?;
        let gsize = 1usize << n;
        Ok(FloatProblem {
            n,
            dec,
            gsize,
            dim: float_dim_truncating(gsize, dec)?,
            orbits: None,
        })
    }

    /// Over orbit bits of rotation-symmetric functions.
    pub fn rotation_symmetric(orbits: Arc<OrbitTable>, dec: u32) -> Result<Self> {
        let gsize = orbits.count();
        Ok(FloatProblem {
            n: orbits.n(),
            dec,
            gsize,
            dim: float_dim_truncating(gsize, dec)?,
            orbits: Some(orbits),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn dec(&self) -> u32 {
        self.dec
    }

    pub fn gsize(&self) -> usize {
        self.gsize
    }

    fn decode_into(&self, g: &[f64], bits: &mut Bits) {
        write_float_bits(g, self.dec, bits);
    }
}

impl Problem for FloatProblem {
    type Genotype = Vec<f64>;
    type Scratch = FloatScratch;

    fn scratch(&self) -> FloatScratch {
        FloatScratch {
            bits: Bits::zeros(self.gsize),
            table: TableScratch::new(self.n),
        }
    }

    fn random_genotype(&self, rng: &mut EvoRng) -> Vec<f64> {
        (0..self.dim).map(|_| rng.random()).collect()
    }

    fn crossover(&self, a: &Vec<f64>, b: &Vec<f64>, rng: &mut EvoRng) -> Vec<f64> {
        float_crossover(a, b, rng)
    }

    fn mutate(&self, g: &mut Vec<f64>, rng: &mut EvoRng) {
        float_mutation(g, rng)
    }

    fn evaluate(&self, g: &Vec<f64>, s: &mut FloatScratch) -> Evaluation {
        self.decode_into(g, &mut s.bits);
        let fitness = match &self.orbits {
            Some(o) => s.table.score_mapped(self.n, &s.bits, o.orbit_indices()),
            None => score_bits(self.n, &s.bits, &mut s.table.spectrum),
        };
        Evaluation {
            fitness,
            phenotype_hash: s.bits.fingerprint(),
        }
    }

    fn phenotype(&self, g: &Vec<f64>) -> Option<TruthTable> {
        let mut bits = Bits::zeros(self.gsize);
        self.decode_into(g, &mut bits);
        match &self.orbits {
            Some(o) => expand_rs(&bits, o).ok(),
            None => TruthTable::new(self.n, bits).ok(),
        }
    }

    fn describe(&self, g: &Vec<f64>) -> String {
        self.phenotype(g)
            .expect("decodable genotype")
            .to_hex_string()
    }
}

/// How a tree's outputs become a truth table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GpDecoding {
    /// The tree is the function of `x1..xn`.
    Direct,
    /// A tree over `ceil(log2 g_n)` variables whose leading outputs are orbit bits.
    Part,
    /// An `n`-variable tree evaluated only at orbit representatives.
    Full,
}

#[derive(Clone, Debug)]
pub struct GpProblem {
    n: usize,
    decoding: GpDecoding,
    mode: TreeMode,
    columns: ColumnSet,
    orbits: Option<Arc<OrbitTable>>,
    config: GpConfig,
}

#[derive(Clone, Debug)]
pub struct GpScratch {
    tree: TreeScratch,
    out: Bits,
    table: TableScratch,
}

impl GpProblem {
    pub fn new(n: usize, decoding: GpDecoding, config: GpConfig) -> Result<Self> {
        TruthTable::zero(n)?;
        let orbits = match decoding {
            GpDecoding::Direct => None,
            _ => Some(Arc::new(enumerate_orbits(n)?)),
        };
        Ok(GpProblem::build(n, decoding, orbits, config))
    }

    /// Rotation-symmetric decodings sharing a prebuilt orbit table.
    pub fn with_orbits(
        orbits: Arc<OrbitTable>,
        decoding: GpDecoding,
        config: GpConfig,
    ) -> Result<Self> {
        if decoding == GpDecoding::Direct {
            return Err(Error::Config("direct decoding takes no orbit table".into()));
        }
        Ok(GpProblem::build(orbits.n(), decoding, Some(orbits), config))
    }

    fn build(
        n: usize,
        decoding: GpDecoding,
        orbits: Option<Arc<OrbitTable>>,
        config: GpConfig,
    ) -> Self {
        let (vars, columns) = match (decoding, &orbits) {
            (GpDecoding::Part, Some(o)) => {
                let m = part_variable_count(o.n()).expect("valid n");
                (m, ColumnSet::direct(m))
            }
            (GpDecoding::Full, Some(o)) => {
                let reps: Vec<usize> = o.representatives().collect();
                (n, ColumnSet::over_inputs(n, &reps))
            }
            _ => (n, ColumnSet::direct(n)),
        };
        GpProblem {
            n,
            decoding,
            mode: TreeMode::Direct { vars },
            columns,
            orbits,
            config,
        }
    }

    pub fn mode(&self) -> TreeMode {
        self.mode
    }

    pub fn decoding(&self) -> GpDecoding {
        self.decoding
    }

    fn score(&self, tree: &SyntaxTree, s: &mut GpScratch) -> FitnessValue {
        eval_into(tree, &self.columns, &mut s.tree, &mut s.out);
        match &self.orbits {
            Some(o) => s.table.score_mapped(self.n, &s.out, o.orbit_indices()),
            None => score_bits(self.n, &s.out, &mut s.table.spectrum),
        }
    }
}

impl Problem for GpProblem {
    type Genotype = SyntaxTree;
    type Scratch = GpScratch;

    fn scratch(&self) -> GpScratch {
        GpScratch {
            tree: TreeScratch::default(),
            out: Bits::zeros(self.columns.rows()),
            table: TableScratch::new(self.n),
        }
    }

    fn random_genotype(&self, rng: &mut EvoRng) -> SyntaxTree {
        ramped_half_and_half(self.mode, &self.config, rng)
    }

    fn crossover(&self, a: &SyntaxTree, b: &SyntaxTree, rng: &mut EvoRng) -> SyntaxTree {
        random_crossover(a, b, &self.config, rng)
    }

    fn mutate(&self, g: &mut SyntaxTree, rng: &mut EvoRng) {
        *g = subtree_mutation(g, self.mode, &self.config, rng);
    }

    fn evaluate(&self, tree: &SyntaxTree, s: &mut GpScratch) -> Evaluation {
        let fitness = self.score(tree, s);
        let phenotype_hash = match (self.decoding, &self.orbits) {
            (GpDecoding::Part, Some(o)) => {
                let mut head = s.out.clone();
                for i in o.count()..head.len() {
                    head.set(i, false);
                }
                head.fingerprint()
            }
            _ => s.out.fingerprint(),
        };
        Evaluation {
            fitness,
            phenotype_hash,
        }
    }

    fn phenotype(&self, tree: &SyntaxTree) -> Option<TruthTable> {
        let mut s = self.scratch();
        eval_into(tree, &self.columns, &mut s.tree, &mut s.out);
        match &self.orbits {
            Some(o) => {
                let head =
                    Bits::from_bools(&(0..o.count()).map(|i| s.out.get(i)).collect::<Vec<_>>());
                expand_rs(&head, o).ok()
            }
            None => TruthTable::new(self.n, s.out).ok(),
        }
    }

    fn describe(&self, tree: &SyntaxTree) -> String {
        tree.to_string()
    }
}

/// Trees combining four seed functions with two fresh variables, scored by
/// the mean fitness over a fixed list of seed groups.
#[derive(Clone, Debug)]
pub struct ConstructionProblem {
    fitness: ConstructionFitness,
    mode: TreeMode,
    config: GpConfig,
}

impl ConstructionProblem {
    pub fn new(fitness: ConstructionFitness, config: GpConfig) -> Self {
        let mode = TreeMode::Construction {
            seed_vars: fitness.output_n() - 2,
        };
        ConstructionProblem {
            fitness,
            mode,
            config,
        }
    }

    /// Requires the standard group count.
    pub fn from_groups(groups: &[ConstructionContext], config: GpConfig) -> Result<Self> {
        Ok(ConstructionProblem::new(
            ConstructionFitness::new(groups)?,
            config,
        ))
    }

    pub fn output_n(&self) -> usize {
        self.fitness.output_n()
    }

    pub fn mode(&self) -> TreeMode {
        self.mode
    }
}

impl Problem for ConstructionProblem {
    type Genotype = SyntaxTree;
    type Scratch = ConstructionScratch;

    fn scratch(&self) -> ConstructionScratch {
        ConstructionScratch::default()
    }

    fn random_genotype(&self, rng: &mut EvoRng) -> SyntaxTree {
        ramped_half_and_half(self.mode, &self.config, rng)
    }

    fn crossover(&self, a: &SyntaxTree, b: &SyntaxTree, rng: &mut EvoRng) -> SyntaxTree {
        random_crossover(a, b, &self.config, rng)
    }

    fn mutate(&self, g: &mut SyntaxTree, rng: &mut EvoRng) {
        *g = subtree_mutation(g, self.mode, &self.config, rng);
    }

    fn evaluate(&self, tree: &SyntaxTree, s: &mut ConstructionScratch) -> Evaluation {
        Evaluation {
            fitness: self.fitness.evaluate_with(tree, s),
            phenotype_hash: fingerprint_of(tree),
        }
    }

    fn phenotype(&self, _tree: &SyntaxTree) -> Option<TruthTable> {
        None
    }

    fn describe(&self, tree: &SyntaxTree) -> String {
        tree.to_string()
    }
}
