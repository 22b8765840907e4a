use crate::bits::{words_for, Bits};
use crate::boolfn::{expand_rs, OrbitTable, TruthTable};
use crate::error::{Error, Result};

use super::tree::{Node, Operator, SyntaxTree, Terminal};

pub const SEEDS_PER_GROUP: usize = 4;

/// Four seed functions sharing the same variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionContext {
    n: usize,
    seeds: [TruthTable; SEEDS_PER_GROUP],
}

impl ConstructionContext {
    pub fn new(seeds: Vec<TruthTable>) -> Result<Self> {
        let seeds: [TruthTable; SEEDS_PER_GROUP] =
            seeds
                .try_into()
                .map_err(|v: Vec<TruthTable>| Error::LengthMismatch {
                    expected: SEEDS_PER_GROUP,
                    actual: v.len(),
                })?;
        let n = seeds[0].n();
        if let Some(s) = seeds.iter().find(|s| s.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: s.n(),
            });
        }
        if n + 2 > crate::boolfn::MAX_VARIABLES {
            return Err(Error::InvalidVariableCount {
                n,
                reason: "construction output would exceed the variable limit",
            });
        }
        Ok(ConstructionContext { n, seeds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seeds(&self) -> &[TruthTable; SEEDS_PER_GROUP] {
        &self.seeds
    }
}

/// Per-terminal input columns for word-parallel evaluation over a fixed
/// list of rows.
#[derive(Clone, Debug)]
pub(crate) struct ColumnSet {
    rows: usize,
    words: usize,
    var_base: usize,
    vars: Vec<Vec<u64>>,
    seeds: Vec<Vec<u64>>,
}

fn column_from(rows: usize, f: impl Fn(usize) -> bool) -> Vec<u64> {
    let mut col = vec![0u64; words_for(rows)];
    for r in 0..rows {
        if f(r) {
            col[r >> 6] |= 1 << (r & 63);
        }
    }
    col
}

impl ColumnSet {
    /// All `2^n` inputs of an `n`-variable function.
    pub fn direct(n: usize) -> Self {
        let rows = 1usize << n;
        ColumnSet::over_inputs_with(n, rows, |r| r)
    }

    /// Selected inputs of an `n`-variable function, one row each.
    pub fn over_inputs(n: usize, inputs: &[usize]) -> Self {
        ColumnSet::over_inputs_with(n, inputs.len(), |r| inputs[r])
    }

    fn over_inputs_with(n: usize, rows: usize, input: impl Fn(usize) -> usize) -> Self {
        let vars = (0..n)
            .map(|j| column_from(rows, |r| (input(r) >> (n - 1 - j)) & 1 == 1))
            .collect();
        ColumnSet {
            rows,
            words: words_for(rows),
            var_base: 0,
            vars,
            seeds: Vec::new(),
        }
    }

    /// Rows are the `2^(n+2)` inputs of the constructed function. Seeds read
    /// the top `n` index bits; `x(n+1)` is index bit 0 and `x(n+2)` bit 1.
    pub fn construction(ctx: &ConstructionContext) -> Self {
        let n = ctx.n;
        let rows = 1usize << (n + 2);
        let seeds = ctx
            .seeds
            .iter()
            .map(|s| column_from(rows, |r| s.get(r >> 2)))
            .collect();
        let vars = vec![
            column_from(rows, |r| r & 1 == 1),
            column_from(rows, |r| r & 2 == 2),
        ];
        ColumnSet {
            rows,
            words: words_for(rows),
            var_base: n,
            vars,
            seeds,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    fn column(&self, t: Terminal) -> Option<&[u64]> {
        match t {
            Terminal::Var(i) => (i as usize)
                .checked_sub(self.var_base)
                .and_then(|k| self.vars.get(k))
                .map(Vec::as_slice),
            Terminal::Seed(k) => self.seeds.get(k as usize).map(Vec::as_slice),
        }
    }

    pub fn check(&self, tree: &SyntaxTree) -> Result<()> {
        match tree.terminals().find(|&t| self.column(t).is_none()) {
            None => Ok(()),
            Some(Terminal::Var(i)) => Err(Error::UnboundVariable(i as usize + 1)),
            Some(t) => Err(Error::InvalidTree(format!("leaf {t} has no input column"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub(crate) struct TreeScratch {
    stack: Vec<u64>,
}

/// `dst = op(src, dst)` word by word, `src` being the first argument.
#[inline]
fn binary_words(op: Operator, src: &[u64], dst: &mut [u64]) {
    let zip = dst.iter_mut().zip(src);
    match op {
        Operator::Or => zip.for_each(|(b, &a)| *b |= a),
        Operator::Xor => zip.for_each(|(b, &a)| *b ^= a),
        Operator::And => zip.for_each(|(b, &a)| *b &= a),
        Operator::And2 => zip.for_each(|(b, &a)| *b = a & !*b),
        Operator::Xnor => zip.for_each(|(b, &a)| *b = !(a ^ *b)),
        Operator::If | Operator::Not => unreachable!("not binary"),
    }
}

/// Evaluates `tree` on every row of `cols` into `out` (length `cols.rows()`).
/// Every terminal must have a column; see [`ColumnSet::check`].
pub(crate) fn eval_into(
    tree: &SyntaxTree,
    cols: &ColumnSet,
    scratch: &mut TreeScratch,
    out: &mut Bits,
) {
    let w = cols.words;
    let stack = &mut scratch.stack;
    stack.clear();
    // Children are pushed last-first, so the first argument is on top.
    for node in tree.nodes().iter().rev() {
        let len = stack.len();
        match *node {
            Node::Leaf(t) => {
                stack.extend_from_slice(cols.column(t).expect("terminal without column"))
            }
            Node::Op(Operator::Not) => stack[len - w..].iter_mut().for_each(|v| *v = !*v),
            Node::Op(Operator::If) => {
                let (rest, cond) = stack.split_at_mut(len - w);
                let (c, then) = rest[len - 3 * w..].split_at_mut(w);
                for ((c, &t), &a) in c.iter_mut().zip(then.iter()).zip(cond.iter()) {
                    *c = (a & t) | (!a & *c);
                }
                stack.truncate(len - 2 * w);
            }
            Node::Op(op) => {
                let (rest, a) = stack.split_at_mut(len - w);
                binary_words(op, a, &mut rest[len - 2 * w..]);
                stack.truncate(len - w);
            }
        }
    }
    out.words_mut().copy_from_slice(&stack[..w]);
    out.mask_tail();
}

fn evaluate(tree: &SyntaxTree, cols: &ColumnSet) -> Result<Bits> {
    cols.check(tree)?;
    let mut out = Bits::zeros(cols.rows);
    eval_into(tree, cols, &mut TreeScratch::default(), &mut out);
    Ok(out)
}

/// Truth table of the tree over `x1..xn`.
pub fn tree_to_truth_table(tree: &SyntaxTree, n: usize) -> Result<TruthTable> {
    crate::boolfn::TruthTable::zero(n)?;
    TruthTable::new(n, evaluate(tree, &ColumnSet::direct(n))?)
}

/// Smallest `m` with `2^m >= g_n`.
pub fn part_variable_count(target_n: usize) -> Result<usize> {
    let g = crate::boolfn::orbit_count(target_n)?;
    Ok(g.next_power_of_two().trailing_zeros().max(1) as usize)
}

/// Evaluates a tree over `part_variable_count(n)` variables, keeps the
/// first `g_n` outputs as orbit bits and discards the rest.
pub fn tree_to_rs_part(tree: &SyntaxTree, orbits: &OrbitTable) -> Result<TruthTable> {
    let m = part_variable_count(orbits.n())?;
    let full = evaluate(tree, &ColumnSet::direct(m))?;
    let mut genotype = Bits::zeros(orbits.count());
    for k in 0..orbits.count() {
        genotype.set(k, full.get(k));
    }
    expand_rs(&genotype, orbits)
}

/// Evaluates an `n`-variable tree only at orbit representatives and copies
/// each value across its orbit.
pub fn tree_to_rs_full(tree: &SyntaxTree, orbits: &OrbitTable) -> Result<TruthTable> {
    let reps: Vec<usize> = orbits.representatives().collect();
    let genotype = evaluate(tree, &ColumnSet::over_inputs(orbits.n(), &reps))?;
    expand_rs(&genotype, orbits)
}

/// The `(n+2)`-variable function defined by a construction tree.
pub fn apply_construction(tree: &SyntaxTree, ctx: &ConstructionContext) -> Result<TruthTable> {
    TruthTable::new(ctx.n + 2, evaluate(tree, &ColumnSet::construction(ctx))?)
}
