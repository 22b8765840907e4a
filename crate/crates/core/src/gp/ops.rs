use rand::seq::IndexedRandom;
use rand::Rng;

use super::tree::{Node, Operator, SyntaxTree, TreeMode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpConfig {
    /// Hard cap on tree depth (edges from root to deepest leaf).
    pub max_depth: usize,
    pub init_min_depth: usize,
    pub init_max_depth: usize,
    /// Largest subtree grown by mutation; also limited by the cap.
    pub mutation_depth: usize,
    /// Crossover retries before falling back to a copy of the first parent.
    pub crossover_attempts: usize,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig {
            max_depth: 8,
            init_min_depth: 2,
            init_max_depth: 6,
            mutation_depth: 6,
            crossover_attempts: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitMethod {
    Grow,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossoverKind {
    Simple,
    SizeFair,
    OnePoint,
    ContextPreserving,
    Uniform,
}

impl CrossoverKind {
    pub const ALL: [CrossoverKind; 5] = [
        CrossoverKind::Simple,
        CrossoverKind::SizeFair,
        CrossoverKind::OnePoint,
        CrossoverKind::ContextPreserving,
        CrossoverKind::Uniform,
    ];
}

fn grow_into<R: Rng + ?Sized>(
    out: &mut Vec<Node>,
    terminals: &[super::Terminal],
    method: InitMethod,
    remaining: usize,
    rng: &mut R,
) {
    let pick_op = remaining > 0
        && match method {
            InitMethod::Full => true,
            InitMethod::Grow => {
                let total = Operator::ALL.len() + terminals.len();
                rng.random_range(0..total) < Operator::ALL.len()
            }
        };
    if pick_op {
        let op = *Operator::ALL.choose(rng).expect("non-empty");
        out.push(Node::Op(op));
        for _ in 0..op.arity() {
            grow_into(out, terminals, method, remaining - 1, rng);
        }
    } else {
        out.push(Node::Leaf(
            *terminals.choose(rng).expect("mode has terminals"),
        ));
    }
}

/// A random tree of depth at most `depth`; exactly `depth` for `Full`.
pub fn random_tree<R: Rng + ?Sized>(
    mode: TreeMode,
    method: InitMethod,
    depth: usize,
    rng: &mut R,
) -> SyntaxTree {
    let terminals = mode.terminals();
    let mut nodes = Vec::new();
    grow_into(&mut nodes, &terminals, method, depth, rng);
    SyntaxTree::from_nodes_unchecked(nodes)
}

/// Depth drawn uniformly from the configured initial range, method by coin flip.
pub fn ramped_half_and_half<R: Rng + ?Sized>(
    mode: TreeMode,
    cfg: &GpConfig,
    rng: &mut R,
) -> SyntaxTree {
    let lo = cfg.init_min_depth.min(cfg.max_depth);
    let hi = cfg.init_max_depth.clamp(lo, cfg.max_depth);
    let depth = rng.random_range(lo..=hi);
    let method = if rng.random_bool(0.5) {
        InitMethod::Grow
    } else {
        InitMethod::Full
    };
    random_tree(mode, method, depth, rng)
}

/// Replaces a uniformly chosen subtree with a freshly grown one.
pub fn subtree_mutation<R: Rng + ?Sized>(
    tree: &SyntaxTree,
    mode: TreeMode,
    cfg: &GpConfig,
    rng: &mut R,
) -> SyntaxTree {
    let depths = tree.node_depths();
    let i = rng.random_range(0..tree.len());
    let room = cfg
        .max_depth
        .saturating_sub(depths[i])
        .min(cfg.mutation_depth);
    let fresh = random_tree(mode, InitMethod::Grow, room, rng);
    tree.replace_subtree(i, fresh.nodes())
}

/// Node pairs reached from both roots through ancestors of equal arity.
fn common_region(
    p1: &SyntaxTree,
    p2: &SyntaxTree,
    e1: &[usize],
    e2: &[usize],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut todo = vec![(0usize, 0usize)];
    while let Some((i, j)) = todo.pop() {
        out.push((i, j));
        if p1.nodes()[i].arity() == p2.nodes()[j].arity() {
            todo.extend(p1.children(i, e1).into_iter().zip(p2.children(j, e2)));
        }
    }
    out
}

/// Node pairs at the same child-index path in both trees.
fn same_position(
    p1: &SyntaxTree,
    p2: &SyntaxTree,
    e1: &[usize],
    e2: &[usize],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut todo = vec![(0usize, 0usize)];
    while let Some((i, j)) = todo.pop() {
        out.push((i, j));
        todo.extend(p1.children(i, e1).into_iter().zip(p2.children(j, e2)));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn uniform_build<R: Rng + ?Sized>(
    p1: &SyntaxTree,
    i: usize,
    p2: &SyntaxTree,
    j: usize,
    e1: &[usize],
    e2: &[usize],
    out: &mut Vec<Node>,
    rng: &mut R,
) {
    let (a1, a2) = (p1.nodes()[i].arity(), p2.nodes()[j].arity());
    if a1 == a2 && a1 > 0 {
        out.push(if rng.random_bool(0.5) {
            p2.nodes()[j]
        } else {
            p1.nodes()[i]
        });
        for (ci, cj) in p1.children(i, e1).into_iter().zip(p2.children(j, e2)) {
            uniform_build(p1, ci, p2, cj, e1, e2, out, rng);
        }
    } else if rng.random_bool(0.5) {
        out.extend_from_slice(&p2.nodes()[j..e2[j]]);
    } else {
        out.extend_from_slice(&p1.nodes()[i..e1[i]]);
    }
}

fn crossover_once<R: Rng + ?Sized>(
    kind: CrossoverKind,
    p1: &SyntaxTree,
    p2: &SyntaxTree,
    rng: &mut R,
) -> Option<SyntaxTree> {
    let e1 = p1.subtree_ends();
    let e2 = p2.subtree_ends();
    let (i, j) = match kind {
        CrossoverKind::Simple => (rng.random_range(0..p1.len()), rng.random_range(0..p2.len())),
        CrossoverKind::SizeFair => {
            let i = rng.random_range(0..p1.len());
            let limit = 2 * (e1[i] - i) + 1;
            let fits: Vec<usize> = (0..p2.len()).filter(|&j| e2[j] - j <= limit).collect();
            (i, *fits.choose(rng)?)
        }
        CrossoverKind::OnePoint => *common_region(p1, p2, &e1, &e2).choose(rng)?,
        CrossoverKind::ContextPreserving => *same_position(p1, p2, &e1, &e2).choose(rng)?,
        CrossoverKind::Uniform => {
            let mut nodes = Vec::with_capacity(p1.len().max(p2.len()));
            uniform_build(p1, 0, p2, 0, &e1, &e2, &mut nodes, rng);
            return Some(SyntaxTree::from_nodes_unchecked(nodes));
        }
    };
    Some(p1.replace_subtree(i, &p2.nodes()[j..e2[j]]))
}

/// One child of `p1` and `p2`. Children over the depth cap are redrawn;
/// after `crossover_attempts` failures the child is a copy of `p1`.
pub fn tree_crossover<R: Rng + ?Sized>(
    kind: CrossoverKind,
    p1: &SyntaxTree,
    p2: &SyntaxTree,
    cfg: &GpConfig,
    rng: &mut R,
) -> SyntaxTree {
    for _ in 0..cfg.crossover_attempts.max(1) {
        if let Some(child) = crossover_once(kind, p1, p2, rng) {
            if child.depth() <= cfg.max_depth {
                return child;
            }
        }
    }
    p1.clone()
}

/// Crossover with the operator drawn uniformly from [`CrossoverKind::ALL`].
pub fn random_crossover<R: Rng + ?Sized>(
    p1: &SyntaxTree,
    p2: &SyntaxTree,
    cfg: &GpConfig,
    rng: &mut R,
) -> SyntaxTree {
    let kind = *CrossoverKind::ALL.choose(rng).expect("non-empty");
    tree_crossover(kind, p1, p2, cfg, rng)
}
