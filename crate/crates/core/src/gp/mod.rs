//! Syntax-tree genotypes over the Boolean operator set
//! `OR, XOR, AND, AND2, XNOR, IF, NOT`.
//!
//! A tree either denotes a function of its input variables directly, or a
//! secondary construction whose leaves are four seed functions `f1..f4` of
//! `n` variables and two fresh variables `x(n+1)`, `x(n+2)`.

mod decode;
mod ops;
mod tree;

pub use decode::{
    apply_construction, part_variable_count, tree_to_rs_full, tree_to_rs_part, tree_to_truth_table,
    ConstructionContext, SEEDS_PER_GROUP,
};
pub(crate) use decode::{eval_into, ColumnSet, TreeScratch};
pub use ops::{
    ramped_half_and_half, random_crossover, random_tree, subtree_mutation, tree_crossover,
    CrossoverKind, GpConfig, InitMethod,
};
pub use tree::{eval_tree, Node, Operator, SyntaxTree, Terminal, TreeMode};
