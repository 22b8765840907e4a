//! The steady-state evolutionary engine, encoding-specific variation
//! operators and local search.

mod engine;
pub mod operators;
mod problem;

pub use engine::{
    local_search, ls_bitflip, ls_combined, ls_mutation, run_fp_sst, run_sst, select_worst,
    sst_step, Evaluator, Individual, LsMode, Population, RunOutcome, SstConfig,
};
pub use problem::{
    BitstringProblem, ConstructionProblem, Evaluation, EvoRng, FloatProblem, FloatScratch,
    GpDecoding, GpProblem, GpScratch, Problem, RsBitstringProblem, TableScratch,
};
