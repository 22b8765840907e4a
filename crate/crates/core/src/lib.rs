//! Evolutionary search for Boolean functions with high nonlinearity.
//!
//! The crate is organised bottom-up:
//!
//! - [`boolfn`]: truth tables, the fast Walsh-Hadamard transform,
//!   nonlinearity and its bounds, rotation-symmetric orbits.
//! - [`encodings`]: bitstring, rotation-symmetric bitstring and
//!   floating-point genotypes with their decoders.
//! - [`gp`]: syntax-tree genotypes, their decodings and variation operators.
//! - [`fitness`]: the spectrum-aware fitness and its averaged variant for
//!   secondary constructions.
//! - [`evolution`]: the steady-state 3-tournament engine and local search.
//! - [`harness`]: multi-run campaigns, summary statistics and CSV output.

pub mod bits;
pub mod boolfn;
pub mod encodings;
pub mod error;
pub mod evolution;
pub mod fitness;
pub mod gp;
pub mod harness;

pub use bits::Bits;
pub use boolfn::{OrbitTable, TruthTable, WalshSpectrum};
pub use error::{Error, Result};
pub use evolution::{Individual, LsMode, Population, Problem, SstConfig};
pub use fitness::FitnessValue;
pub use gp::{ConstructionContext, SyntaxTree};
pub use harness::{Algorithm, Encoding, ExperimentConfig, RunRecord, SummaryStats};

/// SplitMix64 finalizer; a bijection on `u64`.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
