//! Boolean functions as truth tables, their Walsh-Hadamard spectra, the
//! classical nonlinearity bounds, and rotation-symmetric orbit machinery.
//!
//! Inputs are ordered lexicographically with `x1` as the most significant
//! bit: table position `i` holds `f(x1, ..., xn)` where `i = x1 2^(n-1) + ... + xn`.

mod bounds;
mod orbits;
mod truth_table;
pub(crate) mod walsh;

pub use bounds::{covering_radius_bound, odd_upper_bound, quadratic_bound, CoveringRadiusBound};
pub use orbits::{
    enumerate_orbits, enumerate_orbits_with_cap, expand_rs, is_rotation_symmetric, orbit_count,
    read_representatives, rotate, Orbit, OrbitTable, DEFAULT_ORBIT_CAP,
};
pub use truth_table::{TruthTable, MAX_VARIABLES};
pub use walsh::{fwht_in_place, is_balanced, nonlinearity, walsh_transform, WalshSpectrum};
