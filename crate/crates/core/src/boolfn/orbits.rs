use crate::bits::Bits;
use crate::error::{Error, Result};

use super::truth_table::check_n;
use super::TruthTable;

/// Default largest `n` for which [`enumerate_orbits`] materializes tables.
pub const DEFAULT_ORBIT_CAP: usize = 24;

/// One cyclic shift of the coordinates:
/// `(x1, ..., xn) -> (xn, x1, ..., x(n-1))`, with `x1` the most significant bit.
#[inline]
pub fn rotate(x: usize, n: usize) -> usize {
    (x >> 1) | ((x & 1) << (n - 1))
}

fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Number of rotation classes of `F_2^n`: `(1/n) sum_{t | n} phi(t) 2^(n/t)`.
pub fn orbit_count(n: usize) -> Result<u64> {
    if n == 0 || n > 63 {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "orbit count is defined for 1 <= n <= 63",
        });
    }
    let total: u128 = (1..=n as u64)
        .filter(|t| n as u64 % t == 0)
        .map(|t| euler_phi(t) as u128 * (1u128 << (n as u64 / t)))
        .sum();
    Ok((total / n as u128) as u64)
}

/// A rotation class. The representative is its smallest member; members are
/// listed in shift order starting from the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: u32,
    pub members: Vec<u32>,
}

/// Partition of the input space into rotation classes, sorted by representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTable {
    n: usize,
    orbits: Vec<Orbit>,
    orbit_of: Vec<u32>,
}

impl OrbitTable {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `g_n`, the number of orbits.
    #[inline]
    pub fn count(&self) -> usize {
        self.orbits.len()
    }

    #[inline]
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// Index of the orbit containing input `x`.
    #[inline]
    pub fn orbit_index(&self, x: usize) -> usize {
        self.orbit_of[x] as usize
    }

    /// Orbit index for every input, in input order.
    #[inline]
    pub fn orbit_indices(&self) -> &[u32] {
        &self.orbit_of
    }

    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.orbits.iter().map(|o| o.representative as usize)
    }
}

pub fn enumerate_orbits(n: usize) -> Result<OrbitTable> {
    enumerate_orbits_with_cap(n, DEFAULT_ORBIT_CAP)
}

pub fn enumerate_orbits_with_cap(n: usize, cap: usize) -> Result<OrbitTable> {
    check_n(n)?;
    if n > cap {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "too large to materialize the orbit table",
        });
    }
    let size = 1usize << n;
    let mut orbit_of = vec![u32::MAX; size];
    let mut orbits = Vec::new();
    for x in 0..size {
        if orbit_of[x] != u32::MAX {
            continue;
        }
        let idx = orbits.len() as u32;
        let mut members = vec![x as u32];
        orbit_of[x] = idx;
        let mut y = rotate(x, n);
        while y != x {
            members.push(y as u32);
            orbit_of[y] = idx;
            y = rotate(y, n);
        }
        orbits.push(Orbit {
            representative: x as u32,
            members,
        });
    }
    Ok(OrbitTable {
        n,
        orbits,
        orbit_of,
    })
}

/// Copies bit `k` of the genotype onto every member of orbit `k`.
pub fn expand_rs(genotype: &Bits, orbits: &OrbitTable) -> Result<TruthTable> {
    if genotype.len() != orbits.count() {
        return Err(Error::LengthMismatch {
            expected: orbits.count(),
            actual: genotype.len(),
        });
    }
    let mut bits = Bits::zeros(1 << orbits.n);
    for (x, &k) in orbits.orbit_of.iter().enumerate() {
        if genotype.get(k as usize) {
            bits.set(x, true);
        }
    }
    TruthTable::new(orbits.n, bits)
}

/// Reads the table value at each orbit representative.
pub fn read_representatives(tt: &TruthTable, orbits: &OrbitTable) -> Result<Bits> {
    if tt.n() != orbits.n {
        return Err(Error::LengthMismatch {
            expected: orbits.n,
            actual: tt.n(),
        });
    }
    let mut bits = Bits::zeros(orbits.count());
    for (k, rep) in orbits.representatives().enumerate() {
        if tt.get(rep) {
            bits.set(k, true);
        }
    }
    Ok(bits)
}

/// Invariance under one cyclic shift, which generates the whole rotation group.
pub fn is_rotation_symmetric(tt: &TruthTable) -> bool {
    let n = tt.n();
    (0..tt.len()).all(|x| tt.get(x) == tt.get(rotate(x, n)))
}
