//! Genotype spaces for the bitstring, rotation-symmetric bitstring and
//! floating-point representations, and their decoders to truth tables.

use crate::bits::Bits;
use crate::boolfn::{expand_rs, orbit_count, OrbitTable, TruthTable};
use crate::error::{Error, Result};

/// Full truth table as a genotype of length `2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitstringGenotype {
    bits: Bits,
    target_n: usize,
}

impl BitstringGenotype {
    pub fn new(bits: Bits, target_n: usize) -> Result<Self> {
        if target_n == 0 || target_n > crate::boolfn::MAX_VARIABLES {
            return Err(Error::InvalidVariableCount {
                n: target_n,
                reason: "unsupported variable count",
            });
        }
        if bits.len() != 1 << target_n {
            return Err(Error::LengthMismatch {
                expected: 1 << target_n,
                actual: bits.len(),
            });
        }
        Ok(BitstringGenotype { bits, target_n })
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }
}

/// The identity mapping.
pub fn decode_bitstring(g: &BitstringGenotype) -> TruthTable {
    TruthTable::new(g.target_n, g.bits.clone()).expect("validated at construction")
}

/// One bit per rotation class, `g_n` bits in total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsBitstringGenotype {
    bits: Bits,
    target_n: usize,
}

impl RsBitstringGenotype {
    pub fn new(bits: Bits, target_n: usize) -> Result<Self> {
        let expected = orbit_count(target_n)? as usize;
        if bits.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bits.len(),
            });
        }
        Ok(RsBitstringGenotype { bits, target_n })
    }

    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn target_n(&self) -> usize {
        self.target_n
    }
}

pub fn decode_rs(g: &RsBitstringGenotype, orbits: &OrbitTable) -> Result<TruthTable> {
    if orbits.n() != g.target_n {
        return Err(Error::LengthMismatch {
            expected: g.target_n,
            actual: orbits.n(),
        });
    }
    expand_rs(&g.bits, orbits)
}

/// Largest supported bits-per-coordinate; an `f64` mantissa holds 52 bits.
pub const MAX_DEC: u32 = 52;

/// Real vector in `[0, 1]^dim`, each coordinate standing for `dec` bits of a
/// `gsize`-bit string.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatVectorGenotype {
    values: Vec<f64>,
    dec: u32,
    gsize: usize,
}

/// Vector length for a `gsize`-bit target at `dec` bits per coordinate.
pub fn float_dim(gsize: usize, dec: u32) -> Result<usize> {
    if dec == 0 || dec > MAX_DEC {
        return Err(Error::FloatEncoding(format!(
            "dec must be in 1..={MAX_DEC}, got {dec}"
        )));
    }
    if gsize == 0 || gsize % dec as usize != 0 {
        return Err(Error::FloatEncoding(format!(
            "genotype size {gsize} is not divisible by dec = {dec}"
        )));
    }
    Ok(gsize / dec as usize)
}

/// Vector length when the last coordinate may carry surplus bits:
/// `ceil(gsize / dec)`.
pub fn float_dim_truncating(gsize: usize, dec: u32) -> Result<usize> {
    if dec == 0 || dec > MAX_DEC {
        return Err(Error::FloatEncoding(format!(
            "dec must be in 1..={MAX_DEC}, got {dec}"
        )));
    }
    if gsize == 0 {
        return Err(Error::FloatEncoding(
            "genotype size must be positive".into(),
        ));
    }
    Ok(gsize.div_ceil(dec as usize))
}

impl FloatVectorGenotype {
    /// Requires `dec` to divide `gsize`.
    pub fn new(values: Vec<f64>, dec: u32, gsize: usize) -> Result<Self> {
        let dim = float_dim(gsize, dec)?;
        FloatVectorGenotype::checked(values, dim, dec, gsize)
    }

    /// Accepts any `gsize`; low-order bits of the last coordinate that fall
    /// past `gsize` are dropped.
    pub fn new_truncating(values: Vec<f64>, dec: u32, gsize: usize) -> Result<Self> {
        let dim = float_dim_truncating(gsize, dec)?;
        FloatVectorGenotype::checked(values, dim, dec, gsize)
    }

    fn checked(values: Vec<f64>, dim: usize, dec: u32, gsize: usize) -> Result<Self> {
        if values.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                actual: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::OutOfUnitInterval { value: v });
        }
        Ok(FloatVectorGenotype { values, dec, gsize })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn dec(&self) -> u32 {
        self.dec
    }

    pub fn gsize(&self) -> usize {
        self.gsize
    }
}

/// `floor(d / 2^-dec)`, with `d = 1.0` clamped to `2^dec - 1`.
pub fn float_coord_to_int(d: f64, dec: u32) -> Result<u64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::OutOfUnitInterval { value: d });
    }
    if dec == 0 || dec > MAX_DEC {
        return Err(Error::FloatEncoding(format!(
            "dec must be in 1..={MAX_DEC}, got {dec}"
        )));
    }
    Ok(coord_to_int_unchecked(d, dec))
}

#[inline]
pub(crate) fn coord_to_int_unchecked(d: f64, dec: u32) -> u64 {
    let top = (1u64 << dec) - 1;
    // Scaling by a power of two is exact.
    ((d * (1u64 << dec) as f64).floor() as u64).min(top)
}

/// Writes every coordinate as `dec` big-endian bits, in coordinate order.
pub fn decode_float_bits(g: &FloatVectorGenotype) -> Bits {
    let mut bits = Bits::zeros(g.gsize);
    write_float_bits(&g.values, g.dec, &mut bits);
    bits
}

pub(crate) fn write_float_bits(values: &[f64], dec: u32, out: &mut Bits) {
    let len = out.len();
    let dec = dec as usize;
    for (k, &d) in values.iter().enumerate() {
        let v = coord_to_int_unchecked(d, dec as u32);
        for b in 0..dec.min(len - k * dec) {
            out.set(k * dec + b, (v >> (dec - 1 - b)) & 1 == 1);
        }
    }
}

/// Decodes to a full truth table; `gsize` must be `2^n`.
pub fn decode_float(g: &FloatVectorGenotype) -> Result<TruthTable> {
    if !g.gsize.is_power_of_two() || g.gsize < 2 {
        return Err(Error::FloatEncoding(format!(
            "genotype size {} is not a truth-table length",
            g.gsize
        )));
    }
    TruthTable::new(g.gsize.trailing_zeros() as usize, decode_float_bits(g))
}

/// Rotation-symmetric variant: `gsize = g_n`, the bits index orbit representatives.
pub fn decode_float_rs(g: &FloatVectorGenotype, orbits: &OrbitTable) -> Result<TruthTable> {
    expand_rs(&decode_float_bits(g), orbits)
}

/// Comma-separated decimals with 17 significant digits.
pub fn format_float_vector(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_float_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::FloatEncoding(format!("bad coordinate {t:?}: {e}")))
        })
        .collect()
}
