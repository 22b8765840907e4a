use super::TruthTable;
use crate::bits::Bits;

/// Walsh-Hadamard spectrum: `values[a] = sum_x (-1)^(f(x) xor a.x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: usize,
    values: Vec<i32>,
}

impl WalshSpectrum {
    /// Wraps precomputed values. The length must be `2^n`.
    pub fn from_values(n: usize, values: Vec<i32>) -> Self {
        assert_eq!(values.len(), 1 << n, "spectrum length must be 2^n");
        WalshSpectrum { n, values }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn max_abs(&self) -> u32 {
        max_abs(&self.values)
    }

    /// How many positions attain the maximal absolute value.
    pub fn max_abs_count(&self) -> u32 {
        max_abs_and_count(&self.values).1
    }

    pub fn nonlinearity(&self) -> u32 {
        nonlinearity(self)
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.values
            .iter()
            .map(|&w| (w as i64 * w as i64) as u64)
            .sum()
    }
}

#[inline]
pub(crate) fn max_abs(values: &[i32]) -> u32 {
    values.iter().map(|w| w.unsigned_abs()).max().unwrap_or(0)
}

/// Maximal absolute value and the number of positions attaining it.
#[inline]
pub(crate) fn max_abs_and_count(values: &[i32]) -> (u32, u32) {
    let max = max_abs(values);
    let count = values.iter().filter(|w| w.unsigned_abs() == max).count();
    (max, count as u32)
}

/// Butterfly levels `h, 2h, ...` of the transform.
#[inline]
fn butterflies_from(buf: &mut [i32], mut h: usize) {
    let len = buf.len();
    while h < len {
        for block in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// In-place butterfly over a buffer whose length is a power of two.
pub fn fwht_in_place(buf: &mut [i32]) {
    debug_assert!(buf.len().is_power_of_two());
    butterflies_from(buf, 1);
}

/// 8-point transforms of the sign vectors of every byte, bit `b` of the
/// byte being input `b`.
const fn byte_spectra() -> [[i32; 8]; 256] {
    let mut table = [[0i32; 8]; 256];
    let mut v = 0;
    while v < 256 {
        let mut a = 0;
        while a < 8 {
            let mut sum = 0;
            let mut x = 0;
            while x < 8 {
                let parity = (((v >> x) & 1) ^ ((a & x) as u32).count_ones() as usize) & 1;
                sum += 1 - 2 * parity as i32;
                x += 1;
            }
            table[v][a] = sum;
            a += 1;
        }
        v += 1;
    }
    table
}

static BYTE_SPECTRA: [[i32; 8]; 256] = byte_spectra();

/// Transform of the `+-1` form of `bits`, whose length is a power of two.
/// The first three butterfly levels come from a per-byte table.
pub(crate) fn transform_bits(bits: &Bits, buf: &mut Vec<i32>) {
    let len = bits.len();
    buf.clear();
    if len < 8 {
        buf.extend((0..len).map(|x| 1 - 2 * bits.get(x) as i32));
        butterflies_from(buf, 1);
        return;
    }
    buf.resize(len, 0);
    let bytes = bits.words().iter().flat_map(|w| w.to_le_bytes());
    for (chunk, byte) in buf.chunks_exact_mut(8).zip(bytes) {
        chunk.copy_from_slice(&BYTE_SPECTRA[byte as usize]);
    }
    butterflies_from(buf, 8);
}

/// Fast transform into a caller-owned buffer.
pub(crate) fn walsh_into(tt: &TruthTable, buf: &mut Vec<i32>) {
    transform_bits(tt.bits(), buf);
}

pub fn walsh_transform(tt: &TruthTable) -> WalshSpectrum {
    let mut values = Vec::with_capacity(tt.len());
    walsh_into(tt, &mut values);
    WalshSpectrum { n: tt.n(), values }
}

/// `2^(n-1) - max_a |W_f(a)| / 2`.
pub fn nonlinearity(spec: &WalshSpectrum) -> u32 {
    nonlinearity_from_max(spec.n, spec.max_abs())
}

#[inline]
pub(crate) fn nonlinearity_from_max(n: usize, max_abs: u32) -> u32 {
    ((1u64 << n) - max_abs as u64) as u32 / 2
}

pub fn is_balanced(tt: &TruthTable) -> bool {
    2 * tt.weight() == tt.len()
}
