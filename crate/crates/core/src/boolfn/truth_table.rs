use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Largest supported variable count. Walsh values are stored as `i32`.
pub const MAX_VARIABLES: usize = 30;

/// The output column of an `n`-variable Boolean function.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Bits,
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "at least one variable is required",
        });
    }
    if n > MAX_VARIABLES {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "exceeds the supported maximum of 30 variables",
        });
    }
    Ok(())
}

impl TruthTable {
    pub fn new(n: usize, bits: Bits) -> Result<Self> {
        check_n(n)?;
        if bits.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                actual: bits.len(),
            });
        }
        Ok(TruthTable { n, bits })
    }

    /// Builds a table from `0`/`1` values; the length must be `2^n`.
    pub fn from_values(n: usize, values: &[u8]) -> Result<Self> {
        if let Some(v) = values.iter().find(|&&v| v > 1) {
            return Err(Error::TruthTableParse(format!("non-binary value {v}")));
        }
        let bools: Vec<bool> = values.iter().map(|&v| v == 1).collect();
        TruthTable::new(n, Bits::from_bools(&bools))
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_n(n)?;
        let mut bits = Bits::zeros(1 << n);
        for x in 0..1usize << n {
            if f(x) {
                bits.set(x, true);
            }
        }
        Ok(TruthTable { n, bits })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(TruthTable {
            n,
            bits: Bits::zeros(1 << n),
        })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        Ok(TruthTable {
            n,
            bits: Bits::random(1 << n, rng),
        })
    }

    /// Uniformly random balanced function.
    pub fn random_balanced<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << n;
        let mut positions: Vec<usize> = (0..len).collect();
        positions.shuffle(rng);
        let mut bits = Bits::zeros(len);
        for &p in &positions[..len / 2] {
            bits.set(p, true);
        }
        Ok(TruthTable { n, bits })
    }

    /// Linear function `a . x` where `a` is indexed like table inputs.
    pub fn linear(n: usize, mask: usize) -> Result<Self> {
        TruthTable::from_fn(n, |x| (x & mask).count_ones() & 1 == 1)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        self.bits.get(x)
    }

    #[inline]
    pub fn set(&mut self, x: usize, value: bool) {
        self.bits.set(x, value)
    }

    #[inline]
    pub fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn into_bits(self) -> Bits {
        self.bits
    }

    /// Number of inputs mapped to 1.
    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> TruthTable {
        let mut bits = self.bits.clone();
        for w in bits.words_mut() {
            *w = !*w;
        }
        bits.mask_tail();
        TruthTable { n: self.n, bits }
    }

    /// Value of variable `x_j` (1-based) in input `x`.
    #[inline]
    pub fn variable(n: usize, x: usize, j: usize) -> bool {
        debug_assert!((1..=n).contains(&j));
        (x >> (n - j)) & 1 == 1
    }

    /// `0`/`1` text, position `i` holding `f(i)`.
    pub fn to_binary_string(&self) -> String {
        self.bits.to_bit_string()
    }

    /// Hexadecimal form of the table read as an integer whose bit `i` is
    /// `f(i)`, most significant digit first. Requires `n >= 2`.
    pub fn to_hex_string(&self) -> String {
        if self.n < 2 {
            return self.to_binary_string();
        }
        let digits = self.len() / 4;
        (0..digits)
            .rev()
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| acc | ((self.get(4 * d + b) as u32) << b));
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn parse_binary(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = log2_exact(s.len()).ok_or_else(|| {
            Error::TruthTableParse(format!("length {} is not a power of two", s.len()))
        })?;
        TruthTable::new(n, Bits::from_bit_str(s)?)
    }

    pub fn parse_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        let n = log2_exact(s.len() * 4).filter(|&n| n >= 2).ok_or_else(|| {
            Error::TruthTableParse(format!("{} hex digits do not form a table", s.len()))
        })?;
        let mut bits = Bits::zeros(1 << n);
        let digits = s.len();
        for (k, c) in s.chars().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or_else(|| Error::TruthTableParse(format!("invalid hex digit {c:?}")))?;
            let d = digits - 1 - k;
            for b in 0..4 {
                if (nibble >> b) & 1 == 1 {
                    bits.set(4 * d + b, true);
                }
            }
        }
        TruthTable::new(n, bits)
    }
}

fn log2_exact(len: usize) -> Option<usize> {
    (len >= 2 && len.is_power_of_two()).then(|| len.trailing_zeros() as usize)
}

/// Accepts the binary form when every character is `0`/`1` and the length is
/// a power of two; otherwise hexadecimal.
impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if !t.is_empty()
            && t.bytes().all(|c| c == b'0' || c == b'1')
            && log2_exact(t.len()).is_some()
        {
            TruthTable::parse_binary(t)
        } else {
            TruthTable::parse_hex(t)
        }
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.to_binary_string())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_lengths() {
        assert!(TruthTable::from_values(2, &[0, 1, 1]).is_err());
        assert!(TruthTable::from_values(2, &[0, 1, 2, 0]).is_err());
        assert!(TruthTable::zero(0).is_err());
        assert!(TruthTable::parse_binary("011").is_err());
        assert!(TruthTable::parse_hex("abc").is_err());
    }

    #[test]
    fn variable_ordering_is_msb_first() {
        let x1 = TruthTable::from_fn(3, |x| TruthTable::variable(3, x, 1)).unwrap();
        assert_eq!(x1.to_binary_string(), "00001111");
        let x3 = TruthTable::from_fn(3, |x| TruthTable::variable(3, x, 3)).unwrap();
        assert_eq!(x3.to_binary_string(), "01010101");
    }

    #[test]
    fn hex_is_integer_with_bit_i_equal_f_i() {
        // f(0)=1 only: integer value 1.
        let tt = TruthTable::from_values(3, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(tt.to_hex_string(), "01");
        let tt = TruthTable::parse_hex("aa55aa55").unwrap();
        assert_eq!(tt.n(), 5);
        assert_eq!(tt.to_hex_string(), "aa55aa55");
        assert!(tt.get(0) && !tt.get(1) && tt.get(2));
    }

    #[test]
    fn text_formats_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..=9 {
            let tt = TruthTable::random(n, &mut rng).unwrap();
            assert_eq!(
                TruthTable::parse_binary(&tt.to_binary_string()).unwrap(),
                tt
            );
            assert_eq!(TruthTable::parse_hex(&tt.to_hex_string()).unwrap(), tt);
        }
    }

    #[test]
    fn from_str_autodetects() {
        let tt: TruthTable = "0110".parse().unwrap();
        assert_eq!(tt.n(), 2);
        let tt: TruthTable = "6a".parse().unwrap();
        assert_eq!(tt.n(), 3);
    }

    #[test]
    fn random_balanced_is_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            let tt = TruthTable::random_balanced(n, &mut rng).unwrap();
            assert_eq!(tt.weight(), 1 << (n - 1));
        }
    }
}
