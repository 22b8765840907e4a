use std::fmt;

use crate::error::{Error, Result};

/// `2^(n-1) - 2^(n/2 - 1)`, kept exact.
///
/// For even `n` this is an integer. For odd `n` the second term is
/// `sqrt(2^(n-2))`, an irrational number, so the bound is never attained and
/// comparisons go through [`CoveringRadiusBound::floor`], computed with
/// integer square roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveringRadiusBound {
    n: u32,
}

impl CoveringRadiusBound {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_integer(&self) -> bool {
        self.n % 2 == 0
    }

    /// Exact value when it is an integer (even `n`).
    pub fn as_integer(&self) -> Option<u64> {
        self.is_integer()
            .then(|| (1u64 << (self.n - 1)) - (1u64 << (self.n / 2 - 1)))
    }

    /// Largest integer not exceeding the bound.
    pub fn floor(&self) -> u64 {
        if let Some(v) = self.as_integer() {
            return v;
        }
        if self.n == 1 {
            // 1 - sqrt(1/2)
            return 0;
        }
        // 2^(n-1) - sqrt(2^(n-2)) with 2^(n-2) not a perfect square.
        (1u64 << (self.n - 1)) - (1u64 << (self.n - 2)).isqrt() - 1
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.n as f64;
        2f64.powf(n - 1.0) - 2f64.powf(n / 2.0 - 1.0)
    }

    /// Whether a nonlinearity value is consistent with the bound.
    pub fn admits(&self, nl: u64) -> bool {
        nl <= self.floor()
    }
}

impl fmt::Display for CoveringRadiusBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(
                f,
                "2^{} - 2^({}/2 - 1) ~ {:.6}",
                self.n - 1,
                self.n,
                self.to_f64()
            ),
        }
    }
}

fn check_range(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "at least one variable is required",
        });
    }
    if n > 63 {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "bounds are computed in 64-bit arithmetic",
        });
    }
    Ok(())
}

fn check_odd(n: usize) -> Result<()> {
    check_range(n)?;
    if n % 2 == 0 || n < 3 {
        return Err(Error::InvalidVariableCount {
            n,
            reason: "an odd variable count of at least 3 is required",
        });
    }
    Ok(())
}

pub fn covering_radius_bound(n: usize) -> Result<CoveringRadiusBound> {
    check_range(n)?;
    Ok(CoveringRadiusBound { n: n as u32 })
}

/// `2^(n-1) - 2^((n-1)/2)` for odd `n`.
pub fn quadratic_bound(n: usize) -> Result<u64> {
    check_odd(n)?;
    Ok((1u64 << (n - 1)) - (1u64 << ((n - 1) / 2)))
}

/// `2 * floor(2^(n-2) - 2^(n/2 - 2))` for odd `n`.
pub fn odd_upper_bound(n: usize) -> Result<u64> {
    check_odd(n)?;
    // 2^(n/2 - 2) = sqrt(2^(n-4)) is irrational for odd n, so
    // floor(2^(n-2) - s) = 2^(n-2) - floor(s) - 1.
    let floor_s = if n >= 5 { (1u64 << (n - 4)).isqrt() } else { 0 };
    Ok(2 * ((1u64 << (n - 2)) - floor_s - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_radius_examples() {
        assert_eq!(covering_radius_bound(4).unwrap().as_integer(), Some(6));
        assert_eq!(covering_radius_bound(2).unwrap().as_integer(), Some(1));
        let b7 = covering_radius_bound(7).unwrap();
        assert!(!b7.is_integer());
        assert_eq!(b7.floor(), 58);
        assert!((b7.to_f64() - (64.0 - 32f64.sqrt())).abs() < 1e-12);
        assert!(covering_radius_bound(0).is_err());
    }

    #[test]
    fn covering_radius_floor_matches_float() {
        for n in 1..=40usize {
            let b = covering_radius_bound(n).unwrap();
            assert_eq!(b.floor(), b.to_f64().floor() as u64, "n={n}");
        }
    }

    #[test]
    fn quadratic_examples() {
        let got: Vec<u64> = [7, 9, 11, 13]
            .iter()
            .map(|&n| quadratic_bound(n).unwrap())
            .collect();
        assert_eq!(got, vec![56, 240, 992, 4032]);
        assert_eq!(quadratic_bound(3).unwrap(), 2);
        assert!(quadratic_bound(8).is_err());
        assert!(quadratic_bound(1).is_err());
    }

    #[test]
    fn odd_upper_examples() {
        let got: Vec<u64> = [7, 9, 11, 13]
            .iter()
            .map(|&n| odd_upper_bound(n).unwrap())
            .collect();
        assert_eq!(got, vec![58, 244, 1000, 4050]);
        assert_eq!(odd_upper_bound(3).unwrap(), 2);
        assert_eq!(odd_upper_bound(5).unwrap(), 12);
        assert!(odd_upper_bound(10).is_err());
    }

    #[test]
    fn odd_upper_matches_float_closed_form() {
        for n in (3..=41usize).step_by(2) {
            let nf = n as f64;
            let expected = 2.0 * (2f64.powf(nf - 2.0) - 2f64.powf(nf / 2.0 - 2.0)).floor();
            assert_eq!(odd_upper_bound(n).unwrap(), expected as u64, "n={n}");
        }
    }
}
