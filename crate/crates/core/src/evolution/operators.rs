//! Variation operators for bitstring and real-vector genotypes.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Flips one uniformly chosen bit and returns its index.
pub fn bit_mutation<R: Rng + ?Sized>(g: &mut Bits, rng: &mut R) -> usize {
    let i = rng.random_range(0..g.len());
    g.flip(i);
    i
}

/// Shuffles the bits of a uniformly chosen substring.
pub fn shuffle_mutation<R: Rng + ?Sized>(g: &mut Bits, rng: &mut R) {
    let a = rng.random_range(0..g.len());
    let b = rng.random_range(0..g.len());
    shuffle_range(g, a.min(b), a.max(b) + 1, rng);
}

/// Shuffles `g[start..end]` in place.
pub fn shuffle_range<R: Rng + ?Sized>(g: &mut Bits, start: usize, end: usize, rng: &mut R) {
    let mut segment: Vec<bool> = (start..end).map(|i| g.get(i)).collect();
    segment.shuffle(rng);
    for (k, v) in segment.into_iter().enumerate() {
        g.set(start + k, v);
    }
}

fn check_lengths(p1: &Bits, p2: &Bits) -> Result<()> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            expected: p1.len(),
            actual: p2.len(),
        });
    }
    Ok(())
}

/// `(p1[..k] ++ p2[k..], p2[..k] ++ p1[k..])`.
pub fn one_point_crossover_at(p1: &Bits, p2: &Bits, k: usize) -> Result<(Bits, Bits)> {
    check_lengths(p1, p2)?;
    if k > p1.len() {
        return Err(Error::Config(format!(
            "crossover point {k} beyond length {}",
            p1.len()
        )));
    }
    let mut c1 = p1.clone();
    let mut c2 = p2.clone();
    for (w, (a, b)) in c1.words_mut().iter_mut().zip(c2.words_mut()).enumerate() {
        let lo = w * 64;
        // Bits below `k` come from the first-named parent.
        let keep = if k >= lo + 64 {
            u64::MAX
        } else if k <= lo {
            0
        } else {
            (1u64 << (k - lo)) - 1
        };
        let (x, y) = (*a, *b);
        *a = (x & keep) | (y & !keep);
        *b = (y & keep) | (x & !keep);
    }
    Ok((c1, c2))
}

/// One-point crossover at a point drawn from `1..len` (`0` for length 1).
pub fn one_point_crossover<R: Rng + ?Sized>(
    p1: &Bits,
    p2: &Bits,
    rng: &mut R,
) -> Result<(Bits, Bits)> {
    let k = if p1.len() > 1 {
        rng.random_range(1..p1.len())
    } else {
        0
    };
    one_point_crossover_at(p1, p2, k)
}

/// Each position copied from either parent with probability 1/2.
pub fn uniform_crossover<R: Rng + ?Sized>(p1: &Bits, p2: &Bits, rng: &mut R) -> Result<Bits> {
    check_lengths(p1, p2)?;
    let mut child = p1.clone();
    for (c, &b) in child.words_mut().iter_mut().zip(p2.words()) {
        let m: u64 = rng.random();
        *c = (*c & m) | (b & !m);
    }
    child.mask_tail();
    Ok(child)
}

/// One-point (either child with equal probability) or uniform crossover,
/// chosen uniformly.
pub fn bitstring_crossover<R: Rng + ?Sized>(p1: &Bits, p2: &Bits, rng: &mut R) -> Bits {
    if rng.random_bool(0.5) {
        let (c1, c2) = one_point_crossover(p1, p2, rng).expect("equal lengths");
        if rng.random_bool(0.5) {
            c1
        } else {
            c2
        }
    } else {
        uniform_crossover(p1, p2, rng).expect("equal lengths")
    }
}

/// Bit-flip or shuffle mutation, chosen uniformly.
pub fn bitstring_mutation<R: Rng + ?Sized>(g: &mut Bits, rng: &mut R) {
    if rng.random_bool(0.5) {
        bit_mutation(g, rng);
    } else {
        shuffle_mutation(g, rng);
    }
}

/// Standard deviation of [`gaussian_mutation`] steps.
pub const GAUSSIAN_SIGMA: f64 = 0.1;

/// `w * a + (1 - w) * b` with a single `w ~ U(0, 1)`.
pub fn blend_crossover<R: Rng + ?Sized>(a: &[f64], b: &[f64], rng: &mut R) -> Vec<f64> {
    let w: f64 = rng.random();
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (w * x + (1.0 - w) * y).clamp(0.0, 1.0))
        .collect()
}

/// Each coordinate copied from either parent with probability 1/2.
pub fn uniform_float_crossover<R: Rng + ?Sized>(a: &[f64], b: &[f64], rng: &mut R) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| if rng.random_bool(0.5) { x } else { y })
        .collect()
}

/// Redraws one coordinate uniformly from `[0, 1)`.
pub fn reset_mutation<R: Rng + ?Sized>(g: &mut [f64], rng: &mut R) {
    let i = rng.random_range(0..g.len());
    g[i] = rng.random();
}

/// Adds `N(0, sigma^2)` noise to one coordinate, clamped to `[0, 1]`.
pub fn gaussian_mutation<R: Rng + ?Sized>(g: &mut [f64], sigma: f64, rng: &mut R) {
    let i = rng.random_range(0..g.len());
    let noise = Normal::new(0.0, sigma).expect("finite positive sigma");
    g[i] = (g[i] + noise.sample(rng)).clamp(0.0, 1.0);
}

pub fn float_crossover<R: Rng + ?Sized>(a: &[f64], b: &[f64], rng: &mut R) -> Vec<f64> {
    if rng.random_bool(0.5) {
        blend_crossover(a, b, rng)
    } else {
        uniform_float_crossover(a, b, rng)
    }
}

pub fn float_mutation<R: Rng + ?Sized>(g: &mut [f64], rng: &mut R) {
    if rng.random_bool(0.5) {
        reset_mutation(g, rng);
    } else {
        gaussian_mutation(g, GAUSSIAN_SIGMA, rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(s: &str) -> Bits {
        Bits::from_bit_str(s).unwrap()
    }

    #[test]
    fn bit_mutation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut g = b("0000");
        let i = bit_mutation(&mut g, &mut rng);
        assert_eq!(g.count_ones(), 1);
        assert!(g.get(i));
        let mut g = b("0000");
        g.flip(2);
        assert_eq!(g.to_bit_string(), "0010");
    }

    #[test]
    fn bit_mutation_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 10_000;
        let mut hits = [0u32; 8];
        for _ in 0..trials {
            let mut g = Bits::zeros(8);
            hits[bit_mutation(&mut g, &mut rng)] += 1;
        }
        let p = 1.0 / 8.0;
        let mean = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for h in hits {
            assert!((h as f64 - mean).abs() <= 3.0 * sigma, "{hits:?}");
        }
    }

    #[test]
    fn shuffle_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = b("0011");
        shuffle_range(&mut g, 1, 2, &mut rng);
        assert_eq!(g.to_bit_string(), "0011");
        let mut seen_reversed = false;
        for _ in 0..200 {
            let mut g = b("0011");
            shuffle_range(&mut g, 0, 4, &mut rng);
            assert_eq!(g.count_ones(), 2);
            seen_reversed |= g.to_bit_string() == "1100";
        }
        assert!(seen_reversed);
    }

    #[test]
    fn one_point_examples() {
        let (c1, c2) = one_point_crossover_at(&b("0000"), &b("1111"), 2).unwrap();
        assert_eq!(
            (c1.to_bit_string().as_str(), c2.to_bit_string().as_str()),
            ("0011", "1100")
        );
        let (c1, c2) = one_point_crossover_at(&b("0000"), &b("1111"), 0).unwrap();
        assert_eq!((c1, c2), (b("1111"), b("0000")));
        let p = b("0110");
        let (c1, c2) = one_point_crossover_at(&p, &p, 3).unwrap();
        assert_eq!((&c1, &c2), (&p, &p));
        assert!(one_point_crossover_at(&b("00"), &b("000"), 1).is_err());
        assert!(uniform_crossover(&b("00"), &b("000"), &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn uniform_crossover_weight_is_binomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (z, o) = (Bits::zeros(100), Bits::ones(100));
        let trials = 2000;
        let weights: Vec<f64> = (0..trials)
            .map(|_| uniform_crossover(&z, &o, &mut rng).unwrap().count_ones() as f64)
            .collect();
        let mean = weights.iter().sum::<f64>() / trials as f64;
        let var = weights.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        // Binomial(100, 1/2): mean 50, variance 25.
        assert!((mean - 50.0).abs() < 3.0 * (25.0f64 / trials as f64).sqrt());
        assert!((var - 25.0).abs() < 4.0);
    }

    proptest! {
        #[test]
        fn bitstring_operator_contracts(
            a in proptest::collection::vec(any::<bool>(), 1..300),
            seed: u64,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p1 = Bits::from_bools(&a);
            let p2 = Bits::random(a.len(), &mut rng);

            let mut m = p1.clone();
            bit_mutation(&mut m, &mut rng);
            prop_assert_eq!(m.hamming_distance(&p1), 1);

            let mut s = p1.clone();
            shuffle_mutation(&mut s, &mut rng);
            prop_assert_eq!(s.count_ones(), p1.count_ones());
            let diff: Vec<usize> = (0..a.len()).filter(|&i| s.get(i) != p1.get(i)).collect();
            if let (Some(&lo), Some(&hi)) = (diff.first(), diff.last()) {
                let seg = |g: &Bits| (lo..=hi).filter(|&i| g.get(i)).count();
                prop_assert_eq!(seg(&s), seg(&p1));
            }

            let u = uniform_crossover(&p1, &p2, &mut rng).unwrap();
            for i in 0..a.len() {
                prop_assert!(u.get(i) == p1.get(i) || u.get(i) == p2.get(i));
            }
            let k = rng.random_range(0..=a.len());
            let (c1, c2) = one_point_crossover_at(&p1, &p2, k).unwrap();
            for i in 0..a.len() {
                let (x, y) = if i < k { (p1.get(i), p2.get(i)) } else { (p2.get(i), p1.get(i)) };
                prop_assert_eq!((c1.get(i), c2.get(i)), (x, y));
            }
        }

        #[test]
        fn float_operators_stay_in_unit_interval(
            a in proptest::collection::vec(0.0f64..=1.0, 1..50),
            seed: u64,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b: Vec<f64> = a.iter().map(|_| rng.random()).collect();
            let mut c = float_crossover(&a, &b, &mut rng);
            for _ in 0..20 {
                float_mutation(&mut c, &mut rng);
            }
            prop_assert!(c.iter().all(|v| (0.0..=1.0).contains(v)));
            let u = uniform_float_crossover(&a, &b, &mut rng);
            for i in 0..a.len() {
                prop_assert!(u[i] == a[i] || u[i] == b[i]);
            }
        }
    }
}
