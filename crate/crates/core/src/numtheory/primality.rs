//! Miller–Rabin primality testing.
//!
//! Below [`DETERMINISTIC_LIMIT`] the first thirteen primes form a witness set
//! that is known to be exact. Larger inputs fall back to 64 rounds with
//! witnesses drawn from a fixed-seed generator, and the answer is marked as
//! probable.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

/// 3.317 * 10^24: the first 13 prime bases are exact below this bound.
pub const DETERMINISTIC_LIMIT: &str = "3317044064679887385961981";

const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const PROBABILISTIC_ROUNDS: usize = 64;
const WITNESS_SEED: u64 = 0x5eed_0f_3a11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed the probabilistic rounds; no certificate.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

fn deterministic_limit() -> &'static BigUint {
    static LIMIT: OnceLock<BigUint> = OnceLock::new();
    LIMIT.get_or_init(|| DETERMINISTIC_LIMIT.parse().unwrap())
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

pub fn primality(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    if n < deterministic_limit() {
        let exact = WITNESSES
            .iter()
            .all(|&a| strong_probable_prime(n, &d, s, &BigUint::from(a)));
        return if exact {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let two = BigUint::from(2u32);
    for _ in 0..PROBABILISTIC_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        if !strong_probable_prime(n, &d, s, &a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime()
}

/// Primes below `limit` by the sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit];
    let mut primes = Vec::new();
    for i in 2..limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j < limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_match_sieve() {
        let primes = primes_below(20_000);
        let mut expected = vec![false; 20_000];
        for &p in &primes {
            expected[p as usize] = true;
        }
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), expected[n as usize], "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // strong pseudoprimes to several small bases
        for n in [
            2047u64,
            1_373_653,
            25_326_001,
            3_215_031_751,
            3_825_123_056_546_413_051,
        ] {
            assert!(!is_prime_u64(n), "{n}");
        }
    }

    #[test]
    fn big_primes_and_composites() {
        let m61: BigUint = (BigUint::one() << 61) - 1u32;
        let m89: BigUint = (BigUint::one() << 89) - 1u32;
        let m127: BigUint = (BigUint::one() << 127) - 1u32;
        let above_2_70: BigUint = "1180591620717411303449".parse().unwrap();
        assert_eq!(primality(&m61), Primality::Prime);
        assert_eq!(primality(&above_2_70), Primality::Prime);
        assert_eq!(primality(&m89), Primality::ProbablePrime);
        assert_eq!(primality(&m127), Primality::ProbablePrime);
        assert_eq!(primality(&(&m89 * &m61)), Primality::Composite);
    }
}
