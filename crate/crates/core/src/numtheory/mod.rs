//! Integer factorization and the multiplicative statistics built on it:
//! ω, W = 2^ω, Euler's φ, θ = φ/n and the radical.

mod cache;
mod primality;
mod rho;

pub use cache::FactorCache;
pub use primality::pow_mod as pow_mod_u64;
pub use primality::{
    is_prime, is_prime_u64, primality, primes_below, Primality, DETERMINISTIC_LIMIT,
};

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::sync::OnceLock;

/// Trial division runs through every prime below this bound.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Default number of rho iterations per factorization.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 26;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_DIVISION_LIMIT))
}

/// A prime power `p^r`, the size of the base field F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub r: u32,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidArgument("r must be positive".into()));
        }
        Ok(Self { p, r })
    }

    /// Splits `q` into `p^r`, failing unless `q` is a prime power.
    pub fn from_value(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
        }
        let p = (2..=q)
            .find(|d| q % d == 0)
            .expect("q >= 2 has a least prime divisor");
        let mut r = 0;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            r += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidArgument(format!("{q} is not a prime power")));
        }
        Ok(Self { p, r })
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.p).pow(self.r)
    }

    pub fn value_u64(&self) -> Option<u64> {
        self.p.checked_pow(self.r)
    }
}

/// Complete factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
    probable: bool,
}

impl IntFactorization {
    pub fn one() -> Self {
        Self {
            n: BigUint::one(),
            factors: Vec::new(),
            probable: false,
        }
    }

    /// Builds a factorization from `(prime, exponent)` pairs, merging
    /// repeated primes and checking primality of each.
    pub fn from_factors(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Result<Self> {
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            match factors.iter_mut().find(|(q, _)| *q == p) {
                Some((_, acc)) => *acc += e,
                None => factors.push((p, e)),
            }
        }
        factors.sort();
        let mut probable = false;
        let mut n = BigUint::one();
        for (p, e) in &factors {
            match primality(p) {
                Primality::Composite => {
                    return Err(Error::InvalidArgument(format!("{p} is not prime")))
                }
                Primality::ProbablePrime => probable = true,
                Primality::Prime => {}
            }
            n *= p.pow(*e);
        }
        Ok(Self {
            n,
            factors,
            probable,
        })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Primes that fit in a `u64`; every prime of a desk-scale field order does.
    pub fn primes_u64(&self) -> Option<Vec<u64>> {
        self.primes().map(|p| p.to_u64()).collect()
    }

    /// True if some prime only passed the probabilistic test.
    pub fn is_probable(&self) -> bool {
        self.probable
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn stats(&self) -> MultiplicativeStats {
        multiplicative_stats(self)
    }
}

/// ω, W, φ, θ and the radical of a factored integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeStats {
    pub omega: usize,
    pub w: BigUint,
    pub phi: BigUint,
    pub theta: BigRational,
    pub radical: BigUint,
}

pub fn multiplicative_stats(f: &IntFactorization) -> MultiplicativeStats {
    let mut phi = BigUint::one();
    let mut radical = BigUint::one();
    for (p, e) in &f.factors {
        phi *= p.pow(e - 1) * (p - 1u32);
        radical *= p;
    }
    let theta = BigRational::new(phi.clone().into(), f.n.clone().into());
    MultiplicativeStats {
        omega: f.omega(),
        w: BigUint::one() << f.omega(),
        phi,
        theta,
        radical,
    }
}

/// Factorization driver: trial division, caller hints, cache, then rho.
#[derive(Debug, Clone, Copy)]
pub struct Factorizer<'a> {
    cache: Option<&'a FactorCache>,
    rho_budget: u64,
}

impl Default for Factorizer<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'a> Factorizer<'a> {
    pub fn new() -> Self {
        Self {
            cache: None,
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }

    pub fn with_cache(mut self, cache: &'a FactorCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_rho_budget(mut self, budget: u64) -> Self {
        self.rho_budget = budget;
        self
    }

    pub fn factorize(&self, n: &BigUint, hints: &[BigUint]) -> Result<IntFactorization> {
        if n.is_zero() {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        if n.is_one() {
            return Ok(IntFactorization::one());
        }
        if let Some(found) = self.from_cache(n) {
            return Ok(found);
        }
        let mut primes: Vec<BigUint> = Vec::new();
        let mut rest = n.clone();
        self.trial_divide(&mut rest, &mut primes);
        let mut pending = vec![rest];
        for hint in hints {
            pending = pending
                .into_iter()
                .flat_map(|c| split_by(c, hint))
                .collect();
        }
        while let Some(c) = pending.pop() {
            if c.is_one() {
                continue;
            }
            if is_prime(&c) {
                primes.push(c);
                continue;
            }
            if let Some(cached) = self.cache.and_then(|cache| cache.lookup(&c)) {
                let mut rest = c.clone();
                for p in cached {
                    let mut parts = split_by(rest, &p);
                    rest = parts.pop().unwrap();
                    primes.extend(parts);
                }
                if !rest.is_one() {
                    return Err(Error::UnfactoredCofactor { cofactor: rest });
                }
                continue;
            }
            match rho::find_divisor(&c, self.rho_budget) {
                Some(d) => {
                    let other = &c / &d;
                    pending.push(d);
                    pending.push(other);
                }
                None => return Err(Error::UnfactoredCofactor { cofactor: c }),
            }
        }
        let result = collect(n, primes)?;
        if let Some(cache) = self.cache {
            let distinct: Vec<BigUint> = result.primes().cloned().collect();
            cache.insert(n, &distinct)?;
        }
        Ok(result)
    }

    /// Factors `q^m - 1` by splitting it into cyclotomic values `Φ_d(p)` for
    /// `d | r·m` and factoring each piece.
    pub fn factorize_qm_minus_1(&self, q: PrimePower, m: u32) -> Result<IntFactorization> {
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        let n = q.value().pow(m) - 1u32;
        if let Some(found) = self.from_cache(&n) {
            return Ok(found);
        }
        let e = q.r as u64 * m as u64;
        let uncached = Factorizer {
            cache: None,
            ..*self
        };
        let mut primes = Vec::new();
        for d in divisors_u64(e) {
            let chunk = cyclotomic_value(d, q.p);
            let part = uncached.factorize(&chunk, &primes)?;
            for p in part.primes() {
                if !primes.contains(p) {
                    primes.push(p.clone());
                }
            }
        }
        let result = collect(&n, primes)?;
        if let Some(cache) = self.cache {
            let distinct: Vec<BigUint> = result.primes().cloned().collect();
            cache.insert(&n, &distinct)?;
        }
        Ok(result)
    }

    fn from_cache(&self, n: &BigUint) -> Option<IntFactorization> {
        let primes = self.cache?.lookup(n)?;
        collect(n, primes).ok()
    }

    fn trial_divide(&self, rest: &mut BigUint, primes: &mut Vec<BigUint>) {
        for &p in small_primes() {
            if let Some(small) = rest.to_u64() {
                if p.saturating_mul(p) > small {
                    break;
                }
            }
            if (&*rest % p).is_zero() {
                while (&*rest % p).is_zero() {
                    *rest /= p;
                }
                primes.push(BigUint::from(p));
            }
        }
    }
}

/// Splits `n` into powers of `p` followed by the cofactor (always last).
fn split_by(mut n: BigUint, p: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    if p.is_zero() || p.is_one() {
        out.push(n);
        return out;
    }
    while (&n % p).is_zero() {
        n /= p;
        out.push(p.clone());
    }
    out.push(n);
    out
}

/// Rebuilds exponents of the distinct `primes` by dividing them out of `n`.
fn collect(n: &BigUint, mut primes: Vec<BigUint>) -> Result<IntFactorization> {
    primes.sort();
    primes.dedup();
    let mut rest = n.clone();
    let mut pairs = Vec::with_capacity(primes.len());
    for p in primes {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e == 0 {
            return Err(Error::InvalidArgument(format!("{p} does not divide {n}")));
        }
        pairs.push((p, e));
    }
    if !rest.is_one() {
        return Err(Error::UnfactoredCofactor { cofactor: rest });
    }
    IntFactorization::from_factors(pairs)
}

/// Factorization without cache and with the default rho budget.
pub fn factorize(n: &BigUint, hints: &[BigUint]) -> Result<IntFactorization> {
    Factorizer::new().factorize(n, hints)
}

pub fn factorize_qm_minus_1(q: PrimePower, m: u32) -> Result<IntFactorization> {
    Factorizer::new().factorize_qm_minus_1(q, m)
}

/// `Φ_d(x)` evaluated at `x`, via `Π_{e | d} (x^e - 1)^{μ(d/e)}`.
pub fn cyclotomic_value(d: u64, x: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    let base = BigUint::from(x);
    for e in divisors_u64(d) {
        let term = base.pow(e as u32) - 1u32;
        match mobius(d / e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// Factorization of a machine-sized integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sorted divisors of `n ≥ 1`.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn mobius(n: u64) -> i32 {
    let mut sign = 1;
    for (_, e) in factor_u64(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Multiplicative order of `a` modulo `n` (`n ≥ 1`, `gcd(a, n) = 1`).
pub fn multiplicative_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let a = a % n;
    let mut order = euler_phi(n);
    for (p, _) in factor_u64(order) {
        while order % p == 0 && primality::pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    order
}

/// `ω(n)` for every `n < limit` by a sieve over primes.
pub fn omega_table(limit: usize) -> Vec<u8> {
    let mut omega = vec![0u8; limit];
    for p in 2..limit {
        if omega[p] == 0 {
            let mut k = p;
            while k < limit {
                omega[k] += 1;
                k += p;
            }
        }
    }
    omega
}

/// `11.25 · n^{1/5}`.
pub fn w_bound_rhs(n: f64) -> f64 {
    11.25 * n.powf(0.2)
}

/// Exact test of `w < 11.25 · n^{1/5}`, i.e. `4^5 w^5 < 45^5 n`.
pub fn w_below_bound(w: &BigUint, n: &BigUint) -> bool {
    let lhs = BigUint::from(4u32).pow(5) * w.pow(5);
    let rhs = BigUint::from(45u32).pow(5) * n;
    lhs < rhs
}
