//! Pollard rho with Brent's cycle detection.
//!
//! The polynomial constants run through 1, 2, 3, ... so that every split is
//! reproducible. Callers pass an iteration budget; exhausting it yields `None`.

use super::primality::mul_mod;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Iterations per constant before the next constant is tried.
const ATTEMPT_ITERATIONS: u64 = 1 << 22;
const BATCH: u64 = 128;

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn brent_u64(n: u64, c: u64, max_iter: u64) -> Option<u64> {
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let mut y = 2 % n;
    let mut x = y;
    let mut ys = y;
    let mut g = 1;
    let mut q = 1;
    let mut r = 1u64;
    let mut spent = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += BATCH;
        }
        spent += r;
        r *= 2;
        if spent > max_iter {
            return None;
        }
    }
    if g == n {
        // batch overshot; walk back one step at a time
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: &BigUint, max_iter: u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32) % n;
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut g = BigUint::one();
    let mut q = BigUint::one();
    let mut r = 1u64;
    let mut spent = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        spent += r;
        r *= 2;
        if spent > max_iter {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Finds a nontrivial divisor of the composite `n`, spending at most
/// `budget` polynomial iterations in total.
pub fn find_divisor(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut remaining = budget;
    let mut c = 1u64;
    while remaining > 0 {
        let attempt = remaining.min(ATTEMPT_ITERATIONS);
        let found = match n.to_u64() {
            Some(small) => brent_u64(small, c, attempt).map(BigUint::from),
            None => brent_big(n, &BigUint::from(c), attempt),
        };
        if let Some(d) = found {
            if !d.is_zero() && !d.is_one() {
                return Some(d);
            }
        }
        remaining = remaining.saturating_sub(attempt);
        c += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_semiprimes() {
        let cases: [(u64, u64); 3] = [(1_000_003, 999_983), (4561, 8209), (2_147_483_647, 65_537)];
        for (a, b) in cases {
            let n = BigUint::from(a) * BigUint::from(b);
            let d = find_divisor(&n, 1 << 24).expect("split");
            assert!((&n % &d).is_zero());
            assert!(d != n && !d.is_one());
        }
    }

    #[test]
    fn splits_beyond_u64() {
        let a: BigUint = "1000000007".parse().unwrap();
        let b: BigUint = "1000000000000000003".parse().unwrap();
        let n = &a * &b;
        let d = find_divisor(&n, 1 << 24).expect("split");
        assert!(d == a || d == b);
    }
}
