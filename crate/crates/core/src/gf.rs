//! Arithmetic in `F_{q^m}`, `q = p^r`, represented flat as `F_p[x]/(f)` with
//! `deg f = r·m`.
//!
//! Elements are packed base-`p` integers: the coefficient of `x^i` is the
//! `i`-th base-`p` digit. The subfield `F_q` is the fixed field of the
//! `r`-fold Frobenius and is never represented separately here.
//!
//! Fields with at most [`TABLE_LIMIT`] elements get exponential, logarithm and
//! Zech tables relative to the canonical generator (the smallest primitive
//! element in packed order).

use crate::error::{Error, Result};
use crate::numtheory::{self, IntFactorization, PrimePower};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

/// Largest field that gets log/Zech tables.
pub const TABLE_LIMIT: u64 = 1 << 24;
/// Largest multiplicative group handled by baby-step giant-step.
pub const BSGS_LIMIT: u64 = 1 << 40;
const MAX_DEGREE: usize = 64;
const ZERO_LOG: u32 = u32::MAX;

/// An element of a [`FieldTower`], stored as its packed coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn from_index(index: u64) -> Self {
        FieldElement(index)
    }

    /// Packed base-`p` index; also the lexicographic rank of the element.
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMode {
    /// Build tables when the field has at most [`TABLE_LIMIT`] elements.
    #[default]
    Auto,
    Never,
    /// Fail with `SizeBudgetExceeded` if the tables cannot be built.
    Require,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceTarget {
    /// `Σ_{i<m} α^{q^i}`, landing in `F_q`.
    ToFq,
    /// `Σ_{i<rm} α^{p^i}`, landing in `F_p`.
    Absolute,
}

#[derive(Debug)]
struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `ZERO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

/// `F_p ⊂ F_q ⊂ F_{q^m}` with a deterministic modulus.
#[derive(Debug)]
pub struct FieldTower {
    p: u64,
    r: u32,
    m: u32,
    degree: usize,
    size: u64,
    modulus: Vec<u64>,
    pow_p: Vec<u64>,
    /// Images of `x^j` under `α ↦ α^q`.
    frob_q: Vec<u64>,
    /// Absolute trace of `x^j`.
    trace_basis: Vec<u64>,
    order_factors: OnceLock<IntFactorization>,
    generator: OnceLock<FieldElement>,
    tables: Option<LogTables>,
}

// ---------------------------------------------------------------------------
// polynomials over F_p as coefficient vectors, used to pick the modulus

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(prod, f, p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::numtheory::pow_mod_u64(a, p - 2, p)
}

fn poly_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    trim(&mut a);
    let n = f.len() - 1;
    let lead_inv = inv_mod(f[n], p);
    while a.len() > n {
        let k = a.len() - 1;
        let c = a[k] * lead_inv % p;
        if c != 0 {
            for j in 0..=n {
                let idx = k - n + j;
                a[idx] = (a[idx] + (p - c) * f[j]) % p;
            }
        }
        trim(&mut a);
    }
    a
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    poly_rem(acc, f, p)
}

/// Rabin's test for a monic `f` of degree `n ≥ 1` over `F_p`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // x^{p^i} mod f for i = 0..=n
    let mut powers = vec![poly_rem(x.clone(), f, p)];
    for i in 1..=n {
        let next = poly_powmod(&powers[i - 1], p, f, p);
        powers.push(next);
    }
    let sub_x = |v: &[u64]| {
        let mut out = v.to_vec();
        if out.len() < 2 {
            out.resize(2, 0);
        }
        out[1] = (out[1] + p - 1) % p;
        trim(&mut out);
        out
    };
    if !sub_x(&powers[n]).is_empty() {
        return false;
    }
    for (l, _) in numtheory::factor_u64(n as u64) {
        let g = poly_gcd(f.to_vec(), sub_x(&powers[n / l as usize]), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest monic irreducible of degree `n` over `F_p`.
pub fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut k: u64 = 0;
    loop {
        let mut f = Vec::with_capacity(n + 1);
        let mut rest = k;
        for _ in 0..n {
            f.push(rest % p);
            rest /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        k += 1;
    }
}

impl FieldTower {
    /// Builds `F_{p^{rm}}` viewed as a degree-`m` extension of `F_{p^r}`.
    pub fn new(p: u64, r: u32, m: u32, tables: TableMode) -> Result<Self> {
        let q = PrimePower::new(p, r)?;
        if m == 0 {
            return Err(Error::InvalidArgument("m must be positive".into()));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidArgument(format!(
                "characteristic {p} exceeds the 31-bit limit"
            )));
        }
        let degree = r as usize * m as usize;
        let size = (q.p as u128)
            .checked_pow(degree as u32)
            .unwrap_or(u128::MAX);
        if degree > MAX_DEGREE || size > u64::MAX as u128 {
            return Err(Error::SizeBudgetExceeded {
                what: "field order",
                needed: size,
                limit: u64::MAX as u128,
            });
        }
        let size = size as u64;
        let modulus = smallest_irreducible(p, degree);
        let pow_p: Vec<u64> = (0..degree).map(|i| p.pow(i as u32)).collect();
        let mut tower = FieldTower {
            p,
            r,
            m,
            degree,
            size,
            modulus,
            pow_p,
            frob_q: Vec::new(),
            trace_basis: Vec::new(),
            order_factors: OnceLock::new(),
            generator: OnceLock::new(),
            tables: None,
        };
        tower.frob_q = tower.power_map_images(q.value_u64().expect("q < 2^64"));
        tower.trace_basis = tower.absolute_trace_basis();
        let want_tables = match tables {
            TableMode::Never => false,
            TableMode::Auto => size <= TABLE_LIMIT,
            TableMode::Require => {
                if size > TABLE_LIMIT {
                    return Err(Error::SizeBudgetExceeded {
                        what: "log tables",
                        needed: size as u128,
                        limit: TABLE_LIMIT as u128,
                    });
                }
                true
            }
        };
        if want_tables {
            tower.build_tables()?;
        }
        Ok(tower)
    }

    /// `F_{p^{rm}}` with tables when small enough.
    pub fn build_extension(p: u64, r: u32, m: u32) -> Result<Self> {
        Self::new(p, r, m, TableMode::Auto)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn base(&self) -> PrimePower {
        PrimePower {
            p: self.p,
            r: self.r,
        }
    }

    /// `r·m`, the degree over `F_p`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `q^m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `q^m - 1`.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    /// Monic modulus, ascending coefficients.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size).map(FieldElement)
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.degree || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficients {coeffs:?} do not describe an element of a degree-{} field over F_{}",
                self.degree, self.p
            )));
        }
        Ok(self.pack(coeffs))
    }

    /// The element `c` of the prime field.
    pub fn constant(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(self.p as i64) as u64)
    }

    /// The class of `x`, a root of the modulus.
    pub fn x(&self) -> FieldElement {
        if self.degree == 1 {
            FieldElement((self.p - self.modulus[0]) % self.p)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut v = a.0;
        (0..self.degree)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    #[inline]
    fn unpack(&self, a: FieldElement, out: &mut [u64; MAX_DEGREE]) {
        let mut v = a.0;
        for slot in out.iter_mut().take(self.degree) {
            *slot = v % self.p;
            v /= self.p;
        }
    }

    #[inline]
    fn pack(&self, digits: &[u64]) -> FieldElement {
        let mut v = 0u64;
        for (i, &d) in digits.iter().enumerate().take(self.degree) {
            v += d * self.pow_p[i];
        }
        FieldElement(v)
    }

    // -----------------------------------------------------------------------
    // arithmetic

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let n = self.group_order();
            let la = t.log[a.0 as usize] as u64;
            let lb = t.log[b.0 as usize] as u64;
            let z = t.zech[((lb + n - la) % n) as usize];
            if z == ZERO_LOG {
                return FieldElement::ZERO;
            }
            return FieldElement(t.exp[((la + z as u64) % n) as usize] as u64);
        }
        self.add_digits(a, b, 1)
    }

    fn add_digits(&self, a: FieldElement, b: FieldElement, scale: u64) -> FieldElement {
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        for i in 0..self.degree {
            let d = (x % p + scale * (y % p)) % p;
            out += d * self.pow_p[i];
            x /= p;
            y /= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.add_digits(FieldElement::ZERO, a, self.p - 1)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add_digits(a, b, self.p - 1)
    }

    /// `c·a` for `c` in the prime field.
    pub fn scale(&self, a: FieldElement, c: u64) -> FieldElement {
        self.add_digits(FieldElement::ZERO, a, c % self.p)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = self.group_order();
            let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % n;
            return FieldElement(t.exp[k as usize] as u64);
        }
        self.mul_poly(a, b)
    }

    fn mul_poly(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let n = self.degree;
        let p = self.p;
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..n {
            if da[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                let idx = k - n + j;
                prod[idx] = (prod[idx] + (p - c) * self.modulus[j]) % p;
            }
        }
        self.pack(&prod[..n])
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a^e` for a machine-sized exponent; `0^0 = 1`.
    pub fn pow_u64(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.group_order();
        if let Some(t) = &self.tables {
            let k = (t.log[a.0 as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return FieldElement(t.exp[k] as u64);
        }
        let mut e = e % n;
        if e == 0 {
            return FieldElement::ONE;
        }
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// `α^k` for an arbitrary exponent; `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, k: &BigUint) -> FieldElement {
        if k.is_zero() {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let reduced = (k % self.group_order()).to_u64().unwrap();
        // k > 0 and k ≡ 0 (mod q^m - 1) gives 1, which pow_u64(a, 0) also returns
        self.pow_u64(a, reduced)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow_u64(a, self.group_order() - 1))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    // -----------------------------------------------------------------------
    // Frobenius and traces

    /// Images of the basis `x^j` under `α ↦ α^e` (an `F_p`-linear map when
    /// `e` is a power of `p`).
    fn power_map_images(&self, e: u64) -> Vec<u64> {
        let xe = self.pow_u64(self.x(), e);
        let mut images = Vec::with_capacity(self.degree);
        let mut acc = FieldElement::ONE;
        for _ in 0..self.degree {
            images.push(acc.0);
            acc = self.mul(acc, xe);
        }
        images
    }

    fn apply_linear(&self, images: &[u64], a: FieldElement) -> FieldElement {
        let mut digits = [0u64; MAX_DEGREE];
        self.unpack(a, &mut digits);
        let mut out = FieldElement::ZERO;
        for (j, &c) in digits.iter().enumerate().take(self.degree) {
            if c != 0 {
                out = self.add_digits(out, FieldElement(images[j]), c);
            }
        }
        out
    }

    fn absolute_trace_basis(&self) -> Vec<u64> {
        let frob_p = self.power_map_images(self.p);
        (0..self.degree)
            .map(|j| {
                let mut term = FieldElement(self.pow_p[j]);
                let mut sum = FieldElement::ZERO;
                for _ in 0..self.degree {
                    sum = self.add_digits(sum, term, 1);
                    term = self.apply_linear(&frob_p, term);
                }
                debug_assert!(sum.0 < self.p);
                sum.0
            })
            .collect()
    }

    /// `α^{q^i}`.
    pub fn frobenius(&self, a: FieldElement, i: u64) -> FieldElement {
        let i = i % self.m as u64;
        if a.0 == 0 || i == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let n = self.group_order() as u128;
            let qi = (self.q() as u128).pow(i as u32) % n;
            let k = t.log[a.0 as usize] as u128 * qi % n;
            return FieldElement(t.exp[k as usize] as u64);
        }
        let mut out = a;
        for _ in 0..i {
            out = self.apply_linear(&self.frob_q, out);
        }
        out
    }

    /// The `m` conjugates `α, α^q, …, α^{q^{m-1}}`.
    pub fn conjugates(&self, a: FieldElement) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.m as usize);
        let mut cur = a;
        for _ in 0..self.m {
            out.push(cur);
            cur = self.apply_linear(&self.frob_q, cur);
        }
        out
    }

    /// Tabulates an `F_p`-linear map by its images of the basis `x^j`.
    pub fn linear_map(&self, f: impl Fn(FieldElement) -> FieldElement) -> LinearMap {
        LinearMap {
            images: (0..self.degree)
                .map(|j| f(FieldElement(self.pow_p[j])).0)
                .collect(),
        }
    }

    pub fn apply_map(&self, map: &LinearMap, a: FieldElement) -> FieldElement {
        self.apply_linear(&map.images, a)
    }

    /// Absolute trace as an integer in `[0, p)`.
    pub fn absolute_trace(&self, a: FieldElement) -> u64 {
        let mut digits = [0u64; MAX_DEGREE];
        self.unpack(a, &mut digits);
        digits
            .iter()
            .zip(&self.trace_basis)
            .fold(0, |acc, (&c, &t)| (acc + c * t) % self.p)
    }

    pub fn trace(&self, a: FieldElement, target: TraceTarget) -> FieldElement {
        match target {
            TraceTarget::Absolute => FieldElement(self.absolute_trace(a)),
            TraceTarget::ToFq => self
                .conjugates(a)
                .into_iter()
                .fold(FieldElement::ZERO, |acc, c| self.add(acc, c)),
        }
    }

    /// True iff `α^q = α`.
    pub fn in_base_field(&self, a: FieldElement) -> bool {
        self.apply_linear(&self.frob_q, a) == a
    }

    /// All elements of `F_q` inside this field, in packed order.
    pub fn base_field_elements(&self) -> Vec<FieldElement> {
        let basis = self.fixed_space_basis();
        let mut out = vec![FieldElement::ZERO];
        for b in basis {
            let current = out.clone();
            for c in 1..self.p {
                let scaled = self.scale(b, c);
                out.extend(current.iter().map(|&e| self.add_digits(e, scaled, 1)));
            }
        }
        out.sort();
        out
    }

    /// `F_p`-basis of `ker(Frob_q - 1)` by Gaussian elimination.
    fn fixed_space_basis(&self) -> Vec<FieldElement> {
        let n = self.degree;
        let p = self.p;
        // columns: (Frob_q - 1) x^j, as digit vectors
        let mut cols: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let img = self.sub(FieldElement(self.frob_q[j]), FieldElement(self.pow_p[j]));
                self.coeffs(img)
            })
            .collect();
        kernel_mod_p(&mut cols, n, p)
            .into_iter()
            .map(|v| self.pack(&v))
            .collect()
    }

    // -----------------------------------------------------------------------
    // multiplicative structure

    /// Factorization of `q^m - 1`, computed once per tower.
    pub fn order_factorization(&self) -> Result<&IntFactorization> {
        if let Some(f) = self.order_factors.get() {
            return Ok(f);
        }
        let f = numtheory::factorize_qm_minus_1(self.base(), self.m)?;
        Ok(self.order_factors.get_or_init(|| f))
    }

    /// Installs a precomputed factorization of `q^m - 1`.
    pub fn set_order_factorization(&self, f: IntFactorization) -> Result<()> {
        if f.n() != &BigUint::from(self.group_order()) {
            return Err(Error::InvalidArgument(
                "factorization is not of q^m - 1".into(),
            ));
        }
        let _ = self.order_factors.set(f);
        Ok(())
    }

    fn order_primes(&self) -> Result<Vec<u64>> {
        Ok(self
            .order_factorization()?
            .primes_u64()
            .expect("q^m - 1 < 2^64"))
    }

    fn is_primitive_by_powers(&self, a: FieldElement, primes: &[u64]) -> bool {
        let n = self.group_order();
        !a.is_zero()
            && primes
                .iter()
                .all(|&l| self.pow_u64(a, n / l) != FieldElement::ONE)
    }

    /// The smallest element (packed order) of multiplicative order `q^m - 1`.
    pub fn find_generator(&self) -> Result<FieldElement> {
        if let Some(g) = self.generator.get() {
            return Ok(*g);
        }
        let primes = self.order_primes()?;
        let g = (1..self.size)
            .map(FieldElement)
            .find(|&a| self.is_primitive_by_powers(a, &primes))
            .expect("a finite field has a primitive element");
        Ok(*self.generator.get_or_init(|| g))
    }

    fn build_tables(&mut self) -> Result<()> {
        let g = self.find_generator()?;
        let n = self.group_order() as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![ZERO_LOG; self.size as usize];
        let mut cur = FieldElement::ONE;
        for k in 0..n {
            exp.push(cur.0 as u32);
            log[cur.0 as usize] = k as u32;
            cur = self.mul_poly(cur, g);
        }
        debug_assert_eq!(cur, FieldElement::ONE);
        let zech = (0..n)
            .map(|k| {
                let s = self.add_digits(FieldElement::ONE, FieldElement(exp[k] as u64), 1);
                log[s.0 as usize]
            })
            .collect();
        self.tables = Some(LogTables { exp, log, zech });
        Ok(())
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if let Some(t) = &self.tables {
            let n = self.group_order();
            return Ok(n / (t.log[a.0 as usize] as u64).gcd(&n));
        }
        let mut order = self.group_order();
        for l in self.order_primes()? {
            while order % l == 0 && self.pow_u64(a, order / l) == FieldElement::ONE {
                order /= l;
            }
        }
        Ok(order)
    }

    pub fn is_primitive(&self, a: FieldElement) -> Result<bool> {
        if a.is_zero() {
            return Ok(false);
        }
        if let Some(t) = &self.tables {
            let n = self.group_order();
            return Ok((t.log[a.0 as usize] as u64).gcd(&n) == 1);
        }
        Ok(self.is_primitive_by_powers(a, &self.order_primes()?))
    }

    /// True iff `α` is not an `l`-th power for any prime `l | e`.
    pub fn is_e_free(&self, a: FieldElement, e: &BigUint) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let n = BigUint::from(self.group_order());
        if e.is_zero() || !(&n % e).is_zero() {
            return Err(Error::InvalidArgument(format!("{e} does not divide {n}")));
        }
        let primes: Vec<u64> = self
            .order_primes()?
            .into_iter()
            .filter(|&l| (e % l).is_zero())
            .collect();
        Ok(self.is_free_for_primes(a, &primes))
    }

    /// `e`-freeness for `e` given by its distinct primes.
    pub fn is_free_for_primes(&self, a: FieldElement, primes: &[u64]) -> bool {
        if a.is_zero() {
            return false;
        }
        let n = self.group_order();
        if let Some(t) = &self.tables {
            let k = t.log[a.0 as usize] as u64;
            return primes.iter().all(|&l| k % l != 0);
        }
        primes
            .iter()
            .all(|&l| self.pow_u64(a, n / l) != FieldElement::ONE)
    }

    /// `k ∈ [0, q^m - 2]` with `g^k = α`.
    pub fn discrete_log(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if let Some(t) = &self.tables {
            return Ok(t.log[a.0 as usize] as u64);
        }
        let n = self.group_order();
        if n > BSGS_LIMIT {
            return Err(Error::SizeBudgetExceeded {
                what: "discrete logarithm",
                needed: n as u128,
                limit: BSGS_LIMIT as u128,
            });
        }
        let g = self.find_generator()?;
        let step = (n as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut cur = FieldElement::ONE;
        for j in 0..step {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, g);
        }
        let giant = self.inv(self.pow_u64(g, step))?;
        let mut gamma = a;
        for i in 0..=step {
            if let Some(&j) = baby.get(&gamma) {
                return Ok((i * step + j) % n);
            }
            gamma = self.mul(gamma, giant);
        }
        unreachable!("g generates the multiplicative group")
    }

    /// Log of a nonzero element when tables exist.
    #[inline]
    pub fn table_log(&self, a: FieldElement) -> Option<u32> {
        let t = self.tables.as_ref()?;
        let l = t.log[a.0 as usize];
        (l != ZERO_LOG).then_some(l)
    }

    /// `g^k` when tables exist.
    #[inline]
    pub fn table_exp(&self, k: u64) -> Option<FieldElement> {
        let t = self.tables.as_ref()?;
        Some(FieldElement(
            t.exp[(k % self.group_order()) as usize] as u64,
        ))
    }

    /// Log-domain view for tight loops; `None` without tables.
    pub fn log_domain(&self) -> Option<LogDomain<'_>> {
        let t = self.tables.as_ref()?;
        Some(LogDomain {
            n: self.group_order() as u32,
            exp: &t.exp,
            log: &t.log,
            zech: &t.zech,
        })
    }

    // -----------------------------------------------------------------------
    // rendering

    /// `"c0,c1,…"` with ascending powers.
    pub fn render(&self, a: FieldElement) -> String {
        self.coeffs(a)
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn repr(&self, a: FieldElement) -> ElementRepr {
        ElementRepr {
            coeffs: self.render(a),
            power: self.table_log(a).map(|k| format!("g^{k}")),
        }
    }
}

/// An `F_p`-linear endomorphism given by the images of the basis `x^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    images: Vec<u64>,
}

impl LinearMap {
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|&v| v == 0)
    }
}

/// JSON form of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRepr {
    pub coeffs: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power: Option<String>,
}

impl fmt::Display for ElementRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.power {
            Some(pw) => write!(f, "[{}] = {}", self.coeffs, pw),
            None => write!(f, "[{}]", self.coeffs),
        }
    }
}

/// Borrowed log/Zech tables. Elements are logarithms in `[0, n)`;
/// [`LogDomain::ZERO`] stands for the zero element.
#[derive(Debug, Clone, Copy)]
pub struct LogDomain<'a> {
    pub n: u32,
    exp: &'a [u32],
    log: &'a [u32],
    zech: &'a [u32],
}

impl LogDomain<'_> {
    pub const ZERO: u32 = ZERO_LOG;

    #[inline]
    pub fn log_of(&self, a: FieldElement) -> u32 {
        self.log[a.0 as usize]
    }

    #[inline]
    pub fn element(&self, l: u32) -> FieldElement {
        if l == ZERO_LOG {
            FieldElement::ZERO
        } else {
            FieldElement(self.exp[l as usize] as u64)
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == ZERO_LOG || b == ZERO_LOG {
            return ZERO_LOG;
        }
        let s = a as u64 + b as u64;
        (s % self.n as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if a == ZERO_LOG {
            return b;
        }
        if b == ZERO_LOG {
            return a;
        }
        let d = if b >= a { b - a } else { b + self.n - a };
        let z = self.zech[d as usize];
        if z == ZERO_LOG {
            return ZERO_LOG;
        }
        let s = a as u64 + z as u64;
        (s % self.n as u64) as u32
    }
}

/// Kernel of the `rows × cols.len()` matrix whose columns are `cols`, over
/// `F_p`. Returns a basis as coefficient vectors of length `cols.len()`.
pub(crate) fn kernel_mod_p(cols: &mut [Vec<u64>], rows: usize, p: u64) -> Vec<Vec<u64>> {
    let ncols = cols.len();
    // row-major copy
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            (0..ncols)
                .map(|j| cols[j].get(i).copied().unwrap_or(0) % p)
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        let inv = numtheory::pow_mod_u64(a[row][col], p - 2, p);
        for v in a[row].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows {
            if i != row && a[i][col] != 0 {
                let c = a[i][col];
                for j in 0..ncols {
                    a[i][j] = (a[i][j] + (p - c) * a[row][j]) % p;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[r][f]) % p;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldTower {
        FieldTower::build_extension(3, 1, 2).unwrap()
    }

    #[test]
    fn moduli_are_lexicographically_smallest() {
        assert_eq!(f9().modulus(), &[1, 0, 1]);
        let f3 = FieldTower::build_extension(3, 1, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
        assert_eq!(f3.size(), 3);
        let f27 = FieldTower::build_extension(3, 3, 1).unwrap();
        assert_eq!(f27.size(), 27);
        assert_eq!(f27.m(), 1);
        // x^3 + 2x + 1 is the first irreducible cubic in packed order
        assert_eq!(f27.modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn prime_field_generator_is_two() {
        let f3 = FieldTower::build_extension(3, 1, 1).unwrap();
        assert_eq!(f3.find_generator().unwrap(), f3.constant(2));
    }

    #[test]
    fn f9_generator_properties() {
        let f = f9();
        let g = f.find_generator().unwrap();
        let minus_one = f.constant(-1);
        assert_eq!(f.pow_u64(g, 4), minus_one);
        assert_eq!(f.pow_u64(g, 8), FieldElement::ONE);
        let primitive = f.elements().filter(|&a| f.is_primitive(a).unwrap()).count();
        assert_eq!(primitive, 4);
        assert_eq!(f.discrete_log(FieldElement::ONE).unwrap(), 0);
        assert_eq!(f.discrete_log(g).unwrap(), 1);
        let g3 = f.pow_u64(g, 3);
        assert_eq!(f.discrete_log(g3).unwrap(), 3);
        assert!(f.is_primitive(g3).unwrap());
        let g2 = f.square(g);
        assert!(!f.is_e_free(g2, &BigUint::from(8u32)).unwrap());
        assert!(f.is_e_free(g2, &BigUint::from(1u32)).unwrap());
        assert!(f.is_e_free(g, &BigUint::from(8u32)).unwrap());
        assert!(matches!(
            f.is_e_free(FieldElement::ZERO, &BigUint::from(8u32)),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn frobenius_conjugates_i() {
        let f = f9();
        let i = f.x(); // root of x^2 + 1
        assert_eq!(f.frobenius(i, 1), f.neg(i));
        assert_eq!(f.frobenius(i, 0), i);
        assert_eq!(f.frobenius(i, 2), i);
    }

    #[test]
    fn trace_examples() {
        let f = FieldTower::build_extension(3, 1, 3).unwrap();
        assert_eq!(
            f.trace(FieldElement::ZERO, TraceTarget::ToFq),
            FieldElement::ZERO
        );
        assert_eq!(
            f.trace(FieldElement::ONE, TraceTarget::ToFq),
            FieldElement::ZERO
        );
        let nonzero = f
            .elements()
            .filter(|&a| !f.trace(a, TraceTarget::ToFq).is_zero())
            .count();
        assert_eq!(nonzero, 18);
        // over F_9 ⊂ F_81 the trace to F_q of 1 is m = 2
        let g = FieldTower::build_extension(3, 2, 2).unwrap();
        assert_eq!(g.trace(FieldElement::ONE, TraceTarget::ToFq), g.constant(2));
        assert_eq!(
            g.trace(FieldElement::ONE, TraceTarget::Absolute),
            g.constant(1)
        );
    }

    #[test]
    fn pow_conventions() {
        let f = f9();
        assert_eq!(
            f.pow(FieldElement::ZERO, &BigUint::zero()),
            FieldElement::ONE
        );
        assert_eq!(
            f.pow(FieldElement::ZERO, &BigUint::from(5u32)),
            FieldElement::ZERO
        );
        for a in f.elements().skip(1) {
            assert_eq!(f.pow(a, &BigUint::from(8u32)), FieldElement::ONE);
            assert_eq!(f.pow(a, &BigUint::zero()), FieldElement::ONE);
        }
    }

    #[test]
    fn tables_agree_with_polynomial_arithmetic() {
        let with = FieldTower::new(3, 1, 4, TableMode::Require).unwrap();
        let without = FieldTower::new(3, 1, 4, TableMode::Never).unwrap();
        for a in with.elements() {
            for b in with.elements() {
                assert_eq!(with.mul(a, b), without.mul(a, b));
                assert_eq!(with.add(a, b), without.add(a, b));
            }
        }
        for a in with.elements().skip(1) {
            assert_eq!(
                with.discrete_log(a).unwrap(),
                without.discrete_log(a).unwrap()
            );
            assert_eq!(with.frobenius(a, 1), without.frobenius(a, 1));
        }
    }

    #[test]
    fn base_field_elements_of_f81_over_f9() {
        let f = FieldTower::build_extension(3, 2, 2).unwrap();
        let base = f.base_field_elements();
        assert_eq!(base.len(), 9);
        assert!(base.iter().all(|&a| f.in_base_field(a)));
        let count = f.elements().filter(|&a| f.in_base_field(a)).count();
        assert_eq!(count, 9);
    }

    #[test]
    fn require_tables_respects_budget() {
        let err = FieldTower::new(3, 1, 16, TableMode::Require).unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { .. }));
        let big = FieldTower::new(3, 1, 16, TableMode::Auto).unwrap();
        assert!(!big.has_tables());
    }

    #[test]
    fn rejects_non_prime() {
        assert!(matches!(
            FieldTower::build_extension(9, 1, 2),
            Err(Error::NotPrime(9))
        ));
    }

    #[test]
    fn render_forms() {
        let f = f9();
        let g = f.find_generator().unwrap();
        let r = f.repr(g);
        assert_eq!(r.power.as_deref(), Some("g^1"));
        assert_eq!(r.coeffs.split(',').count(), 2);
    }
}
