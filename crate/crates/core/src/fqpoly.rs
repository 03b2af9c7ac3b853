//! Polynomials over `F_q`, the factorization of `x^m - 1`, and the
//! `F_q[x]`-module structure of `F_{q^m}` given by
//! `f ∘ α = Σ a_i α^{q^i}` (the sum includes the constant term `i = 0`).
//!
//! `F_q` is held as its own one-level tower `F_p[y]/(h)` and embedded into
//! `F_{q^m}` by sending `y` to the smallest root of `h` in packed order.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldTower, LinearMap, TableMode};
use crate::numtheory::{divisors_u64, euler_phi, multiplicative_order, PrimePower};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

/// Dense polynomial over `F_q`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPolynomial {
    coeffs: Vec<FieldElement>,
}

impl FqPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![FieldElement::ONE],
        }
    }

    pub fn x() -> Self {
        Self {
            coeffs: vec![FieldElement::ZERO, FieldElement::ONE],
        }
    }

    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Polynomial with prime-field coefficients given as integers.
    pub fn from_ints(fq: &FieldTower, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| fq.constant(c)).collect())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FieldElement::ONE
    }

    fn cmp_canonical(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

/// Arithmetic in `F_q[x]` for a given coefficient field.
#[derive(Debug, Clone, Copy)]
pub struct PolyRing<'a> {
    pub fq: &'a FieldTower,
}

impl<'a> PolyRing<'a> {
    pub fn new(fq: &'a FieldTower) -> Self {
        Self { fq }
    }

    pub fn add(&self, a: &FqPolynomial, b: &FqPolynomial) -> FqPolynomial {
        let n = a.coeffs.len().max(b.coeffs.len());
        FqPolynomial::new(
            (0..n)
                .map(|i| {
                    let x = a.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    let y = b.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    self.fq.add(x, y)
                })
                .collect(),
        )
    }

    pub fn sub(&self, a: &FqPolynomial, b: &FqPolynomial) -> FqPolynomial {
        let n = a.coeffs.len().max(b.coeffs.len());
        FqPolynomial::new(
            (0..n)
                .map(|i| {
                    let x = a.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    let y = b.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO);
                    self.fq.sub(x, y)
                })
                .collect(),
        )
    }

    pub fn scale(&self, a: &FqPolynomial, c: FieldElement) -> FqPolynomial {
        FqPolynomial::new(a.coeffs.iter().map(|&x| self.fq.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FqPolynomial, b: &FqPolynomial) -> FqPolynomial {
        if a.is_zero() || b.is_zero() {
            return FqPolynomial::zero();
        }
        let mut out = vec![FieldElement::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.fq.add(out[i + j], self.fq.mul(x, y));
            }
        }
        FqPolynomial::new(out)
    }

    pub fn pow(&self, a: &FqPolynomial, mut e: u64) -> FqPolynomial {
        let mut acc = FqPolynomial::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, a: &FqPolynomial, b: &FqPolynomial) -> (FqPolynomial, FqPolynomial) {
        let db = b.degree().expect("division by the zero polynomial");
        let lead_inv = self.fq.inv(b.lead()).expect("nonzero leading coefficient");
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return (FqPolynomial::zero(), a.clone());
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = self.fq.mul(rem[k], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k - db] = c;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let idx = k - db + j;
                rem[idx] = self.fq.sub(rem[idx], self.fq.mul(c, bj));
            }
        }
        rem.truncate(db);
        (FqPolynomial::new(quot), FqPolynomial::new(rem))
    }

    pub fn rem(&self, a: &FqPolynomial, b: &FqPolynomial) -> FqPolynomial {
        self.divrem(a, b).1
    }

    /// Exact quotient, or `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &FqPolynomial, b: &FqPolynomial) -> Option<FqPolynomial> {
        let (q, r) = self.divrem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, a: &FqPolynomial) -> FqPolynomial {
        if a.is_zero() {
            return a.clone();
        }
        let inv = self.fq.inv(a.lead()).expect("nonzero lead");
        self.scale(a, inv)
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &FqPolynomial, b: &FqPolynomial) -> FqPolynomial {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn powmod(&self, base: &FqPolynomial, e: &BigUint, modulus: &FqPolynomial) -> FqPolynomial {
        let mut acc = FqPolynomial::one();
        let base = self.rem(base, modulus);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        self.rem(&acc, modulus)
    }

    /// `x^m - 1`.
    pub fn xm1(&self, m: usize) -> FqPolynomial {
        let mut coeffs = vec![FieldElement::ZERO; m + 1];
        coeffs[0] = self.fq.constant(-1);
        coeffs[m] = FieldElement::ONE;
        FqPolynomial::new(coeffs)
    }

    pub fn eval(&self, f: &FqPolynomial, x: FieldElement) -> FieldElement {
        f.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| {
            self.fq.add(self.fq.mul(acc, x), c)
        })
    }

    /// `"c0 + c1*x + c2*x^2"`, zero terms omitted.
    pub fn render(&self, f: &FqPolynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = f
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let coeff = if self.fq.degree() == 1 {
                    self.fq.render(c)
                } else {
                    format!("({})", self.fq.render(c))
                };
                match i {
                    0 => coeff,
                    1 => format!("{coeff}*x"),
                    _ => format!("{coeff}*x^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// Orbits of `k ↦ q·k` on `Z/n`, each sorted, ordered by smallest member.
pub fn cyclotomic_cosets(q: u64, n: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut cosets = Vec::new();
    for start in 0..n {
        if seen[start as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut k = start;
        while !seen[k as usize] {
            seen[k as usize] = true;
            coset.push(k);
            k = ((k as u128 * q as u128) % n as u128) as u64;
        }
        coset.sort_unstable();
        cosets.push(coset);
    }
    cosets
}

/// Degrees of the distinct irreducible factors of `x^m - 1` over `F_q`,
/// without computing the factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XmOneShape {
    pub q: u64,
    pub m: u64,
    /// p-free part of `m`.
    pub m0: u64,
    /// `m = m0 · p^a`.
    pub a: u32,
    /// Sorted ascending.
    pub degrees: Vec<u64>,
}

impl XmOneShape {
    pub fn new(q: PrimePower, m: u64) -> Self {
        let mut m0 = m;
        let mut a = 0;
        while m0 % q.p == 0 {
            m0 /= q.p;
            a += 1;
        }
        let qv = q.value_u64().expect("q fits in u64");
        let mut degrees: Vec<u64> = divisors_u64(m0)
            .into_iter()
            .flat_map(|d| {
                let u = multiplicative_order(qv % d.max(1), d);
                std::iter::repeat_n(u, (euler_phi(d) / u) as usize)
            })
            .collect();
        degrees.sort_unstable();
        Self {
            q: qv,
            m,
            m0,
            a,
            degrees,
        }
    }

    pub fn multiplicity(&self) -> u64 {
        self.m / self.m0
    }

    pub fn distinct_count(&self) -> usize {
        self.degrees.len()
    }

    /// `Ω(x^m - 1) = 2^{#distinct factors}`.
    pub fn omega(&self) -> BigUint {
        BigUint::one() << self.degrees.len()
    }
}

/// Distinct monic irreducible factors of `x^m - 1` with common multiplicity `p^a`.
#[derive(Debug, Clone)]
pub struct PolyFactorization {
    pub q: PrimePower,
    pub m: u32,
    pub m0: u32,
    pub a: u32,
    /// `p^a`.
    pub multiplicity: u64,
    /// Sorted by degree, then coefficients from the top down.
    pub factors: Vec<FqPolynomial>,
    /// The `d | m0` with `factor | Φ_d`.
    pub cyclotomic_index: Vec<u64>,
}

impl PolyFactorization {
    pub fn degrees(&self) -> Vec<u64> {
        self.factors
            .iter()
            .map(|f| f.degree().unwrap() as u64)
            .collect()
    }

    pub fn count(&self) -> usize {
        self.factors.len()
    }

    /// `(degree, multiplicity)` of every factor of `x^m - 1`.
    pub fn shape(&self) -> Vec<(u64, u64)> {
        self.degrees()
            .into_iter()
            .map(|d| (d, self.multiplicity))
            .collect()
    }

    /// Product of the distinct factors raised to the common multiplicity.
    pub fn reconstruct(&self, ring: &PolyRing) -> FqPolynomial {
        let radical = self
            .factors
            .iter()
            .fold(FqPolynomial::one(), |acc, f| ring.mul(&acc, f));
        ring.pow(&radical, self.multiplicity)
    }
}

/// Splits the squarefree `f`, all of whose irreducible factors have degree `u`.
fn equal_degree_split(
    ring: &PolyRing,
    f: FqPolynomial,
    u: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<FqPolynomial>,
) {
    let n = f.degree().unwrap();
    if n == u {
        out.push(ring.monic(&f));
        return;
    }
    let q = ring.fq.size();
    let exponent = (BigUint::from(q).pow(u as u32) - 1u32) >> 1;
    loop {
        let a = FqPolynomial::new(
            (0..n)
                .map(|_| FieldElement::from_index(rng.gen_range(0..q)))
                .collect(),
        );
        if a.degree().is_none_or(|d| d == 0) {
            continue;
        }
        let mut g = ring.gcd(&a, &f);
        let dg = g.degree().unwrap();
        if dg == 0 || dg == n {
            let b = ring.sub(&ring.powmod(&a, &exponent, &f), &FqPolynomial::one());
            g = ring.gcd(&b, &f);
        }
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = ring.div_exact(&f, &g).expect("gcd divides");
            equal_degree_split(ring, g, u, rng, out);
            equal_degree_split(ring, h, u, rng, out);
            return;
        }
    }
}

/// Factors `x^m - 1` over `fq`. Coset sizes fix the degree and number of the
/// factors of each `Φ_d`; equal-degree splitting produces the factors.
pub fn factor_xm1(fq: &FieldTower, m: u32) -> Result<PolyFactorization> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    if fq.m() != 1 {
        return Err(Error::InvalidArgument(
            "coefficient field must be a one-level tower".into(),
        ));
    }
    let base = fq.base();
    let ring = PolyRing::new(fq);
    let q = fq.size();
    let mut m0 = m as u64;
    let mut a = 0;
    while m0 % base.p == 0 {
        m0 /= base.p;
        a += 1;
    }
    let mut cyclotomic: Vec<(u64, FqPolynomial)> = Vec::new();
    let mut factors: Vec<(u64, FqPolynomial)> = Vec::new();
    for d in divisors_u64(m0) {
        // Φ_d = (x^d - 1) / Π_{e | d, e < d} Φ_e
        let mut phi_d = ring.xm1(d as usize);
        for (e, phi_e) in &cyclotomic {
            if d % e == 0 {
                phi_d = ring.div_exact(&phi_d, phi_e).expect("cyclotomic division");
            }
        }
        let u = multiplicative_order(q % d, d) as usize;
        let cosets = cyclotomic_cosets(q, d)
            .into_iter()
            .filter(|c| c.iter().all(|&k| num_integer::gcd(k, d) == 1))
            .count();
        let mut rng = ChaCha8Rng::seed_from_u64(q ^ (m as u64) << 20 ^ d << 40);
        let mut pieces = Vec::new();
        equal_degree_split(&ring, phi_d.clone(), u, &mut rng, &mut pieces);
        debug_assert_eq!(pieces.len(), cosets);
        if pieces.len() != cosets || pieces.iter().any(|f| f.degree() != Some(u)) {
            return Err(Error::InvalidArgument(format!(
                "splitting Φ_{d} over F_{q} disagrees with its cyclotomic cosets"
            )));
        }
        factors.extend(pieces.into_iter().map(|f| (d, f)));
        cyclotomic.push((d, phi_d));
    }
    factors.sort_by(|x, y| x.1.cmp_canonical(&y.1));
    Ok(PolyFactorization {
        q: base,
        m,
        m0: m0 as u32,
        a,
        multiplicity: base.p.pow(a),
        cyclotomic_index: factors.iter().map(|(d, _)| *d).collect(),
        factors: factors.into_iter().map(|(_, f)| f).collect(),
    })
}

/// Ω, Φ, μ′ and Θ of a polynomial known through its factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyStats {
    pub distinct: usize,
    pub omega: BigUint,
    pub phi: BigUint,
    pub mu_prime: i8,
    pub theta: BigRational,
}

/// Stats of `Π f_i^{e_i}` from the `(deg f_i, e_i)` pairs; entries with
/// `e_i = 0` are ignored.
pub fn poly_stats(q: u64, factors: &[(u64, u64)]) -> PolyStats {
    let q = BigUint::from(q);
    let mut phi = BigUint::one();
    let mut total_degree = 0u64;
    let mut distinct = 0usize;
    let mut squarefree = true;
    for &(deg, mult) in factors {
        if mult == 0 {
            continue;
        }
        distinct += 1;
        squarefree &= mult == 1;
        let qd = q.pow(deg as u32);
        phi *= (&qd - 1u32) * qd.pow((mult - 1) as u32);
        total_degree += deg * mult;
    }
    let mu_prime = match (squarefree, distinct % 2) {
        (false, _) => 0,
        (true, 0) => 1,
        (true, _) => -1,
    };
    let theta = BigRational::new(
        BigInt::from(phi.clone()),
        BigInt::from(q.pow(total_degree as u32)),
    );
    PolyStats {
        distinct,
        omega: BigUint::one() << distinct,
        phi,
        mu_prime,
        theta,
    }
}

/// A monic divisor of `x^m - 1`, as exponents on the distinct factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PolyDivisor {
    pub exps: Vec<u64>,
}

impl PolyDivisor {
    pub fn one(k: usize) -> Self {
        Self { exps: vec![0; k] }
    }

    /// The radical as a bitmask over factor indices.
    pub fn support_mask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.exps.len()).filter(|&i| self.exps[i] > 0).collect()
    }

    pub fn divides(&self, other: &PolyDivisor) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn degree(&self, degrees: &[u64]) -> u64 {
        self.exps.iter().zip(degrees).map(|(e, d)| e * d).sum()
    }
}

/// `F_{q^m}` as an `F_q[x]`-module.
#[derive(Debug)]
pub struct FqModule<'t> {
    tower: &'t FieldTower,
    fq: FieldTower,
    factorization: PolyFactorization,
    /// Image in `F_{q^m}` of each `F_q` element, indexed by packed value.
    embedding: Vec<FieldElement>,
    /// `α ↦ ((x^m - 1)/h_i) ∘ α` for each distinct factor `h_i`.
    cofactor_maps: Vec<LinearMap>,
}

impl<'t> FqModule<'t> {
    pub fn new(tower: &'t FieldTower) -> Result<Self> {
        let fq = FieldTower::new(tower.p(), tower.r(), 1, TableMode::Auto)?;
        let factorization = factor_xm1(&fq, tower.m())?;
        if factorization.count() > 64 {
            return Err(Error::InvalidArgument(
                "more than 64 distinct factors of x^m - 1".into(),
            ));
        }
        // F_q = F_p[y]/(h); send y to the smallest root of h among the fixed points
        let h = fq.modulus();
        let root = tower
            .base_field_elements()
            .into_iter()
            .find(|&t| {
                h.iter()
                    .rev()
                    .fold(FieldElement::ZERO, |acc, &c| {
                        tower.add(tower.mul(acc, t), tower.constant(c as i64))
                    })
                    .is_zero()
            })
            .expect("F_q embeds in F_{q^m}");
        let mut powers = Vec::with_capacity(fq.degree());
        let mut cur = FieldElement::ONE;
        for _ in 0..fq.degree() {
            powers.push(cur);
            cur = tower.mul(cur, root);
        }
        let embedding = fq
            .elements()
            .map(|c| {
                fq.coeffs(c)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElement::ZERO, |acc, (&d, &pw)| {
                        tower.add(acc, tower.scale(pw, d))
                    })
            })
            .collect();
        let mut module = FqModule {
            tower,
            fq,
            factorization,
            embedding,
            cofactor_maps: Vec::new(),
        };
        let ring = module.ring();
        let xm1 = ring.xm1(tower.m() as usize);
        let maps: Vec<LinearMap> = module
            .factorization
            .factors
            .iter()
            .map(|h| {
                let cof = ring.div_exact(&xm1, h).expect("factor divides x^m - 1");
                module.action_map(&cof)
            })
            .collect();
        module.cofactor_maps = maps;
        Ok(module)
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.tower
    }

    pub fn fq(&self) -> &FieldTower {
        &self.fq
    }

    pub fn ring(&self) -> PolyRing<'_> {
        PolyRing::new(&self.fq)
    }

    pub fn factorization(&self) -> &PolyFactorization {
        &self.factorization
    }

    pub fn factor_count(&self) -> usize {
        self.factorization.count()
    }

    pub fn embed(&self, c: FieldElement) -> FieldElement {
        self.embedding[c.index() as usize]
    }

    /// `f ∘ α = Σ a_i α^{q^i}`.
    pub fn apply(&self, f: &FqPolynomial, alpha: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        let mut conj = alpha;
        for &c in f.coeffs() {
            if !c.is_zero() {
                acc = self.tower.add(acc, self.tower.mul(self.embed(c), conj));
            }
            conj = self.tower.frobenius(conj, 1);
        }
        acc
    }

    /// The action of `f` as an `F_p`-linear map.
    pub fn action_map(&self, f: &FqPolynomial) -> LinearMap {
        self.tower.linear_map(|b| self.apply(f, b))
    }

    /// Full divisor `x^m - 1`.
    pub fn full_divisor(&self) -> PolyDivisor {
        PolyDivisor {
            exps: vec![self.factorization.multiplicity; self.factor_count()],
        }
    }

    pub fn divisor_polynomial(&self, g: &PolyDivisor) -> FqPolynomial {
        let ring = self.ring();
        self.factorization
            .factors
            .iter()
            .zip(&g.exps)
            .fold(FqPolynomial::one(), |acc, (h, &e)| {
                ring.mul(&acc, &ring.pow(h, e))
            })
    }

    /// Expresses a monic divisor of `x^m - 1` through the factor exponents.
    pub fn divisor_of(&self, g: &FqPolynomial) -> Result<PolyDivisor> {
        let ring = self.ring();
        if g.is_zero() || !g.is_monic() {
            return Err(Error::InvalidArgument(
                "divisor must be monic and nonzero".into(),
            ));
        }
        let mut rest = g.clone();
        let mut exps = vec![0; self.factor_count()];
        for (i, h) in self.factorization.factors.iter().enumerate() {
            while let Some(q) = ring.div_exact(&rest, h) {
                rest = q;
                exps[i] += 1;
            }
        }
        let d = PolyDivisor { exps };
        if rest.degree() != Some(0) || !d.divides(&self.full_divisor()) {
            return Err(Error::InvalidArgument(format!(
                "{} does not divide x^m - 1",
                ring.render(g)
            )));
        }
        Ok(d)
    }

    /// All monic divisors of `x^m - 1`, ordered by exponent vector.
    pub fn all_divisors(&self) -> Vec<PolyDivisor> {
        let k = self.factor_count();
        let mult = self.factorization.multiplicity;
        let mut out = vec![PolyDivisor::one(k)];
        for i in 0..k {
            let current = std::mem::take(&mut out);
            for d in current {
                for e in 0..=mult {
                    let mut next = d.clone();
                    next.exps[i] = e;
                    out.push(next);
                }
            }
        }
        out.sort();
        out
    }

    /// Squarefree divisors of `g`.
    pub fn squarefree_divisors(&self, g: &PolyDivisor) -> Vec<PolyDivisor> {
        let support = g.support();
        (0u64..1 << support.len())
            .map(|mask| {
                let mut exps = vec![0; g.exps.len()];
                for (bit, &i) in support.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        exps[i] = 1;
                    }
                }
                PolyDivisor { exps }
            })
            .collect()
    }

    pub fn stats(&self, g: &PolyDivisor) -> PolyStats {
        let degrees = self.factorization.degrees();
        let shape: Vec<(u64, u64)> = degrees.into_iter().zip(g.exps.iter().copied()).collect();
        poly_stats(self.fq.size(), &shape)
    }

    /// Bit `i` is set iff `((x^m - 1)/h_i) ∘ α ≠ 0`, i.e. `α` is `h_i`-free.
    pub fn free_mask(&self, alpha: FieldElement) -> u64 {
        self.cofactor_maps
            .iter()
            .enumerate()
            .filter(|(_, map)| !self.tower.apply_map(map, alpha).is_zero())
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_g_free(&self, alpha: FieldElement, g: &PolyDivisor) -> bool {
        let need = g.support_mask();
        self.free_mask(alpha) & need == need
    }

    /// Free over `F_q`: the conjugates form a basis.
    pub fn is_normal(&self, alpha: FieldElement) -> bool {
        self.is_g_free(alpha, &self.full_divisor())
    }

    /// `F_q`-order of `α`: the monic generator of its annihilator.
    pub fn fq_order(&self, alpha: FieldElement) -> PolyDivisor {
        let mut order = self.full_divisor();
        for i in 0..self.factor_count() {
            while order.exps[i] > 0 {
                order.exps[i] -= 1;
                if !self
                    .apply(&self.divisor_polynomial(&order), alpha)
                    .is_zero()
                {
                    order.exps[i] += 1;
                    break;
                }
            }
        }
        order
    }

    pub fn render_divisor(&self, g: &PolyDivisor) -> String {
        let ring = self.ring();
        let parts: Vec<String> = self
            .factorization
            .factors
            .iter()
            .zip(&g.exps)
            .filter(|(_, &e)| e > 0)
            .map(|(h, &e)| {
                let s = format!("({})", ring.render(h));
                if e == 1 {
                    s
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(p: u64, r: u32) -> FieldTower {
        FieldTower::new(p, r, 1, TableMode::Auto).unwrap()
    }

    #[test]
    fn x4_minus_1_over_f3() {
        let f3 = fq(3, 1);
        let fact = factor_xm1(&f3, 4).unwrap();
        let ring = PolyRing::new(&f3);
        let expected = vec![
            FqPolynomial::from_ints(&f3, &[1, 1]),
            FqPolynomial::from_ints(&f3, &[-1, 1]),
            FqPolynomial::from_ints(&f3, &[1, 0, 1]),
        ];
        assert_eq!(fact.multiplicity, 1);
        assert_eq!(fact.factors.len(), 3);
        for e in &expected {
            assert!(fact.factors.contains(e), "missing {}", ring.render(e));
        }
        assert_eq!(fact.reconstruct(&ring), ring.xm1(4));
    }

    #[test]
    fn x9_minus_1_over_f3_is_a_ninth_power() {
        let f3 = fq(3, 1);
        let fact = factor_xm1(&f3, 9).unwrap();
        assert_eq!(fact.factors, vec![FqPolynomial::from_ints(&f3, &[-1, 1])]);
        assert_eq!(fact.multiplicity, 9);
        assert_eq!((fact.m0, fact.a), (1, 2));
    }

    #[test]
    fn x26_minus_1_splits_over_f27() {
        let f27 = fq(3, 3);
        let fact = factor_xm1(&f27, 26).unwrap();
        assert_eq!(fact.factors.len(), 26);
        assert!(fact.degrees().iter().all(|&d| d == 1));
        assert_eq!(fact.multiplicity, 1);
        assert_eq!(
            fact.reconstruct(&PolyRing::new(&f27)),
            PolyRing::new(&f27).xm1(26)
        );
    }

    #[test]
    fn shape_matches_factorization() {
        for (p, r) in [(3u64, 1u32), (3, 2), (3, 3)] {
            let field = fq(p, r);
            for m in 1..=30u32 {
                let fact = factor_xm1(&field, m).unwrap();
                let shape = XmOneShape::new(PrimePower { p, r }, m as u64);
                assert_eq!(
                    fact.degrees(),
                    shape.degrees,
                    "q = {}, m = {m}",
                    field.size()
                );
                assert_eq!(fact.multiplicity, shape.multiplicity());
            }
        }
    }

    #[test]
    fn poly_stats_examples() {
        let one = poly_stats(3, &[]);
        assert_eq!(
            (one.omega.clone(), one.phi.clone(), one.mu_prime),
            (BigUint::one(), BigUint::one(), 1)
        );
        assert!(one.theta.is_one());

        let quad = poly_stats(3, &[(2, 1)]);
        assert_eq!((quad.phi.clone(), quad.mu_prime), (BigUint::from(8u32), -1));
        assert_eq!(quad.theta, BigRational::new(8.into(), 9.into()));

        let square = poly_stats(3, &[(1, 2)]);
        assert_eq!(
            (square.phi.clone(), square.mu_prime),
            (BigUint::from(6u32), 0)
        );
        assert_eq!(square.theta, BigRational::new(6.into(), 9.into()));
    }

    #[test]
    fn module_action_examples() {
        let f9 = FieldTower::build_extension(3, 1, 2).unwrap();
        let module = FqModule::new(&f9).unwrap();
        let ring = module.ring();
        let x_minus_1 = FqPolynomial::from_ints(module.fq(), &[-1, 1]);
        let x_plus_1 = FqPolynomial::from_ints(module.fq(), &[1, 1]);
        let xm1 = ring.xm1(2);
        for a in f9.elements() {
            let expected = f9.sub(f9.frobenius(a, 1), a);
            assert_eq!(module.apply(&x_minus_1, a), expected);
            assert!(module.apply(&xm1, a).is_zero());
        }
        let i = f9.x();
        assert!(module.apply(&x_plus_1, i).is_zero());
    }

    #[test]
    fn fq_order_examples() {
        let f9 = FieldTower::build_extension(3, 1, 2).unwrap();
        let module = FqModule::new(&f9).unwrap();
        assert_eq!(module.fq_order(FieldElement::ZERO), PolyDivisor::one(2));
        let x_minus_1 = FqPolynomial::from_ints(module.fq(), &[-1, 1]);
        let one_order = module.fq_order(FieldElement::ONE);
        assert_eq!(module.divisor_polynomial(&one_order), x_minus_1);
        let full = module.full_divisor();
        let count = f9
            .elements()
            .filter(|&a| module.fq_order(a) == full)
            .count();
        assert_eq!(count, 4);
        let normal = f9.elements().filter(|&a| module.is_normal(a)).count();
        assert_eq!(normal, 4);
    }

    #[test]
    fn normal_count_in_f27() {
        let f27 = FieldTower::build_extension(3, 1, 3).unwrap();
        let module = FqModule::new(&f27).unwrap();
        let normal = f27.elements().filter(|&a| module.is_normal(a)).count();
        assert_eq!(normal, 18);
        assert!(f27
            .elements()
            .all(|a| module.is_g_free(a, &PolyDivisor::one(1))));
    }

    #[test]
    fn divisor_round_trip() {
        let f81 = FieldTower::build_extension(3, 1, 4).unwrap();
        let module = FqModule::new(&f81).unwrap();
        for d in module.all_divisors() {
            let poly = module.divisor_polynomial(&d);
            assert_eq!(module.divisor_of(&poly).unwrap(), d);
        }
        let not_a_divisor = FqPolynomial::from_ints(module.fq(), &[1, 1, 1, 1, 1]);
        assert!(module.divisor_of(&not_a_divisor).is_err());
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f81 = FieldTower::build_extension(3, 2, 2).unwrap();
        let module = FqModule::new(&f81).unwrap();
        let fq = module.fq();
        for a in fq.elements() {
            assert!(f81.in_base_field(module.embed(a)));
            for b in fq.elements() {
                assert_eq!(
                    module.embed(fq.mul(a, b)),
                    f81.mul(module.embed(a), module.embed(b))
                );
                assert_eq!(
                    module.embed(fq.add(a, b)),
                    f81.add(module.embed(a), module.embed(b))
                );
            }
        }
    }

    #[test]
    fn cosets_of_three_mod_eight() {
        assert_eq!(
            cyclotomic_cosets(3, 8),
            vec![vec![0], vec![1, 3], vec![2, 6], vec![4], vec![5, 7]]
        );
    }
}
