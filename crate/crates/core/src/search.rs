//! Ground truth by enumeration.
//!
//! [`SearchField`] tabulates, for every element, which primes of `q^m - 1`
//! it avoids being a power of and which irreducible factors of `x^m - 1` it
//! is free for. Counts of `α` with prescribed freeness of `α` and `f(α)`
//! reduce to mask tests over these tables. [`resolve_pair`] sweeps every
//! admissible quadratic in the log domain.

use crate::error::{Error, Result};
use crate::fqpoly::{FqModule, PolyDivisor};
use crate::gf::{ElementRepr, FieldElement, FieldTower, LogDomain};
use crate::numtheory::{factor_u64, PrimePower};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

/// Default probe budget for [`resolve_pair`].
pub const DEFAULT_PROBE_BUDGET: u64 = 10_000_000_000;

/// `f(x) = ax² + bx + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticSpec {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
}

impl QuadraticSpec {
    /// Admits `f` when `a ≠ 0` and `b² - 4ac ≠ 0`.
    pub fn new(t: &FieldTower, a: FieldElement, b: FieldElement, c: FieldElement) -> Result<Self> {
        let f = Self { a, b, c };
        if a.is_zero() {
            return Err(Error::InadmissibleQuadratic("leading coefficient is zero"));
        }
        if !f.discriminant_ok(t) {
            return Err(Error::InadmissibleQuadratic("repeated root (b^2 = 4ac)"));
        }
        Ok(f)
    }

    pub fn unchecked(a: FieldElement, b: FieldElement, c: FieldElement) -> Self {
        Self { a, b, c }
    }

    /// Prime-field coefficients given as integers.
    pub fn from_ints(t: &FieldTower, a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(t, t.constant(a), t.constant(b), t.constant(c))
    }

    pub fn discriminant(&self, t: &FieldTower) -> FieldElement {
        let four_ac = t.mul(t.constant(4), t.mul(self.a, self.c));
        t.sub(t.square(self.b), four_ac)
    }

    pub fn discriminant_ok(&self, t: &FieldTower) -> bool {
        !self.discriminant(t).is_zero()
    }

    pub fn is_admissible(&self, t: &FieldTower) -> bool {
        !self.a.is_zero() && self.discriminant_ok(t)
    }

    #[inline]
    pub fn eval(&self, t: &FieldTower, x: FieldElement) -> FieldElement {
        t.add(t.mul(t.add(t.mul(self.a, x), self.b), x), self.c)
    }

    /// A uniformly random admissible quadratic.
    pub fn random(t: &FieldTower, rng: &mut impl Rng) -> Self {
        let size = t.size();
        loop {
            let mut pick = || FieldElement::from_index(rng.gen_range(0..size));
            let f = Self::unchecked(pick(), pick(), pick());
            if f.is_admissible(t) {
                return f;
            }
        }
    }

    pub fn repr(&self, t: &FieldTower) -> QuadraticRepr {
        QuadraticRepr {
            a: t.repr(self.a),
            b: t.repr(self.b),
            c: t.repr(self.c),
        }
    }
}

/// JSON form of a quadratic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticRepr {
    pub a: ElementRepr,
    pub b: ElementRepr,
    pub c: ElementRepr,
}

impl QuadraticRepr {
    pub fn parse(&self, t: &FieldTower) -> Result<QuadraticSpec> {
        let parse = |r: &ElementRepr| -> Result<FieldElement> {
            let coeffs = r
                .coeffs
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::InvalidArgument(format!("bad coefficient {s:?}: {e}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            t.element(&coeffs)
        };
        Ok(QuadraticSpec::unchecked(
            parse(&self.a)?,
            parse(&self.b)?,
            parse(&self.c)?,
        ))
    }
}

/// Per-element freeness data for an enumerable field.
#[derive(Debug)]
pub struct SearchField<'t> {
    module: FqModule<'t>,
    n: u64,
    primes: Vec<u64>,
    /// Bit `i` set iff the element is not a `primes[i]`-th power (zero: no bits).
    prime_mask: Vec<u32>,
    /// Bit `i` set iff the element is free for the `i`-th factor of `x^m - 1`.
    poly_mask: Vec<u64>,
    primitive_normal: Vec<FieldElement>,
}

impl<'t> SearchField<'t> {
    pub fn new(tower: &'t FieldTower) -> Result<Self> {
        let ld = log_domain(tower)?;
        let module = FqModule::new(tower)?;
        let n = tower.group_order();
        let primes: Vec<u64> = factor_u64(n).into_iter().map(|(p, _)| p).collect();
        let prime_mask: Vec<u32> = tower
            .elements()
            .map(|a| {
                let k = ld.log_of(a);
                if k == LogDomain::ZERO {
                    return 0;
                }
                primes
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| k as u64 % l != 0)
                    .fold(0, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        let poly_mask: Vec<u64> = tower
            .elements()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&a| module.free_mask(a))
            .collect();
        let full_prime = (1u32 << primes.len()) - 1;
        let full_poly = full_mask(module.factor_count());
        let primitive_normal = (0..n)
            .map(|k| ld.element(k as u32))
            .filter(|a| {
                prime_mask[a.index() as usize] == full_prime
                    && poly_mask[a.index() as usize] == full_poly
            })
            .collect();
        Ok(Self {
            module,
            n,
            primes,
            prime_mask,
            poly_mask,
            primitive_normal,
        })
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.module.tower()
    }

    pub fn module(&self) -> &FqModule<'t> {
        &self.module
    }

    pub fn group_order(&self) -> u64 {
        self.n
    }

    /// Distinct primes of `q^m - 1`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primitive normal elements in discrete-log order.
    pub fn primitive_normal(&self) -> &[FieldElement] {
        &self.primitive_normal
    }

    pub fn is_primitive(&self, a: FieldElement) -> bool {
        !a.is_zero() && self.prime_mask[a.index() as usize] == (1u32 << self.primes.len()) - 1
    }

    /// Prime mask of the radical of `e | q^m - 1`.
    pub fn prime_mask_of(&self, e: u64) -> Result<u32> {
        if e == 0 || self.n % e != 0 {
            return Err(Error::DivisibilityViolation {
                divisor: e,
                value: self.n,
            });
        }
        Ok(self
            .primes
            .iter()
            .enumerate()
            .filter(|(_, &l)| e % l == 0)
            .fold(0, |acc, (i, _)| acc | 1 << i))
    }

    /// Counts `α ≠ 0` with `f(α) ≠ 0`, `α` free for `m1` and `gm`, `f(α)` free for `m2`.
    pub fn count_masks(&self, f: &QuadraticSpec, m1: u32, m2: u32, gm: u64) -> u64 {
        let t = self.tower();
        t.elements()
            .filter(|&a| {
                if a.is_zero() {
                    return false;
                }
                let i = a.index() as usize;
                if self.prime_mask[i] & m1 != m1 || self.poly_mask[i] & gm != gm {
                    return false;
                }
                let fa = f.eval(t, a);
                !fa.is_zero() && self.prime_mask[fa.index() as usize] & m2 == m2
            })
            .count() as u64
    }

    /// `𝔑(e₁, e₂, g)` for `f`; the zeros of `x f(x)` are not counted.
    pub fn exact_count(&self, f: &QuadraticSpec, e1: u64, e2: u64, g: &PolyDivisor) -> Result<u64> {
        self.check_quadratic(f)?;
        Ok(self.count_masks(
            f,
            self.prime_mask_of(e1)?,
            self.prime_mask_of(e2)?,
            g.support_mask(),
        ))
    }

    fn check_quadratic(&self, f: &QuadraticSpec) -> Result<()> {
        QuadraticSpec::new(self.tower(), f.a, f.b, f.c).map(|_| ())
    }

    /// First primitive normal `α` in log order with `f(α)` primitive.
    pub fn find_witness(&self, f: &QuadraticSpec) -> Result<Option<FieldElement>> {
        self.check_quadratic(f)?;
        let t = self.tower();
        Ok(self
            .primitive_normal
            .iter()
            .copied()
            .find(|&a| self.is_primitive(f.eval(t, a))))
    }

    /// Compares `𝔑(e₁, e₂, g)` with `θ(e₁)θ(e₂)Θ(g) q^{m/2}(q^{m/2} - 3W(e₁)W(e₂)Ω(g))`.
    pub fn lower_bound_check(
        &self,
        f: &QuadraticSpec,
        e1: u64,
        e2: u64,
        g: &PolyDivisor,
    ) -> Result<LowerBoundCheck> {
        let count = self.exact_count(f, e1, e2, g)?;
        let w = |e: u64| 1u64 << factor_u64(e).len();
        let stats = self.module.stats(g);
        let c = theta_of(e1) * theta_of(e2) * stats.theta.clone();
        let k = BigInt::from(3 * w(e1) * w(e2)) * BigInt::from(stats.omega.clone());
        let qm = BigInt::from(self.tower().size());
        let holds = sqrt_bound_holds(&BigRational::from_integer(count.into()), &c, &k, &qm);
        let qm_f = qm.to_f64().unwrap();
        let bound = c.to_f64().unwrap() * (qm_f - k.to_f64().unwrap() * qm_f.sqrt());
        Ok(LowerBoundCheck {
            count,
            bound,
            holds,
        })
    }

    /// Both sides of the sieve inequality for the core divisors `d` and `g`.
    pub fn verify_sieve_inequality(
        &self,
        f: &QuadraticSpec,
        d: u64,
        g: &PolyDivisor,
    ) -> Result<SieveInequalityCheck> {
        self.check_quadratic(f)?;
        let dm = self.prime_mask_of(d)?;
        let gm = g.support_mask();
        let full_prime = (1u32 << self.primes.len()) - 1;
        let full_poly = full_mask(self.module.factor_count());
        let lhs = self.count_masks(f, full_prime, full_prime, full_poly) as i64;
        let remaining_primes: Vec<u32> = (0..self.primes.len())
            .map(|i| 1u32 << i)
            .filter(|bit| dm & bit == 0)
            .collect();
        let remaining_polys: Vec<u64> = (0..self.module.factor_count())
            .map(|i| 1u64 << i)
            .filter(|bit| gm & bit == 0)
            .collect();
        let n = remaining_primes.len() as i64;
        let k = remaining_polys.len() as i64;
        let core = self.count_masks(f, dm, dm, gm) as i64;
        let mut rhs = -(2 * n + k - 1) * core;
        for &bit in &remaining_primes {
            rhs += self.count_masks(f, dm | bit, dm, gm) as i64;
            rhs += self.count_masks(f, dm, dm | bit, gm) as i64;
        }
        for &bit in &remaining_polys {
            rhs += self.count_masks(f, dm, dm, gm | bit) as i64;
        }
        Ok(SieveInequalityCheck {
            lhs,
            rhs,
            n: n as usize,
            k: k as usize,
            holds: lhs >= rhs,
        })
    }
}

fn full_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn log_domain(tower: &FieldTower) -> Result<LogDomain<'_>> {
    tower.log_domain().ok_or(Error::SizeBudgetExceeded {
        what: "log tables for enumeration",
        needed: tower.size() as u128,
        limit: crate::gf::TABLE_LIMIT as u128,
    })
}

/// Decides `count ≥ c (q^m - k √(q^m))` exactly, with `c > 0`.
pub fn sqrt_bound_holds(count: &BigRational, c: &BigRational, k: &BigInt, qm: &BigInt) -> bool {
    let r = c * BigRational::from_integer(qm.clone()) - count;
    if !r.is_positive() {
        return true;
    }
    if !k.is_positive() {
        return false;
    }
    let ck = c * BigRational::from_integer(k.clone());
    &ck * &ck * BigRational::from_integer(qm.clone()) >= &r * &r
}

/// Outcome of one lower-bound comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCheck {
    pub count: u64,
    pub bound: f64,
    pub holds: bool,
}

/// Both sides of the sieve inequality with exact counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveInequalityCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub n: usize,
    pub k: usize,
    pub holds: bool,
}

/// All primitive normal elements of `tower` in log order.
pub fn enumerate_primitive_normal(tower: &FieldTower) -> Result<Vec<FieldElement>> {
    Ok(SearchField::new(tower)?.primitive_normal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    ResolvedNoException,
    ExceptionFound,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub f: QuadraticRepr,
    pub alpha: ElementRepr,
}

/// Outcome of a sweep over every admissible quadratic.
#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub q: u64,
    pub m: u32,
    pub status: PairStatus,
    pub primitive_normal_count: usize,
    pub quadratics_checked: u64,
    pub probes: u64,
    pub budget: u64,
    pub witnesses: Vec<WitnessRecord>,
    pub bad_quadratics: Vec<QuadraticRepr>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Resumable sweep state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub q: u64,
    pub m: u32,
    /// Number of leading coefficients (in log order) fully swept.
    pub sweep_position: u64,
    pub bad_quadratics: Vec<QuadraticRepr>,
    pub probes_done: u64,
    #[serde(default)]
    pub quadratics_checked: u64,
    #[serde(default)]
    pub witnesses: Vec<WitnessRecord>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self)? + "\n")?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ResolveOptions {
    /// Maximum number of `(f, α)` primitivity probes.
    pub budget: u64,
    pub checkpoint: Option<PathBuf>,
    /// Quadratics whose witnesses are kept in the report.
    pub witness_samples: usize,
    /// Leading coefficients per checkpoint step.
    pub batch: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_PROBE_BUDGET,
            checkpoint: None,
            witness_samples: 16,
            batch: 16,
        }
    }
}

/// Result of sweeping one leading coefficient.
struct SliceOutcome {
    bad: Vec<(u32, u32, u32)>,
    witnesses: Vec<((u32, u32, u32), u32)>,
    probes: u64,
    checked: u64,
}

struct Sweeper<'a> {
    ld: LogDomain<'a>,
    n: u32,
    primitive: Vec<bool>,
    pn_logs: Vec<u32>,
    pn_double: Vec<u32>,
    four: u32,
    witness_samples: usize,
}

impl Sweeper<'_> {
    /// Sweeps `(b, c)` for `a = g^la`, `⊥` (zero) first, then by log.
    fn slice(&self, la: u32) -> SliceOutcome {
        let ld = &self.ld;
        let mut out = SliceOutcome {
            bad: Vec::new(),
            witnesses: Vec::new(),
            probes: 0,
            checked: 0,
        };
        let coeffs = std::iter::once(LogDomain::ZERO).chain(0..self.n);
        let mut t = vec![0u32; self.pn_logs.len()];
        let four_a = ld.mul(self.four, la);
        for lb in coeffs.clone() {
            for (slot, (&l, &l2)) in t.iter_mut().zip(self.pn_logs.iter().zip(&self.pn_double)) {
                *slot = ld.add(ld.mul(la, l2), ld.mul(lb, l));
            }
            let b_sq = ld.mul(lb, lb);
            for lc in coeffs.clone() {
                if b_sq == ld.mul(four_a, lc) {
                    continue;
                }
                out.checked += 1;
                let mut found = None;
                for (i, &ti) in t.iter().enumerate() {
                    out.probes += 1;
                    let s = ld.add(ti, lc);
                    if s != LogDomain::ZERO && self.primitive[s as usize] {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    None => out.bad.push((la, lb, lc)),
                    Some(i) if out.witnesses.len() < self.witness_samples => {
                        out.witnesses.push(((la, lb, lc), self.pn_logs[i]));
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }
}

/// Decides whether every admissible `f` over `F_{q^m}` has a primitive
/// normal `α` with `f(α)` primitive.
pub fn resolve_pair(q: PrimePower, m: u32, options: &ResolveOptions) -> Result<PairReport> {
    let start = Instant::now();
    let tower = FieldTower::new(q.p, q.r, m, crate::gf::TableMode::Require)?;
    let field = SearchField::new(&tower)?;
    let ld = log_domain(&tower)?;
    let n = tower.group_order() as u32;
    let qv = tower.q();
    let mut state = match &options.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::load(path)?;
            if cp.q != qv || cp.m != m {
                return Err(Error::CheckpointMismatch(format!(
                    "checkpoint is for ({}, {}), not ({qv}, {m})",
                    cp.q, cp.m
                )));
            }
            cp
        }
        _ => Checkpoint {
            q: qv,
            m,
            sweep_position: 0,
            bad_quadratics: Vec::new(),
            probes_done: 0,
            quadratics_checked: 0,
            witnesses: Vec::new(),
        },
    };
    let pn_logs: Vec<u32> = field
        .primitive_normal()
        .iter()
        .map(|&a| ld.log_of(a))
        .collect();
    let sweeper = Sweeper {
        ld,
        n,
        primitive: (0..n as u64).map(|k| k.gcd(&(n as u64)) == 1).collect(),
        pn_double: pn_logs.iter().map(|&l| ld.mul(l, l)).collect(),
        pn_logs,
        four: ld.log_of(tower.constant(4)),
        witness_samples: options.witness_samples,
    };
    let quad = |(la, lb, lc): (u32, u32, u32)| {
        QuadraticSpec::unchecked(ld.element(la), ld.element(lb), ld.element(lc))
    };
    let mut exhausted = false;
    while state.sweep_position < n as u64 && !exhausted {
        let end = (state.sweep_position + options.batch.max(1) as u64).min(n as u64);
        let outcomes: Vec<SliceOutcome> = (state.sweep_position..end)
            .into_par_iter()
            .map(|la| sweeper.slice(la as u32))
            .collect();
        for outcome in outcomes {
            if state.probes_done + outcome.probes > options.budget {
                exhausted = true;
                break;
            }
            state.probes_done += outcome.probes;
            state.quadratics_checked += outcome.checked;
            state
                .bad_quadratics
                .extend(outcome.bad.into_iter().map(|f| quad(f).repr(&tower)));
            for (f, alpha) in outcome.witnesses {
                if state.witnesses.len() < options.witness_samples {
                    state.witnesses.push(WitnessRecord {
                        f: quad(f).repr(&tower),
                        alpha: tower.repr(ld.element(alpha)),
                    });
                }
            }
            state.sweep_position += 1;
        }
        if let Some(path) = &options.checkpoint {
            state.save(path)?;
        }
    }
    for bad in &state.bad_quadratics {
        let f = bad.parse(&tower)?;
        if field.find_witness(&f)?.is_some() {
            return Err(Error::InvalidArgument(format!(
                "quadratic {bad:?} was recorded as bad but has a witness"
            )));
        }
    }
    let status = if exhausted {
        PairStatus::BudgetExhausted
    } else if state.bad_quadratics.is_empty() {
        PairStatus::ResolvedNoException
    } else {
        PairStatus::ExceptionFound
    };
    Ok(PairReport {
        q: qv,
        m,
        status,
        primitive_normal_count: field.primitive_normal().len(),
        quadratics_checked: state.quadratics_checked,
        probes: state.probes_done,
        budget: options.budget,
        witnesses: state.witnesses,
        bad_quadratics: state.bad_quadratics,
        elapsed: start.elapsed(),
    })
}

/// `θ(e) = φ(e)/e` as an exact rational.
pub fn theta_of(e: u64) -> BigRational {
    factor_u64(e)
        .iter()
        .fold(BigRational::one(), |acc, (p, _)| {
            acc * BigRational::new(BigInt::from(p - 1), BigInt::from(*p))
        })
}
