//! Characters of `F_{q^m}` and brute-force character sums.
//!
//! Multiplicative characters are indexed through the canonical generator:
//! `χ_{d,j}(g) = exp(2πi·j/d)`. Additive characters are `ψ_δ(α) =
//! exp(2πi·Tr(δα)/p)` with the absolute trace, so `ψ_1` is the canonical one.
//! Every sum here enumerates the whole field and is limited to
//! [`ENUMERATION_LIMIT`] elements.

use crate::error::{Error, Result};
use crate::fqpoly::{FqModule, PolyDivisor};
use crate::gf::{FieldElement, FieldTower};
use crate::numtheory::{divisors_u64, euler_phi, factor_u64, mobius};
use crate::search::QuadraticSpec;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;
use std::sync::OnceLock;

/// Largest field the sums will enumerate (`3^10`).
pub const ENUMERATION_LIMIT: u64 = 59_049;

const CHUNK: usize = 4096;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// `χ_{d,j}`: order `d | q^m - 1`, index `j` a unit mod `d` (`j = 0` iff `d = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MultCharacter {
    pub order: u64,
    pub index: u64,
}

impl MultCharacter {
    pub const TRIVIAL: MultCharacter = MultCharacter { order: 1, index: 0 };

    pub fn new(order: u64, index: u64) -> Result<Self> {
        let ok = match order {
            0 => false,
            1 => index == 0,
            _ => index < order && index.gcd(&order) == 1,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "no character of order {order} with index {index}"
            )));
        }
        Ok(Self { order, index })
    }

    /// The order-`d` character sending the generator to `exp(2πi/d)`.
    pub fn canonical(order: u64) -> Self {
        Self {
            order,
            index: u64::from(order > 1),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent `t` with `χ(g) = exp(2πi·t/n)`.
    fn numerator(&self, n: u64) -> u64 {
        self.index * (n / self.order)
    }

    /// The pointwise product on `F*`, as a character of a group of order `n`.
    pub fn product(&self, other: &MultCharacter, n: u64) -> MultCharacter {
        let t = (self.numerator(n) + other.numerator(n)) % n;
        let order = n / t.gcd(&n);
        MultCharacter {
            order,
            index: t / (n / order),
        }
    }
}

/// `ψ_δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AddCharacter {
    pub delta: FieldElement,
}

impl AddCharacter {
    pub const TRIVIAL: AddCharacter = AddCharacter {
        delta: FieldElement::ZERO,
    };
    pub const CANONICAL: AddCharacter = AddCharacter {
        delta: FieldElement::ONE,
    };

    pub fn is_trivial(&self) -> bool {
        self.delta.is_zero()
    }
}

/// Logs, traces and roots of unity for one enumerable field.
pub struct CharTable<'m, 't> {
    module: &'m FqModule<'t>,
    n: u64,
    log: Vec<u32>,
    trace: Vec<u32>,
    unity_n: Vec<Complex64>,
    unity_p: Vec<Complex64>,
    add_orders: OnceLock<Vec<PolyDivisor>>,
}

impl std::fmt::Debug for CharTable<'_, '_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharTable")
            .field("size", &self.tower().size())
            .finish_non_exhaustive()
    }
}

fn roots_of_unity(n: u64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

impl<'m, 't> CharTable<'m, 't> {
    pub fn new(module: &'m FqModule<'t>) -> Result<Self> {
        let tower = module.tower();
        let size = tower.size();
        if size > ENUMERATION_LIMIT {
            return Err(Error::SizeBudgetExceeded {
                what: "character sum enumeration",
                needed: size as u128,
                limit: ENUMERATION_LIMIT as u128,
            });
        }
        let n = tower.group_order();
        let log = tower
            .elements()
            .map(|a| {
                if a.is_zero() {
                    Ok(u32::MAX)
                } else {
                    tower.discrete_log(a).map(|k| k as u32)
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        let trace = tower
            .elements()
            .map(|a| tower.absolute_trace(a) as u32)
            .collect();
        Ok(Self {
            module,
            n,
            log,
            trace,
            unity_n: roots_of_unity(n),
            unity_p: roots_of_unity(tower.p()),
            add_orders: OnceLock::new(),
        })
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.module.tower()
    }

    pub fn module(&self) -> &'m FqModule<'t> {
        self.module
    }

    pub fn group_order(&self) -> u64 {
        self.n
    }

    /// Character value with `χ_0(0) = 1` and `χ(0) = 0` otherwise.
    pub fn mult(&self, chi: &MultCharacter, a: FieldElement) -> Complex64 {
        let k = self.log[a.index() as usize];
        if k == u32::MAX {
            return if chi.is_trivial() {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        let e = (chi.numerator(self.n) as u128 * k as u128 % self.n as u128) as usize;
        self.unity_n[e]
    }

    pub fn add(&self, psi: &AddCharacter, a: FieldElement) -> Complex64 {
        let t = self.tower();
        self.unity_p[self.trace[t.mul(psi.delta, a).index() as usize] as usize]
    }

    /// True iff `ψ_δ ∘ h` is trivial, tested on an `F_p`-basis.
    fn annihilates(&self, delta: FieldElement, g: &PolyDivisor) -> bool {
        let t = self.tower();
        let h = self.module.divisor_polynomial(g);
        let mut basis = FieldElement::ONE;
        for _ in 0..t.degree() {
            let img = self.module.apply(&h, basis);
            if self.trace[t.mul(delta, img).index() as usize] != 0 {
                return false;
            }
            basis = t.mul(basis, t.x());
        }
        true
    }

    /// The `F_q`-order of `ψ_δ`: the least monic `h | x^m - 1` with `ψ_δ ∘ h` trivial.
    pub fn add_char_order(&self, psi: &AddCharacter) -> PolyDivisor {
        let mut order = self.module.full_divisor();
        for i in 0..order.exps.len() {
            while order.exps[i] > 0 {
                order.exps[i] -= 1;
                if !self.annihilates(psi.delta, &order) {
                    order.exps[i] += 1;
                    break;
                }
            }
        }
        order
    }

    /// `F_q`-orders of all `ψ_δ`, indexed by packed `δ`.
    pub fn add_char_orders(&self) -> &[PolyDivisor] {
        self.add_orders.get_or_init(|| {
            self.tower()
                .elements()
                .map(|delta| self.add_char_order(&AddCharacter { delta }))
                .collect()
        })
    }

    /// A character of `F_q`-order `g`: the smallest `δ` in packed order.
    pub fn add_char_of_order(&self, g: &PolyDivisor) -> Option<AddCharacter> {
        self.add_char_orders()
            .iter()
            .position(|o| o == g)
            .map(|i| AddCharacter {
                delta: FieldElement::from_index(i as u64),
            })
    }

    /// `S(χ₁, χ₂, ψ) = Σ_α χ₁(α) χ₂(f(α)) ψ(α)` over the whole field.
    pub fn char_sum(
        &self,
        chi1: &MultCharacter,
        chi2: &MultCharacter,
        psi: &AddCharacter,
        f: &QuadraticSpec,
    ) -> Complex64 {
        let t = self.tower();
        self.sum_over(t.size(), |a| {
            self.mult(chi1, a) * self.mult(chi2, f.eval(t, a)) * self.add(psi, a)
        })
    }

    /// For `f = x(ax + b)`: `Σ_{α≠0} χ₃(α) χ₂(aα + b) ψ(α)` with `χ₃ = χ₁χ₂`.
    pub fn regrouped_sum(
        &self,
        chi1: &MultCharacter,
        chi2: &MultCharacter,
        psi: &AddCharacter,
        a: FieldElement,
        b: FieldElement,
    ) -> Complex64 {
        let t = self.tower();
        let chi3 = chi1.product(chi2, self.n);
        self.sum_over(t.size(), |x| {
            if x.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            let lin = t.add(t.mul(a, x), b);
            self.mult(&chi3, x) * self.mult(chi2, lin) * self.add(psi, x)
        })
    }

    /// The same sum taken directly with `f = x(ax + b)` over `α ≠ 0`.
    pub fn direct_c0_sum(
        &self,
        chi1: &MultCharacter,
        chi2: &MultCharacter,
        psi: &AddCharacter,
        a: FieldElement,
        b: FieldElement,
    ) -> Complex64 {
        let t = self.tower();
        let f = QuadraticSpec::unchecked(a, b, FieldElement::ZERO);
        self.sum_over(t.size(), |x| {
            if x.is_zero() {
                return Complex64::new(0.0, 0.0);
            }
            self.mult(chi1, x) * self.mult(chi2, f.eval(t, x)) * self.add(psi, x)
        })
    }

    /// Sums `term` over packed indices `0..size` in fixed chunks, then
    /// reduces the chunk totals in order.
    fn sum_over(&self, size: u64, term: impl Fn(FieldElement) -> Complex64 + Sync) -> Complex64 {
        let size = size as usize;
        let chunks = size.div_ceil(CHUNK);
        let partial: Vec<Complex64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                (c * CHUNK..((c + 1) * CHUNK).min(size))
                    .map(|i| term(FieldElement::from_index(i as u64)))
                    .collect::<CompensatedSum>()
                    .value()
            })
            .collect();
        partial.into_iter().collect::<CompensatedSum>().value()
    }

    /// `Σ_{χ of order d} χ(α)`.
    fn order_class_sum(&self, d: u64, a: FieldElement) -> Complex64 {
        (0..d)
            .filter(|&j| d == 1 || j.gcd(&d) == 1)
            .map(|j| self.mult(&MultCharacter { order: d, index: j }, a))
            .collect::<CompensatedSum>()
            .value()
    }

    /// `ρ_e(α) = θ(e) Σ_{d|e} μ(d)/φ(d) Σ_{ord χ = d} χ(α)`; ideally 1 iff `α` is `e`-free.
    pub fn rho(&self, e: u64, a: FieldElement) -> Result<f64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if e == 0 || self.n % e != 0 {
            return Err(Error::DivisibilityViolation {
                divisor: e,
                value: self.n,
            });
        }
        let theta = euler_phi(e) as f64 / e as f64;
        let sum: CompensatedSum = divisors_u64(e)
            .into_iter()
            .filter(|&d| mobius(d) != 0)
            .map(|d| self.order_class_sum(d, a) * (mobius(d) as f64 / euler_phi(d) as f64))
            .collect();
        Ok(theta * sum.value().re)
    }

    /// `κ_g(α) = Θ(g) Σ_{f|g} μ′(f)/Φ(f) Σ_{Ord ψ = f} ψ(α)`; ideally 1 iff `α` is `g`-free.
    pub fn kappa(&self, g: &PolyDivisor, a: FieldElement) -> f64 {
        let orders = self.add_char_orders();
        let theta = self.module.stats(g).theta.to_f64().unwrap_or(f64::NAN);
        let sum: CompensatedSum = self
            .module
            .squarefree_divisors(g)
            .into_iter()
            .map(|f| {
                let stats = self.module.stats(&f);
                let class: CompensatedSum = orders
                    .iter()
                    .enumerate()
                    .filter(|(_, o)| **o == f)
                    .map(|(i, _)| {
                        self.add(
                            &AddCharacter {
                                delta: FieldElement::from_index(i as u64),
                            },
                            a,
                        )
                    })
                    .collect();
                class.value() * (stats.mu_prime as f64 / stats.phi.to_f64().unwrap())
            })
            .collect();
        theta * sum.value().re
    }
}

/// Worst deviations from the orthogonality relations.
#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityAudit {
    pub q: u64,
    pub m: u32,
    /// `max |Σ_{α≠0} χ(α)|` over nontrivial `χ`.
    pub worst_character_sum: f64,
    /// `max |Σ_χ χ(α)|` over `α ≠ 0, 1`.
    pub worst_element_sum: f64,
    /// `max |Σ_α ψ(α)|` over nontrivial `ψ`.
    pub worst_additive_sum: f64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn orthogonality_audit(table: &CharTable, tolerance: f64) -> OrthogonalityAudit {
    let t = table.tower();
    let n = table.group_order();
    let nonzero: Vec<FieldElement> = t.elements().filter(|a| !a.is_zero()).collect();
    let worst_character_sum = (1..n)
        .into_par_iter()
        .map(|k| {
            let order = n / k.gcd(&n);
            let chi = MultCharacter {
                order,
                index: k / (n / order),
            };
            nonzero
                .iter()
                .map(|&a| table.mult(&chi, a))
                .collect::<CompensatedSum>()
                .value()
                .norm()
        })
        .reduce(|| 0.0, f64::max);
    let worst_element_sum = nonzero
        .par_iter()
        .filter(|a| **a != FieldElement::ONE)
        .map(|&a| {
            divisors_u64(n)
                .into_iter()
                .map(|d| table.order_class_sum(d, a))
                .collect::<CompensatedSum>()
                .value()
                .norm()
        })
        .reduce(|| 0.0, f64::max);
    let worst_additive_sum = nonzero
        .par_iter()
        .map(|&delta| {
            t.elements()
                .map(|a| table.add(&AddCharacter { delta }, a))
                .collect::<CompensatedSum>()
                .value()
                .norm()
        })
        .reduce(|| 0.0, f64::max);
    OrthogonalityAudit {
        q: t.q(),
        m: t.m(),
        worst_character_sum,
        worst_element_sum,
        worst_additive_sum,
        tolerance,
        passed: worst_character_sum <= tolerance
            && worst_element_sum <= tolerance
            && worst_additive_sum <= tolerance,
    }
}

/// Agreement of `ρ_e`, `κ_g` with the exact freeness tests.
#[derive(Debug, Clone, Serialize)]
pub struct IndicatorAudit {
    pub q: u64,
    pub m: u32,
    pub rho_checks: u64,
    pub kappa_checks: u64,
    pub worst_deviation: f64,
    pub mismatches: u64,
    pub tolerance: f64,
    pub passed: bool,
}

pub fn indicator_audit(table: &CharTable, tolerance: f64) -> Result<IndicatorAudit> {
    let t = table.tower();
    let module = table.module();
    let n = table.group_order();
    let divisors = divisors_u64(n);
    let poly_divisors = module.all_divisors();
    table.add_char_orders();
    let mut worst = 0.0f64;
    let mut mismatches = 0u64;
    let mut rho_checks = 0u64;
    let mut kappa_checks = 0u64;
    for a in t.elements() {
        if !a.is_zero() {
            for &e in &divisors {
                let primes: Vec<u64> = factor_u64(e).into_iter().map(|(p, _)| p).collect();
                let exact = if t.is_free_for_primes(a, &primes) {
                    1.0
                } else {
                    0.0
                };
                let dev = (table.rho(e, a)? - exact).abs();
                worst = worst.max(dev);
                mismatches += u64::from(dev > tolerance);
                rho_checks += 1;
            }
        }
        let mask = module.free_mask(a);
        let results: Vec<f64> = poly_divisors
            .par_iter()
            .map(|g| {
                let need = g.support_mask();
                let exact = if mask & need == need { 1.0 } else { 0.0 };
                (table.kappa(g, a) - exact).abs()
            })
            .collect();
        for dev in results {
            worst = worst.max(dev);
            mismatches += u64::from(dev > tolerance);
            kappa_checks += 1;
        }
    }
    Ok(IndicatorAudit {
        q: t.q(),
        m: t.m(),
        rho_checks,
        kappa_checks,
        worst_deviation: worst,
        mismatches,
        tolerance,
        passed: mismatches == 0,
    })
}

/// One evaluated sum against one bound.
#[derive(Debug, Clone, Serialize)]
pub struct WeilEntry {
    /// `(d₁, d₂, h)` with `h` rendered.
    pub triple: (u64, u64, String),
    /// `(a, b, c)` rendered as coefficient vectors.
    pub f: (String, String, String),
    pub abs: f64,
    pub bound: f64,
    pub margin: f64,
}

/// Worst case and violation count for one bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundSummary {
    pub checked: u64,
    pub violations: u64,
    pub worst: Option<WeilEntry>,
}

impl BoundSummary {
    fn new() -> Self {
        Self {
            checked: 0,
            violations: 0,
            worst: None,
        }
    }

    fn record(&mut self, entry: WeilEntry, slack: f64) {
        self.checked += 1;
        if entry.margin < -slack {
            self.violations += 1;
        }
        if self.worst.as_ref().is_none_or(|w| entry.margin < w.margin) {
            self.worst = Some(entry);
        }
    }

    fn merge(&mut self, other: BoundSummary) {
        self.checked += other.checked;
        self.violations += other.violations;
        if let Some(w) = other.worst {
            if self.worst.as_ref().is_none_or(|cur| w.margin < cur.margin) {
                self.worst = Some(w);
            }
        }
    }
}

/// Weil-type bounds over all order triples and a sample of quadratics.
#[derive(Debug, Clone, Serialize)]
pub struct WeilAudit {
    pub q: u64,
    pub m: u32,
    pub triples: u64,
    pub quadratics: u64,
    pub seed: u64,
    pub tolerance: f64,
    /// `|S| ≤ 3 q^{m/2}` for every triple that is not entirely trivial.
    pub three_sqrt: BoundSummary,
    /// `|S| ≤ 2 q^{m/2}` when `ψ` is trivial.
    pub trivial_psi: BoundSummary,
    /// `|S| ≤ n q^{m/2}` when `ψ` is nontrivial, `n` the number of nontrivial
    /// multiplicative factors counted with degree.
    pub degree_bound: BoundSummary,
    /// `max` difference between direct and regrouped sums for `f = x(ax + b)`.
    pub regroup_worst: f64,
    pub passed: bool,
}

pub fn weil_audit(table: &CharTable, quadratics: usize, seed: u64, tolerance: f64) -> WeilAudit {
    let t = table.tower();
    let module = table.module();
    let n = table.group_order();
    let sqrt = (t.size() as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<QuadraticSpec> = (0..quadratics)
        .map(|_| QuadraticSpec::random(t, &mut rng))
        .collect();
    let mut triples = Vec::new();
    for d1 in divisors_u64(n) {
        for d2 in divisors_u64(n) {
            for h in module.all_divisors() {
                if let Some(psi) = table.add_char_of_order(&h) {
                    triples.push((d1, d2, h, psi));
                }
            }
        }
    }
    let results: Vec<(BoundSummary, BoundSummary, BoundSummary, f64)> = triples
        .par_iter()
        .map(|(d1, d2, h, psi)| {
            let chi1 = MultCharacter::canonical(*d1);
            let chi2 = MultCharacter::canonical(*d2);
            let mut three = BoundSummary::new();
            let mut two = BoundSummary::new();
            let mut deg = BoundSummary::new();
            let mut regroup = 0.0f64;
            let all_trivial = chi1.is_trivial() && chi2.is_trivial() && psi.is_trivial();
            for f in &fs {
                let s = table.char_sum(&chi1, &chi2, psi, f).norm();
                let entry = |bound: f64| WeilEntry {
                    triple: (*d1, *d2, module.render_divisor(h)),
                    f: (t.render(f.a), t.render(f.b), t.render(f.c)),
                    abs: s,
                    bound,
                    margin: bound - s,
                };
                if !all_trivial {
                    three.record(entry(3.0 * sqrt), tolerance);
                }
                if psi.is_trivial() {
                    if !(chi1.is_trivial() && chi2.is_trivial()) {
                        two.record(entry(2.0 * sqrt), tolerance);
                    }
                } else {
                    let degree = if f.c.is_zero() {
                        u64::from(!chi1.product(&chi2, n).is_trivial())
                            + u64::from(!chi2.is_trivial())
                    } else {
                        u64::from(!chi1.is_trivial()) + 2 * u64::from(!chi2.is_trivial())
                    };
                    deg.record(entry(degree as f64 * sqrt), tolerance);
                }
                let direct = table.direct_c0_sum(&chi1, &chi2, psi, f.a, f.b);
                let regrouped = table.regrouped_sum(&chi1, &chi2, psi, f.a, f.b);
                regroup = regroup.max((direct - regrouped).norm());
            }
            (three, two, deg, regroup)
        })
        .collect();
    let mut three_sqrt = BoundSummary::new();
    let mut trivial_psi = BoundSummary::new();
    let mut degree_bound = BoundSummary::new();
    let mut regroup_worst = 0.0f64;
    for (a, b, c, r) in results {
        three_sqrt.merge(a);
        trivial_psi.merge(b);
        degree_bound.merge(c);
        regroup_worst = regroup_worst.max(r);
    }
    let passed = three_sqrt.violations == 0
        && trivial_psi.violations == 0
        && degree_bound.violations == 0
        && regroup_worst <= tolerance;
    WeilAudit {
        q: t.q(),
        m: t.m(),
        triples: triples.len() as u64,
        quadratics: quadratics as u64,
        seed,
        tolerance,
        three_sqrt,
        trivial_psi,
        degree_bound,
        regroup_worst,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldTower {
        FieldTower::build_extension(3, 1, 2).unwrap()
    }

    #[test]
    fn multiplicative_values() {
        let t = f9();
        let module = FqModule::new(&t).unwrap();
        let table = CharTable::new(&module).unwrap();
        let g = t.find_generator().unwrap();
        for a in t.elements().filter(|a| !a.is_zero()) {
            assert!((table.mult(&MultCharacter::TRIVIAL, a) - 1.0).norm() < 1e-12);
        }
        let quad = MultCharacter::canonical(2);
        assert!((table.mult(&quad, g) + 1.0).norm() < 1e-12);
        assert_eq!(
            table.mult(&MultCharacter::TRIVIAL, FieldElement::ZERO),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            table.mult(&quad, FieldElement::ZERO),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn character_products() {
        let a = MultCharacter::canonical(4);
        let b = MultCharacter::new(4, 3).unwrap();
        assert!(a.product(&b, 8).is_trivial());
        assert_eq!(a.product(&a, 8), MultCharacter::canonical(2));
        assert!(MultCharacter::new(4, 2).is_err());
    }

    #[test]
    fn additive_orders_partition_the_field() {
        let t = f9();
        let module = FqModule::new(&t).unwrap();
        let table = CharTable::new(&module).unwrap();
        assert_eq!(
            table.add_char_order(&AddCharacter::TRIVIAL),
            PolyDivisor::one(2)
        );
        for g in module.all_divisors() {
            let count = table.add_char_orders().iter().filter(|o| **o == g).count();
            assert_eq!(count as u64, module.stats(&g).phi.to_u64().unwrap());
        }
    }

    #[test]
    fn indicators_in_f9() {
        let t = f9();
        let module = FqModule::new(&t).unwrap();
        let table = CharTable::new(&module).unwrap();
        let full = module.full_divisor();
        for a in t.elements().filter(|a| !a.is_zero()) {
            assert!((table.rho(1, a).unwrap() - 1.0).abs() < 1e-9);
            let primitive = if t.is_primitive(a).unwrap() { 1.0 } else { 0.0 };
            assert!((table.rho(8, a).unwrap() - primitive).abs() < 1e-9);
            let normal = if module.is_normal(a) { 1.0 } else { 0.0 };
            assert!((table.kappa(&full, a) - normal).abs() < 1e-9);
        }
        assert!(matches!(
            table.rho(8, FieldElement::ZERO),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn additive_sum_vanishes() {
        let t = f9();
        let module = FqModule::new(&t).unwrap();
        let table = CharTable::new(&module).unwrap();
        let f = QuadraticSpec::from_ints(&t, 1, 0, -1).unwrap();
        let s = table.char_sum(
            &MultCharacter::TRIVIAL,
            &MultCharacter::TRIVIAL,
            &AddCharacter::CANONICAL,
            &f,
        );
        assert!(s.norm() < 1e-9);
    }

    #[test]
    fn compensated_sum_is_exact_on_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16]
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect();
        assert_eq!(s.value().re, 1.0);
    }

    #[test]
    fn oversized_fields_are_refused() {
        let t = FieldTower::build_extension(3, 1, 11).unwrap();
        let module = FqModule::new(&t).unwrap();
        assert!(matches!(
            CharTable::new(&module),
            Err(Error::SizeBudgetExceeded { .. })
        ));
    }
}
