use ffpn::fqpoly::{poly_stats, FqModule, XmOneShape};
use ffpn::gf::FieldTower;
use ffpn::numtheory::PrimePower;
use ffpn::search::{enumerate_primitive_normal, QuadraticSpec, SearchField};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn tower(q: u64, m: u32) -> FieldTower {
    let q = PrimePower::from_value(q).unwrap();
    FieldTower::build_extension(q.p, q.r, m).unwrap()
}

fn all_exponents(bound: u64, count: usize) -> Vec<Vec<u64>> {
    (0..count).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect()
    })
}

#[test]
fn phi_sums_to_field_size() {
    for q in [3u64, 9, 27] {
        let pp = PrimePower::from_value(q).unwrap();
        for m in 1..=12u64 {
            let shape = XmOneShape::new(pp, m);
            let total: BigUint = all_exponents(shape.multiplicity(), shape.degrees.len())
                .iter()
                .map(|exps| {
                    let pairs: Vec<(u64, u64)> = shape
                        .degrees
                        .iter()
                        .copied()
                        .zip(exps.iter().copied())
                        .collect();
                    poly_stats(q, &pairs).phi
                })
                .sum();
            assert_eq!(total, BigUint::from(q).pow(m as u32), "q = {q}, m = {m}");
        }
    }
}

#[test]
fn fq_order_classes_have_phi_elements() {
    for (q, m) in [(3, 3), (3, 4), (9, 2), (3, 6)] {
        let t = tower(q, m);
        let module = FqModule::new(&t).unwrap();
        let mut classes: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        for a in t.elements() {
            *classes.entry(module.fq_order(a).exps).or_default() += 1;
        }
        for g in module.all_divisors() {
            let got = classes.get(&g.exps).copied().unwrap_or(0);
            assert_eq!(
                BigUint::from(got),
                module.stats(&g).phi,
                "F_{}^{m}, g = {:?}",
                q,
                g.exps
            );
        }
    }
}

#[test]
fn quadratic_extensions_primitive_implies_normal() {
    for q in [3u64, 9, 27, 81] {
        let t = tower(q, 2);
        let s = SearchField::new(&t).unwrap();
        for a in t.elements().filter(|a| s.is_primitive(*a)) {
            assert!(s.module().is_normal(a), "F_{q}^2");
        }
    }
}

#[test]
fn scalar_multiples_preserve_normality() {
    for (q, m) in [(3, 3), (3, 4)] {
        let t = tower(q, m);
        let module = FqModule::new(&t).unwrap();
        let scalars: Vec<_> = t
            .base_field_elements()
            .into_iter()
            .filter(|c| !c.is_zero())
            .collect();
        for a in t.elements() {
            let normal = module.is_normal(a);
            for &c in &scalars {
                assert_eq!(module.is_normal(t.mul(c, a)), normal);
            }
        }
    }
}

#[test]
fn small_enumerations() {
    assert_eq!(enumerate_primitive_normal(&tower(3, 1)).unwrap().len(), 1);
    assert_eq!(enumerate_primitive_normal(&tower(3, 2)).unwrap().len(), 4);
    assert_eq!(enumerate_primitive_normal(&tower(3, 3)).unwrap().len(), 9);
}

#[test]
fn unrestricted_count_excludes_zeros() {
    let t = tower(9, 2);
    let s = SearchField::new(&t).unwrap();
    let f = QuadraticSpec::from_ints(&t, 1, 0, -1).unwrap();
    let one = ffpn::fqpoly::PolyDivisor::one(s.module().factor_count());
    assert_eq!(s.exact_count(&f, 1, 1, &one).unwrap(), 78);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn witness_exists_iff_count_positive(seed in any::<u64>(), m in 2u32..=4) {
        let t = tower(3, m);
        let s = SearchField::new(&t).unwrap();
        let f = QuadraticSpec::random(&t, &mut ChaCha8Rng::seed_from_u64(seed));
        let n = t.group_order();
        let full = s.module().full_divisor();
        let count = s.exact_count(&f, n, n, &full).unwrap();
        let witness = s.find_witness(&f).unwrap();
        prop_assert_eq!(witness.is_some(), count > 0);
        if let Some(a) = witness {
            prop_assert!(s.is_primitive(a) && s.module().is_normal(a));
            prop_assert!(s.is_primitive(f.eval(&t, a)));
        }
    }

    #[test]
    fn full_count_matches_primitive_normal_filter(seed in any::<u64>()) {
        let t = tower(3, 4);
        let s = SearchField::new(&t).unwrap();
        let f = QuadraticSpec::random(&t, &mut ChaCha8Rng::seed_from_u64(seed));
        let n = t.group_order();
        let full = s.module().full_divisor();
        let direct = s
            .primitive_normal()
            .iter()
            .filter(|&&a| s.is_primitive(f.eval(&t, a)))
            .count() as u64;
        prop_assert_eq!(s.exact_count(&f, n, n, &full).unwrap(), direct);
        let nonvanishing = s
            .primitive_normal()
            .iter()
            .filter(|&&a| !f.eval(&t, a).is_zero())
            .count() as u64;
        prop_assert_eq!(s.exact_count(&f, n, 1, &full).unwrap(), nonvanishing);
    }
}
