use crate::{Cli, Command, Pair, Quadratic};
use ffpn::chars::{indicator_audit, orthogonality_audit, weil_audit, CharTable};
use ffpn::fqpoly::{factor_xm1, FqModule, PolyDivisor, PolyRing};
use ffpn::gf::{FieldElement, FieldTower, TableMode};
use ffpn::numtheory::{FactorCache, Factorizer, IntFactorization, PrimePower};
use ffpn::search::{resolve_pair, QuadraticSpec, ResolveOptions, SearchField};
use ffpn::sieve::{
    auto_sieve, basic_condition, render_table, reproduce_table, sieve_report, PairData, PolyChoice,
    SieveReport,
};
use ffpn::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// A rendered result in both output modes.
pub struct Output {
    pub json: Value,
    pub text: String,
}

impl Output {
    fn new(json: Value, text: String) -> Self {
        Self { json, text }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnfactoredCofactor { .. } | Error::SizeBudgetExceeded { .. } => 3,
        Error::Io(_) | Error::Json(_) | Error::ZeroElement => 1,
        _ => 2,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parse_big(s: &str) -> ffpn::Result<BigUint> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("not a nonnegative integer: {s:?}")))
}

fn prime_power(q: u64) -> ffpn::Result<PrimePower> {
    PrimePower::from_value(q)
}

struct Context {
    cache: Option<FactorCache>,
}

impl Context {
    fn factorizer(&self) -> Factorizer<'_> {
        match &self.cache {
            Some(c) => Factorizer::new().with_cache(c),
            None => Factorizer::new(),
        }
    }

    fn tower(&self, pair: Pair, tables: TableMode) -> ffpn::Result<FieldTower> {
        let q = prime_power(pair.q)?;
        let tower = FieldTower::new(q.p, q.r, pair.m, tables)?;
        tower.set_order_factorization(self.factorizer().factorize_qm_minus_1(q, pair.m)?)?;
        Ok(tower)
    }

    fn pair_data(&self, pair: Pair) -> ffpn::Result<PairData> {
        PairData::new(prime_power(pair.q)?, pair.m, &self.factorizer())
    }
}

pub fn run(cli: &Cli) -> ffpn::Result<Output> {
    let ctx = Context {
        cache: cli.cache.as_ref().map(FactorCache::open).transpose()?,
    };
    match &cli.command {
        Command::FactorInt { n, q, m, hints } => factor_int(&ctx, n.as_deref(), *q, *m, hints),
        Command::FactorPoly(pair) => factor_poly(*pair),
        Command::Check(pair) => {
            let b = basic_condition(&ctx.pair_data(*pair)?);
            let text = format!(
                "(q,m) = ({},{})\nW(q^m-1) = {}\nOmega(x^m-1) = {}\nq^(m/2) = {}\nrhs = {}\nverdict: {}\n",
                b.q, b.m, b.w, b.omega_poly, decimal(b.lhs), b.rhs, b.verdict
            );
            Ok(Output::new(to_value(&b), text))
        }
        Command::Sieve { pair, d, g } => {
            let data = ctx.pair_data(*pair)?;
            let r = sieve_report(&data, &parse_big(d)?, &parse_choice(g)?)?;
            Ok(Output::new(to_value(&r), sieve_text(&r)))
        }
        Command::AutoSieve { pair, budget } => {
            let a = auto_sieve(&ctx.pair_data(*pair)?, *budget);
            let text = format!(
                "{}configurations examined: {}\nexhaustive over g: {}\n",
                sieve_text(&a.best),
                a.explored,
                a.exhaustive_over_g
            );
            Ok(Output::new(to_value(&a), text))
        }
        Command::Table { which } => {
            let rows = reproduce_table(*which, &ctx.factorizer())?;
            Ok(Output::new(to_value(&rows), render_table(&rows)))
        }
        Command::Enumerate(pair) => {
            let t = ctx.tower(*pair, TableMode::Require)?;
            let s = SearchField::new(&t)?;
            let elems: Vec<_> = s.primitive_normal().iter().map(|&a| t.repr(a)).collect();
            let mut text = format!(
                "{} primitive normal elements of F_{}^{}\n",
                elems.len(),
                pair.q,
                pair.m
            );
            for e in &elems {
                let _ = writeln!(text, "{e}");
            }
            Ok(Output::new(
                json!({"q": pair.q, "m": pair.m, "count": elems.len(), "elements": elems}),
                text,
            ))
        }
        Command::Count { pair, f, e1, e2, g } => {
            let t = ctx.tower(*pair, TableMode::Require)?;
            let s = SearchField::new(&t)?;
            let f = parse_quadratic(&t, f)?;
            let n = t.group_order();
            let g = parse_divisor(s.module(), g)?;
            let (e1, e2) = (e1.unwrap_or(n), e2.unwrap_or(n));
            let count = s.exact_count(&f, e1, e2, &g)?;
            let g_text = s.module().render_divisor(&g);
            let text = format!(
                "f = {}\ne1 = {e1}, e2 = {e2}, g = {g_text}\ncount = {count}\n",
                quadratic_text(&t, &f)
            );
            Ok(Output::new(
                json!({"q": pair.q, "m": pair.m, "f": f.repr(&t), "e1": e1, "e2": e2, "g": g_text, "count": count}),
                text,
            ))
        }
        Command::Witness { pair, f } => {
            let t = ctx.tower(*pair, TableMode::Require)?;
            let s = SearchField::new(&t)?;
            let f = parse_quadratic(&t, f)?;
            let w = s.find_witness(&f)?;
            let text = match w {
                Some(a) => format!(
                    "f = {}\nalpha = {}\nf(alpha) = {}\n",
                    quadratic_text(&t, &f),
                    t.repr(a),
                    t.repr(f.eval(&t, a))
                ),
                None => format!("f = {}\nno witness\n", quadratic_text(&t, &f)),
            };
            Ok(Output::new(
                json!({
                    "q": pair.q,
                    "m": pair.m,
                    "f": f.repr(&t),
                    "alpha": w.map(|a| t.repr(a)),
                    "f_alpha": w.map(|a| t.repr(f.eval(&t, a))),
                }),
                text,
            ))
        }
        Command::ResolvePair { pair, budget } => {
            let options = ResolveOptions {
                budget: *budget,
                checkpoint: cli.checkpoint.clone(),
                ..ResolveOptions::default()
            };
            let r = resolve_pair(prime_power(pair.q)?, pair.m, &options)?;
            let mut text = format!(
                "(q,m) = ({},{})\nstatus: {}\nprimitive normal elements: {}\nquadratics checked: {}\nprobes: {} of {}\n",
                r.q,
                r.m,
                to_value(&r.status).as_str().unwrap_or_default(),
                r.primitive_normal_count,
                r.quadratics_checked,
                r.probes,
                r.budget
            );
            let _ = writeln!(text, "bad quadratics: {}", r.bad_quadratics.len());
            for f in &r.bad_quadratics {
                let _ = writeln!(text, "  a={} b={} c={}", f.a, f.b, f.c);
            }
            Ok(Output::new(to_value(&r), text))
        }
        Command::CharAudit {
            pair,
            quadratics,
            tolerance,
        } => {
            let t = ctx.tower(*pair, TableMode::Require)?;
            let module = FqModule::new(&t)?;
            let table = CharTable::new(&module)?;
            let orth = orthogonality_audit(&table, 1e-9);
            let ind = indicator_audit(&table, *tolerance)?;
            let weil = weil_audit(&table, *quadratics, cli.seed, *tolerance);
            let mut text = format!("(q,m) = ({},{})\n", pair.q, pair.m);
            let _ = writeln!(
                text,
                "orthogonality: worst {:.3e} / {:.3e} / {:.3e} ({})",
                orth.worst_character_sum,
                orth.worst_element_sum,
                orth.worst_additive_sum,
                pass_word(orth.passed)
            );
            let _ = writeln!(
                text,
                "indicators: {} rho and {} kappa checks, worst deviation {:.3e} ({})",
                ind.rho_checks,
                ind.kappa_checks,
                ind.worst_deviation,
                pass_word(ind.passed)
            );
            for (name, s) in [
                ("|S| <= 3 q^(m/2)", &weil.three_sqrt),
                ("|S| <= 2 q^(m/2), psi trivial", &weil.trivial_psi),
                ("|S| <= n q^(m/2)", &weil.degree_bound),
            ] {
                let worst = s.worst.as_ref().map_or("-".to_string(), |w| {
                    format!(
                        "{:.6} at orders ({}, {}, {})",
                        w.margin, w.triple.0, w.triple.1, w.triple.2
                    )
                });
                let _ = writeln!(
                    text,
                    "{name}: {} sums, {} violations, worst margin {worst}",
                    s.checked, s.violations
                );
            }
            let _ = writeln!(
                text,
                "regrouping: worst difference {:.3e}",
                weil.regroup_worst
            );
            let passed = orth.passed && ind.passed && weil.passed;
            let _ = writeln!(text, "audit: {}", pass_word(passed));
            Ok(Output::new(
                json!({"orthogonality": orth, "indicators": ind, "weil": weil, "passed": passed}),
                text,
            ))
        }
    }
}

fn pass_word(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}

fn decimal(x: f64) -> String {
    if x.abs() < 1e15 {
        format!("{x:.6}")
    } else {
        format!("{x:.6e}")
    }
}

fn factorization_json(f: &IntFactorization) -> Value {
    let stats = f.stats();
    json!({
        "n": f.n().to_string(),
        "factors": f.factors().iter().map(|(p, e)| json!({"p": p.to_string(), "e": e})).collect::<Vec<_>>(),
        "omega": stats.omega,
        "w": stats.w.to_string(),
        "probable": f.is_probable(),
    })
}

fn factor_int(
    ctx: &Context,
    n: Option<&str>,
    q: Option<u64>,
    m: Option<u32>,
    hints: &[String],
) -> ffpn::Result<Output> {
    let fz = ctx.factorizer();
    let f = match (n, q, m) {
        (Some(n), _, _) => {
            let hints = hints
                .iter()
                .map(|h| parse_big(h))
                .collect::<ffpn::Result<Vec<_>>>()?;
            fz.factorize(&parse_big(n)?, &hints)?
        }
        (None, Some(q), Some(m)) => fz.factorize_qm_minus_1(prime_power(q)?, m)?,
        _ => return Err(invalid("give --n, or both --q and --m")),
    };
    let parts: Vec<String> = f
        .factors()
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect();
    let mut text = format!(
        "{} = {}\n",
        f.n(),
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" * ")
        }
    );
    let _ = writeln!(text, "omega = {}, W = {}", f.omega(), f.stats().w);
    if f.is_probable() {
        text.push_str("some factors are probable primes\n");
    }
    Ok(Output::new(factorization_json(&f), text))
}

fn factor_poly(pair: Pair) -> ffpn::Result<Output> {
    let q = prime_power(pair.q)?;
    let fq = FieldTower::new(q.p, q.r, 1, TableMode::Auto)?;
    let fact = factor_xm1(&fq, pair.m)?;
    let ring = PolyRing::new(&fq);
    let rendered: Vec<String> = fact.factors.iter().map(|f| ring.render(f)).collect();
    let mut text = format!(
        "x^{}-1 over F_{}: {} distinct factors, multiplicity {}\n",
        pair.m,
        pair.q,
        rendered.len(),
        fact.multiplicity
    );
    for (f, d) in rendered.iter().zip(fact.degrees()) {
        let _ = writeln!(text, "  deg {d}: {f}");
    }
    Ok(Output::new(
        json!({
            "q": pair.q,
            "m": pair.m,
            "multiplicity": fact.multiplicity,
            "degrees": fact.degrees(),
            "factors": rendered,
        }),
        text,
    ))
}

fn parse_choice(g: &str) -> ffpn::Result<PolyChoice> {
    match g.trim() {
        "full" => Ok(PolyChoice::Full),
        "one" | "1" => Ok(PolyChoice::One),
        list => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| invalid(format!("bad degree {s:?}")))
            })
            .collect::<ffpn::Result<Vec<_>>>()
            .map(PolyChoice::Degrees),
    }
}

fn parse_divisor(module: &FqModule, g: &str) -> ffpn::Result<PolyDivisor> {
    let k = module.factor_count();
    match g.trim() {
        "full" => Ok(module.full_divisor()),
        "one" | "1" => Ok(PolyDivisor::one(k)),
        list => {
            let exps = list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| invalid(format!("bad exponent {s:?}")))
                })
                .collect::<ffpn::Result<Vec<_>>>()?;
            let g = PolyDivisor { exps };
            if g.exps.len() != k || !g.divides(&module.full_divisor()) {
                return Err(invalid(format!(
                    "{list:?} is not a divisor of x^m-1 ({k} factors)"
                )));
            }
            Ok(g)
        }
    }
}

fn parse_element(t: &FieldTower, s: &str) -> ffpn::Result<FieldElement> {
    let p = t.p() as i64;
    let coeffs = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map(|v| v.rem_euclid(p) as u64)
                .map_err(|_| invalid(format!("bad coefficient {c:?}")))
        })
        .collect::<ffpn::Result<Vec<_>>>()?;
    t.element(&coeffs)
}

fn parse_quadratic(t: &FieldTower, f: &Quadratic) -> ffpn::Result<QuadraticSpec> {
    QuadraticSpec::new(
        t,
        parse_element(t, &f.a)?,
        parse_element(t, &f.b)?,
        parse_element(t, &f.c)?,
    )
}

fn quadratic_text(t: &FieldTower, f: &QuadraticSpec) -> String {
    let r = f.repr(t);
    format!("a={} b={} c={}", r.a, r.b, r.c)
}

fn sieve_text(r: &SieveReport) -> String {
    let c = &r.config;
    let list = |v: &[BigUint]| {
        v.iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut text = format!("(q,m) = ({},{})\n", c.q, c.m);
    let _ = writeln!(text, "d = {} (primes {})", c.d, list(&c.d_primes));
    let _ = writeln!(text, "g = {} (degrees {:?})", c.g, c.g_degrees);
    let _ = writeln!(text, "sieved primes: [{}]", list(&c.remaining_primes));
    let _ = writeln!(text, "sieved factor degrees: {:?}", c.remaining_degrees);
    let _ = writeln!(text, "n = {}, k = {}", r.n, r.k);
    let _ = writeln!(text, "Delta = {} ({:.5})", r.delta, r.delta_value());
    match (&r.lambda, r.lambda_value, &r.rhs, r.rhs_value) {
        (Some(l), Some(lv), Some(x), Some(xv)) => {
            let _ = writeln!(text, "Lambda = {l} ({lv:.5})");
            let _ = writeln!(text, "q^(m/2) = {}", decimal(r.lhs));
            let _ = writeln!(text, "rhs = {x} ({})", decimal(xv));
        }
        _ => {
            let _ = writeln!(text, "q^(m/2) = {}", decimal(r.lhs));
        }
    }
    let _ = writeln!(text, "verdict: {}", r.verdict);
    text
}
