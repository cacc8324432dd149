//! The desk-scale acceptance matrix.
//!
//! Each criterion runs a family of exact checks and reports how many were
//! made and which failed. The same entry points back the `acceptance`
//! integration test and `verify --all-desk`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fp::{binom_i128, Fp};
use crate::hpart::HPart;
use crate::idempotents::{enumerate_xm, mu_compose, mu_lambda, mu_table};
use crate::isocheck::{verify_with, MapSpec};
use crate::linalg::FpMatrix;
use crate::qoracle::QOracle;
use crate::rootdata::{PairCase, Rank2Class, Weight};
use crate::straighten::{Algebra, Exps, PBWElement, Term};

const SYSTEMS: [&str; 3] = ["A2", "B2", "G2"];
const MAX_SAMPLES: usize = 12;

/// Criterion ids with their titles.
pub const CRITERIA: [(u32, &str); 13] = [
    (1, "fast path agrees with the rational oracle"),
    (2, "divided-power identities"),
    (3, "alternating binomial sums"),
    (4, "alternating commutator leading terms"),
    (5, "splitting of root vectors lands in U_r^+"),
    (6, "first map on U^+ is bijective"),
    (7, "second map on U^+ is bijective"),
    (8, "torus maps are bijective and multiplicative"),
    (9, "torus idempotents"),
    (10, "first map on U is bijective"),
    (11, "first maps on the Borel parts are bijective"),
    (12, "support shapes of commutators and products"),
    (13, "Frobenius and its splitting"),
];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub checks: usize,
    pub failed: usize,
    pub samples: Vec<String>,
    pub details: Vec<String>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.failed == 0 && self.checks > 0
    }

    /// One-line summary.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "[{status}] criterion {:>2}: {} ({} checks, {} failed, {:.1}s)",
            self.id,
            self.title,
            self.checks,
            self.failed,
            self.elapsed_ms as f64 / 1000.0
        );
        if let Some(e) = &self.error {
            s.push_str(&format!(" error: {e}"));
        }
        s
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failed: usize,
    samples: Vec<String>,
    details: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.samples.len() < MAX_SAMPLES {
                self.samples.push(msg());
            }
        }
    }

    fn note(&mut self, s: String) {
        self.details.push(s);
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed += other.failed;
        for s in other.samples {
            if self.samples.len() < MAX_SAMPLES {
                self.samples.push(s);
            }
        }
        self.details.extend(other.details);
    }
}

/// Runs one criterion.
pub fn run_criterion(id: u32) -> CriterionReport {
    let title = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown criterion", |c| c.1);
    let start = Instant::now();
    let mut t = Tally::default();
    let res = match id {
        1 => oracle_equivalence(&mut t),
        2 => divided_power_identities(&mut t),
        3 => alternating_binomial_sums(&mut t),
        4 => alternating_commutators(&mut t),
        5 => root_vector_splitting(&mut t),
        6 => maps(&mut t, &plus_first_specs()),
        7 => maps(&mut t, &plus_second_specs()),
        8 => maps(&mut t, &torus_specs()),
        9 => torus_idempotents(&mut t),
        10 => maps(&mut t, &full_first_specs()),
        11 => maps(&mut t, &borel_specs()),
        12 => support_shapes(&mut t),
        13 => frobenius_checks(&mut t),
        _ => Err(crate::Error::Invalid(format!("no criterion {id}"))),
    };
    CriterionReport {
        id,
        title,
        checks: t.checks,
        failed: t.failed,
        samples: t.samples,
        details: t.details,
        elapsed_ms: start.elapsed().as_millis(),
        error: res.err().map(|e| e.to_string()),
    }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id)).collect()
}

// ----- helpers -----

fn sign(fp: Fp, c: i64) -> u32 {
    fp.from_i64(c)
}

/// Level for torus tables needing binomials of degree `< bound`.
fn level_for(p: u32, bound: u64) -> u32 {
    let mut l = 1;
    while (p as u64).pow(l) < bound {
        l += 1;
    }
    l
}

/// The `e`-parts of an element, requiring it to lie in `U^+`.
fn e_support(x: &PBWElement) -> Vec<(Exps, u32)> {
    x.terms()
        .map(|(f, h, e)| {
            assert!(f.iter().all(|&c| c == 0), "element outside U^+");
            (e.clone(), h.values[0])
        })
        .collect()
}

fn random_exps(rng: &mut ChaCha8Rng, nu: usize, range: std::ops::Range<usize>, bound: u32) -> Exps {
    (0..nu).map(|i| if range.contains(&i) { rng.gen_range(0..bound) } else { 0 }).collect()
}

/// A random combination of 1–3 `e`-monomials supported on `range` with
/// exponents below `bound`.
fn random_plus(alg: &Algebra, rng: &mut ChaCha8Rng, range: std::ops::Range<usize>, bound: u32) -> PBWElement {
    let k = rng.gen_range(1..=3);
    let terms: Vec<(Exps, u32)> =
        (0..k).map(|_| (random_exps(rng, alg.nu(), range.clone(), bound), rng.gen_range(1..alg.p()))).collect();
    alg.from_scalar_terms(&terms, false)
}

/// Exponents below `bound` on at most `count` random roots.
fn sparse_exps(rng: &mut ChaCha8Rng, nu: usize, count: usize, bound: u32) -> Exps {
    let mut v = vec![0; nu];
    for _ in 0..count {
        v[rng.gen_range(0..nu)] = rng.gen_range(0..bound);
    }
    v
}

/// A random element of `U_d` built from `f^(a) μ e^(b)` with a random
/// combination of idempotent tables; `support` caps the number of roots
/// in each of `a` and `b`.
fn random_truncated(alg: &Algebra, rng: &mut ChaCha8Rng, d: u32, exp_bound: u32, support: usize) -> Result<PBWElement> {
    let nu = alg.nu();
    let rank = alg.root_system().rank();
    let xs = enumerate_xm(rank, alg.p(), d);
    let fp = alg.fp();
    let hs = alg.hspace();
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut h = hs.zero();
        for _ in 0..rng.gen_range(1..=2) {
            let lam = &xs[rng.gen_range(0..xs.len())];
            hs.add_scaled(&mut h, &mu_table(alg, lam, d)?, rng.gen_range(1..fp.p()));
        }
        let f = sparse_exps(rng, nu, support, exp_bound);
        let e = sparse_exps(rng, nu, support, exp_bound);
        terms.push(Term { f, h, e });
    }
    Ok(alg.from_terms(terms))
}

fn q_of(c: u32, q: u32) -> u32 {
    c / q
}

// ----- 1: oracle equivalence -----

fn oracle_equivalence(t: &mut Tally) -> Result<()> {
    const PRODUCTS: usize = 500;
    for (si, label) in SYSTEMS.iter().enumerate() {
        let algs: Vec<Algebra> =
            [(2u64, 4u32), (3, 3), (5, 2)].iter().map(|&(p, l)| Algebra::new(label, p, l)).collect::<Result<_>>()?;
        let nr = algs[0].root_system().num_roots();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001 + si as u64);
        let draws: Vec<Vec<(usize, u32)>> = (0..PRODUCTS)
            .map(|_| {
                let k = rng.gen_range(1..=4);
                (0..k).map(|_| (rng.gen_range(0..nr), rng.gen_range(1..=6))).collect()
            })
            .collect();
        let outcomes: Vec<Result<Vec<bool>>> = draws
            .par_iter()
            .map_init(|| QOracle::for_algebra(&algs[0]), |oracle, gens| {
                let mut q = oracle.one();
                for &(r, n) in gens {
                    q = oracle.q_multiply(&q, &oracle.q_divided(r, n));
                }
                algs.iter()
                    .map(|alg| {
                        let xs: Vec<PBWElement> = gens.iter().map(|&(r, n)| alg.root_power(r, n)).collect();
                        Ok(alg.product(&xs)? == oracle.reduce_mod_p(&q, alg)?)
                    })
                    .collect()
            })
            .collect();
        for (gens, out) in draws.iter().zip(outcomes) {
            for (alg, ok) in algs.iter().zip(out?) {
                t.check(ok, || format!("{label} p={}: product {gens:?}", alg.p()));
            }
        }
        t.note(format!("{label}: {PRODUCTS} products at p = 2, 3, 5"));
    }
    Ok(())
}

// ----- 2: divided-power identities -----

fn divided_power_identities(t: &mut Tally) -> Result<()> {
    const MAX: u32 = 8;
    let parts: Vec<Result<Tally>> = SYSTEMS
        .par_iter()
        .flat_map(|&label| [2u32, 3, 5].into_par_iter().map(move |p| (label, p)))
        .map(|(label, p)| {
            let mut t = Tally::default();
            let alg = Algebra::new(label, p as u64, level_for(p, 2 * MAX as u64 + 1))?;
            identities_for(&alg, MAX, &mut t)?;
            Ok(t)
        })
        .collect();
    for part in parts {
        t.merge(part?);
    }
    Ok(())
}

fn identities_for(alg: &Algebra, max: u32, t: &mut Tally) -> Result<()> {
    let rs = alg.root_system();
    let hs = alg.hspace();
    let fp = alg.fp();
    let label = rs.label();
    let p = alg.p();
    let nr = rs.num_roots();
    for a in 0..nr {
        let neg = rs.negate(a);
        let coroot = alg.constants().coroot_coeffs(a).to_vec();
        for m in 0..=max {
            let xm = alg.root_power(a, m);
            for n in 0..=max {
                // e^(m) e^(n) = (m+n choose n) e^(m+n)
                let lhs = alg.multiply(&xm, &alg.root_power(a, n))?;
                let rhs = alg.scale(&alg.root_power(a, m + n), fp.binom((m + n) as u64, n as u64));
                t.check(lhs == rhs, || format!("{label} p={p} same root {a} m={m} n={n}"));

                // e_α^(m) e_{-α}^(n) = Σ_k e_{-α}^(n-k) (h_α - m - n + 2k choose k) e_α^(m-k)
                let lhs = alg.multiply(&xm, &alg.root_power(neg, n))?;
                let mut rhs = alg.zero();
                for k in 0..=m.min(n) {
                    let h = alg.torus(hs.binomial(&coroot, 2 * k as i64 - m as i64 - n as i64, k as u64)?);
                    let term = alg.product(&[alg.root_power(neg, n - k), h, alg.root_power(a, m - k)])?;
                    rhs = alg.add(&rhs, &term);
                }
                t.check(lhs == rhs, || format!("{label} p={p} opposite root {a} m={m} n={n}"));

                // (h_α choose m)(h_α choose n) = Σ_k (m+n-k choose n)(n choose k)(h_α choose m+n-k)
                if a < rs.num_positive() {
                    let lhs = hs.mul(&hs.binomial(&coroot, 0, m as u64)?, &hs.binomial(&coroot, 0, n as u64)?)?;
                    let mut rhs = hs.zero();
                    for k in 0..=m.min(n) {
                        let c = fp.mul(fp.binom((m + n - k) as u64, n as u64), fp.binom(n as u64, k as u64));
                        hs.add_scaled(&mut rhs, &hs.binomial(&coroot, 0, (m + n - k) as u64)?, c);
                    }
                    t.check(lhs == rhs, || format!("{label} p={p} coroot binomials {a} m={m} n={n}"));
                }
            }
            // e_α^(m) (h_β + c choose n) = (h_β + c - ⟨α, β^∨⟩ m choose n) e_α^(m)
            for b in 0..nr {
                let d = alg.constants().coroot_coeffs(b).to_vec();
                let shift = rs.pairing_idx(a, b) * m as i64;
                for c in [-1i64, 2] {
                    for n in 0..=max {
                        let lhs = alg.multiply(&xm, &alg.torus(hs.binomial(&d, c, n as u64)?))?;
                        let rhs = alg.multiply(&alg.torus(hs.binomial(&d, c - shift, n as u64)?), &xm)?;
                        t.check(lhs == rhs, || format!("{label} p={p} torus move {a} past h_{b} m={m} c={c} n={n}"));
                    }
                }
            }
            // e_α^(m) e_β^(n) = e_β^(n) e_α^(m) when α + β is not a root and β ≠ -α
            for b in 0..nr {
                if matches!(rs.classify_pair(a, b), Rank2Class::Commuting | Rank2Class::Proportional) {
                    for n in [1, 3, max] {
                        let y = alg.root_power(b, n);
                        let ok = alg.multiply(&xm, &y)? == alg.multiply(&y, &xm)?;
                        t.check(ok, || format!("{label} p={p} commuting roots {a},{b} m={m} n={n}"));
                    }
                }
            }
        }
    }
    Ok(())
}

// ----- 3: alternating binomial sums -----

fn alternating_binomial_sums(t: &mut Tally) -> Result<()> {
    for p in [2u32, 3, 5] {
        let fp = Fp::new(p as u64)?;
        for r in 1..=2u32 {
            let q = p.pow(r);
            for n in 1..=4u32 {
                for m in 0..=n * q {
                    let top = (n * q - m) as u64;
                    let lucas = (0..=n).fold(0, |acc, i| {
                        let b = fp.binom(top, (i * q) as u64);
                        if i % 2 == 0 {
                            fp.add(acc, b)
                        } else {
                            fp.sub(acc, b)
                        }
                    });
                    let exact: i128 = (0..=n as i128).map(|i| (1 - 2 * (i % 2)) * binom_i128(top as i128, i as u32 * q)).sum();
                    let expected = u32::from((n - 1) * q < m);
                    t.check(lucas == expected, || format!("p={p} r={r} n={n} m={m}: Lucas sum {lucas}"));
                    t.check(fp.from_i64(exact.rem_euclid(p as i128) as i64) == expected, || {
                        format!("p={p} r={r} n={n} m={m}: integer sum {exact}")
                    });
                }
            }
        }
    }
    Ok(())
}

// ----- 4: alternating commutators -----

fn threshold(case: PairCase) -> u32 {
    match case {
        PairCase::A | PairCase::B | PairCase::C | PairCase::E | PairCase::G => 1,
        PairCase::D | PairCase::H => 2,
        PairCase::F => 3,
    }
}

/// The tabulated leading term `(coefficient, root)` of the alternating sum.
fn leading_term(alg: &Algebra, case: PairCase, a: usize, g: usize, n: u32) -> Option<(i64, usize)> {
    let rs = alg.root_system();
    let sc = alg.constants();
    let c = |x: usize, y: usize| sc.c(rs, x, y) as i64;
    let ag = rs.sum(a, g)?;
    let c1 = c(a, g);
    match (case, n) {
        (PairCase::A | PairCase::E | PairCase::G, 1) => Some((c1, ag)),
        (PairCase::B, 1) => Some((2 * c1, ag)),
        (PairCase::C, 1) => Some((3 * c1, ag)),
        (PairCase::D | PairCase::F, 1) => Some((c1, ag)),
        (PairCase::H, 1) => Some((2 * c1, ag)),
        (PairCase::D | PairCase::F, 2) => Some((c1 * c(a, ag), rs.sum(a, ag)?)),
        (PairCase::H, 2) => Some((3 * c1 * c(a, ag), rs.sum(a, ag)?)),
        (PairCase::F, 3) => {
            let a2g = rs.sum(a, ag)?;
            Some((c1 * c(a, ag) * c(a, a2g), rs.sum(a, a2g)?))
        }
        _ => None,
    }
}

fn alternating_commutators(t: &mut Tally) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for label in SYSTEMS {
        for p in [2u32, 3] {
            let alg = Algebra::new(label, p as u64, 1)?;
            let rs = alg.root_system();
            let fp = alg.fp();
            let nr = rs.num_roots();
            for a in 0..nr {
                for g in 0..nr {
                    if rs.is_positive(a) != rs.is_positive(g) {
                        continue;
                    }
                    let Rank2Class::Case { case, .. } = rs.classify_pair(a, g) else { continue };
                    seen.insert(format!("{case:?}"));
                    for r in 1..=2u32 {
                        let q = p.pow(r);
                        for n in 1..=threshold(case) + 1 {
                            let mut z = alg.zero();
                            for i in 0..=n {
                                let term = alg.product(&[
                                    alg.root_power(a, (n - i) * q),
                                    alg.root_power(g, q),
                                    alg.root_power(a, i * q),
                                ])?;
                                z = alg.lin(&z, &term, if i % 2 == 0 { 1 } else { fp.neg(1) });
                            }
                            let ctx = || format!("{label} p={p} r={r} case {case:?} α={a} γ={g} n={n}");
                            match leading_term(&alg, case, a, g, n) {
                                None => t.check(z.is_zero(), || format!("{}: expected zero", ctx())),
                                Some((coef, target)) => {
                                    let lead = alg.scale(&alg.root_power(target, q), sign(fp, coef));
                                    let rest = alg.sub(&z, &lead);
                                    t.check(alg.in_truncation(&rest, r), || format!("{}: remainder outside U_r", ctx()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let all = ["A", "B", "C", "D", "E", "F", "G", "H"];
    t.check(all.iter().all(|c| seen.contains(*c)), || format!("cases realized: {seen:?}"));
    t.note(format!("cases realized: {}", seen.into_iter().collect::<Vec<_>>().join(" ")));
    Ok(())
}

// ----- 5: splitting of root vectors -----

fn root_vector_splitting(t: &mut Tally) -> Result<()> {
    for label in SYSTEMS {
        for p in [2u32, 3] {
            let alg = Algebra::new(label, p as u64, 1)?;
            for r in 1..=2u32 {
                let q = p.pow(r);
                for b in 0..alg.nu() {
                    let x = alg.root_power(b, 1);
                    let diff = alg.sub(&alg.fr_prime_plus(&x, r)?, &alg.root_power(b, q));
                    t.check(alg.in_truncation(&diff, r), || format!("{label} p={p} r={r} root {b}"));
                    let root = &alg.root_system().root(b).0;
                    if root.iter().any(|&c| c as u32 == p) && root.iter().filter(|&&c| c != 0).count() > 1 {
                        t.note(format!("{label} p={p} r={r}: coefficient-{p} root {root:?} checked"));
                    }
                }
            }
        }
    }
    Ok(())
}

// ----- 6, 7, 8, 10, 11: multiplication maps -----

fn spec(statement: &str, system: &str, p: u32, r: u32, n: u32) -> MapSpec {
    MapSpec::new(statement, system, p, r, n).expect("known statement")
}

pub fn plus_first_specs() -> Vec<MapSpec> {
    let mut v: Vec<MapSpec> = [("A2", 2), ("A2", 3), ("A2", 5), ("B2", 2), ("B2", 3), ("G2", 2)]
        .iter()
        .map(|&(s, p)| spec("plus-first", s, p, 1, 1))
        .collect();
    v.push(spec("plus-first", "A2", 2, 1, 2));
    v
}

pub fn plus_second_specs() -> Vec<MapSpec> {
    vec![spec("plus-second", "A2", 2, 2, 0), spec("plus-second", "A2", 2, 3, 0)]
}

pub fn torus_specs() -> Vec<MapSpec> {
    let mut v = Vec::new();
    for p in [2, 3] {
        v.push(spec("torus-first", "A2", p, 1, 1));
        v.push(spec("torus-second", "A2", p, 1, 0));
        v.push(spec("torus-second", "A2", p, 2, 0));
        v.push(spec("torus-truncated", "A2", p, 1, 1));
    }
    v
}

pub fn full_first_specs() -> Vec<MapSpec> {
    vec![spec("full-first", "A1", 2, 1, 1), spec("full-first", "A1", 3, 1, 1), spec("full-first", "A1", 2, 1, 2)]
}

pub fn borel_specs() -> Vec<MapSpec> {
    let mut v = Vec::new();
    for s in ["A2", "B2"] {
        v.push(spec("upper-borel-first", s, 2, 1, 1));
        v.push(spec("lower-borel-first", s, 2, 1, 1));
    }
    v
}

fn maps(t: &mut Tally, specs: &[MapSpec]) -> Result<()> {
    for s in specs {
        let alg = s.algebra()?;
        let rep = verify_with(&alg, s)?;
        t.check(rep.passed(), || {
            format!("{} {} p={} r={} n={}: rank {} of {}", s.statement, s.system, s.p, s.r, s.n, rep.rank, rep.source_dim)
        });
        t.note(format!(
            "{} {} p={} r={} n={:?}: dim {} rank {} blocks {}{} in {} ms",
            rep.statement,
            rep.system,
            rep.p,
            rep.r,
            rep.n,
            rep.source_dim,
            rep.rank,
            rep.blocks.len(),
            match rep.multiplicative {
                Some(m) => format!(" multiplicative {m}"),
                None => String::new(),
            },
            rep.elapsed_ms
        ));
    }
    Ok(())
}

// ----- 9: torus idempotents -----

fn torus_idempotents(t: &mut Tally) -> Result<()> {
    for label in ["A1", "A2"] {
        for p in [2u32, 3] {
            for n in 1..=2u32 {
                idempotent_props(label, p, n, t)?;
            }
        }
    }
    Ok(())
}

fn idempotent_props(label: &str, p: u32, n: u32, t: &mut Tally) -> Result<()> {
    let alg = Algebra::new(label, p as u64, n + 1)?;
    let rs = alg.root_system();
    let rank = rs.rank();
    let hs = alg.hspace();
    let fp = alg.fp();
    let q = (p as i64).pow(n);
    let xs = enumerate_xm(rank, p, n);
    let mus: Vec<PBWElement> = xs.iter().map(|l| mu_lambda(&alg, l, n)).collect::<Result<_>>()?;
    let ctx = |what: &str| format!("{label} p={p} n={n}: {what}");

    // (h_i choose t) μ_λ = (⟨λ, α_i^∨⟩ choose t) μ_λ
    for (lam, mu) in xs.iter().zip(&mus) {
        for i in 0..rank {
            for tt in 0..q as u64 {
                let h = alg.torus(hs.binomial_monomial(&unit_u64(rank, i, tt))?);
                let lhs = alg.multiply(&h, mu)?;
                let rhs = alg.scale(mu, fp.binom(lam.0[i] as u64, tt));
                t.check(lhs == rhs, || ctx(&format!("evaluation λ={lam:?} i={i} t={tt}")));
            }
        }
    }

    // orthogonal idempotents summing to one
    let mut total = alg.zero();
    for (i, a) in mus.iter().enumerate() {
        total = alg.add(&total, a);
        for (j, b) in mus.iter().enumerate() {
            let prod = alg.multiply(a, b)?;
            let want = if i == j { a.clone() } else { alg.zero() };
            t.check(prod == want, || ctx(&format!("product of idempotents {i},{j}")));
        }
    }
    t.check(total == alg.one(), || ctx("sum of idempotents"));

    // a basis of U_n^0: binomial-basis coordinates have full rank and degrees below p^n
    let monomials = enumerate_xm(rank, p, n);
    let mut mat = FpMatrix::new(fp, monomials.len());
    let mut inside = true;
    for lam in &xs {
        let coeffs = hs.to_binomial_basis(&mu_table(&alg, lam, n)?);
        inside &= coeffs.keys().all(|m| m.iter().all(|&d| (d as i64) < q));
        let col = monomials
            .iter()
            .map(|m| *coeffs.get(&m.0.iter().map(|&d| d as u64).collect::<Vec<_>>()).unwrap_or(&0))
            .collect();
        mat.push_column(col);
    }
    t.check(inside, || ctx("idempotent outside U_n^0"));
    t.check(mat.rank() == xs.len(), || ctx(&format!("rank {} of {}", mat.rank(), xs.len())));

    // μ_λ = μ_λ' iff λ ≡ λ' mod p^n, over a window of λ'
    let window: Vec<Weight> = enumerate_xm(rank, p, n + 1).into_iter().map(|w| Weight(w.0.iter().map(|c| c - q).collect())).collect();
    for (lam, mu) in xs.iter().zip(&mus) {
        for w in &window {
            let same = mu_lambda(&alg, w, n)? == *mu;
            let congruent = lam.0.iter().zip(&w.0).all(|(a, b)| (a - b).rem_euclid(q) == 0);
            t.check(same == congruent, || ctx(&format!("coset test λ={lam:?} λ'={w:?}")));
        }
    }

    // e_α^(m) μ_λ = μ_{λ+mα} e_α^(m)
    for a in 0..rs.num_roots() {
        let alpha = rs.weight_of(&rs.root(a).0);
        for m in 0..=2 * q as u32 {
            let x = alg.root_power(a, m);
            for (lam, mu) in xs.iter().zip(&mus) {
                let lhs = alg.multiply(&x, mu)?;
                let rhs = alg.multiply(&mu_lambda(&alg, &lam.add(&alpha.scale(m as i64)), n)?, &x)?;
                t.check(lhs == rhs, || ctx(&format!("root {a}^({m}) past μ_{lam:?}")));
            }
        }
    }

    // μ_{λ + p^m λ'}^(n+m) = μ_λ^(m) Fr'^m(μ_λ'^(n)) with n + m at most the level
    for m in 1..=2u32 {
        let level = n + m;
        let big = alg.with_level(level)?;
        for lam in enumerate_xm(rank, p, m) {
            for lam2 in &xs {
                let (lhs, rhs) = mu_compose(&big, &lam, lam2, m, n)?;
                t.check(lhs == rhs, || ctx(&format!("composition m={m} λ={lam:?} λ'={lam2:?}")));
            }
        }
    }
    Ok(())
}

fn unit_u64(rank: usize, i: usize, v: u64) -> Vec<u64> {
    let mut out = vec![0; rank];
    out[i] = v;
    out
}

// ----- 12: support shapes -----

fn support_shapes(t: &mut Tally) -> Result<()> {
    const INSTANCES: usize = 240;
    let mut configs = Vec::new();
    for label in SYSTEMS {
        for p in [2u64, 3, 5] {
            configs.push(Algebra::new(label, p, 1)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        ordered_commutator(&configs[i % configs.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "ordered commutators");
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        interval_closure(&configs[i % configs.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "interval subalgebras");
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        interval_boundary(&configs[i % configs.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "boundary commutators");
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        digit_lemma(&configs[i % configs.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "digit support of products");
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        split_products(&configs[i % configs.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "products with split monomials");

    let mut graded = Vec::new();
    let mut conj = Vec::new();
    for label in SYSTEMS {
        for p in [2u32, 3] {
            graded.push(Algebra::new(label, p as u64, level_for(p, 10))?);
            conj.push(Algebra::new(label, p as u64, level_for(p, 3 * p as u64 + 2))?);
        }
    }
    let mut sub = Tally::default();
    let mut i = 0;
    while sub.checks < INSTANCES {
        graded_commutator(&graded[i % graded.len()], &mut rng, &mut sub)?;
        i += 1;
    }
    report_sub(t, sub, "graded commutators of U^+ and U^-");
    let mut sub = Tally::default();
    for i in 0..INSTANCES {
        conjugation_sum(&conj[i % conj.len()], &mut rng, &mut sub)?;
    }
    report_sub(t, sub, "alternating conjugation sums");
    Ok(())
}

fn report_sub(t: &mut Tally, sub: Tally, name: &str) {
    t.note(format!("{name}: {} checks, {} failed", sub.checks, sub.failed));
    t.merge(sub);
}

/// `e_k^(a) e_j^(b) − e_j^(b) e_k^(a)` for `j < k` is supported between `j`
/// and `k` with bounded exponents; adjacent roots commute.
fn ordered_commutator(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let nu = alg.nu();
    let j = rng.gen_range(0..nu - 1);
    let k = rng.gen_range(j + 1..nu);
    let (a, b) = (rng.gen_range(1..=8u32), rng.gen_range(1..=8u32));
    let (x, y) = (alg.root_power(k, a), alg.root_power(j, b));
    let comm = alg.sub(&alg.multiply(&x, &y)?, &alg.multiply(&y, &x)?);
    let label = alg.root_system().label();
    let ok = e_support(&comm).iter().all(|(c, _)| {
        c.iter().enumerate().all(|(i, &v)| v == 0 || (j..=k).contains(&i))
            && c[j] < b
            && c[k] < a
            && c[j..k].iter().sum::<u32>() <= b
            && c[j + 1..=k].iter().sum::<u32>() <= a
    }) && (k != j + 1 || comm.is_zero());
    t.check(ok, || format!("{label} p={}: e_{k}^({a}) e_{j}^({b})", alg.p()));
    Ok(())
}

/// Products of monomials supported on an interval stay on it, and stay in
/// `U_r^+` when the exponents are below `p^r`.
fn interval_closure(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let nu = alg.nu();
    let j = rng.gen_range(0..nu);
    let k = rng.gen_range(j..nu);
    let r = rng.gen_range(1..=2u32);
    let bound = alg.p().pow(r).min(7);
    let x = random_plus(alg, rng, j..k + 1, bound);
    let y = random_plus(alg, rng, j..k + 1, bound);
    let prod = alg.multiply(&x, &y)?;
    let truncated = bound == alg.p().pow(r);
    let ok = e_support(&prod).iter().all(|(c, _)| {
        c.iter().enumerate().all(|(i, &v)| v == 0 || (j..=k).contains(&i)) && (!truncated || c.iter().all(|&v| v < bound))
    });
    t.check(ok, || format!("{} p={} interval {j}..={k} r={r}", alg.root_system().label(), alg.p()));
    Ok(())
}

/// Commuting a divided power past a truncated monomial from either end.
fn interval_boundary(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let nu = alg.nu();
    let p = alg.p();
    let r = rng.gen_range(1..=2u32);
    let q = p.pow(r);
    let c = rng.gen_range(1..=8u32);
    let right = rng.gen_bool(0.5);
    let (j, k) = if right {
        let k = rng.gen_range(0..nu - 1);
        (rng.gen_range(0..=k), k)
    } else {
        let j = rng.gen_range(1..nu);
        (j, rng.gen_range(j..nu))
    };
    let m = alg.e_monomial(random_exps(rng, nu, j..k + 1, q));
    let outer = if right { k + 1 } else { j - 1 };
    let x = alg.root_power(outer, c);
    let diff = if right {
        alg.sub(&alg.multiply(&x, &m)?, &alg.multiply(&m, &x)?)
    } else {
        alg.sub(&alg.multiply(&m, &x)?, &alg.multiply(&x, &m)?)
    };
    let lo = j.min(outer);
    let hi = k.max(outer);
    let ok = e_support(&diff).iter().all(|(b, _)| {
        b.iter().enumerate().all(|(i, &v)| v == 0 || (lo..=hi).contains(&i))
            && b[outer] < c
            && (j..=k).all(|i| b[i] < q)
    });
    t.check(ok, || format!("{} p={p} r={r} {j}..={k} with root {outer}^({c})", alg.root_system().label()));
    Ok(())
}

/// The `p^r`-quotient digits under right multiplication by `e_k^(p^r)` and
/// by elements of `U_r^+`.
fn digit_lemma(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let nu = alg.nu();
    let p = alg.p();
    let fp = alg.fp();
    let r = if p == 5 { 1 } else { rng.gen_range(1..=2u32) };
    let q = p.pow(r);
    let label = alg.root_system().label();

    let k = rng.gen_range(0..nu);
    let a: Exps = (0..nu)
        .map(|i| match i.cmp(&k) {
            std::cmp::Ordering::Less => rng.gen_range(0..2 * q),
            std::cmp::Ordering::Equal => rng.gen_range(0..(p - 1) * q),
            std::cmp::Ordering::Greater => rng.gen_range(0..q),
        })
        .collect();
    let prod = alg.multiply(&alg.e_monomial(a.clone()), &alg.root_power(k, q))?;
    let mut lifted = a.clone();
    lifted[k] += q;
    let terms = e_support(&prod);
    let lead = terms.iter().find(|(c, _)| *c == lifted).map_or(0, |x| x.1);
    let ok = lead == fp.from_i64(q_of(a[k], q) as i64 + 1)
        && terms.iter().filter(|(c, _)| *c != lifted).all(|(c, _)| c.iter().zip(&a).all(|(&x, &y)| q_of(x, q) == q_of(y, q)));
    t.check(ok, || format!("{label} p={p} r={r}: e^{a:?} e_{k}^({q})"));

    let a: Exps = (0..nu).map(|_| rng.gen_range(0..3 * q)).collect();
    let z = random_plus(alg, rng, 0..nu, q);
    let prod = alg.multiply(&alg.e_monomial(a.clone()), &z)?;
    let ok = e_support(&prod).iter().all(|(c, _)| c.iter().zip(&a).all(|(&x, &y)| q_of(x, q) <= q_of(y, q)));
    t.check(ok, || format!("{label} p={p} r={r}: e^{a:?} times an element of U_r^+"));
    Ok(())
}

/// `e^(a) Fr'^r(e^(b))` has leading term `e^(a + p^r b)` and its other terms
/// have strictly smaller quotient digits on the first `k` roots.
fn split_products(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let nu = alg.nu();
    let p = alg.p();
    let r = if p == 5 { 1 } else { rng.gen_range(1..=2u32) };
    let q = p.pow(r);
    let k = rng.gen_range(1..=nu);
    let a: Exps = (0..nu).map(|_| rng.gen_range(0..q)).collect();
    let b: Exps = (0..nu).map(|i| if i < k { rng.gen_range(0..p) } else { 0 }).collect();
    let split = alg.fr_prime_plus(&alg.e_monomial(b.clone()), r)?;
    let prod = alg.multiply(&alg.e_monomial(a.clone()), &split)?;
    let lead: Exps = a.iter().zip(&b).map(|(&x, &y)| x + q * y).collect();
    let terms = e_support(&prod);
    let ok = terms.iter().find(|(c, _)| *c == lead).map_or(false, |x| x.1 == 1)
        && terms.iter().filter(|(c, _)| *c != lead).all(|(c, _)| {
            let digits: Vec<u32> = c.iter().map(|&x| q_of(x, q)).collect();
            digits[..k] != b[..k] && (0..k).all(|i| digits[i] <= b[i]) && digits[k..].iter().all(|&d| d == 0)
        });
    t.check(ok, || format!("{} p={p} r={r} k={k}: e^{a:?} Fr'(e^{b:?})", alg.root_system().label()));
    Ok(())
}

/// A random nonzero product of divided powers of one sign, with its root
/// lattice weight.
fn random_homogeneous(alg: &Algebra, rng: &mut ChaCha8Rng, negative: bool) -> Result<Option<(PBWElement, Vec<i64>)>> {
    let nu = alg.nu();
    let rank = alg.root_system().rank();
    let mut factors = Vec::new();
    let mut weight = vec![0i64; rank];
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(0..nu);
        let n = rng.gen_range(1..=3u32);
        for (w, &c) in weight.iter_mut().zip(&alg.root_system().root(k).0) {
            *w += n as i64 * c as i64;
        }
        factors.push(alg.root_power(if negative { k + nu } else { k }, n));
    }
    let x = alg.product(&factors)?;
    Ok((!x.is_zero()).then_some((x, weight)))
}

/// For homogeneous `x ∈ U^+`, `y ∈ U^-`, the terms of `xy − yx` have
/// `e`-weight strictly below `|x|` and balance `|x| − |y|`.
fn graded_commutator(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let (Some((x, wx)), Some((y, wy))) = (random_homogeneous(alg, rng, false)?, random_homogeneous(alg, rng, true)?) else {
        return Ok(());
    };
    let comm = alg.sub(&alg.multiply(&x, &y)?, &alg.multiply(&y, &x)?);
    let ok = comm.terms().all(|(f, _, e)| {
        let we = alg.exps_root_weight(e);
        let wf = alg.exps_root_weight(f);
        let below = wx.iter().zip(&we).all(|(a, b)| a >= b) && wx != we;
        let balanced = (0..wx.len()).all(|i| wx[i] - wy[i] == we[i] - wf[i]);
        below && balanced
    });
    t.check(ok, || format!("{} p={}: |x|={wx:?} |y|={wy:?}", alg.root_system().label(), alg.p()));
    Ok(())
}

/// `Σ_i (−1)^i e_α^((n−i)p^r − c) z e_α^(i p^r)` stays in `U_r` for `z ∈ U_r`.
fn conjugation_sum(alg: &Algebra, rng: &mut ChaCha8Rng, t: &mut Tally) -> Result<()> {
    let p = alg.p();
    let fp = alg.fp();
    let r = 1;
    let q = p.pow(r);
    let a = rng.gen_range(0..alg.root_system().num_roots());
    let n = rng.gen_range(0..=3u32);
    let c = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..=n * q) };
    let z = random_truncated(alg, rng, r, q, alg.nu())?;
    let mut s = alg.zero();
    for i in 0..=n {
        let Some(left) = ((n - i) * q).checked_sub(c) else { continue };
        let term = alg.product(&[alg.root_power(a, left), z.clone(), alg.root_power(a, i * q)])?;
        s = alg.lin(&s, &term, if i % 2 == 0 { 1 } else { fp.neg(1) });
    }
    t.check(alg.in_truncation(&s, r), || format!("{} p={p} root {a} n={n} c={c}", alg.root_system().label()));
    Ok(())
}

// ----- 13: Frobenius and its splitting -----

fn frobenius_checks(t: &mut Tally) -> Result<()> {
    let parts: Vec<Result<Tally>> = SYSTEMS
        .par_iter()
        .flat_map(|&label| [2u32, 3, 5].into_par_iter().map(move |p| (label, p)))
        .map(|(label, p)| {
            let mut t = Tally::default();
            frobenius_for(label, p, &mut t)?;
            Ok(t)
        })
        .collect();
    for part in parts {
        t.merge(part?);
    }
    Ok(())
}

fn frobenius_for(label: &str, p: u32, t: &mut Tally) -> Result<()> {
    const SAMPLES: usize = 200;
    let alg = Algebra::new(label, p as u64, 2)?;
    let nu = alg.nu();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0013 ^ ((p as u64) << 8) ^ label.as_bytes()[0] as u64);

    // Fr ∘ Fr' = id on elements whose torus part is periodic mod p
    for _ in 0..SAMPLES {
        let x = random_truncated(&alg, &mut rng, 1, 3, 2)?;
        let back = alg.fr(&alg.fr_prime(&x, 1)?)?;
        t.check(back == x, || format!("{label} p={p}: Fr Fr' on {} terms", x.num_terms()));
    }

    // Fr' is multiplicative on U^+, U^- and U^0
    for _ in 0..SAMPLES / 4 {
        for negative in [false, true] {
            let make = |rng: &mut ChaCha8Rng| {
                let terms: Vec<(Exps, u32)> =
                    (0..rng.gen_range(1..=2)).map(|_| (sparse_exps(rng, nu, 2, 3), rng.gen_range(1..p))).collect();
                alg.from_scalar_terms(&terms, negative)
            };
            let (x, y) = (make(&mut rng), make(&mut rng));
            let lhs = alg.fr_prime(&alg.multiply(&x, &y)?, 1)?;
            let rhs = alg.multiply(&alg.fr_prime(&x, 1)?, &alg.fr_prime(&y, 1)?)?;
            t.check(lhs == rhs, || format!("{label} p={p}: Fr' multiplicative on {}", if negative { "U^-" } else { "U^+" }));
        }
        let xs = enumerate_xm(alg.root_system().rank(), p, 1);
        let make = |rng: &mut ChaCha8Rng| -> Result<PBWElement> {
            let mut h: HPart = alg.hspace().zero();
            for _ in 0..2 {
                alg.hspace().add_scaled(&mut h, &mu_table(&alg, &xs[rng.gen_range(0..xs.len())], 1)?, rng.gen_range(1..p));
            }
            Ok(alg.torus(h))
        };
        let (x, y) = (make(&mut rng)?, make(&mut rng)?);
        let lhs = alg.fr_prime(&alg.multiply(&x, &y)?, 1)?;
        let rhs = alg.multiply(&alg.fr_prime(&x, 1)?, &alg.fr_prime(&y, 1)?)?;
        t.check(lhs == rhs, || format!("{label} p={p}: Fr' multiplicative on U^0"));
    }

    // Fr is multiplicative on U
    let big = alg.with_level(level_for(p, 4 * p as u64 + 1))?;
    let nr = big.root_system().num_roots();
    for _ in 0..SAMPLES / 10 {
        let pick = |rng: &mut ChaCha8Rng| -> Result<PBWElement> {
            let factors: Vec<PBWElement> =
                (0..2).map(|_| big.root_power(rng.gen_range(0..nr), [1, p][rng.gen_range(0..2)])).collect();
            big.product(&factors)
        };
        let (x, y) = (pick(&mut rng)?, pick(&mut rng)?);
        let lhs = big.fr(&big.multiply(&x, &y)?)?;
        let rhs = big.multiply(&big.fr(&x)?, &big.fr(&y)?)?;
        t.check(lhs == rhs, || format!("{label} p={p}: Fr multiplicative"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_sums_pass() {
        let r = run_criterion(3);
        assert!(r.passed(), "{:?}", r.samples);
        assert!(r.checks > 100);
    }

    #[test]
    fn leading_terms_cover_thresholds() {
        let alg = Algebra::new("G2", 2, 1).unwrap();
        let rs = alg.root_system();
        let (a, g) = (rs.index_of(&[1, 0]).unwrap(), rs.index_of(&[0, 1]).unwrap());
        assert!(matches!(rs.classify_pair(a, g), Rank2Class::Case { case: PairCase::F, .. }));
        for n in 1..=3 {
            assert!(leading_term(&alg, PairCase::F, a, g, n).is_some());
        }
        assert!(leading_term(&alg, PairCase::F, a, g, 4).is_none());
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run_criterion(99).passed());
    }
}
