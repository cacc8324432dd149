//! Normal-form arithmetic in the hyperalgebra over F_p.
//!
//! Elements are combinations of `f^(a) · H · e^(b)` where `f^(a)` and `e^(b)`
//! are ordered products of divided powers in the convex order and `H` is a
//! value table. Products are computed by memoized left multiplication by a
//! single divided power, using the rank-2 commutation formulas, the
//! `e^(m) f^(n)` expansion and shifts of the torus part.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;

use crate::chevalley::StructureConstants;
use crate::commute::{PairRules, Word};
use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::frobenius::SimpleWordTable;
use crate::hpart::{HPart, HSpace};
use crate::rootdata::{RootSystem, Weight};

/// Exponent vector indexed by the convex order.
pub type Exps = Vec<u32>;

const MAX_DEPTH: usize = 4096;

/// A single normal-form term `f^(f) · h · e^(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub f: Exps,
    pub h: HPart,
    pub e: Exps,
}

/// An element of the hyperalgebra in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBWElement {
    p: u32,
    level: u32,
    terms: BTreeMap<(Exps, Exps), HPart>,
}

impl PBWElement {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms keyed by `(f-exponents, e-exponents)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &HPart, &Exps)> {
        self.terms.iter().map(|((f, e), h)| (f, h, e))
    }

    pub fn get(&self, f: &[u32], e: &[u32]) -> Option<&HPart> {
        self.terms.get(&(f.to_vec(), e.to_vec()))
    }
}

/// Accumulates terms by key, summing torus parts.
struct Acc<'a> {
    hs: &'a HSpace,
    map: HashMap<(Exps, Exps), HPart>,
}

impl<'a> Acc<'a> {
    fn new(hs: &'a HSpace) -> Self {
        Acc { hs, map: HashMap::new() }
    }

    fn add(&mut self, f: Exps, e: Exps, h: &HPart, c: u32) {
        if c == 0 {
            return;
        }
        match self.map.entry((f, e)) {
            std::collections::hash_map::Entry::Occupied(mut o) => self.hs.add_scaled(o.get_mut(), h, c),
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(if c == 1 { h.clone() } else { self.hs.scale(h, c) });
            }
        }
    }

    fn into_terms(self) -> Vec<Term> {
        let mut out: Vec<Term> = self
            .map
            .into_iter()
            .filter(|(_, h)| !HSpace::is_zero(h))
            .map(|((f, e), h)| Term { f, h, e })
            .collect();
        out.sort_by(|a, b| (&a.f, &a.e).cmp(&(&b.f, &b.e)));
        out
    }
}

fn acc_scalar(map: &mut HashMap<Exps, u32>, key: Exps, c: u32, fp: Fp) {
    if c == 0 {
        return;
    }
    let slot = map.entry(key).or_insert(0);
    *slot = fp.add(*slot, c);
}

fn finish_scalar(map: HashMap<Exps, u32>) -> Vec<(Exps, u32)> {
    let mut v: Vec<(Exps, u32)> = map.into_iter().filter(|(_, c)| *c != 0).collect();
    v.sort();
    v
}

pub type ScalarTerms = Arc<Vec<(Exps, u32)>>;

/// The algebra `U` for a root system, prime `p` and torus level `N`, with
/// the caches used by the straightening routines.
pub struct Algebra {
    rs: RootSystem,
    sc: StructureConstants,
    rules: PairRules,
    fp: Fp,
    hs: HSpace,
    root_weights: Vec<Weight>,
    same_gen: DashMap<(bool, usize, u32, Exps), ScalarTerms>,
    same_mul: DashMap<(bool, Exps, Exps), ScalarTerms>,
    pair_cache: DashMap<(usize, u32, usize, u32), Arc<Vec<(u32, Word)>>>,
    cross_gen_cache: DashMap<(usize, u32, Exps), Arc<Vec<Term>>>,
    cross_cache: DashMap<(Exps, Exps), Arc<Vec<Term>>>,
    binom_cache: DashMap<(usize, i64, u64), Arc<HPart>>,
    pub(crate) words: SimpleWordTable,
    pub(crate) split_cache: DashMap<(bool, usize, u32, u32), ScalarTerms>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra({}, p={}, level={})", self.rs.label(), self.fp.p(), self.hs.level())
    }
}

impl Algebra {
    pub fn new(label: &str, p: u64, level: u32) -> Result<Self> {
        let rs = RootSystem::build(label)?;
        let sc = StructureConstants::new(&rs);
        Self::from_parts(rs, sc, p, level)
    }

    /// Builds the algebra from explicit structure constants.
    pub fn from_parts(rs: RootSystem, sc: StructureConstants, p: u64, level: u32) -> Result<Self> {
        let fp = Fp::new(p)?;
        let hs = HSpace::new(fp, rs.rank(), level)?;
        let rules = PairRules::new(&rs, &sc);
        let root_weights = (0..rs.num_roots()).map(|i| rs.weight_of(&rs.root(i).0)).collect();
        Ok(Algebra {
            rs,
            sc,
            rules,
            fp,
            hs,
            root_weights,
            same_gen: DashMap::new(),
            same_mul: DashMap::new(),
            pair_cache: DashMap::new(),
            cross_gen_cache: DashMap::new(),
            cross_cache: DashMap::new(),
            binom_cache: DashMap::new(),
            words: SimpleWordTable::default(),
            split_cache: DashMap::new(),
        })
    }

    /// The same system and constants at another prime or level, with fresh caches.
    pub fn with_level(&self, level: u32) -> Result<Self> {
        Self::from_parts(self.rs.clone(), self.sc.clone(), self.fp.p() as u64, level)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn p(&self) -> u32 {
        self.fp.p()
    }

    pub fn level(&self) -> u32 {
        self.hs.level()
    }

    pub fn hspace(&self) -> &HSpace {
        &self.hs
    }

    /// Number of positive roots.
    pub fn nu(&self) -> usize {
        self.rs.num_positive()
    }

    // ----- construction -----

    pub fn zero(&self) -> PBWElement {
        PBWElement { p: self.p(), level: self.level(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> PBWElement {
        self.monomial(vec![0; self.nu()], self.hs.one(), vec![0; self.nu()])
    }

    pub fn monomial(&self, f: Exps, h: HPart, e: Exps) -> PBWElement {
        let mut x = self.zero();
        if !HSpace::is_zero(&h) {
            x.terms.insert((f, e), h);
        }
        x
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = Term>) -> PBWElement {
        let mut acc = Acc::new(&self.hs);
        for t in terms {
            acc.add(t.f, t.e, &t.h, 1);
        }
        self.collect(acc)
    }

    fn collect(&self, acc: Acc<'_>) -> PBWElement {
        let mut x = self.zero();
        for t in acc.into_terms() {
            x.terms.insert((t.f, t.e), t.h);
        }
        x
    }

    /// `e_r^(n)` for a root index `r` of either sign.
    pub fn root_power(&self, r: usize, n: u32) -> PBWElement {
        let mut ex = vec![0; self.nu()];
        ex[self.rs.convex_index(r)] = n;
        if self.rs.is_positive(r) {
            self.monomial(vec![0; self.nu()], self.hs.one(), ex)
        } else {
            self.monomial(ex, self.hs.one(), vec![0; self.nu()])
        }
    }

    /// `e^(b)` as an element.
    pub fn e_monomial(&self, b: Exps) -> PBWElement {
        self.monomial(vec![0; self.nu()], self.hs.one(), b)
    }

    /// `f^(a)` as an element.
    pub fn f_monomial(&self, a: Exps) -> PBWElement {
        self.monomial(a, self.hs.one(), vec![0; self.nu()])
    }

    pub fn torus(&self, h: HPart) -> PBWElement {
        self.monomial(vec![0; self.nu()], h, vec![0; self.nu()])
    }

    pub fn from_scalar_terms(&self, terms: &[(Exps, u32)], negative: bool) -> PBWElement {
        let mut acc = Acc::new(&self.hs);
        let one = self.hs.one();
        let zero = vec![0; self.nu()];
        for (ex, c) in terms {
            if negative {
                acc.add(ex.clone(), zero.clone(), &one, *c);
            } else {
                acc.add(zero.clone(), ex.clone(), &one, *c);
            }
        }
        self.collect(acc)
    }

    // ----- linear structure -----

    fn check(&self, x: &PBWElement) -> Result<()> {
        if x.p != self.p() {
            return Err(Error::Invalid(format!("element over F_{} used in F_{}", x.p, self.p())));
        }
        if x.level != self.level() {
            return Err(Error::LevelMismatch(x.level, self.level()));
        }
        Ok(())
    }

    pub fn add(&self, x: &PBWElement, y: &PBWElement) -> PBWElement {
        self.lin(x, y, 1)
    }

    pub fn sub(&self, x: &PBWElement, y: &PBWElement) -> PBWElement {
        self.lin(x, y, self.p() - 1)
    }

    /// `x + c·y`.
    pub fn lin(&self, x: &PBWElement, y: &PBWElement, c: u32) -> PBWElement {
        let mut out = x.clone();
        for (key, h) in &y.terms {
            match out.terms.get_mut(key) {
                Some(slot) => {
                    self.hs.add_scaled(slot, h, c);
                    if HSpace::is_zero(slot) {
                        out.terms.remove(key);
                    }
                }
                None => {
                    let s = self.hs.scale(h, c);
                    if !HSpace::is_zero(&s) {
                        out.terms.insert(key.clone(), s);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, x: &PBWElement, c: u32) -> PBWElement {
        self.lin(&self.zero(), x, c)
    }

    // ----- weights -----

    /// Weight of `e^(b)` (or of `f^(b)` when `negative`).
    pub fn exps_weight(&self, b: &[u32], negative: bool) -> Weight {
        let mut w = Weight::zero(self.rs.rank());
        for (k, &x) in b.iter().enumerate() {
            if x > 0 {
                for (acc, v) in w.0.iter_mut().zip(&self.root_weights[k].0) {
                    *acc += x as i64 * v;
                }
            }
        }
        if negative {
            w.scale(-1)
        } else {
            w
        }
    }

    /// Root-lattice weight of `e^(b)` in simple-root coordinates.
    pub fn exps_root_weight(&self, b: &[u32]) -> Vec<i64> {
        let mut w = vec![0i64; self.rs.rank()];
        for (k, &x) in b.iter().enumerate() {
            for (acc, &c) in w.iter_mut().zip(&self.rs.root(k).0) {
                *acc += x as i64 * c as i64;
            }
        }
        w
    }

    // ----- one-sign products -----

    fn root_of(&self, negative: bool, k: usize) -> usize {
        if negative {
            k + self.nu()
        } else {
            k
        }
    }

    fn pair_words(&self, g: usize, a: u32, d: usize, b: u32) -> Arc<Vec<(u32, Word)>> {
        let key = (g, a, d, b);
        if let Some(v) = self.pair_cache.get(&key) {
            return v.clone();
        }
        let rule = self.rules.get(g, d).expect("pair rule for summing roots");
        let v = Arc::new(rule.expand(a, b, self.fp));
        self.pair_cache.insert(key, v.clone());
        v
    }

    /// `X_k^(n) · X^(b)` where `X` is `e` or (when `negative`) `f`.
    pub fn same_sign_gen_mul(&self, negative: bool, k: usize, n: u32, b: &[u32]) -> Result<ScalarTerms> {
        self.same_gen_rec(negative, k, n, b, 0)
    }

    fn same_gen_rec(&self, negative: bool, k: usize, n: u32, b: &[u32], depth: usize) -> Result<ScalarTerms> {
        if depth > MAX_DEPTH {
            return Err(Error::RecursionLimit(MAX_DEPTH));
        }
        let j = b.iter().position(|&x| x > 0);
        if n == 0 {
            return Ok(Arc::new(vec![(b.to_vec(), 1)]));
        }
        match j {
            None => {
                let mut out = b.to_vec();
                out[k] = n;
                return Ok(Arc::new(vec![(out, 1)]));
            }
            Some(j) if k < j => {
                let mut out = b.to_vec();
                out[k] = n;
                return Ok(Arc::new(vec![(out, 1)]));
            }
            Some(j) if k == j => {
                let c = self.fp.binom((n + b[k]) as u64, n as u64);
                if c == 0 {
                    return Ok(Arc::new(vec![]));
                }
                let mut out = b.to_vec();
                out[k] += n;
                return Ok(Arc::new(vec![(out, c)]));
            }
            _ => {}
        }
        let key = (negative, k, n, b.to_vec());
        if let Some(v) = self.same_gen.get(&key) {
            return Ok(v.clone());
        }
        let j = j.unwrap();
        let m = b[j];
        let mut rest = b.to_vec();
        rest[j] = 0;
        let (g, d) = (self.root_of(negative, k), self.root_of(negative, j));
        let fp = self.fp;
        let mut acc: HashMap<Exps, u32> = HashMap::new();
        if self.rs.sum(g, d).is_none() {
            for (t, c) in self.same_gen_rec(negative, k, n, &rest, depth + 1)?.iter() {
                for (u, c2) in self.same_gen_rec(negative, j, m, t, depth + 1)?.iter() {
                    acc_scalar(&mut acc, u.clone(), fp.mul(*c, *c2), fp);
                }
            }
        } else {
            for (coeff, word) in self.pair_words(g, n, d, m).iter() {
                let mut cur: Vec<(Exps, u32)> = vec![(rest.clone(), *coeff)];
                for &(r, e) in word.iter().rev() {
                    let kk = self.rs.convex_index(r);
                    let mut next: HashMap<Exps, u32> = HashMap::new();
                    for (t, c) in &cur {
                        for (u, c2) in self.same_gen_rec(negative, kk, e, t, depth + 1)?.iter() {
                            acc_scalar(&mut next, u.clone(), fp.mul(*c, *c2), fp);
                        }
                    }
                    cur = finish_scalar(next);
                }
                for (u, c) in cur {
                    acc_scalar(&mut acc, u, c, fp);
                }
            }
        }
        let v = Arc::new(finish_scalar(acc));
        self.same_gen.insert(key, v.clone());
        Ok(v)
    }

    /// `X^(a) · X^(b)` for `X = e` or (when `negative`) `X = f`.
    pub fn same_sign_mul(&self, negative: bool, a: &[u32], b: &[u32]) -> Result<ScalarTerms> {
        if a.iter().all(|&x| x == 0) {
            return Ok(Arc::new(vec![(b.to_vec(), 1)]));
        }
        if b.iter().all(|&x| x == 0) {
            return Ok(Arc::new(vec![(a.to_vec(), 1)]));
        }
        let key = (negative, a.to_vec(), b.to_vec());
        if let Some(v) = self.same_mul.get(&key) {
            return Ok(v.clone());
        }
        let fp = self.fp;
        let mut cur: Vec<(Exps, u32)> = vec![(b.to_vec(), 1)];
        for k in (0..a.len()).rev() {
            if a[k] == 0 {
                continue;
            }
            let mut next: HashMap<Exps, u32> = HashMap::new();
            for (t, c) in &cur {
                for (u, c2) in self.same_gen_rec(negative, k, a[k], t, 0)?.iter() {
                    acc_scalar(&mut next, u.clone(), fp.mul(*c, *c2), fp);
                }
            }
            cur = finish_scalar(next);
        }
        let v = Arc::new(cur);
        self.same_mul.insert(key, v.clone());
        Ok(v)
    }

    /// Product of two `U^+` (or `U^-`) elements given as scalar term lists.
    pub fn same_sign_product(&self, negative: bool, x: &[(Exps, u32)], y: &[(Exps, u32)]) -> Result<Vec<(Exps, u32)>> {
        let fp = self.fp;
        let mut acc: HashMap<Exps, u32> = HashMap::new();
        for (a, c1) in x {
            for (b, c2) in y {
                for (u, c3) in self.same_sign_mul(negative, a, b)?.iter() {
                    acc_scalar(&mut acc, u.clone(), fp.mul(fp.mul(*c1, *c2), *c3), fp);
                }
            }
        }
        Ok(finish_scalar(acc))
    }

    // ----- mixed products -----

    fn binom_table(&self, k: usize, c: i64, t: u64) -> Result<Arc<HPart>> {
        let key = (k, c, t);
        if let Some(v) = self.binom_cache.get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.hs.binomial(self.sc.coroot_coeffs(k), c, t)?);
        self.binom_cache.insert(key, v.clone());
        Ok(v)
    }

    /// `e_{β_k}^(n) · f^(a)` in normal form.
    pub fn cross_gen(&self, k: usize, n: u32, a: &[u32]) -> Result<Arc<Vec<Term>>> {
        self.cross_gen_rec(k, n, a, 0)
    }

    fn cross_gen_rec(&self, k: usize, n: u32, a: &[u32], depth: usize) -> Result<Arc<Vec<Term>>> {
        if depth > MAX_DEPTH {
            return Err(Error::RecursionLimit(MAX_DEPTH));
        }
        let nu = self.nu();
        let Some(j) = a.iter().position(|&x| x > 0).filter(|_| n > 0) else {
            let mut e = vec![0; nu];
            e[k] = n;
            return Ok(Arc::new(vec![Term { f: a.to_vec(), h: self.hs.one(), e }]));
        };
        let key = (k, n, a.to_vec());
        if let Some(v) = self.cross_gen_cache.get(&key) {
            return Ok(v.clone());
        }
        let m = a[j];
        let mut rest = a.to_vec();
        rest[j] = 0;
        let mut acc = Acc::new(&self.hs);
        let (g, d) = (k, j + nu);
        if j == k {
            // e^(n) f^(m) = Σ_t f^(m-t) (h - n - m + 2t choose t) e^(n-t)
            for t in 0..=n.min(m) {
                let bt = self.binom_table(k, 2 * t as i64 - n as i64 - m as i64, t as u64)?;
                for term in self.cross_gen_rec(k, n - t, &rest, depth + 1)?.iter() {
                    let shifted = self.hs.shift(&bt, &self.exps_weight(&term.f, true));
                    let h = self.hs.mul_unchecked(&shifted, &term.h);
                    for (f2, c) in self.same_gen_rec(true, k, m - t, &term.f, depth + 1)?.iter() {
                        acc.add(f2.clone(), term.e.clone(), &h, *c);
                    }
                }
            }
        } else if self.rs.sum(g, d).is_none() {
            let inner = self.cross_gen_rec(k, n, &rest, depth + 1)?;
            self.left_neg_into(j, m, &inner, &mut acc, depth + 1)?;
        } else {
            let start = vec![Term { f: rest.clone(), h: self.hs.one(), e: vec![0; nu] }];
            for (coeff, word) in self.pair_words(g, n, d, m).iter() {
                let mut cur = start.clone();
                for &(r, e) in word.iter().rev() {
                    cur = self.left_root(r, e, &cur, depth + 1)?;
                }
                for t in cur {
                    acc.add(t.f, t.e, &t.h, *coeff);
                }
            }
        }
        let v = Arc::new(acc.into_terms());
        self.cross_gen_cache.insert(key, v.clone());
        Ok(v)
    }

    fn left_root(&self, r: usize, n: u32, terms: &[Term], depth: usize) -> Result<Vec<Term>> {
        let mut acc = Acc::new(&self.hs);
        let k = self.rs.convex_index(r);
        if self.rs.is_positive(r) {
            self.left_pos_into(k, n, terms, &mut acc, depth)?;
        } else {
            self.left_neg_into(k, n, terms, &mut acc, depth)?;
        }
        Ok(acc.into_terms())
    }

    fn left_pos_into(&self, k: usize, n: u32, terms: &[Term], acc: &mut Acc<'_>, depth: usize) -> Result<()> {
        for t in terms {
            for c in self.cross_gen_rec(k, n, &t.f, depth + 1)?.iter() {
                let shifted = self.hs.shift(&t.h, &self.exps_weight(&c.e, true));
                let h = self.hs.mul_unchecked(&c.h, &shifted);
                for (e2, coef) in self.same_sign_mul(false, &c.e, &t.e)?.iter() {
                    acc.add(c.f.clone(), e2.clone(), &h, *coef);
                }
            }
        }
        Ok(())
    }

    fn left_neg_into(&self, k: usize, n: u32, terms: &[Term], acc: &mut Acc<'_>, depth: usize) -> Result<()> {
        for t in terms {
            for (f2, c) in self.same_gen_rec(true, k, n, &t.f, depth + 1)?.iter() {
                acc.add(f2.clone(), t.e.clone(), &t.h, *c);
            }
        }
        Ok(())
    }

    /// `e^(b) · f^(a)` in normal form.
    pub fn cross(&self, b: &[u32], a: &[u32]) -> Result<Arc<Vec<Term>>> {
        let nu = self.nu();
        if b.iter().all(|&x| x == 0) || a.iter().all(|&x| x == 0) {
            return Ok(Arc::new(vec![Term { f: a.to_vec(), h: self.hs.one(), e: b.to_vec() }]));
        }
        let key = (b.to_vec(), a.to_vec());
        if let Some(v) = self.cross_cache.get(&key) {
            return Ok(v.clone());
        }
        let mut cur = vec![Term { f: a.to_vec(), h: self.hs.one(), e: vec![0; nu] }];
        for k in (0..nu).rev() {
            if b[k] > 0 {
                let mut acc = Acc::new(&self.hs);
                self.left_pos_into(k, b[k], &cur, &mut acc, 0)?;
                cur = acc.into_terms();
            }
        }
        let v = Arc::new(cur);
        self.cross_cache.insert(key, v.clone());
        Ok(v)
    }

    /// Normal-form product.
    pub fn multiply(&self, x: &PBWElement, y: &PBWElement) -> Result<PBWElement> {
        self.check(x)?;
        self.check(y)?;
        let mut acc = Acc::new(&self.hs);
        for ((a1, b1), h1) in &x.terms {
            for ((a2, b2), h2) in &y.terms {
                for c in self.cross(b1, a2)?.iter() {
                    let left = self.hs.shift(h1, &self.exps_weight(&c.f, true));
                    let right = self.hs.shift(h2, &self.exps_weight(&c.e, true));
                    let h = self.hs.mul_unchecked(&self.hs.mul_unchecked(&left, &c.h), &right);
                    if HSpace::is_zero(&h) {
                        continue;
                    }
                    let fs = self.same_sign_mul(true, a1, &c.f)?;
                    let es = self.same_sign_mul(false, &c.e, b2)?;
                    for (fa, c1) in fs.iter() {
                        for (eb, c2) in es.iter() {
                            acc.add(fa.clone(), eb.clone(), &h, self.fp.mul(*c1, *c2));
                        }
                    }
                }
            }
        }
        Ok(self.collect(acc))
    }

    /// Product of several elements, left to right.
    pub fn product(&self, factors: &[PBWElement]) -> Result<PBWElement> {
        let mut acc = self.one();
        for x in factors {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// Whether `x` lies in `U_r`: all exponents below `p^r` and every torus
    /// part periodic modulo `p^r`.
    pub fn in_truncation(&self, x: &PBWElement, r: u32) -> bool {
        let bound = (self.p() as u64).pow(r);
        x.terms.iter().all(|((f, e), h)| {
            f.iter().chain(e).all(|&c| (c as u64) < bound) && self.hs.is_periodic(h, r)
        })
    }

    /// Weight of a term `f^(a) H e^(b)`.
    pub fn term_weight(&self, f: &[u32], e: &[u32]) -> Weight {
        self.exps_weight(e, false).add(&self.exps_weight(f, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(label: &str, p: u64, level: u32) -> Algebra {
        Algebra::new(label, p, level).unwrap()
    }

    #[test]
    fn unit_law() {
        let a = alg("A2", 3, 2);
        let x = a.multiply(&a.root_power(1, 2), &a.root_power(4, 1)).unwrap();
        assert_eq!(a.multiply(&a.one(), &x).unwrap(), x);
        assert_eq!(a.multiply(&x, &a.one()).unwrap(), x);
    }

    #[test]
    fn a1_e_times_f() {
        let a = alg("A1", 5, 1);
        let ef = a.multiply(&a.root_power(0, 1), &a.root_power(1, 1)).unwrap();
        let want = a.add(
            &a.monomial(vec![1], a.hspace().one(), vec![1]),
            &a.torus(a.hspace().binomial_monomial(&[1]).unwrap()),
        );
        assert_eq!(ef, want);
    }

    #[test]
    fn same_root_merge() {
        let a = alg("A2", 2, 1);
        let x = a.root_power(0, 1);
        assert!(a.multiply(&x, &x).unwrap().is_zero());
        let b = alg("A2", 3, 1);
        let y = b.root_power(0, 1);
        assert_eq!(b.multiply(&y, &y).unwrap(), b.scale(&b.root_power(0, 2), 2));
    }

    #[test]
    fn truncation_membership() {
        let a = alg("B2", 2, 3);
        assert!(a.in_truncation(&a.one(), 0));
        let x = a.root_power(2, 2);
        assert!(!a.in_truncation(&x, 1));
        assert!(a.in_truncation(&x, 2));
        let mu = a.torus(a.hspace().indicator(&Weight(vec![1, 0]), 1).unwrap());
        assert!(a.in_truncation(&mu, 1));
        assert!(!a.in_truncation(&a.torus(a.hspace().binomial_monomial(&[2, 0]).unwrap()), 1));
    }

    #[test]
    fn insufficient_level_is_reported() {
        let a = alg("A1", 2, 1);
        let r = a.multiply(&a.root_power(0, 2), &a.root_power(1, 2));
        assert!(matches!(r, Err(Error::InsufficientLevel { .. })));
    }
}
