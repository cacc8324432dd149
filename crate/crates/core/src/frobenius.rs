//! The Frobenius map `Fr` and its splitting `Fr'`.
//!
//! `Fr` divides every exponent by `p` (killing terms where that fails) and
//! acts on torus tables by `λ ↦ pλ`. The splitting multiplies exponents of
//! simple generators by `p^r`; on a non-simple divided power it is computed
//! from an expression of `X_β^(n)` as a combination of words in simple
//! divided powers, found by Gaussian elimination over `F_p`.

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::hpart::HSpace;
use crate::straighten::{Algebra, Exps, PBWElement, ScalarTerms, Term};

/// A word `X_{α_{i_1}}^(m_1) ⋯ X_{α_{i_k}}^(m_k)` in simple divided powers,
/// as pairs `(simple index, exponent)`.
pub type SimpleWord = Vec<(usize, u32)>;

/// A combination of simple words with coefficients in `F_p`.
pub type WordExpression = Arc<Vec<(u32, SimpleWord)>>;

/// Memo of simple-word expressions keyed by `(negative, convex index, n)`.
#[derive(Debug, Default)]
pub struct SimpleWordTable {
    entries: DashMap<(bool, usize, u32), WordExpression>,
}

impl SimpleWordTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// All alternating compositions of `target` (simple-root coordinates) as
/// words, ordered by number of factors.
fn simple_words(target: &[u32]) -> Vec<SimpleWord> {
    fn rec(rest: &mut Vec<u32>, last: Option<usize>, cur: &mut SimpleWord, out: &mut Vec<SimpleWord>) {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            if Some(i) == last || rest[i] == 0 {
                continue;
            }
            let avail = rest[i];
            for m in 1..=avail {
                rest[i] -= m;
                cur.push((i, m));
                rec(rest, Some(i), cur, out);
                cur.pop();
                rest[i] += m;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut target.to_vec(), None, &mut Vec::new(), &mut out);
    out.sort_by_key(|w| w.len());
    out
}

/// Incremental row reduction over `F_p` tracking how each pivot row was
/// built from the inserted generators.
struct Echelon {
    p: u32,
    rows: Vec<Row>,
}

type Row = (Exps, HashMap<Exps, u32>, HashMap<usize, u32>);

fn eliminate(p: u64, (pivot, row, rcomb): &Row, vec: &mut HashMap<Exps, u32>, comb: &mut HashMap<usize, u32>) {
    let Some(&c) = vec.get(pivot) else { return };
    let neg = p - c as u64;
    for (k, v) in row {
        let e = vec.entry(k.clone()).or_insert(0);
        *e = ((*e as u64 + neg * *v as u64) % p) as u32;
    }
    for (k, v) in rcomb {
        let e = comb.entry(*k).or_insert(0);
        *e = ((*e as u64 + neg * *v as u64) % p) as u32;
    }
    vec.retain(|_, v| *v != 0);
    comb.retain(|_, v| *v != 0);
}

impl Echelon {
    fn reduce(&self, vec: &mut HashMap<Exps, u32>, comb: &mut HashMap<usize, u32>) {
        for row in &self.rows {
            eliminate(self.p as u64, row, vec, comb);
        }
    }
}

fn is_power_of(mut n: u32, p: u32) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl Algebra {
    /// Expresses `X_β^(n)` (with `β` the root at convex index `k`, and
    /// `X = f` when `negative`) as a combination of simple words.
    pub fn simple_word_expression(&self, negative: bool, k: usize, n: u32) -> Result<WordExpression> {
        let key = (negative, k, n);
        if let Some(v) = self.words.entries.get(&key) {
            return Ok(v.clone());
        }
        let fp = self.fp();
        let rs = self.root_system();
        let nu = self.nu();
        let rank = rs.rank();
        let mut target_ex = vec![0; nu];
        target_ex[k] = n;
        let expr: Vec<(u32, SimpleWord)> = if n == 0 {
            vec![(1, Vec::new())]
        } else if let Some(i) = (0..rank).find(|&i| rs.convex_index(rs.simple(i)) == k) {
            vec![(1, vec![(i, n)])]
        } else {
            let weight: Vec<u32> = rs.root(k).0.iter().map(|&c| c as u32 * n).collect();
            let words = simple_words(&weight);
            let mut ech = Echelon { p: fp.p(), rows: Vec::new() };
            let mut residual: HashMap<Exps, u32> = HashMap::from([(target_ex.clone(), 1)]);
            let mut rcomb: HashMap<usize, u32> = HashMap::new();
            let mut found = false;
            for (wi, w) in words.iter().enumerate() {
                let mut vec: HashMap<Exps, u32> = self.evaluate_word(negative, w)?.iter().cloned().collect();
                let mut comb = HashMap::from([(wi, 1)]);
                ech.reduce(&mut vec, &mut comb);
                let Some(pivot) = vec.keys().min().cloned() else { continue };
                let inv = fp.inv(vec[&pivot]);
                vec.values_mut().for_each(|v| *v = fp.mul(*v, inv));
                comb.values_mut().for_each(|v| *v = fp.mul(*v, inv));
                let row = (pivot, vec, comb);
                eliminate(fp.p() as u64, &row, &mut residual, &mut rcomb);
                ech.rows.push(row);
                if residual.is_empty() {
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::SingularBlock(format!("root {k} exponent {n}")));
            }
            // residual = target - Σ rcomb·words = 0
            let mut out: Vec<(u32, SimpleWord)> =
                rcomb.into_iter().map(|(wi, c)| (fp.neg(c), words[wi].clone())).collect();
            out.sort_by(|a, b| a.1.cmp(&b.1));
            out
        };
        let v = Arc::new(expr);
        self.words.entries.insert(key, v.clone());
        Ok(v)
    }

    /// Straightens a simple word into scalar terms of `U^+` (or `U^-`).
    pub fn evaluate_word(&self, negative: bool, w: &[(usize, u32)]) -> Result<Vec<(Exps, u32)>> {
        let rs = self.root_system();
        let nu = self.nu();
        let mut cur: Vec<(Exps, u32)> = vec![(vec![0; nu], 1)];
        for &(i, m) in w.iter().rev() {
            let k = rs.convex_index(rs.simple(i));
            let mut ex = vec![0; nu];
            ex[k] = m;
            cur = self.same_sign_product(negative, &[(ex, 1)], &cur)?;
        }
        Ok(cur)
    }

    /// Precomputes simple-word expressions for all roots and exponents up to
    /// `max_n` on both signs.
    pub fn build_simple_word_table(&self, max_n: u32) -> Result<&SimpleWordTable> {
        for negative in [false, true] {
            for k in 0..self.nu() {
                for n in 1..=max_n {
                    self.simple_word_expression(negative, k, n)?;
                }
            }
        }
        Ok(&self.words)
    }

    /// `Fr'^r(X_β^(n))` as scalar terms.
    ///
    /// Writing `n = Σ d_j p^j`, `X^(n)` is a nonzero multiple of
    /// `Π_j (X^(p^j))^{d_j}` (no carries, so Lucas keeps every binomial
    /// nonzero), so only the powers `X^(p^j)` need word expressions.
    fn split_power(&self, negative: bool, k: usize, n: u32, r: u32) -> Result<ScalarTerms> {
        let key = (negative, k, n, r);
        if let Some(v) = self.split_cache.get(&key) {
            return Ok(v.clone());
        }
        let fp = self.fp();
        let p = self.p();
        let v = if n > 1 && !is_power_of(n, p) {
            let mut cur: Vec<(Exps, u32)> = vec![(vec![0; self.nu()], 1)];
            let mut coef = 1u32;
            let mut built = 0u32;
            let (mut rest, mut place) = (n, 1u32);
            while rest > 0 {
                for _ in 0..rest % p {
                    let piece = self.split_power(negative, k, place, r)?;
                    cur = self.same_sign_product(negative, &cur, &piece)?;
                    coef = fp.mul(coef, fp.binom((built + place) as u64, place as u64));
                    built += place;
                }
                rest /= p;
                place *= p;
            }
            let inv = fp.inv(coef);
            cur.into_iter().map(|(e, c)| (e, fp.mul(c, inv))).collect()
        } else {
            self.split_word_power(negative, k, n, r)?
        };
        let v = Arc::new(v);
        self.split_cache.insert(key, v.clone());
        Ok(v)
    }

    /// `Fr'^r(X_β^(n))` through the simple-word expression of `X_β^(n)`.
    fn split_word_power(&self, negative: bool, k: usize, n: u32, r: u32) -> Result<Vec<(Exps, u32)>> {
        let fp = self.fp();
        let q = self.p().checked_pow(r).ok_or(Error::Invalid("splitting depth too large".into()))?;
        let mut acc: HashMap<Exps, u32> = HashMap::new();
        for (c, w) in self.simple_word_expression(negative, k, n)?.iter() {
            let lifted: SimpleWord = w.iter().map(|&(i, m)| (i, m * q)).collect();
            for (ex, c2) in self.evaluate_word(negative, &lifted)? {
                let e = acc.entry(ex).or_insert(0);
                *e = fp.add(*e, fp.mul(*c, c2));
            }
        }
        let mut v: Vec<(Exps, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        v.sort();
        Ok(v)
    }

    /// `Fr'^r(X^(b))` for an ordered monomial, as scalar terms.
    pub fn split_monomial(&self, negative: bool, b: &[u32], r: u32) -> Result<Vec<(Exps, u32)>> {
        let mut cur: Vec<(Exps, u32)> = vec![(vec![0; self.nu()], 1)];
        for (k, &n) in b.iter().enumerate() {
            if n > 0 {
                let piece = self.split_power(negative, k, n, r)?;
                cur = self.same_sign_product(negative, &cur, &piece)?;
            }
        }
        Ok(cur)
    }

    /// The Frobenius map on normal forms.
    pub fn fr(&self, x: &PBWElement) -> Result<PBWElement> {
        let p = self.p();
        if x.level() != self.level() || x.p() != p {
            return Err(Error::LevelMismatch(x.level(), self.level()));
        }
        let hs = self.hspace();
        let terms = x.terms().filter_map(|(f, h, e)| {
            let div = |v: &Exps| -> Option<Exps> { v.iter().map(|&c| (c % p == 0).then_some(c / p)).collect() };
            Some(Term { f: div(f)?, h: hs.fr(h), e: div(e)? })
        });
        let terms: Vec<_> = terms.collect();
        Ok(self.from_terms(terms))
    }

    /// `Fr'^r` on `U^+`.
    pub fn fr_prime_plus(&self, x: &PBWElement, r: u32) -> Result<PBWElement> {
        self.require_sign(x, false)?;
        self.fr_prime(x, r)
    }

    /// `Fr'^r` on `U^-`.
    pub fn fr_prime_minus(&self, x: &PBWElement, r: u32) -> Result<PBWElement> {
        self.require_sign(x, true)?;
        self.fr_prime(x, r)
    }

    /// `Fr'^r` on `U^0`.
    pub fn fr_prime_zero(&self, x: &PBWElement, r: u32) -> Result<PBWElement> {
        if x.terms().any(|(f, _, e)| f.iter().chain(e).any(|&c| c != 0)) {
            return Err(Error::NotInSubalgebra("U^0"));
        }
        self.fr_prime(x, r)
    }

    fn require_sign(&self, x: &PBWElement, negative: bool) -> Result<()> {
        for (f, h, e) in x.terms() {
            let other = if negative { e } else { f };
            let h_scalar = h.values.iter().all(|&v| v == h.values[0]);
            if other.iter().any(|&c| c != 0) || !h_scalar {
                return Err(Error::NotInSubalgebra(if negative { "U^-" } else { "U^+" }));
            }
        }
        Ok(())
    }

    /// `Fr'^r` applied termwise: `f^(a) H e^(b) ↦ Fr'^r(f^(a)) Fr'^r(H) Fr'^r(e^(b))`.
    pub fn fr_prime(&self, x: &PBWElement, r: u32) -> Result<PBWElement> {
        if x.level() != self.level() || x.p() != self.p() {
            return Err(Error::LevelMismatch(x.level(), self.level()));
        }
        let hs: &HSpace = self.hspace();
        let mut out = self.zero();
        for (f, h, e) in x.terms() {
            let hh = hs.fr_prime(h, r)?;
            let fs = self.split_monomial(true, f, r)?;
            let es = self.split_monomial(false, e, r)?;
            let mut terms = Vec::with_capacity(fs.len() * es.len());
            for (fa, c1) in &fs {
                for (eb, c2) in &es {
                    terms.push(Term {
                        f: fa.clone(),
                        h: hs.scale(&hh, self.fp().mul(*c1, *c2)),
                        e: eb.clone(),
                    });
                }
            }
            out = self.add(&out, &self.from_terms(terms));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_elem(alg: &Algebra, w: &[(usize, u32)]) -> PBWElement {
        alg.from_scalar_terms(&alg.evaluate_word(false, w).unwrap(), false)
    }

    #[test]
    fn compositions_enumerated() {
        let ws = simple_words(&[2, 1]);
        // e1^(2)e2, e2e1^(2), e1e2e1
        assert_eq!(ws.len(), 3);
        assert!(ws.iter().all(|w| w.windows(2).all(|p| p[0].0 != p[1].0)));
    }

    #[test]
    fn a2_middle_root_is_commutator() {
        let alg = Algebra::new("A2", 3, 2).unwrap();
        let lhs = alg.root_power(1, 1);
        let rhs = alg.sub(&word_elem(&alg, &[(0, 1), (1, 1)]), &word_elem(&alg, &[(1, 1), (0, 1)]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn g2_long_word_identity() {
        // e_{3α1+α2} = e1^(3)e2 − e1^(2)e2e1 + e1e2e1^(2) − e2e1^(3)
        for p in [5, 7] {
            let alg = Algebra::new("G2", p, 2).unwrap();
            let rs = alg.root_system();
            let r = rs.index_of(&[3, 1]).unwrap();
            let words: [(&[(usize, u32)], i64); 4] = [
                (&[(0, 3), (1, 1)], 1),
                (&[(0, 2), (1, 1), (0, 1)], -1),
                (&[(0, 1), (1, 1), (0, 2)], 1),
                (&[(1, 1), (0, 3)], -1),
            ];
            let mut rhs = alg.zero();
            for (w, c) in words {
                rhs = alg.lin(&rhs, &word_elem(&alg, w), alg.fp().from_i64(c));
            }
            assert_eq!(alg.root_power(r, 1), rhs, "p={p}");
        }
    }

    #[test]
    fn expressions_reproduce_target() {
        for (label, p, max_n) in [("A2", 2, 3), ("B2", 3, 2), ("G2", 2, 3), ("G2", 5, 2), ("A3", 2, 2)] {
            let alg = Algebra::new(label, p, 2).unwrap();
            for negative in [false, true] {
                for k in 0..alg.nu() {
                    for n in 1..=max_n {
                        let expr = alg.simple_word_expression(negative, k, n).unwrap();
                        let mut acc = alg.zero();
                        for (c, w) in expr.iter() {
                            let v = alg.from_scalar_terms(&alg.evaluate_word(negative, w).unwrap(), negative);
                            acc = alg.lin(&acc, &v, *c);
                        }
                        let mut ex = vec![0; alg.nu()];
                        ex[k] = n;
                        let want = if negative { alg.f_monomial(ex) } else { alg.e_monomial(ex) };
                        assert_eq!(acc, want, "{label} p={p} k={k} n={n} neg={negative}");
                    }
                }
            }
        }
    }

    #[test]
    fn fr_kills_non_divisible() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        let x = alg.add(&alg.root_power(0, 2), &alg.root_power(1, 1));
        assert_eq!(alg.fr(&x).unwrap(), alg.root_power(0, 1));
    }

    #[test]
    fn fr_after_split_is_identity() {
        for (label, p) in [("A2", 2), ("B2", 3), ("G2", 2)] {
            let alg = Algebra::new(label, p, 3).unwrap();
            for k in 0..alg.nu() {
                for n in 0..p as u32 {
                    for negative in [false, true] {
                        let mut ex = vec![0; alg.nu()];
                        ex[k] = n;
                        let x = if negative { alg.f_monomial(ex) } else { alg.e_monomial(ex) };
                        let y = alg.fr_prime(&x, 1).unwrap();
                        assert_eq!(alg.fr(&y).unwrap(), x, "{label} p={p} k={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn split_rejects_wrong_subalgebra() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        let f = alg.root_power(alg.nu(), 1);
        assert!(matches!(alg.fr_prime_plus(&f, 1), Err(Error::NotInSubalgebra(_))));
        assert!(alg.fr_prime_minus(&f, 1).is_ok());
    }

    #[test]
    fn digit_route_matches_word_route() {
        for (label, p, max_n) in [("A2", 2, 6), ("B2", 2, 5), ("B2", 3, 4), ("G2", 2, 3)] {
            let alg = Algebra::new(label, p, 1).unwrap();
            for k in 0..alg.nu() {
                for n in 2..=max_n {
                    for r in 1..=2 {
                        let direct = alg.split_word_power(false, k, n, r).unwrap();
                        let digits = alg.split_power(false, k, n, r).unwrap();
                        assert_eq!(*digits, direct, "{label} p={p} k={k} n={n} r={r}");
                    }
                }
            }
        }
    }
}
