//! Exact arithmetic in the enveloping algebra over Q.
//!
//! Monomials are ordinary powers `f^a h^c e^b` with `f`, `e` in the convex
//! order; divided powers are `e^n / n!`. Normal forms are reached by
//! commuting single letters with the Lie bracket, which makes this an
//! independent check of the divided-power engine in [`crate::straighten`].

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::chevalley::StructureConstants;
use crate::error::{Error, Result};
use crate::rootdata::RootSystem;
use crate::straighten::{Algebra, PBWElement, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    pub f: Vec<u32>,
    pub h: Vec<u32>,
    pub e: Vec<u32>,
}

/// A rational combination of ordered monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QElement {
    terms: BTreeMap<QMonomial, BigRational>,
}

impl QElement {
    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &QElement) -> QElement {
        self.lin(other, &BigRational::one())
    }

    pub fn sub(&self, other: &QElement) -> QElement {
        self.lin(other, &-BigRational::one())
    }

    /// `self + c·other`.
    pub fn lin(&self, other: &QElement, c: &BigRational) -> QElement {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            let slot = out.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *slot += v * c;
            if slot.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> QElement {
        QElement::default().lin(self, c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Letter {
    F(usize),
    H(usize),
    E(usize),
}

type IntTerms = Rc<Vec<(QMonomial, BigInt)>>;

pub struct QOracle {
    rs: RootSystem,
    sc: StructureConstants,
    cache: RefCell<HashMap<(Letter, QMonomial), IntTerms>>,
}

impl QOracle {
    pub fn new(rs: RootSystem, sc: StructureConstants) -> Self {
        QOracle { rs, sc, cache: RefCell::new(HashMap::new()) }
    }

    pub fn for_algebra(alg: &Algebra) -> Self {
        Self::new(alg.root_system().clone(), alg.constants().clone())
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    fn nu(&self) -> usize {
        self.rs.num_positive()
    }

    fn empty(&self) -> QMonomial {
        QMonomial { f: vec![0; self.nu()], h: vec![0; self.rs.rank()], e: vec![0; self.nu()] }
    }

    pub fn one(&self) -> QElement {
        let mut x = QElement::default();
        x.terms.insert(self.empty(), BigRational::one());
        x
    }

    /// `e_r^(n) = e_r^n / n!` for a root index `r` of either sign.
    pub fn q_divided(&self, r: usize, n: u32) -> QElement {
        let mut m = self.empty();
        let k = self.rs.convex_index(r);
        if self.rs.is_positive(r) {
            m.e[k] = n;
        } else {
            m.f[k] = n;
        }
        let mut x = QElement::default();
        x.terms.insert(m, BigRational::new(BigInt::one(), factorial(n)));
        x
    }

    /// `h_i`.
    pub fn q_h(&self, i: usize) -> QElement {
        let mut m = self.empty();
        m.h[i] = 1;
        let mut x = QElement::default();
        x.terms.insert(m, BigRational::one());
        x
    }

    /// `(Σ d_i h_i + c choose n)` as a polynomial in the `h_i`.
    pub fn q_h_binomial(&self, d: &[i64], c: i64, n: u32) -> QElement {
        let mut acc = self.one();
        for j in 0..n as i64 {
            let mut lin = self.one().scale(&BigRational::from_integer(BigInt::from(c - j)));
            for (i, &di) in d.iter().enumerate() {
                lin = lin.lin(&self.q_h(i), &BigRational::from_integer(BigInt::from(di)));
            }
            acc = self.q_multiply(&acc, &lin);
        }
        acc.scale(&BigRational::new(BigInt::one(), factorial(n)))
    }

    fn first_letter(m: &QMonomial) -> Option<Letter> {
        if let Some(k) = m.f.iter().position(|&x| x > 0) {
            return Some(Letter::F(k));
        }
        if let Some(i) = m.h.iter().position(|&x| x > 0) {
            return Some(Letter::H(i));
        }
        m.e.iter().position(|&x| x > 0).map(Letter::E)
    }

    fn bump(m: &QMonomial, l: Letter, delta: i32) -> QMonomial {
        let mut out = m.clone();
        let slot = match l {
            Letter::F(k) => &mut out.f[k],
            Letter::H(i) => &mut out.h[i],
            Letter::E(k) => &mut out.e[k],
        };
        *slot = (*slot as i32 + delta) as u32;
        out
    }

    fn root_of(&self, l: Letter) -> Option<usize> {
        match l {
            Letter::E(k) => Some(k),
            Letter::F(k) => Some(k + self.nu()),
            Letter::H(_) => None,
        }
    }

    fn letter_of(&self, r: usize) -> Letter {
        if self.rs.is_positive(r) {
            Letter::E(r)
        } else {
            Letter::F(r - self.nu())
        }
    }

    /// `[x, y]` as a combination of letters.
    fn bracket(&self, x: Letter, y: Letter) -> Vec<(Letter, i64)> {
        match (self.root_of(x), self.root_of(y)) {
            (Some(u), Some(v)) => {
                if self.rs.negate(u) == v {
                    self.sc
                        .coroot_coeffs(u)
                        .iter()
                        .enumerate()
                        .filter(|(_, &d)| d != 0)
                        .map(|(i, &d)| (Letter::H(i), d))
                        .collect()
                } else if let Some(s) = self.rs.sum(u, v) {
                    vec![(self.letter_of(s), self.sc.bracket_const(u, v) as i64)]
                } else {
                    vec![]
                }
            }
            (Some(u), None) => {
                let Letter::H(i) = y else { unreachable!() };
                let c = self.rs.pairing_idx(u, self.rs.simple(i));
                if c == 0 { vec![] } else { vec![(x, -c)] }
            }
            (None, Some(v)) => {
                let Letter::H(i) = x else { unreachable!() };
                let c = self.rs.pairing_idx(v, self.rs.simple(i));
                if c == 0 { vec![] } else { vec![(y, c)] }
            }
            (None, None) => vec![],
        }
    }

    /// `x · m` in normal form with integer coefficients.
    fn letter_times(&self, x: Letter, m: &QMonomial) -> IntTerms {
        let y = match Self::first_letter(m) {
            Some(y) if y < x => y,
            _ => return Rc::new(vec![(Self::bump(m, x, 1), BigInt::one())]),
        };
        let key = (x, m.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return v.clone();
        }
        let rest = Self::bump(m, y, -1);
        let mut acc: HashMap<QMonomial, BigInt> = HashMap::new();
        for (t, c) in self.letter_times(x, &rest).iter() {
            for (u, c2) in self.letter_times(y, t).iter() {
                *acc.entry(u.clone()).or_insert_with(BigInt::zero) += c * c2;
            }
        }
        for (z, c) in self.bracket(x, y) {
            for (u, c2) in self.letter_times(z, &rest).iter() {
                *acc.entry(u.clone()).or_insert_with(BigInt::zero) += c2 * c;
            }
        }
        let v: IntTerms = Rc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        self.cache.borrow_mut().insert(key, v.clone());
        v
    }

    fn word(m: &QMonomial) -> Vec<Letter> {
        let mut w = Vec::new();
        for (k, &a) in m.f.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::F(k), a as usize));
        }
        for (i, &c) in m.h.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::H(i), c as usize));
        }
        for (k, &b) in m.e.iter().enumerate() {
            w.extend(std::iter::repeat_n(Letter::E(k), b as usize));
        }
        w
    }

    pub fn q_multiply(&self, x: &QElement, y: &QElement) -> QElement {
        let mut out: HashMap<QMonomial, BigRational> = HashMap::new();
        for (m1, c1) in &x.terms {
            let mut cur: HashMap<QMonomial, BigRational> = y.terms.clone().into_iter().collect();
            for l in Self::word(m1).into_iter().rev() {
                let mut next: HashMap<QMonomial, BigRational> = HashMap::new();
                for (t, c) in &cur {
                    for (u, c2) in self.letter_times(l, t).iter() {
                        *next.entry(u.clone()).or_insert_with(BigRational::zero) += c * c2;
                    }
                }
                next.retain(|_, c| !c.is_zero());
                cur = next;
            }
            for (u, c) in cur {
                *out.entry(u).or_insert_with(BigRational::zero) += c * c1;
            }
        }
        QElement { terms: out.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Image in the hyperalgebra over F_p: re-expand in divided powers and
    /// binomials `Π (h_i choose m_i)`, check integrality and reduce.
    pub fn reduce_mod_p(&self, x: &QElement, alg: &Algebra) -> Result<PBWElement> {
        let p = BigInt::from(alg.p());
        let mut grouped: BTreeMap<(Vec<u32>, Vec<u32>), HashMap<Vec<u64>, BigRational>> = BTreeMap::new();
        let max_h = x.terms.keys().flat_map(|m| m.h.iter().copied()).max().unwrap_or(0);
        let stirling = stirling_times_factorial(max_h);
        for (m, c) in &x.terms {
            let scale: BigInt = m.f.iter().chain(&m.e).map(|&a| factorial(a)).product();
            let c = c * BigRational::from_integer(scale);
            let target = grouped.entry((m.f.clone(), m.e.clone())).or_default();
            // h^c = Σ_m S(c, m) m! (h choose m), one variable at a time
            let mut partial: Vec<(Vec<u64>, BigInt)> = vec![(vec![], BigInt::one())];
            for &ci in &m.h {
                let mut next = Vec::new();
                for (mono, v) in &partial {
                    for (mi, s) in stirling[ci as usize].iter().enumerate() {
                        if s.is_zero() {
                            continue;
                        }
                        let mut mm = mono.clone();
                        mm.push(mi as u64);
                        next.push((mm, v * s));
                    }
                }
                partial = next;
            }
            for (mono, v) in partial {
                *target.entry(mono).or_insert_with(BigRational::zero) += &c * BigRational::from_integer(v);
            }
        }
        let hs = alg.hspace();
        let mut terms = Vec::new();
        for ((f, e), poly) in grouped {
            let mut coeffs = BTreeMap::new();
            for (mono, v) in poly {
                if !v.is_integer() {
                    return Err(Error::NotInZForm(v.to_string()));
                }
                let r = v.to_integer().mod_floor_big(&p);
                if !r.is_zero() {
                    coeffs.insert(mono, r.to_u32().expect("residue fits"));
                }
            }
            if coeffs.is_empty() {
                continue;
            }
            let h = hs.from_binomial_basis(&coeffs)?;
            terms.push(Term { f, h, e });
        }
        Ok(alg.from_terms(terms))
    }
}

trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `table[c][m] = S(c, m) · m!`, so that `h^c = Σ_m table[c][m] (h choose m)`.
fn stirling_times_factorial(max: u32) -> Vec<Vec<BigInt>> {
    let n = max as usize;
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for c in 1..=n {
        for m in 1..=c {
            s[c][m] = BigInt::from(m) * &s[c - 1][m] + &s[c - 1][m - 1];
        }
    }
    for row in s.iter_mut() {
        for (m, v) in row.iter_mut().enumerate() {
            *v *= factorial(m as u32);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(label: &str) -> QOracle {
        let rs = RootSystem::build(label).unwrap();
        let sc = StructureConstants::new(&rs);
        QOracle::new(rs, sc)
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn unit_and_divided_powers() {
        let q = oracle("A2");
        let x = q.q_divided(1, 3);
        assert_eq!(q.q_multiply(&q.one(), &x), x);
        assert_eq!(q.q_divided(0, 0), q.one());
        let (m, c) = x.terms().next().unwrap();
        assert_eq!(m.e, vec![0, 3, 0]);
        assert_eq!(*c, BigRational::new(BigInt::one(), BigInt::from(6)));
    }

    #[test]
    fn a1_commutator() {
        let q = oracle("A1");
        let (e, f) = (q.q_divided(0, 1), q.q_divided(1, 1));
        let ef = q.q_multiply(&e, &f);
        let fe = q.q_multiply(&f, &e);
        assert_eq!(ef.sub(&fe), q.q_h(0));
    }

    #[test]
    fn a2_commutator_is_the_bracket() {
        let q = oracle("A2");
        let rs = q.root_system().clone();
        let (x, y) = (rs.simple(0), rs.simple(1));
        let comm = q.q_multiply(&q.q_divided(x, 1), &q.q_divided(y, 1)).sub(&q.q_multiply(&q.q_divided(y, 1), &q.q_divided(x, 1)));
        let n = q.sc.bracket_const(x, y) as i64;
        assert_eq!(comm, q.q_divided(rs.sum(x, y).unwrap(), 1).scale(&int(n)));
    }

    #[test]
    fn brackets_of_all_root_pairs() {
        for label in ["A2", "B2", "G2"] {
            let q = oracle(label);
            let rs = q.root_system().clone();
            for u in 0..rs.num_roots() {
                for v in 0..rs.num_roots() {
                    let comm = q
                        .q_multiply(&q.q_divided(u, 1), &q.q_divided(v, 1))
                        .sub(&q.q_multiply(&q.q_divided(v, 1), &q.q_divided(u, 1)));
                    let want = if rs.negate(u) == v {
                        let mut acc = QElement::default();
                        for (i, &d) in q.sc.coroot_coeffs(u).iter().enumerate() {
                            acc = acc.lin(&q.q_h(i), &int(d));
                        }
                        acc
                    } else if let Some(s) = rs.sum(u, v) {
                        q.q_divided(s, 1).scale(&int(q.sc.bracket_const(u, v) as i64))
                    } else {
                        QElement::default()
                    };
                    assert_eq!(comm, want, "{label} {u} {v}");
                }
            }
        }
    }

    #[test]
    fn associativity_on_small_triples() {
        let q = oracle("G2");
        let xs = [q.q_divided(0, 2), q.q_divided(7, 1), q.q_divided(4, 1).add(&q.q_h(1)), q.q_divided(9, 2)];
        for a in &xs {
            for b in &xs {
                for c in &xs {
                    let l = q.q_multiply(&q.q_multiply(a, b), c);
                    let r = q.q_multiply(a, &q.q_multiply(b, c));
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn reduction_examples() {
        let q = oracle("A1");
        let e2 = q.q_multiply(&q.q_divided(0, 1), &q.q_divided(0, 1));
        let a3 = Algebra::new("A1", 3, 1).unwrap();
        assert_eq!(q.reduce_mod_p(&e2.scale(&BigRational::new(1.into(), 2.into())), &a3).unwrap(), a3.root_power(0, 2));
        let a2 = Algebra::new("A1", 2, 1).unwrap();
        assert!(q.reduce_mod_p(&e2, &a2).unwrap().is_zero());
        let a5 = Algebra::new("A1", 5, 1).unwrap();
        let h = q.q_h(0);
        let hh = q.q_multiply(&h, &h.sub(&q.one())).scale(&BigRational::new(1.into(), 2.into()));
        let want = a5.torus(a5.hspace().binomial_monomial(&[2]).unwrap());
        assert_eq!(q.reduce_mod_p(&hh, &a5).unwrap(), want);
        let half = q.q_divided(0, 1).scale(&BigRational::new(1.into(), 2.into()));
        assert!(matches!(q.reduce_mod_p(&half, &a5), Err(Error::NotInZForm(_))));
    }

    #[test]
    fn binomial_polynomials() {
        let q = oracle("A2");
        let a = Algebra::new("A2", 3, 2).unwrap();
        let x = q.q_h_binomial(&[1, 1], -2, 3);
        let want = a.torus(a.hspace().binomial(&[1, 1], -2, 3).unwrap());
        assert_eq!(q.reduce_mod_p(&x, &a).unwrap(), want);
    }
}
