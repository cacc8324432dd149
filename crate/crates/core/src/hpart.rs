//! Elements of the torus part `U^0` stored as value tables.
//!
//! An element of `U^0_N` is the function `λ ↦ H(λ)` on `(Z/p^N)^l`, with `λ`
//! in fundamental-weight coordinates. The binomial `Π (h_i choose m_i)` is the
//! table `λ ↦ Π (λ_i choose m_i) mod p`; products are pointwise and moving a
//! root vector past `H` shifts the argument.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fp::Fp;
use crate::rootdata::Weight;

/// A value table over `(Z/p^N)^l`, flattened with coordinate 0 fastest.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPart {
    pub level: u32,
    pub values: Vec<u32>,
}

/// Shape and arithmetic for tables of a fixed prime, rank and level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSpace {
    fp: Fp,
    rank: usize,
    level: u32,
    modulus: u64,
    size: usize,
}

impl HSpace {
    pub fn new(fp: Fp, rank: usize, level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("level must be at least 1".into()));
        }
        let modulus = (fp.p() as u64).checked_pow(level).ok_or(Error::Invalid("level too large".into()))?;
        let size = (modulus as usize)
            .checked_pow(rank as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::Invalid(format!("table of size {modulus}^{rank} too large")))?;
        Ok(HSpace { fp, rank, level, modulus, size })
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, lambda: &[i64]) -> usize {
        let m = self.modulus as i64;
        lambda.iter().rev().fold(0usize, |acc, &x| acc * m as usize + x.rem_euclid(m) as usize)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<i64> {
        let m = self.modulus as usize;
        (0..self.rank)
            .map(|_| {
                let c = idx % m;
                idx /= m;
                c as i64
            })
            .collect()
    }

    fn check(&self, h: &HPart) -> Result<()> {
        if h.level != self.level {
            return Err(Error::LevelMismatch(h.level, self.level));
        }
        Ok(())
    }

    pub fn constant(&self, c: u32) -> HPart {
        HPart { level: self.level, values: vec![c % self.fp.p(); self.size] }
    }

    pub fn one(&self) -> HPart {
        self.constant(1)
    }

    pub fn zero(&self) -> HPart {
        self.constant(0)
    }

    pub fn from_fn(&self, f: impl Fn(&[i64]) -> u32) -> HPart {
        HPart { level: self.level, values: (0..self.size).map(|i| f(&self.coords(i))).collect() }
    }

    pub fn evaluate(&self, h: &HPart, lambda: &Weight) -> u32 {
        h.values[self.index(&lambda.0)]
    }

    pub fn mul(&self, a: &HPart, b: &HPart) -> Result<HPart> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &HPart, b: &HPart) -> HPart {
        let fp = self.fp;
        HPart { level: a.level, values: a.values.iter().zip(&b.values).map(|(&x, &y)| fp.mul(x, y)).collect() }
    }

    /// `acc += c * h`.
    pub fn add_scaled(&self, acc: &mut HPart, h: &HPart, c: u32) {
        let fp = self.fp;
        if c == 1 {
            for (x, &y) in acc.values.iter_mut().zip(&h.values) {
                *x = fp.add(*x, y);
            }
        } else {
            for (x, &y) in acc.values.iter_mut().zip(&h.values) {
                *x = fp.add(*x, fp.mul(c, y));
            }
        }
    }

    pub fn scale(&self, h: &HPart, c: u32) -> HPart {
        let fp = self.fp;
        HPart { level: h.level, values: h.values.iter().map(|&x| fp.mul(x, c)).collect() }
    }

    pub fn is_zero(h: &HPart) -> bool {
        h.values.iter().all(|&v| v == 0)
    }

    /// `H'(λ) = H(λ + w)`.
    pub fn shift(&self, h: &HPart, w: &Weight) -> HPart {
        if w.0.iter().all(|&x| (x as i128).rem_euclid(self.modulus as i128) == 0) {
            return h.clone();
        }
        let m = self.modulus as usize;
        let offs: Vec<usize> = w.0.iter().map(|&x| x.rem_euclid(m as i64) as usize).collect();
        let mut out = vec![0u32; self.size];
        // index arithmetic per coordinate, rank is tiny
        let mut coords = vec![0usize; self.rank];
        for slot in out.iter_mut() {
            let mut src = 0usize;
            let mut stride = 1usize;
            for k in 0..self.rank {
                src += ((coords[k] + offs[k]) % m) * stride;
                stride *= m;
            }
            *slot = h.values[src];
            for c in coords.iter_mut() {
                *c += 1;
                if *c < m {
                    break;
                }
                *c = 0;
            }
        }
        HPart { level: h.level, values: out }
    }

    /// The table of `(Σ d_i h_i + c choose n)`.
    pub fn binomial(&self, d: &[i64], c: i64, n: u64) -> Result<HPart> {
        if n >= self.modulus {
            return Err(Error::InsufficientLevel { degree: n, level: self.level });
        }
        let m = self.modulus as i64;
        let fp = self.fp;
        Ok(self.from_fn(|lam| {
            let x: i64 = lam.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() + c;
            fp.binom(x.rem_euclid(m) as u64, n)
        }))
    }

    /// The table of `Π (h_i choose m_i)`.
    pub fn binomial_monomial(&self, m: &[u64]) -> Result<HPart> {
        if let Some(&bad) = m.iter().find(|&&x| x >= self.modulus) {
            return Err(Error::InsufficientLevel { degree: bad, level: self.level });
        }
        let fp = self.fp;
        Ok(self.from_fn(|lam| {
            lam.iter().zip(m).fold(1, |acc, (&x, &k)| fp.mul(acc, fp.binom(x as u64, k)))
        }))
    }

    /// Indicator of the coset `λ + p^n X(T)`.
    pub fn indicator(&self, lambda: &Weight, n: u32) -> Result<HPart> {
        if n > self.level {
            return Err(Error::InsufficientLevel { degree: (self.fp.p() as u64).pow(n), level: self.level });
        }
        let q = (self.fp.p() as i64).pow(n);
        Ok(self.from_fn(|lam| {
            lam.iter().zip(&lambda.0).all(|(a, b)| (a - b).rem_euclid(q) == 0) as u32
        }))
    }

    /// Whether `H` depends only on `λ mod p^r`.
    pub fn is_periodic(&self, h: &HPart, r: u32) -> bool {
        if r >= self.level {
            return true;
        }
        let q = (self.fp.p() as i64).pow(r);
        (0..self.size).all(|i| {
            let c: Vec<i64> = self.coords(i).iter().map(|x| x % q).collect();
            h.values[i] == h.values[self.index(&c)]
        })
    }

    /// Coefficients in the binomial basis `Π (h_i choose m_i)`, `m_i < p^N`.
    pub fn to_binomial_basis(&self, h: &HPart) -> BTreeMap<Vec<u64>, u32> {
        let mut v = h.values.clone();
        let m = self.modulus as usize;
        let fp = self.fp;
        // Newton forward differences along each axis
        let table: Vec<Vec<u32>> =
            (0..m).map(|k| (0..m).map(|j| fp.binom(k as u64, j as u64)).collect()).collect();
        self.for_each_line(&mut v, |line| {
            let orig = line.to_vec();
            for k in 0..m {
                let mut acc = 0;
                for j in 0..=k {
                    let t = fp.mul(table[k][j], orig[j]);
                    acc = if (k - j) % 2 == 0 { fp.add(acc, t) } else { fp.sub(acc, t) };
                }
                line[k] = acc;
            }
        });
        v.into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (self.coords(i).into_iter().map(|x| x as u64).collect(), c))
            .collect()
    }

    pub fn from_binomial_basis(&self, coeffs: &BTreeMap<Vec<u64>, u32>) -> Result<HPart> {
        let mut acc = self.zero();
        for (mono, &c) in coeffs {
            let b = self.binomial_monomial(mono)?;
            self.add_scaled(&mut acc, &b, c);
        }
        Ok(acc)
    }

    fn for_each_line(&self, v: &mut [u32], mut f: impl FnMut(&mut [u32])) {
        let m = self.modulus as usize;
        let mut stride = 1usize;
        let mut buf = vec![0u32; m];
        for _axis in 0..self.rank {
            for base in 0..self.size {
                if !(base / stride).is_multiple_of(m) {
                    continue;
                }
                for (t, slot) in buf.iter_mut().enumerate() {
                    *slot = v[base + t * stride];
                }
                f(&mut buf);
                for (t, &x) in buf.iter().enumerate() {
                    v[base + t * stride] = x;
                }
            }
            stride *= m;
        }
    }

    /// Frobenius on `U^0`: `H ↦ (λ ↦ H(pλ))`.
    pub fn fr(&self, h: &HPart) -> HPart {
        let p = self.fp.p() as i64;
        self.from_fn(|lam| {
            let s: Vec<i64> = lam.iter().map(|x| x * p).collect();
            h.values[self.index(&s)]
        })
    }

    /// The splitting on `U^0`, iterated `r` times: `H ↦ (λ ↦ H(⌊λ/p^r⌋))`.
    /// Requires `H` to be periodic modulo `p^{N-r}`.
    pub fn fr_prime(&self, h: &HPart, r: u32) -> Result<HPart> {
        if !self.is_periodic(h, self.level.saturating_sub(r)) {
            return Err(Error::LevelOverflow { needed: self.level + r, level: self.level });
        }
        let Some(q) = (self.fp.p() as i64).checked_pow(r).filter(|&q| q < self.modulus as i64) else {
            return Ok(self.constant(h.values[0]));
        };
        Ok(self.from_fn(|lam| {
            let s: Vec<i64> = lam.iter().map(|x| x / q).collect();
            h.values[self.index(&s)]
        }))
    }

    /// Re-expresses a table at another level, which must keep it faithful.
    pub fn relevel(&self, h: &HPart, target: &HSpace) -> Result<HPart> {
        if target.level < self.level && !self.is_periodic(h, target.level) {
            return Err(Error::LevelOverflow { needed: self.level, level: target.level });
        }
        Ok(target.from_fn(|lam| h.values[self.index(lam)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(p: u64, rank: usize, level: u32) -> HSpace {
        HSpace::new(Fp::new(p).unwrap(), rank, level).unwrap()
    }

    #[test]
    fn square_of_h_choose_one() {
        let s = space(5, 1, 2);
        let h1 = s.binomial_monomial(&[1]).unwrap();
        let sq = s.mul(&h1, &h1).unwrap();
        let want: BTreeMap<Vec<u64>, u32> = [(vec![1], 1), (vec![2], 2)].into_iter().collect();
        assert_eq!(s.to_binomial_basis(&sq), want);
    }

    #[test]
    fn binomial_basis_round_trip() {
        let s = space(3, 2, 2);
        let h = s.from_fn(|l| ((l[0] * 7 + l[1] * l[1] * 5 + 1) % 3) as u32);
        let b = s.to_binomial_basis(&h);
        assert_eq!(s.from_binomial_basis(&b).unwrap(), h);
        assert!(s.to_binomial_basis(&s.one()).into_iter().eq([(vec![0, 0], 1)]));
    }

    #[test]
    fn shift_composes() {
        let s = space(2, 2, 3);
        let h = s.binomial(&[1, 2], -3, 5).unwrap();
        let w = Weight(vec![3, -5]);
        assert_eq!(s.shift(&s.shift(&h, &w), &w.scale(-1)), h);
        assert_eq!(s.shift(&h, &Weight(vec![0, 8])), h);
    }

    #[test]
    fn shifted_indicator() {
        let s = space(3, 2, 1);
        let ind = s.indicator(&Weight(vec![1, 2]), 1).unwrap();
        let w = Weight(vec![2, -1]);
        assert_eq!(s.shift(&ind, &w), s.indicator(&Weight(vec![-1, 3]), 1).unwrap());
    }

    #[test]
    fn periodicity_of_low_binomials() {
        let s = space(2, 1, 3);
        for n in 0..4u64 {
            for c in -6..6 {
                let a = s.binomial(&[1], c, n).unwrap();
                let b = s.binomial(&[1], c + 4, n).unwrap();
                assert_eq!(a, b);
                assert!(s.is_periodic(&a, 2));
            }
        }
        assert!(s.binomial(&[1], 0, 8).is_err());
    }

    #[test]
    fn splitting_on_binomials() {
        let s = space(2, 1, 2);
        let h1 = s.binomial_monomial(&[1]).unwrap();
        assert_eq!(s.fr_prime(&h1, 1).unwrap(), s.binomial_monomial(&[2]).unwrap());
        assert_eq!(s.fr(&s.fr_prime(&h1, 1).unwrap()), h1);
        let h3 = s.binomial_monomial(&[3]).unwrap();
        assert!(s.fr_prime(&h3, 1).is_err());
    }
}
