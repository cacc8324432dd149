//! Arithmetic in F_p, Lucas binomials and p-adic digit splitting.

use crate::error::{Error, Result};

/// The prime field F_p with p small enough that products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p > 65_521 {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Reduces a signed integer into `0..p`.
    #[inline]
    pub fn from_i64(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// `(m choose n) mod p` by Lucas' theorem.
    pub fn binom(self, m: u64, n: u64) -> u32 {
        lucas_binom(m, n, self.p as u64) as u32
    }

    /// `(x choose k) mod p` for an arbitrary integer top `x`, using that the
    /// binomial is periodic in `x` with period any power of p exceeding `k`.
    pub fn binom_signed(self, x: i64, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if x >= 0 {
            return self.binom(x as u64, k);
        }
        let mut modulus: i64 = 1;
        while (modulus as u64) <= k {
            modulus *= self.p as i64;
        }
        self.binom(x.rem_euclid(modulus) as u64, k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(m choose n) mod p` computed digit by digit in base p.
pub fn lucas_binom(mut m: u64, mut n: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 {
        let (mi, ni) = (m % p, n % p);
        if ni > mi {
            return 0;
        }
        acc = acc * small_binom(mi, ni, p) % p;
        m /= p;
        n /= p;
    }
    acc % p
}

fn small_binom(m: u64, n: u64, p: u64) -> u64 {
    let k = n.min(m - n);
    let (mut num, mut den) = (1u64, 1u64);
    for j in 0..k {
        num = num * ((m - j) % p) % p;
        den = den * ((j + 1) % p) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `c = remainder + p^r * quotient` with `remainder < p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitSplit {
    pub quotient: u64,
    pub remainder: u64,
}

pub fn digit_split(c: u64, p: u64, r: u32) -> DigitSplit {
    let m = p.pow(r);
    DigitSplit {
        quotient: c / m,
        remainder: c % m,
    }
}

/// Exact binomial coefficient over the integers for a possibly negative top.
pub fn binom_i128(x: i128, k: u32) -> i128 {
    let mut acc: i128 = 1;
    for j in 0..k as i128 {
        acc = acc * (x - j) / (j + 1);
    }
    acc
}
