//! Primitive idempotents of the torus part.
//!
//! `μ_λ^(n)` is realized directly as the indicator table of the coset
//! `λ + p^n X(T)`; the binomial product form is kept as a second,
//! independent construction.

use crate::error::{Error, Result};
use crate::hpart::HPart;
use crate::rootdata::Weight;
use crate::straighten::{Algebra, PBWElement};

/// `μ_λ^(n)` for a weight `λ` in fundamental-weight coordinates.
pub fn mu_lambda(alg: &Algebra, lambda: &Weight, n: u32) -> Result<PBWElement> {
    Ok(alg.torus(mu_table(alg, lambda, n)?))
}

/// The indicator table of `λ + p^n X(T)`.
pub fn mu_table(alg: &Algebra, lambda: &Weight, n: u32) -> Result<HPart> {
    check_weight(alg, lambda)?;
    if n == 0 {
        return Err(Error::Invalid("idempotent level must be positive".into()));
    }
    alg.hspace().indicator(lambda, n)
}

/// `Π_k (h_k − ⟨λ, α_k^∨⟩ − 1 choose p^n − 1)` evaluated through binomial tables.
pub fn mu_binomial_product(alg: &Algebra, lambda: &Weight, n: u32) -> Result<HPart> {
    check_weight(alg, lambda)?;
    let hs = alg.hspace();
    let rank = hs.rank();
    let deg = (alg.p() as u64).pow(n) - 1;
    let mut acc = hs.one();
    for k in 0..rank {
        let mut d = vec![0i64; rank];
        d[k] = 1;
        let b = hs.binomial(&d, -lambda.0[k] - 1, deg)?;
        acc = hs.mul(&acc, &b)?;
    }
    Ok(acc)
}

fn check_weight(alg: &Algebra, lambda: &Weight) -> Result<()> {
    if lambda.0.len() != alg.root_system().rank() {
        return Err(Error::Invalid(format!("weight of length {} for rank {}", lambda.0.len(), alg.root_system().rank())));
    }
    Ok(())
}

/// The restricted weights `X_m(T)`: all `λ` with `⟨λ, α_i^∨⟩ ∈ [0, p^m)`,
/// first coordinate fastest.
pub fn enumerate_xm(rank: usize, p: u32, m: u32) -> Vec<Weight> {
    let q = (p as i64).pow(m);
    let total = (q as usize).pow(rank as u32);
    (0..total)
        .map(|mut idx| {
            Weight(
                (0..rank)
                    .map(|_| {
                        let c = idx as i64 % q;
                        idx /= q as usize;
                        c
                    })
                    .collect(),
            )
        })
        .collect()
}

/// Both sides of `μ_{λ + p^m λ'}^(n+m) = μ_λ^(m) · Fr'^m(μ_{λ'}^(n))`.
pub fn mu_compose(alg: &Algebra, lambda: &Weight, lambda2: &Weight, m: u32, n: u32) -> Result<(PBWElement, PBWElement)> {
    let q = (alg.p() as i64).pow(m);
    if lambda.0.iter().any(|&c| !(0..q).contains(&c)) {
        return Err(Error::Invalid("left weight must be restricted".into()));
    }
    let combined = lambda.add(&lambda2.scale(q));
    let lhs = mu_lambda(alg, &combined, n + m)?;
    let right = alg.fr_prime(&mu_lambda(alg, lambda2, n)?, m)?;
    let rhs = alg.multiply(&mu_lambda(alg, lambda, m)?, &right)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::Fp;
    use std::collections::BTreeMap;

    #[test]
    fn restricted_weight_counts() {
        assert_eq!(enumerate_xm(1, 2, 1), vec![Weight(vec![0]), Weight(vec![1])]);
        assert_eq!(enumerate_xm(2, 3, 1).len(), 9);
        assert_eq!(enumerate_xm(2, 2, 2).len(), 16);
    }

    #[test]
    fn indicator_matches_binomial_product() {
        for (label, p, level) in [("A1", 2, 3), ("A1", 3, 2), ("A2", 2, 2), ("B2", 3, 1), ("G2", 2, 2)] {
            let alg = Algebra::new(label, p, level).unwrap();
            for n in 1..=level {
                for lam in enumerate_xm(alg.root_system().rank(), p as u32, n) {
                    let a = mu_table(&alg, &lam, n).unwrap();
                    let b = mu_binomial_product(&alg, &lam, n).unwrap();
                    assert_eq!(a, b, "{label} λ={lam:?} n={n}");
                }
            }
        }
    }

    #[test]
    fn binomial_expansion_in_h() {
        // Σ_k (−j−1 choose p^n−1−k)(h choose k), built coefficient by coefficient
        let alg = Algebra::new("A1", 3, 2).unwrap();
        let hs = alg.hspace();
        let fp = Fp::new(3).unwrap();
        let n = 2;
        let top = 8u64;
        for j in 0..9i64 {
            let mut coeffs = BTreeMap::new();
            for k in 0..=top {
                let c = fp.binom_signed(-j - 1, top - k);
                if c != 0 {
                    coeffs.insert(vec![k], c);
                }
            }
            let via_basis = hs.from_binomial_basis(&coeffs).unwrap();
            assert_eq!(via_basis, mu_table(&alg, &Weight(vec![j]), n).unwrap());
            assert_eq!(hs.to_binomial_basis(&via_basis), coeffs);
        }
    }

    #[test]
    fn compose_a1_example() {
        let alg = Algebra::new("A1", 2, 2).unwrap();
        let (lhs, rhs) = mu_compose(&alg, &Weight(vec![1]), &Weight(vec![1]), 1, 1).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, mu_lambda(&alg, &Weight(vec![3]), 2).unwrap());
    }

    #[test]
    fn compose_zero_shift() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        for lam in enumerate_xm(2, 2, 1) {
            let (lhs, rhs) = mu_compose(&alg, &lam, &Weight(vec![0, 0]), 1, 1).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn unrestricted_left_weight_rejected() {
        let alg = Algebra::new("A1", 2, 2).unwrap();
        assert!(mu_compose(&alg, &Weight(vec![2]), &Weight(vec![0]), 1, 1).is_err());
    }
}
