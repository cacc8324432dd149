//! Root systems in simple-root coordinates.
//!
//! Positive roots are stored in the convex order attached to a greedy reduced
//! word of the longest Weyl group element, so that root index `k < ν` is
//! `β_{k+1}` and index `ν + k` is `-β_{k+1}`. PBW exponent vectors are indexed
//! by the same `k`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Cartan–Killing type with rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownType(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, n) {
            ('A', n) if n >= 1 => CartanType::A(n),
            ('B', n) if n >= 2 => CartanType::B(n),
            ('C', n) if n >= 2 => CartanType::C(n),
            ('D', n) if n >= 4 => CartanType::D(n),
            ('E', n) if (6..=8).contains(&n) => CartanType::E(n),
            ('F', 4) => CartanType::F4,
            ('G', 2) => CartanType::G2,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    /// Gram matrix of the simple roots, normalized so short roots have
    /// squared length 2. Bourbaki numbering; for G2 `α_1` is short.
    fn gram(self) -> Vec<Vec<i64>> {
        let l = self.rank();
        let mut g = vec![vec![0i64; l]; l];
        let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self {
            CartanType::A(n) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            CartanType::B(n) => {
                for i in 0..n - 1 {
                    g[i][i] = 4;
                }
                g[n - 1][n - 1] = 2;
                for i in 1..n {
                    link(&mut g, i - 1, i, -2);
                }
            }
            CartanType::C(n) => {
                for i in 0..n - 1 {
                    g[i][i] = 2;
                }
                g[n - 1][n - 1] = 4;
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 2, n - 1, -2);
            }
            CartanType::D(n) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 1..n - 1 {
                    link(&mut g, i - 1, i, -1);
                }
                link(&mut g, n - 3, n - 1, -1);
            }
            CartanType::E(n) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                link(&mut g, 0, 2, -1);
                link(&mut g, 1, 3, -1);
                for i in 3..n {
                    link(&mut g, i - 1, i, -1);
                }
            }
            CartanType::F4 => {
                g[0][0] = 4;
                g[1][1] = 4;
                g[2][2] = 2;
                g[3][3] = 2;
                link(&mut g, 0, 1, -2);
                link(&mut g, 1, 2, -2);
                link(&mut g, 2, 3, -1);
            }
            CartanType::G2 => {
                g[0][0] = 2;
                g[1][1] = 6;
                link(&mut g, 0, 1, -3);
            }
        }
        g
    }
}

/// A root given by its coefficients over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root(pub Vec<i32>);

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An integral weight in fundamental-weight coordinates: entry `i` is `<λ, α_i^∨>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The reduced word for `w_0` and the induced enumeration of positive roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexOrder {
    /// Simple reflection indices, 0-based.
    pub reduced_word: Vec<usize>,
    /// `betas[k]` is the root `β_{k+1}` in simple-root coordinates.
    pub betas: Vec<Root>,
}

/// The rank-2 configurations of a pair of roots summing to a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairCase {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank2Class {
    /// `δ = γ`.
    Proportional,
    /// `δ = -γ`.
    Opposite,
    /// `γ + δ` is not a root and `δ ≠ ±γ`.
    Commuting,
    /// `γ + δ` is a root; `m` is maximal with `δ - mγ` a root.
    Case { case: PairCase, m: u32 },
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Root>,
    norms: Vec<i64>,
    lookup: HashMap<Vec<i32>, usize>,
    reduced_word: Vec<usize>,
}

impl RootSystem {
    pub fn build(label: &str) -> Result<Self> {
        Ok(Self::new(label.parse()?))
    }

    pub fn new(cartan_type: CartanType) -> Self {
        let gram = cartan_type.gram();
        let rank = gram.len();
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();

        let (reduced_word, betas) = greedy_longest_word(&cartan);
        let nu = betas.len();
        let mut roots = betas.clone();
        roots.extend(betas.iter().map(|b| Root(b.0.iter().map(|c| -c).collect())));
        let lookup = roots.iter().enumerate().map(|(i, r)| (r.0.clone(), i)).collect();
        let mut rs = RootSystem {
            cartan_type,
            rank,
            gram,
            cartan,
            roots,
            norms: Vec::new(),
            lookup,
            reduced_word,
        };
        rs.norms = (0..2 * nu).map(|i| rs.inner(&rs.roots[i].0, &rs.roots[i].0)).collect();
        debug_assert_eq!(nu, count_positive_roots(&rs.cartan));
        rs
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn label(&self) -> String {
        self.cartan_type.to_string()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of positive roots, `ν`.
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// `cartan()[i][j] = <α_i, α_j^∨>`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn index_of(&self, coords: &[i32]) -> Option<usize> {
        self.lookup.get(coords).copied()
    }

    pub fn index_of_checked(&self, coords: &[i32]) -> Result<usize> {
        self.index_of(coords).ok_or_else(|| Error::NotARoot(coords.to_vec()))
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }

    pub fn negate(&self, i: usize) -> usize {
        let nu = self.num_positive();
        if i < nu {
            i + nu
        } else {
            i - nu
        }
    }

    /// Position of `±β_{k+1}` in the convex order.
    pub fn convex_index(&self, i: usize) -> usize {
        i % self.num_positive()
    }

    /// Index of `root(i) + root(j)` when the sum is a root.
    pub fn sum(&self, i: usize, j: usize) -> Option<usize> {
        let v: Vec<i32> = self.roots[i].0.iter().zip(&self.roots[j].0).map(|(a, b)| a + b).collect();
        self.index_of(&v)
    }

    /// Root index of the simple root `α_i` (0-based `i`).
    pub fn simple(&self, i: usize) -> usize {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        self.lookup[&v]
    }

    pub fn height(&self, i: usize) -> i32 {
        self.roots[i].0.iter().sum()
    }

    /// Symmetric inner product of two vectors in simple-root coordinates.
    pub fn inner(&self, x: &[i32], y: &[i32]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] as i64 * self.gram[i][j] * y[j] as i64;
            }
        }
        s
    }

    /// Squared length of the root with index `i` (short roots have 2).
    pub fn norm2(&self, i: usize) -> i64 {
        self.norms[i]
    }

    /// `<β, α^∨> = 2(β, α)/(α, α)`.
    pub fn pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        2 * self.inner(&beta.0, &alpha.0) / self.inner(&alpha.0, &alpha.0)
    }

    pub fn pairing_idx(&self, i: usize, j: usize) -> i64 {
        2 * self.inner(&self.roots[i].0, &self.roots[j].0) / self.norms[j]
    }

    /// Fundamental-weight coordinates of a vector of the root lattice.
    pub fn weight_of(&self, coords: &[i32]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|j| (0..self.rank).map(|i| coords[i] as i64 * self.cartan[i][j]).sum())
                .collect(),
        )
    }

    /// Coefficients `d` with `h_β = Σ d_i h_i`, i.e. the coroot of `β`
    /// expanded over simple coroots.
    pub fn coroot_coords(&self, i: usize) -> Vec<i64> {
        let n = self.norms[i];
        (0..self.rank)
            .map(|k| {
                let num = self.roots[i].0[k] as i64 * self.gram[k][k];
                debug_assert_eq!(num % n, 0);
                num / n
            })
            .collect()
    }

    pub fn convex_order(&self) -> ConvexOrder {
        ConvexOrder {
            reduced_word: self.reduced_word.clone(),
            betas: self.roots[..self.num_positive()].to_vec(),
        }
    }

    /// Largest `m` with `δ - mγ` a root.
    pub fn string_below(&self, gamma: usize, delta: usize) -> u32 {
        let mut m = 0;
        let mut v = self.roots[delta].0.clone();
        loop {
            for (x, g) in v.iter_mut().zip(&self.roots[gamma].0) {
                *x -= g;
            }
            if self.index_of(&v).is_none() {
                return m;
            }
            m += 1;
        }
    }

    pub fn classify_pair(&self, gamma: usize, delta: usize) -> Rank2Class {
        if gamma == delta {
            return Rank2Class::Proportional;
        }
        if self.negate(gamma) == delta {
            return Rank2Class::Opposite;
        }
        let Some(s) = self.sum(gamma, delta) else {
            return Rank2Class::Commuting;
        };
        let (a, g, s) = (self.norm2(gamma), self.norm2(delta), self.norm2(s));
        let m = self.string_below(gamma, delta);
        let case = if a == g && g == s {
            if m == 0 {
                PairCase::A
            } else {
                PairCase::H
            }
        } else if a == g && s == 2 * a {
            PairCase::B
        } else if a == g && s == 3 * a {
            PairCase::C
        } else if s == a && g == 2 * a {
            PairCase::D
        } else if s == a && g == 3 * a {
            PairCase::F
        } else if s == g && a == 2 * g {
            PairCase::E
        } else if s == g && a == 3 * g {
            PairCase::G
        } else {
            unreachable!("pair of roots outside the rank-2 classification")
        };
        Rank2Class::Case { case, m }
    }
}

fn is_nonneg(v: &[i64]) -> bool {
    v.iter().all(|&c| c >= 0)
}

/// Builds the reduced word of `w_0` by always appending the smallest simple
/// reflection that lengthens the current element. Returns the word and the
/// roots `β_k = s_{i_1}⋯s_{i_{k-1}}(α_{i_k})`.
fn greedy_longest_word(cartan: &[Vec<i64>]) -> (Vec<usize>, Vec<Root>) {
    let l = cartan.len();
    // columns[j] = w(α_j)
    let mut columns: Vec<Vec<i64>> = (0..l)
        .map(|j| (0..l).map(|i| (i == j) as i64).collect())
        .collect();
    let mut word = Vec::new();
    let mut betas = Vec::new();
    while let Some(i) = (0..l).find(|&i| is_nonneg(&columns[i])) {
        word.push(i);
        betas.push(Root(columns[i].iter().map(|&c| c as i32).collect()));
        let wi = columns[i].clone();
        for j in 0..l {
            let a = cartan[j][i];
            for (x, y) in columns[j].iter_mut().zip(&wi) {
                *x -= a * y;
            }
        }
    }
    (word, betas)
}

/// Positive roots by closure of the simple roots under simple reflections;
/// used as an independent count of `ν`.
fn count_positive_roots(cartan: &[Vec<i64>]) -> usize {
    let l = cartan.len();
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..l {
        let v: Vec<i64> = (0..l).map(|k| (k == i) as i64).collect();
        seen.insert(v.clone());
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..l {
            let c: i64 = (0..l).map(|k| v[k] * cartan[k][i]).sum();
            let mut w = v.clone();
            w[i] -= c;
            if is_nonneg(&w) && w.iter().any(|&x| x != 0) && seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(rs: &RootSystem) -> Vec<Vec<i32>> {
        rs.convex_order().betas.into_iter().map(|r| r.0).collect()
    }

    #[test]
    fn positive_root_counts() {
        for (label, nu) in [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("C3", 9),
            ("B3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E8", 120),
        ] {
            let rs = RootSystem::build(label).unwrap();
            assert_eq!(rs.num_positive(), nu, "{label}");
            assert_eq!(rs.convex_order().reduced_word.len(), nu);
            assert_eq!(count_positive_roots(rs.cartan()), nu);
        }
    }

    #[test]
    fn a1_and_a2_orders() {
        let a1 = RootSystem::build("A1").unwrap();
        assert_eq!(a1.convex_order().reduced_word, vec![0]);
        assert_eq!(coords(&a1), vec![vec![1]]);
        let a2 = RootSystem::build("A2").unwrap();
        assert_eq!(a2.convex_order().reduced_word, vec![0, 1, 0]);
        assert_eq!(coords(&a2), vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
    }

    #[test]
    fn g2_positive_roots() {
        let g2 = RootSystem::build("G2").unwrap();
        let mut got = coords(&g2);
        got.sort();
        let mut want = vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 1], vec![3, 2]];
        want.sort();
        assert_eq!(got, want);
        assert!(g2.norm2(g2.simple(0)) < g2.norm2(g2.simple(1)));
    }

    #[test]
    fn pairings() {
        let g2 = RootSystem::build("G2").unwrap();
        assert_eq!(g2.pairing(&Root(vec![0, 1]), &Root(vec![1, 0])), -3);
        assert_eq!(g2.cartan()[1][0], -3);
        let a2 = RootSystem::build("A2").unwrap();
        assert_eq!(a2.pairing(&Root(vec![1, 1]), &Root(vec![1, 0])), 1);
        for i in 0..a2.num_roots() {
            assert_eq!(a2.pairing_idx(i, i), 2);
        }
    }

    #[test]
    fn coroots_of_a2_and_g2() {
        let a2 = RootSystem::build("A2").unwrap();
        assert_eq!(a2.coroot_coords(a2.index_of(&[1, 1]).unwrap()), vec![1, 1]);
        assert_eq!(a2.coroot_coords(a2.simple(0)), vec![1, 0]);
        let g2 = RootSystem::build("G2").unwrap();
        // the long root 3α1+2α2 has coroot α1^∨ + 2α2^∨
        assert_eq!(g2.coroot_coords(g2.index_of(&[3, 2]).unwrap()), vec![1, 2]);
        assert_eq!(g2.coroot_coords(g2.index_of(&[2, 1]).unwrap()), vec![2, 3]);
        let i = g2.index_of(&[3, 1]).unwrap();
        let neg: Vec<i64> = g2.coroot_coords(i).iter().map(|d| -d).collect();
        assert_eq!(g2.coroot_coords(g2.negate(i)), neg);
    }

    #[test]
    fn classification_examples() {
        let a2 = RootSystem::build("A2").unwrap();
        let (x, y) = (a2.simple(0), a2.simple(1));
        assert_eq!(a2.classify_pair(x, y), Rank2Class::Case { case: PairCase::A, m: 0 });
        assert_eq!(a2.classify_pair(x, a2.negate(x)), Rank2Class::Opposite);
        assert_eq!(a2.classify_pair(x, x), Rank2Class::Proportional);
        let g2 = RootSystem::build("G2").unwrap();
        let s = g2.index_of(&[1, 1]).unwrap();
        assert_eq!(g2.classify_pair(g2.simple(0), s), Rank2Class::Case { case: PairCase::H, m: 1 });
        assert_eq!(g2.classify_pair(g2.simple(0), g2.simple(1)), Rank2Class::Case { case: PairCase::F, m: 0 });
        assert_eq!(
            g2.classify_pair(g2.simple(0), g2.index_of(&[2, 1]).unwrap()),
            Rank2Class::Case { case: PairCase::C, m: 2 }
        );
    }

    #[test]
    fn every_case_occurs_in_rank_two() {
        let mut seen = std::collections::HashSet::new();
        for label in ["A2", "B2", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            for i in 0..rs.num_roots() {
                for j in 0..rs.num_roots() {
                    match rs.classify_pair(i, j) {
                        Rank2Class::Case { case, .. } => {
                            assert!(rs.sum(i, j).is_some());
                            seen.insert(case);
                        }
                        Rank2Class::Commuting => assert!(rs.sum(i, j).is_none()),
                        _ => {}
                    }
                }
            }
        }
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn convex_order_property() {
        // if β_i + β_j = β_k with i < j then i < k < j
        for label in ["A2", "A3", "B2", "B3", "C3", "G2", "D4"] {
            let rs = RootSystem::build(label).unwrap();
            let nu = rs.num_positive();
            for i in 0..nu {
                for j in i + 1..nu {
                    if let Some(k) = rs.sum(i, j) {
                        assert!(i < k && k < j, "{label}: {i} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn unknown_types_are_rejected() {
        assert!(RootSystem::build("X3").is_err());
        assert!(RootSystem::build("G3").is_err());
        assert!(RootSystem::build("").is_err());
    }
}
