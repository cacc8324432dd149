//! Structure constants of a Chevalley basis.
//!
//! Signs are fixed by declaring `N_{x,y} > 0` on extraspecial pairs (for each
//! positive non-simple root `ξ`, `x` is the first positive root in
//! height-then-index order with `ξ - x` a root) and deriving all other
//! constants from the standard three- and four-root relations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{Rank2Class, RootSystem};

#[derive(Debug, Clone)]
pub struct StructureConstants {
    size: usize,
    table: Vec<i32>,
    coroots: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketEntry {
    pub left: Vec<i32>,
    pub right: Vec<i32>,
    pub sum: Vec<i32>,
    pub constant: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantTable {
    pub system: String,
    pub positive_roots: Vec<Vec<i32>>,
    pub brackets: Vec<BracketEntry>,
    pub coroots: Vec<(Vec<i32>, Vec<i64>)>,
}

/// Exact rational with small integers, enough for the sign recursion.
#[derive(Debug, Clone, Copy)]
struct Ratio(i64, i64);

impl Ratio {
    fn add(self, o: Ratio) -> Ratio {
        Ratio(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn scale(self, num: i64, den: i64) -> Ratio {
        Ratio(self.0 * num, self.1 * den)
    }
    fn to_int(self) -> i64 {
        assert_eq!(self.0 % self.1, 0, "non-integral structure constant");
        self.0 / self.1
    }
}

impl StructureConstants {
    pub fn new(rs: &RootSystem) -> Self {
        let size = rs.num_roots();
        let nu = rs.num_positive();
        let mut sc = StructureConstants {
            size,
            table: vec![0; size * size],
            coroots: (0..size).map(|i| rs.coroot_coords(i)).collect(),
        };
        let mut order: Vec<usize> = (0..nu).collect();
        order.sort_by_key(|&i| (rs.height(i), std::cmp::Reverse(rs.root(i).0.clone())));
        let rank_of = {
            let mut r = vec![0; nu];
            for (pos, &i) in order.iter().enumerate() {
                r[i] = pos;
            }
            r
        };
        for &xi in &order {
            let mut pairs: Vec<(usize, usize)> = order
                .iter()
                .filter_map(|&a| {
                    let b = rs.index_of(&diff(&rs.root(xi).0, &rs.root(a).0))?;
                    (b < nu && rank_of[a] < rank_of[b]).then_some((a, b))
                })
                .collect();
            if pairs.is_empty() {
                continue;
            }
            pairs.sort_by_key(|&(a, _)| rank_of[a]);
            let (x, y) = pairs[0];
            let nxy = rs.string_below(x, y) as i64 + 1;
            sc.set(x, y, nxy as i32);
            for &(a, b) in &pairs[1..] {
                let nx = rs.negate(x);
                let ny = rs.negate(y);
                let mut acc = Ratio(0, 1);
                if let Some(d) = rs.sum(b, nx) {
                    let t = sc.derived(rs, b, nx) * sc.derived(rs, a, ny);
                    acc = acc.add(Ratio(t, rs.norm2(d)));
                }
                if let Some(d) = rs.sum(a, nx) {
                    let t = sc.derived(rs, nx, a) * sc.derived(rs, b, ny);
                    acc = acc.add(Ratio(t, rs.norm2(d)));
                }
                let nab = acc.scale(rs.norm2(xi), nxy).to_int();
                sc.set(a, b, nab as i32);
            }
        }
        for u in 0..size {
            for v in 0..size {
                if rs.sum(u, v).is_some() {
                    let val = sc.derived(rs, u, v);
                    sc.table[u * size + v] = val as i32;
                }
            }
        }
        sc
    }

    fn set(&mut self, a: usize, b: usize, v: i32) {
        self.table[a * self.size + b] = v;
        self.table[b * self.size + a] = -v;
    }

    /// `N_{u,v}` for arbitrary roots, from the positive-pair entries filled so far.
    fn derived(&self, rs: &RootSystem, u: usize, v: usize) -> i64 {
        let Some(s) = rs.sum(u, v) else { return 0 };
        let (pu, pv) = (rs.is_positive(u), rs.is_positive(v));
        if pu && pv {
            return self.table[u * self.size + v] as i64;
        }
        if !pu && !pv {
            return -(self.table[rs.negate(u) * self.size + rs.negate(v)] as i64);
        }
        // u + v + w = 0 gives N_{u,v}/|w|^2 = N_{v,w}/|u|^2 = N_{w,u}/|v|^2.
        let w = rs.negate(s);
        if rs.is_positive(w) == pv {
            Ratio(self.derived(rs, v, w), 1).scale(rs.norm2(w), rs.norm2(u)).to_int()
        } else {
            Ratio(self.derived(rs, w, u), 1).scale(rs.norm2(w), rs.norm2(v)).to_int()
        }
    }

    /// `N_{γ,δ}` with `[e_γ, e_δ] = N_{γ,δ} e_{γ+δ}`; zero when `γ + δ` is not a root.
    #[inline]
    pub fn bracket_const(&self, gamma: usize, delta: usize) -> i32 {
        self.table[gamma * self.size + delta]
    }

    pub fn structure_sign(&self, rs: &RootSystem, gamma: usize, delta: usize) -> Result<i32> {
        if rs.sum(gamma, delta).is_none() {
            return Err(Error::NotASum(rs.root(gamma).0.clone(), rs.root(delta).0.clone()));
        }
        Ok(self.bracket_const(gamma, delta).signum())
    }

    /// The sign-normalized constant `N_{γ,δ}/(m+1)`.
    pub fn c(&self, rs: &RootSystem, gamma: usize, delta: usize) -> i32 {
        let n = self.bracket_const(gamma, delta);
        n / (rs.string_below(gamma, delta) as i32 + 1)
    }

    /// `h_β = Σ d_i h_i`.
    pub fn coroot_coeffs(&self, beta: usize) -> &[i64] {
        &self.coroots[beta]
    }

    /// A deliberately inconsistent copy with one constant pair negated.
    pub fn with_flipped_pair(&self, gamma: usize, delta: usize) -> Self {
        let mut out = self.clone();
        out.table[gamma * self.size + delta] *= -1;
        out.table[delta * self.size + gamma] *= -1;
        out
    }

    /// Checks `|N_{γ,δ}| = m+1` and antisymmetry for every pair.
    pub fn magnitude_violations(&self, rs: &RootSystem) -> usize {
        let mut bad = 0;
        for u in 0..self.size {
            for v in 0..self.size {
                let n = self.bracket_const(u, v);
                let ok = match rs.classify_pair(u, v) {
                    Rank2Class::Case { m, .. } => n.unsigned_abs() == m + 1,
                    _ => n == 0,
                } && n == -self.bracket_const(v, u);
                bad += usize::from(!ok);
            }
        }
        bad
    }

    /// Number of basis triples violating the Jacobi identity in the Lie
    /// algebra spanned by `e_β` and `h_i`.
    pub fn jacobi_violations(&self, rs: &RootSystem) -> usize {
        let lie = LieTable::new(rs, self);
        let dim = lie.dim;
        let mut bad = 0;
        for x in 0..dim {
            for y in 0..dim {
                for z in 0..dim {
                    let mut total = vec![0i64; dim];
                    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                        for (k, coef) in lie.bracket(b, c) {
                            for (t, d) in lie.bracket(a, k) {
                                total[t] += coef * d;
                            }
                        }
                    }
                    bad += usize::from(total.iter().any(|&v| v != 0));
                }
            }
        }
        bad
    }

    pub fn table_json(&self, rs: &RootSystem) -> ConstantTable {
        let mut brackets = Vec::new();
        for u in 0..self.size {
            for v in 0..self.size {
                if let Some(s) = rs.sum(u, v) {
                    brackets.push(BracketEntry {
                        left: rs.root(u).0.clone(),
                        right: rs.root(v).0.clone(),
                        sum: rs.root(s).0.clone(),
                        constant: self.bracket_const(u, v),
                    });
                }
            }
        }
        ConstantTable {
            system: rs.label(),
            positive_roots: rs.convex_order().betas.into_iter().map(|r| r.0).collect(),
            brackets,
            coroots: (0..self.size).map(|i| (rs.root(i).0.clone(), self.coroots[i].clone())).collect(),
        }
    }
}

fn diff(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Bracket of basis elements `e_β` (indices `0..2ν`) and `h_i` (indices `2ν..`).
struct LieTable<'a> {
    rs: &'a RootSystem,
    sc: &'a StructureConstants,
    dim: usize,
}

impl<'a> LieTable<'a> {
    fn new(rs: &'a RootSystem, sc: &'a StructureConstants) -> Self {
        LieTable { rs, sc, dim: rs.num_roots() + rs.rank() }
    }

    fn bracket(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let nr = self.rs.num_roots();
        match (x < nr, y < nr) {
            (true, true) => {
                if self.rs.negate(x) == y {
                    self.sc.coroot_coeffs(x)
                        .iter()
                        .enumerate()
                        .filter(|(_, &d)| d != 0)
                        .map(|(i, &d)| (nr + i, d))
                        .collect()
                } else if let Some(s) = self.rs.sum(x, y) {
                    vec![(s, self.sc.bracket_const(x, y) as i64)]
                } else {
                    vec![]
                }
            }
            (false, true) => {
                let c = self.rs.pairing_idx(y, self.rs.simple(x - nr));
                if c == 0 { vec![] } else { vec![(y, c)] }
            }
            (true, false) => {
                let c = self.rs.pairing_idx(x, self.rs.simple(y - nr));
                if c == 0 { vec![] } else { vec![(x, -c)] }
            }
            (false, false) => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(rs: &RootSystem, c: &[i32]) -> usize {
        rs.index_of(c).unwrap()
    }

    #[test]
    fn g2_constants_match_the_pinned_table() {
        let rs = RootSystem::build("G2").unwrap();
        let sc = StructureConstants::new(&rs);
        let n = |a: &[i32], b: &[i32]| sc.bracket_const(idx(&rs, a), idx(&rs, b));
        assert_eq!(n(&[1, 0], &[0, 1]), 1);
        assert_eq!(n(&[1, 0], &[1, 1]), 2);
        assert_eq!(n(&[1, 0], &[2, 1]), 3);
        assert_eq!(n(&[0, 1], &[3, 1]), 1);
        assert_eq!(n(&[2, 1], &[1, 1]), 3);
        assert_eq!(sc.structure_sign(&rs, idx(&rs, &[1, 0]), idx(&rs, &[0, 1])).unwrap(), 1);
        assert!(sc.structure_sign(&rs, idx(&rs, &[1, 0]), idx(&rs, &[3, 2])).is_err());
    }

    #[test]
    fn a2_extraspecial_sign() {
        let rs = RootSystem::build("A2").unwrap();
        let sc = StructureConstants::new(&rs);
        assert_eq!(sc.bracket_const(rs.simple(0), rs.simple(1)), 1);
        assert_eq!(sc.bracket_const(rs.simple(1), rs.simple(0)), -1);
    }

    #[test]
    fn magnitudes_and_jacobi() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "D4"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            assert_eq!(sc.magnitude_violations(&rs), 0, "{label}");
            assert_eq!(sc.jacobi_violations(&rs), 0, "{label}");
        }
    }

    #[test]
    fn large_types_have_consistent_magnitudes() {
        for label in ["F4", "E6"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            assert_eq!(sc.magnitude_violations(&rs), 0, "{label}");
        }
    }

    #[test]
    fn flipping_a_sign_breaks_jacobi() {
        let rs = RootSystem::build("B2").unwrap();
        let sc = StructureConstants::new(&rs).with_flipped_pair(rs.simple(0), rs.simple(1));
        assert!(sc.jacobi_violations(&rs) > 0);
    }

    #[test]
    fn sign_normalized_constants_are_units() {
        for label in ["A2", "B2", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            for u in 0..rs.num_roots() {
                for v in 0..rs.num_roots() {
                    if rs.sum(u, v).is_some() {
                        assert_eq!(sc.c(&rs, u, v).abs(), 1);
                    }
                }
            }
        }
    }
}
