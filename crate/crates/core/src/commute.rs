//! Commutation of divided powers `e_γ^(a) e_δ^(b)` when `γ + δ` is a root.
//!
//! The pair is placed in a base `(α, β)` of the rank-2 subsystem it spans
//! (with `α` short when lengths differ) such that both roots are positive,
//! and the product is rewritten with the closed formula for that shape. This
//! also covers pairs of roots of opposite global sign.

use std::collections::HashMap;

use crate::chevalley::StructureConstants;
use crate::fp::Fp;
use crate::rootdata::RootSystem;

type Coef = fn(&[i64; 4]) -> i64;

/// The closed formulas, named by the shape of the pair in base coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    EqualBase,
    EqualBaseRev,
    DoubleBase,
    DoubleBaseRev,
    DoubleShort,
    DoubleShortRev,
    TripleBase,
    TripleBaseRev,
    TripleShortFirst,
    TripleShortFirstRev,
    TripleShortSecond,
    TripleShortSecondRev,
    TripleMiddle,
    TripleMiddleRev,
    TripleLong,
    TripleLongRev,
}

struct ShapeSpec {
    shape: Shape,
    subsystem_size: usize,
    first: (i32, i32),
    second: (i32, i32),
    /// Output factors in order, as base coordinates with the constant raised
    /// to the factor's exponent. `c = [c_{α,β}, c_{α,α+β}, c_{α,2α+β}, c_{2α+β,α+β}]`.
    outputs: Vec<((i32, i32), Coef)>,
}

fn shapes() -> Vec<ShapeSpec> {
    let one: Coef = |_| 1;
    let spec = |shape, subsystem_size, first, second, outputs| ShapeSpec { shape, subsystem_size, first, second, outputs };
    vec![
        spec(Shape::EqualBase, 6, (1, 0), (0, 1), vec![((0, 1), one), ((1, 1), |c| c[0]), ((1, 0), one)]),
        spec(Shape::EqualBaseRev, 6, (0, 1), (1, 0), vec![((1, 0), one), ((1, 1), |c| -c[0]), ((0, 1), one)]),
        spec(
            Shape::DoubleBase,
            8,
            (1, 0),
            (0, 1),
            vec![((0, 1), one), ((1, 1), |c| c[0]), ((2, 1), |c| c[0] * c[1]), ((1, 0), one)],
        ),
        spec(
            Shape::DoubleBaseRev,
            8,
            (0, 1),
            (1, 0),
            vec![((1, 0), one), ((2, 1), |c| c[0] * c[1]), ((1, 1), |c| -c[0]), ((0, 1), one)],
        ),
        spec(Shape::DoubleShort, 8, (1, 0), (1, 1), vec![((1, 1), one), ((2, 1), |c| 2 * c[1]), ((1, 0), one)]),
        spec(Shape::DoubleShortRev, 8, (1, 1), (1, 0), vec![((1, 0), one), ((2, 1), |c| -2 * c[1]), ((1, 1), one)]),
        spec(
            Shape::TripleBase,
            12,
            (1, 0),
            (0, 1),
            vec![
                ((0, 1), one),
                ((1, 1), |c| c[0]),
                ((3, 2), |c| c[1] * c[3]),
                ((2, 1), |c| c[0] * c[1]),
                ((3, 1), |c| c[0] * c[1] * c[2]),
                ((1, 0), one),
            ],
        ),
        spec(
            Shape::TripleBaseRev,
            12,
            (0, 1),
            (1, 0),
            vec![
                ((1, 0), one),
                ((3, 1), |c| -c[0] * c[1] * c[2]),
                ((2, 1), |c| c[0] * c[1]),
                ((3, 2), |c| c[1] * c[3]),
                ((1, 1), |c| -c[0]),
                ((0, 1), one),
            ],
        ),
        spec(
            Shape::TripleShortFirst,
            12,
            (1, 0),
            (1, 1),
            vec![
                ((1, 1), one),
                ((3, 2), |c| 3 * c[1] * c[3]),
                ((2, 1), |c| 2 * c[1]),
                ((3, 1), |c| 3 * c[1] * c[2]),
                ((1, 0), one),
            ],
        ),
        spec(
            Shape::TripleShortFirstRev,
            12,
            (1, 1),
            (1, 0),
            vec![
                ((1, 0), one),
                ((3, 1), |c| 3 * c[1] * c[2]),
                ((2, 1), |c| -2 * c[1]),
                ((3, 2), |c| 3 * c[1] * c[3]),
                ((1, 1), one),
            ],
        ),
        spec(Shape::TripleShortSecond, 12, (1, 0), (2, 1), vec![((2, 1), one), ((3, 1), |c| 3 * c[2]), ((1, 0), one)]),
        spec(
            Shape::TripleShortSecondRev,
            12,
            (2, 1),
            (1, 0),
            vec![((1, 0), one), ((3, 1), |c| -3 * c[2]), ((2, 1), one)],
        ),
        spec(Shape::TripleMiddle, 12, (2, 1), (1, 1), vec![((1, 1), one), ((3, 2), |c| 3 * c[3]), ((2, 1), one)]),
        spec(Shape::TripleMiddleRev, 12, (1, 1), (2, 1), vec![((2, 1), one), ((3, 2), |c| -3 * c[3]), ((1, 1), one)]),
        spec(
            Shape::TripleLong,
            12,
            (3, 1),
            (0, 1),
            vec![((0, 1), one), ((3, 2), |c| -c[0] * c[2] * c[3]), ((3, 1), one)],
        ),
        spec(
            Shape::TripleLongRev,
            12,
            (0, 1),
            (3, 1),
            vec![((3, 1), one), ((3, 2), |c| c[0] * c[2] * c[3]), ((0, 1), one)],
        ),
    ]
}

/// A resolved formula for one ordered pair of roots.
#[derive(Debug, Clone)]
pub struct PairRule {
    pub shape: Shape,
    first: (i32, i32),
    second: (i32, i32),
    /// `(root index, base coordinates, constant)` per output factor.
    outputs: Vec<(usize, (i32, i32), i64)>,
}

/// `Σ coeff · Π e_{root}^{(exp)}` with the product taken left to right.
pub type Word = Vec<(usize, u32)>;

impl PairRule {
    /// Expands `e_first^(a) e_second^(b)`; zero coefficients are dropped.
    pub fn expand(&self, a: u32, b: u32, fp: Fp) -> Vec<(u32, Word)> {
        let target = (
            a as i32 * self.first.0 + b as i32 * self.second.0,
            a as i32 * self.first.1 + b as i32 * self.second.1,
        );
        let consts: Vec<u32> = self.outputs.iter().map(|o| fp.from_i64(o.2)).collect();
        let mut out = Vec::new();
        let mut ts = vec![0u32; self.outputs.len()];
        self.enumerate(0, target, &mut ts, &consts, fp, &mut out);
        out
    }

    fn enumerate(
        &self,
        pos: usize,
        rest: (i32, i32),
        ts: &mut Vec<u32>,
        consts: &[u32],
        fp: Fp,
        out: &mut Vec<(u32, Word)>,
    ) {
        if pos == self.outputs.len() {
            if rest == (0, 0) {
                let coeff = ts.iter().zip(consts).fold(1, |acc, (&t, &c)| fp.mul(acc, fp.pow(c, t as u64)));
                if coeff != 0 {
                    let word = self.outputs.iter().zip(ts.iter()).filter(|(_, &t)| t > 0).map(|(o, &t)| (o.0, t)).collect();
                    out.push((coeff, word));
                }
            }
            return;
        }
        let (x, y) = self.outputs[pos].1;
        let mut t = 0;
        loop {
            let r = (rest.0 - t as i32 * x, rest.1 - t as i32 * y);
            if r.0 < 0 || r.1 < 0 {
                break;
            }
            ts[pos] = t;
            self.enumerate(pos + 1, r, ts, consts, fp, out);
            t += 1;
        }
        ts[pos] = 0;
    }
}

/// Rules for every ordered pair of roots whose sum is a root.
#[derive(Debug, Clone, Default)]
pub struct PairRules {
    rules: HashMap<(usize, usize), PairRule>,
}

impl PairRules {
    pub fn new(rs: &RootSystem, sc: &StructureConstants) -> Self {
        let specs = shapes();
        let mut rules = HashMap::new();
        for g in 0..rs.num_roots() {
            for d in 0..rs.num_roots() {
                if g == d || rs.negate(g) == d || rs.sum(g, d).is_none() {
                    continue;
                }
                let rule = resolve(rs, sc, &specs, g, d)
                    .unwrap_or_else(|| panic!("no commutation formula for {:?}, {:?}", rs.root(g), rs.root(d)));
                rules.insert((g, d), rule);
            }
        }
        PairRules { rules }
    }

    pub fn get(&self, gamma: usize, delta: usize) -> Option<&PairRule> {
        self.rules.get(&(gamma, delta))
    }
}

fn resolve(rs: &RootSystem, sc: &StructureConstants, specs: &[ShapeSpec], g: usize, d: usize) -> Option<PairRule> {
    let sub: Vec<usize> = (0..rs.num_roots()).filter(|&r| coords_in(rs, g, d, r).is_some()).collect();
    for &u in &sub {
        for &v in &sub {
            if u == v || rs.negate(u) == v {
                continue;
            }
            if rs.norm2(u) > rs.norm2(v) || (sub.len() > 6 && rs.norm2(u) == rs.norm2(v)) {
                continue;
            }
            let Some(base) = base_coords(rs, u, v, &sub) else { continue };
            let cg = base[&g];
            let cd = base[&d];
            let Some(spec) = specs
                .iter()
                .find(|s| s.subsystem_size == sub.len() && s.first == cg && s.second == cd)
            else {
                continue;
            };
            let root_at = |c: (i32, i32)| *base.iter().find(|(_, &v)| v == c).expect("root in subsystem").0;
            let c = |x: (i32, i32), y: (i32, i32)| -> i64 {
                match (base.values().any(|&v| v == x), base.values().any(|&v| v == y)) {
                    (true, true) => sc.c(rs, root_at(x), root_at(y)) as i64,
                    _ => 0,
                }
            };
            let consts = [c((1, 0), (0, 1)), c((1, 0), (1, 1)), c((1, 0), (2, 1)), c((2, 1), (1, 1))];
            let outputs = spec.outputs.iter().map(|&(xy, f)| (root_at(xy), xy, f(&consts))).collect();
            return Some(PairRule { shape: spec.shape, first: spec.first, second: spec.second, outputs });
        }
    }
    None
}

/// Rational coordinates of root `r` in the plane of roots `g`, `d`, if it lies there.
fn coords_in(rs: &RootSystem, g: usize, d: usize, r: usize) -> Option<(i64, i64, i64)> {
    let (gg, gd, dd) = (rs.norm2(g), rs.inner(&rs.root(g).0, &rs.root(d).0), rs.norm2(d));
    let (rg, rd) = (rs.inner(&rs.root(r).0, &rs.root(g).0), rs.inner(&rs.root(r).0, &rs.root(d).0));
    let det = gg * dd - gd * gd;
    let x = rg * dd - rd * gd;
    let y = rd * gg - rg * gd;
    let lies = (0..rs.rank()).all(|k| {
        x * rs.root(g).0[k] as i64 + y * rs.root(d).0[k] as i64 == det * rs.root(r).0[k] as i64
    });
    lies.then_some((x, y, det))
}

/// Integer coordinates of every subsystem root in the candidate base `(u, v)`,
/// or `None` if `(u, v)` is not a base.
fn base_coords(rs: &RootSystem, u: usize, v: usize, sub: &[usize]) -> Option<HashMap<usize, (i32, i32)>> {
    let mut out = HashMap::new();
    for &r in sub {
        let (x, y, det) = coords_in(rs, u, v, r)?;
        if x % det != 0 || y % det != 0 {
            return None;
        }
        let (x, y) = ((x / det) as i32, (y / det) as i32);
        if (x < 0 && y > 0) || (x > 0 && y < 0) {
            return None;
        }
        out.insert(r, (x, y));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_summing_pair_has_a_rule() {
        for label in ["A2", "A3", "B2", "B3", "C3", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            let rules = PairRules::new(&rs, &sc);
            let count = (0..rs.num_roots())
                .flat_map(|g| (0..rs.num_roots()).map(move |d| (g, d)))
                .filter(|&(g, d)| rs.sum(g, d).is_some())
                .count();
            assert_eq!(rules.rules.len(), count, "{label}");
        }
    }

    #[test]
    fn all_shapes_are_used_in_rank_two() {
        let mut used = std::collections::HashSet::new();
        for label in ["A2", "B2", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            for r in PairRules::new(&rs, &sc).rules.values() {
                used.insert(r.shape);
            }
        }
        assert_eq!(used.len(), 16);
    }

    #[test]
    fn degree_one_products_give_the_bracket() {
        for label in ["A2", "B2", "G2"] {
            let rs = RootSystem::build(label).unwrap();
            let sc = StructureConstants::new(&rs);
            let rules = PairRules::new(&rs, &sc);
            let fp = Fp::new(101).unwrap();
            for (&(g, d), rule) in &rules.rules {
                let terms = rule.expand(1, 1, fp);
                let s = rs.sum(g, d).unwrap();
                let bracket: Vec<_> = terms.iter().filter(|(_, w)| w.len() == 1).collect();
                assert_eq!(bracket.len(), 1);
                assert_eq!(bracket[0].1, vec![(s, 1)]);
                assert_eq!(bracket[0].0, fp.from_i64(sc.bracket_const(g, d) as i64));
                assert!(terms.iter().any(|(c, w)| *c == 1 && *w == vec![(d, 1), (g, 1)]));
            }
        }
    }

    #[test]
    fn long_pair_constant_matches_the_bracket() {
        // [e_{3α+β}, e_β] = -c_{α,β} c_{α,2α+β} c_{2α+β,α+β} e_{3α+2β} in every base
        let rs = RootSystem::build("G2").unwrap();
        let sc = StructureConstants::new(&rs);
        let rules = PairRules::new(&rs, &sc);
        for (&(g, d), rule) in &rules.rules {
            if rule.shape == Shape::TripleLong {
                let mid = rule.outputs[1].2;
                assert_eq!(mid, sc.bracket_const(g, d) as i64);
            }
        }
    }
}
