//! Bijectivity checks for multiplication maps `A_r ⊗ Fr'^r(A_n) → A_{r+n}`
//! and `⊗_{i<r} Fr'^i(A_1) → A_r`, where `A` is one of `U^+`, `U^-`, `U^0`,
//! the two Borel parts or all of `U`.
//!
//! Source columns are products of basis elements written in target
//! coordinates. Every basis element is weight-homogeneous and products add
//! weights, so the matrix splits into weight blocks whose ranks are computed
//! independently.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grammar::{serialize_element, TorusForm};
use crate::idempotents::{enumerate_xm, mu_lambda};
use crate::linalg::FpMatrix;
use crate::straighten::{Algebra, Exps, PBWElement};

/// Default cap on the number of columns in one weight block.
pub const DEFAULT_BLOCK_CAP: usize = 1 << 16;

/// The subalgebra a map lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Plus,
    Minus,
    Torus,
    UpperBorel,
    LowerBorel,
    Full,
}

impl Space {
    fn has_f(self) -> bool {
        matches!(self, Space::Minus | Space::LowerBorel | Space::Full)
    }

    fn has_e(self) -> bool {
        matches!(self, Space::Plus | Space::UpperBorel | Space::Full)
    }

    fn has_torus(self) -> bool {
        matches!(self, Space::Torus | Space::UpperBorel | Space::LowerBorel | Space::Full)
    }

    fn name(self) -> &'static str {
        match self {
            Space::Plus => "plus",
            Space::Minus => "minus",
            Space::Torus => "torus",
            Space::UpperBorel => "upper-borel",
            Space::LowerBorel => "lower-borel",
            Space::Full => "full",
        }
    }

    /// Exponent of `p^d` in `dim A_d`.
    pub fn dim_exponent(self, rank: usize, nu: usize) -> usize {
        nu * (self.has_f() as usize + self.has_e() as usize) + rank * self.has_torus() as usize
    }
}

/// Which of the two maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// `A_r ⊗ Fr'^r(A_n) → A_{r+n}`.
    First,
    /// `⊗_{i<r} Fr'^i(A_1) → A_r`.
    Second,
    /// The first map read as a finite truncation of `A_r ⊗ Fr'^r(A) → A`.
    Truncated,
}

/// A named multiplication map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Statement {
    pub space: Space,
    pub form: Form,
}

impl Statement {
    pub const ALL: [&'static str; 15] = [
        "plus-first",
        "plus-second",
        "plus-truncated",
        "minus-first",
        "minus-second",
        "torus-first",
        "torus-second",
        "torus-truncated",
        "full-first",
        "full-second",
        "full-truncated",
        "upper-borel-first",
        "upper-borel-second",
        "lower-borel-first",
        "lower-borel-second",
    ];
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let form = match self.form {
            Form::First => "first",
            Form::Second => "second",
            Form::Truncated => "truncated",
        };
        write!(f, "{}-{}", self.space.name(), form)
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "plus" => Space::Plus,
            "minus" => Space::Minus,
            "torus" => Space::Torus,
            "upper-borel" => Space::UpperBorel,
            "lower-borel" => Space::LowerBorel,
            "full" => Space::Full,
            _ => return Err(Error::Invalid(format!("unknown space `{s}`"))),
        })
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Invalid(format!("unknown statement `{s}`"));
        let (space, form) = s.rsplit_once('-').ok_or_else(unknown)?;
        let space = space.parse().map_err(|_| unknown())?;
        let form = match form {
            "first" => Form::First,
            "second" => Form::Second,
            "truncated" => Form::Truncated,
            _ => return Err(unknown()),
        };
        Ok(Statement { space, form })
    }
}

/// A map to verify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    pub statement: Statement,
    pub system: String,
    pub p: u32,
    pub r: u32,
    /// Second factor depth for the first map, or the truncation depth.
    pub n: u32,
    pub block_cap: usize,
}

impl MapSpec {
    pub fn new(statement: &str, system: &str, p: u32, r: u32, n: u32) -> Result<Self> {
        Ok(MapSpec { statement: statement.parse()?, system: system.to_string(), p, r, n, block_cap: DEFAULT_BLOCK_CAP })
    }

    /// Depth of the target space.
    pub fn target_depth(&self) -> u32 {
        match self.statement.form {
            Form::Second => self.r,
            _ => self.r + self.n,
        }
    }

    /// The level needed to represent every table faithfully.
    pub fn level(&self) -> u32 {
        if self.statement.space.has_torus() {
            self.target_depth()
        } else {
            1
        }
    }

    pub fn algebra(&self) -> Result<Algebra> {
        Algebra::new(&self.system, self.p as u64, self.level())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub weight: Vec<i64>,
    pub dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

/// A dependency among source columns, written so each product can be
/// replayed with `mul`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessTerm {
    pub coeff: u32,
    pub factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub statement: String,
    pub system: String,
    pub p: u32,
    pub r: u32,
    pub n: Option<u32>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub bijective: bool,
    pub blocks: Vec<BlockReport>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicative: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessTerm>>,
}

impl VerificationReport {
    /// Whether every requested property holds.
    pub fn passed(&self) -> bool {
        self.bijective && self.multiplicative != Some(false)
    }
}

/// Key of a target coordinate: `(f-exponents, e-exponents, torus index)`.
type Key = (Exps, Exps, usize);

fn exps_below(nu: usize, bound: u32, active: bool) -> Vec<Exps> {
    if !active {
        return vec![vec![0; nu]];
    }
    let total = (bound as usize).pow(nu as u32);
    (0..total)
        .map(|mut idx| {
            (0..nu)
                .map(|_| {
                    let c = (idx % bound as usize) as u32;
                    idx /= bound as usize;
                    c
                })
                .collect()
        })
        .collect()
}

fn weight_of(alg: &Algebra, f: &[u32], e: &[u32]) -> Vec<i64> {
    let a = alg.exps_root_weight(f);
    let b = alg.exps_root_weight(e);
    b.iter().zip(&a).map(|(x, y)| x - y).collect()
}

/// A basis element with its weight.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub element: PBWElement,
    pub weight: Vec<i64>,
}

/// The ordered basis `f^(a) μ_λ^(d) e^(b)` of `A_d` (factors absent from the
/// space are dropped), with `f` slowest and `e` fastest.
pub fn enumerate_basis(alg: &Algebra, space: Space, depth: u32, cap: usize) -> Result<Vec<BasisElement>> {
    let nu = alg.nu();
    let rank = alg.root_system().rank();
    let dim = (alg.p() as usize)
        .checked_pow(depth * space.dim_exponent(rank, nu) as u32)
        .filter(|&d| d <= cap)
        .ok_or(Error::CapExceeded { dim: usize::MAX, cap })?;
    let bound = alg.p().pow(depth);
    let fs = exps_below(nu, bound, space.has_f());
    let es = exps_below(nu, bound, space.has_e());
    let tori: Vec<PBWElement> = if space.has_torus() {
        enumerate_xm(rank, alg.p(), depth).iter().map(|l| mu_lambda(alg, l, depth)).collect::<Result<_>>()?
    } else {
        vec![alg.one()]
    };
    let mut out = Vec::with_capacity(dim);
    for f in &fs {
        for t in &tori {
            for e in &es {
                let (_, h, _) = t.terms().next().expect("idempotent is nonzero");
                out.push(BasisElement {
                    element: alg.monomial(f.clone(), h.clone(), e.clone()),
                    weight: weight_of(alg, f, e),
                });
            }
        }
    }
    debug_assert_eq!(out.len(), dim);
    Ok(out)
}

/// Coordinates of `x` in the basis of `A_d`; fails if `x ∉ A_d`.
fn coordinates(alg: &Algebra, space: Space, depth: u32, x: &PBWElement) -> Result<Vec<(Key, u32)>> {
    let hs = alg.hspace();
    let bound = alg.p().pow(depth);
    let mut out = Vec::new();
    for (f, h, e) in x.terms() {
        let f_ok = space.has_f() || f.iter().all(|&c| c == 0);
        let e_ok = space.has_e() || e.iter().all(|&c| c == 0);
        let t_ok = if space.has_torus() { hs.is_periodic(h, depth) } else { hs.is_periodic(h, 0) };
        if !(f_ok && e_ok && t_ok) || f.iter().chain(e).any(|&c| c >= bound) {
            return Err(Error::NotInSubalgebra("the target space"));
        }
        if space.has_torus() {
            for lam in enumerate_xm(hs.rank(), alg.p(), depth) {
                let i = hs.index(&lam.0);
                if h.values[i] != 0 {
                    out.push(((f.clone(), e.clone(), i), h.values[i]));
                }
            }
        } else {
            out.push(((f.clone(), e.clone(), 0), h.values[0]));
        }
    }
    Ok(out)
}

struct Column {
    weight: Vec<i64>,
    factors: Vec<PBWElement>,
}

/// Builds the source columns (as factor lists) of a map.
fn source_columns(alg: &Algebra, spec: &MapSpec) -> Result<Vec<Column>> {
    let space = spec.statement.space;
    let q = (alg.p() as i64).pow(spec.r);
    let cap = usize::MAX;
    match spec.statement.form {
        Form::First | Form::Truncated => {
            let left = enumerate_basis(alg, space, spec.r, cap)?;
            let right = enumerate_basis(alg, space, spec.n, cap)?;
            let lifted: Vec<PBWElement> =
                right.par_iter().map(|y| alg.fr_prime(&y.element, spec.r)).collect::<Result<_>>()?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for x in &left {
                for (y, fy) in right.iter().zip(&lifted) {
                    let weight = x.weight.iter().zip(&y.weight).map(|(a, b)| a + q * b).collect();
                    out.push(Column { weight, factors: vec![x.element.clone(), fy.clone()] });
                }
            }
            Ok(out)
        }
        Form::Second => {
            let base = enumerate_basis(alg, space, 1, cap)?;
            let mut layers = Vec::new();
            for i in 0..spec.r {
                let l: Vec<PBWElement> = base.par_iter().map(|y| alg.fr_prime(&y.element, i)).collect::<Result<_>>()?;
                layers.push(l);
            }
            let k = base.len();
            let total = k.pow(spec.r);
            let rank = alg.root_system().rank();
            let mut out = Vec::with_capacity(total);
            for idx in 0..total {
                let mut rest = idx;
                let mut weight = vec![0i64; rank];
                let mut factors = Vec::with_capacity(spec.r as usize);
                for (i, layer) in layers.iter().enumerate() {
                    let j = rest % k;
                    rest /= k;
                    let s = (alg.p() as i64).pow(i as u32);
                    weight.iter_mut().zip(&base[j].weight).for_each(|(w, b)| *w += s * b);
                    factors.push(layer[j].clone());
                }
                out.push(Column { weight, factors });
            }
            Ok(out)
        }
    }
}

/// Checks `φ(x)φ(x') = φ(x·x')` on all pairs of basis tensors of a torus map.
fn torus_multiplicative(alg: &Algebra, spec: &MapSpec) -> Result<bool> {
    let parts: Vec<Vec<(PBWElement, u32)>> = match spec.statement.form {
        Form::Second => (0..spec.r)
            .map(|i| {
                let b = enumerate_basis(alg, Space::Torus, 1, usize::MAX)?;
                Ok(b.into_iter().map(|x| (x.element, i)).collect())
            })
            .collect::<Result<_>>()?,
        _ => vec![
            enumerate_basis(alg, Space::Torus, spec.r, usize::MAX)?.into_iter().map(|x| (x.element, 0)).collect(),
            enumerate_basis(alg, Space::Torus, spec.n, usize::MAX)?.into_iter().map(|x| (x.element, spec.r)).collect(),
        ],
    };
    // basis tensors as index tuples
    let sizes: Vec<usize> = parts.iter().map(|p| p.len()).collect();
    let total: usize = sizes.iter().product();
    let tuple = |mut idx: usize| -> Vec<usize> {
        sizes
            .iter()
            .map(|&s| {
                let j = idx % s;
                idx /= s;
                j
            })
            .collect()
    };
    let image = |elems: &[PBWElement]| -> Result<PBWElement> {
        let mapped: Vec<PBWElement> =
            elems.iter().zip(&parts).map(|(x, part)| alg.fr_prime(x, part[0].1)).collect::<Result<_>>()?;
        alg.product(&mapped)
    };
    let images: Vec<PBWElement> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let t = tuple(idx);
            let elems: Vec<PBWElement> = t.iter().zip(&parts).map(|(&j, part)| part[j].0.clone()).collect();
            image(&elems)
        })
        .collect::<Result<_>>()?;
    (0..total).into_par_iter().try_fold(
        || true,
        |ok, i| -> Result<bool> {
            if !ok {
                return Ok(false);
            }
            let ti = tuple(i);
            for j in 0..total {
                let tj = tuple(j);
                let elems: Vec<PBWElement> = ti
                    .iter()
                    .zip(&tj)
                    .zip(&parts)
                    .map(|((&a, &b), part)| alg.multiply(&part[a].0, &part[b].0))
                    .collect::<Result<_>>()?;
                if alg.multiply(&images[i], &images[j])? != image(&elems)? {
                    return Ok(false);
                }
            }
            Ok(true)
        },
    )
    .try_reduce(|| true, |a, b| Ok(a && b))
}

/// The dependency `Σ k_j · column_j = 0` with each column written as its
/// list of factors.
fn witness_terms(alg: &Algebra, columns: &[Column], cols: &[usize], kernel: &[u32]) -> Vec<WitnessTerm> {
    cols.iter()
        .zip(kernel)
        .filter(|(_, &c)| c != 0)
        .map(|(&j, &c)| WitnessTerm {
            coeff: c,
            factors: columns[j].factors.iter().map(|x| serialize_element(alg, x, TorusForm::Binomial)).collect(),
        })
        .collect()
}

/// Runs a verification on the standard algebra for `spec`.
pub fn verify(spec: &MapSpec) -> Result<VerificationReport> {
    verify_with(&spec.algebra()?, spec)
}

/// Runs a verification on a given algebra (which may carry altered
/// structure constants).
pub fn verify_with(alg: &Algebra, spec: &MapSpec) -> Result<VerificationReport> {
    let start = Instant::now();
    if alg.p() != spec.p || alg.level() < spec.level() {
        return Err(Error::Invalid("algebra does not match the map".into()));
    }
    if spec.r == 0 || (spec.statement.form != Form::Second && spec.n == 0) {
        return Err(Error::Invalid("depths must be positive".into()));
    }
    let space = spec.statement.space;
    let depth = spec.target_depth();
    let nu = alg.nu();
    let rank = alg.root_system().rank();
    let e = space.dim_exponent(rank, nu) as u32;
    let p = alg.p() as usize;
    let source_dim = match spec.statement.form {
        Form::Second => p.checked_pow(e).and_then(|d| d.checked_pow(spec.r)),
        _ => p.checked_pow(spec.r * e).and_then(|a| p.checked_pow(spec.n * e).map(|b| a * b)),
    }
    .ok_or(Error::CapExceeded { dim: usize::MAX, cap: spec.block_cap })?;
    let target_dim = p.checked_pow(depth * e).ok_or(Error::CapExceeded { dim: usize::MAX, cap: spec.block_cap })?;
    if source_dim != target_dim {
        return Err(Error::Invalid(format!("dimension mismatch: {source_dim} vs {target_dim}")));
    }

    // target coordinates grouped by weight
    let target = enumerate_basis(alg, space, depth, usize::MAX)?;
    let mut rows: BTreeMap<Vec<i64>, HashMap<Key, usize>> = BTreeMap::new();
    for b in &target {
        for (key, _) in coordinates(alg, space, depth, &b.element)? {
            let block = rows.entry(b.weight.clone()).or_default();
            let next = block.len();
            block.entry(key).or_insert(next);
        }
    }

    let columns = source_columns(alg, spec)?;
    let mut by_weight: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (j, c) in columns.iter().enumerate() {
        by_weight.entry(c.weight.clone()).or_default().push(j);
    }
    if let Some((_, cols)) = by_weight.iter().find(|(_, c)| c.len() > spec.block_cap) {
        return Err(Error::CapExceeded { dim: cols.len(), cap: spec.block_cap });
    }

    let products: Vec<Result<Vec<(Key, u32)>>> = columns
        .par_iter()
        .map(|c| {
            let x = alg.product(&c.factors)?;
            coordinates(alg, space, depth, &x)
        })
        .collect();

    let empty = HashMap::new();
    let results: Vec<(BlockReport, Option<Vec<usize>>, Option<Vec<u32>>)> = by_weight
        .par_iter()
        .map(|(w, cols)| {
            let row_map = rows.get(w).unwrap_or(&empty);
            let mut m = FpMatrix::new(alg.fp(), row_map.len());
            let mut outside = false;
            for &j in cols {
                let mut v = vec![0u32; row_map.len()];
                match &products[j] {
                    Ok(coords) => {
                        for (k, c) in coords {
                            match row_map.get(k) {
                                Some(&i) => v[i] = *c,
                                None => outside = true,
                            }
                        }
                    }
                    Err(_) => outside = true,
                }
                m.push_column(v);
            }
            let rk = if outside { 0 } else { m.rank() };
            let ok = !outside && rk == cols.len() && rk == row_map.len();
            let witness = if !ok && !outside { m.kernel_vector() } else { None };
            let report = BlockReport { weight: w.clone(), dim: cols.len(), target_dim: row_map.len(), rank: rk };
            (report, (!ok).then(|| cols.clone()), witness)
        })
        .collect();

    let mut blocks = Vec::new();
    let mut total_rank = 0;
    let mut bijective = true;
    let mut witness = None;
    let mut note = None;
    for (report, failed, kernel) in results {
        total_rank += report.rank;
        if let Some(cols) = failed {
            bijective = false;
            if witness.is_none() {
                match kernel {
                    Some(k) => witness = Some(witness_terms(alg, &columns, &cols, &k)),
                    None if note.is_none() => {
                        note = Some(format!("block {:?} has products outside the target or a size mismatch", report.weight));
                    }
                    None => {}
                }
            }
        }
        blocks.push(report);
    }
    let covered: usize = blocks.iter().map(|b| b.target_dim).sum();
    if covered != target_dim {
        bijective = false;
        note.get_or_insert_with(|| "some target weights receive no source columns".into());
    }
    if spec.statement.form == Form::Truncated {
        note.get_or_insert_with(|| format!("finite truncation at depth {}", spec.n));
    }
    let multiplicative = if space == Space::Torus { Some(torus_multiplicative(alg, spec)?) } else { None };
    Ok(VerificationReport {
        statement: spec.statement.to_string(),
        system: alg.root_system().label(),
        p: alg.p(),
        r: spec.r,
        n: (spec.statement.form != Form::Second).then_some(spec.n),
        source_dim,
        target_dim,
        rank: total_rank,
        bijective,
        blocks,
        elapsed_ms: start.elapsed().as_millis(),
        multiplicative,
        note,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(statement: &str, system: &str, p: u32, r: u32, n: u32) -> VerificationReport {
        verify(&MapSpec::new(statement, system, p, r, n).unwrap()).unwrap()
    }

    #[test]
    fn statement_names_round_trip() {
        for s in Statement::ALL {
            assert_eq!(s.parse::<Statement>().unwrap().to_string(), s);
        }
        assert!("plus-third".parse::<Statement>().is_err());
    }

    #[test]
    fn basis_dimensions() {
        let alg = Algebra::new("A2", 2, 2).unwrap();
        assert_eq!(enumerate_basis(&alg, Space::Plus, 2, usize::MAX).unwrap().len(), 64);
        assert_eq!(enumerate_basis(&alg, Space::Torus, 2, usize::MAX).unwrap().len(), 16);
        assert_eq!(enumerate_basis(&alg, Space::Full, 1, usize::MAX).unwrap().len(), 256);
        assert!(matches!(enumerate_basis(&alg, Space::Full, 2, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn a1_plus_map_is_bijective() {
        let rep = run("plus-first", "A1", 2, 1, 1);
        assert!(rep.bijective);
        assert_eq!((rep.source_dim, rep.rank), (4, 4));
        // one block per weight 0..3
        assert_eq!(rep.blocks.len(), 4);
    }

    #[test]
    fn small_maps_are_bijective() {
        for (s, sys, p, r, n) in [
            ("plus-first", "A2", 2, 1, 1),
            ("minus-first", "B2", 2, 1, 1),
            ("plus-second", "A2", 2, 2, 0),
            ("torus-first", "A2", 2, 1, 1),
            ("torus-second", "A1", 3, 2, 0),
            ("full-first", "A1", 2, 1, 1),
            ("upper-borel-first", "A1", 3, 1, 1),
            ("lower-borel-second", "A1", 2, 2, 0),
        ] {
            let rep = run(s, sys, p, r, n);
            assert!(rep.passed(), "{s} {sys} p={p}: {rep:?}");
        }
    }

    #[test]
    fn blocks_partition_the_full_matrix() {
        // the block ranks must add up to the rank of the undivided matrix
        let spec = MapSpec::new("full-first", "A1", 2, 1, 1).unwrap();
        let alg = spec.algebra().unwrap();
        let rep = verify_with(&alg, &spec).unwrap();
        let target = enumerate_basis(&alg, Space::Full, 2, usize::MAX).unwrap();
        let mut keys: HashMap<Key, usize> = HashMap::new();
        for b in &target {
            for (k, _) in coordinates(&alg, Space::Full, 2, &b.element).unwrap() {
                let next = keys.len();
                keys.entry(k).or_insert(next);
            }
        }
        let mut m = FpMatrix::new(alg.fp(), keys.len());
        for c in source_columns(&alg, &spec).unwrap() {
            let x = alg.product(&c.factors).unwrap();
            let mut v = vec![0; keys.len()];
            for (k, val) in coordinates(&alg, Space::Full, 2, &x).unwrap() {
                v[keys[&k]] = val;
            }
            m.push_column(v);
        }
        assert_eq!(m.rank(), rep.rank);
        assert_eq!(rep.blocks.iter().map(|b| b.rank).sum::<usize>(), rep.rank);
    }

    #[test]
    fn witness_replays_to_zero() {
        let alg = Algebra::new("B2", 3, 2).unwrap();
        let x = alg.root_power(0, 2);
        let y = alg.add(&alg.root_power(1, 1), &alg.root_power(2, 1));
        let z = alg.root_power(alg.nu() + 1, 1);
        let columns = vec![
            Column { weight: vec![], factors: vec![x.clone(), y.clone()] },
            Column { weight: vec![], factors: vec![x.clone(), z.clone()] },
            Column { weight: vec![], factors: vec![x.clone(), alg.lin(&y, &z, 2)] },
        ];
        // col0 + 2·col1 − col2 = 0
        let terms = witness_terms(&alg, &columns, &[0, 1, 2], &[1, 2, 2]);
        let mut acc = alg.zero();
        for t in &terms {
            let fs: Vec<PBWElement> = t.factors.iter().map(|s| crate::grammar::parse_element(&alg, s).unwrap()).collect();
            acc = alg.lin(&acc, &alg.product(&fs).unwrap(), t.coeff);
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn sabotaged_constants_still_produce_a_report() {
        // the leading-term structure of the map survives a sign flip, so the
        // report is well-formed whatever it concludes
        let spec = MapSpec::new("plus-first", "G2", 2, 1, 1).unwrap();
        let good = spec.algebra().unwrap();
        let rs = good.root_system().clone();
        let g = rs.index_of(&[1, 1]).unwrap();
        let d = rs.index_of(&[2, 1]).unwrap();
        let bad = Algebra::from_parts(rs, good.constants().with_flipped_pair(g, d), 2, spec.level()).unwrap();
        let rep = verify_with(&bad, &spec).unwrap();
        assert_eq!(rep.source_dim, 4096);
        assert_eq!(rep.bijective, rep.rank == rep.source_dim);
    }
}
