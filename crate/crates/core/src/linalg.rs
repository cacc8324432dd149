//! Dense linear algebra over `F_p`: rank and kernel vectors.
//!
//! Matrices are stored by columns. Over `F_2` columns are bit-packed and
//! reduced with XOR.

use crate::fp::Fp;

/// A matrix over `F_p` stored as dense columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    fp: Fp,
    rows: usize,
    columns: Vec<Vec<u32>>,
}

impl FpMatrix {
    pub fn new(fp: Fp, rows: usize) -> Self {
        FpMatrix { fp, rows, columns: Vec::new() }
    }

    pub fn from_columns(fp: Fp, rows: usize, columns: Vec<Vec<u32>>) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        FpMatrix { fp, rows, columns }
    }

    pub fn identity(fp: Fp, n: usize) -> Self {
        let cols = (0..n).map(|j| (0..n).map(|i| (i == j) as u32).collect()).collect();
        FpMatrix { fp, rows: n, columns: cols }
    }

    pub fn push_column(&mut self, col: Vec<u32>) {
        assert_eq!(col.len(), self.rows, "column length mismatch");
        self.columns.push(col);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.columns[j][i]
    }

    /// `self · other`.
    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols(), other.rows, "dimension mismatch");
        let fp = self.fp;
        let columns = other
            .columns
            .iter()
            .map(|oc| {
                let mut out = vec![0u32; self.rows];
                for (k, &c) in oc.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (o, &a) in out.iter_mut().zip(&self.columns[k]) {
                        *o = fp.add(*o, fp.mul(a, c));
                    }
                }
                out
            })
            .collect();
        FpMatrix { fp, rows: self.rows, columns }
    }

    pub fn rank(&self) -> usize {
        if self.fp.p() == 2 {
            self.rank_f2()
        } else {
            self.rank_fp()
        }
    }

    fn rank_f2(&self) -> usize {
        let words = self.rows.div_ceil(64);
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for col in &self.columns {
            let mut v = vec![0u64; words];
            for (i, &x) in col.iter().enumerate() {
                if x & 1 == 1 {
                    v[i / 64] |= 1 << (i % 64);
                }
            }
            for (pivot, b) in &basis {
                if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                    v.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
                }
            }
            if let Some(w) = v.iter().position(|&x| x != 0) {
                let pivot = w * 64 + v[w].trailing_zeros() as usize;
                basis.push((pivot, v));
            }
        }
        basis.len()
    }

    fn rank_fp(&self) -> usize {
        let p = self.fp.p() as u64;
        let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
        for col in &self.columns {
            let mut v = col.clone();
            for (pivot, b) in &basis {
                let c = v[*pivot];
                if c != 0 {
                    let neg = p - c as u64;
                    v.iter_mut().zip(b).for_each(|(x, &y)| *x = ((*x as u64 + neg * y as u64) % p) as u32);
                }
            }
            if let Some(pivot) = v.iter().position(|&x| x != 0) {
                let inv = self.fp.inv(v[pivot]);
                v.iter_mut().for_each(|x| *x = self.fp.mul(*x, inv));
                basis.push((pivot, v));
            }
        }
        basis.len()
    }

    /// A nonzero `x` with `self · x = 0`, if the columns are dependent.
    pub fn kernel_vector(&self) -> Option<Vec<u32>> {
        let fp = self.fp;
        let p = fp.p() as u64;
        let n = self.cols();
        let mut basis: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            let mut v = col.clone();
            let mut comb = vec![0u32; n];
            comb[j] = 1;
            for (pivot, b, bc) in &basis {
                let c = v[*pivot];
                if c != 0 {
                    let neg = p - c as u64;
                    v.iter_mut().zip(b).for_each(|(x, &y)| *x = ((*x as u64 + neg * y as u64) % p) as u32);
                    comb.iter_mut().zip(bc).for_each(|(x, &y)| *x = ((*x as u64 + neg * y as u64) % p) as u32);
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return Some(comb),
                Some(pivot) => {
                    let inv = fp.inv(v[pivot]);
                    v.iter_mut().for_each(|x| *x = fp.mul(*x, inv));
                    comb.iter_mut().for_each(|x| *x = fp.mul(*x, inv));
                    basis.push((pivot, v, comb));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_matrix(fp: Fp, rows: usize, cols: usize, seed: &[u32]) -> FpMatrix {
        let p = fp.p();
        let columns = (0..cols)
            .map(|j| (0..rows).map(|i| seed[(i * 31 + j * 17) % seed.len()].wrapping_mul(i as u32 + 3 * j as u32 + 1) % p).collect())
            .collect();
        FpMatrix::from_columns(fp, rows, columns)
    }

    #[test]
    fn identity_and_zero() {
        for p in [2, 3, 5] {
            let fp = Fp::new(p).unwrap();
            assert_eq!(FpMatrix::identity(fp, 70).rank(), 70);
            let z = FpMatrix::from_columns(fp, 5, vec![vec![0; 5]; 4]);
            assert_eq!(z.rank(), 0);
            assert!(z.kernel_vector().is_some());
            assert!(FpMatrix::identity(fp, 9).kernel_vector().is_none());
        }
    }

    #[test]
    fn dependent_column_found() {
        let fp = Fp::new(3).unwrap();
        let m = FpMatrix::from_columns(fp, 3, vec![vec![1, 2, 0], vec![0, 1, 1], vec![1, 1, 2]]);
        // third = first + 2·second
        assert_eq!(m.rank(), 2);
        let k = m.kernel_vector().unwrap();
        let col = FpMatrix::from_columns(fp, 3, vec![k]);
        assert!(m.mul(&col).columns[0].iter().all(|&x| x == 0));
    }

    proptest! {
        #[test]
        fn product_of_rank_k_factors(p in prop::sample::select(vec![2u64, 3, 5, 7]), k in 0usize..6, n in 6usize..12, seed in prop::collection::vec(0u32..1000, 8..20)) {
            let fp = Fp::new(p).unwrap();
            // A = [I_k; B] (n×k) and C = [I_k | D] (k×n) have rank k, so A·C does too
            let b = random_matrix(fp, n - k, k, &seed);
            let d = random_matrix(fp, k, n - k, &seed[1..]);
            let a_cols = (0..k).map(|j| {
                let mut c: Vec<u32> = (0..k).map(|i| (i == j) as u32).collect();
                c.extend((0..n - k).map(|i| b.get(i, j)));
                c
            }).collect();
            let a = FpMatrix::from_columns(fp, n, a_cols);
            let mut c_cols: Vec<Vec<u32>> = (0..k).map(|j| (0..k).map(|i| (i == j) as u32).collect()).collect();
            c_cols.extend((0..n - k).map(|j| (0..k).map(|i| d.get(i, j)).collect()));
            let c = FpMatrix::from_columns(fp, k, c_cols);
            let prod = a.mul(&c);
            prop_assert_eq!(prod.rank(), k);
            prop_assert_eq!(prod.rank_fp(), k);
            if let Some(x) = prod.kernel_vector() {
                let xm = FpMatrix::from_columns(fp, n, vec![x.clone()]);
                prop_assert!(x.iter().any(|&v| v != 0));
                prop_assert!(prod.mul(&xm).columns[0].iter().all(|&v| v == 0));
            } else {
                prop_assert_eq!(k, n);
            }
        }
    }
}
