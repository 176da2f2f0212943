//! Dense exact linear algebra over any [`FieldSpec`]: rank, nullspace,
//! solving, inversion. This is the engine behind dual-hypersurface
//! interpolation and invariant-subspace computation.
//!
//! Two elimination paths:
//! - a u64 kernel for prime fields ([`FpMat`]), with rayon-parallel row
//!   updates whose results are bit-identical regardless of thread count
//!   (each row update is independent and rows are merged in index order);
//! - a generic path over [`FieldElem`] for ℚ and extensions. Over ℚ the
//!   forward pass is fraction-free (Bareiss) on cleared-denominator rows to
//!   control coefficient growth.
//!
//! Pivoting is deterministic everywhere: the first row with a nonzero entry
//! in the current column wins.

use crate::fields::{Fp, FieldElem, FieldSpec};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

/// Dense matrix over a field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixF {
    pub rows: usize,
    pub cols: usize,
    pub field: FieldSpec,
    entries: Vec<FieldElem>,
}

impl MatrixF {
    pub fn zeros(rows: usize, cols: usize, field: FieldSpec) -> Self {
        let z = field.zero();
        MatrixF { rows, cols, field, entries: vec![z; rows * cols] }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<FieldElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        let entries = rows.into_iter().flatten().collect();
        MatrixF { rows: r, cols: c, field, entries }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, field.clone());
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.cols {
                    let t = f.mul(self.get(i, j), &v[j]);
                    acc = f.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        match &self.field {
            FieldSpec::Prime { p } => self.to_fp(*p).rank(),
            FieldSpec::Rational => rational_rank(self),
            _ => {
                let (_, pivots) = rref_generic(self.clone());
                pivots.len()
            }
        }
    }

    /// Basis of {v : Mv = 0} in reduced echelon form, deterministic.
    pub fn nullspace(&self) -> Vec<Vec<FieldElem>> {
        match &self.field {
            FieldSpec::Prime { p } => {
                self.to_fp(*p)
                    .nullspace()
                    .into_iter()
                    .map(|v| v.into_iter().map(FieldElem::Fp).collect())
                    .collect()
            }
            _ => {
                let (m, pivots) = rref_generic(self.clone());
                nullspace_from_rref(&m, &pivots)
            }
        }
    }

    /// Solve Mx = b; None when inconsistent or rank-deficient in a way that
    /// leaves no solution. For square invertible M the solution is unique.
    pub fn solve(&self, b: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let mut aug = MatrixF::zeros(self.rows, self.cols + 1, f.clone());
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (m, pivots) = rref_generic(aug);
        // inconsistent iff a pivot lands in the last column
        if pivots.iter().any(|&(_, c)| c == self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for &(r, c) in &pivots {
            x[c] = m.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<MatrixF> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let f = &self.field;
        let mut aug = MatrixF::zeros(n, 2 * n, f.clone());
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, f.one());
        }
        let (m, pivots) = rref_generic(aug);
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(k, &(_, c))| c != k) {
            return None;
        }
        let mut inv = MatrixF::zeros(n, n, f.clone());
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, m.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    fn to_fp(&self, p: u64) -> FpMat {
        let a = self
            .entries
            .iter()
            .map(|e| match e {
                FieldElem::Fp(x) => *x,
                _ => panic!("non-prime entry in prime-field matrix"),
            })
            .collect();
        FpMat { fp: Fp::new(p), rows: self.rows, cols: self.cols, a }
    }
}

/// Reduced row echelon form with deterministic first-nonzero pivoting.
/// Returns the matrix and the (row, col) pivot list.
fn rref_generic(mut m: MatrixF) -> (MatrixF, Vec<(usize, usize)>) {
    let f = m.field.clone();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        if pr != r {
            for j in 0..m.cols {
                let tmp = m.get(pr, j).clone();
                m.set(pr, j, m.get(r, j).clone());
                m.set(r, j, tmp);
            }
        }
        let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
        for j in c..m.cols {
            m.set(r, j, f.mul(m.get(r, j), &inv));
        }
        for i in 0..m.rows {
            if i != r && !f.is_zero(m.get(i, c)) {
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let t = f.mul(&factor, m.get(r, j));
                    m.set(i, j, f.sub(m.get(i, j), &t));
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    (m, pivots)
}

fn nullspace_from_rref(m: &MatrixF, pivots: &[(usize, usize)]) -> Vec<Vec<FieldElem>> {
    let f = &m.field;
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![f.zero(); m.cols];
        v[free] = f.one();
        for &(r, c) in pivots {
            v[c] = f.neg(m.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Fraction-free (Bareiss) rank over ℚ: clear row denominators, then run
/// integer elimination with exact divisions.
fn rational_rank(m: &MatrixF) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..m.cols {
                let FieldElem::Rat(r) = m.get(i, j) else { panic!("non-rational entry") };
                lcm = num_integer::lcm(lcm, r.denom().clone());
            }
            (0..m.cols)
                .map(|j| {
                    let FieldElem::Rat(r) = m.get(i, j) else { unreachable!() };
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let t = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = &t / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Dense matrix over F_p on u64 storage; the hot elimination kernel.
#[derive(Debug, Clone)]
pub struct FpMat {
    pub fp: Fp,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<u64>,
}

impl FpMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { fp: Fp::new(p), rows, cols, a: vec![0; rows * cols] }
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        FpMat { fp: Fp::new(p), rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.cols + j] = v;
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let fp = self.fp;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                let (lo, hi) = self.a.split_at_mut(pr * cols);
                lo[r * cols..r * cols + cols].swap_with_slice(&mut hi[..cols]);
            }
            let inv = fp.inv(self.get(r, c));
            for j in c..cols {
                let v = fp.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            // eliminate everywhere else; row updates are independent
            let pivot_row: Vec<u64> = self.a[r * cols..(r + 1) * cols].to_vec();
            let row_len = cols;
            self.a
                .par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(i, row)| {
                    if i == r || row[c] == 0 {
                        return;
                    }
                    let factor = fp.neg(row[c]);
                    for j in c..row_len {
                        row[j] = fp.mul_add(factor, pivot_row[j], row[j]);
                    }
                });
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Nullspace basis in reduced echelon form (free columns in ascending
    /// order, each basis vector has a 1 in its free column).
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let fp = self.fp;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (ri, &c) in pivots.iter().enumerate() {
                v[c] = fp.neg(m.get(ri, free));
            }
            basis.push(v);
        }
        basis
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let fp = self.fp;
        (0..self.rows)
            .map(|i| {
                let row = &self.a[i * self.cols..(i + 1) * self.cols];
                let mut acc: u64 = 0;
                for (x, y) in row.iter().zip(v) {
                    acc = fp.mul_add(*x, *y, acc);
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn q(n: i64, d: i64) -> FieldElem {
        FieldElem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn nullspace_identity_and_line() {
        let f31 = FieldSpec::prime(31).unwrap();
        let id = MatrixF::identity(3, f31.clone());
        assert!(id.nullspace().is_empty());
        assert_eq!(id.rank(), 3);

        // [1 1] → nullspace spanned by (1, −1) up to normalization
        let m = MatrixF::from_rows(f31.clone(), vec![vec![f31.one(), f31.one()]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!(m
            .apply(v)
            .iter()
            .all(|x| f31.is_zero(x)));
        // proportional to (1, −1)
        let ratio = f31.div(&v[1], &v[0]).unwrap();
        assert_eq!(ratio, f31.from_i64(-1));
    }

    #[test]
    fn rank_nullity_and_exactness() {
        let f31 = FieldSpec::prime(31).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let m = MatrixF::from_rows(
                f31.clone(),
                (0..rows)
                    .map(|_| (0..cols).map(|_| f31.random(&mut rng)).collect())
                    .collect(),
            );
            let ns = m.nullspace();
            assert_eq!(m.rank() + ns.len(), cols);
            for v in &ns {
                assert!(m.apply(v).iter().all(|x| f31.is_zero(x)));
            }
        }
    }

    #[test]
    fn vandermonde_rank_over_f31() {
        let f31 = FieldSpec::prime(31).unwrap();
        let pts = [2i64, 5, 11, 17, 29];
        let m = MatrixF::from_rows(
            f31.clone(),
            pts.iter()
                .map(|&x| (0..5).map(|k| f31.pow(&f31.from_i64(x), k)).collect())
                .collect(),
        );
        assert_eq!(m.rank(), 5);
    }

    #[test]
    fn solve_random_invertible_systems() {
        // 1000 random instances of Mx = b over F_p, exact check
        let f = FieldSpec::prime(10009).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 1000 {
            let n = rng.gen_range(1..6);
            let m = MatrixF::from_rows(
                f.clone(),
                (0..n)
                    .map(|_| (0..n).map(|_| f.random(&mut rng)).collect())
                    .collect(),
            );
            if m.rank() < n {
                continue;
            }
            let b: Vec<FieldElem> = (0..n).map(|_| f.random(&mut rng)).collect();
            let x = m.solve(&b).expect("invertible");
            assert_eq!(m.apply(&x), b);
            done += 1;
        }
    }

    #[test]
    fn rational_fraction_free_rank() {
        let qf = FieldSpec::rationals();
        let m = MatrixF::from_rows(
            qf.clone(),
            vec![
                vec![q(1, 2), q(1, 3), q(1, 6)],
                vec![q(2, 1), q(4, 3), q(2, 3)],
                vec![q(0, 1), q(1, 1), q(5, 1)],
            ],
        );
        // row2 = 4·row1, so rank 2
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.apply(&ns[0]).iter().all(|x| qf.is_zero(x)));
    }

    #[test]
    fn fpmat_parallel_determinism() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let rows: Vec<Vec<u64>> = (0..40)
            .map(|_| (0..37).map(|_| rng.gen_range(0..31)).collect())
            .collect();
        let m = FpMat::from_rows(31, rows);
        let base = m.nullspace();
        for threads in [1usize, 2, 7] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let ns = pool.install(|| m.nullspace());
            assert_eq!(ns, base, "thread count changed the result");
        }
        for v in &base {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }
}
