//! Dense linear algebra over prime fields.
//!
//! Matrices are row-major with entries stored as residues in `[0, p)`.
//! Column-oriented operations (`kernel_basis`, `solve`) treat vectors as
//! columns; the `*_left` and `row_*` helpers treat them as rows, which is
//! the convention used for right modules elsewhere in the crate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaError {
    #[error("modulus {0} is not a prime below 65536")]
    NotPrime(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace containment violated")]
    NotContained,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` can serve as a field modulus.
pub fn check_prime(p: u32) -> Result<(), LaError> {
    if is_prime(p) && p < 65536 {
        Ok(())
    } else {
        Err(LaError::NotPrime(p))
    }
}

#[inline]
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Reduces a signed integer into `[0, p)`.
#[inline]
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

/// An element of F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scalar {
    pub residue: u32,
    pub p: u32,
}

impl Scalar {
    pub fn new(x: i64, p: u32) -> Result<Self, LaError> {
        check_prime(p)?;
        Ok(Scalar { residue: reduce(x, p), p })
    }
    pub fn add(self, o: Scalar) -> Scalar {
        Scalar { residue: (self.residue + o.residue) % self.p, p: self.p }
    }
    pub fn mul(self, o: Scalar) -> Scalar {
        Scalar { residue: self.residue * o.residue % self.p, p: self.p }
    }
    pub fn neg(self) -> Scalar {
        Scalar { residue: (self.p - self.residue) % self.p, p: self.p }
    }
    pub fn inv(self) -> Option<Scalar> {
        (self.residue != 0).then(|| Scalar { residue: inv_mod(self.residue, self.p), p: self.p })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rank: usize,
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        debug_assert!(data.iter().all(|&x| x < p));
        Mat { p, rows, cols, data }
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| reduce(x, p)));
        }
        Mat { p, rows: r, cols: c, data }
    }

    /// A single column.
    pub fn column(p: u32, v: &[u32]) -> Mat {
        Mat::from_vec(p, v.len(), 1, v.to_vec())
    }

    /// A single row.
    pub fn row_vec(p: u32, v: &[u32]) -> Mat {
        Mat::from_vec(p, 1, v.len(), v.to_vec())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn col_vec(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "mul: inner dimensions differ");
        assert_eq!(self.p, o.p, "mul: moduli differ");
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * o.cols];
        for r in 0..self.rows {
            let orow = &mut out[r * o.cols..(r + 1) * o.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                let brow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, &b) in orow.iter_mut().zip(brow) {
                    *x += a * b as u64;
                }
            }
            for x in orow.iter_mut() {
                *x %= p;
            }
        }
        Mat { p: self.p, rows: self.rows, cols: o.cols, data: out.into_iter().map(|x| x as u32).collect() }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let p = self.p as u64;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (x, &b) in out.iter_mut().zip(self.row(k)) {
                *x += a as u64 * b as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!(self.shape(), o.shape(), "add: shapes differ");
        let p = self.p;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| (a + b) % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!(self.shape(), o.shape(), "sub: shapes differ");
        let p = self.p;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| (a + p - b) % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, s: u32) -> Mat {
        let p = self.p;
        let s = s % p;
        let data = self.data.iter().map(|&a| a * s % p).collect();
        Mat { p, rows: self.rows, cols: self.cols, data }
    }

    /// `self + s * o`
    pub fn add_scaled(&mut self, o: &Mat, s: u32) {
        assert_eq!(self.shape(), o.shape());
        let p = self.p;
        let s = s % p;
        if s == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&o.data) {
            *a = (*a + s * b) % p;
        }
    }

    pub fn hstack(p: u32, rows: usize, parts: &[&Mat]) -> Mat {
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack: row counts differ");
            out.set_block(0, off, m);
            off += m.cols;
        }
        out
    }

    pub fn vstack(p: u32, cols: usize, parts: &[&Mat]) -> Mat {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for m in parts {
            assert_eq!(m.cols, cols, "vstack: column counts differ");
            data.extend_from_slice(&m.data);
        }
        Mat { p, rows, cols, data }
    }

    pub fn block_diag(p: u32, parts: &[&Mat]) -> Mat {
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(p, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Mat) {
        assert!(r0 + m.rows <= self.rows && c0 + m.cols <= self.cols, "block out of range");
        for r in 0..m.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(self.p, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Mat { p: self.p, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Reduced row-echelon form. Pivot search scans columns left to right and
    /// takes the first row (lowest index) with a nonzero entry.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { rank: pivots.len(), reduced: m, pivots }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p);
            if inv != 1 {
                for j in c..cols {
                    let x = &mut self.data[r * cols + j];
                    *x = *x * inv % p;
                }
            }
            let (head, tail) = self.data.split_at_mut(r * cols);
            let (prow, tail) = tail.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f != 0 {
                    let nf = p - f;
                    for j in c..cols {
                        row[j] = (row[j] + nf * prow[j]) % p;
                    }
                }
            };
            for row in head.chunks_mut(cols) {
                eliminate(row);
            }
            for row in tail.chunks_mut(cols) {
                eliminate(row);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.clone().rref_in_place().len()
        } else {
            self.transpose().rref_in_place().len()
        }
    }

    /// Columns spanning the right kernel `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> Mat {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.p, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.data[f * free.len() + j] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let v = reduced.get(i, f);
                if v != 0 {
                    k.data[pc * free.len() + j] = (self.p - v) % self.p;
                }
            }
        }
        k
    }

    /// Rows spanning the left kernel `{v : v * self = 0}`.
    pub fn left_kernel(&self) -> Mat {
        self.transpose().kernel_basis().transpose()
    }

    /// Solves `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, LaError> {
        if b.len() != self.rows {
            return Err(LaError::DimensionMismatch(format!(
                "system has {} rows, right-hand side has {}",
                self.rows,
                b.len()
            )));
        }
        let aug = Mat::hstack(self.p, self.rows, &[self, &Mat::column(self.p, b)]);
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solves `x * self = b` for a row vector `x`.
    pub fn solve_left(&self, b: &[u32]) -> Result<Option<Vec<u32>>, LaError> {
        self.transpose().solve(b)
    }

    /// Nonzero rows of the reduced form: a basis of the row space.
    pub fn row_space_basis(&self) -> Mat {
        let r = self.rref();
        r.reduced.block(0, 0, r.rank, self.cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Mat::zeros(self.p, 0, 0));
        }
        let aug = Mat::hstack(self.p, n, &[self, &Mat::identity(self.p, n)]);
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.reduced.block(0, n, n, n))
    }

    /// Flattens row-major into a single vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }
}

/// Solver for coordinates with respect to a fixed set of independent columns.
#[derive(Debug, Clone)]
pub struct ColumnSolver {
    n: usize,
    k: usize,
    // Row i < k of the transform gives coordinate i; rows k.. vanish on the span.
    transform: Mat,
}

impl ColumnSolver {
    /// `basis` must have independent columns.
    pub fn new(basis: &Mat) -> ColumnSolver {
        let (n, k) = basis.shape();
        let p = basis.p();
        let aug = Mat::hstack(p, n, &[basis, &Mat::identity(p, n)]);
        let r = aug.rref();
        assert!(r.pivots.iter().take(k).enumerate().all(|(i, &c)| c == i) && r.rank >= k, "basis columns are dependent");
        let transform = r.reduced.block(0, k, n, n);
        ColumnSolver { n, k, transform }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// Coordinates of `v` in the basis, or `None` when outside the span.
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.n);
        let t = self.transform.mul_vec(v);
        // rows k.. of the transform detect membership
        if t[self.k..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(t[..self.k].to_vec())
    }
}

/// Quotient `span(V) / span(W)` with a section and a projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    /// Columns (ambient vectors) whose classes form a basis of the quotient.
    pub lift_basis: Mat,
    /// Maps V-coordinates (coefficients on the columns of V) to quotient coordinates.
    pub project: Mat,
    w_rank: usize,
    solver: ColumnSolver,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.lift_basis.cols()
    }

    /// Quotient coordinates of an ambient vector lying in span(V).
    pub fn coords(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.solver.coords(v).map(|c| c[self.w_rank..].to_vec())
    }

    /// Whether an ambient vector of span(V) lies in span(W).
    pub fn is_trivial(&self, v: &[u32]) -> Option<bool> {
        self.coords(v).map(|c| c.iter().all(|&x| x == 0))
    }
}

/// Builds the quotient of the column span of `v` by the column span of `w`.
pub fn quotient_basis(v: &Mat, w: &Mat) -> Result<Quotient, LaError> {
    if v.rows() != w.rows() {
        return Err(LaError::DimensionMismatch(format!("ambient {} vs {}", v.rows(), w.rows())));
    }
    let p = v.p();
    let n = v.rows();
    // Independent columns of W first, then columns of V extending them.
    let both = Mat::hstack(p, n, &[w, v]);
    let r = both.rref();
    let w_piv: Vec<usize> = r.pivots.iter().copied().filter(|&c| c < w.cols()).collect();
    let v_piv: Vec<usize> = r.pivots.iter().copied().filter(|&c| c >= w.cols()).map(|c| c - w.cols()).collect();
    let v_rank = v.rank();
    if w_piv.len() + v_piv.len() != v_rank {
        return Err(LaError::NotContained);
    }
    let wb = w.select_cols(&w_piv);
    let lift = v.select_cols(&v_piv);
    let basis = Mat::hstack(p, n, &[&wb, &lift]);
    let solver = ColumnSolver::new(&basis);
    let q = lift.cols();
    let mut project = Mat::zeros(p, q, v.cols());
    for c in 0..v.cols() {
        let coords = solver.coords(&v.col_vec(c)).ok_or(LaError::NotContained)?;
        for i in 0..q {
            project.set(i, c, coords[w_piv.len() + i]);
        }
    }
    Ok(Quotient { lift_basis: lift, project, w_rank: w_piv.len(), solver })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        let r = Mat::identity(2, 2).rref();
        assert_eq!((r.rank, r.pivots.clone()), (2, vec![0, 1]));
        let r = Mat::zeros(3, 3, 3).rref();
        assert_eq!((r.rank, r.pivots.len()), (0, 0));
        let r = Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]).rref();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::identity(3, 4).kernel_basis().cols(), 0);
        assert_eq!(Mat::zeros(2, 3, 3).kernel_basis().cols(), 3);
        let k = Mat::from_rows(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col_vec(0), vec![1, 1]);
    }

    #[test]
    fn solve_examples() {
        let a = Mat::identity(7, 3);
        assert_eq!(a.solve(&[3, 5, 6]).unwrap(), Some(vec![3, 5, 6]));
        let z = Mat::zeros(2, 2, 2);
        assert_eq!(z.solve(&[1, 0]).unwrap(), None);
        let a = Mat::from_rows(2, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(a.solve(&[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(a.solve(&[1]).is_err());
    }

    #[test]
    fn quotient_examples() {
        let v = Mat::identity(2, 2);
        assert_eq!(quotient_basis(&v, &v).unwrap().dim(), 0);
        assert_eq!(quotient_basis(&v, &Mat::zeros(2, 2, 0)).unwrap().dim(), 2);
        let w = Mat::column(2, &[1, 1]);
        let q = quotient_basis(&v, &w).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(q.is_trivial(&[1, 1]), Some(true));
        assert_eq!(q.is_trivial(&[1, 0]), Some(false));
        let bad = Mat::column(2, &[1, 0]);
        assert!(quotient_basis(&w, &bad).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Mat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(5, 2));
        assert!(Mat::from_rows(5, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn prime_check() {
        assert!(check_prime(7).is_ok());
        assert!(check_prime(9).is_err());
        assert!(Scalar::new(-1, 5).unwrap().residue == 4);
    }
}
