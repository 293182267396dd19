//! Dense matrices over a prime field `F_p`.
//!
//! Entries are stored row-major as canonical representatives in `[0, p)`.
//! Empty shapes (`0 x n`, `n x 0`) are allowed and act as zero maps.

use std::fmt;

use thiserror::Error;

/// Default characteristic used throughout the crate.
pub const DEFAULT_PRIME: u32 = 101;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} is not an odd prime")]
    NotPrime(u32),
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[inline]
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    add_mod(a, p - b % p, p)
}

#[inline]
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

#[inline]
pub fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Reduce an arbitrary integer into `[0, p)`.
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

/// Symmetric representative in `(-p/2, p/2]`, handy for printing.
pub fn signed(x: u32, p: u32) -> i64 {
    if x > p / 2 {
        x as i64 - p as i64
    } else {
        x as i64
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} mod {}]", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % p;
        }
        m
    }

    /// Build from integer rows; every row must have the same length.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self, LinError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinError::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| reduce(x, p)).collect();
        Ok(Matrix { p, rows: rows.len(), cols, data })
    }

    /// Like `from_rows` but with an explicit column count (needed for `n x 0`).
    pub fn from_rows_shape(p: u32, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<Self, LinError> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(LinError::Dimension(format!("expected {rows}x{cols}")));
        }
        let data = entries.iter().flatten().map(|&x| reduce(x, p)).collect();
        Ok(Matrix { p, rows, cols, data })
    }

    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { p, rows, cols, data: data.into_iter().map(|x| x % p).collect() }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_cols(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % p;
            }
        }
        m
    }

    pub fn prime(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
    pub fn data(&self) -> &[u32] {
        &self.data
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
    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = add_mod(self.data[i], v, self.p);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul: {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let p = self.p as u64;
        let mut out = Matrix::zeros(self.p, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (j, &b) in brow.iter().enumerate() {
                    acc[j] += a * b as u64;
                    if acc[j] >= (1u64 << 62) {
                        acc[j] %= p;
                    }
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] = (acc[j] % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let mut s = 0u64;
                for (k, &x) in v.iter().enumerate() {
                    s += self.data[i * self.cols + k] as u64 * x as u64;
                    if s >= (1u64 << 62) {
                        s %= p;
                    }
                }
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| add_mod(a, b, self.p)).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| sub_mod(a, b, self.p)).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let data = self.data.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn add_assign_scaled(&mut self, other: &Matrix, c: u32) {
        assert_eq!(self.shape(), other.shape());
        if c == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = add_mod(*a, mul_mod(b, c, self.p), self.p);
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.p, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            m.data[r * m.cols..r * m.cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * m.cols + self.cols..(r + 1) * m.cols].copy_from_slice(other.row(r));
        }
        m
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for r in 0..b.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + b.cols].copy_from_slice(b.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut m = Matrix::zeros(self.p, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            m.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.p, idx.len(), self.cols);
        for (k, &r) in idx.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(r));
        }
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (k, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + k] = self.get(r, c);
            }
        }
        m
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
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
            let Some(sel) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if sel != r {
                for j in 0..cols {
                    self.data.swap(sel * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.data[r * cols + c], p);
            for j in c..cols {
                self.data[r * cols + j] = mul_mod(self.data[r * cols + j], inv, p);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = (p - f) as u64;
                for j in c..cols {
                    let v = self.data[r * cols + j];
                    if v != 0 {
                        let x = self.data[i * cols + j] as u64 + nf * v as u64;
                        self.data[i * cols + j] = (x % p as u64) as u32;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel. Each vector has a 1 in its free column and
    /// zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let (r, piv) = self.rref();
        let p = self.p;
        let mut is_piv = vec![false; self.cols];
        for &c in &piv {
            is_piv[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in piv.iter().enumerate() {
                v[pc] = neg_mod(r.get(i, free), p);
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis as the columns of a matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_cols(self.p, self.cols, &self.nullspace())
    }

    /// Column-space basis: the pivot columns of `self`.
    pub fn column_basis(&self) -> Matrix {
        let (_, piv) = self.rref();
        self.select_cols(&piv)
    }

    /// Some `x` with `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>, LinError> {
        if self.rows != b.rows {
            return Err(LinError::Dimension(format!(
                "solve: a has {} rows, b has {}",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let (r, piv) = aug.rref();
        let mut x = Matrix::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in piv.iter().enumerate() {
            if pc >= self.cols {
                return Ok(None);
            }
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn solve_vec(&self, b: &[u32]) -> Option<Vec<u32>> {
        let bm = Matrix::from_cols(self.p, self.rows, &[b.to_vec()]);
        self.solve(&bm).ok().flatten().map(|x| x.col(0))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.p, self.rows)).ok()??;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> u32 {
        (0..self.rows.min(self.cols)).fold(0, |s, i| add_mod(s, self.get(i, i), self.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(7, 2);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1]));
        let z = Matrix::zeros(7, 3, 4);
        assert_eq!(z.rref(), (z.clone(), vec![]));
        let a = m(5, &[&[1, 2], &[2, 4]]);
        assert_eq!(a.rref(), (m(5, &[&[1, 2], &[0, 0]]), vec![0]));
    }

    #[test]
    fn nullspace_examples() {
        assert!(Matrix::identity(11, 3).nullspace().is_empty());
        assert_eq!(Matrix::zeros(11, 2, 3).nullspace().len(), 3);
        // brute force over all 9 vectors of F_3^2
        let a = m(3, &[&[1, 1]]);
        let brute: Vec<Vec<u32>> = (0..3)
            .flat_map(|x| (0..3).map(move |y| vec![x, y]))
            .filter(|v| a.mul_vec(v) == vec![0])
            .filter(|v| v.iter().any(|&t| t != 0))
            .collect();
        assert_eq!(brute.len(), 2);
        let ns = a.nullspace();
        assert_eq!(ns, vec![vec![2, 1]]);
        assert!(brute.contains(&ns[0]));
    }

    #[test]
    fn solve_examples() {
        let b = m(13, &[&[3, 4], &[5, 6]]);
        assert_eq!(Matrix::identity(13, 2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(13, 2, 2).solve(&b).unwrap(), None);
        let x = m(5, &[&[2]]).solve(&m(5, &[&[1]])).unwrap().unwrap();
        assert_eq!(x, m(5, &[&[3]]));
        assert!(m(5, &[&[2]]).solve(&Matrix::zeros(5, 2, 1)).is_err());
    }

    #[test]
    fn empty_shapes() {
        let a = Matrix::zeros(5, 0, 3);
        assert_eq!(a.nullspace().len(), 3);
        let b = Matrix::zeros(5, 3, 0);
        assert!(b.nullspace().is_empty());
        assert_eq!(a.mul(&Matrix::zeros(5, 3, 2)).shape(), (0, 2));
        assert_eq!(b.mul(&Matrix::zeros(5, 0, 4)), Matrix::zeros(5, 3, 4));
        assert_eq!(b.solve(&Matrix::zeros(5, 3, 1)).unwrap(), Some(Matrix::zeros(5, 0, 1)));
    }

    #[test]
    fn inverses() {
        for a in 1..101 {
            assert_eq!(mul_mod(a, inv_mod(a, 101), 101), 1);
        }
        let a = m(101, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(101, 2));
        assert!(is_odd_prime(101) && !is_odd_prime(2) && !is_odd_prime(91));
    }
}
