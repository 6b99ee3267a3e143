//! Arithmetic over the prime field `F_q` and small dense matrices over it.
//!
//! Matrices here carry VI-morphisms and group elements, so they stay tiny
//! (a handful of rows); everything is dense and row-major.

use std::fmt;

use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest generator of the multiplicative group of `F_q`.
pub fn primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    let order = q - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..q)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, order / p, q) != 1))
        .expect("a prime field has a primitive root")
}

fn pow_mod(mut base: u32, mut exp: u32, q: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % q as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % q as u64;
        }
        b = b * b % q as u64;
        exp >>= 1;
    }
    base = acc as u32;
    base
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FqScalar {
    value: u32,
    modulus: u32,
}

impl FqScalar {
    pub fn new(value: u64, modulus: u32) -> Self {
        debug_assert!(modulus >= 2);
        FqScalar {
            value: (value % modulus as u64) as u32,
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FqScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Multiplicative inverse in `F_q`.
pub fn ff_inverse(a: FqScalar) -> Result<FqScalar> {
    if a.value == 0 {
        return Err(Error::ZeroInverse);
    }
    Ok(FqScalar {
        value: inv_mod(a.value, a.modulus),
        modulus: a.modulus,
    })
}

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    // extended Euclid on i64
    let (mut r0, mut r1) = (q as i64, a as i64 % q as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    debug_assert_eq!(r0, 1, "{a} is not invertible mod {q}");
    t0.rem_euclid(q as i64) as u32
}

/// Dense matrix over `F_q`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    q: u32,
    data: Vec<u32>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[", self.q)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize, q: u32) -> Self {
        FqMatrix {
            rows,
            cols,
            q,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize, q: u32) -> Self {
        let mut m = Self::zeros(n, n, q);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of integers, reducing every entry mod `q`.
    pub fn from_rows(rows: &[Vec<i64>], q: u32) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c, q);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.rem_euclid(q as i64) as u32);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<u32>], rows: usize, q: u32) -> Self {
        let mut m = Self::zeros(rows, cols.len(), q);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % q);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.q;
    }

    pub fn scalar(&self, r: usize, c: usize) -> FqScalar {
        FqScalar::new(self.get(r, c) as u64, self.q)
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.q, other.q);
        let q = self.q as u64;
        let mut out = FqMatrix::zeros(self.rows, other.cols, self.q);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] =
                        ((out.data[idx] as u64 + a * other.get(k, j) as u64) % q) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let q = self.q as u64;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u64, |acc, k| {
                    (acc + self.get(i, k) as u64 * v[k] as u64) % q
                }) as u32
            })
            .collect()
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.cols, self.rows, self.q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Selects the given rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> FqMatrix {
        let mut out = FqMatrix::zeros(rows.len(), self.cols, self.q);
        for (i, &r) in rows.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &FqMatrix) -> FqMatrix {
        let mut out = FqMatrix::zeros(self.rows + other.rows, self.cols + other.cols, self.q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Row echelon reduction of a copy; returns the pivot columns.
    fn row_reduce(&self) -> (FqMatrix, Vec<usize>) {
        let mut m = self.clone();
        let q = self.q as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), self.q) as u64;
            for j in 0..m.cols {
                let v = m.get(r, j) as u64 * inv % q;
                m.set(r, j, v as u32);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c) as u64;
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) as u64 + q * q - f * m.get(r, j) as u64) % q;
                    m.set(i, j, v as u32);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    /// Rank together with a basis of the right kernel (as columns of the
    /// returned matrix).
    pub fn rank_nullspace(&self) -> (usize, FqMatrix) {
        let (rref, pivots) = self.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = FqMatrix::zeros(self.cols, free.len(), self.q);
        for (k, &f) in free.iter().enumerate() {
            basis.set(f, k, 1);
            for (r, &p) in pivots.iter().enumerate() {
                let v = rref.get(r, f);
                if v != 0 {
                    basis.set(p, k, self.q - v);
                }
            }
        }
        (pivots.len(), basis)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if self.rows != self.cols {
            return Err(Error::BadDims(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let mut aug = FqMatrix::zeros(n, 2 * n, self.q);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (rref, pivots) = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotFullRank {
                rank: pivots.iter().filter(|&&p| p < n).count(),
                cols: n,
            });
        }
        let mut inv = FqMatrix::zeros(n, n, self.q);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, rref.get(i, n + j));
            }
        }
        Ok(inv)
    }

    /// Greedy top-to-bottom choice of rows spanning the row space.
    fn pivot_rows(&self) -> Vec<usize> {
        self.transpose().row_reduce().1
    }

    /// Reduced column echelon form.
    ///
    /// Returns `(canonical, transform)` with `self = canonical * transform`,
    /// `transform ∈ GL_d`. The canonical matrix depends only on the column
    /// span: its pivot rows are the greedy top-to-bottom independent rows of
    /// `self`, and it restricts to the identity there. Consequently
    /// `transform` is just `self` restricted to the pivot rows.
    pub fn column_echelon_canonical(&self) -> Result<(FqMatrix, FqMatrix)> {
        let pivots = self.pivot_rows();
        if pivots.len() < self.cols {
            return Err(Error::NotFullRank {
                rank: pivots.len(),
                cols: self.cols,
            });
        }
        let transform = self.select_rows(&pivots);
        let canonical = self.mul(&transform.inverse()?);
        Ok((canonical, transform))
    }

    /// Rows at which the reduced column echelon form has its pivots.
    pub fn echelon_pivot_rows(&self) -> Vec<usize> {
        self.pivot_rows()
    }

    /// Is this matrix already in reduced column echelon form?
    pub fn is_column_echelon(&self) -> bool {
        match self.column_echelon_canonical() {
            Ok((c, _)) => &c == self,
            Err(_) => false,
        }
    }
}
