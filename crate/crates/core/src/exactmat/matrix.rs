use std::fmt;

use super::coeff::{Coeff, CoeffRing};
use super::echelon::{kernel_of_columns, EchelonBasis};
use super::sparse::{Accumulator, SparseVec};

/// Exact matrix over the coefficient ring, stored as sparse columns.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffMatrix {
    rows: usize,
    ring: CoeffRing,
    columns: Vec<SparseVec>,
}

impl fmt::Debug for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffMatrix {}x{} [", self.rows, self.cols())?;
        for r in 0..self.rows.min(12) {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols().min(12) {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize, ring: CoeffRing) -> Self {
        CoeffMatrix {
            rows,
            ring,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize, ring: CoeffRing) -> Self {
        CoeffMatrix {
            rows: n,
            ring,
            columns: (0..n).map(|i| SparseVec::unit(i, ring)).collect(),
        }
    }

    pub fn from_columns(rows: usize, ring: CoeffRing, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns
            .iter()
            .all(|c| c.max_index().is_none_or(|i| i < rows)));
        CoeffMatrix {
            rows,
            ring,
            columns,
        }
    }

    /// Builds from dense rows.
    pub fn from_rows(rows: &[Vec<Coeff>], cols: usize, ring: CoeffRing) -> Self {
        let mut columns = vec![Vec::new(); cols];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    columns[j].push((i, c.clone()));
                }
            }
        }
        CoeffMatrix {
            rows: rows.len(),
            ring,
            columns: columns.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>], ring: CoeffRing) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Coeff>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| ring.from_i64(v)).collect())
            .collect();
        Self::from_rows(&dense, cols, ring)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<SparseVec> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> Coeff {
        self.columns[c]
            .get(r)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Coeff>> {
        let mut out = vec![vec![self.ring.zero(); self.cols()]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.entries() {
                out[*i][j] = c.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols()
            && self
                .columns
                .iter()
                .enumerate()
                .all(|(j, c)| c.nnz() == 1 && c.entries()[0].0 == j && c.entries()[0].1.is_one())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseVec::nnz).sum()
    }

    /// `self · v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        match v.nnz() {
            0 => SparseVec::new(),
            1 => {
                let (j, c) = &v.entries()[0];
                self.columns[*j].scaled(c)
            }
            _ => {
                let mut acc = Accumulator::new(self.rows);
                for (j, c) in v.entries() {
                    acc.add_scaled(&self.columns[*j], c);
                }
                acc.take()
            }
        }
    }

    pub fn mul(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(
            self.cols(),
            other.rows,
            "dimension mismatch in product {}x{} * {}x{}",
            self.rows,
            self.cols(),
            other.rows,
            other.cols()
        );
        let mut acc = Accumulator::new(self.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                for (j, c) in col.entries() {
                    acc.add_scaled(&self.columns[*j], c);
                }
                acc.take()
            })
            .collect();
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns,
        }
    }

    pub fn add(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Coeff) -> CoeffMatrix {
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns: self.columns.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    pub fn transpose(&self) -> CoeffMatrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.entries() {
                cols[*i].push((j, c.clone()));
            }
        }
        CoeffMatrix {
            rows: self.cols(),
            ring: self.ring,
            columns: cols.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &CoeffMatrix) -> CoeffMatrix {
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().map(|c| c.offset(self.rows)));
        CoeffMatrix {
            rows: self.rows + other.rows,
            ring: self.ring,
            columns,
        }
    }

    pub fn block_diagonal(blocks: &[CoeffMatrix], ring: CoeffRing) -> CoeffMatrix {
        let mut out = CoeffMatrix::zeros(0, 0, ring);
        for b in blocks {
            out = out.direct_sum(b);
        }
        out
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.rows, other.rows);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns,
        }
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.cols(), other.cols());
        CoeffMatrix {
            rows: self.rows + other.rows,
            ring: self.ring,
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.add(&b.offset(self.rows)))
                .collect(),
        }
    }

    /// Kronecker product: `(A ⊗ B)` acting on `u ⊗ v` with index `i·dim(v) + j`.
    pub fn kron(&self, other: &CoeffMatrix) -> CoeffMatrix {
        let mut columns = Vec::with_capacity(self.cols() * other.cols());
        for a in &self.columns {
            for b in &other.columns {
                let mut entries = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.entries() {
                    for (j, y) in b.entries() {
                        entries.push((i * other.rows + j, x * y));
                    }
                }
                columns.push(SparseVec::from_sorted(entries));
            }
        }
        CoeffMatrix {
            rows: self.rows * other.rows,
            ring: self.ring,
            columns,
        }
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.rows, self.ring);
        for c in &self.columns {
            basis.insert(c.clone());
            if basis.rank() == self.rows {
                break;
            }
        }
        basis.rank()
    }

    /// Rank and a basis of the right kernel, as the columns of a matrix.
    pub fn rank_nullspace(&self) -> (usize, CoeffMatrix) {
        let kernel = kernel_of_columns(self.rows, self.ring, &self.columns);
        let rank = self.cols() - kernel.len();
        (
            rank,
            CoeffMatrix::from_columns(self.cols(), self.ring, kernel),
        )
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<CoeffMatrix> {
        if self.rows != self.cols() {
            return None;
        }
        let coords = super::echelon::SpanCoordinates::new(self.rows, self.ring, &self.columns);
        if coords.rank() != self.rows {
            return None;
        }
        let columns = (0..self.rows)
            .map(|i| {
                coords
                    .coordinates(&SparseVec::unit(i, self.ring))
                    .expect("full rank")
            })
            .collect();
        Some(CoeffMatrix::from_columns(self.rows, self.ring, columns))
    }

    /// Rows listed in `keep`, renumbered in order.
    pub fn select_rows(&self, keep: &[usize]) -> CoeffMatrix {
        let mut pos = vec![None; self.rows];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = Some(new);
        }
        let monotone = keep.windows(2).all(|w| w[0] < w[1]);
        let columns = self
            .columns
            .iter()
            .map(|c| {
                if monotone {
                    c.remap_monotone(|i| pos[i])
                } else {
                    SparseVec::from_pairs(
                        c.entries()
                            .iter()
                            .filter_map(|(i, v)| pos[*i].map(|j| (j, v.clone())))
                            .collect(),
                    )
                }
            })
            .collect();
        CoeffMatrix {
            rows: keep.len(),
            ring: self.ring,
            columns,
        }
    }

    pub fn select_cols(&self, keep: &[usize]) -> CoeffMatrix {
        CoeffMatrix {
            rows: self.rows,
            ring: self.ring,
            columns: keep.iter().map(|&j| self.columns[j].clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(rows: &[Vec<i64>]) -> CoeffMatrix {
        CoeffMatrix::from_i64_rows(rows, CoeffRing::Rational)
    }

    #[test]
    fn identity_has_full_rank() {
        let (rank, ns) = CoeffMatrix::identity(3, CoeffRing::Rational).rank_nullspace();
        assert_eq!(rank, 3);
        assert_eq!(ns.cols(), 0);
    }

    #[test]
    fn zero_matrix_nullspace() {
        let (rank, ns) = CoeffMatrix::zeros(2, 4, CoeffRing::Rational).rank_nullspace();
        assert_eq!(rank, 0);
        assert_eq!(ns.cols(), 4);
        assert_eq!(ns.rank(), 4);
    }

    #[test]
    fn rank_one_nullspace_by_hand() {
        // row reduce [[1,2],[2,4]] -> [[1,2],[0,0]]; x1 = -2 x2
        let m = rat(&[vec![1, 2], vec![2, 4]]);
        let (rank, ns) = m.rank_nullspace();
        assert_eq!(rank, 1);
        assert_eq!(ns.cols(), 1);
        let v = ns.col(0);
        let scale = v.get(1).unwrap().inv().unwrap();
        let normalized = v.scaled(&scale);
        assert_eq!(
            normalized,
            SparseVec::from_dense(&[
                CoeffRing::Rational.from_i64(-2),
                CoeffRing::Rational.from_i64(1)
            ])
        );
        assert!(m.mul(&ns).is_zero());
    }

    #[test]
    fn product_and_transpose() {
        let a = rat(&[vec![1, 2, 0], vec![0, 1, 3]]);
        let b = rat(&[vec![1, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(a.mul(&b), rat(&[vec![3, 2], vec![1, 7]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = rat(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(rat(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn kron_of_identities() {
        let r = CoeffRing::Rational;
        let k = CoeffMatrix::identity(2, r).kron(&CoeffMatrix::identity(3, r));
        assert!(k.is_identity());
        let a = rat(&[vec![0, 1], vec![1, 0]]);
        let b = rat(&[vec![1, 1], vec![0, 1]]);
        let ab = a.kron(&b);
        assert_eq!(ab.get(0, 3), r.from_i64(1));
        assert_eq!(ab.get(2, 0), r.from_i64(1));
    }
}
