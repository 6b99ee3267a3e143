//! Incremental sparse echelon bases: spans, quotients, kernels, coordinates.

use super::coeff::{Coeff, CoeffRing};
use super::matrix::CoeffMatrix;
use super::sparse::SparseVec;

const NO_ROW: usize = usize::MAX;

/// Rows with distinct leading indices, each leading entry equal to 1.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    dim: usize,
    ring: CoeffRing,
    rows: Vec<SparseVec>,
    row_of_pivot: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize, ring: CoeffRing) -> Self {
        EchelonBasis {
            dim,
            ring,
            rows: Vec::new(),
            row_of_pivot: vec![NO_ROW; dim],
        }
    }

    pub fn from_vectors<'a>(
        dim: usize,
        ring: CoeffRing,
        vectors: impl IntoIterator<Item = &'a SparseVec>,
    ) -> Self {
        let mut b = Self::new(dim, ring);
        for v in vectors {
            b.insert(v.clone());
        }
        b
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.row_of_pivot[i] != NO_ROW
    }

    /// Reduces `v` until none of its coordinates is a pivot, reporting each
    /// row multiplier used.
    fn reduce_with(&self, mut v: SparseVec, mut record: impl FnMut(usize, &Coeff)) -> SparseVec {
        let mut pos = 0;
        loop {
            let entries = v.entries();
            let start = entries.partition_point(|(i, _)| *i < pos);
            let Some((p, c)) = entries[start..]
                .iter()
                .find(|(i, _)| self.row_of_pivot[*i] != NO_ROW)
                .cloned()
            else {
                return v;
            };
            let r = self.row_of_pivot[p];
            record(r, &c);
            v = v.add_scaled(&self.rows[r], &-&c);
            pos = p + 1;
        }
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        if self.rows.is_empty() {
            return v.clone();
        }
        self.reduce_with(v.clone(), |_, _| {})
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        if self.is_full() {
            return false;
        }
        let rem = if self.rows.is_empty() {
            v
        } else {
            self.reduce_with(v, |_, _| {})
        };
        self.push_remainder(rem)
    }

    fn push_remainder(&mut self, rem: SparseVec) -> bool {
        let Some((p, lead)) = rem.leading().cloned() else {
            return false;
        };
        let rem = if lead.is_one() {
            rem
        } else {
            rem.scaled(&lead.inv().expect("nonzero leading entry"))
        };
        self.row_of_pivot[p] = self.rows.len();
        self.rows.push(rem);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.leading().unwrap().0).collect();
        p.sort_unstable();
        p
    }

    /// Quotient of the ambient space by this span.
    pub fn quotient(self) -> QuotientMap {
        QuotientMap::new(self)
    }

    /// Spanning vectors as the columns of a matrix.
    pub fn to_matrix(&self) -> CoeffMatrix {
        CoeffMatrix::from_columns(self.dim, self.ring, self.rows.clone())
    }
}

/// Projection `k^dim → k^dim / span`, with the non-pivot coordinates as the
/// quotient basis.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    span: EchelonBasis,
    index_of: Vec<usize>,
    free: Vec<usize>,
}

impl QuotientMap {
    pub fn new(span: EchelonBasis) -> Self {
        let mut index_of = vec![NO_ROW; span.dim];
        let mut free = Vec::new();
        for (i, slot) in index_of.iter_mut().enumerate() {
            if !span.is_pivot(i) {
                *slot = free.len();
                free.push(i);
            }
        }
        QuotientMap {
            span,
            index_of,
            free,
        }
    }

    /// Quotient by the zero subspace.
    pub fn identity(dim: usize, ring: CoeffRing) -> Self {
        Self::new(EchelonBasis::new(dim, ring))
    }

    pub fn ambient_dim(&self) -> usize {
        self.span.dim
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ring(&self) -> CoeffRing {
        self.span.ring
    }

    pub fn span(&self) -> &EchelonBasis {
        &self.span
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let rem = self.span.reduce(v);
        rem.remap_monotone(|i| {
            let k = self.index_of[i];
            debug_assert_ne!(k, NO_ROW);
            Some(k)
        })
    }

    /// A preimage of the `k`-th quotient basis vector.
    pub fn lift(&self, k: usize) -> SparseVec {
        SparseVec::unit(self.free[k], self.span.ring)
    }

    pub fn lift_vec(&self, v: &SparseVec) -> SparseVec {
        v.remap_monotone(|k| Some(self.free[k]))
    }

    pub fn lift_indices(&self) -> &[usize] {
        &self.free
    }

    pub fn projection_matrix(&self) -> CoeffMatrix {
        let ring = self.span.ring;
        let columns = (0..self.span.dim)
            .map(|i| self.project(&SparseVec::unit(i, ring)))
            .collect();
        CoeffMatrix::from_columns(self.dim(), ring, columns)
    }

    pub fn lift_matrix(&self) -> CoeffMatrix {
        let ring = self.span.ring;
        CoeffMatrix::from_columns(
            self.span.dim,
            ring,
            (0..self.dim()).map(|k| self.lift(k)).collect(),
        )
    }
}

/// Projection onto `k^ambient_dim / span(subspace_gens)`.
pub fn quotient_basis(ambient_dim: usize, subspace_gens: &CoeffMatrix) -> (CoeffMatrix, usize) {
    assert_eq!(subspace_gens.rows(), ambient_dim);
    let span =
        EchelonBasis::from_vectors(ambient_dim, subspace_gens.ring(), subspace_gens.columns());
    let q = span.quotient();
    let dim = q.dim();
    (q.projection_matrix(), dim)
}

/// Echelon basis that remembers each row as a combination of the inserted
/// vectors.
#[derive(Debug, Clone)]
struct TrackedEchelon {
    basis: EchelonBasis,
    combos: Vec<SparseVec>,
    inserted: usize,
}

impl TrackedEchelon {
    fn new(dim: usize, ring: CoeffRing) -> Self {
        TrackedEchelon {
            basis: EchelonBasis::new(dim, ring),
            combos: Vec::new(),
            inserted: 0,
        }
    }

    /// Remainder of `v` and the combination of inserted vectors removed.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut used: Vec<(usize, Coeff)> = Vec::new();
        let rem = self
            .basis
            .reduce_with(v.clone(), |r, c| used.push((r, c.clone())));
        if used.len() <= 8 {
            let sub = used.iter().fold(SparseVec::new(), |acc, (r, c)| {
                acc.add_scaled(&self.combos[*r], c)
            });
            return (rem, sub);
        }
        let mut acc = super::sparse::Accumulator::new(self.inserted);
        for (r, c) in &used {
            acc.add_scaled(&self.combos[*r], c);
        }
        (rem, acc.take())
    }

    /// Inserts the `t`-th vector; returns a kernel relation when dependent.
    fn insert(&mut self, t: usize, v: &SparseVec) -> Option<SparseVec> {
        let ring = self.basis.ring;
        self.inserted = self.inserted.max(t + 1);
        let (rem, sub) = self.reduce(v);
        let combo = SparseVec::unit(t, ring).sub(&sub);
        match rem.leading().cloned() {
            None => Some(combo),
            Some((_, lead)) => {
                let inv = lead.inv().expect("nonzero leading entry");
                self.combos.push(combo.scaled(&inv));
                self.basis.push_remainder(rem);
                None
            }
        }
    }
}

/// Basis of `{c : Σ c_j v_j = 0}` for vectors in `k^dim`.
pub fn kernel_of_columns(dim: usize, ring: CoeffRing, vectors: &[SparseVec]) -> Vec<SparseVec> {
    let mut tracked = TrackedEchelon::new(dim, ring);
    vectors
        .iter()
        .enumerate()
        .filter_map(|(t, v)| tracked.insert(t, v))
        .collect()
}

/// Solves for coordinates with respect to a fixed spanning family.
#[derive(Debug, Clone)]
pub struct SpanCoordinates {
    tracked: TrackedEchelon,
    count: usize,
}

impl SpanCoordinates {
    pub fn new(dim: usize, ring: CoeffRing, vectors: &[SparseVec]) -> Self {
        let mut tracked = TrackedEchelon::new(dim, ring);
        for (t, v) in vectors.iter().enumerate() {
            tracked.insert(t, v);
        }
        SpanCoordinates {
            tracked,
            count: vectors.len(),
        }
    }

    pub fn rank(&self) -> usize {
        self.tracked.basis.rank()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Some `c` with `Σ c_j v_j = v`, or `None` if `v` is outside the span.
    /// Unique when the family is independent.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, sub) = self.tracked.reduce(v);
        rem.is_zero().then_some(sub)
    }
}
