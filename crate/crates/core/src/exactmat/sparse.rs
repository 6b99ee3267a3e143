use super::coeff::{Coeff, CoeffRing};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec {
    entries: Vec<(usize, Coeff)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec {
            entries: Vec::new(),
        }
    }

    pub fn unit(i: usize, ring: CoeffRing) -> Self {
        SparseVec {
            entries: vec![(i, ring.one())],
        }
    }

    /// Builds from arbitrary `(index, value)` pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, Coeff)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Coeff)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc = &*acc + &c,
                _ => entries.push((i, c)),
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        SparseVec { entries }
    }

    /// Pairs must already be sorted with distinct indices.
    pub(crate) fn from_sorted(entries: Vec<(usize, Coeff)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        let entries = entries.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Coeff]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, ring: CoeffRing) -> Vec<Coeff> {
        let mut out = vec![ring.zero(); len];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Coeff)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Coeff)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<&(usize, Coeff)> {
        self.entries.first()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Option<&Coeff> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scaled(&self, c: &Coeff) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &SparseVec, c: &Coeff) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, &b[j].1 * c));
                j += 1;
            } else {
                let v = &a[i].1 + &(&b[j].1 * c);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.ring().one()),
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &-&c.ring().one()),
        }
    }

    /// Shifts every index by `offset`.
    pub fn offset(&self, offset: usize) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|(i, c)| (i + offset, c.clone()))
                .collect(),
        }
    }

    /// Reindexes through a monotone map; entries mapped to `None` are dropped.
    pub fn remap_monotone(&self, f: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter_map(|(i, c)| f(*i).map(|j| (j, c.clone())))
                .collect(),
        }
    }

    pub fn dot(&self, other: &SparseVec, ring: CoeffRing) -> Coeff {
        let mut acc = ring.zero();
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = &acc + &(&a[i].1 * &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Accumulates a linear combination of sparse vectors via a dense buffer.
/// `Σ_j coeffs_j · basis_j` in a space of dimension `dim`.
pub fn linear_combination(basis: &[SparseVec], coeffs: &SparseVec, dim: usize) -> SparseVec {
    let mut acc = Accumulator::new(dim);
    for (j, c) in coeffs.entries() {
        acc.add_scaled(&basis[*j], c);
    }
    acc.take()
}

pub(crate) struct Accumulator {
    buf: Vec<Option<Coeff>>,
    touched: Vec<usize>,
}

impl Accumulator {
    pub fn new(len: usize) -> Self {
        Accumulator {
            buf: vec![None; len],
            touched: Vec::new(),
        }
    }

    pub fn add_scaled(&mut self, v: &SparseVec, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v.entries() {
            let term = if c.is_one() { x.clone() } else { x * c };
            match &mut self.buf[*i] {
                Some(acc) => *acc = &*acc + &term,
                slot @ None => {
                    *slot = Some(term);
                    self.touched.push(*i);
                }
            }
        }
    }

    /// Drains the buffer into a sparse vector.
    pub fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut entries = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            if let Some(c) = self.buf[i].take() {
                if !c.is_zero() {
                    entries.push((i, c));
                }
            }
        }
        self.touched.clear();
        SparseVec { entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Coeff {
        CoeffRing::Rational.from_i64(v)
    }

    #[test]
    fn merge_cancels() {
        let a = SparseVec::from_pairs(vec![(0, q(1)), (3, q(2))]);
        let b = SparseVec::from_pairs(vec![(3, q(1)), (5, q(1))]);
        let c = a.add_scaled(&b, &q(-2));
        assert_eq!(c.entries(), &[(0, q(1)), (5, q(-2))]);
    }

    #[test]
    fn from_pairs_sums_duplicates() {
        let v = SparseVec::from_pairs(vec![(2, q(1)), (0, q(4)), (2, q(-1))]);
        assert_eq!(v.entries(), &[(0, q(4))]);
    }

    #[test]
    fn accumulator_matches_merge() {
        let a = SparseVec::from_pairs(vec![(0, q(1)), (3, q(2))]);
        let b = SparseVec::from_pairs(vec![(3, q(1)), (5, q(1))]);
        let mut acc = Accumulator::new(6);
        acc.add_scaled(&a, &q(1));
        acc.add_scaled(&b, &q(-2));
        assert_eq!(acc.take(), a.add_scaled(&b, &q(-2)));
    }
}
