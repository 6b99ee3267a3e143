//! The categories VI and VB over `F_q`: morphisms, coset canonicalization,
//! generators of `GL_n`, X-rank decompositions and unipotent radicals.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{primitive_root, FqMatrix};

/// An injective linear map `F^d → F^n`, stored as its `n × d` matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViMorphism {
    matrix: FqMatrix,
}

impl std::fmt::Debug for ViMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}→{} {:?}",
            self.source_dim(),
            self.target_dim(),
            self.matrix
        )
    }
}

impl ViMorphism {
    pub fn new(matrix: FqMatrix) -> Result<Self> {
        if matrix.rank() != matrix.cols() {
            return Err(Error::NotFullRank {
                rank: matrix.rank(),
                cols: matrix.cols(),
            });
        }
        Ok(ViMorphism { matrix })
    }

    pub(crate) fn new_unchecked(matrix: FqMatrix) -> Self {
        debug_assert_eq!(matrix.rank(), matrix.cols());
        ViMorphism { matrix }
    }

    pub fn identity(n: usize, q: u32) -> Self {
        ViMorphism {
            matrix: FqMatrix::identity(n, q),
        }
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> FqMatrix {
        self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn q(&self) -> u32 {
        self.matrix.modulus()
    }

    pub fn is_iso(&self) -> bool {
        self.source_dim() == self.target_dim()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ViMorphism) -> ViMorphism {
        ViMorphism {
            matrix: self.matrix.mul(&first.matrix),
        }
    }

    /// `1_X ⊕ self` on `X + (−)`, with `X` in the leading coordinates.
    pub fn shifted(&self, x_dim: usize) -> ViMorphism {
        ViMorphism {
            matrix: FqMatrix::identity(x_dim, self.q()).direct_sum(&self.matrix),
        }
    }

    /// Reduced column echelon representative of the coset `self · GL_d`,
    /// together with `σ` such that `self = canonical ∘ σ`.
    pub fn canonicalize(&self) -> (ViMorphism, FqMatrix) {
        let (c, t) = self
            .matrix
            .column_echelon_canonical()
            .expect("injections have full column rank");
        (ViMorphism { matrix: c }, t)
    }
}

/// The `m × n` matrix `[I_n; 0]`.
pub fn standard_inclusion(n: usize, m: usize, q: u32) -> Result<ViMorphism> {
    if n > m {
        return Err(Error::BadDims(format!(
            "no inclusion of dimension {n} into {m}"
        )));
    }
    let mut matrix = FqMatrix::zeros(m, n, q);
    for i in 0..n {
        matrix.set(i, i, 1);
    }
    Ok(ViMorphism { matrix })
}

/// The `m × n` matrix `[0; I_n]`: the inclusion of the last coordinates.
pub fn trailing_inclusion(n: usize, m: usize, q: u32) -> Result<ViMorphism> {
    if n > m {
        return Err(Error::BadDims(format!(
            "no inclusion of dimension {n} into {m}"
        )));
    }
    let mut matrix = FqMatrix::zeros(m, n, q);
    for i in 0..n {
        matrix.set(m - n + i, i, 1);
    }
    Ok(ViMorphism { matrix })
}

fn qpow(q: u32, e: usize) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// `|GL_d(F_q)|`.
pub fn gl_order(q: u32, d: usize) -> BigUint {
    let qd = qpow(q, d);
    (0..d).fold(BigUint::one(), |acc, i| acc * (&qd - qpow(q, i)))
}

/// `|Hom_VI(F^d, F^n)| = (q^n − 1)(q^n − q)⋯(q^n − q^{d−1})`.
pub fn injection_count(q: u32, d: usize, n: usize) -> BigUint {
    if d > n {
        return BigUint::zero();
    }
    let qn = qpow(q, n);
    (0..d).fold(BigUint::one(), |acc, i| acc * (&qn - qpow(q, i)))
}

/// Number of `d`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u32, n: usize, d: usize) -> BigUint {
    if d > n {
        return BigUint::zero();
    }
    injection_count(q, d, n) / gl_order(q, d)
}

pub(crate) fn to_count(n: &BigUint, what: &str, cap: u64) -> Result<usize> {
    match n.to_u64() {
        Some(v) if v <= cap => Ok(v as usize),
        _ => Err(Error::too_large(what, n, cap)),
    }
}

/// Every injection `F^d → F^n`, in lexicographic order of column vectors.
pub fn enumerate_injections(q: u32, d: usize, n: usize, cap: u64) -> Result<Vec<ViMorphism>> {
    if d > n {
        return Ok(Vec::new());
    }
    let count = to_count(&injection_count(q, d, n), "injections", cap)?;
    let vectors = all_vectors(q, n);
    let mut out = Vec::with_capacity(count);
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(d);
    extend_injections(q, n, d, &vectors, &mut cols, &mut out);
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn all_vectors(q: u32, n: usize) -> Vec<Vec<u32>> {
    let total = (q as usize).pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = (k % q as usize) as u32;
                k /= q as usize;
            }
            v
        })
        .collect()
}

fn extend_injections(
    q: u32,
    n: usize,
    d: usize,
    vectors: &[Vec<u32>],
    cols: &mut Vec<Vec<u32>>,
    out: &mut Vec<ViMorphism>,
) {
    if cols.len() == d {
        out.push(ViMorphism {
            matrix: FqMatrix::from_cols(cols, n, q),
        });
        return;
    }
    for v in vectors {
        cols.push(v.clone());
        if FqMatrix::from_cols(cols, n, q).rank() == cols.len() {
            extend_injections(q, n, d, vectors, cols, out);
        }
        cols.pop();
    }
}

/// One reduced column echelon representative per right `GL_d`-orbit of
/// injections `F^d → F^n`: pivot rows in lexicographic order, then free
/// entries by odometer.
pub fn coset_representatives(q: u32, d: usize, n: usize, cap: u64) -> Result<Vec<ViMorphism>> {
    if d > n {
        return Ok(Vec::new());
    }
    let count = to_count(&gaussian_binomial(q, n, d), "coset representatives", cap)?;
    let mut out = Vec::with_capacity(count);
    let mut pivots = Vec::with_capacity(d);
    pivot_sets(n, d, 0, &mut pivots, &mut |p| {
        // free slots: (row, col) with row > p[col] and row not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|j| {
                ((p[j] + 1)..n)
                    .filter(|r| !p.contains(r))
                    .map(move |r| (r, j))
            })
            .collect();
        let mut values = vec![0u32; free.len()];
        loop {
            let mut m = FqMatrix::zeros(n, d, q);
            for (j, &r) in p.iter().enumerate() {
                m.set(r, j, 1);
            }
            for (&(r, j), &v) in free.iter().zip(&values) {
                m.set(r, j, v);
            }
            out.push(ViMorphism { matrix: m });
            // odometer, last slot fastest
            let mut k = free.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                values[k] += 1;
                if values[k] < q {
                    break;
                }
                values[k] = 0;
            }
        }
    });
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn pivot_sets(
    n: usize,
    d: usize,
    start: usize,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if cur.len() == d {
        f(cur);
        return;
    }
    for r in start..n {
        cur.push(r);
        pivot_sets(n, d, r + 1, cur, f);
        cur.pop();
    }
}

/// `f = τ^X(h) ∘ g` with `g: F^d → X + F^k`, `h: F^k → Z` canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XRankDecomposition {
    pub x_dim: usize,
    pub k: usize,
    pub g: ViMorphism,
    pub h: ViMorphism,
}

/// `dim((X + im f)/X)` where `X` is spanned by the first `x_dim` coordinates.
pub fn x_rank(f: &ViMorphism, x_dim: usize) -> usize {
    let n = f.target_dim();
    assert!(x_dim <= n);
    let z_rows: Vec<usize> = (x_dim..n).collect();
    f.matrix.select_rows(&z_rows).rank()
}

pub fn xk_decompose(f: &ViMorphism, x_dim: usize) -> XRankDecomposition {
    let q = f.q();
    let n = f.target_dim();
    let d = f.source_dim();
    let z = n - x_dim;
    let fz = f.matrix.select_rows(&(x_dim..n).collect::<Vec<_>>());
    // independent columns of f_Z span its image
    let basis_cols = fz.transpose().echelon_pivot_rows();
    let k = basis_cols.len();
    let span = FqMatrix::from_cols(
        &basis_cols.iter().map(|&c| fz.col(c)).collect::<Vec<_>>(),
        z,
        q,
    );
    let h = if k == 0 {
        FqMatrix::zeros(z, 0, q)
    } else {
        span.column_echelon_canonical()
            .expect("independent columns")
            .0
    };
    let h_pivots = if k == 0 {
        Vec::new()
    } else {
        h.echelon_pivot_rows()
    };
    let c = fz.select_rows(&h_pivots);
    let fx = f.matrix.select_rows(&(0..x_dim).collect::<Vec<_>>());
    let mut g = FqMatrix::zeros(x_dim + k, d, q);
    for j in 0..d {
        for i in 0..x_dim {
            g.set(i, j, fx.get(i, j));
        }
        for i in 0..k {
            g.set(x_dim + i, j, c.get(i, j));
        }
    }
    XRankDecomposition {
        x_dim,
        k,
        g: ViMorphism::new_unchecked(g),
        h: ViMorphism::new_unchecked(h),
    }
}

impl XRankDecomposition {
    /// `τ^X(h) ∘ g`.
    pub fn recompose(&self) -> ViMorphism {
        self.h.shifted(self.x_dim).after(&self.g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlGenerators {
    pub n: usize,
    pub gens: Vec<FqMatrix>,
}

/// `diag(γ,1,…,1)`, the cycle `e_i ↦ e_{i+1}`, and `I + E_12`, with
/// identities dropped.
pub fn gl_generators(q: u32, n: usize) -> GlGenerators {
    let mut gens = Vec::new();
    if n >= 1 && q > 2 {
        let mut d = FqMatrix::identity(n, q);
        d.set(0, 0, primitive_root(q));
        gens.push(d);
    }
    if n >= 2 {
        let mut c = FqMatrix::zeros(n, n, q);
        for i in 0..n {
            c.set((i + 1) % n, i, 1);
        }
        gens.push(c);
        let mut t = FqMatrix::identity(n, q);
        t.set(0, 1, 1);
        gens.push(t);
    }
    GlGenerators { n, gens }
}

/// Breadth-first closure of a generating set: every element of the
/// generated group, with `table[i][s]` the index of `gens[s] · elements[i]`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    pub elements: Vec<FqMatrix>,
    pub index: HashMap<FqMatrix, usize>,
    /// `(parent, generator)` with `elements[i] = gens[generator] · elements[parent]`.
    pub parent: Vec<Option<(usize, usize)>>,
    pub table: Vec<Vec<usize>>,
}

pub fn enumerate_group(gens: &[FqMatrix], n: usize, q: u32, cap: u64) -> Result<GroupTable> {
    let id = FqMatrix::identity(n, q);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    let mut parent = vec![None];
    let mut table: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, g) in gens.iter().enumerate() {
            let prod = g.mul(&elements[i]);
            let j = match index.get(&prod) {
                Some(&j) => j,
                None => {
                    if elements.len() as u64 >= cap {
                        return Err(Error::too_large("group elements", format!("> {cap}"), cap));
                    }
                    let j = elements.len();
                    index.insert(prod.clone(), j);
                    elements.push(prod);
                    parent.push(Some((i, s)));
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        if table.len() <= i {
            table.resize(i + 1, Vec::new());
        }
        table[i] = row;
    }
    Ok(GroupTable {
        elements,
        index,
        parent,
        table,
    })
}

/// `U_X(F^n)` for `dim X = 1`: the maps `x ↦ x + z`, `z ∈ F^n`, fixing
/// `F^n` pointwise. As `(1+n) × (1+n)` matrices `[[1, 0], [z, I_n]]`.
#[derive(Debug, Clone)]
pub struct UnipotentGroup {
    pub z_dim: usize,
    pub elements: Vec<FqMatrix>,
}

pub fn unipotent_element(q: u32, z: &[u32]) -> FqMatrix {
    let n = z.len();
    let mut m = FqMatrix::identity(1 + n, q);
    for (j, &v) in z.iter().enumerate() {
        m.set(1 + j, 0, v);
    }
    m
}

/// Generators `x ↦ x + e_j` of `U_X(F^n)`.
pub fn unipotent_generators(q: u32, n: usize) -> Vec<FqMatrix> {
    (0..n)
        .map(|j| {
            let mut z = vec![0; n];
            z[j] = 1;
            unipotent_element(q, &z)
        })
        .collect()
}

pub fn unipotent_group(q: u32, n: usize, cap: u64) -> Result<UnipotentGroup> {
    to_count(&qpow(q, n), "unipotent elements", cap)?;
    Ok(UnipotentGroup {
        z_dim: n,
        elements: all_vectors(q, n)
            .iter()
            .map(|z| unipotent_element(q, z))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1_000_000;

    #[test]
    fn injection_counts() {
        assert_eq!(enumerate_injections(2, 0, 3, CAP).unwrap().len(), 1);
        // brute force: all 3x2 matrices over F_2 of rank 2
        let brute = (0..64u32)
            .filter(|bits| {
                let m = FqMatrix::from_rows(
                    &(0..3)
                        .map(|r| (0..2).map(|c| ((bits >> (2 * r + c)) & 1) as i64).collect())
                        .collect::<Vec<_>>(),
                    2,
                );
                m.rank() == 2
            })
            .count();
        assert_eq!(brute, 42);
        assert_eq!(enumerate_injections(2, 2, 3, CAP).unwrap().len(), brute);
        assert_eq!(enumerate_injections(3, 1, 2, CAP).unwrap().len(), 8);
        assert!(enumerate_injections(2, 3, 2, CAP).unwrap().is_empty());
        assert!(matches!(
            enumerate_injections(2, 3, 4, 10),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn coset_counts() {
        assert_eq!(coset_representatives(2, 2, 3, CAP).unwrap().len(), 7);
        assert_eq!(coset_representatives(2, 2, 4, CAP).unwrap().len(), 35);
        let reps = coset_representatives(3, 2, 2, CAP).unwrap();
        assert_eq!(reps, vec![ViMorphism::identity(2, 3)]);
        for r in coset_representatives(3, 2, 4, CAP).unwrap() {
            assert!(r.matrix().is_column_echelon());
        }
    }

    #[test]
    fn subspace_count_oracle() {
        // distinct column spans among all injections
        let spans: std::collections::HashSet<_> = enumerate_injections(2, 2, 3, CAP)
            .unwrap()
            .iter()
            .map(|f| f.canonicalize().0)
            .collect();
        assert_eq!(spans.len(), 7);
    }

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 5, 0), BigUint::from(1u32));
        assert_eq!(gaussian_binomial(2, 3, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(3, 2, 1), BigUint::from(4u32));
        assert_eq!(gaussian_binomial(2, 4, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(2, 1, 2), BigUint::zero());
    }

    #[test]
    fn x_rank_examples() {
        let q = 2;
        let inside = ViMorphism::new(FqMatrix::from_cols(&[vec![1, 0, 0]], 3, q)).unwrap();
        assert_eq!(x_rank(&inside, 1), 0);
        let missing = standard_inclusion(2, 2, q).unwrap().shifted(1);
        let f = missing.after(&trailing_inclusion(2, 3, q).unwrap());
        assert_eq!(x_rank(&f, 1), 2);
        let g =
            ViMorphism::new(FqMatrix::from_cols(&[vec![1, 1, 0], vec![0, 0, 1]], 3, q)).unwrap();
        assert_eq!(x_rank(&g, 1), 2);
    }

    #[test]
    fn decomposition_reconstructs_all() {
        for f in enumerate_injections(2, 2, 3, CAP).unwrap() {
            let dec = xk_decompose(&f, 1);
            assert_eq!(dec.k, x_rank(&f, 1));
            assert_eq!(dec.recompose(), f);
            assert!(dec.k == 0 || dec.h.matrix().is_column_echelon());
        }
        let inside = ViMorphism::new(FqMatrix::from_cols(&[vec![1, 0, 0]], 3, 2)).unwrap();
        let dec = xk_decompose(&inside, 1);
        assert_eq!(dec.k, 0);
        assert_eq!(dec.h.source_dim(), 0);
    }

    #[test]
    fn decompositions_differ_by_unique_sigma() {
        let q = 3;
        for f in enumerate_injections(q, 2, 3, CAP).unwrap() {
            let dec = xk_decompose(&f, 1);
            if dec.k == 0 {
                continue;
            }
            let gens = gl_generators(q, dec.k);
            let group = enumerate_group(&gens.gens, dec.k, q, CAP).unwrap();
            let mut matches = 0;
            for sigma in &group.elements {
                // (g', h') = ((1⊕σ)g, hσ^{-1}) is another decomposition
                let h2 = dec.h.matrix().mul(&sigma.inverse().unwrap());
                let g2 = FqMatrix::identity(1, q)
                    .direct_sum(sigma)
                    .mul(dec.g.matrix());
                let f2 = FqMatrix::identity(1, q).direct_sum(&h2).mul(&g2);
                assert_eq!(&f2, f.matrix());
                if h2 == *dec.h.matrix() {
                    matches += 1;
                }
            }
            assert_eq!(matches, 1);
        }
    }

    #[test]
    fn generators_generate() {
        assert!(gl_generators(2, 0).gens.is_empty());
        assert!(gl_generators(2, 1).gens.is_empty());
        assert_eq!(gl_generators(3, 1).gens.len(), 1);
        let g = gl_generators(2, 3);
        assert_eq!(
            enumerate_group(&g.gens, 3, 2, CAP).unwrap().elements.len(),
            168
        );
        for (q, n) in [(2u32, 2usize), (3, 2), (5, 2), (3, 3), (2, 4), (7, 2)] {
            let g = gl_generators(q, n);
            let size = enumerate_group(&g.gens, n, q, CAP).unwrap().elements.len();
            assert_eq!(BigUint::from(size), gl_order(q, n), "q={q} n={n}");
        }
    }

    #[test]
    fn unipotent_examples() {
        assert_eq!(unipotent_group(2, 0, CAP).unwrap().elements.len(), 1);
        let u = unipotent_group(2, 3, CAP).unwrap();
        assert_eq!(u.elements.len(), 8);
        let set: std::collections::HashSet<_> = u.elements.iter().cloned().collect();
        for a in &u.elements {
            for b in &u.elements {
                assert!(set.contains(&a.mul(b)));
            }
            // fixes the Z coordinates, moves X only by Z
            for j in 1..4 {
                assert_eq!(a.col(j), FqMatrix::identity(4, 2).col(j));
            }
            assert_eq!(a.get(0, 0), 1);
        }
        let gens = unipotent_generators(3, 2);
        assert_eq!(enumerate_group(&gens, 3, 3, CAP).unwrap().elements.len(), 9);
    }

    #[test]
    fn inclusions_compose() {
        let a = standard_inclusion(3, 4, 2).unwrap();
        let b = standard_inclusion(2, 3, 2).unwrap();
        assert_eq!(a.after(&b), standard_inclusion(2, 4, 2).unwrap());
        assert_eq!(
            standard_inclusion(3, 3, 2).unwrap(),
            ViMorphism::identity(3, 2)
        );
        assert_eq!(standard_inclusion(0, 3, 2).unwrap().source_dim(), 0);
        assert!(standard_inclusion(3, 2, 2).is_err());
    }
}
