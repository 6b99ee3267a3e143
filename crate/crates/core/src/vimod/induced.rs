//! Induced modules `I(V) = ⊕_d k[Hom_VI(F^d, −)] ⊗_{k[GL_d]} V_d`.
//!
//! The basis of `I(V)(F^n)` is ordered by `d` ascending, then canonical coset
//! representative `g: F^d → F^n`, then basis index of `V_d`.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::context::ViContext;
use crate::error::Result;
use crate::exactmat::sparse::Accumulator;
use crate::exactmat::{CoeffMatrix, FqMatrix, SparseVec};
use crate::vbmod::VBModule;
use crate::vicat::{gaussian_binomial, to_count, ViMorphism};

#[derive(Debug, Clone)]
pub struct InducedModule {
    v: VBModule,
}

/// Basis element `(coset representative, basis index of V_d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedBasisElement {
    pub rep: ViMorphism,
    pub v_index: usize,
}

impl InducedModule {
    pub fn new(v: VBModule) -> Self {
        InducedModule { v }
    }

    pub fn vb(&self) -> &VBModule {
        &self.v
    }

    pub fn ctx(&self) -> &ViContext {
        self.v.ctx()
    }

    /// `Σ_d [n choose d]_q · dim V_d`, exactly.
    pub fn dim_formula(&self, n: usize) -> BigUint {
        self.v
            .components()
            .map(|(d, r)| gaussian_binomial(self.ctx().q(), n, d) * BigUint::from(r.dim()))
            .sum()
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        to_count(
            &self.dim_formula(n),
            "induced module basis",
            self.ctx().enumeration_cap(),
        )
    }

    /// Offset of the degree-`d` block inside `I(V)(F^n)`.
    fn offsets(&self, n: usize) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (d, r) in self.v.components() {
            if d > n {
                break;
            }
            out.push((d, offset));
            offset += self.ctx().cosets(d, n)?.len() * r.dim();
        }
        Ok(out)
    }

    /// Dimension and explicit basis of `I(V)(F^n)`.
    pub fn eval(&self, n: usize) -> Result<(usize, Vec<InducedBasisElement>)> {
        let dim = self.dim(n)?;
        let mut basis = Vec::with_capacity(dim);
        for (d, r) in self.v.components() {
            if d > n {
                break;
            }
            for rep in &self.ctx().cosets(d, n)?.reps {
                for v_index in 0..r.dim() {
                    basis.push(InducedBasisElement {
                        rep: rep.clone(),
                        v_index,
                    });
                }
            }
        }
        debug_assert_eq!(basis.len(), dim);
        Ok((dim, basis))
    }

    /// `f_⋆` applied to vectors of `I(V)(F^n)`; `f·(g, v) = (canon(f∘g), ρ(σ)v)`.
    pub fn apply(&self, f: &ViMorphism, vecs: &[SparseVec]) -> Result<Vec<SparseVec>> {
        let n = f.source_dim();
        let m = f.target_dim();
        let src = self.offsets(n)?;
        let dst = self.offsets(m)?;
        let target_dim = self.dim(m)?;
        let mut image_cache: HashMap<usize, SparseVec> = HashMap::new();
        let mut rho: HashMap<(usize, FqMatrix), CoeffMatrix> = HashMap::new();
        let mut out = Vec::with_capacity(vecs.len());
        for v in vecs {
            let mut acc = Accumulator::new(target_dim);
            for (idx, c) in v.entries() {
                if !image_cache.contains_key(idx) {
                    let img = self.basis_image(f, *idx, &src, &dst, &mut rho)?;
                    image_cache.insert(*idx, img);
                }
                acc.add_scaled(&image_cache[idx], c);
            }
            out.push(acc.take());
        }
        Ok(out)
    }

    fn basis_image(
        &self,
        f: &ViMorphism,
        idx: usize,
        src: &[(usize, usize)],
        dst: &[(usize, usize)],
        rho: &mut HashMap<(usize, FqMatrix), CoeffMatrix>,
    ) -> Result<SparseVec> {
        let n = f.source_dim();
        let m = f.target_dim();
        let block = src.partition_point(|(_, off)| *off <= idx) - 1;
        let (d, off) = src[block];
        let rep = self.v.component(d).expect("supported degree");
        let dim_v = rep.dim();
        let local = idx - off;
        let (c, i) = (local / dim_v, local % dim_v);
        let cosets_n = self.ctx().cosets(d, n)?;
        let composite = f.after(&cosets_n.reps[c]);
        let (canon, sigma) = composite.canonicalize();
        let c2 = self.ctx().cosets(d, m)?.position(&canon);
        let key = (d, sigma);
        if !rho.contains_key(&key) {
            let mat = rep.act(&key.1)?;
            rho.insert(key.clone(), mat);
        }
        let col = rho[&key].col(i);
        let off2 = dst[block].1;
        debug_assert_eq!(dst[block].0, d);
        Ok(col.offset(off2 + c2 * dim_v))
    }

    /// Matrix of `f_⋆ : I(V)(F^n) → I(V)(F^m)`.
    pub fn induced_map(&self, f: &ViMorphism) -> Result<CoeffMatrix> {
        let n = f.source_dim();
        let ring = self.ctx().ring();
        let units: Vec<SparseVec> = (0..self.dim(n)?)
            .map(|i| SparseVec::unit(i, ring))
            .collect();
        let cols = self.apply(f, &units)?;
        Ok(CoeffMatrix::from_columns(
            self.dim(f.target_dim())?,
            ring,
            cols,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbmod::GlRep;
    use crate::vicat::{enumerate_injections, standard_inclusion};

    fn triv(ctx: &ViContext, d: usize) -> InducedModule {
        InducedModule::new(VBModule::single(GlRep::trivial(ctx, d)))
    }

    #[test]
    fn dimension_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let c3 = ViContext::rational(3).unwrap();
        for n in 0..5 {
            assert_eq!(triv(&c2, 0).dim(n).unwrap(), 1);
        }
        let i2 = triv(&c2, 2);
        assert_eq!(i2.dim(4).unwrap(), 35);
        assert_eq!(i2.eval(4).unwrap().1.len(), 35);
        let reg = InducedModule::new(VBModule::single(GlRep::regular(&c3, 1).unwrap()));
        assert_eq!(reg.dim(2).unwrap(), 8);
    }

    #[test]
    fn identity_acts_trivially() {
        let c3 = ViContext::rational(3).unwrap();
        let reg = InducedModule::new(VBModule::single(GlRep::regular(&c3, 1).unwrap()));
        assert!(reg
            .induced_map(&ViMorphism::identity(2, 3))
            .unwrap()
            .is_identity());
    }

    #[test]
    fn inclusion_of_a_line() {
        let c2 = ViContext::rational(2).unwrap();
        let i1 = triv(&c2, 1);
        let m = i1
            .induced_map(&standard_inclusion(1, 2, 2).unwrap())
            .unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 1));
        // the line spanned by e_0 inside F^2
        let reps = &c2.cosets(1, 2).unwrap().reps;
        let target = reps
            .iter()
            .position(|r| r.matrix().col(0) == vec![1, 0])
            .unwrap();
        assert_eq!(m.col(0), &SparseVec::unit(target, c2.ring()));
    }

    #[test]
    fn functoriality_exhaustive_small() {
        let c2 = ViContext::rational(2).unwrap();
        let v = VBModule::new(
            &c2,
            [
                GlRep::regular(&c2, 2).unwrap(),
                GlRep::trivial(&c2, 1),
                GlRep::trivial(&c2, 0),
            ],
        )
        .unwrap();
        let module = InducedModule::new(v);
        let fs = enumerate_injections(2, 2, 3, 1000).unwrap();
        let gs = enumerate_injections(2, 3, 3, 1000).unwrap();
        for f in fs.iter().step_by(5) {
            let mf = module.induced_map(f).unwrap();
            for g in gs.iter().step_by(7) {
                let lhs = module.induced_map(&g.after(f)).unwrap();
                let rhs = module.induced_map(g).unwrap().mul(&mf);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
