//! Finitely presented VI-modules `I(W) → I(V) → M → 0`.

use std::collections::{BTreeMap, HashMap};

use crate::context::ViContext;
use crate::error::{Error, Result};
use crate::exactmat::{CoeffMatrix, EchelonBasis, FqMatrix, SparseVec};
use crate::vbmod::VBModule;
use crate::vicat::ViMorphism;

use super::induced::InducedModule;
use super::truncated::TruncatedViModule;

#[derive(Debug, Clone)]
pub struct PresentedViModule {
    v: VBModule,
    w: VBModule,
    rel_maps: BTreeMap<usize, CoeffMatrix>,
    name: String,
}

impl PresentedViModule {
    /// Validates shapes and `GL_e`-equivariance of every relation map.
    pub fn new(v: VBModule, w: VBModule, rel_maps: BTreeMap<usize, CoeffMatrix>) -> Result<Self> {
        v.ctx().check_same(w.ctx())?;
        let induced = InducedModule::new(v.clone());
        for (e, rep) in w.components() {
            let map = rel_maps
                .get(&e)
                .ok_or_else(|| Error::BadDims(format!("missing relation map in degree {e}")))?;
            let target = induced.dim(e)?;
            if map.rows() != target || map.cols() != rep.dim() {
                return Err(Error::BadDims(format!(
                    "relation map in degree {e} is {}x{}, expected {target}x{}",
                    map.rows(),
                    map.cols(),
                    rep.dim()
                )));
            }
            let gens = v.ctx().gl_generators(e);
            for (s, (g, wg)) in gens.iter().zip(rep.generator_actions()?).enumerate() {
                let ig = induced.induced_map(&ViMorphism::new_unchecked(g.clone()))?;
                if map.mul(&wg) != ig.mul(map) {
                    return Err(Error::EquivarianceViolation {
                        degree: e,
                        generator: s,
                    });
                }
            }
        }
        if let Some(e) = rel_maps.keys().find(|e| w.component(**e).is_none()) {
            return Err(Error::BadDims(format!(
                "relation map in degree {e} has no relation module"
            )));
        }
        Ok(PresentedViModule {
            v,
            w,
            rel_maps,
            name: String::from("M"),
        })
    }

    /// `I(V)` with no relations.
    pub fn free(v: VBModule) -> Self {
        let w = VBModule::zero(v.ctx());
        PresentedViModule {
            v,
            w,
            rel_maps: BTreeMap::new(),
            name: String::from("I(V)"),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ctx(&self) -> &ViContext {
        self.v.ctx()
    }

    pub fn generators(&self) -> &VBModule {
        &self.v
    }

    pub fn relations(&self) -> &VBModule {
        &self.w
    }

    pub fn rel_map(&self, e: usize) -> Option<&CoeffMatrix> {
        self.rel_maps.get(&e)
    }

    pub fn induced(&self) -> InducedModule {
        InducedModule::new(self.v.clone())
    }

    /// Bound on the generation degree: `deg V`.
    pub fn t0_bound(&self) -> i64 {
        self.v.degree()
    }

    /// Bound on the relation degree: `deg W`.
    pub fn t1_bound(&self) -> i64 {
        self.w.degree()
    }

    /// `I(V)` truncated to `0..=d`.
    pub fn free_truncate(&self, d: usize) -> Result<TruncatedViModule> {
        TruncatedViModule::induced(&self.induced(), d)
    }

    /// Image of `I(W) → I(V)` in each degree `≤ d`.
    pub fn relation_spans(&self, free: &TruncatedViModule) -> Vec<EchelonBasis> {
        let gens: Vec<Vec<SparseVec>> = (0..=free.max_degree())
            .map(|e| {
                self.rel_maps
                    .get(&e)
                    .map(|m| m.columns().to_vec())
                    .unwrap_or_default()
            })
            .collect();
        free.generated_submodule(&gens)
    }

    /// `M` on the window `0..=d`, as the quotient of `I(V)` by the relations.
    pub fn truncate(&self, d: usize) -> Result<TruncatedViModule> {
        let free = self.free_truncate(d)?;
        let spans = self.relation_spans(&free);
        free.quotient(spans, self.name.clone())
    }

    /// Presentation of `M ⊕ N`, generators and relations placed blockwise.
    pub fn direct_sum(&self, other: &PresentedViModule) -> Result<Self> {
        let v = self.v.direct_sum(&other.v)?;
        let w = self.w.direct_sum(&other.w)?;
        let total = InducedModule::new(v.clone());
        let mut rel_maps = BTreeMap::new();
        for e in w.components().map(|(e, _)| e).collect::<Vec<_>>() {
            let rows = total.dim(e)?;
            let mut cols = Vec::new();
            for (part, shift_of) in [(self, None), (other, Some(self))] {
                let Some(map) = part.rel_maps.get(&e) else {
                    continue;
                };
                let embed = block_embedding(&part.v, &total, e, |d| {
                    shift_of.map_or(0, |first| first.v.dim(d))
                })?;
                cols.extend(map.columns().iter().map(|c| {
                    SparseVec::from_pairs(
                        c.entries()
                            .iter()
                            .map(|(i, x)| (embed[*i], x.clone()))
                            .collect(),
                    )
                }));
            }
            rel_maps.insert(e, CoeffMatrix::from_columns(rows, self.ctx().ring(), cols));
        }
        let name = format!("{} ⊕ {}", self.name, other.name);
        Ok(Self::new(v, w, rel_maps)?.named(name))
    }
}

/// Position in `I(V ⊕ V')(F^n)` of each basis element of `I(V)(F^n)`, where
/// `shift(d)` is the offset of `V_d` inside `(V ⊕ V')_d`.
fn block_embedding(
    part: &VBModule,
    total: &InducedModule,
    n: usize,
    shift: impl Fn(usize) -> usize,
) -> Result<Vec<usize>> {
    let (_, basis) = total.eval(n)?;
    let index: HashMap<(FqMatrix, usize), usize> = basis
        .into_iter()
        .enumerate()
        .map(|(i, b)| ((b.rep.into_matrix(), b.v_index), i))
        .collect();
    let (_, part_basis) = InducedModule::new(part.clone()).eval(n)?;
    Ok(part_basis
        .into_iter()
        .map(|b| {
            let d = b.rep.source_dim();
            index[&(b.rep.into_matrix(), b.v_index + shift(d))]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vbmod::GlRep;

    fn k0(ctx: &ViContext) -> PresentedViModule {
        let v = VBModule::single(GlRep::trivial(ctx, 0));
        let w = VBModule::single(GlRep::trivial(ctx, 1));
        let map = CoeffMatrix::from_i64_rows(&[vec![1]], ctx.ring());
        PresentedViModule::new(v, w, BTreeMap::from([(1, map)])).unwrap()
    }

    #[test]
    fn residue_field_dims() {
        let c2 = ViContext::rational(2).unwrap();
        assert_eq!(k0(&c2).truncate(4).unwrap().dims(), &[1, 0, 0, 0, 0]);
    }

    #[test]
    fn free_module_dims() {
        let c2 = ViContext::rational(2).unwrap();
        let a = PresentedViModule::free(VBModule::single(GlRep::trivial(&c2, 0)));
        assert_eq!(a.truncate(3).unwrap().dims(), &[1, 1, 1, 1]);
        let i1 = PresentedViModule::free(VBModule::single(GlRep::trivial(&c2, 1)));
        assert_eq!(i1.truncate(4).unwrap().dims(), &[0, 1, 3, 7, 15]);
    }

    #[test]
    fn non_equivariant_relation_rejected() {
        let c3 = ViContext::rational(3).unwrap();
        let v = VBModule::single(GlRep::trivial(&c3, 1));
        let w = VBModule::single(GlRep::trivial(&c3, 1));
        // a single line is not GL_2-invariant
        let w2 = VBModule::single(GlRep::trivial(&c3, 2));
        let bad = CoeffMatrix::from_i64_rows(&[vec![1], vec![0], vec![0], vec![0]], c3.ring());
        let err = PresentedViModule::new(v.clone(), w2, BTreeMap::from([(2, bad)])).unwrap_err();
        assert!(matches!(
            err,
            Error::EquivarianceViolation { degree: 2, .. }
        ));
        let ok = CoeffMatrix::from_i64_rows(&[vec![2]], c3.ring());
        assert!(PresentedViModule::new(v, w, BTreeMap::from([(1, ok)])).is_ok());
    }

    #[test]
    fn direct_sum_of_presentations() {
        let c2 = ViContext::rational(2).unwrap();
        let i1 = PresentedViModule::free(VBModule::single(GlRep::trivial(&c2, 1)));
        let sum = i1.direct_sum(&k0(&c2)).unwrap();
        assert_eq!(sum.truncate(3).unwrap().dims(), &[1, 1, 3, 7]);
        let other = k0(&c2).direct_sum(&k0(&c2)).unwrap();
        assert_eq!(other.truncate(2).unwrap().dims(), &[2, 0, 0]);
    }
}
