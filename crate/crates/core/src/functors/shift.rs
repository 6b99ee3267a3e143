//! `Σ^X`, `Σ̄`, and the kernel and cokernel of the natural map `M → Σ̄M`.
//!
//! The shifted coordinate `X` is coordinate 0; iterating `Σ̄` puts each new
//! one-dimensional summand after the earlier ones.

use crate::error::{Error, Result};
use crate::exactmat::{CoeffMatrix, EchelonBasis, SparseVec};
use crate::vicat::{unipotent_generators, ViMorphism};
use crate::vimod::{ModuleMap, TruncatedViModule};

/// `(Σ^X M)_n = M_{x+n}` with `GL_n` acting through `1_X ⊕ g`.
pub fn sigma_shift(m: &TruncatedViModule, x: usize) -> Result<TruncatedViModule> {
    m.shift(x)
}

/// `(Σ̄M)_n = M_{1+n}` modulo `(u − 1)M_{1+n}` for `u ∈ U_X(F^n)`.
pub fn bar_sigma(m: &TruncatedViModule) -> Result<TruncatedViModule> {
    if m.max_degree() < 1 {
        return Err(Error::WindowTooSmall(
            "Σ̄ needs a window of at least 1".into(),
        ));
    }
    let ring = m.ctx().ring();
    let shifted = m.shift(1)?;
    let mut spans = Vec::with_capacity(shifted.max_degree() + 1);
    for n in 0..=shifted.max_degree() {
        let dim = m.dim(1 + n);
        let mut span = EchelonBasis::new(dim, ring);
        for u in unipotent_generators(m.ctx().q(), n) {
            if span.is_full() {
                break;
            }
            let act = m.act(&ViMorphism::new(u)?)?;
            for j in 0..dim {
                span.insert(act.col(j).sub(&SparseVec::unit(j, ring)));
            }
        }
        spans.push(span);
    }
    shifted.quotient(spans, format!("Σ̄({})", m.label()))
}

pub fn bar_sigma_iter(m: &TruncatedViModule, y: usize) -> Result<TruncatedViModule> {
    let mut out = m.clone();
    for _ in 0..y {
        out = bar_sigma(&out)?;
    }
    Ok(out)
}

/// The natural map `η: M → Σ̄M` induced by `Z ↪ X + Z`.
pub fn eta(m: &TruncatedViModule) -> Result<ModuleMap> {
    let target = bar_sigma(m)?;
    eta_into(m, &target)
}

/// `η` with a precomputed `Σ̄M`.
pub fn eta_into(m: &TruncatedViModule, target: &TruncatedViModule) -> Result<ModuleMap> {
    let comps = (0..=target.max_degree())
        .map(|n| {
            let proj = target.projection(n).expect("Σ̄M is a quotient");
            let incl = m.trailing_map(1, n)?;
            Ok(CoeffMatrix::from_columns(
                proj.dim(),
                m.ctx().ring(),
                incl.columns().iter().map(|c| proj.project(c)).collect(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::new(&m.restrict(target.max_degree())?, target, comps)
}

/// `M → Σ̄^y M`, the composite of `η`s; the identity for `y = 0`.
pub fn eta_iter(m: &TruncatedViModule, y: usize) -> Result<(TruncatedViModule, ModuleMap)> {
    let mut module = m.clone();
    let mut map = ModuleMap::identity(m);
    for _ in 0..y {
        let next = bar_sigma(&module)?;
        let step = eta_into(&module, &next)?;
        map = map.then(&step);
        map.target = next.clone();
        module = next;
    }
    Ok((module, map))
}

/// `κM = ker(M → Σ̄M)`.
pub fn kappa(m: &TruncatedViModule) -> Result<TruncatedViModule> {
    eta(m)?.kernel()
}

/// `Δ̄M = coker(M → Σ̄M)`.
pub fn bar_delta(m: &TruncatedViModule) -> Result<TruncatedViModule> {
    eta(m)?.cokernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ViContext;
    use crate::vbmod::{GlRep, VBModule};
    use crate::vimod::homology::t0;
    use crate::vimod::PresentedViModule;
    use std::collections::BTreeMap;

    fn free(rep: GlRep, d: usize) -> TruncatedViModule {
        PresentedViModule::free(VBModule::single(rep))
            .truncate(d)
            .unwrap()
    }

    fn k0(ctx: &ViContext) -> PresentedViModule {
        let v = VBModule::single(GlRep::trivial(ctx, 0));
        let w = VBModule::single(GlRep::trivial(ctx, 1));
        let map = CoeffMatrix::from_i64_rows(&[vec![1]], ctx.ring());
        PresentedViModule::new(v, w, BTreeMap::from([(1, map)])).unwrap()
    }

    #[test]
    fn shift_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let a = free(GlRep::trivial(&c2, 0), 4);
        assert_eq!(sigma_shift(&a, 1).unwrap().dims(), &[1, 1, 1, 1]);
        let i1 = free(GlRep::trivial(&c2, 1), 4);
        assert_eq!(sigma_shift(&i1, 1).unwrap().dims(), &[1, 3, 7, 15]);
        assert_eq!(sigma_shift(&i1, 0).unwrap().dims(), i1.dims());
    }

    #[test]
    fn bar_sigma_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let a = free(GlRep::trivial(&c2, 0), 3);
        assert_eq!(bar_sigma(&a).unwrap().dims(), &[1, 1, 1]);
        let c3 = ViContext::rational(3).unwrap();
        let reg = free(GlRep::regular(&c3, 1).unwrap(), 2);
        assert_eq!(bar_sigma(&reg).unwrap().dim(1), 4);
        let k = k0(&c2).truncate(3).unwrap();
        assert!(bar_sigma(&k).unwrap().is_zero());
    }

    #[test]
    fn difference_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let a = free(GlRep::trivial(&c2, 0), 3);
        assert!(bar_delta(&a).unwrap().is_zero());
        let v = VBModule::new(
            &c2,
            [GlRep::regular(&c2, 1).unwrap(), GlRep::trivial(&c2, 2)],
        )
        .unwrap();
        let iv = PresentedViModule::free(v).truncate(4).unwrap();
        assert!(kappa(&iv).unwrap().is_zero());
        let i2 = free(GlRep::trivial(&c2, 2), 4);
        assert!(t0(&bar_delta(&i2).unwrap()) < t0(&i2));
        let k = k0(&c2).truncate(3).unwrap();
        assert_eq!(kappa(&k).unwrap().dims(), &[1, 0, 0]);
    }

    #[test]
    fn iterated_eta_is_natural() {
        let c2 = ViContext::rational(2).unwrap();
        let i1 = free(GlRep::trivial(&c2, 1), 4);
        let (target, map) = eta_iter(&i1, 2).unwrap();
        assert_eq!(target.max_degree(), 2);
        let checked = ModuleMap::new(&map.source, &target, map.components.clone()).unwrap();
        assert_eq!(checked.ranks(), i1.dims()[..3].to_vec());
    }
}
