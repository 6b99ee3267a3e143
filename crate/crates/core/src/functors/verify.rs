//! Structural identities checked on windowed modules.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::context::ViContext;
use crate::error::Result;
use crate::exactmat::{Coeff, EchelonBasis, FqMatrix, SparseVec};
use crate::vbmod::{vb_bar_sigma, VBModule};
use crate::vicat::{enumerate_injections, gl_order, injection_count, x_rank, ViMorphism};
use crate::vimod::homology::{decomposables, h0_dims};
use crate::vimod::torsion::{torsion_dims, torsion_submodule};
use crate::vimod::{InducedModule, TruncatedViModule};

use super::shift::{bar_delta, bar_sigma, eta_iter, kappa};

/// Per-degree comparison of two dimension sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimComparison {
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl DimComparison {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `dim Σ̄I(V)_n` against `dim I(V)_n + dim I(Σ̄V)_n` for `n < D`.
pub fn verify_derivation(v: &VBModule, d: usize) -> Result<DimComparison> {
    let iv = InducedModule::new(v.clone());
    let lhs = bar_sigma(&TruncatedViModule::induced(&iv, d)?)?
        .dims()
        .to_vec();
    let isv = InducedModule::new(vb_bar_sigma(v)?);
    let rhs = (0..d)
        .map(|n| Ok(iv.dim(n)? + isv.dim(n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(DimComparison { lhs, rhs })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub k: usize,
    pub count: BigUint,
    pub predicted: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftTensorReport {
    pub strata: Vec<Stratum>,
    pub total: BigUint,
}

impl ShiftTensorReport {
    pub fn holds(&self) -> bool {
        self.strata.iter().all(|s| s.count == s.predicted)
            && self.strata.iter().map(|s| &s.count).sum::<BigUint>() == self.total
    }
}

/// Partitions `Hom_VI(F^d, X + F^n)` by X-rank `k` and compares each stratum
/// with `|Hom_VI(F^k, F^n)| · |D^d_k(X, F^k)| / |GL_k|`.
pub fn verify_shift_tensor(
    ctx: &ViContext,
    d: usize,
    x: usize,
    n: usize,
) -> Result<ShiftTensorReport> {
    let q = ctx.q();
    let cap = ctx.enumeration_cap();
    let all = enumerate_injections(q, d, x + n, cap)?;
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for f in &all {
        *counts.entry(x_rank(f, x)).or_default() += 1;
    }
    let mut strata = Vec::new();
    for k in 0..=d.min(n) {
        let full_rank = enumerate_injections(q, d, x + k, cap)?
            .iter()
            .filter(|f| x_rank(f, x) == k)
            .count();
        let numerator = injection_count(q, k, n) * BigUint::from(full_rank);
        let order = gl_order(q, k);
        assert!(
            (&numerator % &order).is_zero(),
            "stratum size is not an integer"
        );
        let count = BigUint::from(counts.get(&k).copied().unwrap_or(0));
        if count.is_zero() && numerator.is_zero() {
            continue;
        }
        strata.push(Stratum {
            k,
            count,
            predicted: numerator / order,
        });
    }
    Ok(ShiftTensorReport {
        strata,
        total: BigUint::from(all.len()),
    })
}

/// An element of the group algebra `k[Hom_VI(F^a, F^b)]`.
type Chain = BTreeMap<FqMatrix, Coeff>;

fn add_term(chain: &mut Chain, f: FqMatrix, c: Coeff) {
    let entry = chain.entry(f).or_insert_with(|| c.ring().zero());
    *entry = &*entry + &c;
}

fn left_mul(g: &FqMatrix, chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (f, c) in chain {
        add_term(&mut out, g.mul(f), c.clone());
    }
    out
}

fn combine(into: &mut Chain, other: &Chain, sign: &Coeff) {
    for (f, c) in other {
        add_term(into, f.clone(), c * sign);
    }
}

fn prune(chain: Chain) -> Chain {
    chain.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: Vec<(FqMatrix, Coeff)>,
    pub rhs: Vec<(FqMatrix, Coeff)>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// In `k[Hom_VI(F^{1+z}, X + Y + Z)]` with `X, Y` lines (coordinates 0 and 1):
/// `(Σ_{τ ∈ U_Y(X)} τ − Σ_{s ∈ S} s)(Σ_{σ ∈ U_X(Y)} σ) β = q β`, where `β`
/// sends the first basis vector to `X` and the rest onto `Z`, and `S` holds
/// the automorphisms fixing `Z` with `y ↦ x`, `x ↦ a y` for `a ≠ 0`.
pub fn verify_combinatorial_identity(ctx: &ViContext, z_dim: usize) -> Result<IdentityReport> {
    let q = ctx.q();
    let ring = ctx.ring();
    let size = 2 + z_dim;
    let mut beta = FqMatrix::zeros(size, 1 + z_dim, q);
    beta.set(0, 0, 1);
    for j in 0..z_dim {
        beta.set(2 + j, 1 + j, 1);
    }
    let beta = ViMorphism::new(beta)?.into_matrix();
    let elementary = |row: usize, col: usize, c: u32| {
        let mut m = FqMatrix::identity(size, q);
        m.set(row, col, c);
        m
    };
    // σ_c: x ↦ x + c y
    let mut sigma_beta = Chain::new();
    for c in 0..q {
        add_term(&mut sigma_beta, elementary(1, 0, c).mul(&beta), ring.one());
    }
    let mut lhs = Chain::new();
    // τ_e: y ↦ y + e x
    for e in 0..q {
        combine(
            &mut lhs,
            &left_mul(&elementary(0, 1, e), &sigma_beta),
            &ring.one(),
        );
    }
    for a in 1..q {
        let mut s = FqMatrix::identity(size, q);
        s.set(0, 0, 0);
        s.set(1, 1, 0);
        s.set(0, 1, 1);
        s.set(1, 0, a);
        combine(&mut lhs, &left_mul(&s, &sigma_beta), &-&ring.one());
    }
    let rhs = Chain::from([(beta, ring.from_i64(q as i64))]);
    Ok(IdentityReport {
        lhs: prune(lhs).into_iter().collect(),
        rhs: prune(rhs).into_iter().collect(),
    })
}

/// The six modules of
/// `0 → κ^Y M → κ^{X+Y} M → Σ̄^Y κ^X M → Δ̄^Y M → Δ̄^{X+Y} M → Σ̄^Y Δ̄^X M → 0`
/// for one-dimensional `X` and `Y`, with the alternating sum of dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixTermReport {
    pub window: usize,
    pub dims: [Vec<usize>; 6],
    pub alternating: Vec<i64>,
}

impl SixTermReport {
    pub fn holds(&self) -> bool {
        self.alternating.iter().all(|&s| s == 0)
    }
}

pub fn verify_six_term(m: &TruncatedViModule) -> Result<SixTermReport> {
    let w = m.max_degree().checked_sub(2).ok_or_else(|| {
        crate::error::Error::WindowTooSmall("six-term check needs a window of at least 2".into())
    })?;
    let (_, two) = eta_iter(m, 2)?;
    let km = kappa(m)?;
    let dm = bar_delta(m)?;
    let terms = [
        km.clone(),
        two.kernel()?,
        bar_sigma(&km)?,
        dm.clone(),
        two.cokernel()?,
        bar_sigma(&dm)?,
    ];
    let dims: [Vec<usize>; 6] = terms.map(|t| t.dims()[..=w].to_vec());
    let alternating = (0..=w)
        .map(|n| {
            dims.iter()
                .enumerate()
                .map(|(i, d)| {
                    if i % 2 == 0 {
                        d[n] as i64
                    } else {
                        -(d[n] as i64)
                    }
                })
                .sum()
        })
        .collect();
    Ok(SixTermReport {
        window: w,
        dims,
        alternating,
    })
}

/// `Σ̄Σ̄M` against coinvariants of `M_{2+n}` under the maps `x ↦ x + y`,
/// `x ↦ x + z_j`, `y ↦ y + z_j`.
pub fn verify_iterated_coherence(m: &TruncatedViModule) -> Result<DimComparison> {
    let lhs = bar_sigma(&bar_sigma(m)?)?.dims().to_vec();
    let q = m.ctx().q();
    let ring = m.ctx().ring();
    let rhs = (0..lhs.len())
        .map(|n| {
            let size = 2 + n;
            let dim = m.dim(size);
            let mut gens = Vec::new();
            let mut push = |row: usize, col: usize| {
                let mut g = FqMatrix::identity(size, q);
                g.set(row, col, 1);
                gens.push(g);
            };
            push(1, 0);
            for j in 0..n {
                push(2 + j, 0);
                push(2 + j, 1);
            }
            let mut span = EchelonBasis::new(dim, ring);
            for g in gens {
                let act = m.act(&ViMorphism::new(g)?)?;
                for j in 0..dim {
                    span.insert(act.col(j).sub(&SparseVec::unit(j, ring)));
                }
            }
            Ok(dim - span.rank())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DimComparison { lhs, rhs })
}

/// Ranks of `M_n → M_{1+n}` (from `Z ↪ X + Z`) against `dim M_n`.
pub fn verify_split_injectivity(m: &TruncatedViModule) -> Result<DimComparison> {
    let lhs = (0..m.max_degree())
        .map(|n| m.trailing_map(1, n).map(|t| t.rank()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DimComparison {
        lhs,
        rhs: m.dims()[..m.max_degree()].to_vec(),
    })
}

/// `dim Γ(Σ̄M)_n` against `dim Σ̄(ΓM)_n`.
pub fn verify_gamma_commutes(m: &TruncatedViModule) -> Result<DimComparison> {
    let lhs = torsion_dims(&bar_sigma(m)?)?;
    let rhs = bar_sigma(&torsion_submodule(m)?)?.dims().to_vec();
    Ok(DimComparison { lhs, rhs })
}

/// `dim H₀(Δ̄M)_n` against `dim Σ̄(H₀M)_n`.
pub fn verify_h0_delta(m: &TruncatedViModule) -> Result<DimComparison> {
    let lhs = h0_dims(&bar_delta(m)?);
    let spans = (0..=m.max_degree()).map(|n| decomposables(m, n)).collect();
    let h0_module = m.quotient(spans, format!("H₀({})", m.label()))?;
    let rhs = bar_sigma(&h0_module)?.dims().to_vec();
    Ok(DimComparison { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::CoeffMatrix;
    use crate::vbmod::{BuiltinRep, GlRep};
    use crate::vimod::PresentedViModule;

    fn k0(ctx: &ViContext) -> PresentedViModule {
        let v = VBModule::single(GlRep::trivial(ctx, 0));
        let w = VBModule::single(GlRep::trivial(ctx, 1));
        let map = CoeffMatrix::from_i64_rows(&[vec![1]], ctx.ring());
        PresentedViModule::new(v, w, BTreeMap::from([(1, map)])).unwrap()
    }

    #[test]
    fn shift_tensor_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let r = verify_shift_tensor(&c2, 1, 1, 2).unwrap();
        assert!(r.holds());
        let sizes: Vec<(usize, u32)> = r
            .strata
            .iter()
            .map(|s| (s.k, s.count.to_u32_digits()[0]))
            .collect();
        assert_eq!(sizes, vec![(0, 1), (1, 6)]);
        let r = verify_shift_tensor(&c2, 2, 1, 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.total, BigUint::from(42u32));
        let r = verify_shift_tensor(&c2, 2, 0, 3).unwrap();
        assert_eq!(r.strata.len(), 1);
        assert_eq!(r.strata[0].k, 2);
    }

    #[test]
    fn combinatorial_identity_small() {
        for (q, z) in [(2, 0), (3, 0), (2, 1)] {
            let ctx = ViContext::rational(q).unwrap();
            assert!(
                verify_combinatorial_identity(&ctx, z).unwrap().holds(),
                "q={q} z={z}"
            );
        }
    }

    #[test]
    fn derivation_small() {
        let c2 = ViContext::rational(2).unwrap();
        for kind in BuiltinRep::ALL {
            for d in 0..=2 {
                let v = VBModule::single(GlRep::builtin(&c2, kind, d).unwrap());
                assert!(verify_derivation(&v, 4).unwrap().holds(), "{kind:?} {d}");
            }
        }
    }

    #[test]
    fn six_term_examples() {
        let c2 = ViContext::rational(2).unwrap();
        let i1 = PresentedViModule::free(VBModule::single(GlRep::trivial(&c2, 1)));
        for p in [k0(&c2), i1.clone(), i1.direct_sum(&k0(&c2)).unwrap()] {
            let r = verify_six_term(&p.truncate(4).unwrap()).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn structural_checks() {
        let c2 = ViContext::rational(2).unwrap();
        let i1 = PresentedViModule::free(VBModule::single(GlRep::trivial(&c2, 1)));
        let mixed = i1.direct_sum(&k0(&c2)).unwrap().truncate(4).unwrap();
        let free = i1.truncate(4).unwrap();
        assert!(verify_iterated_coherence(&mixed).unwrap().holds());
        assert!(verify_split_injectivity(&free).unwrap().holds());
        assert!(verify_gamma_commutes(&mixed).unwrap().holds());
        assert!(verify_h0_delta(&mixed).unwrap().holds());
        assert!(verify_h0_delta(&free).unwrap().holds());
    }
}
