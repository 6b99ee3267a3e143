//! Torsion `Γ(M)`: elements killed by some injection.
//!
//! Every injection `f: F^n → F^m` factors as `σ ∘ ι` with `σ ∈ GL_m` and `ι`
//! the standard inclusion, and `σ_⋆` is invertible, so `ker f_⋆ = ker ι_⋆`.
//! Standard inclusions into `F^m` factor through `F^D` for `m ≤ D`, hence
//! inside the window `Γ(M)_n ∩ window = ker(M_n → M_D)`.

use crate::error::Result;
use crate::exactmat::{kernel_of_columns, EchelonBasis, SparseVec};
use crate::vicat::enumerate_injections;

use super::truncated::TruncatedViModule;

/// Torsion in one degree, seen through the window.
#[derive(Debug, Clone)]
pub struct TorsionProbe {
    pub degree: usize,
    /// `D − n`: how far the kernel was probed.
    pub probe_depth: usize,
    pub basis: Vec<SparseVec>,
}

impl TorsionProbe {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `ker(M_n → M_D)` along standard inclusions.
pub fn torsion(m: &TruncatedViModule, n: usize) -> Result<TorsionProbe> {
    let d = m.max_degree();
    let chain = m.inclusion_chain(n, d)?;
    Ok(TorsionProbe {
        degree: n,
        probe_depth: d - n,
        basis: kernel_of_columns(chain.rows(), m.ctx().ring(), chain.columns()),
    })
}

/// `Γ(M)` on the window, as a submodule.
pub fn torsion_submodule(m: &TruncatedViModule) -> Result<TruncatedViModule> {
    let bases = (0..=m.max_degree())
        .map(|n| torsion(m, n).map(|t| t.basis))
        .collect::<Result<Vec<_>>>()?;
    m.submodule(bases, format!("Γ({})", m.label()))
}

pub fn torsion_dims(m: &TruncatedViModule) -> Result<Vec<usize>> {
    (0..=m.max_degree())
        .map(|n| torsion(m, n).map(|t| t.dim()))
        .collect()
}

/// Span of `ker f_⋆` over every injection `f: F^n → F^m`, `n ≤ m ≤ D`.
pub fn torsion_brute_force(m: &TruncatedViModule, n: usize) -> Result<EchelonBasis> {
    let ctx = m.ctx();
    let mut span = EchelonBasis::new(m.dim(n), ctx.ring());
    for target in n..=m.max_degree() {
        for f in enumerate_injections(ctx.q(), n, target, ctx.enumeration_cap())? {
            let mat = m.act(&f)?;
            for v in kernel_of_columns(mat.rows(), ctx.ring(), mat.columns()) {
                span.insert(v);
            }
        }
    }
    Ok(span)
}
