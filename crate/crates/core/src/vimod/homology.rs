//! VI-homology `H₀`, `H₁`, generation degree and the semi-induced certificate.
//!
//! `H₁` comes from a surjection `I(U) → M` with kernel `K`: the long exact
//! sequence and `H₁(I(U)) = 0` give `H₁(M)_n = ker(H₀(K)_n → U_n)`, which is
//! `(K_n ∩ B_n) / sat(ι K_{n−1})` where `B_n ⊆ I(U)_n` is the span of the
//! images of lower degrees.

use std::sync::Arc;

use crate::error::Result;
use crate::exactmat::{CoeffMatrix, EchelonBasis, QuotientMap, SpanCoordinates, SparseVec};
use crate::vbmod::{GlAction, GlRep, RepCheck, VBModule};
use crate::vicat::{gaussian_binomial, ViMorphism};

use super::induced::InducedModule;
use super::presented::PresentedViModule;
use super::truncated::{saturate, TruncatedViModule};

/// `sat_{GL_n}(ι(M_{n−1}))` inside `M_n`.
pub fn decomposables(m: &TruncatedViModule, n: usize) -> EchelonBasis {
    let seeds = if n == 0 {
        Vec::new()
    } else {
        m.inclusion(n - 1).columns().to_vec()
    };
    saturate(m.dim(n), m.ctx().ring(), m.gl_actions(n), seeds)
}

/// `H₀(M)_n = M_n / sat(ι(M_{n−1}))` as quotient maps.
pub fn h0(m: &TruncatedViModule) -> Vec<QuotientMap> {
    (0..=m.max_degree())
        .map(|n| decomposables(m, n).quotient())
        .collect()
}

pub fn h0_dims(m: &TruncatedViModule) -> Vec<usize> {
    h0(m).iter().map(QuotientMap::dim).collect()
}

/// Largest degree with `H₀ ≠ 0` in the window, or −1.
pub fn t0(m: &TruncatedViModule) -> i64 {
    h0_dims(m)
        .iter()
        .rposition(|&d| d > 0)
        .map_or(-1, |n| n as i64)
}

/// `dim H₁` per degree for a submodule `K` of an induced module `F`.
fn h1_from_kernel(free: &TruncatedViModule, kernel: &[EchelonBasis]) -> Vec<usize> {
    let ring = free.ctx().ring();
    (0..=free.max_degree())
        .map(|n| {
            if n == 0 {
                return 0;
            }
            let b = decomposables(free, n);
            let k = &kernel[n];
            let mut sum = b.clone();
            for r in k.rows() {
                sum.insert(r.clone());
            }
            let meet = k.rank() + b.rank() - sum.rank();
            let seeds = kernel[n - 1]
                .rows()
                .iter()
                .map(|r| free.inclusion(n - 1).apply(r))
                .collect();
            let pushed = saturate(free.dim(n), ring, free.gl_actions(n), seeds);
            meet - pushed.rank()
        })
        .collect()
}

/// `dim H₁(M)_n` for `n ≤ d` from a presentation.
pub fn h1_presented(p: &PresentedViModule, d: usize) -> Result<Vec<usize>> {
    let free = p.free_truncate(d)?;
    let rel = p.relation_spans(&free);
    Ok(h1_from_kernel(&free, &rel))
}

/// `GL_d` acting on a stable subspace of `M_d`.
#[derive(Debug)]
struct SliceAction {
    module: TruncatedViModule,
    basis: Vec<SparseVec>,
    coords: SpanCoordinates,
}

impl GlAction for SliceAction {
    fn act(&self, g: &crate::exactmat::FqMatrix) -> Result<CoeffMatrix> {
        let images = self
            .module
            .apply(&ViMorphism::new(g.clone())?, &self.basis)?;
        let cols = images
            .iter()
            .map(|v| self.coords.coordinates(v).expect("slice is GL-stable"))
            .collect();
        Ok(CoeffMatrix::from_columns(
            self.basis.len(),
            self.module.ctx().ring(),
            cols,
        ))
    }
}

/// A generating VB-submodule `U ⊆ M`: in each degree, the `GL_d`-span of
/// lifts of a basis of `H₀(M)_d`.
pub fn generating_slices(m: &TruncatedViModule) -> Result<(VBModule, Vec<Vec<SparseVec>>)> {
    let ring = m.ctx().ring();
    let mut reps = Vec::new();
    let mut slices = Vec::new();
    for (d, q) in h0(m).into_iter().enumerate() {
        let seeds = (0..q.dim()).map(|k| q.lift(k)).collect();
        let span = saturate(m.dim(d), ring, m.gl_actions(d), seeds);
        let basis = span.rows().to_vec();
        if !basis.is_empty() {
            let coords = SpanCoordinates::new(m.dim(d), ring, &basis);
            let action = SliceAction {
                module: m.clone(),
                basis: basis.clone(),
                coords,
            };
            reps.push(GlRep::from_action(
                m.ctx(),
                d,
                basis.len(),
                format!("slice_{d}"),
                RepCheck::Structural,
                Arc::new(action),
            ));
        }
        slices.push(basis);
    }
    Ok((VBModule::new(m.ctx(), reps)?, slices))
}

/// `I(U) → M` in each window degree, for generating slices `U`.
pub fn cover(m: &TruncatedViModule) -> Result<(TruncatedViModule, Vec<CoeffMatrix>)> {
    let (u, slices) = generating_slices(m)?;
    let induced = InducedModule::new(u);
    let free = TruncatedViModule::induced(&induced, m.max_degree())?;
    let ring = m.ctx().ring();
    let mut comps = Vec::with_capacity(m.max_degree() + 1);
    for n in 0..=m.max_degree() {
        let (_, basis) = induced.eval(n)?;
        let mut cols = Vec::with_capacity(basis.len());
        let mut i = 0;
        while i < basis.len() {
            let rep = &basis[i].rep;
            let d = rep.source_dim();
            let images = m.apply(rep, &slices[d])?;
            cols.extend(images);
            i += slices[d].len();
        }
        comps.push(CoeffMatrix::from_columns(m.dim(n), ring, cols));
    }
    Ok((free, comps))
}

/// `dim H₁(M)_n` for `n ≤ D` of a windowed module.
pub fn h1(m: &TruncatedViModule) -> Result<Vec<usize>> {
    let (free, comps) = cover(m)?;
    let ring = m.ctx().ring();
    let kernel: Vec<EchelonBasis> = comps
        .iter()
        .enumerate()
        .map(|(n, c)| {
            debug_assert_eq!(c.rank(), m.dim(n), "cover is surjective");
            let ker = crate::exactmat::kernel_of_columns(c.rows(), ring, c.columns());
            EchelonBasis::from_vectors(free.dim(n), ring, &ker)
        })
        .collect();
    Ok(h1_from_kernel(&free, &kernel))
}

/// Dimension test that `M_{≼i} / M_{≺i}` is induced from degree `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPiece {
    pub degree: usize,
    pub dims: Vec<usize>,
    pub induced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub window: usize,
    pub h1: Vec<usize>,
    /// Largest `n` with `H₁(M)_m = 0` for all `m ≤ n`.
    pub pass_up_to: i64,
    pub graded: Vec<GradedPiece>,
}

impl Certificate {
    pub fn passes(&self) -> bool {
        self.pass_up_to == self.window as i64 && self.graded.iter().all(|g| g.induced)
    }

    /// Smallest degree with nonzero `H₁`, if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.h1.iter().position(|&d| d > 0)
    }
}

fn graded_pieces(m: &TruncatedViModule) -> Vec<GradedPiece> {
    let q = m.ctx().q();
    let top = t0(m);
    let mut below = m.generated_below(0);
    let mut out = Vec::new();
    for i in 0..=top {
        let i = i as usize;
        let upto = m.generated_below(i + 1);
        let dims: Vec<usize> = upto
            .iter()
            .zip(&below)
            .map(|(a, b)| a.rank() - b.rank())
            .collect();
        let base = dims[i];
        let induced = dims
            .iter()
            .enumerate()
            .all(|(n, &g)| gaussian_binomial(q, n, i) * base == g.into());
        out.push(GradedPiece {
            degree: i,
            dims,
            induced,
        });
        below = upto;
    }
    out
}

fn certificate_from(m: &TruncatedViModule, h1: Vec<usize>) -> Certificate {
    let pass_up_to = h1
        .iter()
        .position(|&d| d > 0)
        .map_or(m.max_degree() as i64, |n| n as i64 - 1);
    Certificate {
        window: m.max_degree(),
        h1,
        pass_up_to,
        graded: graded_pieces(m),
    }
}

pub fn semi_induced_certificate(m: &TruncatedViModule) -> Result<Certificate> {
    Ok(certificate_from(m, h1(m)?))
}

pub fn semi_induced_certificate_presented(p: &PresentedViModule, d: usize) -> Result<Certificate> {
    let m = p.truncate(d)?;
    Ok(certificate_from(&m, h1_presented(p, d)?))
}
