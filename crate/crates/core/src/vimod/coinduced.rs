//! Coinduced modules `Ǐ(E)(F^n) = Hom_{GL_d}(k[Hom_VI(F^n, F^d)], E)`.
//!
//! An element is a function `φ` on injections `h: F^n → F^d` with values in
//! `E`, stored as a vector indexed by `h · dim E + e`, subject to
//! `φ(g∘h) = ρ(g) φ(h)` for the generators `g` of `GL_d`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::context::ViContext;
use crate::error::Result;
use crate::exactmat::{
    kernel_of_columns, linear_combination, FqMatrix, SpanCoordinates, SparseVec,
};
use crate::vbmod::GlRep;
use crate::vicat::{enumerate_injections, ViMorphism};

#[derive(Debug, Clone)]
pub struct CoinducedModule {
    e: GlRep,
    levels: Arc<Mutex<HashMap<usize, Arc<Level>>>>,
}

#[derive(Debug)]
struct Level {
    injections: Vec<ViMorphism>,
    index: HashMap<FqMatrix, usize>,
    basis: Vec<SparseVec>,
    coords: SpanCoordinates,
}

impl CoinducedModule {
    pub fn new(e: GlRep) -> Self {
        CoinducedModule {
            e,
            levels: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn rep(&self) -> &GlRep {
        &self.e
    }

    pub fn ctx(&self) -> &ViContext {
        self.e.ctx()
    }

    pub fn degree(&self) -> usize {
        self.e.degree()
    }

    pub fn dim(&self, n: usize) -> Result<usize> {
        Ok(self.level(n)?.basis.len())
    }

    /// Basis of `Ǐ(E)(F^n)` as functions on `Hom_VI(F^n, F^d)`.
    pub fn basis(&self, n: usize) -> Result<Vec<SparseVec>> {
        Ok(self.level(n)?.basis.clone())
    }

    fn level(&self, n: usize) -> Result<Arc<Level>> {
        if let Some(l) = self.levels.lock().unwrap().get(&n) {
            return Ok(l.clone());
        }
        let built = Arc::new(self.solve(n)?);
        Ok(self
            .levels
            .lock()
            .unwrap()
            .entry(n)
            .or_insert(built)
            .clone())
    }

    fn solve(&self, n: usize) -> Result<Level> {
        let ctx = self.ctx();
        let ring = ctx.ring();
        let d = self.degree();
        let de = self.e.dim();
        let injections = enumerate_injections(ctx.q(), n, d, ctx.enumeration_cap())?;
        let index: HashMap<FqMatrix, usize> = injections
            .iter()
            .enumerate()
            .map(|(i, h)| (h.matrix().clone(), i))
            .collect();
        let count = injections.len() * de;
        let gens = ctx.gl_generators(d);
        let rhos = self.e.generator_actions()?;
        // One column per unknown (h, e); equation (s, h, e') reads
        // φ(g_s h)_{e'} − Σ_e ρ(g_s)_{e'e} φ(h)_e = 0.
        let mut columns: Vec<Vec<(usize, crate::exactmat::Coeff)>> = vec![Vec::new(); count];
        for (s, (g, rho)) in gens.iter().zip(&rhos).enumerate() {
            for (hi, h) in injections.iter().enumerate() {
                let gh = index[&g.mul(h.matrix())];
                for e2 in 0..de {
                    let eq = (s * injections.len() + hi) * de + e2;
                    columns[gh * de + e2].push((eq, ring.one()));
                    for e in 0..de {
                        let c = rho.get(e2, e);
                        if !c.is_zero() {
                            columns[hi * de + e].push((eq, -&c));
                        }
                    }
                }
            }
        }
        let columns: Vec<SparseVec> = columns.into_iter().map(SparseVec::from_pairs).collect();
        let equations = gens.len() * count;
        let basis = kernel_of_columns(equations, ring, &columns);
        let coords = SpanCoordinates::new(count, ring, &basis);
        Ok(Level {
            injections,
            index,
            basis,
            coords,
        })
    }

    /// `(f_⋆φ)(h') = φ(h'∘f)`.
    pub fn apply(&self, f: &ViMorphism, vecs: &[SparseVec]) -> Result<Vec<SparseVec>> {
        let src = self.level(f.source_dim())?;
        let dst = self.level(f.target_dim())?;
        let de = self.e.dim();
        let pull: Vec<usize> = dst
            .injections
            .iter()
            .map(|h| src.index[&h.matrix().mul(f.matrix())])
            .collect();
        vecs.iter()
            .map(|v| {
                let phi = linear_combination(&src.basis, v, src.injections.len() * de);
                let mut pairs = Vec::new();
                for (h2, &h) in pull.iter().enumerate() {
                    for e in 0..de {
                        if let Some(c) = phi.get(h * de + e) {
                            pairs.push((h2 * de + e, c.clone()));
                        }
                    }
                }
                let image = SparseVec::from_pairs(pairs);
                Ok(dst
                    .coords
                    .coordinates(&image)
                    .expect("pullback stays equivariant"))
            })
            .collect()
    }
}
