//! Windowed VI-modules: the values `M(F^n)` for `n ≤ D` together with the
//! action of every injection between them.
//!
//! Each module knows how to apply `f_⋆` for an arbitrary injection `f`
//! inside the window, by delegating to the module it was built from. The
//! generator actions of `GL_n` and the standard inclusions `ι_n` are
//! materialized at construction, where their compatibility
//! `ι_n ∘ ρ_n(τ) = ρ_{n+1}(τ ⊕ 1) ∘ ι_n` is asserted.

use std::fmt;
use std::sync::Arc;

use crate::context::ViContext;
use crate::error::{Error, Result};
use crate::exactmat::{
    linear_combination, CoeffMatrix, EchelonBasis, FqMatrix, QuotientMap, SpanCoordinates,
    SparseVec,
};
use crate::vbmod::VBModule;
use crate::vicat::{standard_inclusion, trailing_inclusion, ViMorphism};

use super::coinduced::CoinducedModule;
use super::induced::InducedModule;

#[derive(Clone)]
pub struct TruncatedViModule {
    inner: Arc<Inner>,
}

struct Inner {
    ctx: ViContext,
    max_degree: usize,
    dims: Vec<usize>,
    label: String,
    repr: Repr,
    gl_actions: Vec<Vec<CoeffMatrix>>,
    inclusions: Vec<CoeffMatrix>,
}

enum Repr {
    Zero,
    Induced(InducedModule),
    Vb(VBModule),
    Coinduced(CoinducedModule),
    Quotient {
        parent: TruncatedViModule,
        maps: Vec<QuotientMap>,
    },
    Sub {
        parent: TruncatedViModule,
        bases: Vec<Vec<SparseVec>>,
        coords: Vec<SpanCoordinates>,
    },
    Shift {
        parent: TruncatedViModule,
        x: usize,
    },
    Restrict {
        parent: TruncatedViModule,
    },
    DirectSum {
        parts: Vec<TruncatedViModule>,
    },
}

impl fmt::Debug for TruncatedViModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruncatedViModule({}, dims {:?})",
            self.inner.label, self.inner.dims
        )
    }
}

impl TruncatedViModule {
    fn build(
        ctx: &ViContext,
        max_degree: usize,
        dims: Vec<usize>,
        label: String,
        repr: Repr,
    ) -> Result<Self> {
        debug_assert_eq!(dims.len(), max_degree + 1);
        let mut module = TruncatedViModule {
            inner: Arc::new(Inner {
                ctx: ctx.clone(),
                max_degree,
                dims,
                label,
                repr,
                gl_actions: Vec::new(),
                inclusions: Vec::new(),
            }),
        };
        let q = ctx.q();
        let mut gl_actions = Vec::with_capacity(max_degree + 1);
        let mut inclusions = Vec::with_capacity(max_degree);
        for n in 0..=max_degree {
            let acts = ctx
                .gl_generators(n)
                .into_iter()
                .map(|g| module.act(&ViMorphism::new_unchecked(g)))
                .collect::<Result<Vec<_>>>()?;
            gl_actions.push(acts);
            if n < max_degree {
                inclusions.push(module.act(&standard_inclusion(n, n + 1, q)?)?);
            }
        }
        for n in 0..max_degree {
            for (s, g) in ctx.gl_generators(n).iter().enumerate() {
                if module.inner.dims[n] == 0 {
                    break;
                }
                let bigger = ViMorphism::new_unchecked(g.direct_sum(&FqMatrix::identity(1, q)));
                let lhs = inclusions[n].mul(&gl_actions[n][s]);
                let rhs = module.act(&bigger)?.mul(&inclusions[n]);
                assert_eq!(
                    lhs, rhs,
                    "inclusion not compatible with GL_{n} generator {s}"
                );
            }
        }
        let inner = Arc::get_mut(&mut module.inner).expect("fresh module");
        inner.gl_actions = gl_actions;
        inner.inclusions = inclusions;
        Ok(module)
    }

    pub fn ctx(&self) -> &ViContext {
        &self.inner.ctx
    }

    pub fn max_degree(&self) -> usize {
        self.inner.max_degree
    }

    pub fn dim(&self, n: usize) -> usize {
        self.inner.dims[n]
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn with_label(&self, label: impl Into<String>) -> Result<Self> {
        Self::build(
            self.ctx(),
            self.max_degree(),
            self.inner.dims.clone(),
            label.into(),
            Repr::Restrict {
                parent: self.clone(),
            },
        )
    }

    /// The projection `parent_n → M_n` when `M` was built as a quotient.
    pub fn projection(&self, n: usize) -> Option<&QuotientMap> {
        match &self.inner.repr {
            Repr::Quotient { maps, .. } => maps.get(n),
            _ => None,
        }
    }

    /// Images of `gl_generators(n)`.
    pub fn gl_actions(&self, n: usize) -> &[CoeffMatrix] {
        &self.inner.gl_actions[n]
    }

    /// `ι_n : M_n → M_{n+1}` for `n < D`.
    pub fn inclusion(&self, n: usize) -> &CoeffMatrix {
        &self.inner.inclusions[n]
    }

    pub fn is_zero(&self) -> bool {
        self.inner.dims.iter().all(|&d| d == 0)
    }

    /// Largest degree with `M_n ≠ 0`, or −1.
    pub fn top_degree(&self) -> i64 {
        self.inner
            .dims
            .iter()
            .rposition(|&d| d > 0)
            .map_or(-1, |n| n as i64)
    }

    fn check_window(&self, f: &ViMorphism) -> Result<()> {
        if f.target_dim() > self.max_degree() {
            return Err(Error::WindowTooSmall(format!(
                "morphism into degree {} outside window 0..={}",
                f.target_dim(),
                self.max_degree()
            )));
        }
        Ok(())
    }

    /// `f_⋆` applied to vectors of `M(F^n)`.
    pub fn apply(&self, f: &ViMorphism, vecs: &[SparseVec]) -> Result<Vec<SparseVec>> {
        self.check_window(f)?;
        let n = f.source_dim();
        let m = f.target_dim();
        if vecs.iter().all(SparseVec::is_zero) {
            return Ok(vec![SparseVec::new(); vecs.len()]);
        }
        match &self.inner.repr {
            Repr::Zero => Ok(vec![SparseVec::new(); vecs.len()]),
            Repr::Induced(i) => i.apply(f, vecs),
            Repr::Coinduced(c) => c.apply(f, vecs),
            Repr::Vb(v) => {
                if !f.is_iso() {
                    return Ok(vec![SparseVec::new(); vecs.len()]);
                }
                let rho = v.component(n).expect("nonzero component").act(f.matrix())?;
                Ok(vecs.iter().map(|x| rho.apply(x)).collect())
            }
            Repr::Quotient { parent, maps } => {
                let lifted: Vec<SparseVec> = vecs.iter().map(|v| maps[n].lift_vec(v)).collect();
                let images = parent.apply(f, &lifted)?;
                Ok(images.iter().map(|v| maps[m].project(v)).collect())
            }
            Repr::Sub {
                parent,
                bases,
                coords,
            } => {
                let lifted: Vec<SparseVec> = vecs
                    .iter()
                    .map(|v| linear_combination(&bases[n], v, parent.dim(n)))
                    .collect();
                let images = parent.apply(f, &lifted)?;
                images
                    .iter()
                    .map(|v| {
                        coords[m].coordinates(v).ok_or_else(|| {
                            Error::BadDims(format!("subspace in degree {m} is not a submodule"))
                        })
                    })
                    .collect()
            }
            Repr::Shift { parent, x } => parent.apply(&f.shifted(*x), vecs),
            Repr::Restrict { parent } => parent.apply(f, vecs),
            Repr::DirectSum { parts } => {
                let mut out = vec![SparseVec::new(); vecs.len()];
                let (mut off_n, mut off_m) = (0, 0);
                for p in parts {
                    let (dn, dm) = (p.dim(n), p.dim(m));
                    let pieces: Vec<SparseVec> = vecs
                        .iter()
                        .map(|v| {
                            v.remap_monotone(|i| (i >= off_n && i < off_n + dn).then(|| i - off_n))
                        })
                        .collect();
                    let images = p.apply(f, &pieces)?;
                    for (o, img) in out.iter_mut().zip(images) {
                        *o = o.add(&img.offset(off_m));
                    }
                    off_n += dn;
                    off_m += dm;
                }
                Ok(out)
            }
        }
    }

    /// Matrix of `f_⋆ : M(F^n) → M(F^m)`.
    pub fn act(&self, f: &ViMorphism) -> Result<CoeffMatrix> {
        self.check_window(f)?;
        let ring = self.ctx().ring();
        let units: Vec<SparseVec> = (0..self.dim(f.source_dim()))
            .map(|i| SparseVec::unit(i, ring))
            .collect();
        let cols = self.apply(f, &units)?;
        Ok(CoeffMatrix::from_columns(
            self.dim(f.target_dim()),
            ring,
            cols,
        ))
    }

    /// Composite of standard inclusions `M_n → M_m`.
    pub fn inclusion_chain(&self, n: usize, m: usize) -> Result<CoeffMatrix> {
        self.act(&standard_inclusion(n, m, self.ctx().q())?)
    }

    pub fn zero(ctx: &ViContext, max_degree: usize) -> Result<Self> {
        Self::build(
            ctx,
            max_degree,
            vec![0; max_degree + 1],
            "0".into(),
            Repr::Zero,
        )
    }

    pub fn induced(module: &InducedModule, max_degree: usize) -> Result<Self> {
        let dims = (0..=max_degree)
            .map(|n| module.dim(n))
            .collect::<Result<Vec<_>>>()?;
        Self::build(
            module.ctx(),
            max_degree,
            dims,
            "I(V)".into(),
            Repr::Induced(module.clone()),
        )
    }

    /// A VB-module viewed as a VI-module on which proper injections act by 0.
    pub fn from_vb(v: &VBModule, max_degree: usize) -> Result<Self> {
        let dims = (0..=max_degree).map(|n| v.dim(n)).collect();
        Self::build(v.ctx(), max_degree, dims, "VB".into(), Repr::Vb(v.clone()))
    }

    pub fn coinduced(module: &CoinducedModule, max_degree: usize) -> Result<Self> {
        let dims = (0..=max_degree)
            .map(|n| module.dim(n))
            .collect::<Result<Vec<_>>>()?;
        Self::build(
            module.ctx(),
            max_degree,
            dims,
            "coinduced".into(),
            Repr::Coinduced(module.clone()),
        )
    }

    /// Quotient by a family of subspaces that must form a submodule.
    pub fn quotient(&self, spans: Vec<EchelonBasis>, label: impl Into<String>) -> Result<Self> {
        assert_eq!(spans.len(), self.max_degree() + 1);
        self.check_submodule(
            &spans.iter().map(|s| s.rows().to_vec()).collect::<Vec<_>>(),
            &spans,
        )?;
        let maps: Vec<QuotientMap> = spans.into_iter().map(EchelonBasis::quotient).collect();
        let dims = maps.iter().map(QuotientMap::dim).collect();
        Self::build(
            self.ctx(),
            self.max_degree(),
            dims,
            label.into(),
            Repr::Quotient {
                parent: self.clone(),
                maps,
            },
        )
    }

    /// Submodule with the given bases (each linearly independent).
    pub fn submodule(&self, bases: Vec<Vec<SparseVec>>, label: impl Into<String>) -> Result<Self> {
        assert_eq!(bases.len(), self.max_degree() + 1);
        let ring = self.ctx().ring();
        let spans: Vec<EchelonBasis> = bases
            .iter()
            .enumerate()
            .map(|(n, b)| EchelonBasis::from_vectors(self.dim(n), ring, b))
            .collect();
        for (n, (b, s)) in bases.iter().zip(&spans).enumerate() {
            if s.rank() != b.len() {
                return Err(Error::BadDims(format!(
                    "dependent submodule basis in degree {n}"
                )));
            }
        }
        self.check_submodule(&bases, &spans)?;
        let coords = bases
            .iter()
            .enumerate()
            .map(|(n, b)| SpanCoordinates::new(self.dim(n), ring, b))
            .collect();
        let dims = bases.iter().map(Vec::len).collect();
        Self::build(
            self.ctx(),
            self.max_degree(),
            dims,
            label.into(),
            Repr::Sub {
                parent: self.clone(),
                bases,
                coords,
            },
        )
    }

    /// Checks that generators and inclusions carry the spans into themselves.
    fn check_submodule(&self, spanning: &[Vec<SparseVec>], spans: &[EchelonBasis]) -> Result<()> {
        for n in 0..=self.max_degree() {
            for (s, g) in self.gl_actions(n).iter().enumerate() {
                for v in &spanning[n] {
                    if !spans[n].contains(&g.apply(v)) {
                        return Err(Error::BadDims(format!(
                            "subspace in degree {n} is not stable under generator {s}"
                        )));
                    }
                }
            }
            if n < self.max_degree() {
                for v in &spanning[n] {
                    if !spans[n + 1].contains(&self.inclusion(n).apply(v)) {
                        return Err(Error::BadDims(format!(
                            "subspace in degree {n} is not carried into degree {}",
                            n + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(Σ^X M)(F^n) = M(F^{x+n})`, with `X` in the leading coordinates.
    pub fn shift(&self, x: usize) -> Result<Self> {
        if x > self.max_degree() {
            return Err(Error::WindowTooSmall(format!(
                "cannot shift by {x} inside window 0..={}",
                self.max_degree()
            )));
        }
        let d = self.max_degree() - x;
        let dims = (0..=d).map(|n| self.dim(n + x)).collect();
        Self::build(
            self.ctx(),
            d,
            dims,
            format!("Σ^{x}({})", self.label()),
            Repr::Shift {
                parent: self.clone(),
                x,
            },
        )
    }

    /// The same module on the smaller window `0..=d`.
    pub fn restrict(&self, d: usize) -> Result<Self> {
        if d > self.max_degree() {
            return Err(Error::WindowTooSmall(format!(
                "window {d} exceeds {}",
                self.max_degree()
            )));
        }
        if d == self.max_degree() {
            return Ok(self.clone());
        }
        Self::build(
            self.ctx(),
            d,
            self.inner.dims[..=d].to_vec(),
            self.label().to_string(),
            Repr::Restrict {
                parent: self.clone(),
            },
        )
    }

    pub fn direct_sum(parts: &[TruncatedViModule]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::BadDims("empty direct sum".into()))?;
        let d = parts.iter().map(|p| p.max_degree()).min().unwrap();
        let parts: Vec<TruncatedViModule> =
            parts.iter().map(|p| p.restrict(d)).collect::<Result<_>>()?;
        for p in &parts {
            first.ctx().check_same(p.ctx())?;
        }
        let dims = (0..=d)
            .map(|n| parts.iter().map(|p| p.dim(n)).sum())
            .collect();
        let label = parts
            .iter()
            .map(|p| p.label().to_string())
            .collect::<Vec<_>>()
            .join(" ⊕ ");
        Self::build(first.ctx(), d, dims, label, Repr::DirectSum { parts })
    }

    /// Smallest submodule containing the given vectors, as echelon bases per
    /// degree. Saturates under `GL_n` generators in order, after pushing the
    /// previous degree forward along `ι`.
    pub fn generated_submodule(&self, gens: &[Vec<SparseVec>]) -> Vec<EchelonBasis> {
        let ring = self.ctx().ring();
        let mut out: Vec<EchelonBasis> = Vec::with_capacity(self.max_degree() + 1);
        for n in 0..=self.max_degree() {
            let mut seeds: Vec<SparseVec> = Vec::new();
            if n > 0 {
                seeds.extend(
                    out[n - 1]
                        .rows()
                        .iter()
                        .map(|r| self.inclusion(n - 1).apply(r)),
                );
            }
            if let Some(g) = gens.get(n) {
                seeds.extend(g.iter().cloned());
            }
            out.push(saturate(self.dim(n), ring, self.gl_actions(n), seeds));
        }
        out
    }

    /// Submodule generated by all elements of degree `< i` (for `i = 0`, zero).
    pub fn generated_below(&self, i: usize) -> Vec<EchelonBasis> {
        let ring = self.ctx().ring();
        let gens: Vec<Vec<SparseVec>> = (0..=self.max_degree())
            .map(|n| {
                if n < i {
                    (0..self.dim(n)).map(|k| SparseVec::unit(k, ring)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        self.generated_submodule(&gens)
    }

    /// The map `M(F^n) → M(F^{x+n})` induced by the inclusion of the trailing
    /// coordinates `Z → X + Z`.
    pub fn trailing_map(&self, x: usize, n: usize) -> Result<CoeffMatrix> {
        self.act(&trailing_inclusion(n, n + x, self.ctx().q())?)
    }
}

/// Span of `seeds` closed under the given matrices.
pub fn saturate(
    dim: usize,
    ring: crate::exactmat::CoeffRing,
    gens: &[CoeffMatrix],
    seeds: Vec<SparseVec>,
) -> EchelonBasis {
    let mut basis = EchelonBasis::new(dim, ring);
    let mut queue: std::collections::VecDeque<SparseVec> = std::collections::VecDeque::new();
    for s in seeds {
        if basis.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if basis.is_full() {
            break;
        }
        for g in gens {
            let w = g.apply(&v);
            if basis.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    basis
}

/// Degreewise linear maps `φ_n : M_n → N_n` commuting with the VI-action.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    pub source: TruncatedViModule,
    pub target: TruncatedViModule,
    pub components: Vec<CoeffMatrix>,
}

impl ModuleMap {
    /// Checks naturality against generators and standard inclusions.
    pub fn new(
        source: &TruncatedViModule,
        target: &TruncatedViModule,
        components: Vec<CoeffMatrix>,
    ) -> Result<Self> {
        let d = components
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::BadDims("empty map".into()))?;
        if d > source.max_degree() || d > target.max_degree() {
            return Err(Error::WindowTooSmall("map exceeds module window".into()));
        }
        for n in 0..=d {
            let c = &components[n];
            if c.rows() != target.dim(n) || c.cols() != source.dim(n) {
                return Err(Error::BadDims(format!("map component {n} has wrong shape")));
            }
            for (s, (a, b)) in source
                .gl_actions(n)
                .iter()
                .zip(target.gl_actions(n))
                .enumerate()
            {
                if c.mul(a) != b.mul(c) {
                    return Err(Error::EquivarianceViolation {
                        degree: n,
                        generator: s,
                    });
                }
            }
            if n < d && components[n + 1].mul(source.inclusion(n)) != target.inclusion(n).mul(c) {
                return Err(Error::BadDims(format!("map does not commute with ι_{n}")));
            }
        }
        Ok(ModuleMap {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn identity(m: &TruncatedViModule) -> Self {
        let ring = m.ctx().ring();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            components: (0..=m.max_degree())
                .map(|n| CoeffMatrix::identity(m.dim(n), ring))
                .collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> ModuleMap {
        let d = self.max_degree().min(other.max_degree());
        ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            components: (0..=d)
                .map(|n| other.components[n].mul(&self.components[n]))
                .collect(),
        }
    }

    pub fn kernel(&self) -> Result<TruncatedViModule> {
        let src = self.source.restrict(self.max_degree())?;
        let bases = self
            .components
            .iter()
            .map(|c| c.rank_nullspace().1.into_columns())
            .collect();
        src.submodule(bases, format!("ker → {}", self.target.label()))
    }

    pub fn image_spans(&self) -> Vec<EchelonBasis> {
        self.components
            .iter()
            .enumerate()
            .map(|(n, c)| EchelonBasis::from_vectors(self.target.dim(n), c.ring(), c.columns()))
            .collect()
    }

    pub fn cokernel(&self) -> Result<TruncatedViModule> {
        let tgt = self.target.restrict(self.max_degree())?;
        tgt.quotient(
            self.image_spans(),
            format!("coker({} →)", self.source.label()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(CoeffMatrix::is_zero)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.components.iter().map(CoeffMatrix::rank).collect()
    }
}
