//! VB-modules: finitely supported sequences of `GL_d(F_q)`-representations,
//! with the external product `⊗_VB` and unipotent coinvariants.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::context::ViContext;
use crate::error::{Error, Result};
use crate::exactmat::{CoeffMatrix, CoeffRing, EchelonBasis, FqMatrix, QuotientMap, SparseVec};
use crate::vicat::{unipotent_generators, GroupTable};

/// A linear action of `GL_d` evaluated on arbitrary group elements.
pub trait GlAction: Send + Sync + fmt::Debug {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix>;
}

/// How the homomorphism property of a representation is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepCheck {
    /// Holds by construction.
    Structural,
    /// Checked over the whole group.
    Verified,
    /// The group was too large to check.
    Unverified,
}

#[derive(Clone)]
pub struct GlRep {
    ctx: ViContext,
    degree: usize,
    dim: usize,
    label: String,
    check: RepCheck,
    action: Arc<dyn GlAction>,
}

impl fmt::Debug for GlRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GlRep({}, degree {}, dim {})",
            self.label, self.degree, self.dim
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinRep {
    Trivial,
    Regular,
    ProjectiveSpacePerm,
}

impl BuiltinRep {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "trivial" | "triv" => Some(BuiltinRep::Trivial),
            "regular" => Some(BuiltinRep::Regular),
            "projective_space_perm" | "projective" | "lines" => {
                Some(BuiltinRep::ProjectiveSpacePerm)
            }
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinRep::Trivial => "trivial",
            BuiltinRep::Regular => "regular",
            BuiltinRep::ProjectiveSpacePerm => "projective_space_perm",
        }
    }

    pub const ALL: [BuiltinRep; 3] = [
        BuiltinRep::Trivial,
        BuiltinRep::Regular,
        BuiltinRep::ProjectiveSpacePerm,
    ];
}

impl GlRep {
    pub fn from_action(
        ctx: &ViContext,
        degree: usize,
        dim: usize,
        label: impl Into<String>,
        check: RepCheck,
        action: Arc<dyn GlAction>,
    ) -> Self {
        GlRep {
            ctx: ctx.clone(),
            degree,
            dim,
            label: label.into(),
            check,
            action,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn check(&self) -> RepCheck {
        self.check
    }

    pub fn ctx(&self) -> &ViContext {
        &self.ctx
    }

    pub fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        debug_assert_eq!((g.rows(), g.cols()), (self.degree, self.degree));
        self.action.act(g)
    }

    /// Images of `gl_generators(degree)`, in order.
    pub fn generator_actions(&self) -> Result<Vec<CoeffMatrix>> {
        self.ctx
            .gl_generators(self.degree)
            .iter()
            .map(|g| self.act(g))
            .collect()
    }

    pub fn builtin(ctx: &ViContext, kind: BuiltinRep, d: usize) -> Result<Self> {
        match kind {
            BuiltinRep::Trivial => Ok(Self::trivial(ctx, d)),
            BuiltinRep::Regular => Self::regular(ctx, d),
            BuiltinRep::ProjectiveSpacePerm => Self::projective_space_perm(ctx, d),
        }
    }

    pub fn trivial(ctx: &ViContext, d: usize) -> Self {
        Self::from_action(
            ctx,
            d,
            1,
            "trivial",
            RepCheck::Structural,
            Arc::new(ScalarAction {
                identity: CoeffMatrix::identity(1, ctx.ring()),
            }),
        )
    }

    pub fn zero(ctx: &ViContext, d: usize) -> Self {
        Self::from_action(
            ctx,
            d,
            0,
            "zero",
            RepCheck::Structural,
            Arc::new(ScalarAction {
                identity: CoeffMatrix::identity(0, ctx.ring()),
            }),
        )
    }

    /// Left translation on `k[GL_d]`, basis in the group's enumeration order.
    pub fn regular(ctx: &ViContext, d: usize) -> Result<Self> {
        let group = ctx.gl_group(d)?;
        let dim = group.elements.len();
        Ok(Self::from_action(
            ctx,
            d,
            dim,
            "regular",
            RepCheck::Structural,
            Arc::new(RegularAction {
                ctx: ctx.clone(),
                group,
            }),
        ))
    }

    /// Permutation action on the lines of `F_q^d`.
    pub fn projective_space_perm(ctx: &ViContext, d: usize) -> Result<Self> {
        let lines = ctx.cosets(1, d)?;
        Ok(Self::from_action(
            ctx,
            d,
            lines.len(),
            "projective_space_perm",
            RepCheck::Structural,
            Arc::new(LinesAction {
                ctx: ctx.clone(),
                d,
            }),
        ))
    }

    /// A representation given by the images of `gl_generators(d)`.
    /// Checked to be a homomorphism whenever `GL_d` is under the group cap.
    pub fn explicit(
        ctx: &ViContext,
        d: usize,
        dim: usize,
        images: Vec<CoeffMatrix>,
    ) -> Result<Self> {
        let gens = ctx.gl_generators(d);
        if images.len() != gens.len() {
            return Err(Error::InvalidRep(format!(
                "degree {d} needs {} generator matrices, got {}",
                gens.len(),
                images.len()
            )));
        }
        for (s, m) in images.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidRep(format!(
                    "generator {s} matrix is not {dim}x{dim}"
                )));
            }
            if m.ring() != ctx.ring() {
                return Err(Error::RingMismatch);
            }
        }
        if !ctx.gl_enumerable(d) {
            return Ok(Self::from_action(
                ctx,
                d,
                dim,
                "explicit",
                RepCheck::Unverified,
                Arc::new(ExplicitAction {
                    dim,
                    ring: ctx.ring(),
                    gens,
                    images,
                    table: None,
                    all: Vec::new(),
                }),
            ));
        }
        let table = ctx.gl_group(d)?;
        let ring = ctx.ring();
        let mut all: Vec<CoeffMatrix> = Vec::with_capacity(table.elements.len());
        for i in 0..table.elements.len() {
            let m = match table.parent[i] {
                None => CoeffMatrix::identity(dim, ring),
                Some((p, s)) => images[s].mul(&all[p]),
            };
            all.push(m);
        }
        for i in 0..table.elements.len() {
            for s in 0..gens.len() {
                if images[s].mul(&all[i]) != all[table.table[i][s]] {
                    return Err(Error::InvalidRep(format!(
                        "generator matrices for degree {d} do not define a representation of GL_{d}"
                    )));
                }
            }
        }
        Ok(Self::from_action(
            ctx,
            d,
            dim,
            "explicit",
            RepCheck::Verified,
            Arc::new(ExplicitAction {
                dim,
                ring,
                gens,
                images,
                table: Some(table),
                all,
            }),
        ))
    }

    pub fn direct_sum(parts: &[GlRep]) -> Result<GlRep> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidRep("empty direct sum".into()))?;
        let degree = first.degree;
        if parts.iter().any(|p| p.degree != degree) {
            return Err(Error::BadDims(
                "direct sum of reps of different degrees".into(),
            ));
        }
        let check = if parts.iter().any(|p| p.check == RepCheck::Unverified) {
            RepCheck::Unverified
        } else {
            RepCheck::Structural
        };
        Ok(Self::from_action(
            &first.ctx,
            degree,
            parts.iter().map(|p| p.dim).sum(),
            parts
                .iter()
                .map(|p| p.label.as_str())
                .collect::<Vec<_>>()
                .join("+"),
            check,
            Arc::new(SumAction {
                parts: parts.to_vec(),
            }),
        ))
    }

    /// Coinvariants of `V_{1+n}` under `U_X(F^n)`, as a `GL_n`-rep through
    /// `GL_n ↪ GL_{1+n}`, `τ ↦ 1 ⊕ τ`.
    pub fn unipotent_coinvariants(v: &GlRep) -> Result<GlRep> {
        let n = v.degree.checked_sub(1).ok_or_else(|| {
            Error::BadDims("coinvariants need a representation of positive degree".into())
        })?;
        let ctx = &v.ctx;
        let mut span = EchelonBasis::new(v.dim, ctx.ring());
        for u in unipotent_generators(ctx.q(), n) {
            let m = v.act(&u)?;
            for j in 0..v.dim {
                let rel = m.col(j).sub(&SparseVec::unit(j, ctx.ring()));
                span.insert(rel);
            }
        }
        let quotient = span.quotient();
        Ok(Self::from_action(
            ctx,
            n,
            quotient.dim(),
            format!("coinv({})", v.label),
            v.check,
            Arc::new(CoinvariantAction {
                parent: v.clone(),
                quotient,
            }),
        ))
    }

    /// Checks `ρ(s)ρ(g) = ρ(sg)` over all of `GL_d`. Returns `false` when the
    /// group is too large to enumerate.
    pub fn verify_homomorphism(&self) -> Result<bool> {
        if !self.ctx.gl_enumerable(self.degree) {
            return Ok(false);
        }
        let table = self.ctx.gl_group(self.degree)?;
        let gens = self.ctx.gl_generators(self.degree);
        let images: Vec<CoeffMatrix> = gens.iter().map(|g| self.act(g)).collect::<Result<_>>()?;
        let mats: Vec<CoeffMatrix> = table
            .elements
            .iter()
            .map(|g| self.act(g))
            .collect::<Result<_>>()?;
        if !mats[0].is_identity() {
            return Err(Error::InvalidRep(format!(
                "{} does not fix the identity",
                self.label
            )));
        }
        for i in 0..mats.len() {
            for s in 0..gens.len() {
                if images[s].mul(&mats[i]) != mats[table.table[i][s]] {
                    return Err(Error::InvalidRep(format!(
                        "{} is not multiplicative in degree {}",
                        self.label, self.degree
                    )));
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug)]
struct ScalarAction {
    identity: CoeffMatrix,
}

impl GlAction for ScalarAction {
    fn act(&self, _g: &FqMatrix) -> Result<CoeffMatrix> {
        Ok(self.identity.clone())
    }
}

#[derive(Debug)]
struct RegularAction {
    ctx: ViContext,
    group: Arc<GroupTable>,
}

impl GlAction for RegularAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        let ring = self.ctx.ring();
        let cols = self
            .group
            .elements
            .iter()
            .map(|h| SparseVec::unit(self.group.index[&g.mul(h)], ring))
            .collect();
        Ok(CoeffMatrix::from_columns(
            self.group.elements.len(),
            ring,
            cols,
        ))
    }
}

#[derive(Debug)]
struct LinesAction {
    ctx: ViContext,
    d: usize,
}

impl GlAction for LinesAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        let lines = self.ctx.cosets(1, self.d)?;
        let ring = self.ctx.ring();
        let cols = lines
            .reps
            .iter()
            .map(|l| {
                let image = crate::vicat::ViMorphism::new_unchecked(g.mul(l.matrix()));
                SparseVec::unit(lines.position(&image.canonicalize().0), ring)
            })
            .collect();
        Ok(CoeffMatrix::from_columns(lines.len(), ring, cols))
    }
}

#[derive(Debug)]
struct ExplicitAction {
    dim: usize,
    ring: CoeffRing,
    gens: Vec<FqMatrix>,
    images: Vec<CoeffMatrix>,
    table: Option<Arc<GroupTable>>,
    all: Vec<CoeffMatrix>,
}

impl GlAction for ExplicitAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        if let Some(table) = &self.table {
            return Ok(self.all[table.index[g]].clone());
        }
        if let Some(s) = self.gens.iter().position(|h| h == g) {
            return Ok(self.images[s].clone());
        }
        if *g == FqMatrix::identity(g.rows(), g.modulus()) {
            return Ok(CoeffMatrix::identity(self.dim, self.ring));
        }
        Err(Error::too_large(
            format!(
                "GL_{} (needed to evaluate an unverified explicit rep)",
                g.rows()
            ),
            "group",
            0,
        ))
    }
}

#[derive(Debug)]
struct SumAction {
    parts: Vec<GlRep>,
}

impl GlAction for SumAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        let ring = self.parts[0].ctx.ring();
        let blocks: Vec<CoeffMatrix> =
            self.parts.iter().map(|p| p.act(g)).collect::<Result<_>>()?;
        Ok(CoeffMatrix::block_diagonal(&blocks, ring))
    }
}

#[derive(Debug)]
struct CoinvariantAction {
    parent: GlRep,
    quotient: QuotientMap,
}

impl GlAction for CoinvariantAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        let big = FqMatrix::identity(1, g.modulus()).direct_sum(g);
        let m = self.parent.act(&big)?;
        let cols = (0..self.quotient.dim())
            .map(|k| self.quotient.project(&m.apply(&self.quotient.lift(k))))
            .collect();
        Ok(CoeffMatrix::from_columns(
            self.quotient.dim(),
            m.ring(),
            cols,
        ))
    }
}

/// Finitely supported sequence of representations `V_d` of `GL_d`.
#[derive(Debug, Clone)]
pub struct VBModule {
    ctx: ViContext,
    components: BTreeMap<usize, GlRep>,
}

impl VBModule {
    pub fn zero(ctx: &ViContext) -> Self {
        VBModule {
            ctx: ctx.clone(),
            components: BTreeMap::new(),
        }
    }

    /// Components of dimension zero are dropped; repeated degrees are summed.
    pub fn new(ctx: &ViContext, reps: impl IntoIterator<Item = GlRep>) -> Result<Self> {
        let mut by_degree: BTreeMap<usize, Vec<GlRep>> = BTreeMap::new();
        for r in reps {
            ctx.check_same(&r.ctx)?;
            if r.dim > 0 {
                by_degree.entry(r.degree).or_default().push(r);
            }
        }
        let mut components = BTreeMap::new();
        for (d, mut parts) in by_degree {
            let rep = if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                GlRep::direct_sum(&parts)?
            };
            components.insert(d, rep);
        }
        Ok(VBModule {
            ctx: ctx.clone(),
            components,
        })
    }

    pub fn single(rep: GlRep) -> Self {
        let ctx = rep.ctx.clone();
        Self::new(&ctx, [rep]).expect("one rep has one context")
    }

    pub fn ctx(&self) -> &ViContext {
        &self.ctx
    }

    pub fn component(&self, d: usize) -> Option<&GlRep> {
        self.components.get(&d)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &GlRep)> {
        self.components.iter().map(|(d, r)| (*d, r))
    }

    pub fn dim(&self, d: usize) -> usize {
        self.components.get(&d).map_or(0, |r| r.dim)
    }

    /// Largest supported degree, or −1 for the zero module.
    pub fn degree(&self) -> i64 {
        self.components.keys().next_back().map_or(-1, |&d| d as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn direct_sum(&self, other: &VBModule) -> Result<VBModule> {
        self.ctx.check_same(&other.ctx)?;
        VBModule::new(
            &self.ctx,
            self.components
                .values()
                .chain(other.components.values())
                .cloned(),
        )
    }
}

/// `(Σ̄V)_n = (V_{1+n})_{U_X(F^n)}`.
pub fn vb_bar_sigma(v: &VBModule) -> Result<VBModule> {
    let reps = v
        .components
        .iter()
        .filter(|(d, _)| **d >= 1)
        .map(|(_, r)| GlRep::unipotent_coinvariants(r))
        .collect::<Result<Vec<_>>>()?;
    VBModule::new(&v.ctx, reps)
}

/// `(M ⊗ N)_n = ⊕_{X ≤ F^n} M(F^n/X) ⊗ N(X)`.
///
/// Each subspace `X` is represented by its echelon basis `h_X`; `F^n/X` is
/// identified with the span of the non-pivot coordinates of `h_X`.
pub fn vb_tensor(m: &VBModule, n: &VBModule) -> Result<VBModule> {
    m.ctx.check_same(&n.ctx)?;
    if m.is_zero() || n.is_zero() {
        return Ok(VBModule::zero(&m.ctx));
    }
    let top = (m.degree() + n.degree()) as usize;
    let mut reps = Vec::new();
    for deg in 0..=top {
        if let Some(rep) = tensor_component(m, n, deg)? {
            reps.push(rep);
        }
    }
    VBModule::new(&m.ctx, reps)
}

fn tensor_component(m: &VBModule, n: &VBModule, deg: usize) -> Result<Option<GlRep>> {
    let ctx = &m.ctx;
    let mut blocks = Vec::new();
    let mut offset = 0;
    for k in 0..=deg {
        let (dm, dn) = (m.dim(deg - k), n.dim(k));
        if dm == 0 || dn == 0 {
            continue;
        }
        let cosets = ctx.cosets(k, deg)?;
        blocks.push(TensorBlock {
            k,
            offset,
            left: m.components[&(deg - k)].clone(),
            right: n.components[&k].clone(),
        });
        offset += cosets.len() * dm * dn;
    }
    if offset == 0 {
        return Ok(None);
    }
    let unverified = blocks
        .iter()
        .any(|b| b.left.check == RepCheck::Unverified || b.right.check == RepCheck::Unverified);
    Ok(Some(GlRep::from_action(
        ctx,
        deg,
        offset,
        "tensor",
        if unverified {
            RepCheck::Unverified
        } else {
            RepCheck::Structural
        },
        Arc::new(TensorAction {
            ctx: ctx.clone(),
            n: deg,
            dim: offset,
            blocks,
        }),
    )))
}

#[derive(Debug)]
struct TensorBlock {
    k: usize,
    offset: usize,
    left: GlRep,
    right: GlRep,
}

#[derive(Debug)]
struct TensorAction {
    ctx: ViContext,
    n: usize,
    dim: usize,
    blocks: Vec<TensorBlock>,
}

impl GlAction for TensorAction {
    fn act(&self, g: &FqMatrix) -> Result<CoeffMatrix> {
        let ring = self.ctx.ring();
        let q = self.ctx.q();
        let mut cols = vec![SparseVec::new(); self.dim];
        for b in &self.blocks {
            let cosets = self.ctx.cosets(b.k, self.n)?;
            let (dm, dn) = (b.left.dim, b.right.dim);
            let mut left_memo: HashMap<FqMatrix, CoeffMatrix> = HashMap::new();
            let mut right_memo: HashMap<FqMatrix, CoeffMatrix> = HashMap::new();
            for (c, h) in cosets.reps.iter().enumerate() {
                let moved = crate::vicat::ViMorphism::new_unchecked(g.mul(h.matrix()));
                let (canon, sigma) = moved.canonicalize();
                let c2 = cosets.position(&canon);
                let tau = quotient_action(g, h.matrix(), canon.matrix(), q);
                if !left_memo.contains_key(&tau) {
                    left_memo.insert(tau.clone(), b.left.act(&tau)?);
                }
                if !right_memo.contains_key(&sigma) {
                    right_memo.insert(sigma.clone(), b.right.act(&sigma)?);
                }
                let block = left_memo[&tau].kron(&right_memo[&sigma]);
                let src = b.offset + c * dm * dn;
                let dst = b.offset + c2 * dm * dn;
                for (j, col) in block.columns().iter().enumerate() {
                    cols[src + j] = col.offset(dst);
                }
            }
        }
        Ok(CoeffMatrix::from_columns(self.dim, ring, cols))
    }
}

/// Matrix of `F^n/X → F^n/gX` induced by `g`, in the non-pivot coordinates.
fn quotient_action(g: &FqMatrix, hx: &FqMatrix, hgx: &FqMatrix, q: u32) -> FqMatrix {
    let n = g.rows();
    let px = hx.echelon_pivot_rows();
    let pgx = hgx.echelon_pivot_rows();
    let free_x: Vec<usize> = (0..n).filter(|r| !px.contains(r)).collect();
    let free_gx: Vec<usize> = (0..n).filter(|r| !pgx.contains(r)).collect();
    let mut tau = FqMatrix::zeros(free_gx.len(), free_x.len(), q);
    for (j, &r) in free_x.iter().enumerate() {
        let v = g.col(r);
        // v − h_{gX} · v[pivots of gX] has zero pivot entries
        let a: Vec<u32> = pgx.iter().map(|&p| v[p]).collect();
        let hv = hgx.mul_vec(&a);
        for (i, &s) in free_gx.iter().enumerate() {
            tau.set(i, j, (v[s] + q - hv[s]) % q);
        }
    }
    tau
}
