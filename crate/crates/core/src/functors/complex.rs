//! The shift complex `M = I⁰ → I¹ → ⋯`, local cohomology, stable degree and
//! the regularity bound.
//!
//! With `N₀ = M`: `I^{i+1} = Σ̄^{y_i} N_i` for the smallest `y_i` whose iterate
//! passes the semi-induced certificate, and `N_{i+1} = coker(N_i → I^{i+1})`.
//! The differential `I^i → I^{i+1}` is `I^i ↠ N_i → I^{i+1}`. Semi-induced
//! terms are `Γ`-acyclic, so `R^iΓ(M) = H^i(I^•)`.

use crate::error::{Error, Result};
use crate::exactmat::CoeffMatrix;
use crate::vimod::homology::{semi_induced_certificate, t0};
use crate::vimod::{ModuleMap, TruncatedViModule};

use super::shift::{bar_sigma, bar_sigma_iter, eta_iter};

#[derive(Debug, Clone)]
pub struct ShiftComplex {
    /// `I⁰ = M, I¹, …, I^L`.
    pub terms: Vec<TruncatedViModule>,
    /// `d^i : I^i → I^{i+1}`.
    pub maps: Vec<ModuleMap>,
    /// Number of `Σ̄` applied to build each `I^{i+1}`.
    pub shifts: Vec<usize>,
    /// Set when no admissible shift passed the certificate; the complex stops there.
    pub exhausted: Option<usize>,
}

impl ShiftComplex {
    pub fn len(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest degree where every term is defined.
    pub fn window(&self) -> usize {
        self.terms.iter().map(|t| t.max_degree()).min().unwrap()
    }

    fn differential(&self, i: usize, n: usize) -> Option<&CoeffMatrix> {
        self.maps.get(i).map(|m| &m.components[n])
    }

    /// `dim H^i` per degree on the common window.
    pub fn cohomology(&self) -> Vec<Vec<usize>> {
        let w = self.window();
        (0..self.terms.len())
            .map(|i| {
                (0..=w)
                    .map(|n| {
                        let dim = self.terms[i].dim(n);
                        let kernel = self.differential(i, n).map_or(dim, |d| dim - d.rank());
                        let image = if i == 0 {
                            0
                        } else {
                            self.differential(i - 1, n).unwrap().rank()
                        };
                        kernel - image
                    })
                    .collect()
            })
            .collect()
    }

    /// `d^{i+1} ∘ d^i = 0` on the common window.
    pub fn is_complex(&self) -> bool {
        let w = self.window();
        self.maps.windows(2).all(|pair| {
            (0..=w).all(|n| pair[1].components[n].mul(&pair[0].components[n]).is_zero())
        })
    }
}

/// Smallest `y ≤ y_max` with `Σ̄^y N` passing the certificate.
fn first_certified(n: &TruncatedViModule, y_max: i64) -> Result<Option<usize>> {
    let mut module = n.clone();
    for y in 0..=y_max {
        if y > 0 {
            module = bar_sigma(&module)?;
        }
        if semi_induced_certificate(&module)?.passes() {
            return Ok(Some(y as usize));
        }
    }
    Ok(None)
}

pub fn build_shift_complex(m: &TruncatedViModule) -> Result<ShiftComplex> {
    let mut terms = vec![m.clone()];
    let mut maps: Vec<ModuleMap> = Vec::new();
    let mut shifts = Vec::new();
    let mut exhausted = None;
    let mut n = m.clone();
    // I^i ↠ N_i
    let mut onto_n = ModuleMap::identity(m);
    while !n.is_zero() {
        let y_max = n.max_degree() as i64 - t0(&n) - 1;
        let Some(y) = first_certified(&n, y_max)? else {
            exhausted = Some(y_max.max(0) as usize);
            break;
        };
        let (j, to_j) = eta_iter(&n, y)?;
        let mut d = onto_n.then(&to_j);
        d.target = j.clone();
        let next = to_j.cokernel()?;
        let proj = (0..=next.max_degree())
            .map(|k| {
                next.projection(k)
                    .expect("cokernel is a quotient")
                    .projection_matrix()
            })
            .collect();
        onto_n = ModuleMap::new(&j, &next, proj)?;
        terms.push(j);
        maps.push(d);
        shifts.push(y);
        n = next;
    }
    let complex = ShiftComplex {
        terms,
        maps,
        shifts,
        exhausted,
    };
    assert!(
        complex.is_complex(),
        "shift complex differentials do not compose to zero"
    );
    Ok(complex)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCohomologyTable {
    pub window: usize,
    /// `dim R^iΓ(M)_n`, indexed `[i][n]`.
    pub dims: Vec<Vec<usize>>,
    /// `h_i`: largest degree with `R^iΓ(M) ≠ 0`, or −1.
    pub h: Vec<i64>,
    /// Whether the complex was completed.
    pub complete: bool,
}

impl LocalCohomologyTable {
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|row| row.iter().all(|&d| d == 0))
    }

    /// `R^iΓ(M) = 0` for every `i > bound`.
    pub fn vanishes_above(&self, bound: i64) -> bool {
        self.h
            .iter()
            .enumerate()
            .all(|(i, &h)| i as i64 <= bound || h == -1)
    }
}

pub fn local_cohomology(m: &TruncatedViModule) -> Result<LocalCohomologyTable> {
    let complex = build_shift_complex(m)?;
    Ok(table_from(&complex))
}

pub fn table_from(complex: &ShiftComplex) -> LocalCohomologyTable {
    let dims = complex.cohomology();
    let h = dims
        .iter()
        .map(|row| row.iter().rposition(|&d| d > 0).map_or(-1, |n| n as i64))
        .collect();
    LocalCohomologyTable {
        window: complex.window(),
        dims,
        h,
        complete: complex.exhausted.is_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableDegreeReport {
    pub delta: i64,
    pub shifts_used: usize,
    /// Window of the certified iterate.
    pub certificate_degree: usize,
    /// `t₀(Σ̄^{y+1}M) = δ`, when the window allows a check.
    pub next_shift_agrees: Option<bool>,
}

/// `δ(M)`: generation degree of the first `Σ̄`-iterate that is certified
/// semi-induced. At most `D − t₀(M) − 1` shifts are tried.
pub fn stable_degree(m: &TruncatedViModule) -> Result<StableDegreeReport> {
    let top = t0(m);
    if top < 0 {
        return Ok(StableDegreeReport {
            delta: -1,
            shifts_used: 0,
            certificate_degree: m.max_degree(),
            next_shift_agrees: None,
        });
    }
    let y_max = m.max_degree() as i64 - top - 1;
    let Some(y) = first_certified(m, y_max)? else {
        return Err(Error::CertificateExhausted {
            y_max: y_max.max(0) as usize,
        });
    };
    let iterate = bar_sigma_iter(m, y)?;
    let delta = t0(&iterate);
    let next_shift_agrees = if iterate.max_degree() as i64 > delta + 1 {
        Some(t0(&bar_sigma(&iterate)?) == delta)
    } else {
        None
    };
    Ok(StableDegreeReport {
        delta,
        shifts_used: y,
        certificate_degree: iterate.max_degree(),
        next_shift_agrees,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    /// `max(h_i + i)` over nonzero `R^iΓ`, or −1.
    pub r: i64,
    /// Largest degree with `H₁ ≠ 0` in the window, or −1.
    pub t1: i64,
    pub holds: bool,
}

/// `r(M)` from local cohomology, checked against `t₁(M) − 1 ≤ r(M)`.
pub fn regularity_bound(table: &LocalCohomologyTable, h1: &[usize]) -> RegularityReport {
    let r = table
        .h
        .iter()
        .enumerate()
        .filter(|(_, &h)| h >= 0)
        .map(|(i, &h)| h + i as i64)
        .max()
        .unwrap_or(-1);
    let t1 = h1.iter().rposition(|&d| d > 0).map_or(-1, |n| n as i64);
    RegularityReport {
        r,
        t1,
        holds: t1 - 1 <= r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ViContext;
    use crate::vbmod::{GlRep, VBModule};
    use crate::vimod::homology::h1;
    use crate::vimod::PresentedViModule;
    use std::collections::BTreeMap;

    fn k0(ctx: &ViContext) -> PresentedViModule {
        let v = VBModule::single(GlRep::trivial(ctx, 0));
        let w = VBModule::single(GlRep::trivial(ctx, 1));
        let map = CoeffMatrix::from_i64_rows(&[vec![1]], ctx.ring());
        PresentedViModule::new(v, w, BTreeMap::from([(1, map)]))
            .unwrap()
            .named("k0")
    }

    fn itriv(ctx: &ViContext, d: usize) -> PresentedViModule {
        PresentedViModule::free(VBModule::single(GlRep::trivial(ctx, d)))
    }

    #[test]
    fn residue_field_complex() {
        let c2 = ViContext::rational(2).unwrap();
        let m = k0(&c2).truncate(4).unwrap();
        let c = build_shift_complex(&m).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.terms[1].is_zero());
        let t = table_from(&c);
        assert_eq!(t.dims[0], vec![1, 0, 0, 0]);
        assert_eq!(t.h, vec![0, -1]);
        let s = stable_degree(&m).unwrap();
        assert_eq!((s.delta, s.shifts_used), (-1, 1));
        let r = regularity_bound(&t, &h1(&m).unwrap());
        assert_eq!((r.r, r.t1, r.holds), (0, 1, true));
    }

    #[test]
    fn induced_has_no_local_cohomology() {
        let c2 = ViContext::rational(2).unwrap();
        let m = itriv(&c2, 1).truncate(4).unwrap();
        let t = local_cohomology(&m).unwrap();
        assert!(t.is_zero() && t.complete);
        let s = stable_degree(&m).unwrap();
        assert_eq!((s.delta, s.shifts_used), (1, 0));
        assert_eq!(regularity_bound(&t, &h1(&m).unwrap()).r, -1);
    }

    #[test]
    fn mixed_example() {
        let c2 = ViContext::rational(2).unwrap();
        let p = itriv(&c2, 1).direct_sum(&k0(&c2)).unwrap();
        let m = p.truncate(5).unwrap();
        let c = build_shift_complex(&m).unwrap();
        assert!(c.len() <= (t0(&m) + 1) as usize);
        let t = table_from(&c);
        assert_eq!(t.dims[0][..3], [1, 0, 0]);
        assert!(t.dims[1..].iter().all(|row| row.iter().all(|&d| d == 0)));
        let s = stable_degree(&m).unwrap();
        assert_eq!(s.delta, 1);
        assert!(t.vanishes_above(s.delta + 1));
        let r = regularity_bound(&t, &h1(&m).unwrap());
        assert_eq!(r.r, 0);
        assert!(r.holds);
    }
}
