//! Spaces of equivariant maps, solved as exact nullspaces.

use crate::error::{Error, Result};
use crate::exactmat::{kernel_of_columns, Coeff, CoeffMatrix, CoeffRing, SparseVec};

use super::truncated::TruncatedViModule;

/// Linear constraints on block unknowns `X_b` (each `rows_b × cols_b`).
struct System {
    ring: CoeffRing,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    columns: Vec<Vec<(usize, Coeff)>>,
    equations: usize,
}

impl System {
    fn new(ring: CoeffRing, shapes: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut total = 0;
        for (r, c) in &shapes {
            offsets.push(total);
            total += r * c;
        }
        System {
            ring,
            shapes,
            offsets,
            columns: vec![Vec::new(); total],
            equations: 0,
        }
    }

    /// Starts a block of `rows × cols` equations; returns its offset.
    fn block(&mut self, rows: usize, cols: usize) -> usize {
        let start = self.equations;
        self.equations += rows * cols;
        start
    }

    /// Adds `sign · L X_b R` to the equation block at `eq` (shape `L.rows × R.cols`).
    fn term(
        &mut self,
        eq: usize,
        b: usize,
        left: Option<&CoeffMatrix>,
        right: Option<&CoeffMatrix>,
        negate: bool,
    ) {
        let (xr, xc) = self.shapes[b];
        let out_cols = right.map_or(xc, |r| r.cols());
        let ring = self.ring;
        let unit = |i| SparseVec::unit(i, ring);
        let right_rows: Vec<SparseVec> = match right {
            Some(r) => r.transpose().into_columns(),
            None => (0..xc).map(unit).collect(),
        };
        for i in 0..xr {
            let lcol = left.map_or_else(|| unit(i), |l| l.col(i).clone());
            for (j, row) in right_rows.iter().enumerate() {
                let var = self.offsets[b] + i * xc + j;
                for (r, a) in lcol.entries() {
                    for (c, bb) in row.entries() {
                        let v = a * bb;
                        let v = if negate { -&v } else { v };
                        self.columns[var].push((eq + r * out_cols + c, v));
                    }
                }
            }
        }
    }

    fn nullity(self) -> usize {
        let cols: Vec<SparseVec> = self
            .columns
            .into_iter()
            .map(SparseVec::from_pairs)
            .collect();
        kernel_of_columns(self.equations, self.ring, &cols).len()
    }
}

/// `dim` of the space of `X: k^da → k^db` with `X A_s = B_s X` for all `s`.
pub fn intertwiner_dim(
    da: usize,
    db: usize,
    a: &[CoeffMatrix],
    b: &[CoeffMatrix],
    ring: CoeffRing,
) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::BadDims("generator lists differ in length".into()));
    }
    let mut sys = System::new(ring, vec![(db, da)]);
    for (x, y) in a.iter().zip(b) {
        let eq = sys.block(db, da);
        sys.term(eq, 0, None, Some(x), false);
        sys.term(eq, 0, Some(y), None, true);
    }
    Ok(sys.nullity())
}

/// `dim Hom(M, N)` of natural maps on the common window: one block per degree,
/// commuting with `GL_n` generators and with the standard inclusions.
pub fn hom_dim(m: &TruncatedViModule, n: &TruncatedViModule) -> Result<usize> {
    m.ctx().check_same(n.ctx())?;
    let d = m.max_degree().min(n.max_degree());
    let shapes = (0..=d).map(|k| (n.dim(k), m.dim(k))).collect();
    let mut sys = System::new(m.ctx().ring(), shapes);
    for k in 0..=d {
        for (x, y) in m.gl_actions(k).iter().zip(n.gl_actions(k)) {
            let eq = sys.block(n.dim(k), m.dim(k));
            sys.term(eq, k, None, Some(x), false);
            sys.term(eq, k, Some(y), None, true);
        }
        if k < d {
            let eq = sys.block(n.dim(k + 1), m.dim(k));
            sys.term(eq, k + 1, None, Some(m.inclusion(k)), false);
            sys.term(eq, k, Some(n.inclusion(k)), None, true);
        }
    }
    Ok(sys.nullity())
}
