//! Dimension tables and exact fits `dim M(F^n) = P(q^n)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{Coeff, CoeffMatrix, CoeffRing, SparseVec};
use crate::vimod::{PresentedViModule, TruncatedViModule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    pub q: u32,
    pub dims: Vec<usize>,
}

impl DimTable {
    pub fn from_module(m: &TruncatedViModule) -> Self {
        DimTable {
            q: m.ctx().q(),
            dims: m.dims().to_vec(),
        }
    }
}

pub fn dims_table(p: &PresentedViModule, n: usize) -> Result<DimTable> {
    Ok(DimTable::from_module(&p.truncate(n)?))
}

/// `P(X) = Σ c_i X^i` with exact rational coefficients, valid from `n ≥ valid_from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    pub coefficients: Vec<BigRational>,
    pub valid_from: usize,
}

impl QPolynomial {
    /// −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coefficients.len() as i64 - 1
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_at_power(&self, q: u32, n: usize) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(q).pow(n as u32)))
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (i, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Interpolates `(q^n, dims[n])` for `n ≥ window_start` by the unique
/// polynomial of degree `≤ bound`, where `bound` defaults to two fewer than
/// the number of points so that at least one point checks the fit.
pub fn qpoly_fit(t: &DimTable, window_start: usize, bound: Option<usize>) -> Result<QPolynomial> {
    let points: Vec<(BigRational, BigRational)> = t
        .dims
        .iter()
        .enumerate()
        .skip(window_start)
        .map(|(n, &d)| {
            (
                BigRational::from_integer(BigInt::from(t.q).pow(n as u32)),
                BigRational::from_integer(BigInt::from(d)),
            )
        })
        .collect();
    if points.len() < 2 {
        return Err(Error::WindowTooSmall(format!(
            "need at least two points from degree {window_start}, have {}",
            points.len()
        )));
    }
    let bound = bound.unwrap_or(points.len() - 2).min(points.len() - 1);
    // Vandermonde columns: X^i evaluated at every point, then the values.
    let ring = CoeffRing::Rational;
    let col = |f: &dyn Fn(&BigRational) -> BigRational| {
        SparseVec::from_dense(
            &points
                .iter()
                .map(|(x, _)| Coeff::Rational(f(x)))
                .collect::<Vec<_>>(),
        )
    };
    let mut columns: Vec<SparseVec> = (0..=bound)
        .map(|i| col(&|x: &BigRational| num_traits::pow(x.clone(), i)))
        .collect();
    let values = SparseVec::from_dense(
        &points
            .iter()
            .map(|(_, y)| Coeff::Rational(y.clone()))
            .collect::<Vec<_>>(),
    );
    columns.push(values.neg());
    // A kernel vector with last entry 1 gives the coefficients.
    let system = CoeffMatrix::from_columns(points.len(), ring, columns);
    let (_, kernel) = system.rank_nullspace();
    let solution = kernel
        .columns()
        .iter()
        .find(|v| v.get(bound + 1).is_some())
        .ok_or(Error::NoExactFit { bound })?;
    let scale = solution.get(bound + 1).unwrap().inv()?;
    let mut coefficients: Vec<BigRational> = (0..=bound)
        .map(|i| {
            solution.get(i).map_or_else(BigRational::zero, |c| {
                (c * &scale).as_rational().expect("rational").clone()
            })
        })
        .collect();
    while coefficients.last().is_some_and(Zero::is_zero) {
        coefficients.pop();
    }
    Ok(QPolynomial {
        coefficients,
        valid_from: window_start,
    })
}

/// `P(q^n) = dims[n]` for each `n` in `holdout`.
pub fn qpoly_validate(
    p: &QPolynomial,
    t: &DimTable,
    holdout: impl IntoIterator<Item = usize>,
) -> Vec<(usize, bool)> {
    holdout
        .into_iter()
        .filter(|&n| n < t.dims.len())
        .map(|n| {
            let expected = BigRational::from_integer(BigInt::from(t.dims[n]));
            (n, p.eval_at_power(t.q, n) == expected)
        })
        .collect()
}
