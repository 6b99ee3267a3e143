//! Exact arithmetic over `F_q` and over the coefficient ring.

pub mod coeff;
pub mod echelon;
pub mod fq;
pub mod matrix;
pub mod sparse;

pub use coeff::{Coeff, CoeffRing};
pub use echelon::{kernel_of_columns, quotient_basis, EchelonBasis, QuotientMap, SpanCoordinates};
pub use fq::{ff_inverse, is_prime, primitive_root, FqMatrix, FqScalar};
pub use matrix::CoeffMatrix;
pub use sparse::{linear_combination, SparseVec};
