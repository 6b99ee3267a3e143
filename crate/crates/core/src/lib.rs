//! Exact computations with finitely generated VI-modules over `F_q`.

pub mod context;
pub mod error;
pub mod exactmat;
pub mod functors;
pub mod hilbert;
pub mod vbmod;
pub mod vicat;
pub mod vimod;

pub use context::ViContext;
pub use error::{Error, Result};
