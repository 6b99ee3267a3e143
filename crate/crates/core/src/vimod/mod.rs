//! VI-modules: induced, coinduced, presented and windowed.

pub mod coinduced;
pub mod hom;
pub mod homology;
pub mod induced;
pub mod presented;
pub mod torsion;
pub mod truncated;

pub use coinduced::CoinducedModule;
pub use homology::{Certificate, GradedPiece};
pub use induced::{InducedBasisElement, InducedModule};
pub use presented::PresentedViModule;
pub use torsion::TorsionProbe;
pub use truncated::{saturate, ModuleMap, TruncatedViModule};
