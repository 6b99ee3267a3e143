//! Shift and difference functors, the shift complex, local cohomology and
//! the identities relating them.

pub mod complex;
pub mod shift;
pub mod verify;

pub use complex::{
    build_shift_complex, local_cohomology, regularity_bound, stable_degree, LocalCohomologyTable,
    RegularityReport, ShiftComplex, StableDegreeReport,
};
pub use shift::{bar_delta, bar_sigma, bar_sigma_iter, eta, eta_iter, kappa, sigma_shift};
pub use verify::{
    verify_combinatorial_identity, verify_derivation, verify_gamma_commutes, verify_h0_delta,
    verify_iterated_coherence, verify_shift_tensor, verify_six_term, verify_split_injectivity,
};
