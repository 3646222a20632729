//! Diagnostics on spectral and tiling pairs.

mod absorption;
mod exclusion;
mod profile;
mod verify;

pub use absorption::{
    absorption_exponents, absorption_free_closure, absorption_lemma_check, classify_absorption,
    extend_pair, AbsorptionReport, ClassVerdict,
};
pub use exclusion::{
    exclusion_predicate, parse_factored, Clause, ExclusionReport, ExclusionVerdict, Window,
};
pub use profile::{
    check_wt1, check_wt2, deficit_bounds_check, root_profile, symmetry_check, DeficitReport,
    MemberRoots, Relation, RootEquation, RootProfile, SetComparison, SymmetryReport, Wt2Verdict,
};
pub use verify::{
    is_primitive, scale_spectrum, spectral_by_differences, spectral_by_orders, tiling_by_differences,
    tiling_by_product, verify_spectral_pair, verify_tiling_pair, SpectralCheck, SpectralFailure,
    SpectralPair, TilingCheck, TilingFailure, TilingPair,
};
