//! Spectral sets and tiles in finite cyclic groups, computed exactly.
//!
//! Sets and multisets over `Z_N` are represented by their mask polynomials
//! modulo `X^N - 1`; every root-of-unity question is answered by exact
//! divisibility by cyclotomic polynomials.

pub mod cm_structure;
pub mod error;
pub mod pair_lab;
pub mod search;
pub mod vanishing_sums;
pub mod zn_core;

pub use error::{Error, Result};
pub use zn_core::{
    cyclotomic, vanishes_at, zero_set, CycloPoly, GroupContext, MaskMultiset, TwoPrimeShape,
    ZeroSet,
};
