//! Exact arithmetic in `Z_N` and `Z[X]/(X^N - 1)`.

pub mod arith;
mod context;
mod cyclotomic;
mod multiset;
mod parse;
pub(crate) mod poly;
mod zeros;

pub use context::{GroupContext, TwoPrimeShape};
pub use cyclotomic::{cyclotomic, CycloPoly};
pub use multiset::MaskMultiset;
pub use zeros::{vanishes_at, zero_set, ZeroSet};
