//! Subsets of `Z_N` as `u128` bitmasks, `N <= 128`.

use std::sync::Arc;

use crate::error::{domain, Result};
use crate::zn_core::{GroupContext, MaskMultiset};

pub const MAX_ORDER: usize = 128;

pub(crate) fn require_small(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(domain(format!("searches support N <= {MAX_ORDER}, got {n}")));
    }
    Ok(())
}

pub(crate) fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// `{x + t mod n : x in bits}`.
pub(crate) fn rotate(bits: u128, t: usize, n: usize) -> u128 {
    let t = t % n;
    if t == 0 {
        return bits;
    }
    ((bits << t) | (bits >> (n - t))) & full_mask(n)
}

pub(crate) fn elements(mut bits: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(bits.count_ones() as usize);
    while bits != 0 {
        out.push(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

pub(crate) fn from_set(a: &MaskMultiset) -> u128 {
    a.support().iter().fold(0, |m, &x| m | 1 << x)
}

pub(crate) fn to_set(ctx: &Arc<GroupContext>, bits: u128) -> MaskMultiset {
    MaskMultiset::from_elements(ctx, &elements(bits))
}

/// Lexicographic order on the sorted element lists of two sets of equal
/// size: the smaller set owns the least element of the symmetric difference.
pub(crate) fn lex_less(x: u128, y: u128) -> bool {
    let diff = x ^ y;
    diff != 0 && x & (diff & diff.wrapping_neg()) != 0
}

/// `{u x mod n : x in bits}`.
pub(crate) fn dilate(bits: u128, u: usize, n: usize) -> u128 {
    let mut out = 0;
    let mut rest = bits;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1u128 << (x * u % n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_and_order() {
        assert_eq!(rotate(0b1011, 2, 4), 0b1110);
        assert_eq!(rotate(1 << 127, 1, 128), 1);
        assert_eq!(elements(0b10110), vec![1, 2, 4]);
        assert!(lex_less(0b0011, 0b0101));
        assert!(!lex_less(0b0101, 0b0011));
        assert!(!lex_less(0b0101, 0b0101));
        // {0,1,5} < {0,2,3} although the first mask is the larger integer.
        assert!(lex_less(0b100011, 0b001101));
        assert_eq!(dilate(0b0110, 5, 6), 0b110000);
    }
}
