use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::arith::gcd;
use super::context::GroupContext;
use super::multiset::MaskMultiset;
use super::poly;
use crate::error::{domain, Result};

/// Whether `Phi_d` divides `A(X)`, i.e. `A(zeta_d) = 0`, for `d | N`.
///
/// The polynomial is folded modulo `X^d - 1` and reduced by `Phi_d` in exact
/// integer arithmetic.
pub fn vanishes_at(a: &MaskMultiset, d: usize) -> Result<bool> {
    let ctx = a.ctx();
    if !ctx.is_divisor(d) {
        return Err(domain(format!("{d} does not divide {}", ctx.n())));
    }
    let mut folded = vec![0i64; d];
    for (x, &c) in a.coeffs().iter().enumerate() {
        folded[x % d] += c as i64;
    }
    let phi = ctx.cyclotomic(d)?;
    if let Some(den) = phi.small_coeffs() {
        let mut rem = folded.clone();
        if poly::rem_monic_i64(&mut rem, den).is_some() {
            return Ok(rem.iter().all(|&c| c == 0));
        }
    }
    let big: Vec<BigInt> = folded.into_iter().map(BigInt::from).collect();
    Ok(phi.divides(&big))
}

/// The zero set `Z(A)`, stored as the divisors `d | N` with `A(zeta_d) = 0`.
///
/// A residue `x` lies in `Z(A)` exactly when `N / gcd(x, N)` is one of these
/// divisors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSet {
    #[serde(skip)]
    ctx: Arc<GroupContext>,
    vanishing_divisors: Vec<usize>,
}

impl ZeroSet {
    pub fn ctx(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    /// Divisors `d | N` with `Phi_d | A`, ascending.
    pub fn vanishing_divisors(&self) -> &[usize] {
        &self.vanishing_divisors
    }

    pub fn vanishes_at_order(&self, d: usize) -> bool {
        self.vanishing_divisors.binary_search(&d).is_ok()
    }

    /// Whether the residue `x` belongs to `Z(A)`.
    pub fn contains(&self, x: usize) -> bool {
        let n = self.ctx.n();
        self.vanishes_at_order(n / gcd(x % n, n))
    }

    /// All residues of `Z(A)`, ascending.
    pub fn residues(&self) -> Vec<usize> {
        (0..self.ctx.n()).filter(|&x| self.contains(x)).collect()
    }

    /// Bitmask of `Z(A)` for `N <= 128`.
    pub(crate) fn residue_bits(&self) -> u128 {
        (0..self.ctx.n()).filter(|&x| self.contains(x)).fold(0, |m, x| m | 1 << x)
    }
}

pub fn zero_set(a: &MaskMultiset) -> Result<ZeroSet> {
    if a.is_empty() {
        return Err(domain("zero set of the empty multiset"));
    }
    let ctx = a.ctx();
    let mut vanishing_divisors = Vec::new();
    for &d in ctx.divisors() {
        if vanishes_at(a, d)? {
            vanishing_divisors.push(d);
        }
    }
    Ok(ZeroSet { ctx: ctx.clone(), vanishing_divisors })
}
