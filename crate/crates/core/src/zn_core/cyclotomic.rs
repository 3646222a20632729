use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::arith::divisors;
use super::poly;
use crate::error::{invariant, precondition, Result};

/// The `d`-th cyclotomic polynomial with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloPoly {
    d: usize,
    coeffs: Vec<BigInt>,
    small: Option<Vec<i64>>,
}

impl CycloPoly {
    fn from_coeffs(d: usize, coeffs: Vec<BigInt>) -> Self {
        let small = coeffs.iter().map(ToPrimitive::to_i64).collect();
        CycloPoly { d, coeffs, small }
    }

    pub fn order(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Machine-word copy of the coefficients, when they all fit.
    pub fn small_coeffs(&self) -> Option<&[i64]> {
        self.small.as_deref()
    }

    /// `Phi_d(1)`: `0` for `d = 1`, `p` for a power of the prime `p`, else `1`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Whether this polynomial divides `p` exactly.
    pub fn divides(&self, p: &[BigInt]) -> bool {
        let (_, r) = poly::divrem_monic(p, &self.coeffs);
        r.is_empty()
    }
}

impl Serialize for CycloPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

/// Computes `Phi_d` by dividing `X^d - 1` by every `Phi_e`, `e | d`, `e < d`.
pub fn cyclotomic(d: usize) -> Result<CycloPoly> {
    if d == 0 {
        return Err(precondition("cyclotomic polynomial of order 0"));
    }
    let mut memo = HashMap::new();
    let coeffs = cyclo_rec(d, &mut memo)?;
    Ok(CycloPoly::from_coeffs(d, coeffs))
}

fn cyclo_rec(d: usize, memo: &mut HashMap<usize, Vec<BigInt>>) -> Result<Vec<BigInt>> {
    if let Some(c) = memo.get(&d) {
        return Ok(c.clone());
    }
    let out = if d == 1 {
        vec![-BigInt::one(), BigInt::one()]
    } else {
        let mut num = poly::x_pow_minus_one(d);
        for e in divisors(d) {
            if e != d {
                let phi_e = cyclo_rec(e, memo)?;
                num = exact_div(&num, &phi_e, d)?;
            }
        }
        num
    };
    memo.insert(d, out.clone());
    Ok(out)
}

fn exact_div(num: &[BigInt], den: &[BigInt], d: usize) -> Result<Vec<BigInt>> {
    let (q, r) = poly::divrem_monic(num, den);
    if !r.is_empty() {
        return Err(invariant(format!("inexact division while building Phi_{d}")));
    }
    Ok(q)
}
