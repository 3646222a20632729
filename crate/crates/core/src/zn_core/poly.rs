//! Dense integer polynomials, coefficients in ascending degree order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub(crate) fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `num` by a monic `den`.
pub(crate) fn divrem_monic(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(den.last().is_some_and(One::is_one));
    let mut rem: Vec<BigInt> = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for top in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[top]);
        if c.is_zero() {
            continue;
        }
        let shift = top - dd;
        for (k, dk) in den[..dd].iter().enumerate() {
            rem[shift + k] -= &c * dk;
        }
        quot[shift] = c;
    }
    rem.truncate(dd);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Remainder of `num` by a monic `den` in machine integers; `None` on overflow.
pub(crate) fn rem_monic_i64(num: &mut [i64], den: &[i64]) -> Option<()> {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return Some(());
    }
    for top in (dd..num.len()).rev() {
        let c = num[top];
        if c == 0 {
            continue;
        }
        num[top] = 0;
        let shift = top - dd;
        for (k, &dk) in den[..dd].iter().enumerate() {
            if dk != 0 {
                num[shift + k] = num[shift + k].checked_sub(c.checked_mul(dk)?)?;
            }
        }
    }
    Some(())
}

/// `X^d - 1`.
pub(crate) fn x_pow_minus_one(d: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d + 1];
    p[0] = -BigInt::one();
    p[d] = BigInt::one();
    p
}

/// Substitute `X -> X^k`.
pub(crate) fn inflate(p: &[BigInt], k: usize) -> Vec<BigInt> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); (p.len() - 1) * k + 1];
    for (i, c) in p.iter().enumerate() {
        out[i * k] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn division_reconstructs_dividend() {
        let num = big(&[3, -1, 4, 1, -5, 9, 2]);
        let den = big(&[2, 0, -1, 1]);
        let (q, r) = divrem_monic(&num, &den);
        let mut back = mul(&q, &den);
        back.resize(num.len().max(back.len()), BigInt::zero());
        for (i, c) in r.iter().enumerate() {
            back[i] += c;
        }
        trim(&mut back);
        assert_eq!(back, num);
        assert!(r.len() < den.len() - 1 + 1);
    }

    #[test]
    fn machine_remainder_agrees_with_big() {
        let num = [7i64, -3, 0, 5, 1, -2, 8];
        let den = [1i64, -1, 0, 1];
        let mut small = num.to_vec();
        rem_monic_i64(&mut small, &den).unwrap();
        let (_, r) = divrem_monic(&big(&num), &big(&den));
        let mut r_small = big(&small);
        trim(&mut r_small);
        assert_eq!(r, r_small);
    }

    #[test]
    fn machine_remainder_reports_overflow() {
        let mut num = vec![0i64, 0, 0, i64::MAX];
        assert!(rem_monic_i64(&mut num, &[-3, 1]).is_none());
    }
}
