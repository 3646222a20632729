use serde::Serialize;

use crate::error::{domain, invariant, Result};
use crate::zn_core::arith::gcd;
use crate::zn_core::{vanishes_at, zero_set, MaskMultiset};

/// A spectral pair `(A, B)`: `|A| = |B|` and `B - B ⊆ {0} ∪ Z(A)`.
///
/// Values of this type exist only after [`verify_spectral_pair`] accepted
/// them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralPair {
    a: MaskMultiset,
    b: MaskMultiset,
}

impl SpectralPair {
    pub fn a(&self) -> &MaskMultiset {
        &self.a
    }

    pub fn b(&self) -> &MaskMultiset {
        &self.b
    }

    pub fn into_parts(self) -> (MaskMultiset, MaskMultiset) {
        (self.a, self.b)
    }
}

/// A tiling pair `A ⊕ T = Z_N`, produced only by [`verify_tiling_pair`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingPair {
    a: MaskMultiset,
    t: MaskMultiset,
}

impl TilingPair {
    pub fn a(&self) -> &MaskMultiset {
        &self.a
    }

    pub fn t(&self) -> &MaskMultiset {
        &self.t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralFailure {
    SizeMismatch { a: usize, b: usize },
    /// `b - b'` is a nonzero difference outside `Z(A)`.
    Orthogonality { b: usize, b_prime: usize, difference: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TilingFailure {
    SizeProduct { a: usize, t: usize, n: usize },
    /// A nonzero element of `(A - A) ∩ (T - T)`.
    SharedDifference { difference: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectralCheck {
    Verified(SpectralPair),
    Rejected(SpectralFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TilingCheck {
    Verified(TilingPair),
    Rejected(TilingFailure),
}

impl SpectralCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, SpectralCheck::Verified(_))
    }

    pub fn pair(self) -> Option<SpectralPair> {
        match self {
            SpectralCheck::Verified(p) => Some(p),
            SpectralCheck::Rejected(_) => None,
        }
    }
}

impl TilingCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, TilingCheck::Verified(_))
    }

    pub fn pair(self) -> Option<TilingPair> {
        match self {
            TilingCheck::Verified(p) => Some(p),
            TilingCheck::Rejected(_) => None,
        }
    }
}

fn check_operands(a: &MaskMultiset, b: &MaskMultiset) -> Result<()> {
    a.require_same_group(b)?;
    a.require_proper("first set")?;
    b.require_proper("second set")?;
    if a.is_empty() || b.is_empty() {
        return Err(domain("pair members must be nonempty"));
    }
    Ok(())
}

/// Spectral test through the residue set `Z(A)`: every nonzero `b - b'` must
/// lie in `Z(A)`.
pub fn spectral_by_differences(a: &MaskMultiset, b: &MaskMultiset) -> Result<Option<SpectralFailure>> {
    check_operands(a, b)?;
    if a.mass() != b.mass() {
        return Ok(Some(SpectralFailure::SizeMismatch { a: a.mass(), b: b.mass() }));
    }
    let z = zero_set(a)?;
    let n = a.n();
    let support = b.support();
    for &x in &support {
        for &y in &support {
            let diff = (x + n - y) % n;
            if diff != 0 && !z.contains(diff) {
                return Ok(Some(SpectralFailure::Orthogonality { b: x, b_prime: y, difference: diff }));
            }
        }
    }
    Ok(None)
}

/// Spectral test through orders: `A(zeta_ord(b - b')) = 0` for all `b != b'`.
pub fn spectral_by_orders(a: &MaskMultiset, b: &MaskMultiset) -> Result<Option<SpectralFailure>> {
    check_operands(a, b)?;
    if a.mass() != b.mass() {
        return Ok(Some(SpectralFailure::SizeMismatch { a: a.mass(), b: b.mass() }));
    }
    let n = a.n();
    let mut memo = vec![None; n + 1];
    let support = b.support();
    for &x in &support {
        for &y in &support {
            let diff = (x + n - y) % n;
            if diff == 0 {
                continue;
            }
            let order = n / gcd(diff, n);
            let vanishes = match memo[order] {
                Some(v) => v,
                None => {
                    let v = vanishes_at(a, order)?;
                    memo[order] = Some(v);
                    v
                }
            };
            if !vanishes {
                return Ok(Some(SpectralFailure::Orthogonality { b: x, b_prime: y, difference: diff }));
            }
        }
    }
    Ok(None)
}

/// Verifies `(a, b)` as a spectral pair by both formulations; they must agree.
pub fn verify_spectral_pair(a: &MaskMultiset, b: &MaskMultiset) -> Result<SpectralCheck> {
    let by_diff = spectral_by_differences(a, b)?;
    let by_order = spectral_by_orders(a, b)?;
    if by_diff.is_some() != by_order.is_some() {
        return Err(invariant(format!(
            "difference and order criteria disagree on ({a}, {b})"
        )));
    }
    Ok(match by_diff {
        None => SpectralCheck::Verified(SpectralPair { a: a.clone(), b: b.clone() }),
        Some(f) => SpectralCheck::Rejected(f),
    })
}

/// Tiling test through difference sets: `|A||T| = N` and
/// `(A - A) ∩ (T - T) = {0}`.
pub fn tiling_by_differences(a: &MaskMultiset, t: &MaskMultiset) -> Result<Option<TilingFailure>> {
    check_operands(a, t)?;
    let n = a.n();
    if a.mass() * t.mass() != n {
        return Ok(Some(TilingFailure::SizeProduct { a: a.mass(), t: t.mass(), n }));
    }
    let da = a.difference_set()?;
    let dt = t.difference_set()?;
    let mut in_t = vec![false; n];
    for x in dt {
        in_t[x] = true;
    }
    Ok(da
        .into_iter()
        .find(|&x| x != 0 && in_t[x])
        .map(|difference| TilingFailure::SharedDifference { difference }))
}

/// Tiling test through the product identity
/// `A(X) T(X) ≡ 1 + X + ... + X^{N-1}` mod `X^N - 1`.
pub fn tiling_by_product(a: &MaskMultiset, t: &MaskMultiset) -> Result<bool> {
    check_operands(a, t)?;
    Ok(a.convolve(t)?.is_full_group())
}

/// Verifies `(a, t)` as a tiling pair by both criteria; they must agree.
pub fn verify_tiling_pair(a: &MaskMultiset, t: &MaskMultiset) -> Result<TilingCheck> {
    let by_diff = tiling_by_differences(a, t)?;
    let by_product = tiling_by_product(a, t)?;
    if by_diff.is_none() != by_product {
        return Err(invariant(format!(
            "difference and product criteria disagree on ({a}, {t})"
        )));
    }
    Ok(match by_diff {
        None => TilingCheck::Verified(TilingPair { a: a.clone(), t: t.clone() }),
        Some(f) => TilingCheck::Rejected(f),
    })
}

/// `(A, u·B)` for a unit `u`, re-verified.
pub fn scale_spectrum(pair: &SpectralPair, u: i64) -> Result<SpectralPair> {
    let n = pair.a.n() as i64;
    if gcd(u.rem_euclid(n) as usize, n as usize) != 1 {
        return Err(domain(format!("{u} is not a unit modulo {n}")));
    }
    match verify_spectral_pair(&pair.a, &pair.b.dilate(u))? {
        SpectralCheck::Verified(p) => Ok(p),
        SpectralCheck::Rejected(f) => Err(invariant(format!(
            "scaling a spectrum by the unit {u} broke orthogonality: {f:?}"
        ))),
    }
}

/// Whether a proper set is contained in no coset of a proper subgroup.
///
/// For `N` with two prime factors this is the difference criterion
/// `(S - S) ∩ Z_N^* ≠ ∅`; otherwise every maximal subgroup `pZ_N` is tested.
pub fn is_primitive(s: &MaskMultiset) -> Result<bool> {
    s.require_proper("primitivity operand")?;
    if s.is_empty() {
        return Err(domain("primitivity of the empty set"));
    }
    let n = s.n();
    if n == 1 {
        return Ok(false);
    }
    if s.ctx().two_prime().is_some() {
        return Ok(s.difference_set()?.into_iter().any(|x| gcd(x, n) == 1));
    }
    let support = s.support();
    let first = support[0];
    Ok(s
        .ctx()
        .primes()
        .into_iter()
        .all(|p| support.iter().any(|&x| !(x + n - first).is_multiple_of(p))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> MaskMultiset {
        s.parse().unwrap()
    }

    #[test]
    fn spectral_examples() {
        let a = set("12:{0,1,6,7}");
        assert!(verify_spectral_pair(&a, &a).unwrap().is_verified());
        let full = set("6:{0,1,2,3,4,5}");
        assert!(verify_spectral_pair(&full, &full).unwrap().is_verified());
        let small = set("4:{0,1}");
        assert_eq!(
            verify_spectral_pair(&small, &small).unwrap(),
            SpectralCheck::Rejected(SpectralFailure::Orthogonality { b: 0, b_prime: 1, difference: 3 })
        );
        assert!(matches!(
            verify_spectral_pair(&a, &set("12:{0,6}")).unwrap(),
            SpectralCheck::Rejected(SpectralFailure::SizeMismatch { a: 4, b: 2 })
        ));
        assert!(verify_spectral_pair(&a, &set("6:{0}")).is_err());
        assert!(verify_spectral_pair(&a, &set("12:{0*2,1,2}")).is_err());
    }

    #[test]
    fn tiling_examples() {
        let a = set("12:{0,1,6,7}");
        assert!(verify_tiling_pair(&a, &set("12:{0,2,4}")).unwrap().is_verified());
        assert!(verify_tiling_pair(&set("5:{0,1,2,3,4}"), &set("5:{0}")).unwrap().is_verified());
        assert_eq!(
            verify_tiling_pair(&set("6:{0,3}"), &set("6:{0,3}")).unwrap(),
            TilingCheck::Rejected(TilingFailure::SizeProduct { a: 2, t: 2, n: 6 })
        );
        assert_eq!(
            verify_tiling_pair(&set("6:{0,3}"), &set("6:{0,1,3}")).unwrap(),
            TilingCheck::Rejected(TilingFailure::SharedDifference { difference: 3 })
        );
    }

    #[test]
    fn scaling_by_units() {
        let a = set("12:{0,1,6,7}");
        let pair = verify_spectral_pair(&a, &a).unwrap().pair().unwrap();
        assert_eq!(scale_spectrum(&pair, 1).unwrap(), pair);
        assert!(scale_spectrum(&pair, 5).is_ok());
        assert_eq!(scale_spectrum(&pair, 11).unwrap().b(), &a.dilate(-1));
        assert!(scale_spectrum(&pair, 4).is_err());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&set("6:{0,1}")).unwrap());
        assert!(!is_primitive(&set("6:{0,2,4}")).unwrap());
        assert!(!is_primitive(&set("6:{0,3}")).unwrap());
        // Three primes: no unit differences, yet in no coset of 2Z, 3Z or 5Z.
        assert!(is_primitive(&set("30:{0,6,10,15}")).unwrap());
        assert!(!is_primitive(&set("30:{0,6,12}")).unwrap());
    }
}
