use std::cmp::Ordering;
use std::sync::Arc;

use super::bits::{dilate, elements, from_set, lex_less, require_small, rotate, to_set};
use crate::error::{domain, Result};
use crate::zn_core::{GroupContext, MaskMultiset};

/// Sets are identified up to translation, or up to `x -> ux + v` with `u` a
/// unit when `affine` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitMode {
    #[default]
    Translation,
    Affine,
}

pub(crate) fn lex_cmp(x: u128, y: u128) -> Ordering {
    if x == y {
        Ordering::Equal
    } else if lex_less(x, y) {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// The lexicographically least translate of `bits` (which must be nonempty).
fn least_translate(bits: u128, n: usize) -> u128 {
    elements(bits)
        .into_iter()
        .map(|x| rotate(bits, n - x, n))
        .min_by(|&x, &y| lex_cmp(x, y))
        .unwrap_or(bits)
}

pub(crate) struct Canonicalizer {
    n: usize,
    units: Vec<usize>,
}

impl Canonicalizer {
    pub(crate) fn new(ctx: &GroupContext, mode: OrbitMode) -> Canonicalizer {
        let units = match mode {
            OrbitMode::Translation => vec![1],
            OrbitMode::Affine => ctx.units(),
        };
        Canonicalizer { n: ctx.n(), units }
    }

    pub(crate) fn canonical(&self, bits: u128) -> u128 {
        self.units
            .iter()
            .map(|&u| least_translate(dilate(bits, u, self.n), self.n))
            .min_by(|&x, &y| lex_cmp(x, y))
            .unwrap_or(bits)
    }

    /// Whether `bits`, which contains 0, is the least element of its orbit.
    pub(crate) fn is_canonical(&self, bits: u128) -> bool {
        let n = self.n;
        self.units.iter().all(|&u| {
            let image = dilate(bits, u, n);
            elements(image).into_iter().all(|x| !lex_less(rotate(image, n - x, n), bits))
        })
    }
}

/// Canonical representatives as bitmasks, ordered by size then
/// lexicographically.
pub(crate) fn canonical_masks(ctx: &GroupContext, sizes: &[usize], mode: OrbitMode) -> Vec<u128> {
    let n = ctx.n();
    let canon = Canonicalizer::new(ctx, mode);
    let mut out = Vec::new();
    for &k in sizes {
        if k == 0 || k > n {
            continue;
        }
        let start = out.len();
        // Gosper's hack over (k-1)-subsets of {1, ..., n-1}.
        let r = k - 1;
        let limit = 1u128 << (n - 1);
        let mut sub: u128 = if r == 0 { 0 } else { (1u128 << r) - 1 };
        loop {
            let bits = sub << 1 | 1;
            if canon.is_canonical(bits) {
                out.push(bits);
            }
            if sub == 0 {
                break;
            }
            let c = sub & sub.wrapping_neg();
            let carry = sub + c;
            sub = (((carry ^ sub) >> 2) / c) | carry;
            if sub >= limit {
                break;
            }
        }
        out[start..].sort_by(|&x, &y| lex_cmp(x, y));
    }
    out
}

/// One representative per orbit, each containing 0 and lexicographically
/// least in its orbit, ordered by size and then lexicographically.
/// `size = None` enumerates every size from 1 to `N`.
pub fn enumerate_canonical(ctx: &Arc<GroupContext>, size: Option<usize>, mode: OrbitMode) -> Result<Vec<MaskMultiset>> {
    require_small(ctx.n())?;
    let sizes: Vec<usize> = match size {
        Some(k) => vec![k],
        None => (1..=ctx.n()).collect(),
    };
    Ok(canonical_masks(ctx, &sizes, mode).into_iter().map(|b| to_set(ctx, b)).collect())
}

/// The canonical representative of the orbit of a proper nonempty set.
pub fn canonical_form(a: &MaskMultiset, mode: OrbitMode) -> Result<MaskMultiset> {
    a.require_proper("set")?;
    if a.is_empty() {
        return Err(domain("the empty set has no canonical form"));
    }
    require_small(a.n())?;
    Ok(to_set(a.ctx(), Canonicalizer::new(a.ctx(), mode).canonical(from_set(a))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zn_core::arith::{divisors, euler_phi, gcd};

    fn binomial(n: usize, k: usize) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }

    /// Necklace count: k-subsets of Z_n up to rotation.
    fn burnside_translation(n: usize, k: usize) -> u128 {
        let total: u128 = divisors(gcd(n, k))
            .into_iter()
            .map(|d| euler_phi(d) as u128 * binomial(n / d, k / d))
            .sum();
        total / n as u128
    }

    /// Average number of k-subsets fixed by the maps x -> ux + v.
    fn burnside_affine(n: usize, k: usize) -> usize {
        let units: Vec<usize> = (1..=n).map(|u| u % n).filter(|&u| gcd(u, n) == 1).collect();
        let mut fixed = 0;
        for &u in &units {
            for v in 0..n {
                for s in 0u32..1 << n {
                    if s.count_ones() as usize != k {
                        continue;
                    }
                    let image = (0..n).filter(|x| s >> x & 1 == 1).fold(0u32, |m, x| m | 1 << ((u * x + v) % n));
                    if image == s {
                        fixed += 1;
                    }
                }
            }
        }
        fixed / (units.len() * n)
    }

    #[test]
    fn small_examples() {
        let ctx = GroupContext::new(4).unwrap();
        let reps = enumerate_canonical(&ctx, Some(2), OrbitMode::Translation).unwrap();
        let reps: Vec<Vec<usize>> = reps.iter().map(|r| r.support()).collect();
        assert_eq!(reps, vec![vec![0, 1], vec![0, 2]]);
        for n in [1, 5, 12] {
            let ctx = GroupContext::new(n).unwrap();
            let reps = enumerate_canonical(&ctx, Some(1), OrbitMode::Translation).unwrap();
            assert_eq!(reps.len(), 1);
            assert_eq!(reps[0].support(), vec![0]);
        }
    }

    #[test]
    fn orbit_counts_match_burnside() {
        for n in 1..=12 {
            let ctx = GroupContext::new(n).unwrap();
            for k in 1..=n {
                let t = enumerate_canonical(&ctx, Some(k), OrbitMode::Translation).unwrap();
                assert_eq!(t.len() as u128, burnside_translation(n, k), "N={n} k={k}");
                let a = enumerate_canonical(&ctx, Some(k), OrbitMode::Affine).unwrap();
                assert_eq!(a.len(), burnside_affine(n, k), "affine N={n} k={k}");
            }
        }
    }

    #[test]
    fn representatives_are_fixed_points_of_canonical_form() {
        let ctx = GroupContext::new(10).unwrap();
        for mode in [OrbitMode::Translation, OrbitMode::Affine] {
            for rep in enumerate_canonical(&ctx, None, mode).unwrap() {
                assert_eq!(canonical_form(&rep, mode).unwrap(), rep);
                assert_eq!(canonical_form(&rep.translate(7).dilate(3), mode).unwrap(), canonical_form(&rep.dilate(3), mode).unwrap());
            }
        }
    }
}
