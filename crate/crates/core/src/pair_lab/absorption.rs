use serde::Serialize;

use super::verify::{verify_spectral_pair, SpectralCheck, SpectralPair};
use crate::error::{domain, invariant, precondition, Result};
use crate::zn_core::arith::is_prime;
use crate::zn_core::{vanishes_at, MaskMultiset, TwoPrimeShape};

/// How the class `B_{i mod d}` splits into the classes `B_{i + kd mod pd}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "k", rename_all = "snake_case")]
pub enum ClassVerdict {
    /// The whole class lies in `B_{i + kd mod pd}`. Empty classes report `k = 0`.
    Absorbed(usize),
    /// Every refinement holds `|B_{i mod d}| / p` elements.
    Equidistributed,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbsorptionReport {
    pub d: usize,
    pub p: usize,
    /// Indexed by the class representative `i` in `0..d`.
    pub verdicts: Vec<ClassVerdict>,
}

impl AbsorptionReport {
    pub fn all_absorbed(&self) -> bool {
        self.verdicts.iter().all(|v| matches!(v, ClassVerdict::Absorbed(_)))
    }

    pub fn any_absorbed(&self) -> bool {
        self.verdicts.iter().any(|v| matches!(v, ClassVerdict::Absorbed(_)))
    }

    pub fn any_neither(&self) -> bool {
        self.verdicts.contains(&ClassVerdict::Neither)
    }
}

fn class_sizes(b: &MaskMultiset, modulus: usize) -> Vec<usize> {
    let mut sizes = vec![0; modulus];
    for (x, &c) in b.coeffs().iter().enumerate() {
        sizes[x % modulus] += c as usize;
    }
    sizes
}

/// Classifies each class `B_{i mod d}` as absorbed, equidistributed or
/// neither modulo `pd`.
pub fn classify_absorption(b: &MaskMultiset, d: usize, p: usize) -> Result<AbsorptionReport> {
    if !is_prime(p) || d == 0 || !b.n().is_multiple_of(p * d) {
        return Err(domain(format!("{p}·{d} is not a divisor of {} with {p} prime", b.n())));
    }
    let coarse = class_sizes(b, d);
    let fine = class_sizes(b, p * d);
    let verdicts = (0..d)
        .map(|i| {
            let total = coarse[i];
            if let Some(k) = (0..p).find(|&k| fine[i + k * d] == total) {
                ClassVerdict::Absorbed(k)
            } else if (0..p).all(|k| fine[i + k * d] * p == total) {
                ClassVerdict::Equidistributed
            } else {
                ClassVerdict::Neither
            }
        })
        .collect();
    Ok(AbsorptionReport { d, p, verdicts })
}

/// For a spectral pair in `Z_{p^m q^n}` and `d | N/pq` with
/// `A(zeta_N^d) B(zeta_{pd}) ≠ 0 = B(zeta_{pqd})`, every class of `B` mod `d`
/// is absorbed or equidistributed mod `pd`, with at least one absorbed.
/// Returns `None` when that hypothesis fails.
pub fn absorption_lemma_check(pair: &SpectralPair, p: usize, d: usize) -> Result<Option<AbsorptionReport>> {
    let shape = pair.a().ctx().require_two_prime()?;
    let n = pair.a().n();
    let q = other_prime(shape, p)?;
    if d == 0 || !(n / (p * q)).is_multiple_of(d) {
        return Err(domain(format!("{d} does not divide {}", n / (p * q))));
    }
    let (a, b) = (pair.a(), pair.b());
    let hypothesis = !vanishes_at(&a.dilate(d as i64), n)?
        && !vanishes_at(b, p * d)?
        && vanishes_at(b, p * q * d)?;
    if !hypothesis {
        return Ok(None);
    }
    let report = classify_absorption(b, d, p)?;
    if report.any_neither() || !report.any_absorbed() {
        return Err(invariant(format!(
            "classes of {b} mod {d} violate the absorption/equidistribution dichotomy: {:?}",
            report.verdicts
        )));
    }
    Ok(Some(report))
}

fn other_prime(shape: TwoPrimeShape, p: usize) -> Result<usize> {
    if p == shape.p {
        Ok(shape.q)
    } else if p == shape.q {
        Ok(shape.p)
    } else {
        Err(domain(format!("{p} is not a prime factor of N")))
    }
}

fn exponent(shape: TwoPrimeShape, p: usize) -> u32 {
    if p == shape.p {
        shape.m
    } else {
        shape.n
    }
}

/// `K_p(B)`: the `k` in `[0, m-1]` such that every class mod `p^k` is
/// absorbed mod `p^{k+1}`.
pub fn absorption_exponents(b: &MaskMultiset, p: usize) -> Result<Vec<u32>> {
    let m = b.ctx().exponent_of(p);
    if m == 0 || !is_prime(p) {
        return Err(domain(format!("{p} is not a prime factor of {}", b.n())));
    }
    let mut out = Vec::new();
    for k in 0..m {
        if classify_absorption(b, p.pow(k), p)?.all_absorbed() {
            out.push(k);
        }
    }
    Ok(out)
}

fn arithmetic_progression(b: &MaskMultiset, step: usize, len: usize) -> MaskMultiset {
    let elems: Vec<usize> = (0..len).map(|j| j * step).collect();
    MaskMultiset::from_elements(b.ctx(), &elems)
}

/// With `k` in `K_p(B)`: returns `(A ⊕ T, B ⊕ S)` where
/// `T = {j p^{m-k-1} N_p}` and `S = {j p^k N_p}` for `0 <= j < p`, `N_p` the
/// part of `N` prime to `p`. The result is re-verified as a spectral pair with
/// `B̄(zeta_{p^{k+1}}) = 0`.
pub fn extend_pair(pair: &SpectralPair, p: usize, k: u32) -> Result<SpectralPair> {
    let ctx = pair.a().ctx();
    let shape = ctx.require_two_prime()?;
    other_prime(shape, p)?;
    let m = exponent(shape, p);
    if !absorption_exponents(pair.b(), p)?.contains(&k) {
        return Err(precondition(format!(
            "not every class of {} mod {p}^{k} is absorbed mod {p}^{}",
            pair.b(),
            k + 1
        )));
    }
    let coprime = ctx.coprime_part(p);
    let t = arithmetic_progression(pair.a(), p.pow(m - k - 1) * coprime, p);
    let s = arithmetic_progression(pair.b(), p.pow(k) * coprime, p);
    let a_bar = pair.a().convolve(&t)?;
    let b_bar = pair.b().convolve(&s)?;
    if !a_bar.is_proper() || !b_bar.is_proper() {
        return Err(invariant(format!(
            "extension of ({}, {}) at {p}^{k} is not a pair of direct sums",
            pair.a(),
            pair.b()
        )));
    }
    let extended = match verify_spectral_pair(&a_bar, &b_bar)? {
        SpectralCheck::Verified(pr) => pr,
        SpectralCheck::Rejected(f) => {
            return Err(invariant(format!(
                "extended pair ({a_bar}, {b_bar}) is not spectral: {f:?}"
            )))
        }
    };
    if !vanishes_at(&b_bar, p.pow(k + 1))? {
        return Err(invariant(format!("{b_bar} does not vanish at zeta_{}", p.pow(k + 1))));
    }
    Ok(extended)
}

fn swap(pair: &SpectralPair) -> Result<SpectralPair> {
    match verify_spectral_pair(pair.b(), pair.a())? {
        SpectralCheck::Verified(p) => Ok(p),
        SpectralCheck::Rejected(f) => Err(invariant(format!(
            "({}, {}) is spectral but its reverse is not: {f:?}",
            pair.a(),
            pair.b()
        ))),
    }
}

/// Applies [`extend_pair`] to both members and both primes until no member
/// has absorption at any prime power.
pub fn absorption_free_closure(pair: &SpectralPair) -> Result<SpectralPair> {
    let shape = pair.a().ctx().require_two_prime()?;
    let rounds = (shape.m + shape.n) as usize;
    let mut current = pair.clone();
    for _ in 0..rounds {
        let mut changed = false;
        for reversed in [false, true] {
            let mut oriented = if reversed { swap(&current)? } else { current.clone() };
            for p in [shape.p, shape.q] {
                while let Some(&k) = absorption_exponents(oriented.b(), p)?.first() {
                    oriented = extend_pair(&oriented, p, k)?;
                    changed = true;
                }
            }
            current = if reversed { swap(&oriented)? } else { oriented };
        }
        if !changed {
            return Ok(current);
        }
    }
    Err(invariant(format!(
        "absorption-free closure of ({}, {}) did not settle within {rounds} rounds",
        pair.a(),
        pair.b()
    )))
}
