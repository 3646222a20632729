//! Prime-power vanishing data and the conditions (T1)/(T2), together with the
//! constructions they enable: tiling complements, explicit spectra, and the
//! special two-prime constructions.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, invariant, precondition, Result};
use crate::pair_lab::{verify_spectral_pair, verify_tiling_pair, SpectralCheck, TilingCheck};
use crate::zn_core::arith::{gcd, valuation};
use crate::zn_core::{poly, vanishes_at, GroupContext, MaskMultiset};

/// The prime powers `s | N` with `A(zeta_s) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimePowerRecord {
    /// Vanishing prime powers, ascending.
    pub s_a: Vec<usize>,
    /// For each prime of `N`, the exponents `x` with `p^x` in `s_a`.
    pub exponents: Vec<(usize, Vec<u32>)>,
}

impl PrimePowerRecord {
    /// Exponent view for the prime `p`; empty when `p` does not divide `N`.
    pub fn exponents_of(&self, p: usize) -> &[u32] {
        self.exponents
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, e)| e.as_slice())
            .unwrap_or(&[])
    }

    pub fn contains(&self, s: usize) -> bool {
        self.s_a.binary_search(&s).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CmReport {
    pub t1: bool,
    pub t2: bool,
    pub t1_lhs: usize,
    pub t1_rhs: usize,
    pub t2_witness: Option<usize>,
    pub s_a: Vec<usize>,
}

impl CmReport {
    pub fn holds(&self) -> bool {
        self.t1 && self.t2
    }
}

fn require_nonempty_proper(a: &MaskMultiset) -> Result<()> {
    a.require_proper("set")?;
    if a.is_empty() {
        return Err(domain("set must be nonempty"));
    }
    Ok(())
}

pub fn sa_record(a: &MaskMultiset) -> Result<PrimePowerRecord> {
    require_nonempty_proper(a)?;
    let ctx = a.ctx();
    let mut s_a = Vec::new();
    let mut exponents = Vec::new();
    for &(p, e) in ctx.factorization() {
        let mut xs = Vec::new();
        for x in 1..=e {
            if vanishes_at(a, p.pow(x))? {
                xs.push(x);
                s_a.push(p.pow(x));
            }
        }
        exponents.push((p, xs));
    }
    s_a.sort_unstable();
    Ok(PrimePowerRecord { s_a, exponents })
}

/// Products of prime powers from `record`, one per prime, over at least two
/// distinct primes; ascending.
fn t2_products(record: &PrimePowerRecord) -> Vec<usize> {
    let mut products = vec![(1usize, 0usize)];
    for (p, xs) in &record.exponents {
        let mut next = products.clone();
        for &(v, k) in &products {
            for &x in xs {
                next.push((v * p.pow(x), k + 1));
            }
        }
        products = next;
    }
    let mut out: Vec<usize> = products.into_iter().filter(|&(_, k)| k >= 2).map(|(v, _)| v).collect();
    out.sort_unstable();
    out
}

pub fn check_t1t2(a: &MaskMultiset) -> Result<CmReport> {
    let record = sa_record(a)?;
    let t1_lhs = a.mass();
    let t1_rhs: usize = record
        .exponents
        .iter()
        .map(|(p, xs)| p.pow(xs.len() as u32))
        .product();
    let mut t2_witness = None;
    for s in t2_products(&record) {
        if !vanishes_at(a, s)? {
            t2_witness = Some(s);
            break;
        }
    }
    Ok(CmReport {
        t1: t1_lhs == t1_rhs,
        t2: t2_witness.is_none(),
        t1_lhs,
        t1_rhs,
        t2_witness,
        s_a: record.s_a,
    })
}

fn require_t1t2(a: &MaskMultiset) -> Result<CmReport> {
    let report = check_t1t2(a)?;
    if !report.t1 {
        return Err(precondition(format!(
            "{a} fails T1: |A| = {} but the vanishing prime powers give {}",
            report.t1_lhs, report.t1_rhs
        )));
    }
    if let Some(s) = report.t2_witness {
        return Err(precondition(format!("{a} fails T2: Phi_{s} does not divide A")));
    }
    Ok(report)
}

/// Reduces an integer polynomial modulo `X^N - 1` into a multiset; fails if a
/// coefficient is negative or too large.
fn fold_to_multiset(ctx: &std::sync::Arc<GroupContext>, p: &[BigInt]) -> Result<MaskMultiset> {
    let n = ctx.n();
    let mut acc = vec![BigInt::zero(); n];
    for (i, c) in p.iter().enumerate() {
        acc[i % n] += c;
    }
    let coeffs = acc
        .iter()
        .map(|c| c.to_u32())
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| invariant("constructed polynomial has coefficients outside 0..2^32"))?;
    MaskMultiset::new(ctx, coeffs)
}

fn cyclo_inflated(ctx: &GroupContext, s: usize, k: usize) -> Result<Vec<BigInt>> {
    Ok(poly::inflate(ctx.cyclotomic(s)?.coeffs(), k))
}

fn expect_tiling(a: &MaskMultiset, t: &MaskMultiset, what: &str) -> Result<()> {
    match verify_tiling_pair(a, t)? {
        TilingCheck::Verified(_) => Ok(()),
        TilingCheck::Rejected(f) => Err(invariant(format!(
            "{what} {t} is not a tiling complement of {a}: {f:?}"
        ))),
    }
}

/// The complement `T(X) = prod_{s in S^N \ S_A} Phi_s(X^{N_s})`, where `N_s` is
/// the largest divisor of `N` prime to `s`.
pub fn build_tiling_complement_cm(a: &MaskMultiset) -> Result<MaskMultiset> {
    let report = require_t1t2(a)?;
    let ctx = a.ctx();
    let mut t = vec![BigInt::one()];
    for s in ctx.prime_powers() {
        if report.s_a.binary_search(&s).is_err() {
            t = poly::mul(&t, &cyclo_inflated(ctx, s, ctx.coprime_part(s))?);
        }
    }
    let t = fold_to_multiset(ctx, &t)?;
    expect_tiling(a, &t, "constructed complement")?;
    Ok(t)
}

/// The spectrum of all sums `sum_{s in S_A} k_s N/s`, `0 <= k_s < p` for the
/// prime `p` underlying `s`.
pub fn build_laba_spectrum(a: &MaskMultiset) -> Result<MaskMultiset> {
    let report = require_t1t2(a)?;
    laba_spectrum_from(a, &report.s_a)
}

fn laba_spectrum_from(a: &MaskMultiset, s_a: &[usize]) -> Result<MaskMultiset> {
    let ctx = a.ctx();
    let n = ctx.n();
    let mut elements = vec![0usize];
    for &s in s_a {
        let p = ctx
            .primes()
            .into_iter()
            .find(|p| s % p == 0)
            .expect("prime power divides N");
        let step = n / s;
        elements = elements
            .iter()
            .flat_map(|&x| (0..p).map(move |k| (x + k * step) % n))
            .collect();
    }
    let b = MaskMultiset::from_elements(ctx, &elements);
    if !b.is_proper() || b.mass() != a.mass() {
        return Err(invariant(format!("spectrum construction for {a} produced {b}")));
    }
    match verify_spectral_pair(a, &b)? {
        SpectralCheck::Verified(_) => Ok(b),
        SpectralCheck::Rejected(f) => Err(invariant(format!(
            "constructed spectrum {b} of {a} fails verification: {f:?}"
        ))),
    }
}

/// Result of certifying that a tile satisfies (T1)/(T2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TilingCertificate {
    pub report: CmReport,
    /// The dilation factor `M` with `A(X) T(X^M) ≡ 1 + ... + X^{N-1}`.
    pub dilation: usize,
    pub spectrum: MaskMultiset,
}

/// For `N = p^k · (squarefree)`, certifies (T1)/(T2) for a tile `A` by
/// dilating its complement by the part `M` of `|A|` prime to `p`, and returns
/// the resulting explicit spectrum.
pub fn tiling_implies_spectral(a: &MaskMultiset, t: &MaskMultiset) -> Result<TilingCertificate> {
    let ctx = a.ctx();
    let n = ctx.n();
    let high: Vec<(usize, u32)> = ctx.factorization().iter().copied().filter(|&(_, e)| e > 1).collect();
    if high.len() > 1 {
        return Err(domain(format!(
            "N = {n} has more than one repeated prime factor"
        )));
    }
    if !verify_tiling_pair(a, t)?.is_verified() {
        return Err(precondition(format!("({a}, {t}) is not a tiling pair")));
    }
    let size = a.mass();
    let dilation = match high.first() {
        Some(&(p, _)) if gcd(size, t.mass()) > 1 => size / p.pow(valuation(size, p)),
        _ => size,
    };
    let dilated = t.dilate(dilation as i64);
    if !dilated.is_proper() || !a.convolve(&dilated)?.is_full_group() {
        return Err(invariant(format!(
            "{dilation}·T is not a tiling complement of {a}"
        )));
    }
    // Each prime-power cyclotomic factor of X^N - 1 divides exactly one of
    // A(X) and T(X^M).
    for s in ctx.prime_powers() {
        if vanishes_at(a, s)? == vanishes_at(&dilated, s)? {
            return Err(invariant(format!(
                "Phi_{s} does not split between {a} and {dilation}·T"
            )));
        }
    }
    let report = check_t1t2(a)?;
    if !report.holds() {
        return Err(invariant(format!("tile {a} fails T1/T2: {report:?}")));
    }
    let spectrum = laba_spectrum_from(a, &report.s_a)?;
    Ok(TilingCertificate { report, dilation, spectrum })
}

fn require_spectral(a: &MaskMultiset, b: &MaskMultiset) -> Result<()> {
    match verify_spectral_pair(a, b)? {
        SpectralCheck::Verified(_) => Ok(()),
        SpectralCheck::Rejected(f) => Err(precondition(format!(
            "({a}, {b}) is not a spectral pair: {f:?}"
        ))),
    }
}

/// Tiling complement of a spectral set in `Z_{p^m q^n}` whose size is not
/// divisible by `pq`: `(sum_{s < q^n} X^{p^m s}) · prod_{r not in R} Phi_{p^r}(X)`
/// where `R` collects the `r` with `Phi_{p^r q^k} | A` for some `k`.
pub fn nopq_complement(a: &MaskMultiset, b: &MaskMultiset) -> Result<MaskMultiset> {
    let ctx = a.ctx();
    let shape = ctx.require_two_prime()?;
    require_spectral(a, b)?;
    let size = a.mass();
    let shape = if !size.is_multiple_of(shape.q) {
        shape
    } else if !size.is_multiple_of(shape.p) {
        shape.swapped()
    } else {
        return Err(precondition(format!(
            "|A| = {size} is divisible by {}·{}",
            shape.p, shape.q
        )));
    };
    let (p, m, q, n_exp) = (shape.p, shape.m, shape.q, shape.n);
    let mut outside_r = Vec::new();
    for r in 1..=m {
        let mut in_r = false;
        for k in 0..=n_exp {
            if vanishes_at(a, p.pow(r) * q.pow(k))? {
                in_r = true;
                break;
            }
        }
        if !in_r {
            outside_r.push(r);
        }
    }
    let pm = p.pow(m);
    let mut comb = vec![BigInt::zero(); pm * (q.pow(n_exp) - 1) + 1];
    for s in 0..q.pow(n_exp) {
        comb[pm * s] = BigInt::one();
    }
    for r in outside_r {
        comb = poly::mul(&comb, ctx.cyclotomic(p.pow(r))?.coeffs());
    }
    let t = fold_to_multiset(ctx, &comb)?;
    expect_tiling(a, &t, "complement")?;
    Ok(t)
}

/// For a spectral pair in `Z_{p^m q^n}` with `p^m | |A|` (or `q^n | |A|`),
/// certifies (T1)/(T2) by class counting: each class `A_{j mod p^m}` has
/// exactly `q^k` elements, `k` the number of powers of `q` in `S_B`, and the
/// powers of `q` in `S_A` are `q^{n - n_i + 1}`.
pub fn maxpower_check(a: &MaskMultiset, b: &MaskMultiset) -> Result<CmReport> {
    let ctx = a.ctx();
    let shape = ctx.require_two_prime()?;
    require_spectral(a, b)?;
    let size = a.mass();
    let shape = if size.is_multiple_of(shape.p.pow(shape.m)) {
        shape
    } else if size.is_multiple_of(shape.q.pow(shape.n)) {
        shape.swapped()
    } else {
        return Err(precondition(format!(
            "|A| = {size} is divisible by neither {}^{} nor {}^{}",
            shape.p, shape.m, shape.q, shape.n
        )));
    };
    let (p, m, q, n_exp) = (shape.p, shape.m, shape.q, shape.n);
    let rec_b = sa_record(b)?;
    let rec_a = sa_record(a)?;
    let b_q = rec_b.exponents_of(q);
    let class_size = q.pow(b_q.len() as u32);
    let pm = p.pow(m);
    for j in 0..pm {
        let got = a.restrict_class(j, pm)?.mass();
        if got != class_size {
            return Err(invariant(format!(
                "class {j} mod {pm} of {a} has {got} elements, expected {class_size}"
            )));
        }
    }
    let expected_p: Vec<u32> = (1..=m).collect();
    let mut expected_q: Vec<u32> = b_q.iter().map(|&x| n_exp - x + 1).collect();
    expected_q.sort_unstable();
    if rec_a.exponents_of(p) != expected_p || rec_a.exponents_of(q) != expected_q {
        return Err(invariant(format!(
            "vanishing prime powers of {a} are {:?}, not the predicted pattern",
            rec_a.s_a
        )));
    }
    let report = check_t1t2(a)?;
    if !report.holds() {
        return Err(invariant(format!("{a} fails T1/T2: {report:?}")));
    }
    Ok(report)
}
