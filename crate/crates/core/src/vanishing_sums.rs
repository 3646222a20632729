//! Vanishing sums of `N`-th roots of unity for `N = p^m q^n`: decomposition
//! into `p`- and `q`-cycles and the difference-hunting lemmas built on it.

use std::collections::HashSet;

use serde::{Serialize, Serializer};

use crate::error::{domain, invariant, precondition, Result};
use crate::zn_core::arith::{gcd, is_prime};
use crate::zn_core::{vanishes_at, MaskMultiset};

/// `A(X) ≡ P(X) Phi_p(X^{N/p}) + Q(X) Phi_q(X^{N/q})`: `p_part[x]` counts the
/// `p`-cycles `x + (N/p)Z_N` and `q_part[x]` the `q`-cycles `x + (N/q)Z_N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    #[serde(skip)]
    pub p: usize,
    #[serde(skip)]
    pub q: usize,
    #[serde(serialize_with = "coeffs_only")]
    pub p_part: MaskMultiset,
    #[serde(serialize_with = "coeffs_only")]
    pub q_part: MaskMultiset,
}

fn coeffs_only<S: Serializer>(m: &MaskMultiset, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.coeffs().serialize(s)
}

/// `P(X) Phi_r(X^{N/r})`: every element of `part` expanded to its `r`-cycle.
pub fn expand_cycles(part: &MaskMultiset, r: usize) -> MaskMultiset {
    let n = part.n();
    let step = n / r;
    let mut coeffs = vec![0u32; n];
    for (x, &c) in part.coeffs().iter().enumerate() {
        for i in 0..r {
            coeffs[(x + i * step) % n] += c;
        }
    }
    MaskMultiset::new(part.ctx(), coeffs).expect("length preserved")
}

impl CycleDecomposition {
    /// Recomputes `P(X) Phi_p(X^{N/p}) + Q(X) Phi_q(X^{N/q})`.
    pub fn recompose(&self) -> MaskMultiset {
        expand_cycles(&self.p_part, self.p)
            .add(&expand_cycles(&self.q_part, self.q))
            .expect("parts share a group")
    }
}

/// Removes the `r`-cycle through `x` if it lies inside `rest`.
fn take_cycle(rest: &mut [u32], x: usize, r: usize) -> bool {
    let n = rest.len();
    let step = n / r;
    if (0..r).any(|i| rest[(x + i * step) % n] == 0) {
        return false;
    }
    for i in 0..r {
        rest[(x + i * step) % n] -= 1;
    }
    true
}

fn put_cycle(rest: &mut [u32], x: usize, r: usize) {
    let n = rest.len();
    let step = n / r;
    for i in 0..r {
        rest[(x + i * step) % n] += 1;
    }
}

/// Depth-first peeling: the lowest remaining element must be covered by the
/// `p`-cycle or the `q`-cycle through it. Failed remainders are memoized.
fn peel(
    rest: &mut Vec<u32>,
    primes: [usize; 2],
    chosen: &mut Vec<(usize, usize)>,
    dead: &mut HashSet<Vec<u32>>,
) -> bool {
    let Some(x) = rest.iter().position(|&c| c > 0) else {
        return true;
    };
    if dead.contains(rest) {
        return false;
    }
    for (which, &r) in primes.iter().enumerate() {
        if take_cycle(rest, x, r) {
            chosen.push((which, x));
            if peel(rest, primes, chosen, dead) {
                return true;
            }
            chosen.pop();
            put_cycle(rest, x, r);
        }
    }
    dead.insert(rest.clone());
    false
}

pub fn lam_leung_decompose(a: &MaskMultiset) -> Result<CycleDecomposition> {
    let ctx = a.ctx();
    let shape = ctx.require_two_prime()?;
    let n = ctx.n();
    if !vanishes_at(a, n)? {
        return Err(precondition(format!("{a} does not vanish at a primitive {n}-th root of unity")));
    }
    let (p, q) = (shape.p, shape.q);
    let mut rest = a.coeffs().to_vec();
    let mut chosen = Vec::new();
    if !peel(&mut rest, [p, q], &mut chosen, &mut HashSet::new()) {
        return Err(invariant(format!("{a} vanishes at zeta_{n} but has no cycle decomposition")));
    }
    let mut p_coeffs = vec![0u32; n];
    let mut q_coeffs = vec![0u32; n];
    for (which, x) in chosen {
        if which == 0 {
            p_coeffs[x % (n / p)] += 1;
        } else {
            q_coeffs[x % (n / q)] += 1;
        }
    }
    let dec = CycleDecomposition {
        p,
        q,
        p_part: MaskMultiset::new(ctx, p_coeffs)?,
        q_part: MaskMultiset::new(ctx, q_coeffs)?,
    };
    if dec.recompose() != *a {
        return Err(invariant(format!("decomposition of {a} does not recompose")));
    }
    // A part can only be empty when every dilation by a power of that prime
    // still vanishes at zeta_N.
    for (part, r, e) in [(&dec.p_part, p, shape.m), (&dec.q_part, q, shape.n)] {
        if part.is_empty() {
            for k in 1..=e {
                if !vanishes_at(&a.dilate(r.pow(k) as i64), n)? {
                    return Err(invariant(format!(
                        "{a} has an empty {r}-cycle part though its {}-dilation does not vanish",
                        r.pow(k)
                    )));
                }
            }
        }
    }
    Ok(dec)
}

fn require_prime_divisor(a: &MaskMultiset, r: usize) -> Result<()> {
    if !is_prime(r) || !a.n().is_multiple_of(r) {
        return Err(domain(format!("{r} is not a prime divisor of {}", a.n())));
    }
    Ok(())
}

/// Whether `A` is invariant under translation by `N/r`, i.e. a union of
/// `r`-cycles.
pub fn is_cycle_union(a: &MaskMultiset, r: usize) -> Result<bool> {
    require_prime_divisor(a, r)?;
    let n = a.n();
    let step = n / r;
    let c = a.coeffs();
    Ok((0..n).all(|x| c[x] == c[(x + step) % n]))
}

/// Returns whether `A(zeta_d) = 0` for every `d` with `p^m | d | N`, where
/// `p^m` is the exact power of `p` in `N`. When it does, `A` must be a union
/// of `p`-cycles; anything else is reported as an invariant violation.
pub fn ma_lemma_check(a: &MaskMultiset, p: usize) -> Result<bool> {
    require_prime_divisor(a, p)?;
    let ctx = a.ctx();
    let pm = p.pow(ctx.exponent_of(p));
    for &d in ctx.divisors() {
        if d % pm == 0 && !vanishes_at(a, d)? {
            return Ok(false);
        }
    }
    if !is_cycle_union(a, p)? {
        return Err(invariant(format!(
            "{a} vanishes at every order divisible by {pm} but is not a union of {p}-cycles"
        )));
    }
    Ok(true)
}

/// Finds `x, y` in `elements` whose difference has order exactly `order`.
fn difference_of_order(elements: &[usize], n: usize, order: usize) -> Option<(usize, usize)> {
    for &x in elements {
        for &y in elements {
            let diff = (x + n - y) % n;
            if diff != 0 && n / gcd(diff, n) == order {
                return Some((x, y));
            }
        }
    }
    None
}

/// If some class `A ∩ (j + (N/pq)Z_N)` is not supported on a single `p`- or
/// `q`-cycle, returns `(a, a')` in that class with `a - a'` of order `pq`.
pub fn preroothunt_check(a: &MaskMultiset) -> Result<Option<(usize, usize)>> {
    let shape = a.ctx().require_two_prime()?;
    let n = a.n();
    let (p, q) = (shape.p, shape.q);
    let modulus = n / (p * q);
    let support = a.support();
    for j in 0..modulus {
        let class: Vec<usize> = support.iter().copied().filter(|x| x % modulus == j).collect();
        let Some(&first) = class.first() else { continue };
        let on_p_cycle = class.iter().all(|&x| (x + n - first).is_multiple_of(n / p));
        let on_q_cycle = class.iter().all(|&x| (x + n - first).is_multiple_of(n / q));
        if on_p_cycle || on_q_cycle {
            continue;
        }
        return match difference_of_order(&class, n, p * q) {
            Some(w) => Ok(Some(w)),
            None => Err(invariant(format!(
                "class {j} mod {modulus} of {a} is off every cycle yet has no difference of order {}",
                p * q
            ))),
        };
    }
    Ok(None)
}

/// With `p` one prime of `N = p^m q^n` and `q` the other: if `(qd)·A` is a
/// union of `p`-cycles while `A(zeta_N^d) ≠ 0`, returns `pqd` after finding a
/// difference in `A - A` of that order. Returns `None` when the hypothesis
/// fails.
pub fn roothunt_check(a: &MaskMultiset, p: usize, d: usize) -> Result<Option<usize>> {
    let shape = a.ctx().require_two_prime()?;
    let n = a.n();
    let q = match p {
        _ if p == shape.p => shape.q,
        _ if p == shape.q => shape.p,
        _ => return Err(domain(format!("{p} is not a prime factor of {n}"))),
    };
    if d == 0 || !(n / q).is_multiple_of(d) {
        return Err(domain(format!("{d} does not divide {}", n / q)));
    }
    if !is_cycle_union(&a.dilate((q * d) as i64), p)? || vanishes_at(&a.dilate(d as i64), n)? {
        return Ok(None);
    }
    let order = p * q * d;
    if !n.is_multiple_of(order) {
        return Err(invariant(format!(
            "{a} satisfies the hypothesis for d = {d} but {order} does not divide {n}"
        )));
    }
    match difference_of_order(&a.support(), n, order) {
        Some(_) => Ok(Some(order)),
        None => Err(invariant(format!("{a} has no difference of order {order}"))),
    }
}
