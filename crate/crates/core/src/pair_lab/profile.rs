use serde::Serialize;

use super::absorption::absorption_exponents;
use super::verify::SpectralPair;
use crate::cm_structure::sa_record;
use crate::error::{domain, Result};
use crate::zn_core::arith::{ceil_log, valuation};
use crate::zn_core::{vanishes_at, MaskMultiset, TwoPrimeShape};

/// Root data of one member `X` of a pair. The deficits are taken relative to
/// the partner `Y`: `def_p` counts the `x` in `[0, m-1]` with
/// `X(zeta_{p^{x+1}}) ≠ 0 = Y(zeta_N^{p^x})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberRoots {
    pub s_p: Vec<u32>,
    pub s_q: Vec<u32>,
    pub r_p: Vec<u32>,
    pub r_q: Vec<u32>,
    pub m0: i64,
    pub n0: i64,
    pub u_p: Vec<u32>,
    pub u_q: Vec<u32>,
    pub k_p: Vec<u32>,
    pub k_q: Vec<u32>,
    pub def_p: usize,
    pub def_q: usize,
    pub def_p_exponents: Vec<u32>,
    pub def_q_exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootProfile {
    pub p: usize,
    pub m: u32,
    pub q: usize,
    pub n: u32,
    pub a: MemberRoots,
    pub b: MemberRoots,
}

/// Exponents `x` in `[0, m]` with `X(zeta_N^{p^x}) = 0`.
fn r_set(x: &MaskMultiset, p: usize, m: u32) -> Result<Vec<u32>> {
    let n = x.n();
    let mut out = Vec::new();
    for e in 0..=m {
        if vanishes_at(x, n / p.pow(e))? {
            out.push(e);
        }
    }
    Ok(out)
}

/// Largest `x` in `[0, m]` outside the `R` set, or -1.
fn top_nonvanishing(r: &[u32], m: u32) -> i64 {
    (0..=m).rev().find(|e| !r.contains(e)).map_or(-1, i64::from)
}

/// `x` in `[1, m]` with `X(zeta_{p^x}) ≠ 0 = X(zeta_{p^x q})`.
fn u_set(x: &MaskMultiset, p: usize, m: u32, q: usize) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for e in 1..=m {
        let pe = p.pow(e);
        if !vanishes_at(x, pe)? && vanishes_at(x, pe * q)? {
            out.push(e);
        }
    }
    Ok(out)
}

fn deficit_exponents(x: &MaskMultiset, partner: &MaskMultiset, p: usize, m: u32) -> Result<Vec<u32>> {
    let n = x.n();
    let mut out = Vec::new();
    for e in 0..m {
        if !vanishes_at(x, p.pow(e + 1))? && vanishes_at(partner, n / p.pow(e))? {
            out.push(e);
        }
    }
    Ok(out)
}

fn member_roots(x: &MaskMultiset, partner: &MaskMultiset, shape: TwoPrimeShape) -> Result<MemberRoots> {
    let TwoPrimeShape { p, m, q, n } = shape;
    let sa = sa_record(x)?;
    let r_p = r_set(x, p, m)?;
    let r_q = r_set(x, q, n)?;
    let def_p_exponents = deficit_exponents(x, partner, p, m)?;
    let def_q_exponents = deficit_exponents(x, partner, q, n)?;
    Ok(MemberRoots {
        s_p: sa.exponents_of(p).to_vec(),
        s_q: sa.exponents_of(q).to_vec(),
        m0: top_nonvanishing(&r_p, m),
        n0: top_nonvanishing(&r_q, n),
        r_p,
        r_q,
        u_p: u_set(x, p, m, q)?,
        u_q: u_set(x, q, n, p)?,
        k_p: absorption_exponents(x, p)?,
        k_q: absorption_exponents(x, q)?,
        def_p: def_p_exponents.len(),
        def_q: def_q_exponents.len(),
        def_p_exponents,
        def_q_exponents,
    })
}

pub fn root_profile(pair: &SpectralPair) -> Result<RootProfile> {
    let shape = pair.a().ctx().require_two_prime()?;
    Ok(RootProfile {
        p: shape.p,
        m: shape.m,
        q: shape.q,
        n: shape.n,
        a: member_roots(pair.a(), pair.b(), shape)?,
        b: member_roots(pair.b(), pair.a(), shape)?,
    })
}

/// Whether `p^{|S_A(p)|}` exactly divides `|A|`.
pub fn check_wt1(s: &MaskMultiset, p: usize) -> Result<bool> {
    if s.ctx().exponent_of(p) == 0 {
        return Err(domain(format!("{p} is not a prime factor of {}", s.n())));
    }
    let count = sa_record(s)?.exponents_of(p).len() as u32;
    Ok(valuation(s.mass(), p) == count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Wt2Verdict {
    /// `A(zeta_{p^j q}) = 0` for every `j` in `[1, k]`.
    Holds { k: u32 },
    Fails { k: u32, first_failure: u32 },
    NotApplicable,
}

/// With `A(zeta_q) = A(zeta_p) = … = A(zeta_{p^k}) = 0 ≠ A(zeta_{p^{k+1}})`
/// for some `k >= 1` (`k = m` when every `p`-power root vanishes), checks
/// `A(zeta_{pq}) = … = A(zeta_{p^k q}) = 0`.
pub fn check_wt2(s: &MaskMultiset, p: usize, q: usize) -> Result<Wt2Verdict> {
    let shape = s.ctx().require_two_prime()?;
    let m = if (shape.p, shape.q) == (p, q) {
        shape.m
    } else if (shape.q, shape.p) == (p, q) {
        shape.n
    } else {
        return Err(domain(format!("{p} and {q} are not the prime factors of {}", s.n())));
    };
    if !vanishes_at(s, q)? {
        return Ok(Wt2Verdict::NotApplicable);
    }
    let mut k = 0;
    while k < m && vanishes_at(s, p.pow(k + 1))? {
        k += 1;
    }
    if k == 0 {
        return Ok(Wt2Verdict::NotApplicable);
    }
    for j in 1..=k {
        if !vanishes_at(s, p.pow(j) * q)? {
            return Ok(Wt2Verdict::Fails { k, first_failure: j });
        }
    }
    Ok(Wt2Verdict::Holds { k })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetComparison {
    /// `(S_B(p) - 1) ∩ [0, m0]`.
    pub shifted_b: Vec<u32>,
    /// `R_A(p) ∩ [0, m0]`.
    pub r_a: Vec<u32>,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub m0: i64,
    pub n0: i64,
    pub p_side: SetComparison,
    pub q_side: SetComparison,
}

fn compare(s_b: &[u32], r_a: &[u32], top: i64) -> SetComparison {
    let within = |x: &u32| i64::from(*x) <= top;
    let shifted_b: Vec<u32> = s_b.iter().map(|x| x - 1).filter(within).collect();
    let r_a: Vec<u32> = r_a.iter().copied().filter(within).collect();
    SetComparison { equal: shifted_b == r_a, shifted_b, r_a }
}

/// Compares `(S_B(p) - 1) ∩ [0, m0]` with `R_A(p) ∩ [0, m0]` and the analogue
/// for `q`. Reports only.
pub fn symmetry_check(pair: &SpectralPair) -> Result<SymmetryReport> {
    let profile = root_profile(pair)?;
    let (a, b) = (&profile.a, &profile.b);
    Ok(SymmetryReport {
        m0: a.m0,
        n0: a.n0,
        p_side: compare(&b.s_p, &a.r_p, a.m0),
        q_side: compare(&b.s_q, &a.r_q, a.n0),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub label: String,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl Relation {
    fn at_most(label: String, lhs: i64, rhs: i64) -> Relation {
        Relation { label, lhs, rhs, holds: lhs <= rhs }
    }

    fn at_least(label: String, lhs: i64, rhs: i64) -> Relation {
        Relation { label, lhs, rhs, holds: lhs >= rhs }
    }

    fn divides(label: String, lhs: i64, rhs: i64) -> Relation {
        Relation { label, lhs, rhs, holds: lhs != 0 && rhs % lhs == 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootEquation {
    pub member: char,
    pub order: usize,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficitReport {
    pub size: usize,
    pub log_p_q: u32,
    pub log_q_p: u32,
    pub profile: RootProfile,
    pub min_terms: Vec<Relation>,
    pub divisibility: Vec<Relation>,
    pub u_lower_bounds: Vec<Relation>,
    pub deficit_windows: Vec<Relation>,
    pub wt1: Vec<(char, usize, bool)>,
    pub wt2: Vec<(char, usize, Wt2Verdict)>,
    pub roots_panel: Vec<RootEquation>,
}

fn pow(base: usize, e: usize) -> i64 {
    (base as i64).saturating_pow(e as u32)
}

/// Evaluates the size bounds, divisibility relations and deficit windows that
/// a spectral non-tile in `Z_{p^m q^n}` would have to satisfy. Nothing is
/// asserted: each relation records both sides and whether it holds.
pub fn deficit_bounds_check(pair: &SpectralPair) -> Result<DeficitReport> {
    let profile = root_profile(pair)?;
    let RootProfile { p, m, q, n, .. } = profile;
    let (ra, rb) = (&profile.a, &profile.b);
    let size = pair.a().mass();
    let lpq = ceil_log(p as u64, q as u64);
    let lqp = ceil_log(q as u64, p as u64);
    let s = size as i64;

    let min_terms = vec![
        Relation::at_most(
            "|A| <= p^(|S_B(p)|+def_p(B)) q^|S_A(q)|".into(),
            s,
            pow(p, rb.s_p.len() + rb.def_p).saturating_mul(pow(q, ra.s_q.len())),
        ),
        Relation::at_most(
            "|A| <= p^(|S_A(p)|+def_p(A)) q^|S_B(q)|".into(),
            s,
            pow(p, ra.s_p.len() + ra.def_p).saturating_mul(pow(q, rb.s_q.len())),
        ),
        Relation::at_most(
            "|A| <= p^|S_B(p)| q^(|S_A(q)|+def_q(A))".into(),
            s,
            pow(p, rb.s_p.len()).saturating_mul(pow(q, ra.s_q.len() + ra.def_q)),
        ),
        Relation::at_most(
            "|A| <= p^|S_A(p)| q^(|S_B(q)|+def_q(B))".into(),
            s,
            pow(p, ra.s_p.len()).saturating_mul(pow(q, rb.s_q.len() + rb.def_q)),
        ),
    ];

    let mut divisibility = Vec::new();
    let mut u_lower_bounds = Vec::new();
    let mut deficit_windows = Vec::new();
    let mut wt1 = Vec::new();
    let mut wt2 = Vec::new();
    for (name, roots, set) in [('A', ra, pair.a()), ('B', rb, pair.b())] {
        divisibility.push(Relation::divides(
            format!("p^(|S_{name}(p)|+|U_{name}(p)|) divides |{name}|"),
            pow(p, roots.s_p.len() + roots.u_p.len()),
            s,
        ));
        divisibility.push(Relation::divides(
            format!("q^(|S_{name}(q)|+|U_{name}(q)|) divides |{name}|"),
            pow(q, roots.s_q.len() + roots.u_q.len()),
            s,
        ));
        divisibility.push(Relation::divides(
            format!("p^(|S_{name}(p)|+ceil(log_p q)) q^(|S_{name}(q)|+ceil(log_q p)) divides |{name}|"),
            pow(p, roots.s_p.len() + lpq as usize).saturating_mul(pow(q, roots.s_q.len() + lqp as usize)),
            s,
        ));
        u_lower_bounds.push(Relation::at_least(
            format!("|U_{name}(p)| >= ceil(log_p q)"),
            roots.u_p.len() as i64,
            lpq as i64,
        ));
        u_lower_bounds.push(Relation::at_least(
            format!("|U_{name}(q)| >= ceil(log_q p)"),
            roots.u_q.len() as i64,
            lqp as i64,
        ));
        deficit_windows.push(Relation::at_least(
            format!("def_q({name}) >= 3"),
            roots.def_q as i64,
            3,
        ));
        deficit_windows.push(Relation::at_least(
            format!("def_p({name}) >= 2 ceil(log_p q)"),
            roots.def_p as i64,
            2 * lpq as i64,
        ));
        deficit_windows.push(Relation::at_most(
            format!("def_p({name}) <= m - 2 - 2 ceil(log_p q)"),
            roots.def_p as i64,
            m as i64 - 2 - 2 * lpq as i64,
        ));
        deficit_windows.push(Relation::at_most(
            format!("def_q({name}) <= n - 4"),
            roots.def_q as i64,
            n as i64 - 4,
        ));
        for (r, other) in [(p, q), (q, p)] {
            wt1.push((name, r, check_wt1(set, r)?));
            wt2.push((name, r, check_wt2(set, r, other)?));
        }
    }

    let big_n = pair.a().n();
    let mut roots_panel = Vec::new();
    for (name, set) in [('A', pair.a()), ('B', pair.b())] {
        let mut orders: Vec<usize> = Vec::new();
        for order in [big_n, p, q, p.pow(m), q.pow(n)] {
            if !orders.contains(&order) {
                orders.push(order);
            }
        }
        for order in orders {
            roots_panel.push(RootEquation { member: name, order, vanishes: vanishes_at(set, order)? });
        }
    }

    Ok(DeficitReport {
        size,
        log_p_q: lpq,
        log_q_p: lqp,
        profile,
        min_terms,
        divisibility,
        u_lower_bounds,
        deficit_windows,
        wt1,
        wt2,
        roots_panel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair_lab::verify_spectral_pair;

    fn set(s: &str) -> MaskMultiset {
        s.parse().unwrap()
    }

    fn pair(a: &str, b: &str) -> SpectralPair {
        verify_spectral_pair(&set(a), &set(b)).unwrap().pair().unwrap()
    }

    /// Evaluates `X(zeta^k)` numerically for a root of order `order`.
    fn numeric_vanishes(x: &MaskMultiset, order: usize) -> bool {
        let n = x.n();
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for (e, &c) in x.coeffs().iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * ((e * (n / order)) % n) as f64 / n as f64;
            re += c as f64 * angle.cos();
            im += c as f64 * angle.sin();
        }
        re.abs() < 1e-9 && im.abs() < 1e-9
    }

    #[test]
    fn profile_matches_numeric_recomputation() {
        for (a, b) in [("6:{0,3}", "6:{0,1}"), ("12:{0,1,6,7}", "12:{0,3,6,9}"), ("12:{0,4,8}", "12:{0,1,2}")] {
            let pr = pair(a, b);
            let prof = root_profile(&pr).unwrap();
            let (x, y) = (pr.a(), pr.b());
            let n = x.n();
            let (p, m, q) = (prof.p, prof.m, prof.q);
            let r_p: Vec<u32> = (0..=m).filter(|&e| numeric_vanishes(x, n / p.pow(e))).collect();
            assert_eq!(prof.a.r_p, r_p);
            let s_p: Vec<u32> = (1..=m).filter(|&e| numeric_vanishes(x, p.pow(e))).collect();
            assert_eq!(prof.a.s_p, s_p);
            let u_p: Vec<u32> = (1..=m)
                .filter(|&e| !numeric_vanishes(x, p.pow(e)) && numeric_vanishes(x, p.pow(e) * q))
                .collect();
            assert_eq!(prof.a.u_p, u_p);
            let def_p = (0..m)
                .filter(|&e| !numeric_vanishes(x, p.pow(e + 1)) && numeric_vanishes(y, n / p.pow(e)))
                .count();
            assert_eq!(prof.a.def_p, def_p);
            let m0 = (0..=m).rev().find(|&e| !numeric_vanishes(x, n / p.pow(e))).map_or(-1, i64::from);
            assert_eq!(prof.a.m0, m0);
        }
    }

    #[test]
    fn trivial_profiles() {
        let prof = root_profile(&pair("6:{0}", "6:{0}")).unwrap();
        assert!(prof.a.s_p.is_empty() && prof.a.r_p.is_empty() && prof.a.r_q.is_empty());
        assert_eq!((prof.a.m0, prof.a.n0), (1, 1));
        assert_eq!((prof.a.def_p, prof.a.def_q, prof.b.def_p, prof.b.def_q), (0, 0, 0, 0));
        let full = "6:{0,1,2,3,4,5}";
        let prof = root_profile(&pair(full, full)).unwrap();
        assert_eq!(prof.a.s_p, vec![1]);
        assert_eq!(prof.a.r_p, vec![0, 1]);
        assert_eq!((prof.a.m0, prof.a.n0), (-1, -1));
        let sym = symmetry_check(&pair(full, full)).unwrap();
        assert!(sym.p_side.equal && sym.q_side.equal && sym.p_side.r_a.is_empty());
        let sym = symmetry_check(&pair("6:{0}", "6:{0}")).unwrap();
        assert!(sym.p_side.equal && sym.q_side.equal);
    }

    #[test]
    fn wt1_examples() {
        assert!(check_wt1(&set("6:{0,3}"), 2).unwrap());
        assert!(check_wt1(&set("6:{0,1,2,3,4,5}"), 2).unwrap());
        assert!(check_wt1(&set("8:{0,1,2,3}"), 2).unwrap());
        assert!(!check_wt1(&set("12:{0,4}"), 2).unwrap());
        assert!(check_wt1(&set("8:{0,1}"), 3).is_err());
    }

    #[test]
    fn wt2_examples() {
        let full = set("12:{0,1,2,3,4,5,6,7,8,9,10,11}");
        assert_eq!(check_wt2(&full, 2, 3).unwrap(), Wt2Verdict::Holds { k: 2 });
        assert_eq!(check_wt2(&set("6:{0,3}"), 2, 3).unwrap(), Wt2Verdict::NotApplicable);
        // {0,1,4,5,8,9} = {0,4,8} + {0,1}: vanishes at 3, 2, 6, 12 and not at 4.
        let a = set("12:{0,1,4,5,8,9}");
        assert_eq!(check_wt2(&a, 2, 3).unwrap(), Wt2Verdict::Holds { k: 1 });
        // {0,4,8} + {0,3}: zeros at orders 2, 3, 6, 12 but not 4.
        let a = set("12:{0,3,4,7,8,11}");
        assert_eq!(check_wt2(&a, 2, 3).unwrap(), Wt2Verdict::Holds { k: 1 });
        // {0,2} + {0,6}: zeros at orders 2, 4 but not 3.
        let a = set("12:{0,2,6,8}");
        assert_eq!(check_wt2(&a, 2, 3).unwrap(), Wt2Verdict::NotApplicable);
        let a = set("12:{0,2,4,6,8,10}");
        assert_eq!(check_wt2(&a, 2, 3).unwrap(), Wt2Verdict::NotApplicable);
    }

    #[test]
    fn wt2_agrees_with_numeric_definition() {
        let ctx = crate::GroupContext::new(12).unwrap();
        for mask in 1u32..(1 << 12) {
            let elems: Vec<usize> = (0..12).filter(|i| mask >> i & 1 == 1).collect();
            let a = MaskMultiset::from_elements(&ctx, &elems);
            let k = (1..=2).take_while(|&j| numeric_vanishes(&a, 2usize.pow(j))).count() as u32;
            let expected = if !numeric_vanishes(&a, 3) || k == 0 {
                Wt2Verdict::NotApplicable
            } else if let Some(j) = (1..=k).find(|&j| !numeric_vanishes(&a, 2usize.pow(j) * 3)) {
                Wt2Verdict::Fails { k, first_failure: j }
            } else {
                Wt2Verdict::Holds { k }
            };
            assert_eq!(check_wt2(&a, 2, 3).unwrap(), expected, "{a}");
        }
    }

    #[test]
    fn deficit_report_on_full_group() {
        let full = "12:{0,1,2,3,4,5,6,7,8,9,10,11}";
        let rep = deficit_bounds_check(&pair(full, full)).unwrap();
        assert_eq!(rep.size, 12);
        assert_eq!(rep.min_terms.len(), 4);
        assert!(rep.roots_panel.iter().all(|e| e.vanishes));
        assert!(rep.profile.a.u_p.is_empty());
        // p^|S(p)| q^|S(q)| = 12 divides 12 for both members.
        assert!(rep.divisibility.iter().filter(|r| r.label.contains("U_")).all(|r| r.holds));
    }
}
