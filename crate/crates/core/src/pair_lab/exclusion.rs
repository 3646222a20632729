use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::zn_core::arith::{ceil_log, is_prime};
use crate::zn_core::TwoPrimeShape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ExclusionVerdict {
    /// Every spectral set in the group tiles.
    Excluded,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
}

/// An inclusive integer range that may be empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub p: usize,
    pub m: u32,
    pub q: usize,
    pub n: u32,
    pub verdict: ExclusionVerdict,
    pub clauses: Vec<Clause>,
    pub log_p_q: u32,
    pub log_q_p: u32,
    /// Range a spectral non-tile would need for `def_q` of either member.
    pub def_q_window: Window,
    /// Range a spectral non-tile would need for `def_p` of either member.
    pub def_p_window: Window,
    pub min_m: u32,
    pub reasons: Vec<String>,
}

impl ExclusionReport {
    pub fn message(&self) -> String {
        match self.verdict {
            ExclusionVerdict::Excluded => {
                let held: Vec<&str> = self.clauses.iter().filter(|c| c.holds).map(|c| c.name).collect();
                format!("EXCLUDED: {}", held.join(", "))
            }
            ExclusionVerdict::Open => "OPEN: m≥10, n≥7, p^(m−2)≥q^4".to_string(),
        }
    }
}

impl fmt::Display for ExclusionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message())
    }
}

/// Decides whether `Z_{p^m q^n}` is covered by the known two-prime bounds.
/// The prime roles are normalised so that `p < q`.
pub fn exclusion_predicate(shape: TwoPrimeShape) -> Result<ExclusionReport> {
    let TwoPrimeShape { p, m, q, n } = if shape.p < shape.q { shape } else { shape.swapped() };
    if !is_prime(p) || !is_prime(q) || p == q || m == 0 || n == 0 {
        return Err(domain(format!("{p}^{m}·{q}^{n} is not a product of powers of two distinct primes")));
    }
    let small_m = m <= 9;
    let small_n = n <= 6;
    let power = m < 2 || BigUint::from(p).pow(m - 2) < BigUint::from(q).pow(4);
    let clauses = vec![
        Clause { name: "m≤9", holds: small_m },
        Clause { name: "n≤6", holds: small_n },
        Clause { name: "p^(m−2)<q^4", holds: power },
    ];
    let c = ceil_log(p as u64, q as u64);
    let log_q_p = ceil_log(q as u64, p as u64);
    let def_q_window = Window { lo: 3, hi: n as i64 - 4 };
    let def_p_window = Window { lo: 2 * c as i64, hi: m as i64 - 2 - 2 * c as i64 };
    let min_m = 4 * c + 2;

    let mut reasons = Vec::new();
    if def_q_window.is_empty() {
        reasons.push(format!("def_q must lie in [3, n−4] = [3, {}], which is empty", def_q_window.hi));
    }
    if def_p_window.is_empty() {
        reasons.push(format!(
            "def_p must lie in [2⌈log_p q⌉, m−2−2⌈log_p q⌉] = [{}, {}], which is empty",
            def_p_window.lo, def_p_window.hi
        ));
    }
    if m < min_m {
        reasons.push(format!("m = {m} < 4⌈log_p q⌉+2 = {min_m}"));
    }
    let verdict = if small_m || small_n || power {
        ExclusionVerdict::Excluded
    } else {
        reasons.push(format!("a spectral non-tile needs def_q(A), def_q(B) in [3, {}]", def_q_window.hi));
        reasons.push(format!(
            "a spectral non-tile needs def_p(A), def_p(B) in [{}, {}]",
            def_p_window.lo, def_p_window.hi
        ));
        reasons.push(format!("a spectral non-tile needs |U_A(p)|, |U_B(p)| ≥ {c}"));
        reasons.push(format!(
            "a spectral non-tile X needs p^(|S_X(p)|+{c})·q^(|S_X(q)|+{log_q_p}) to divide |X|"
        ));
        ExclusionVerdict::Open
    };
    Ok(ExclusionReport {
        p,
        m,
        q,
        n,
        verdict,
        clauses,
        log_p_q: c,
        log_q_p,
        def_q_window,
        def_p_window,
        min_m,
        reasons,
    })
}

fn parse_error(position: usize, message: impl Into<String>) -> Error {
    Error::Parse { position, message: message.into() }
}

/// Parses `p^a*q^b` (an omitted exponent means 1) into a two-prime shape with
/// `p < q`.
pub fn parse_factored(input: &str) -> Result<TwoPrimeShape> {
    let mut factors: Vec<(usize, u32)> = Vec::new();
    let mut offset = 0;
    for part in input.split('*') {
        let start = offset;
        offset += part.len() + 1;
        let (base_str, exp_str, exp_pos) = match part.split_once('^') {
            Some((b, e)) => (b, Some(e), start + b.len() + 1),
            None => (part, None, start),
        };
        let base: usize = parse_number(base_str, start)?;
        if !is_prime(base) {
            return Err(parse_error(start + lead(base_str), format!("{base} is not prime")));
        }
        let exp: u32 = match exp_str {
            Some(e) => parse_number(e, exp_pos)?,
            None => 1,
        };
        if exp == 0 {
            return Err(parse_error(exp_pos + lead(exp_str.unwrap_or("")), "exponent must be positive"));
        }
        if factors.iter().any(|&(b, _)| b == base) {
            return Err(parse_error(start + lead(base_str), format!("prime {base} repeated")));
        }
        factors.push((base, exp));
    }
    if factors.len() != 2 {
        return Err(parse_error(0, format!("expected two prime powers, found {}", factors.len())));
    }
    factors.sort_unstable();
    let [(p, m), (q, n)] = [factors[0], factors[1]];
    Ok(TwoPrimeShape { p, m, q, n })
}

fn lead(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn parse_number<T: std::str::FromStr>(s: &str, at: usize) -> Result<T> {
    let trimmed = s.trim();
    if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(at + lead(s), format!("expected a number, found {trimmed:?}")));
    }
    trimmed.parse().map_err(|_| parse_error(at + lead(s), format!("{trimmed} is out of range")))
}
