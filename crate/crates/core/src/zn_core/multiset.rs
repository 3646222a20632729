use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::context::GroupContext;
use super::parse;
use crate::error::{domain, Error, Result};

/// A multiset over `Z_N`, equivalently the mask polynomial
/// `A(X) = sum_a coeffs[a] X^a` modulo `X^N - 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct MaskMultiset {
    ctx: Arc<GroupContext>,
    coeffs: Vec<u32>,
}

impl MaskMultiset {
    pub fn new(ctx: &Arc<GroupContext>, coeffs: Vec<u32>) -> Result<MaskMultiset> {
        if coeffs.len() != ctx.n() {
            return Err(domain(format!(
                "expected {} coefficients, got {}",
                ctx.n(),
                coeffs.len()
            )));
        }
        Ok(MaskMultiset { ctx: ctx.clone(), coeffs })
    }

    /// Builds a multiset from a list of elements; repeats add multiplicity and
    /// elements are reduced mod `N`.
    pub fn from_elements(ctx: &Arc<GroupContext>, elements: &[usize]) -> MaskMultiset {
        let mut coeffs = vec![0; ctx.n()];
        for &x in elements {
            coeffs[x % ctx.n()] += 1;
        }
        MaskMultiset { ctx: ctx.clone(), coeffs }
    }

    pub fn empty(ctx: &Arc<GroupContext>) -> MaskMultiset {
        MaskMultiset { ctx: ctx.clone(), coeffs: vec![0; ctx.n()] }
    }

    /// The whole group `Z_N` as a proper set.
    pub fn full(ctx: &Arc<GroupContext>) -> MaskMultiset {
        MaskMultiset { ctx: ctx.clone(), coeffs: vec![1; ctx.n()] }
    }

    /// Parses either the text form `N:{a*m, b, ...}` or the JSON form
    /// `{"n":N,"coeffs":[...]}`.
    pub fn parse(input: &str) -> Result<MaskMultiset> {
        parse::parse_multiset(input)
    }

    pub fn ctx(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn multiplicity(&self, x: usize) -> u32 {
        self.coeffs[x % self.n()]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.multiplicity(x) > 0
    }

    /// Total multiplicity, `A(1)`.
    pub fn mass(&self) -> usize {
        self.coeffs.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// All multiplicities are 0 or 1.
    pub fn is_proper(&self) -> bool {
        self.coeffs.iter().all(|&c| c <= 1)
    }

    /// Distinct elements, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.coeffs[x] > 0).collect()
    }

    pub(crate) fn require_same_group(&self, other: &MaskMultiset) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::ContextMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    pub(crate) fn require_proper(&self, what: &str) -> Result<()> {
        if !self.is_proper() {
            return Err(domain(format!("{what} must be a proper set, got {self}")));
        }
        Ok(())
    }

    /// `A + t`.
    pub fn translate(&self, t: usize) -> MaskMultiset {
        let n = self.n();
        let mut coeffs = vec![0; n];
        for (a, &c) in self.coeffs.iter().enumerate() {
            coeffs[(a + t) % n] += c;
        }
        MaskMultiset { ctx: self.ctx.clone(), coeffs }
    }

    /// The dilation `m·A`, whose mask polynomial is `A(X^m)` mod `X^N - 1`.
    pub fn dilate(&self, m: i64) -> MaskMultiset {
        let n = self.n();
        let m = m.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![0; n];
        for (a, &c) in self.coeffs.iter().enumerate() {
            coeffs[(a * m) % n] += c;
        }
        MaskMultiset { ctx: self.ctx.clone(), coeffs }
    }

    /// `A_{j mod m}`: the part of `A` congruent to `j` modulo `m`, `m | N`.
    pub fn restrict_class(&self, j: usize, m: usize) -> Result<MaskMultiset> {
        if !self.ctx.is_divisor(m) {
            return Err(domain(format!("{m} does not divide {}", self.n())));
        }
        let j = j % m;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, &c)| if a % m == j { c } else { 0 })
            .collect();
        Ok(MaskMultiset { ctx: self.ctx.clone(), coeffs })
    }

    /// `A - A` for a proper set, ascending.
    pub fn difference_set(&self) -> Result<Vec<usize>> {
        self.require_proper("difference set operand")?;
        let n = self.n();
        let support = self.support();
        let mut seen = vec![false; n];
        for &a in &support {
            for &b in &support {
                seen[(a + n - b) % n] = true;
            }
        }
        Ok((0..n).filter(|&x| seen[x]).collect())
    }

    /// Multiset sum (coefficientwise addition).
    pub fn add(&self, other: &MaskMultiset) -> Result<MaskMultiset> {
        self.require_same_group(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(MaskMultiset { ctx: self.ctx.clone(), coeffs })
    }

    /// `A(X) B(X)` mod `X^N - 1`, i.e. the multiset of all sums `a + b`.
    pub fn convolve(&self, other: &MaskMultiset) -> Result<MaskMultiset> {
        self.require_same_group(other)?;
        let n = self.n();
        let mut coeffs = vec![0u32; n];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb != 0 {
                    coeffs[(a + b) % n] += ca * cb;
                }
            }
        }
        Ok(MaskMultiset { ctx: self.ctx.clone(), coeffs })
    }

    /// Whether every element of `Z_N` has multiplicity exactly one.
    pub fn is_full_group(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 1)
    }
}

impl fmt::Display for MaskMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.n())?;
        let mut first = true;
        for (a, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if c == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}*{c}")?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for MaskMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MaskMultiset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MaskMultiset::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct RawMultiset {
    n: usize,
    coeffs: Vec<u32>,
}

impl Serialize for MaskMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMultiset { n: self.n(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MaskMultiset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMultiset::deserialize(d)?;
        let ctx = GroupContext::new(raw.n).map_err(serde::de::Error::custom)?;
        MaskMultiset::new(&ctx, raw.coeffs).map_err(serde::de::Error::custom)
    }
}
