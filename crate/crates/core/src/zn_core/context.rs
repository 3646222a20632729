use std::fmt;
use std::sync::{Arc, OnceLock};

use super::arith::{divisors, factorize, gcd, valuation};
use super::cyclotomic::{cyclotomic, CycloPoly};
use crate::error::{domain, Result};

/// The cyclic group `Z_N` together with its factorization, divisor lattice and
/// a lazily filled table of cyclotomic polynomials `Phi_d`, `d | N`.
pub struct GroupContext {
    n: usize,
    factorization: Vec<(usize, u32)>,
    divisors: Vec<usize>,
    cyclo: Vec<OnceLock<CycloPoly>>,
}

/// `N = p^m q^n` with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoPrimeShape {
    pub p: usize,
    pub m: u32,
    pub q: usize,
    pub n: u32,
}

impl TwoPrimeShape {
    /// The shape with the roles of the two primes exchanged.
    pub fn swapped(self) -> TwoPrimeShape {
        TwoPrimeShape { p: self.q, m: self.n, q: self.p, n: self.m }
    }
}

impl GroupContext {
    pub fn new(n: usize) -> Result<Arc<GroupContext>> {
        if n == 0 {
            return Err(domain("group order must be positive"));
        }
        let divisors = divisors(n);
        let cyclo = divisors.iter().map(|_| OnceLock::new()).collect();
        Ok(Arc::new(GroupContext { n, factorization: factorize(n), divisors, cyclo }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factorization(&self) -> &[(usize, u32)] {
        &self.factorization
    }

    /// All divisors of `N`, ascending.
    pub fn divisors(&self) -> &[usize] {
        &self.divisors
    }

    pub fn primes(&self) -> Vec<usize> {
        self.factorization.iter().map(|&(p, _)| p).collect()
    }

    pub fn is_divisor(&self, d: usize) -> bool {
        d > 0 && self.n.is_multiple_of(d)
    }

    /// Exponent of `p` in `N`.
    pub fn exponent_of(&self, p: usize) -> u32 {
        if p < 2 {
            return 0;
        }
        valuation(self.n, p)
    }

    /// The prime powers `p^k > 1` dividing `N`, ascending.
    pub fn prime_powers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factorization
            .iter()
            .flat_map(|&(p, e)| (1..=e).map(move |k| p.pow(k)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Largest divisor of `N` coprime to `s`.
    pub fn coprime_part(&self, s: usize) -> usize {
        self.factorization
            .iter()
            .filter(|&&(p, _)| !s.is_multiple_of(p))
            .map(|&(p, e)| p.pow(e))
            .product()
    }

    /// The units of `Z_N`, ascending.
    pub fn units(&self) -> Vec<usize> {
        if self.n == 1 {
            return vec![0];
        }
        (1..self.n).filter(|&u| gcd(u, self.n) == 1).collect()
    }

    pub fn two_prime(&self) -> Option<TwoPrimeShape> {
        match self.factorization.as_slice() {
            &[(p, m), (q, n)] => Some(TwoPrimeShape { p, m, q, n }),
            _ => None,
        }
    }

    pub(crate) fn require_two_prime(&self) -> Result<TwoPrimeShape> {
        self.two_prime().ok_or_else(|| {
            domain(format!("N = {} is not a product of powers of two distinct primes", self.n))
        })
    }

    /// The cyclotomic polynomial `Phi_d` for a divisor `d` of `N`, memoized.
    pub fn cyclotomic(&self, d: usize) -> Result<&CycloPoly> {
        let idx = self
            .divisors
            .binary_search(&d)
            .map_err(|_| domain(format!("{d} does not divide {}", self.n)))?;
        if let Some(c) = self.cyclo[idx].get() {
            return Ok(c);
        }
        let c = cyclotomic(d)?;
        Ok(self.cyclo[idx].get_or_init(|| c))
    }
}

impl fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupContext")
            .field("n", &self.n)
            .field("factorization", &self.factorization)
            .finish()
    }
}

impl PartialEq for GroupContext {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for GroupContext {}
