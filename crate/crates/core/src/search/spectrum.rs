use super::bits::{elements, require_small, rotate, to_set};
use super::{Budget, SearchOutcome};
use crate::error::{domain, Result};
use crate::zn_core::{zero_set, MaskMultiset};

struct CliqueSearch {
    adjacency: Vec<u128>,
    target: u32,
    chosen: Vec<usize>,
    budget: Budget,
}

impl CliqueSearch {
    /// Returns `Some(true)` on success, `Some(false)` on exhaustion and
    /// `None` once the budget runs out.
    fn expand(&mut self, mut candidates: u128, depth: u32) -> Option<bool> {
        if depth == self.target {
            return Some(true);
        }
        while candidates != 0 {
            if depth + candidates.count_ones() < self.target {
                return Some(false);
            }
            if !self.budget.tick() {
                return None;
            }
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            self.chosen.push(v);
            match self.expand(candidates & self.adjacency[v], depth + 1) {
                Some(false) => {}
                other => return other,
            }
            self.chosen.pop();
        }
        Some(false)
    }
}

/// Searches for `B ∋ 0` with `|B| = |A|` and `B - B ⊆ {0} ∪ Z(A)`, i.e. a
/// clique in the Cayley graph of `Z_N` with connection set `Z(A)`.
pub fn find_spectrum(a: &MaskMultiset, budget: u64) -> Result<SearchOutcome<MaskMultiset>> {
    a.require_proper("set")?;
    if a.is_empty() {
        return Err(domain("the empty set has no spectrum"));
    }
    let n = a.n();
    require_small(n)?;
    let zeros = zero_set(a)?.residue_bits();
    let target = a.mass() as u32;
    if zeros.count_ones() + 1 < target {
        return Ok(SearchOutcome::Exhausted);
    }

    // Relabel the neighbours of 0 by increasing degree inside that
    // neighbourhood so that the lowest index is the most constrained vertex.
    let mut order = elements(zeros);
    order.sort_by_key(|&v| ((rotate(zeros, v, n) & zeros).count_ones(), v));
    let adjacency: Vec<u128> = order
        .iter()
        .map(|&v| {
            let neighbours = rotate(zeros, v, n);
            order
                .iter()
                .enumerate()
                .filter(|&(_, &w)| neighbours >> w & 1 == 1)
                .fold(0u128, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let all = if order.len() == 128 { u128::MAX } else { (1u128 << order.len()) - 1 };

    let mut search = CliqueSearch { adjacency, target: target - 1, chosen: Vec::new(), budget: Budget::new(budget) };
    Ok(match search.expand(all, 0) {
        Some(true) => {
            let spectrum = search.chosen.iter().fold(1u128, |m, &i| m | 1 << order[i]);
            SearchOutcome::Found(to_set(a.ctx(), spectrum))
        }
        Some(false) => SearchOutcome::Exhausted,
        None => SearchOutcome::BudgetExceeded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair_lab::verify_spectral_pair;

    fn set(s: &str) -> MaskMultiset {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let a = set("12:{0,1,6,7}");
        let b = find_spectrum(&a, 1 << 20).unwrap().found().unwrap();
        assert!(verify_spectral_pair(&a, &b).unwrap().is_verified());
        assert_eq!(find_spectrum(&set("9:{0}"), 10).unwrap().found().unwrap(), set("9:{0}"));
        assert_eq!(find_spectrum(&set("4:{0,1,2}"), 1 << 20).unwrap(), SearchOutcome::Exhausted);
        assert!(find_spectrum(&set("4:{0*2}"), 10).is_err());
    }

    #[test]
    fn agrees_with_brute_force_in_z12() {
        let ctx = crate::GroupContext::new(12).unwrap();
        for mask in (1u32..1 << 12).filter(|m| m & 1 == 1) {
            let a = MaskMultiset::from_elements(&ctx, &elements(mask as u128));
            let k = a.mass();
            let brute = (0u32..1 << 12)
                .filter(|b| b & 1 == 1 && b.count_ones() as usize == k)
                .any(|b| {
                    let b = MaskMultiset::from_elements(&ctx, &elements(b as u128));
                    verify_spectral_pair(&a, &b).unwrap().is_verified()
                });
            let found = find_spectrum(&a, u64::MAX).unwrap();
            assert_eq!(found.is_found(), brute, "{a}");
            assert!(!matches!(found, SearchOutcome::BudgetExceeded));
        }
    }

    #[test]
    fn budget_exhaustion_is_a_verdict() {
        let a = set("24:{0,1,2,3,4,5}");
        assert_eq!(find_spectrum(&a, 2).unwrap(), SearchOutcome::BudgetExceeded);
        assert!(find_spectrum(&a, 1000).unwrap().is_found());
    }
}
