use super::bits::{elements, from_set, full_mask, require_small, rotate, to_set};
use super::{Budget, SearchOutcome};
use crate::error::{domain, invariant, Result};
use crate::pair_lab::tiling_by_product;
use crate::zn_core::MaskMultiset;

struct ExactCover {
    n: usize,
    full: u128,
    set: u128,
    members: Vec<usize>,
    translates: Vec<usize>,
    budget: Budget,
    stop_at_first: bool,
    found: Vec<u128>,
}

impl ExactCover {
    /// Covers the lowest uncovered residue `x` by each `A + (x - a)` in turn.
    /// Returns `false` once the budget runs out.
    fn expand(&mut self, covered: u128) -> bool {
        if covered == self.full {
            let t = self.translates.iter().fold(0u128, |m, &t| m | 1 << t);
            self.found.push(t);
            return true;
        }
        let x = (!covered).trailing_zeros() as usize;
        for i in 0..self.members.len() {
            if !self.budget.tick() {
                return false;
            }
            let t = (x + self.n - self.members[i]) % self.n;
            let shifted = rotate(self.set, t, self.n);
            if shifted & covered == 0 {
                self.translates.push(t);
                let ok = self.expand(covered | shifted);
                self.translates.pop();
                if !ok {
                    return false;
                }
                if self.stop_at_first && !self.found.is_empty() {
                    return true;
                }
            }
        }
        true
    }
}

fn search(a: &MaskMultiset, budget: u64, stop_at_first: bool) -> Result<Option<Vec<u128>>> {
    a.require_proper("set")?;
    if a.is_empty() {
        return Err(domain("the empty set does not tile"));
    }
    let n = a.n();
    require_small(n)?;
    if !n.is_multiple_of(a.mass()) {
        return Ok(Some(Vec::new()));
    }
    let set = from_set(a);
    let mut cover = ExactCover {
        n,
        full: full_mask(n),
        set,
        members: elements(set),
        translates: vec![0],
        budget: Budget::new(budget),
        stop_at_first,
        found: Vec::new(),
    };
    if !cover.expand(set) {
        return Ok(None);
    }
    for &t in &cover.found {
        if !tiling_by_product(a, &to_set(a.ctx(), t))? {
            return Err(invariant(format!("exact cover of {a} by {t:#b} fails the product identity")));
        }
    }
    Ok(Some(cover.found))
}

/// Searches for `T ∋ 0` with `A ⊕ T = Z_N`.
pub fn find_tiling_complement(a: &MaskMultiset, budget: u64) -> Result<SearchOutcome<MaskMultiset>> {
    Ok(match search(a, budget, true)? {
        None => SearchOutcome::BudgetExceeded,
        Some(found) => match found.first() {
            Some(&t) => SearchOutcome::Found(to_set(a.ctx(), t)),
            None => SearchOutcome::Exhausted,
        },
    })
}

/// Every `T ∋ 0` with `A ⊕ T = Z_N`, sorted lexicographically. An empty list
/// means `A` does not tile.
pub fn all_tiling_complements(a: &MaskMultiset, budget: u64) -> Result<SearchOutcome<Vec<MaskMultiset>>> {
    Ok(match search(a, budget, false)? {
        None => SearchOutcome::BudgetExceeded,
        Some(mut found) => {
            found.sort_by(|&x, &y| {
                if x == y {
                    std::cmp::Ordering::Equal
                } else if super::bits::lex_less(x, y) {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            });
            SearchOutcome::Found(found.into_iter().map(|t| to_set(a.ctx(), t)).collect())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair_lab::verify_tiling_pair;

    fn set(s: &str) -> MaskMultiset {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let a = set("12:{0,1,6,7}");
        assert_eq!(find_tiling_complement(&a, 1 << 20).unwrap().found().unwrap(), set("12:{0,2,4}"));
        let full = set("5:{0,1,2,3,4}");
        assert_eq!(find_tiling_complement(&full, 10).unwrap().found().unwrap(), set("5:{0}"));
        assert_eq!(find_tiling_complement(&set("10:{0,1,3}"), 10).unwrap(), SearchOutcome::Exhausted);
    }

    #[test]
    fn complements_match_brute_force() {
        for (n, elems) in [(9, vec![0, 1, 3]), (9, vec![0, 1, 2]), (12, vec![0, 1, 6, 7]), (8, vec![0, 2])] {
            let ctx = crate::GroupContext::new(n).unwrap();
            let a = MaskMultiset::from_elements(&ctx, &elems);
            let k = n / a.mass();
            let mut brute = Vec::new();
            for t in (0u128..1 << n).filter(|t| t & 1 == 1 && t.count_ones() as usize == k) {
                let t = to_set(&ctx, t);
                if verify_tiling_pair(&a, &t).unwrap().is_verified() {
                    brute.push(t);
                }
            }
            brute.sort_by_key(|t| t.support());
            let found = all_tiling_complements(&a, u64::MAX).unwrap().found().unwrap();
            assert_eq!(found, brute, "{a}");
        }
    }
}
