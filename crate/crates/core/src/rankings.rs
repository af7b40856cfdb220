//! Slater index and recovery of every optimal ranking.
//!
//! The forward pass stores, for every subset `I'`, the maximal consistency
//! index `q(I') = max_e { d_e(I') + q(I' \ e) }`. The backward pass starts at
//! the full set and only follows degree-compatible edges, i.e. removals of
//! `e` with `q(I' \ e) = q(I') - d_e(I')`; each such `e` is the next object
//! of an optimal ranking.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{Ranking, ResultMatrix};
use crate::subset::CrossTable;
use crate::Limits;

/// Optimal rankings of a matrix, possibly truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingSet {
    /// Sorted, duplicate-free optimal rankings.
    pub rankings: Vec<Ranking>,
    /// Exact number of optimal rankings (equals `a[s_hat]`).
    pub count: BigUint,
    /// Inconsistency index shared by every optimal ranking.
    pub s_hat: u64,
}

impl RankingSet {
    /// True when `rankings` holds every optimal ranking.
    pub fn is_complete(&self) -> bool {
        BigUint::from(self.rankings.len()) == self.count
    }
}

/// Maximal consistency index of every subset, indexed by bitmask.
pub struct ForwardDegrees {
    q: Vec<u32>,
    table: CrossTable,
    m: usize,
}

impl ForwardDegrees {
    pub fn compute(w: &ResultMatrix, limits: &Limits) -> Result<Self> {
        w.check_bitmask_capacity()?;
        let m = w.len();
        if m > limits.index_max_objects {
            return Err(Error::ResourceLimit(format!(
                "Slater index of {} objects exceeds the configured limit of {} (estimated memory {})",
                m,
                limits.index_max_objects,
                crate::spectrum::format_bytes(4u128 << m)
            )));
        }
        if w.total() > u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!(
                "{} comparisons overflow the 32-bit degree table",
                w.total()
            )));
        }
        let table = CrossTable::new(w);
        let size = 1usize << m;
        let mut q = vec![0u32; size];
        for mask in 1..size as u64 {
            let mut best = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let e = bits.trailing_zeros() as usize;
                let candidate = table.get(e, mask) + q[(mask ^ (1 << e)) as usize] as u64;
                best = best.max(candidate);
                bits &= bits - 1;
            }
            q[mask as usize] = best as u32;
        }
        Ok(ForwardDegrees { q, table, m })
    }

    /// `q(I')` for the subset `mask`.
    pub fn degree(&self, mask: u64) -> u64 {
        self.q[mask as usize] as u64
    }

    fn full(&self) -> u64 {
        (1u64 << self.m) - 1
    }

    /// Objects `e` of `mask` whose removal is degree-compatible, ascending.
    fn compatible(&self, mask: u64) -> impl Iterator<Item = usize> + '_ {
        let q = self.degree(mask);
        let mut bits = mask;
        std::iter::from_fn(move || {
            while bits != 0 {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let d = self.table.get(e, mask);
                if d <= q && q - d == self.degree(mask ^ (1 << e)) {
                    return Some(e);
                }
            }
            None
        })
    }

    /// Number of optimal rankings, by counting degree-compatible paths.
    pub fn count_optimal(&self) -> BigUint {
        let mut level: BTreeMap<u64, u128> = BTreeMap::new();
        level.insert(self.full(), 1);
        for _ in 0..self.m {
            let mut next: BTreeMap<u64, u128> = BTreeMap::new();
            for (&mask, &paths) in &level {
                for e in self.compatible(mask) {
                    *next.entry(mask ^ (1 << e)).or_insert(0) += paths;
                }
            }
            level = next;
        }
        BigUint::from(level.get(&0).copied().unwrap_or(0))
    }

    /// Backward pass: preliminary rankings are pushed down from the full set
    /// to the empty set, gaining one object per level. Each node keeps at most
    /// `cap` preliminary rankings.
    fn backward(&self, cap: usize) -> Vec<Vec<usize>> {
        let mut level: BTreeMap<u64, Vec<Vec<usize>>> = BTreeMap::new();
        level.insert(self.full(), vec![Vec::with_capacity(self.m)]);
        for _ in 0..self.m {
            let mut next: BTreeMap<u64, Vec<Vec<usize>>> = BTreeMap::new();
            for (&mask, partials) in &level {
                for e in self.compatible(mask) {
                    let merged = next.entry(mask ^ (1 << e)).or_default();
                    for partial in partials {
                        if merged.len() >= cap {
                            break;
                        }
                        let mut extended = partial.clone();
                        extended.push(e);
                        merged.push(extended);
                    }
                }
            }
            level = next;
        }
        level.remove(&0).unwrap_or_default()
    }
}

/// Slater index `T - q(I)` with default [`Limits`].
pub fn slater_index(w: &ResultMatrix) -> Result<u64> {
    slater_index_with(w, &Limits::default())
}

pub fn slater_index_with(w: &ResultMatrix, limits: &Limits) -> Result<u64> {
    let forward = ForwardDegrees::compute(w, limits)?;
    Ok(w.total() - forward.degree(forward.full()))
}

/// Every optimal ranking. Fails with a resource-limit error when there are
/// more than `limits.max_listed_rankings` of them.
pub fn all_optimal_rankings(w: &ResultMatrix) -> Result<RankingSet> {
    all_optimal_rankings_with(w, &Limits::default())
}

pub fn all_optimal_rankings_with(w: &ResultMatrix, limits: &Limits) -> Result<RankingSet> {
    let forward = ForwardDegrees::compute(w, limits)?;
    let count = forward.count_optimal();
    if count > BigUint::from(limits.max_listed_rankings) {
        return Err(Error::ResourceLimit(format!(
            "{} optimal rankings exceed the listing limit of {}",
            count, limits.max_listed_rankings
        )));
    }
    Ok(collect(w, &forward, count, usize::MAX))
}

/// At most `max_list` optimal rankings together with the exact total count.
pub fn optimal_rankings_truncated(
    w: &ResultMatrix,
    max_list: usize,
    limits: &Limits,
) -> Result<RankingSet> {
    let forward = ForwardDegrees::compute(w, limits)?;
    let count = forward.count_optimal();
    Ok(collect(w, &forward, count, max_list))
}

fn collect(w: &ResultMatrix, forward: &ForwardDegrees, count: BigUint, cap: usize) -> RankingSet {
    let mut rankings: Vec<Ranking> = forward
        .backward(cap)
        .into_iter()
        .map(Ranking::from_vec_unchecked)
        .collect();
    rankings.sort();
    debug_assert!(
        rankings.windows(2).all(|p| p[0] != p[1]),
        "backward pass produced duplicate rankings"
    );
    RankingSet {
        rankings,
        count,
        s_hat: w.total() - forward.degree(forward.full()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::subset_spectra;
    use crate::testutil::{example_one, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_based(set: &RankingSet) -> Vec<Vec<usize>> {
        set.rankings.iter().map(|r| r.to_one_based()).collect()
    }

    #[test]
    fn example_one_rankings() {
        let w = example_one();
        assert_eq!(slater_index(&w).unwrap(), 1);
        let set = all_optimal_rankings(&w).unwrap();
        assert_eq!(
            one_based(&set),
            vec![vec![1, 2, 4, 3], vec![2, 4, 1, 3], vec![4, 1, 2, 3]]
        );
        assert_eq!(set.count, BigUint::from(3u32));
        assert!(set.is_complete());
        assert!(set.rankings.iter().all(|r| r.as_slice()[3] == 2));
        for r in &set.rankings {
            assert_eq!(w.inconsistency_index(r).unwrap(), 1);
        }
    }

    #[test]
    fn transitive_matrix_has_identity_only() {
        let w = ResultMatrix::transitive(5, 1).unwrap();
        assert_eq!(slater_index(&w).unwrap(), 0);
        let set = all_optimal_rankings(&w).unwrap();
        assert_eq!(one_based(&set), vec![vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn zero_matrix_every_order_optimal() {
        let w = ResultMatrix::zeros(3).unwrap();
        assert_eq!(slater_index(&w).unwrap(), 0);
        let set = all_optimal_rankings(&w).unwrap();
        assert_eq!(set.rankings.len(), 6);
        assert_eq!(set.count, BigUint::from(6u32));
    }

    #[test]
    fn listing_limit_and_truncation() {
        let w = ResultMatrix::zeros(6).unwrap();
        let limits = Limits {
            max_listed_rankings: 100,
            ..Limits::default()
        };
        assert!(matches!(
            all_optimal_rankings_with(&w, &limits),
            Err(Error::ResourceLimit(_))
        ));
        let set = optimal_rankings_truncated(&w, 10, &limits).unwrap();
        assert_eq!(set.rankings.len(), 10);
        assert_eq!(set.count, BigUint::from(720u32));
        assert!(!set.is_complete());
    }

    #[test]
    fn index_limit() {
        let w = ResultMatrix::zeros(5).unwrap();
        let limits = Limits {
            index_max_objects: 4,
            ..Limits::default()
        };
        assert!(matches!(
            slater_index_with(&w, &limits),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn forward_degrees_match_polynomial_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let w = random_matrix(&mut rng, 7, 3);
            let forward = ForwardDegrees::compute(&w, &Limits::default()).unwrap();
            for layer in subset_spectra(&w).unwrap() {
                for s in layer {
                    assert_eq!(forward.degree(s.members), s.degree());
                }
            }
        }
    }
}
