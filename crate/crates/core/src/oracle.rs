//! Brute-force counterparts of the spectrum and ranking recursions, by
//! enumerating all `M!` orders. Used to cross-check the exact algorithms.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{Ranking, ResultMatrix};
use crate::rankings::RankingSet;
use crate::spectrum::SlaterSpectrum;

/// Largest `M` the enumeration accepts.
pub const ORACLE_MAX_OBJECTS: usize = 10;

fn guard(w: &ResultMatrix) -> Result<()> {
    if w.len() > ORACLE_MAX_OBJECTS {
        return Err(Error::ResourceLimit(format!(
            "brute-force enumeration of {} objects exceeds the limit of {} ({}! orders)",
            w.len(),
            ORACLE_MAX_OBJECTS,
            w.len()
        )));
    }
    Ok(())
}

/// Rearranges `order` into the next permutation in lexicographic order.
/// Returns false after the last one.
fn next_permutation(order: &mut [usize]) -> bool {
    let n = order.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && order[i - 1] >= order[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while order[j] <= order[i - 1] {
        j -= 1;
    }
    order.swap(i - 1, j);
    order[i..].reverse();
    true
}

/// Calls `visit` with every permutation of `0..m` and its inconsistency index.
fn for_each_order(w: &ResultMatrix, mut visit: impl FnMut(&[usize], u64)) {
    let mut order: Vec<usize> = (0..w.len()).collect();
    loop {
        let s = w.total() - w.consistency_unchecked(&order);
        visit(&order, s);
        if !next_permutation(&mut order) {
            break;
        }
    }
}

pub fn brute_force_spectrum(w: &ResultMatrix) -> Result<SlaterSpectrum> {
    guard(w)?;
    let mut counts = vec![0u64; w.total() as usize + 1];
    for_each_order(w, |_, s| counts[s as usize] += 1);
    SlaterSpectrum::from_counts(w.len(), counts.into_iter().map(BigUint::from).collect())
}

pub fn brute_force_optimal_rankings(w: &ResultMatrix) -> Result<RankingSet> {
    guard(w)?;
    let mut best = u64::MAX;
    let mut rankings = Vec::new();
    for_each_order(w, |order, s| {
        if s < best {
            best = s;
            rankings.clear();
        }
        if s == best {
            rankings.push(Ranking::from_vec_unchecked(order.to_vec()));
        }
    });
    rankings.sort();
    Ok(RankingSet {
        count: BigUint::from(rankings.len()),
        rankings,
        s_hat: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::example_one;

    #[test]
    fn permutations_are_exhaustive() {
        let mut order = vec![0, 1, 2, 3];
        let mut n = 1;
        while next_permutation(&mut order) {
            n += 1;
        }
        assert_eq!(n, 24);
        assert_eq!(order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn example_one_by_enumeration() {
        let w = example_one();
        assert_eq!(
            brute_force_spectrum(&w).unwrap().to_decimal_string(),
            "0,3,6,6,6,3,0"
        );
        let set = brute_force_optimal_rankings(&w).unwrap();
        let got: Vec<_> = set.rankings.iter().map(|r| r.to_one_based()).collect();
        assert_eq!(
            got,
            vec![vec![1, 2, 4, 3], vec![2, 4, 1, 3], vec![4, 1, 2, 3]]
        );
        assert_eq!(set.s_hat, 1);
    }

    #[test]
    fn single_object() {
        let w = ResultMatrix::zeros(1).unwrap();
        let s = brute_force_spectrum(&w).unwrap();
        assert_eq!(s.to_decimal_string(), "1");
        assert_eq!(s.total(), 0);
    }

    #[test]
    fn zero_matrix_all_orders() {
        let set = brute_force_optimal_rankings(&ResultMatrix::zeros(3).unwrap()).unwrap();
        assert_eq!(set.rankings.len(), 6);
    }

    #[test]
    fn refuses_large_inputs() {
        let w = ResultMatrix::zeros(11).unwrap();
        assert!(matches!(
            brute_force_spectrum(&w),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            brute_force_optimal_rankings(&w),
            Err(Error::ResourceLimit(_))
        ));
    }
}
