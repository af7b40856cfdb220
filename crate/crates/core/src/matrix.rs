//! Observation matrices, orders and the consistency indices defined on them.

use std::fmt;

use crate::error::{Error, Result};

/// Largest object count the bitmask-based algorithms can address.
pub const MAX_OBJECTS: usize = 32;

/// Square matrix of pairwise win counts: `wins(m, n)` is how many times
/// object `m` beat object `n`. The diagonal is always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResultMatrix {
    m: usize,
    w: Vec<u64>,
    total: u64,
}

impl ResultMatrix {
    /// Builds a matrix from rows. Rows must be square with a zero diagonal.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::invalid("matrix must contain at least one object"));
        }
        let mut w = Vec::with_capacity(m * m);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::invalid(format!(
                    "matrix is not square: row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    m
                )));
            }
            if row[i] != 0 {
                return Err(Error::invalid(format!(
                    "diagonal entry ({0}, {0}) must be zero, got {1}",
                    i + 1,
                    row[i]
                )));
            }
            w.extend_from_slice(row);
        }
        let total = w.iter().sum();
        Ok(ResultMatrix { m, w, total })
    }

    /// An `m x m` matrix with no comparisons.
    pub fn zeros(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("matrix must contain at least one object"));
        }
        Ok(ResultMatrix {
            m,
            w: vec![0; m * m],
            total: 0,
        })
    }

    /// Perfectly transitive matrix: object `i` beats `j` `k` times whenever `i < j`.
    pub fn transitive(m: usize, k: u64) -> Result<Self> {
        let mut rows = vec![vec![0u64; m]; m];
        for (i, row) in rows.iter_mut().enumerate() {
            for cell in row.iter_mut().skip(i + 1) {
                *cell = k;
            }
        }
        Self::from_rows(&rows)
    }

    /// Number of objects `M`.
    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Wins of `m` over `n`.
    #[inline]
    pub fn wins(&self, m: usize, n: usize) -> u64 {
        self.w[m * self.m + n]
    }

    /// Total number of comparisons `T`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of comparisons between `m` and `n`.
    pub fn comparisons(&self, m: usize, n: usize) -> u64 {
        self.wins(m, n) + self.wins(n, m)
    }

    pub fn row(&self, m: usize) -> &[u64] {
        &self.w[m * self.m..(m + 1) * self.m]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.m).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix with every entry multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        ResultMatrix {
            m: self.m,
            w: self.w.iter().map(|&x| x * factor).collect(),
            total: self.total * factor,
        }
    }

    /// Symmetric per-pair comparison counts.
    pub fn schedule(&self) -> Vec<Vec<u64>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.comparisons(i, j)).collect())
            .collect()
    }

    /// Total wins of `e` against the members of `subset` (a bitmask over objects).
    pub fn cross_weight(&self, e: usize, subset: u64) -> Result<u64> {
        if e >= self.m {
            return Err(Error::invalid(format!(
                "object index {} out of range for {} objects",
                e, self.m
            )));
        }
        if self.m < 64 && subset >> self.m != 0 {
            return Err(Error::invalid(
                "subset refers to objects outside the matrix",
            ));
        }
        if subset & (1 << e) == 0 {
            return Err(Error::invalid(format!("object {} is not in the subset", e)));
        }
        Ok(self.cross_weight_direct(e, subset))
    }

    #[inline]
    pub(crate) fn cross_weight_direct(&self, e: usize, subset: u64) -> u64 {
        let row = self.row(e);
        let mut bits = subset;
        let mut sum = 0;
        while bits != 0 {
            let n = bits.trailing_zeros() as usize;
            sum += row[n];
            bits &= bits - 1;
        }
        sum
    }

    /// Consistency index: comparisons agreeing with `rho`.
    pub fn consistency_index(&self, rho: &Ranking) -> Result<u64> {
        self.check_ranking(rho)?;
        Ok(self.consistency_unchecked(rho.as_slice()))
    }

    /// Inconsistency index: comparisons disagreeing with `rho`.
    pub fn inconsistency_index(&self, rho: &Ranking) -> Result<u64> {
        Ok(self.total - self.consistency_index(rho)?)
    }

    pub(crate) fn consistency_unchecked(&self, order: &[usize]) -> u64 {
        let mut c = 0;
        for (i, &a) in order.iter().enumerate() {
            let row = self.row(a);
            for &b in &order[i + 1..] {
                c += row[b];
            }
        }
        c
    }

    fn check_ranking(&self, rho: &Ranking) -> Result<()> {
        if rho.len() != self.m {
            return Err(Error::invalid(format!(
                "ranking has {} entries but the matrix has {} objects",
                rho.len(),
                self.m
            )));
        }
        Ok(())
    }

    pub(crate) fn check_bitmask_capacity(&self) -> Result<()> {
        if self.m > MAX_OBJECTS {
            return Err(Error::ResourceLimit(format!(
                "{} objects exceed the {}-object bitmask capacity",
                self.m, MAX_OBJECTS
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for ResultMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ResultMatrix")
            .field("m", &self.m)
            .field("total", &self.total)
            .field("w", &self.rows())
            .finish()
    }
}

/// A permutation of object indices `0..M`, best object first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &x in &order {
            if x >= order.len() || seen[x] {
                return Err(Error::invalid(format!(
                    "{:?} is not a permutation of 0..{}",
                    order,
                    order.len()
                )));
            }
            seen[x] = true;
        }
        Ok(Ranking(order))
    }

    /// Builds a ranking from 1-based object numbers.
    pub fn from_one_based(order: &[usize]) -> Result<Self> {
        if order.contains(&0) {
            return Err(Error::invalid("1-based ranking contains 0"));
        }
        Self::new(order.iter().map(|&x| x - 1).collect())
    }

    pub fn identity(m: usize) -> Self {
        Ranking((0..m).collect())
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        Ranking(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> Self {
        Ranking(self.0.iter().rev().copied().collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    /// Position of each object in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::example_one;

    fn one_based(order: &[usize]) -> Ranking {
        Ranking::from_one_based(order).unwrap()
    }

    #[test]
    fn derived_totals() {
        let w = example_one();
        assert_eq!(w.total(), 6);
        assert_eq!(w.comparisons(0, 3), 1);
        assert_eq!(w.comparisons(3, 0), 1);
        assert_eq!(w.comparisons(2, 2), 0);
    }

    #[test]
    fn consistency_of_example_one() {
        let w = example_one();
        let rho = one_based(&[1, 2, 4, 3]);
        assert_eq!(w.consistency_index(&rho).unwrap(), 5);
        assert_eq!(w.inconsistency_index(&rho).unwrap(), 1);
    }

    #[test]
    fn two_objects() {
        let w = ResultMatrix::from_rows(&[[0, 1], [0, 0]]).unwrap();
        assert_eq!(w.consistency_index(&one_based(&[1, 2])).unwrap(), 1);
        assert_eq!(w.consistency_index(&one_based(&[2, 1])).unwrap(), 0);
        assert_eq!(w.inconsistency_index(&one_based(&[2, 1])).unwrap(), 1);
    }

    #[test]
    fn zero_matrix_has_no_inconsistency() {
        let w = ResultMatrix::zeros(4).unwrap();
        assert_eq!(w.inconsistency_index(&one_based(&[3, 1, 4, 2])).unwrap(), 0);
    }

    #[test]
    fn ranking_length_mismatch() {
        let w = example_one();
        let err = w.consistency_index(&Ranking::identity(3)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn cross_weights() {
        let w = example_one();
        assert_eq!(w.cross_weight(0, 0b1111).unwrap(), 2);
        assert_eq!(w.cross_weight(3, 0b1101).unwrap(), 2);
        assert_eq!(w.cross_weight(2, 0b0100).unwrap(), 0);
        assert!(w.cross_weight(4, 0b1111).is_err());
        assert!(w.cross_weight(1, 0b1101).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(ResultMatrix::from_rows(&[[0u64, 1], [0, 0], [1, 1]]).is_err());
        assert!(ResultMatrix::from_rows(&[vec![0u64, 1], vec![0]]).is_err());
        assert!(ResultMatrix::from_rows(&[[1u64, 0], [0, 0]]).is_err());
        assert!(ResultMatrix::from_rows::<[u64; 0]>(&[]).is_err());
    }

    #[test]
    fn ranking_validation() {
        assert!(Ranking::new(vec![0, 2, 1]).is_ok());
        assert!(Ranking::new(vec![0, 0, 1]).is_err());
        assert!(Ranking::new(vec![0, 3, 1]).is_err());
        assert!(Ranking::from_one_based(&[0, 1]).is_err());
    }
}
