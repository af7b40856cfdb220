//! Bitmask subsets, their combinatorial (colex) ranks and cross-weight lookup.

use crate::matrix::ResultMatrix;

/// Pascal's triangle up to 64 choose 64, saturating at `u64::MAX`.
pub(crate) struct Binomials {
    table: Vec<Vec<u64>>,
}

impl Binomials {
    pub(crate) fn new(n: usize) -> Self {
        let mut table = vec![vec![0u64; n + 2]; n + 1];
        for i in 0..=n {
            table[i][0] = 1;
            for j in 1..=i {
                table[i][j] = table[i - 1][j - 1].saturating_add(table[i - 1][j]);
            }
        }
        Binomials { table }
    }

    #[inline]
    pub(crate) fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.table[n][k]
        }
    }
}

/// All `k`-subsets of `{0..m}` in increasing numeric order, which is colex order.
pub(crate) fn k_subsets(m: usize, k: usize) -> Vec<u64> {
    let binom = Binomials::new(m);
    let mut out = Vec::with_capacity(binom.get(m, k) as usize);
    if k == 0 {
        out.push(0);
        return out;
    }
    if k > m {
        return out;
    }
    let limit = 1u64 << m;
    let mut mask: u64 = (1u64 << k) - 1;
    while mask < limit {
        out.push(mask);
        // Gosper's hack
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

/// Colex rank of a subset among subsets of the same size.
#[cfg(test)]
pub(crate) fn colex_rank(mask: u64, binom: &Binomials) -> usize {
    let mut rank = 0u64;
    let mut bits = mask;
    let mut i = 1;
    while bits != 0 {
        let p = bits.trailing_zeros() as usize;
        rank += binom.get(p, i);
        i += 1;
        bits &= bits - 1;
    }
    rank as usize
}

/// For each member `e` of `mask` (ascending), the colex rank of `mask \ {e}`
/// within the family of one-smaller subsets.
pub(crate) fn removal_ranks(mask: u64, binom: &Binomials, out: &mut Vec<(usize, usize)>) {
    out.clear();
    let mut positions = [0usize; 64];
    let mut k = 0;
    let mut bits = mask;
    while bits != 0 {
        positions[k] = bits.trailing_zeros() as usize;
        k += 1;
        bits &= bits - 1;
    }
    // suffix[j] = sum_{i>j} C(p_i, i), i.e. the ranks of the members above j
    // once they shift down by one slot.
    let mut suffix = [0u64; 65];
    for j in (0..k).rev() {
        suffix[j] = suffix[j + 1]
            + if j + 1 < k {
                binom.get(positions[j + 1], j + 1)
            } else {
                0
            };
    }
    let mut prefix = 0u64;
    for j in 0..k {
        out.push((positions[j], (prefix + suffix[j]) as usize));
        prefix += binom.get(positions[j], j + 1);
    }
}

/// Byte-sliced lookup of `d_e(subset) = sum_{n in subset} w[e][n]`.
///
/// Produces exactly the direct sum; each lookup costs one table read per
/// eight objects.
pub(crate) struct CrossTable {
    chunks: usize,
    // [e][chunk][byte]
    table: Vec<u64>,
}

impl CrossTable {
    pub(crate) fn new(w: &ResultMatrix) -> Self {
        let m = w.len();
        let chunks = m.div_ceil(8).max(1);
        let mut table = vec![0u64; m * chunks * 256];
        for e in 0..m {
            let row = w.row(e);
            for c in 0..chunks {
                let base = (e * chunks + c) * 256;
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let n = c * 8 + low;
                    let add = if n < m { row[n] } else { 0 };
                    table[base + byte] = table[base + (byte & (byte - 1))] + add;
                }
            }
        }
        CrossTable { chunks, table }
    }

    #[inline]
    pub(crate) fn get(&self, e: usize, subset: u64) -> u64 {
        let mut sum = 0;
        let mut s = subset;
        let base = e * self.chunks * 256;
        for c in 0..self.chunks {
            sum += self.table[base + c * 256 + (s & 0xff) as usize];
            s >>= 8;
        }
        sum
    }
}
