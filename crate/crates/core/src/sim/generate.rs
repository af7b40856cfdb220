use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::matrix::{Ranking, ResultMatrix};

/// Parameters of one synthetic observation matrix.
///
/// Random draws use ChaCha20 (`rand_chacha`), seeded with `seed` and one
/// stream per ordered pair, so a matrix is reproducible across platforms and
/// independent of evaluation order.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub m: usize,
    /// Symmetric per-pair comparison counts `K_mn`.
    pub schedule: Vec<Vec<u64>>,
    /// Probability that the object ranked higher in `true_order` wins a comparison.
    pub p_bar: f64,
    pub true_order: Ranking,
    pub seed: u64,
}

impl GeneratorConfig {
    /// `k` comparisons between every pair, identity true order.
    pub fn uniform(m: usize, k: u64, p_bar: f64, seed: u64) -> Self {
        GeneratorConfig {
            m,
            schedule: uniform_schedule(m, k),
            p_bar,
            true_order: Ranking::identity(m),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid("object count must be at least 1"));
        }
        if !(0.5..=1.0).contains(&self.p_bar) {
            return Err(Error::invalid(format!(
                "p_bar must lie in [0.5, 1], got {}",
                self.p_bar
            )));
        }
        if self.true_order.len() != self.m {
            return Err(Error::invalid(format!(
                "true order has {} objects, expected {}",
                self.true_order.len(),
                self.m
            )));
        }
        check_schedule(&self.schedule, self.m)
    }
}

pub fn uniform_schedule(m: usize, k: u64) -> Vec<Vec<u64>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { 0 } else { k }).collect())
        .collect()
}

pub(crate) fn check_schedule(schedule: &[Vec<u64>], m: usize) -> Result<()> {
    if schedule.len() != m || schedule.iter().any(|row| row.len() != m) {
        return Err(Error::invalid(format!(
            "schedule must be a square {0}x{0} matrix",
            m
        )));
    }
    for (i, row) in schedule.iter().enumerate() {
        if row[i] != 0 {
            return Err(Error::invalid(format!(
                "schedule diagonal entry ({0}, {0}) must be zero",
                i + 1
            )));
        }
        for (j, other) in schedule[..i].iter().enumerate() {
            if row[j] != other[i] {
                return Err(Error::invalid(format!(
                    "schedule is not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// SplitMix64 finalizer applied to `seed + index`, used to derive
/// independent seeds for Monte-Carlo replicas.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn generate_matrix(config: &GeneratorConfig) -> Result<ResultMatrix> {
    config.validate()?;
    Ok(sample(
        &config.schedule,
        &config.true_order.positions(),
        config.p_bar,
        config.seed,
    ))
}

/// Draws a matrix for a validated schedule. `position[i]` is the rank of
/// object `i` in the true order.
pub(crate) fn sample(schedule: &[Vec<u64>], position: &[usize], p: f64, seed: u64) -> ResultMatrix {
    let m = schedule.len();
    let mut rows = vec![vec![0u64; m]; m];
    for a in 0..m {
        for b in a + 1..m {
            let k = schedule[a][b];
            if k == 0 {
                continue;
            }
            let (hi, lo) = if position[a] < position[b] {
                (a, b)
            } else {
                (b, a)
            };
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream((a * m + b) as u64);
            let wins = (0..k).filter(|_| rng.gen_bool(p)).count() as u64;
            rows[hi][lo] = wins;
            rows[lo][hi] = k - wins;
        }
    }
    ResultMatrix::from_rows(&rows).expect("schedule was validated")
}
