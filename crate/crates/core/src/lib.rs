//! Rankability analysis of pairwise-comparison data.
//!
//! Given a matrix of pairwise win counts, this crate computes the exact Slater
//! spectrum (how many orders disagree with exactly `t` observations, for every
//! `t`), the posterior distribution of the Bernoulli consistency parameter `p`
//! implied by it, and every optimal solution of the linear ordering problem.
//!
//! ```
//! use rankability::{slater_spectrum, all_optimal_rankings, ResultMatrix};
//!
//! let w = ResultMatrix::from_rows(&[
//!     [0, 1, 1, 0],
//!     [0, 0, 1, 1],
//!     [0, 0, 0, 0],
//!     [1, 0, 1, 0],
//! ]).unwrap();
//! let spectrum = slater_spectrum(&w).unwrap();
//! assert_eq!(spectrum.to_decimal_string(), "0,3,6,6,6,3,0");
//! assert_eq!(all_optimal_rankings(&w).unwrap().rankings.len(), 3);
//! ```

pub mod error;
pub mod inference;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod rankings;
pub mod sim;
pub mod spectrum;
mod subset;

pub use error::{Error, Result};
pub use matrix::{Ranking, ResultMatrix};
pub use oracle::{brute_force_optimal_rankings, brute_force_spectrum};
pub use rankings::{
    all_optimal_rankings, all_optimal_rankings_with, optimal_rankings_truncated, slater_index,
    slater_index_with, RankingSet,
};
pub use spectrum::{slater_spectrum, slater_spectrum_with, SlaterSpectrum};

/// Size guards for the exponential-memory algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `M` accepted by the spectrum recursion.
    pub spectrum_max_objects: usize,
    /// Largest `M` accepted by the Slater-index recursion (one `u32` per subset).
    pub index_max_objects: usize,
    /// Largest number of rankings [`all_optimal_rankings`] will materialize.
    pub max_listed_rankings: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            spectrum_max_objects: 22,
            index_max_objects: 28,
            max_listed_rankings: 1_000_000,
        }
    }
}
