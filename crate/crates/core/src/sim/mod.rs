//! Synthetic data under the Bernoulli comparison model and the Monte-Carlo
//! Slater test.

mod generate;

pub use generate::{derive_seed, generate_matrix, uniform_schedule, GeneratorConfig};
pub use slater_test::{slater_mc_test, Decision, SlaterTestResult};
