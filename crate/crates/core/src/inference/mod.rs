//! Posterior inference on the Bernoulli consistency parameter `p`.

pub mod beta;
pub mod grid;
pub mod mode;
pub mod posterior;
pub mod quadrature;

use std::cmp::Ordering;

pub use beta::reg_inc_beta;
pub use grid::{joint_posterior, posterior_grid, JointPosterior, PdfGrid};
pub use mode::{mode_estimate, sigma, Curvature, ModeEstimate, ModeStatus};
pub use posterior::{
    degenerate_mean, degree_of_linearity, lambda_joint, log_phi, normalizer_z, posterior_mean,
    thresholds, PhiFunction, Thresholds,
};

use crate::error::Result;
use crate::spectrum::SlaterSpectrum;

/// Summary of the posterior derived from one spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSummary {
    pub z: f64,
    pub ln_z: f64,
    pub mode: ModeEstimate,
    pub mean: f64,
    /// `phi''(0.5)`; `None` when `T = 0`.
    pub sigma: Option<f64>,
    pub sigma_sign: Ordering,
    /// Degree of linearity; `None` when `T = 0`.
    pub lambda: Option<f64>,
    pub s_hat: u64,
    pub total: u64,
}

/// The same quantities computed from the two-term (Slater index only) spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateSummary {
    pub mean_tilde: f64,
    pub sigma_tilde: Option<f64>,
    pub sigma_tilde_sign: Ordering,
    pub thresholds: Option<Thresholds>,
    pub z_tilde: f64,
}

pub fn summarize(spectrum: &SlaterSpectrum) -> Result<PosteriorSummary> {
    let total = spectrum.total();
    let ln_z = posterior::ln_normalizer(spectrum);
    let curvature = (total > 0).then(|| Curvature::of(spectrum)).transpose()?;
    Ok(PosteriorSummary {
        z: ln_z.exp(),
        ln_z,
        mode: mode_estimate(spectrum),
        mean: posterior_mean(spectrum)?,
        sigma: curvature.as_ref().map(Curvature::value),
        sigma_sign: curvature.as_ref().map_or(Ordering::Equal, Curvature::sign),
        lambda: (total > 0)
            .then(|| degree_of_linearity(spectrum.s_hat(), total))
            .transpose()?,
        s_hat: spectrum.s_hat(),
        total,
    })
}

pub fn summarize_degenerate(spectrum: &SlaterSpectrum) -> Result<DegenerateSummary> {
    let total = spectrum.total();
    let degenerate = spectrum.to_degenerate();
    let curvature = (total > 0)
        .then(|| Curvature::of(&degenerate))
        .transpose()?;
    Ok(DegenerateSummary {
        mean_tilde: degenerate_mean(spectrum.s_hat(), total, spectrum.a_s_hat())?,
        sigma_tilde: curvature.as_ref().map(Curvature::value),
        sigma_tilde_sign: curvature.as_ref().map_or(Ordering::Equal, Curvature::sign),
        thresholds: (total > 0).then(|| thresholds(total)).transpose()?,
        z_tilde: normalizer_z(&degenerate),
    })
}
