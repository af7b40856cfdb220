//! Tabulated posterior densities, single and joint.

use super::mode::{argmax, half_grid, refine_on_grid, ModeStatus, BELOW_ONE};
use super::posterior::{ln_normalizer, PhiFunction};
use super::quadrature::trapezoid;
use crate::error::{Error, Result};
use crate::spectrum::SlaterSpectrum;

/// Posterior density tabulated on `[0.5, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PdfGrid {
    pub p_values: Vec<f64>,
    /// Normalized density `phi(p) / Z`.
    pub density: Vec<f64>,
    /// Unnormalized `ln phi(p)` (summed over matrices for a joint grid).
    pub log_phi: Vec<f64>,
}

impl PdfGrid {
    /// Trapezoidal integral of the density.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.p_values, &self.density)
    }

    /// Trapezoidal posterior mean.
    pub fn mean(&self) -> f64 {
        let weighted: Vec<f64> = self
            .p_values
            .iter()
            .zip(&self.density)
            .map(|(p, d)| p * d)
            .collect();
        trapezoid(&self.p_values, &weighted) / self.mass()
    }
}

fn check_points(n_points: usize) -> Result<()> {
    if n_points < 2 {
        return Err(Error::invalid(format!(
            "a grid needs at least 2 points, got {}",
            n_points
        )));
    }
    Ok(())
}

/// `pdf(p | W) = phi(p) / Z` on `n_points` evenly spaced points of `[0.5, 1]`.
pub fn posterior_grid(spectrum: &SlaterSpectrum, n_points: usize) -> Result<PdfGrid> {
    check_points(n_points)?;
    let phi = PhiFunction::new(spectrum);
    let ln_z = ln_normalizer(spectrum);
    let p_values = half_grid(n_points);
    let log_phi: Vec<f64> = p_values.iter().map(|&p| phi.ln_phi(p)).collect();
    let density = log_phi.iter().map(|&l| (l - ln_z).exp()).collect();
    Ok(PdfGrid {
        p_values,
        density,
        log_phi,
    })
}

/// Posterior from several independent matrices sharing the same `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPosterior {
    pub grid: PdfGrid,
    pub mode: f64,
    pub mode_status: ModeStatus,
    pub mean: f64,
}

/// Product of the individual `phi`s, normalized on the grid.
pub fn joint_posterior(spectra: &[SlaterSpectrum], n_points: usize) -> Result<JointPosterior> {
    if spectra.is_empty() {
        return Err(Error::invalid(
            "joint posterior needs at least one spectrum",
        ));
    }
    check_points(n_points)?;
    let phis: Vec<PhiFunction> = spectra.iter().map(PhiFunction::new).collect();
    let p_values = half_grid(n_points);
    let log_phi: Vec<f64> = p_values
        .iter()
        .map(|&p| phis.iter().map(|phi| phi.ln_phi(p)).sum())
        .collect();
    let best = argmax(&log_phi);
    let max = log_phi[best];
    let shifted: Vec<f64> = log_phi.iter().map(|&l| (l - max).exp()).collect();
    let norm = trapezoid(&p_values, &shifted);
    let density: Vec<f64> = shifted.iter().map(|&s| s / norm).collect();
    let grid = PdfGrid {
        p_values,
        density,
        log_phi,
    };
    let min = grid.log_phi.iter().copied().fold(f64::INFINITY, f64::min);

    let (mode, mode_status) = if max - min <= 1e-12 * max.abs().max(1.0) {
        (0.5, ModeStatus::Flat)
    } else if best == 0 {
        (0.5, ModeStatus::AtHalf)
    } else {
        let joint = JointPhi(&phis);
        (
            refine_joint(&joint, &grid.p_values, best),
            ModeStatus::Interior,
        )
    };
    let mean = grid.mean();
    Ok(JointPosterior {
        grid,
        mode,
        mode_status,
        mean,
    })
}

struct JointPhi<'a>(&'a [PhiFunction]);

impl JointPhi<'_> {
    fn slope(&self, p: f64) -> f64 {
        self.0.iter().map(|phi| phi.d_ln_phi(p)).sum()
    }
}

/// Bisection on the summed slope between the grid neighbours of `best`.
fn refine_joint(joint: &JointPhi<'_>, grid: &[f64], best: usize) -> f64 {
    if joint.0.len() == 1 {
        return refine_on_grid(&joint.0[0], grid, best);
    }
    let mut lo = grid[best - 1].max(0.5 + 1e-9);
    let mut hi = grid[(best + 1).min(grid.len() - 1)].min(1.0 - 1e-9);
    if joint.slope(lo) < 0.0 || joint.slope(hi) > 0.0 {
        return grid[best].min(BELOW_ONE);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if joint.slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}
