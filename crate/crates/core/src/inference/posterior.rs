//! Posterior of the Bernoulli parameter `p` under a uniform prior on `[0.5, 1]`.
//!
//! The unnormalized posterior is `phi(p) = sum_t a_t p^(T-t) (1-p)^t`. Every
//! quantity here is evaluated in the log domain with max-shifted sums because
//! `a_t` reaches `M!` while `p^T` underflows.

use num_bigint::BigUint;
use statrs::function::factorial::ln_binomial;

use super::beta::ln_reg_inc_beta;
use crate::error::{Error, Result};
use crate::spectrum::SlaterSpectrum;

/// `ln sum_i exp(x_i)`; `-inf` for an empty or all-`-inf` input.
pub fn log_sum_exp(values: impl IntoIterator<Item = f64>) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `phi` prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct PhiFunction {
    terms: Vec<(f64, u64)>,
    total: u64,
}

impl PhiFunction {
    pub fn new(spectrum: &SlaterSpectrum) -> Self {
        PhiFunction {
            terms: spectrum.log_terms(),
            total: spectrum.total(),
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `ln phi(p)` on the closed interval `[0, 1]`.
    pub fn ln_phi(&self, p: f64) -> f64 {
        let t_total = self.total as f64;
        if p >= 1.0 {
            return self.end_term(0);
        }
        if p <= 0.0 {
            return self.end_term(self.total);
        }
        let lp = p.ln();
        let lq = (-p).ln_1p();
        log_sum_exp(
            self.terms
                .iter()
                .map(|&(la, t)| la + (t_total - t as f64) * lp + t as f64 * lq),
        )
    }

    fn end_term(&self, t: u64) -> f64 {
        self.terms
            .iter()
            .find(|&&(_, s)| s == t)
            .map_or(f64::NEG_INFINITY, |&(la, _)| la)
    }

    /// `d ln phi / dp` for `p` in `(0, 1)`.
    pub fn d_ln_phi(&self, p: f64) -> f64 {
        let t_total = self.total as f64;
        let lp = p.ln();
        let lq = (-p).ln_1p();
        let logs: Vec<f64> = self
            .terms
            .iter()
            .map(|&(la, t)| la + (t_total - t as f64) * lp + t as f64 * lq)
            .collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut weight_sum = 0.0;
        let mut slope = 0.0;
        for (&x, &(_, t)) in logs.iter().zip(&self.terms) {
            let wgt = (x - max).exp();
            let t = t as f64;
            weight_sum += wgt;
            slope += wgt * ((t_total - t) / p - t / (1.0 - p));
        }
        slope / weight_sum
    }
}

/// `ln phi(p)` for `p` strictly inside `(0, 1)`.
pub fn log_phi(spectrum: &SlaterSpectrum, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {} is outside (0, 1)", p)));
    }
    Ok(PhiFunction::new(spectrum).ln_phi(p))
}

/// `ln Z` where `Z = integral of phi over [0.5, 1] = 0.5/(T+1) sum_t a_t / C(T, t)`.
pub fn ln_normalizer(spectrum: &SlaterSpectrum) -> f64 {
    let t_total = spectrum.total();
    let sum = log_sum_exp(
        spectrum
            .log_terms()
            .into_iter()
            .map(|(la, t)| la - ln_binomial(t_total, t)),
    );
    0.5f64.ln() - ((t_total + 1) as f64).ln() + sum
}

/// Normalization constant `Z`.
pub fn normalizer_z(spectrum: &SlaterSpectrum) -> f64 {
    ln_normalizer(spectrum).exp()
}

/// Posterior mean
/// `E[p] = 1/(Z (T+2)) sum_t a_t I_0.5(t+1, T-t+2) / C(T+1, t)`.
pub fn posterior_mean(spectrum: &SlaterSpectrum) -> Result<f64> {
    let t_total = spectrum.total();
    let tf = t_total as f64;
    let terms = spectrum
        .log_terms()
        .into_iter()
        .map(|(la, t)| {
            let tt = t as f64;
            Ok(la + ln_reg_inc_beta(0.5, tt + 1.0, tf - tt + 2.0)? - ln_binomial(t_total + 1, t))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((log_sum_exp(terms) - ln_normalizer(spectrum) - (tf + 2.0).ln()).exp())
}

/// Posterior mean of the two-term spectrum that keeps only `a[s_hat]` and
/// `a[T - s_hat]`. The value of `a_s` cancels in the normalization.
pub fn degenerate_mean(s_hat: u64, total: u64, a_s: &BigUint) -> Result<f64> {
    if 2 * s_hat > total {
        return Err(Error::invalid(format!(
            "Slater index {} exceeds half of {} comparisons",
            s_hat, total
        )));
    }
    if *a_s == BigUint::default() {
        return Err(Error::invalid("a[s_hat] must be positive"));
    }
    let tf = total as f64;
    // Both end terms are always counted (also when s_hat = T/2), matching the
    // two-term form of the degenerate phi and its normalizer.
    let terms = [s_hat, total - s_hat]
        .into_iter()
        .map(|t| {
            let tt = t as f64;
            Ok(ln_reg_inc_beta(0.5, tt + 1.0, tf - tt + 2.0)? - ln_binomial(total + 1, t))
        })
        .collect::<Result<Vec<f64>>>()?;
    let ln_scale = (tf + 1.0).ln() + ln_binomial(total, s_hat) - (tf + 2.0).ln();
    Ok((ln_scale + log_sum_exp(terms)).exp())
}

/// Degree of linearity `1 - s_hat / T`.
pub fn degree_of_linearity(s_hat: u64, total: u64) -> Result<f64> {
    if total == 0 {
        return Err(Error::domain(
            "degree of linearity needs at least one comparison",
        ));
    }
    if s_hat > total {
        return Err(Error::invalid(format!(
            "Slater index {} exceeds {} comparisons",
            s_hat, total
        )));
    }
    Ok(1.0 - s_hat as f64 / total as f64)
}

/// Rankability thresholds for `T` comparisons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    /// `0.5 (T - sqrt T)`: the degenerate curvature is positive iff `s_hat` is below it.
    pub s_th: f64,
    /// `0.5 (1 + 1/sqrt T)`: the same condition expressed on the degree of linearity.
    pub lambda_th: f64,
}

pub fn thresholds(total: u64) -> Result<Thresholds> {
    if total == 0 {
        return Err(Error::domain("thresholds need at least one comparison"));
    }
    let t = total as f64;
    let root = t.sqrt();
    Ok(Thresholds {
        s_th: 0.5 * (t - root),
        lambda_th: 0.5 * (1.0 + 1.0 / root),
    })
}

/// Joint degree of linearity `1 - mean(s_hat) / mean(T)`.
///
/// This is not the average of the per-matrix degrees of linearity unless all
/// `T` are equal.
pub fn lambda_joint(s_hats: &[u64], totals: &[u64]) -> Result<f64> {
    if s_hats.len() != totals.len() {
        return Err(Error::invalid(format!(
            "{} Slater indices but {} totals",
            s_hats.len(),
            totals.len()
        )));
    }
    if s_hats.is_empty() {
        return Err(Error::invalid(
            "joint degree of linearity needs at least one matrix",
        ));
    }
    if let Some(pos) = totals.iter().position(|&t| t == 0) {
        return Err(Error::domain(format!(
            "matrix {} has no comparisons",
            pos + 1
        )));
    }
    let s: u64 = s_hats.iter().sum();
    let t: u64 = totals.iter().sum();
    Ok(1.0 - s as f64 / t as f64)
}
