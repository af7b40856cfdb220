//! Location of the posterior mode.
//!
//! `phi'(0.5) = 0` always holds by symmetry of the spectrum, so the sign of
//! `sigma = phi''(0.5)` decides whether `p = 0.5` is a local maximum (data not
//! rankable) or a local minimum (the mode lies inside `(0.5, 1)`).

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use super::posterior::PhiFunction;
use crate::error::{Error, Result};
use crate::spectrum::{ln_biguint, SlaterSpectrum};

/// Number of grid points used to cross-check the root finder.
pub const MODE_GRID_POINTS: usize = 10_000;
/// Largest tolerated distance between the root and the grid argmax.
pub const MODE_GRID_TOLERANCE: f64 = 1e-3;
const BRACKET_EPS: f64 = 1e-9;
const ROOT_TOLERANCE: f64 = 1e-12;
/// Largest double below 1, reported when `phi` increases all the way to `p = 1`.
pub(crate) const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Exact second derivative of `phi` at `p = 0.5`:
/// `sigma = 2^(2-T) * sum_t a_t [(2t - T)^2 - T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curvature {
    /// `sum_t a_t [(2t - T)^2 - T]`.
    pub numerator: BigInt,
    /// `sum_t a_t [(2t - T)^2 + T]`, the scale used for near-zero tests.
    pub magnitude: BigInt,
    pub total: u64,
}

impl Curvature {
    pub fn of(spectrum: &SlaterSpectrum) -> Result<Self> {
        let total = spectrum.total();
        if total == 0 {
            return Err(Error::domain(
                "curvature at 0.5 is undefined without comparisons",
            ));
        }
        let t_total = BigInt::from(total);
        let mut numerator = BigInt::zero();
        let mut magnitude = BigInt::zero();
        let mut first = BigInt::zero();
        for t in spectrum.support() {
            let a = BigInt::from(spectrum.coefficient(t).clone());
            if a.is_zero() {
                continue;
            }
            let offset = BigInt::from(2 * t) - &t_total;
            first += &a * &offset;
            let square = &offset * &offset;
            numerator += &a * (&square - &t_total);
            magnitude += &a * (&square + &t_total);
        }
        debug_assert!(
            first.is_zero(),
            "phi'(0.5) must vanish for a symmetric spectrum"
        );
        Ok(Curvature {
            numerator,
            magnitude,
            total,
        })
    }

    /// `sigma` as a float (may underflow to zero for very large `T`; the sign
    /// is always available from [`sign`](Self::sign)).
    pub fn value(&self) -> f64 {
        if self.numerator.is_zero() {
            return 0.0;
        }
        let ln = ln_biguint(self.numerator.magnitude())
            + (2.0 - self.total as f64) * std::f64::consts::LN_2;
        let v = ln.exp();
        if self.numerator.sign() == Sign::Minus {
            -v
        } else {
            v
        }
    }

    /// Sign of `sigma`, treating `|sigma|` below `1e-12` of its scale as zero.
    pub fn sign(&self) -> Ordering {
        if self.numerator.is_zero() {
            return Ordering::Equal;
        }
        let ratio =
            (ln_biguint(self.numerator.magnitude()) - ln_biguint(self.magnitude.magnitude())).exp();
        if ratio <= 1e-12 {
            Ordering::Equal
        } else if self.numerator.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

/// `sigma = phi''(0.5)`.
pub fn sigma(spectrum: &SlaterSpectrum) -> Result<f64> {
    Ok(Curvature::of(spectrum)?.value())
}

/// How the mode was determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeStatus {
    /// `sigma > 0`; the mode is the interior root of `phi'(p) = 0`.
    Interior,
    /// `sigma < 0`; `p = 0.5` is a maximum.
    AtHalf,
    /// `sigma = 0` but `phi` is not constant; the grid argmax is reported.
    IndeterminateSigmaZero,
    /// `phi` is constant on `[0.5, 1]`.
    Flat,
}

impl ModeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeStatus::Interior => "interior",
            ModeStatus::AtHalf => "at-half",
            ModeStatus::IndeterminateSigmaZero => "indeterminate-sigma-zero",
            ModeStatus::Flat => "flat",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeEstimate {
    pub mode: f64,
    pub status: ModeStatus,
    /// Set when the root finder and the grid search disagreed.
    pub diagnostic: Option<String>,
}

/// Brent's method for a root of `f` in `[a, b]`, given `f(a)` and `f(b)` of
/// opposite sign.
pub fn brent_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain(format!(
            "root is not bracketed: f({}) = {}, f({}) = {}",
            a, fa, b, fb
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(Error::Internal("Brent's method did not converge".into()))
}

/// Evenly spaced points on `[0.5, 1]`.
pub(crate) fn half_grid(n: usize) -> Vec<f64> {
    let step = 0.5 / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                1.0
            } else {
                0.5 + i as f64 * step
            }
        })
        .collect()
}

/// Index of the largest value; the first one on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Mode of the posterior. Uses the sign of `sigma`, then Brent's method on
/// `d ln phi / dp`, and always cross-checks against a grid argmax since the
/// single-maximum property of `phi` is not guaranteed.
pub fn mode_estimate(spectrum: &SlaterSpectrum) -> ModeEstimate {
    let phi = PhiFunction::new(spectrum);
    let flat = ModeEstimate {
        mode: 0.5,
        status: ModeStatus::Flat,
        diagnostic: None,
    };
    if spectrum.total() == 0 {
        return flat;
    }
    let curvature = Curvature::of(spectrum).expect("T >= 1");
    let grid = half_grid(MODE_GRID_POINTS);
    let values: Vec<f64> = grid.iter().map(|&p| phi.ln_phi(p)).collect();
    let best = argmax(&values);
    let grid_mode = grid[best];

    match curvature.sign() {
        Ordering::Less => {
            let diagnostic = (values[best] > values[0] && grid_mode - 0.5 > MODE_GRID_TOLERANCE)
                .then(|| {
                    format!(
                        "sigma < 0 but the grid maximum is at p = {:.6} (ln phi {:.6e} above p = 0.5)",
                        grid_mode,
                        values[best] - values[0]
                    )
                });
            ModeEstimate {
                mode: 0.5,
                status: ModeStatus::AtHalf,
                diagnostic,
            }
        }
        Ordering::Equal => {
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values[best];
            if max - min <= 1e-12 * max.abs().max(1.0) {
                flat
            } else {
                ModeEstimate {
                    mode: grid_mode.min(BELOW_ONE),
                    status: ModeStatus::IndeterminateSigmaZero,
                    diagnostic: None,
                }
            }
        }
        Ordering::Greater => {
            let slope = |p: f64| phi.d_ln_phi(p);
            let lo = 0.5 + BRACKET_EPS;
            let hi = 1.0 - BRACKET_EPS;
            let root = if slope(hi) >= 0.0 {
                // phi still increasing at the right end (s_hat = 0)
                Ok(BELOW_ONE)
            } else {
                brent_root(slope, lo, hi, ROOT_TOLERANCE)
            };
            match root {
                Ok(root) if (root - grid_mode).abs() <= MODE_GRID_TOLERANCE => ModeEstimate {
                    mode: root,
                    status: ModeStatus::Interior,
                    diagnostic: None,
                },
                other => {
                    let local = refine_on_grid(&phi, &grid, best);
                    ModeEstimate {
                        mode: local,
                        status: ModeStatus::Interior,
                        diagnostic: Some(match other {
                            Ok(root) => format!(
                                "root of phi' at p = {:.6} is not the global maximum; grid maximum at p = {:.6}",
                                root, local
                            ),
                            Err(e) => format!("root finding failed ({}); using grid maximum", e),
                        }),
                    }
                }
            }
        }
    }
}

/// Refines a grid argmax by Brent's method on the neighbouring interval when
/// the slope changes sign there.
pub(crate) fn refine_on_grid(phi: &PhiFunction, grid: &[f64], best: usize) -> f64 {
    let lo = grid[best.saturating_sub(1)].max(0.5 + BRACKET_EPS);
    let hi = grid[(best + 1).min(grid.len() - 1)].min(1.0 - BRACKET_EPS);
    brent_root(|p| phi.d_ln_phi(p), lo, hi, ROOT_TOLERANCE).unwrap_or(grid[best].min(BELOW_ONE))
}
