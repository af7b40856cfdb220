//! Regularized incomplete beta function.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

fn check(x: f64, a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!(
            "incomplete beta needs positive shape parameters, got ({}, {})",
            a, b
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!(
            "incomplete beta argument {} outside [0, 1]",
            x
        )));
    }
    Ok(())
}

/// `I_x(a, b)`, accurate to about 1e-14 relative.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    Ok(ln_reg_inc_beta(x, a, b)?.exp())
}

/// `ln I_x(a, b)`. Keeps full relative accuracy when `I_x` is tiny.
pub fn ln_reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check(x, a, b)?;
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        // I_x(a, b) = 1 - I_{1-x}(b, a)
        let complement = ln_continued_fraction(1.0 - x, b, a)?.exp();
        Ok((-complement).ln_1p())
    } else {
        ln_continued_fraction(x, a, b)
    }
}

/// `ln [x^a (1-x)^b / (a B(a,b)) / cf]` with the continued fraction evaluated
/// by the modified Lentz method. Converges quickly for `x < (a+1)/(a+b+2)`.
fn ln_continued_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    let ln_prefix = a * x.ln() + b * (-x).ln_1p() - ln_beta - a.ln();

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(ln_prefix + h.ln());
        }
    }
    Err(Error::domain(format!(
        "incomplete beta continued fraction did not converge for x={}, a={}, b={}",
        x, a, b
    )))
}
