//! Numerical integration on a fixed interval.

/// Composite Simpson rule with `intervals` (rounded up to even) sub-intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = (intervals.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Composite Simpson starting from 10^4 intervals, doubling until two
/// successive estimates agree to `1e-10` relative (or 2^22 intervals).
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut n = 10_000;
    let mut previous = simpson(&f, a, b, n);
    while n < 1 << 22 {
        n *= 2;
        let current = simpson(&f, a, b, n);
        if (current - previous).abs() <= 1e-10 * current.abs() {
            return current;
        }
        previous = current;
    }
    previous
}

/// Trapezoidal rule over tabulated points.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 2);
        assert!((v - 0.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_peaked_function() {
        let v = integrate(|p: f64| p.powi(80) * (1.0 - p).powi(20), 0.5, 1.0);
        // B(81, 21) * I_{0.5}(21, 81), and I_{0.5}(21, 81) is 1 to 1e-10
        let ln_b = statrs::function::beta::ln_beta(81.0, 21.0);
        assert!((v / ln_b.exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_of_line() {
        let x = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 2.0];
        assert_eq!(trapezoid(&x, &y), 1.0);
    }
}
