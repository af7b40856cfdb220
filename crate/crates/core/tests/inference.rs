use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankability::inference::quadrature::integrate;
use rankability::inference::{
    degenerate_mean, degree_of_linearity, joint_posterior, mode_estimate, normalizer_z,
    posterior_grid, posterior_mean, summarize, summarize_degenerate, ModeStatus, PhiFunction,
};
use rankability::sim::{generate_matrix, GeneratorConfig};
use rankability::{slater_spectrum, ResultMatrix, SlaterSpectrum};

fn random_spectra(n: usize, seed: u64) -> Vec<SlaterSpectrum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let m = rng.gen_range(2..=8);
        let rows: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { 0 } else { rng.gen_range(0..=3) })
                    .collect()
            })
            .collect();
        let w = ResultMatrix::from_rows(&rows).unwrap();
        if w.total() > 0 {
            out.push(slater_spectrum(&w).unwrap());
        }
    }
    out
}

fn grid_argmax(phi: &PhiFunction, n: usize) -> (f64, f64) {
    (0..n)
        .map(|i| 0.5 + 0.5 * i as f64 / (n - 1) as f64)
        .map(|p| (p, phi.ln_phi(p)))
        .fold((0.5, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
}

#[test]
fn closed_forms_match_quadrature() {
    for s in random_spectra(100, 1) {
        let phi = PhiFunction::new(&s);
        let z = normalizer_z(&s);
        let zq = integrate(|p| phi.ln_phi(p).exp(), 0.5, 1.0);
        assert!((z - zq).abs() <= 1e-8 * z, "Z {} vs {}", z, zq);
        let mean = posterior_mean(&s).unwrap();
        let mq = integrate(|p| p * phi.ln_phi(p).exp(), 0.5, 1.0) / zq;
        assert!((mean - mq).abs() <= 1e-8, "E[p] {} vs {}", mean, mq);
        assert!(mean > 0.5 && mean < 1.0);
    }
}

#[test]
fn extremum_at_half() {
    for s in random_spectra(100, 2) {
        let d = PhiFunction::new(&s).d_ln_phi(0.5);
        assert!(d.abs() <= 1e-9 * s.total() as f64, "{}", d);
    }
}

#[test]
fn reflection_gives_same_function() {
    for s in random_spectra(30, 3) {
        let mut reversed = s.coefficients().to_vec();
        reversed.reverse();
        let r = SlaterSpectrum::from_coefficients(reversed).unwrap();
        let (a, b) = (PhiFunction::new(&s), PhiFunction::new(&r));
        for i in 1..20 {
            let p = i as f64 / 20.0;
            assert_eq!(a.ln_phi(p), b.ln_phi(p));
        }
    }
}

#[test]
fn mode_is_grid_maximum() {
    for s in random_spectra(100, 4) {
        let phi = PhiFunction::new(&s);
        let m = mode_estimate(&s);
        let (p_grid, best) = grid_argmax(&phi, 10_000);
        assert!(m.mode >= 0.5 && m.mode < 1.0);
        if m.status == ModeStatus::Interior {
            assert!(
                phi.ln_phi(m.mode) >= best - 1e-12,
                "{:?} below grid max at {}",
                m,
                p_grid
            );
        }
        let close = (m.mode - p_grid).abs() <= 1e-3;
        let as_good = (phi.ln_phi(m.mode) - best).abs() <= 1e-12 * best.abs().max(1.0);
        assert!(close || as_good, "{:?} vs grid {}", m, p_grid);
    }
}

#[test]
fn summary_invariants_hold() {
    for s in random_spectra(60, 5) {
        let summary = summarize(&s).unwrap();
        assert_eq!(
            summary.lambda.unwrap(),
            1.0 - s.s_hat() as f64 / s.total() as f64
        );
        if summary.sigma_sign == std::cmp::Ordering::Less {
            assert_eq!(summary.mode.status, ModeStatus::AtHalf);
            assert_eq!(summary.mode.mode, 0.5);
        }
        let d = summarize_degenerate(&s).unwrap();
        let th = d.thresholds.unwrap();
        if (s.s_hat() as f64 - th.s_th).abs() > 1e-9 {
            assert_eq!(
                d.sigma_tilde_sign == std::cmp::Ordering::Greater,
                (s.s_hat() as f64) < th.s_th
            );
        }
    }
}

#[test]
fn degenerate_results_ignore_leading_coefficient() {
    for (s_hat, total) in [(20u64, 68u64), (3, 10), (0, 5), (22, 182)] {
        let a = degenerate_mean(s_hat, total, &BigUint::from(1u32)).unwrap();
        let b = degenerate_mean(s_hat, total, &BigUint::from(1_000_000u32)).unwrap();
        assert!((a - b).abs() < 1e-14);
        let m1 =
            mode_estimate(&SlaterSpectrum::degenerate(s_hat, total, BigUint::from(1u32)).unwrap());
        let m2 = mode_estimate(
            &SlaterSpectrum::degenerate(s_hat, total, BigUint::from(999u32)).unwrap(),
        );
        assert!((m1.mode - m2.mode).abs() < 1e-12);
        assert_eq!(m1.status, m2.status);
    }
}

#[test]
fn degenerate_mean_matches_quadrature() {
    let s = SlaterSpectrum::degenerate(20, 68, BigUint::from(1u32)).unwrap();
    let phi = PhiFunction::new(&s);
    let z = integrate(|p| phi.ln_phi(p).exp(), 0.5, 1.0);
    let mean = integrate(|p| p * phi.ln_phi(p).exp(), 0.5, 1.0) / z;
    let closed = degenerate_mean(20, 68, &BigUint::from(1u32)).unwrap();
    assert!((closed - mean).abs() < 1e-8, "{} vs {}", closed, mean);
}

#[test]
fn grids_integrate_to_one() {
    for s in random_spectra(20, 6) {
        let g = posterior_grid(&s, 10_000).unwrap();
        assert!((g.mass() - 1.0).abs() <= 1e-6);
        assert!(g.p_values.windows(2).all(|w| w[0] < w[1]));
        assert_eq!((g.p_values[0], *g.p_values.last().unwrap()), (0.5, 1.0));
    }
}

#[test]
fn mode_tracks_linearity_for_consistent_data() {
    let mut close = 0;
    for seed in 0..100 {
        let w = generate_matrix(&GeneratorConfig::uniform(10, 2, 0.9, seed)).unwrap();
        let s = slater_spectrum(&w).unwrap();
        let lambda = degree_of_linearity(s.s_hat(), s.total()).unwrap();
        if (mode_estimate(&s).mode - lambda).abs() <= 0.03 {
            close += 1;
        }
    }
    assert!(close >= 80, "{} of 100 within 0.03", close);
}

#[test]
fn joint_mode_for_weak_signal() {
    let spectra: Vec<SlaterSpectrum> = (0..30)
        .map(|seed| {
            let w = generate_matrix(&GeneratorConfig::uniform(10, 2, 0.6, 500 + seed)).unwrap();
            slater_spectrum(&w).unwrap()
        })
        .collect();
    let joint = joint_posterior(&spectra, 2001).unwrap();
    assert!((0.5..=0.75).contains(&joint.mode), "{}", joint.mode);
    assert!((joint.grid.mass() - 1.0).abs() < 1e-9);
}
