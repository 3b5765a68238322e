//! Statistical checks of the Haar sampler and cross-engine agreement of the
//! conditional-entropy search.

use bchubbard::measurement::{
    haar_random_unitary, minimize_conditional_entropy, SearchConfig, SearchEngine,
};
use bchubbard::phase::{region2_densities, region2_upper_u};
use bchubbard::rdm;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[test]
fn haar_unitarity_over_ten_thousand_draws() {
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let u = haar_random_unitary(3, &mut rng).unwrap();
        let id = DMatrix::<Complex64>::identity(3, 3);
        worst = worst.max((u.adjoint() * &u - id).norm());
    }
    assert!(worst < 1e-12, "max unitarity deviation {worst}");
}

#[test]
fn haar_moments_and_entry_distribution() {
    // E |U_00|^2 = 1/d and |U_00|^2 ~ Beta(1, d - 1) for Haar on U(d)
    let mut rng = ChaCha12Rng::seed_from_u64(31);
    let n = 100_000usize;
    let mut samples: Vec<f64> = (0..n)
        .map(|_| haar_random_unitary(3, &mut rng).unwrap()[(0, 0)].norm_sqr())
        .collect();
    let mean = samples.iter().sum::<f64>() / n as f64;
    assert!(
        (mean - 1.0 / 3.0).abs() < 0.005,
        "mean |U00|^2 = {mean}, expected 1/3 +- 0.005"
    );
    samples.sort_by(f64::total_cmp);
    let cdf = |t: f64| 1.0 - (1.0 - t) * (1.0 - t);
    let mut ks = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        ks = ks.max((f - i as f64 / n as f64).abs());
        ks = ks.max((f - (i + 1) as f64 / n as f64).abs());
    }
    assert!(ks < 0.01, "KS statistic {ks} against Beta(1, 2)");
}

fn three_species_state(u: f64, n: f64, r: u32) -> Option<bchubbard::density::DensityMatrix> {
    let (n_s, n_d) = region2_densities(u, n).ok()?;
    if n_s <= 1e-6 || n_d <= 1e-6 {
        return None;
    }
    rdm::two_site_rdm(&rdm::TwoSiteParams::new(n_s, n_d, r).ok()?).ok()
}

#[test]
fn engines_agree_across_the_three_species_window() {
    let mut count = 0usize;
    let mut worst = 0.0f64;
    for &n in &[0.5f64, 1.0, 1.4] {
        for &r in &[1u32, 2] {
            let u_hi = if n <= 1.0 {
                region2_upper_u(n) - 0.05
            } else {
                region2_upper_u(2.0 - n) - 0.05
            };
            for k in 0..17 {
                let u = -3.95 + (u_hi + 3.95) * k as f64 / 16.0;
                let Some(rho) = three_species_state(u, n, r) else {
                    continue;
                };
                let haar = minimize_conditional_entropy(
                    &rho,
                    &SearchConfig {
                        n_samples: 2000,
                        seed: 7,
                        ..SearchConfig::default()
                    },
                    None,
                )
                .unwrap();
                let angles = minimize_conditional_entropy(
                    &rho,
                    &SearchConfig {
                        n_samples: 2000,
                        seed: 11,
                        engine: SearchEngine::Angles,
                        ..SearchConfig::default()
                    },
                    None,
                )
                .unwrap();
                worst = worst
                    .max((haar.min_conditional_entropy - angles.min_conditional_entropy).abs());
                count += 1;
            }
        }
    }
    assert!(count >= 100, "only {count} grid points were valid");
    assert!(worst < 1e-6, "engines disagree by {worst:.2e}");
}

#[test]
fn numeric_discord_is_symmetric_under_exchange() {
    for (u, n) in [(-2.0, 0.5), (1.0, 1.0), (-3.0, 1.2)] {
        let rho = three_species_state(u, n, 1).unwrap();
        let cfg = SearchConfig {
            n_samples: 4000,
            seed: 17,
            ..SearchConfig::default()
        };
        let direct = minimize_conditional_entropy(&rho, &cfg, None).unwrap();
        let swapped =
            minimize_conditional_entropy(&rho.swap_factors().unwrap(), &cfg, None).unwrap();
        assert!(
            (direct.q - swapped.q).abs() < 1e-6,
            "Q asymmetry {:.2e} at (u, n) = ({u}, {n})",
            (direct.q - swapped.q).abs()
        );
        assert!((direct.c - swapped.c).abs() < 1e-6);
    }
}

#[test]
fn warm_start_never_hurts() {
    let rho = three_species_state(-1.5, 1.0, 1).unwrap();
    let cfg = SearchConfig {
        n_samples: 3000,
        seed: 23,
        ..SearchConfig::default()
    };
    let cold = minimize_conditional_entropy(&rho, &cfg, None).unwrap();
    let nearby = three_species_state(-1.45, 1.0, 1).unwrap();
    let warm_basis = minimize_conditional_entropy(&nearby, &cfg, None)
        .unwrap()
        .basis;
    let small = SearchConfig {
        n_samples: 10,
        ..cfg
    };
    let warm = minimize_conditional_entropy(&rho, &small, Some(&warm_basis)).unwrap();
    assert!(
        warm.min_conditional_entropy <= cold.min_conditional_entropy + 1e-7,
        "warm {} vs cold {}",
        warm.min_conditional_entropy,
        cold.min_conditional_entropy
    );
}
