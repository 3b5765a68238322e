//! Ground-state phase structure of the bond-charge Hubbard chain at the
//! integrable point.
//!
//! In the thermodynamic limit the ground state is fixed by two densities:
//! `n_s` (singly occupied sites) and `n_d` (doubly occupied sites). Both
//! follow in closed form from the couplings `(u, mu)`; the phase label
//! records which on-site levels participate.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Tolerance used when a point sits numerically on a phase boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Ground-state phases in the `(u, mu)` plane. `Empty` and `Full` are the
/// saturated corners (no electrons / all sites doubly occupied).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseLabel {
    I,
    IPrime,
    II,
    III,
    IV,
    Empty,
    Full,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PhaseLabel::I => "I",
            PhaseLabel::IPrime => "I'",
            PhaseLabel::II => "II",
            PhaseLabel::III => "III",
            PhaseLabel::IV => "IV",
            PhaseLabel::Empty => "empty",
            PhaseLabel::Full => "full",
        };
        f.write_str(s)
    }
}

impl FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(PhaseLabel::I),
            "i'" | "iprime" | "i_prime" => Ok(PhaseLabel::IPrime),
            "ii" | "2" => Ok(PhaseLabel::II),
            "iii" | "3" => Ok(PhaseLabel::III),
            "iv" | "4" => Ok(PhaseLabel::IV),
            "empty" => Ok(PhaseLabel::Empty),
            "full" => Ok(PhaseLabel::Full),
            other => Err(Error::InvalidParameter(format!(
                "unknown phase label '{other}'"
            ))),
        }
    }
}

/// A point of the phase diagram together with its derived densities.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ModelPoint {
    pub u: f64,
    /// Absent when the point was specified by filling instead.
    pub mu: Option<f64>,
    /// Average per-site filling, `n = n_s + 2 n_d`.
    pub n: f64,
    pub n_s: f64,
    pub n_d: f64,
    pub phase: PhaseLabel,
}

fn check_finite(u: f64, mu: f64) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFinite("u"));
    }
    if !mu.is_finite() {
        return Err(Error::NonFinite("mu"));
    }
    Ok(())
}

fn clamped_arccos_over_pi(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).acos() / PI
}

/// Ground-state densities `(n_s, n_d)` at couplings `(u, mu)`.
///
/// The arccos argument is clamped to `[-1, 1]`; the clamp encodes the
/// saturated phases (only singly occupied, only empty, only doubly occupied
/// sites) instead of raising an error. On the line `mu = 0` the filling is
/// degenerate and the half-filled representative `n = 1` is returned.
pub fn ground_state_densities(u: f64, mu: f64) -> Result<(f64, f64)> {
    check_finite(u, mu)?;
    if mu < -BOUNDARY_TOL {
        let n_s = clamped_arccos_over_pi(-mu / 2.0 - u / 4.0);
        Ok((n_s, 0.0))
    } else if mu > BOUNDARY_TOL {
        let n_s = clamped_arccos_over_pi(mu / 2.0 - u / 4.0);
        Ok((n_s, 1.0 - n_s))
    } else {
        let n_s = clamped_arccos_over_pi(-u / 4.0);
        Ok((n_s, (1.0 - n_s) / 2.0))
    }
}

/// Phase label at `(u, mu)`.
///
/// On exact boundary coincidences the label of the region written with
/// closed inequalities wins (I, I', II), with comparisons at `1e-12`.
pub fn classify_phase(u: f64, mu: f64) -> Result<PhaseLabel> {
    check_finite(u, mu)?;
    let t = BOUNDARY_TOL;
    if mu < -t {
        if u > 4.0 - 2.0 * mu + t {
            Ok(PhaseLabel::IV)
        } else if u < -4.0 - 2.0 * mu - t {
            Ok(PhaseLabel::Empty)
        } else {
            Ok(PhaseLabel::I)
        }
    } else if mu > t {
        // particle-hole mirror of I: boundaries at -4 + 2 mu and 4 + 2 mu
        if u > 4.0 + 2.0 * mu + t {
            Ok(PhaseLabel::IV)
        } else if u < -4.0 + 2.0 * mu - t {
            Ok(PhaseLabel::Full)
        } else {
            Ok(PhaseLabel::IPrime)
        }
    } else if u > 4.0 + t {
        Ok(PhaseLabel::IV)
    } else if u < -4.0 - t {
        Ok(PhaseLabel::III)
    } else {
        Ok(PhaseLabel::II)
    }
}

/// Densities, filling and label at `(u, mu)` in one record.
pub fn model_point(u: f64, mu: f64) -> Result<ModelPoint> {
    let (n_s, n_d) = ground_state_densities(u, mu)?;
    Ok(ModelPoint {
        u,
        mu: Some(mu),
        n: n_s + 2.0 * n_d,
        n_s,
        n_d,
        phase: classify_phase(u, mu)?,
    })
}

/// Densities on the `mu = 0` line at fixed filling `n` (phase II interior).
///
/// At `mu = 0` the pair density is degenerate and fixed by the filling:
/// `n_s(u) = arccos(-u/4)/pi` and `n_d = (n - n_s)/2`. Errors when `(u, n)`
/// does not admit a nonnegative pair density, i.e. lies outside phase II.
pub fn region2_densities(u: f64, n: f64) -> Result<(f64, f64)> {
    check_finite(u, n)?;
    if !(0.0..=2.0).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "filling n = {n} outside [0, 2]"
        )));
    }
    if !(-4.0..=4.0).contains(&u) {
        return Err(Error::RegionMismatch(format!(
            "u = {u} outside the three-species window [-4, 4]"
        )));
    }
    let n_s = clamped_arccos_over_pi(-u / 4.0);
    let n_d = (n - n_s) / 2.0;
    if n_d < -BOUNDARY_TOL || n_d > 1.0 - n_s + BOUNDARY_TOL {
        return Err(Error::RegionMismatch(format!(
            "filling n = {n} not reachable at u = {u} (n_s = {n_s})"
        )));
    }
    Ok((n_s, n_d.clamp(0.0, 1.0 - n_s)))
}

/// Largest `u` for which phase II holds at filling `n <= 1` (`-4 cos(pi n)`).
pub fn region2_upper_u(n: f64) -> f64 {
    -4.0 * (PI * n).cos()
}

pub(crate) fn check_densities(n_s: f64, n_d: f64) -> Result<()> {
    let ok = (-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&n_s)
        && (-BOUNDARY_TOL..=1.0 + BOUNDARY_TOL).contains(&n_d)
        && n_s + n_d <= 1.0 + BOUNDARY_TOL
        && n_s.is_finite()
        && n_d.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidDensities { n_s, n_d })
    }
}

/// Ground-state energy per site at densities `(n_s, n_d)`.
pub fn energy_density(n_s: f64, n_d: f64, u: f64, mu: f64) -> Result<f64> {
    check_finite(u, mu)?;
    check_densities(n_s, n_d)?;
    Ok(-(2.0 / PI) * (PI * n_s).sin() - 2.0 * mu * n_d - (mu + u / 2.0) * n_s)
}

/// Infinite-distance pair-coherence correlator, `n_d (1 - n_d - n_s)`.
///
/// Nonzero only when both pairs and room for them coexist (phases II, III).
pub fn odlro(n_s: f64, n_d: f64) -> f64 {
    n_d * (1.0 - n_d - n_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn densities_at_named_points() {
        let (n_s, n_d) = ground_state_densities(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(n_s, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(n_d, 0.25, epsilon = 1e-15);

        let (n_s, n_d) = ground_state_densities(6.0, -0.5).unwrap();
        assert_abs_diff_eq!(n_s, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n_d, 0.0, epsilon = 1e-15);

        let (n_s, n_d) = ground_state_densities(-6.0, 0.0).unwrap();
        assert_abs_diff_eq!(n_s, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n_d, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn extreme_couplings_saturate_cleanly() {
        let (n_s, n_d) = ground_state_densities(1e12, -1e12).unwrap();
        check_densities(n_s, n_d).unwrap();
        assert!(ground_state_densities(f64::NAN, 0.0).is_err());
        assert!(ground_state_densities(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn labels_at_named_points() {
        assert_eq!(classify_phase(0.0, 0.0).unwrap(), PhaseLabel::II);
        assert_eq!(classify_phase(4.0, -0.5).unwrap(), PhaseLabel::I);
        assert_eq!(classify_phase(-10.0, -0.5).unwrap(), PhaseLabel::Empty);
        assert_eq!(classify_phase(5.0, 0.0).unwrap(), PhaseLabel::IV);
        assert_eq!(classify_phase(-5.0, 0.0).unwrap(), PhaseLabel::III);
        assert_eq!(classify_phase(0.0, 0.5).unwrap(), PhaseLabel::IPrime);
        assert_eq!(classify_phase(-10.0, 2.0).unwrap(), PhaseLabel::Full);
    }

    #[test]
    fn closed_boundaries_prefer_two_species_regions() {
        // exact boundary points resolve to I / I' / II
        assert_eq!(classify_phase(4.0, 0.0).unwrap(), PhaseLabel::II);
        assert_eq!(classify_phase(-4.0, 0.0).unwrap(), PhaseLabel::II);
        assert_eq!(classify_phase(5.0, -0.5).unwrap(), PhaseLabel::I); // u = 4 - 2 mu
        assert_eq!(classify_phase(-3.0, -0.5).unwrap(), PhaseLabel::I); // u = -4 - 2 mu
        assert_eq!(classify_phase(5.0, 0.5).unwrap(), PhaseLabel::IPrime);
    }

    #[test]
    fn energy_at_named_points() {
        assert_abs_diff_eq!(
            energy_density(0.0, 0.0, 1.0, 1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            energy_density(0.5, 0.25, 0.0, 0.0).unwrap(),
            -2.0 / PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn energy_rejects_bad_densities() {
        assert!(energy_density(0.8, 0.5, 0.0, 0.0).is_err());
        assert!(energy_density(-0.1, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn odlro_values() {
        assert_abs_diff_eq!(odlro(0.0, 0.5), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(odlro(0.5, 0.0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(odlro(0.5, 0.25), 1.0 / 16.0, epsilon = 1e-15);
    }

    #[test]
    fn region2_densities_match_mu_zero_branch() {
        let (n_s, n_d) = region2_densities(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(n_s, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(n_d, 0.25, epsilon = 1e-15);
        // filling 1/2 only reachable for u <= 0
        assert!(region2_densities(1.0, 0.5).is_err());
        assert!(region2_densities(-1.0, 0.5).is_ok());
    }

    #[test]
    fn ns_is_continuous_in_u_away_from_saturation() {
        // local two-sided probe at 1e3 sweep points, skipping the corners
        let mu = -0.7;
        for k in 0..1000 {
            let u = -8.0 + 16.0 * (k as f64) / 999.0;
            let x = -mu / 2.0 - u / 4.0;
            if x.abs() > 0.98 {
                continue;
            }
            let (a, _) = ground_state_densities(u - 1e-7, mu).unwrap();
            let (b, _) = ground_state_densities(u + 1e-7, mu).unwrap();
            assert!((a - b).abs() < 1e-6, "jump at u = {u}: {}", (a - b).abs());
        }
    }

    #[test]
    fn second_energy_derivative_diverges_towards_phase_iv() {
        // d2E/dmu2 ~ |mu - mu_c|^(-1/2) at the I -> IV line (u = 4, mu_c = 0)
        let u = 4.0;
        let mut pts = Vec::new();
        for k in 0..30 {
            let eps = 10f64.powf(-4.0 + 2.0 * (k as f64) / 29.0);
            let mu = -eps;
            let h = eps / 20.0;
            let e = |m: f64| {
                let (ns, nd) = ground_state_densities(u, m).unwrap();
                energy_density(ns, nd, u, m).unwrap()
            };
            let d2 = (e(mu + h) - 2.0 * e(mu) + e(mu - h)) / (h * h);
            pts.push((eps.ln(), d2.abs().ln()));
        }
        let (slope, _, r2) = crate::analysis::linear_fit(&pts).unwrap();
        assert!(
            (slope + 0.5).abs() < 0.05,
            "exponent {slope} not within -0.5 +- 0.05"
        );
        assert!(r2 > 0.99);
    }

    proptest! {
        #[test]
        fn densities_always_valid(u in -12.0f64..12.0, mu in -6.0f64..6.0) {
            let (n_s, n_d) = ground_state_densities(u, mu).unwrap();
            prop_assert!((0.0..=1.0).contains(&n_s));
            prop_assert!((0.0..=1.0).contains(&n_d));
            prop_assert!(n_s + n_d <= 1.0 + 1e-12);
            check_densities(n_s, n_d).unwrap();
        }

        #[test]
        fn closed_form_beats_feasible_grid(u in -8.0f64..8.0, mu in -5.0f64..5.0) {
            let (n_s, n_d) = ground_state_densities(u, mu).unwrap();
            let e_star = energy_density(n_s, n_d, u, mu).unwrap();
            let m = 40usize;
            for i in 0..=m {
                let ns = i as f64 / m as f64;
                for j in 0..=m {
                    let nd = j as f64 / m as f64;
                    if ns + nd > 1.0 { continue; }
                    let e = energy_density(ns, nd, u, mu).unwrap();
                    prop_assert!(e_star <= e + 1e-10);
                }
            }
        }
    }
}
