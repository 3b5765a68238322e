//! Closed-form reduced density matrices of the ground states.
//!
//! Direct space: the one-site state is diagonal in the occupation basis
//! `{|0>, |1>, |2>}` and the two-site state is a sparse 9x9 matrix whose
//! entries are polynomial in the densities and in the hopping correlator
//! `gamma(n_s, r) = sin(pi n_s r) / (pi r)`.
//!
//! Momentum space: each mode carries a 4-dimensional space
//! `{|0>, |up>, |down>, |updown>}`; opposite-momentum mode pairs are the only
//! correlated ones and live on a 4x4 subblock.
//!
//! Finite size: the permutation-invariant pair states (equal-weight
//! superpositions of all placements of `N_d` pairs on `L` sites) have
//! hypergeometric two-site marginals; [`dicke`] rebuilds them by brute force
//! from the full state vector as an independent oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::density::{diagonal_state, DensityMatrix};
use crate::error::{Error, Result};
use crate::phase::check_densities;

pub const ONE_SITE_TAG: &str = "site:{0,1,2}";
pub const TWO_SITE_TAG: &str = "site2:{00,01,02,10,11,12,20,21,22}";
pub const MODE_TAG: &str = "mode:{0,u,d,ud}";
pub const TWO_MODE_TAG: &str = "mode2:{0,u,d,ud}x{0,u,d,ud}";
pub const ETA_TAG: &str = "eta2:{00,01,10,11}";

/// Equal-time hopping correlator between sites a distance `r >= 1` apart.
pub fn gamma(n_s: f64, r: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&n_s) {
        return Err(Error::InvalidDensities { n_s, n_d: 0.0 });
    }
    if r == 0 {
        return Err(Error::InvalidParameter(
            "gamma is defined for separations r >= 1".into(),
        ));
    }
    let rf = r as f64;
    Ok((n_s * PI * rf).sin() / (PI * rf))
}

/// Parameters fixing a two-site reduced density matrix.
#[derive(Debug, Clone, Copy)]
pub struct TwoSiteParams {
    pub n_s: f64,
    pub n_d: f64,
    /// Pair fraction of the bosonic background, `n_d / (1 - n_s)` (0 at `n_s = 1`).
    pub c: f64,
    /// Site separation; absent when `gamma` was supplied directly.
    pub r: Option<u32>,
    pub gamma: f64,
}

impl TwoSiteParams {
    pub fn new(n_s: f64, n_d: f64, r: u32) -> Result<Self> {
        let g = gamma(n_s, r)?;
        let mut p = Self::with_gamma(n_s, n_d, g)?;
        p.r = Some(r);
        Ok(p)
    }

    /// Build with an explicit correlator value (used for the infinite-range
    /// limit `gamma = 0` and for randomized consistency checks).
    pub fn with_gamma(n_s: f64, n_d: f64, gamma: f64) -> Result<Self> {
        check_densities(n_s, n_d)?;
        let c = if 1.0 - n_s > 1e-15 {
            n_d / (1.0 - n_s)
        } else {
            0.0
        };
        let params = Self {
            n_s,
            n_d,
            c,
            r: None,
            gamma,
        };
        // negative diagonal entries signal inconsistent densities
        if params.p_pair() < -1e-12 || n_s * n_s - gamma * gamma < -1e-12 {
            return Err(Error::InvalidDensities { n_s, n_d });
        }
        Ok(params)
    }

    /// `P = (1 - n_s)^2 - gamma^2`.
    pub fn p_pair(&self) -> f64 {
        (1.0 - self.n_s) * (1.0 - self.n_s) - self.gamma * self.gamma
    }
}

/// One-site state `diag(1 - n_s - n_d, n_s, n_d)` in the basis `{|0>,|1>,|2>}`.
pub fn one_site_rdm(n_s: f64, n_d: f64) -> Result<DensityMatrix> {
    check_densities(n_s, n_d)?;
    diagonal_state(vec![3], &[1.0 - n_s - n_d, n_s, n_d], ONE_SITE_TAG)
}

/// Two-site state in the product basis `{00,01,02,10,11,12,20,21,22}`.
pub fn two_site_rdm(params: &TwoSiteParams) -> Result<DensityMatrix> {
    let (n_s, c, g) = (params.n_s, params.c, params.gamma);
    let p = params.p_pair().max(0.0);
    let d1 = p * (1.0 - c) * (1.0 - c);
    let d2 = (n_s * n_s - g * g).max(0.0);
    let d3 = c * c * p;
    let o1 = (1.0 - n_s - p) * (1.0 - c);
    let o2 = g * (1.0 - c);
    let p1 = c * (1.0 - n_s - p);
    let p2 = c * g;
    let q = c * (1.0 - c) * p;
    for (name, v) in [
        ("D1", d1),
        ("D2", d2),
        ("D3", d3),
        ("O1", o1),
        ("P1", p1),
        ("Q", q),
    ] {
        if v < -1e-12 {
            return Err(Error::InvalidDensityMatrix(format!(
                "diagonal entry {name} = {v} is negative"
            )));
        }
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut m = DMatrix::<Complex64>::zeros(9, 9);
    m[(0, 0)] = re(d1);
    m[(1, 1)] = re(o1);
    m[(1, 3)] = re(o2);
    m[(3, 1)] = re(o2);
    m[(2, 2)] = re(q);
    m[(2, 6)] = re(q);
    m[(6, 2)] = re(q);
    m[(6, 6)] = re(q);
    m[(3, 3)] = re(o1);
    m[(4, 4)] = re(d2);
    m[(5, 5)] = re(p1);
    m[(5, 7)] = re(p2);
    m[(7, 5)] = re(p2);
    m[(7, 7)] = re(p1);
    m[(8, 8)] = re(d3);
    DensityMatrix::new(vec![3, 3], m, TWO_SITE_TAG)
}

/// Two-site state restricted to the `{|0>, |1>}` on-site levels (no pairs).
pub fn two_site_qubit_no_pairs(n_s: f64, r: u32) -> Result<DensityMatrix> {
    two_site_rdm(&TwoSiteParams::new(n_s, 0.0, r)?)?.two_level_block((0, 1))
}

/// Two-site state restricted to the `{|0>, |2>}` on-site levels
/// (pair sector only; the infinite-chain limit has no `r` dependence).
pub fn two_site_qubit_pairs_only(n_d: f64) -> Result<DensityMatrix> {
    two_site_rdm(&TwoSiteParams::with_gamma(0.0, n_d, 0.0)?)?.two_level_block((0, 2))
}

/// Single momentum-mode state `diag(a^2, ab, ab, b^2)` with `b = 1 - a`.
pub fn mode_rdm(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "mode occupation parameter a = {a} outside [0, 1]"
        )));
    }
    let b = 1.0 - a;
    diagonal_state(vec![4], &[a * a, a * b, a * b, b * b], MODE_TAG)
}

/// Two-mode state. For an opposite-momentum pair (`paired = true`) the only
/// nonzero block couples `{|0,0>, |u,d>, |d,u>, |ud,ud>}`; otherwise the two
/// modes are uncorrelated and the state is the product of the marginals.
pub fn two_mode_rdm(a: f64, paired: bool) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "mode occupation parameter a = {a} outside [0, 1]"
        )));
    }
    if !paired {
        let single = mode_rdm(a)?;
        let mut prod = single.kron(&single)?;
        // keep the canonical tag rather than the generated product tag
        prod = DensityMatrix::new(vec![4, 4], prod.entries().clone(), TWO_MODE_TAG)?;
        return Ok(prod);
    }
    let b = 1.0 - a;
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut m = DMatrix::<Complex64>::zeros(16, 16);
    // flat indices of {|0,0>, |u,d>, |d,u>, |ud,ud>} in the product basis
    let idx = [0usize, 6, 9, 15];
    let block = [
        [a * a, 0.0, 0.0, 0.0],
        [0.0, a * b, a * b, 0.0],
        [0.0, a * b, a * b, 0.0],
        [0.0, 0.0, 0.0, b * b],
    ];
    for i in 0..4 {
        for j in 0..4 {
            m[(idx[i], idx[j])] = re(block[i][j]);
        }
    }
    DensityMatrix::new(vec![4, 4], m, TWO_MODE_TAG)
}

fn check_eta(l: u32, n_d: u32) -> Result<()> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "pair states need a chain of length >= 2, got {l}"
        )));
    }
    if n_d > l {
        return Err(Error::InvalidParameter(format!(
            "cannot place {n_d} pairs on {l} sites"
        )));
    }
    Ok(())
}

/// Two-site marginal of the symmetric `N_d`-pair state on `L` sites, in the
/// qubit basis `{00, 01, 10, 11}` (empty / paired site). The `|01>, |10>`
/// coherence is real and equals the shared diagonal weight.
pub fn eta_pair_two_site_rdm(l: u32, n_d: u32) -> Result<DensityMatrix> {
    check_eta(l, n_d)?;
    let (lf, nf) = (l as f64, n_d as f64);
    let denom = lf * (lf - 1.0);
    // hypergeometric counts, written as cancelled binomial ratios; the
    // products vanish exactly at the N_d = 0, 1, L-1, L edges
    let p00 = ((lf - nf) * (lf - nf - 1.0)).max(0.0) / denom;
    let p01 = (nf * (lf - nf)).max(0.0) / denom;
    let p11 = (nf * (nf - 1.0)).max(0.0) / denom;
    let re = |x: f64| Complex64::new(x, 0.0);
    let mut m = DMatrix::<Complex64>::zeros(4, 4);
    m[(0, 0)] = re(p00);
    m[(1, 1)] = re(p01);
    m[(2, 2)] = re(p01);
    m[(1, 2)] = re(p01);
    m[(2, 1)] = re(p01);
    m[(3, 3)] = re(p11);
    DensityMatrix::new(vec![2, 2], m, ETA_TAG)
}

/// One-site marginal `diag(1 - N_d/L, N_d/L)` of the symmetric pair state.
pub fn eta_pair_one_site_rdm(l: u32, n_d: u32) -> Result<DensityMatrix> {
    check_eta(l, n_d)?;
    let p = n_d as f64 / l as f64;
    diagonal_state(vec![2], &[1.0 - p, p], "eta:{0,1}")
}

/// Brute-force construction of the symmetric pair states from the full
/// `2^L` state vector. Independent of the closed-form marginals above; used
/// to gate them for every `L <= 12`.
pub mod dicke {
    use super::*;

    fn binomial(n: u32, k: u32) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) as u64 / (i + 1) as u64;
        }
        acc
    }

    /// Amplitudes of the equal-weight superposition of all placements of
    /// `n_d` excitations on `l` sites (site `s` excited iff bit `s` is set).
    pub fn state_vector(l: u32, n_d: u32) -> Result<Vec<f64>> {
        check_eta(l, n_d)?;
        if l > 20 {
            return Err(Error::InvalidParameter(format!(
                "brute-force state vector capped at L = 20, got {l}"
            )));
        }
        let dim = 1usize << l;
        let amp = 1.0 / (binomial(l, n_d) as f64).sqrt();
        let mut psi = vec![0.0; dim];
        for (s, slot) in psi.iter_mut().enumerate() {
            if (s as u32).count_ones() == n_d {
                *slot = amp;
            }
        }
        Ok(psi)
    }

    fn bit(s: usize, pos: u32) -> usize {
        (s >> pos) & 1
    }

    fn with_bits(s: usize, i: u32, bi: usize, j: u32, bj: usize) -> usize {
        let mut out = s & !(1usize << i) & !(1usize << j);
        out |= bi << i;
        out |= bj << j;
        out
    }

    /// Two-site marginal of the brute-force state for sites `i != j`.
    pub fn two_site_rdm(l: u32, n_d: u32, site_i: u32, site_j: u32) -> Result<DensityMatrix> {
        if site_i >= l || site_j >= l || site_i == site_j {
            return Err(Error::InvalidParameter(format!(
                "sites ({site_i}, {site_j}) invalid on a chain of {l}"
            )));
        }
        let psi = state_vector(l, n_d)?;
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        for (s, &amp) in psi.iter().enumerate() {
            if amp == 0.0 {
                continue;
            }
            let (bi, bj) = (bit(s, site_i), bit(s, site_j));
            for bi2 in 0..2 {
                for bj2 in 0..2 {
                    let s2 = with_bits(s, site_i, bi2, site_j, bj2);
                    let other = psi[s2];
                    if other != 0.0 {
                        m[(bi * 2 + bj, bi2 * 2 + bj2)] += Complex64::new(amp * other, 0.0);
                    }
                }
            }
        }
        DensityMatrix::new(vec![2, 2], m, format!("{ETA_TAG}|dicke"))
    }

    /// One-site marginal of the brute-force state.
    pub fn one_site_rdm(l: u32, n_d: u32, site: u32) -> Result<DensityMatrix> {
        if site >= l {
            return Err(Error::InvalidParameter(format!(
                "site {site} invalid on a chain of {l}"
            )));
        }
        let psi = state_vector(l, n_d)?;
        let mut p1 = 0.0;
        for (s, &amp) in psi.iter().enumerate() {
            if bit(s, site) == 1 {
                p1 += amp * amp;
            }
        }
        diagonal_state(vec![2], &[1.0 - p1, p1], "eta:{0,1}|dicke")
    }
}
