//! Entropy-based and entanglement-based correlation measures, in bits.
//!
//! The analytic path for two-qubit X states (nonzero entries on the diagonal
//! and at the `|01><10|` coherence only) reduces the measurement optimization
//! to comparing two candidate conditional entropies `S1` and `S2`; the
//! brute-force [`qubit_discord_grid`] oracle minimizes over a dense grid of
//! one-qubit von Neumann bases instead and is kept independent of the
//! analytic route.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::{hermitian_eigenvalues, DensityMatrix};
use crate::error::{Error, Result};

/// `-p log2 p`, continuous at `p = 0`.
fn plog(p: f64) -> f64 {
    if p <= 1e-300 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    plog(p) + plog(1.0 - p)
}

/// Entropy of a two-outcome distribution `{(1 - theta)/2, (1 + theta)/2}`.
fn two_outcome_entropy(theta: f64) -> f64 {
    binary_entropy_bits((1.0 - theta.clamp(0.0, 1.0)) / 2.0)
}

fn entropy_from_spectrum(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &e in eigs {
        if e < -1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "eigenvalue {e:.3e} below -1e-10"
            )));
        }
        s += plog(e.max(0.0));
    }
    Ok(s)
}

/// Von Neumann entropy in bits, `-sum lambda log2 lambda`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_from_spectrum(&hermitian_eigenvalues(rho.entries()))
}

/// Mutual information `S(A) + S(B) - S(AB)` of a bipartite state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if !rho.is_bipartite() {
        return Err(Error::DimensionMismatch(format!(
            "mutual information needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    let s_a = von_neumann_entropy(&rho.partial_trace(1)?)?;
    let s_b = von_neumann_entropy(&rho.partial_trace(0)?)?;
    let s_ab = von_neumann_entropy(rho)?;
    let i = s_a + s_b - s_ab;
    if i < -1e-10 {
        return Err(Error::InvalidDensityMatrix(format!(
            "mutual information {i:.3e} below -1e-10"
        )));
    }
    Ok(i.max(0.0))
}

/// The two candidate measurement branches of the analytic X-state path.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AliBranch {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub p0: f64,
    /// Conditional entropy of the balanced (`k = 1/2`) measurement.
    pub s1: f64,
    /// Conditional entropy of the computational (`k = 0`) measurement.
    pub s2: f64,
}

/// All correlation measures of an X state on one record.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct XStateCorrelations {
    pub i: f64,
    pub c: f64,
    pub q: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub branch: AliBranch,
}

const X_TOL: f64 = 1e-12;

/// Analytic discord and classical correlations of a two-qubit X state with
/// vanishing corner coherence (entries allowed on the diagonal and at
/// `(1, 2)` only, zero-based). The measurement is on the second qubit.
pub fn discord_cc_xstate(rho: &DensityMatrix) -> Result<XStateCorrelations> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "X-state path needs dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let m = rho.entries();
    if m[(0, 3)].norm() > X_TOL || m[(3, 0)].norm() > X_TOL {
        return Err(Error::NotXState(format!(
            "corner coherence {:.3e} above 1e-12",
            m[(0, 3)].norm()
        )));
    }
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 3), (2, 3)] {
        if m[(i, j)].norm() > X_TOL {
            return Err(Error::NotXState(format!(
                "off-diagonal entry ({i}, {j}) = {:.3e} is nonzero",
                m[(i, j)].norm()
            )));
        }
    }
    Ok(xstate_from_entries(
        m[(0, 0)].re,
        m[(1, 1)].re,
        m[(2, 2)].re,
        m[(3, 3)].re,
        m[(1, 2)].norm(),
    ))
}

/// Entry-level X-state path for trusted callers (scan and monogamy loops
/// that assemble the four populations and the coherence in closed form).
pub(crate) fn xstate_from_entries(
    r11: f64,
    r22: f64,
    r33: f64,
    r44: f64,
    coh: f64,
) -> XStateCorrelations {
    let (r11, r22, r33, r44) = (r11.max(0.0), r22.max(0.0), r33.max(0.0), r44.max(0.0));
    let theta1 = ((r11 - r33 + r22 - r44).powi(2) + 4.0 * coh * coh)
        .sqrt()
        .min(1.0);
    let s1 = two_outcome_entropy(theta1);
    let p0 = r11 + r33;
    let d2 = r22 + r44;
    let theta2 = if d2 > 1e-15 {
        (r22 - r44).abs() / d2
    } else {
        0.0
    };
    let theta3 = if p0 > 1e-15 {
        (r11 - r33).abs() / p0
    } else {
        0.0
    };
    let s2 = d2 * two_outcome_entropy(theta2) + p0 * two_outcome_entropy(theta3);
    let branch = AliBranch {
        theta1,
        theta2,
        theta3,
        p0,
        s1,
        s2,
    };

    let s_a = binary_entropy_bits(r11 + r22);
    let s_b = binary_entropy_bits(r11 + r33);
    // X-structure spectrum in closed form: outer diagonal pair plus the
    // coherent inner 2x2 block
    let mid = (r22 + r33) / 2.0;
    let gap = (((r22 - r33) / 2.0).powi(2) + coh * coh).sqrt();
    let s_ab = plog(r11) + plog(r44) + plog((mid + gap).max(0.0)) + plog((mid - gap).max(0.0));
    let i = (s_a + s_b - s_ab).max(0.0);

    // pure marginals carry no extractable correlations
    if s_a < 1e-14 || s_b < 1e-14 {
        return XStateCorrelations {
            i: 0.0,
            c: 0.0,
            q: 0.0,
            s_a,
            s_b,
            branch,
        };
    }

    let c = (s_a - s1.min(s2)).max(0.0);
    let q = (i - c).max(0.0);
    XStateCorrelations {
        i,
        c,
        q,
        s_a,
        s_b,
        branch,
    }
}

/// Discord of the pair-sector two-site state as an explicit function of
/// `x = n_d (1 - n_d)`, i.e. of the pair-coherence order parameter.
pub fn discord_region3_closed_form(n_d: f64) -> Result<f64> {
    if !(n_d > 0.0 && n_d <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "n_d = {n_d} outside (0, 1/2]; use the n_d <-> 1 - n_d symmetry above 1/2"
        )));
    }
    let x = n_d * (1.0 - n_d);
    let s = (1.0 - 4.0 * x).max(0.0).sqrt();
    let third = if s > 0.0 {
        s * (-1.0 - 2.0 / (-1.0 + s)).ln()
    } else {
        0.0
    };
    let sum = 4.0 * x * (1.0 - 2.0 * x).atanh()
        + x * 16f64.ln()
        + third
        + (1.0 / ((x - 1.0) * (x - 1.0))).ln()
        + x.ln();
    Ok(sum / 4f64.ln())
}

/// Classical correlations of the pair-sector two-site state in closed form.
pub fn classical_correlations_pairs_only(n_d: f64) -> f64 {
    if !(0.0..=1.0).contains(&n_d) {
        return f64::NAN;
    }
    let x = n_d * (1.0 - n_d);
    (binary_entropy_bits(n_d) - binary_entropy_bits(x)).max(0.0)
}

/// Discord between an opposite-momentum mode pair, `2 a (1 - a)`.
///
/// Measuring the partner mode in its occupation basis collapses every
/// outcome onto a pure state, so the conditional entropy vanishes and the
/// classical correlations saturate at the single-mode entropy.
pub fn discord_kspace(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::InvalidParameter(format!(
            "mode occupation parameter a = {a} outside [0, 1]"
        )));
    }
    Ok(2.0 * a * (1.0 - a))
}

/// Mutual information of an opposite-momentum mode pair,
/// `-2 (a log2 a + b log2 b - a b)`.
pub fn kspace_mutual_information(a: f64) -> f64 {
    let b = 1.0 - a;
    2.0 * (plog(a) + plog(b)) + 2.0 * a * b
}

/// Entropy of one momentum mode, `2 h(a)`.
pub fn kspace_single_mode_entropy(a: f64) -> f64 {
    2.0 * binary_entropy_bits(a)
}

/// Wootters concurrence of a two-qubit state via the spin-flipped spectrum.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "concurrence needs dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let m = rho.entries();
    // rho_tilde = (sy x sy) conj(rho) (sy x sy); the flip matrix is the
    // signed antidiagonal with signs (-1, 1, 1, -1)
    let sign = [-1.0, 1.0, 1.0, -1.0];
    let mut tilde = DMatrix::<Complex64>::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            tilde[(i, j)] = m[(3 - i, 3 - j)].conj() * (sign[i] * sign[j]);
        }
    }
    // eigenvalues of rho * rho_tilde through the Hermitian form
    // sqrt(rho) rho_tilde sqrt(rho)
    let eig = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let mut sqrt_rho = DMatrix::<Complex64>::zeros(4, 4);
    for k in 0..4 {
        let lam = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho[(i, j)] += v[i] * v[j].conj() * lam;
            }
        }
    }
    let herm = &sqrt_rho * tilde * &sqrt_rho;
    let mut lambdas: Vec<f64> = hermitian_eigenvalues(&herm)
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Concurrence of the no-pair two-site state in closed form.
pub fn concurrence_no_pairs_closed_form(n_s: f64, gamma: f64) -> f64 {
    let one = (1.0 - n_s) * (1.0 - n_s) - gamma * gamma;
    let two = n_s * n_s - gamma * gamma;
    (2.0 * (gamma.abs() - (one.max(0.0) * two.max(0.0)).sqrt())).max(0.0)
}

/// Negativity: sum of |negative eigenvalues| of the partial transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    if !rho.is_bipartite() {
        return Err(Error::DimensionMismatch(format!(
            "negativity needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    let m = rho.entries();
    let n = da * db;
    let mut pt = DMatrix::<Complex64>::zeros(n, n);
    for a in 0..da {
        for a2 in 0..da {
            for b in 0..db {
                for b2 in 0..db {
                    pt[(a * db + b, a2 * db + b2)] = m[(a * db + b2, a2 * db + b)];
                }
            }
        }
    }
    let total: f64 = hermitian_eigenvalues(&pt)
        .into_iter()
        .filter(|&e| e < 0.0)
        .map(f64::abs)
        .sum();
    // an empty float sum is IEEE -0.0; keep the PPT case at plain zero
    Ok(total.max(0.0))
}

/// How a correlation record was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AnalyticXstate,
    ClosedForm,
    NumericQutrit,
    Kspace,
}

/// Correlation measures for one pair of subsystems at one model point.
/// Entropy-based quantities are in bits; `k` is present for qubit pairs only.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub i: f64,
    pub c: f64,
    pub q: f64,
    pub k: Option<f64>,
    pub negativity: f64,
    pub s_single: f64,
    pub method: Method,
}

/// Configuration of the brute-force measurement-grid oracle.
#[derive(Debug, Clone, Copy)]
pub struct GridOracle {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Halving passes of the local refinement around the best grid node.
    pub refine_steps: usize,
}

impl Default for GridOracle {
    fn default() -> Self {
        Self {
            n_theta: 400,
            n_phi: 400,
            refine_steps: 25,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridOracleResult {
    pub min_conditional_entropy: f64,
    pub c: f64,
    pub q: f64,
    pub theta: f64,
    pub phi: f64,
}

struct QubitMeasurementProblem {
    b00: [[Complex64; 2]; 2],
    b01: [[Complex64; 2]; 2],
    b11: [[Complex64; 2]; 2],
}

impl QubitMeasurementProblem {
    fn new(m: &Matrix4<Complex64>) -> Self {
        let block = |ra: usize, ca: usize| {
            let mut b = [[Complex64::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    b[i][j] = m[(2 * ra + i, 2 * ca + j)];
                }
            }
            b
        };
        Self {
            b00: block(0, 0),
            b01: block(0, 1),
            b11: block(1, 1),
        }
    }

    #[inline]
    fn quad_form(b: &[[Complex64; 2]; 2], v: &[Complex64; 2]) -> Complex64 {
        v[0].conj() * (b[0][0] * v[0] + b[0][1] * v[1])
            + v[1].conj() * (b[1][0] * v[0] + b[1][1] * v[1])
    }

    /// Conditional entropy after measuring qubit B along the Bloch direction
    /// `(theta, phi)`.
    fn conditional_entropy(&self, theta: f64, phi: f64) -> f64 {
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let ph = Complex64::new(phi.cos(), phi.sin());
        let v0 = [Complex64::new(ct, 0.0), ph * st];
        let v1 = [Complex64::new(st, 0.0), -ph * ct];
        let mut total = 0.0;
        for v in [&v0, &v1] {
            let m00 = Self::quad_form(&self.b00, v).re;
            let m11 = Self::quad_form(&self.b11, v).re;
            let m01 = Self::quad_form(&self.b01, v);
            let p = m00 + m11;
            if p > 1e-14 {
                let gap = (((m00 - m11) / 2.0).powi(2) + m01.norm_sqr()).sqrt();
                let l1 = ((p / 2.0 + gap) / p).clamp(0.0, 1.0);
                total += p * binary_entropy_bits(l1);
            }
        }
        total
    }
}

/// Brute-force discord of a two-qubit state: dense grid over the two Bloch
/// angles of the measured basis, then a shrinking local pattern search.
pub fn qubit_discord_grid(rho: &DensityMatrix, cfg: &GridOracle) -> Result<GridOracleResult> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "grid oracle needs dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    let m4 = Matrix4::from_fn(|i, j| rho.entries()[(i, j)]);
    let problem = QubitMeasurementProblem::new(&m4);
    let s_a = von_neumann_entropy(&rho.partial_trace(1)?)?;
    let i = mutual_information(rho)?;

    let mut best = (f64::INFINITY, 0.0, 0.0);
    let pi = std::f64::consts::PI;
    for it in 0..cfg.n_theta {
        let theta = pi * it as f64 / (cfg.n_theta - 1) as f64;
        for ip in 0..cfg.n_phi {
            let phi = 2.0 * pi * ip as f64 / cfg.n_phi as f64;
            let s = problem.conditional_entropy(theta, phi);
            if s < best.0 {
                best = (s, theta, phi);
            }
        }
    }
    let (mut s_min, mut theta, mut phi) = best;
    let mut r_theta = pi / cfg.n_theta as f64;
    let mut r_phi = 2.0 * pi / cfg.n_phi as f64;
    for _ in 0..cfg.refine_steps {
        let mut moved = false;
        for dt in [-1.0, 0.0, 1.0] {
            for dp in [-1.0, 0.0, 1.0] {
                if dt == 0.0 && dp == 0.0 {
                    continue;
                }
                let t = (theta + dt * r_theta).clamp(0.0, pi);
                let p = phi + dp * r_phi;
                let s = problem.conditional_entropy(t, p);
                if s < s_min {
                    s_min = s;
                    theta = t;
                    phi = p;
                    moved = true;
                }
            }
        }
        if !moved {
            r_theta /= 2.0;
            r_phi /= 2.0;
        }
    }
    let c = (s_a - s_min).max(0.0);
    let q = (i - c).max(0.0);
    Ok(GridOracleResult {
        min_conditional_entropy: s_min,
        c,
        q,
        theta,
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::diagonal_state;
    use crate::rdm;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn psi_plus() -> DensityMatrix {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        for &(i, j) in &[(1usize, 1usize), (1, 2), (2, 1), (2, 2)] {
            m[(i, j)] = Complex64::new(0.5, 0.0);
        }
        DensityMatrix::new(vec![2, 2], m, "psi+").unwrap()
    }

    #[test]
    fn entropy_reference_values() {
        let pure = diagonal_state(vec![3], &[1.0, 0.0, 0.0], "p").unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-12);
        let mixed = diagonal_state(vec![4], &[0.25; 4], "m").unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&mixed).unwrap(), 2.0, epsilon = 1e-12);
        let paired = rdm::two_mode_rdm(0.5, true).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&paired).unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_reference_values() {
        let a = diagonal_state(vec![2], &[0.3, 0.7], "a").unwrap();
        let b = diagonal_state(vec![2], &[0.6, 0.4], "b").unwrap();
        let prod = a.kron(&b).unwrap();
        assert_abs_diff_eq!(mutual_information(&prod).unwrap(), 0.0, epsilon = 1e-12);

        let cc = diagonal_state(vec![2, 2], &[0.5, 0.0, 0.0, 0.5], "cc").unwrap();
        assert_abs_diff_eq!(mutual_information(&cc).unwrap(), 1.0, epsilon = 1e-12);

        let paired = rdm::two_mode_rdm(0.5, true).unwrap();
        assert_abs_diff_eq!(mutual_information(&paired).unwrap(), 2.5, epsilon = 1e-12);
        let unpaired = rdm::two_mode_rdm(0.37, false).unwrap();
        assert_abs_diff_eq!(mutual_information(&unpaired).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn xstate_theta1_at_half_filling() {
        let rho = rdm::two_site_qubit_no_pairs(0.5, 1).unwrap();
        let out = discord_cc_xstate(&rho).unwrap();
        assert_abs_diff_eq!(
            out.branch.theta1,
            2.0 / std::f64::consts::PI,
            epsilon = 1e-12
        );
        assert!(out.q > 0.0 && out.c > 0.0);
        assert_abs_diff_eq!(out.q, out.i - out.c, epsilon = 1e-12);
    }

    #[test]
    fn xstate_nodal_point_vanishes() {
        let rho = rdm::two_site_qubit_no_pairs(0.5, 2).unwrap();
        let out = discord_cc_xstate(&rho).unwrap();
        assert_abs_diff_eq!(out.i, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.c, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.q, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn xstate_rejects_corner_coherence() {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        for &(i, j) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = Complex64::new(0.5, 0.0);
        }
        let bell = DensityMatrix::new(vec![2, 2], m, "phi+").unwrap();
        assert!(matches!(discord_cc_xstate(&bell), Err(Error::NotXState(_))));
    }

    #[test]
    fn bell_state_discord_is_one() {
        let rho = psi_plus();
        let out = discord_cc_xstate(&rho).unwrap();
        assert_abs_diff_eq!(out.i, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.c, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out.q, 1.0, epsilon = 1e-12);
        let grid = qubit_discord_grid(&rho, &GridOracle::default()).unwrap();
        assert_abs_diff_eq!(grid.q, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn region3_closed_form_matches_xstate_path() {
        for &n_d in &[0.05, 0.17, 0.25, 0.4, 0.5] {
            let f = discord_region3_closed_form(n_d).unwrap();
            let rho = rdm::two_site_qubit_pairs_only(n_d).unwrap();
            let out = discord_cc_xstate(&rho).unwrap();
            assert_abs_diff_eq!(f, out.q, epsilon = 1e-9);
        }
        assert!(discord_region3_closed_form(0.0).is_err());
        assert!(discord_region3_closed_form(0.6).is_err());
        // vanishes towards the uncorrelated vacuum
        assert!(discord_region3_closed_form(1e-9).unwrap() < 1e-6);
    }

    #[test]
    fn region3_classical_closed_form() {
        for &n_d in &[0.1, 0.3, 0.5] {
            let rho = rdm::two_site_qubit_pairs_only(n_d).unwrap();
            let out = discord_cc_xstate(&rho).unwrap();
            assert_abs_diff_eq!(
                classical_correlations_pairs_only(n_d),
                out.c,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn kspace_values() {
        assert_abs_diff_eq!(discord_kspace(0.5).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(discord_kspace(0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(discord_kspace(0.25).unwrap(), 0.375, epsilon = 1e-15);
        assert_abs_diff_eq!(kspace_mutual_information(0.5), 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(kspace_single_mode_entropy(0.5), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn concurrence_reference_values() {
        assert_abs_diff_eq!(concurrence(&psi_plus()).unwrap(), 1.0, epsilon = 1e-10);
        // pair-sector state is separable in the infinite chain
        for &n_d in &[0.1, 0.25, 0.5] {
            let rho = rdm::two_site_qubit_pairs_only(n_d).unwrap();
            assert_abs_diff_eq!(concurrence(&rho).unwrap(), 0.0, epsilon = 1e-10);
        }
        // W-state pair marginal
        let w = rdm::eta_pair_two_site_rdm(3, 1).unwrap();
        assert_abs_diff_eq!(concurrence(&w).unwrap(), 2.0 / 3.0, epsilon = 1e-10);
    }

    #[test]
    fn concurrence_closed_form_agrees_with_wootters() {
        for &n_s in &[0.3, 0.6, 0.85, 0.95] {
            for r in 1..=4u32 {
                let g = rdm::gamma(n_s, r).unwrap();
                let rho = rdm::two_site_qubit_no_pairs(n_s, r).unwrap();
                assert_abs_diff_eq!(
                    concurrence(&rho).unwrap(),
                    concurrence_no_pairs_closed_form(n_s, g),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn negativity_reference_values() {
        let a = diagonal_state(vec![2], &[0.3, 0.7], "a").unwrap();
        let prod = a.kron(&a).unwrap();
        assert_abs_diff_eq!(negativity(&prod).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(negativity(&psi_plus()).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn paired_mode_negativity_is_proportional_to_discord() {
        for k in 1..20 {
            let a = k as f64 / 20.0;
            let rho = rdm::two_mode_rdm(a, true).unwrap();
            let n = negativity(&rho).unwrap();
            let q = discord_kspace(a).unwrap();
            assert_abs_diff_eq!(n / q, 0.5, epsilon = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn xstate_invariants_on_model_states(
            n_s in 0.02f64..0.98,
            n_d in 0.02f64..0.5,
            r in 1u32..8,
            no_pairs in proptest::bool::ANY,
        ) {
            let rho = if no_pairs {
                rdm::two_site_qubit_no_pairs(n_s, r).unwrap()
            } else {
                rdm::two_site_qubit_pairs_only(n_d).unwrap()
            };
            let out = discord_cc_xstate(&rho).unwrap();
            prop_assert!(out.q >= 0.0 && out.c >= 0.0 && out.i >= 0.0);
            prop_assert!((out.q - (out.i - out.c)).abs() < 1e-9);
            prop_assert!(out.q <= out.i + 1e-12);
            prop_assert!(out.c <= out.i + 1e-12);
            prop_assert!(out.branch.s1 <= out.branch.s2 + 1e-12);
            // exchange symmetry of the model states
            let swapped = discord_cc_xstate(&rho.swap_factors().unwrap()).unwrap();
            prop_assert!((out.q - swapped.q).abs() < 1e-9);
            prop_assert!((out.c - swapped.c).abs() < 1e-9);
        }
    }
}
