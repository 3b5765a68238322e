//! Von Neumann measurements on d-level subsystems and numerical
//! minimization of the measured conditional entropy.
//!
//! The three-level minimization runs in two stages: a broad sampling stage
//! (Haar-random unitaries, or uniformly drawn angle parameters as an
//! alternate engine) followed by derivative-free simplex refinement of the
//! best candidates in the six directions that actually move the projector
//! set (a local chart `U -> U exp(iH)` with traceless off-diagonal Hermitian
//! generators). The reported value is an upper bound on the true minimum and
//! is monotone nonincreasing in the sample budget because samples are drawn
//! sequentially from one seeded stream.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::correlations::{mutual_information, von_neumann_entropy};
use crate::density::{hermitian_eigenvalues, DensityMatrix};
use crate::error::{Error, Result};

const ORTHO_TOL: f64 = 1e-10;

/// Angle/phase coordinates of a three-outcome von Neumann basis.
///
/// The parametrization is the standard angular factorization of a 3x3
/// unitary into plane rotations (angles `eta1..eta3`, one rotation phase
/// `gamma`) preceded by row phases (`alpha`, `beta`); two further column
/// phases act trivially on rank-1 projectors and are omitted. As the
/// parameters range over angles in `[0, pi/2]` and phases in `[0, 2 pi)`
/// every von Neumann basis is reached.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BasisAngles {
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl BasisAngles {
    pub const ZERO: BasisAngles = BasisAngles {
        eta1: 0.0,
        eta2: 0.0,
        eta3: 0.0,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };
}

/// Explicit 3x3 unitary for a set of [`BasisAngles`].
pub fn unitary_from_angles(a: &BasisAngles) -> Matrix3<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let phase = |x: f64| Complex64::new(x.cos(), x.sin());
    let (c1, s1) = (a.eta1.cos(), a.eta1.sin());
    let (c2, s2) = (a.eta2.cos(), a.eta2.sin());
    let (c3, s3) = (a.eta3.cos(), a.eta3.sin());
    let g12 = Matrix3::new(
        re(c1),
        re(-s1),
        zero, //
        re(s1),
        re(c1),
        zero, //
        zero,
        zero,
        one,
    );
    let g13 = Matrix3::new(
        re(c2),
        zero,
        -phase(a.gamma) * s2, //
        zero,
        one,
        zero, //
        phase(-a.gamma) * s2,
        zero,
        re(c2),
    );
    let g23 = Matrix3::new(
        one,
        zero,
        zero, //
        zero,
        re(c3),
        re(-s3), //
        zero,
        re(s3),
        re(c3),
    );
    let d = Matrix3::from_diagonal(&Vector3::new(one, phase(a.alpha), phase(a.beta)));
    d * g23 * g13 * g12
}

/// Haar-distributed random unitary: orthonormalized complex Gaussian matrix
/// with the positive-diagonal phase convention.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DMatrix<Complex64>> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "haar_random_unitary needs dim >= 2, got {dim}"
        )));
    }
    let mut cols: Vec<DVector<Complex64>> = (0..dim)
        .map(|_| {
            DVector::from_fn(dim, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
        })
        .collect();
    for k in 0..dim {
        // two Gram-Schmidt passes keep the columns orthonormal well below
        // the 1e-12 unitarity budget even for ill-conditioned draws
        for _ in 0..2 {
            for j in 0..k {
                let proj = cols[j].dotc(&cols[k]);
                let prev = cols[j].clone();
                cols[k] -= prev * proj;
            }
        }
        let norm = cols[k].norm();
        cols[k] /= Complex64::new(norm, 0.0);
    }
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for (k, col) in cols.iter().enumerate() {
        u.set_column(k, col);
    }
    Ok(u)
}

fn haar3<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<Complex64> {
    let mut cols: [Vector3<Complex64>; 3] = std::array::from_fn(|_| {
        Vector3::from_fn(|_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    });
    for k in 0..3 {
        for _ in 0..2 {
            for j in 0..k {
                let proj = cols[j].dotc(&cols[k]);
                let prev = cols[j];
                cols[k] -= prev * proj;
            }
        }
        let norm = cols[k].norm();
        cols[k] /= Complex64::new(norm, 0.0);
    }
    Matrix3::from_columns(&cols)
}

/// How a basis was produced, kept for reporting and reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum BasisParametrization {
    UnitaryColumns,
    Angles(BasisAngles),
    Computational,
}

/// A complete set of rank-1 orthogonal projectors on one tensor factor,
/// stored through the measured orthonormal vectors.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    vectors: Vec<DVector<Complex64>>,
    parametrization: BasisParametrization,
}

impl MeasurementBasis {
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != u.ncols() || u.nrows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "basis unitary must be square of dim >= 2, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let vectors: Vec<DVector<Complex64>> =
            (0..u.ncols()).map(|k| u.column(k).into_owned()).collect();
        let basis = Self {
            vectors,
            parametrization: BasisParametrization::UnitaryColumns,
        };
        basis.check_orthonormal()?;
        Ok(basis)
    }

    pub fn from_unitary3(u: &Matrix3<Complex64>) -> Result<Self> {
        Self::from_unitary(&DMatrix::from_fn(3, 3, |i, j| u[(i, j)]))
    }

    pub fn from_angles(a: &BasisAngles) -> Result<Self> {
        let mut basis = Self::from_unitary3(&unitary_from_angles(a))?;
        basis.parametrization = BasisParametrization::Angles(*a);
        Ok(basis)
    }

    /// The basis of the declared product ordering (identity unitary).
    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|k| {
                DVector::from_fn(dim, |i, _| {
                    Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0)
                })
            })
            .collect();
        Self {
            vectors,
            parametrization: BasisParametrization::Computational,
        }
    }

    fn check_orthonormal(&self) -> Result<()> {
        for i in 0..self.vectors.len() {
            for j in i..self.vectors.len() {
                let dot = self.vectors[i].dotc(&self.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - Complex64::new(want, 0.0)).norm() > ORTHO_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "basis vectors {i}, {j} not orthonormal within 1e-10"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }

    pub fn parametrization(&self) -> &BasisParametrization {
        &self.parametrization
    }

    /// Rank-1 projectors, one per outcome.
    pub fn projectors(&self) -> Vec<DMatrix<Complex64>> {
        self.vectors
            .iter()
            .map(|v| {
                let d = v.len();
                DMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj())
            })
            .collect()
    }

    fn as_matrix3(&self) -> Result<Matrix3<Complex64>> {
        if self.dim() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "expected a three-outcome basis, got dim {}",
                self.dim()
            )));
        }
        let mut u = Matrix3::zeros();
        for (k, v) in self.vectors.iter().enumerate() {
            for i in 0..3 {
                u[(i, k)] = v[i];
            }
        }
        Ok(u)
    }
}

/// Conditional entropy `sum_k p_k S(rho_k)` after measuring factor B of a
/// bipartite state in `basis`. Outcomes with `p_k < 1e-14` contribute zero.
pub fn conditional_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    if !rho.is_bipartite() {
        return Err(Error::DimensionMismatch(format!(
            "conditional entropy needs a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    let (da, db) = (rho.dims()[0], rho.dims()[1]);
    if basis.dim() != db {
        return Err(Error::DimensionMismatch(format!(
            "basis dim {} does not match measured factor dim {db}",
            basis.dim()
        )));
    }
    let m = rho.entries();
    let mut total = 0.0;
    for v in basis.vectors() {
        let mut post = DMatrix::<Complex64>::zeros(da, da);
        for a in 0..da {
            for a2 in 0..da {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..db {
                    for b2 in 0..db {
                        acc += v[b].conj() * m[(a * db + b, a2 * db + b2)] * v[b2];
                    }
                }
                post[(a, a2)] = acc;
            }
        }
        let p: f64 = post.diagonal().iter().map(|z| z.re).sum();
        if p > 1e-14 {
            let mut s = 0.0;
            for lam in hermitian_eigenvalues(&post) {
                let l = (lam / p).max(0.0);
                if l > 1e-300 {
                    s -= l * l.log2();
                }
            }
            total += p * s;
        }
    }
    Ok(total)
}

/// Closed-form spectrum of a 3x3 Hermitian matrix (trigonometric method).
fn herm3_eigenvalues(m: &Matrix3<Complex64>) -> [f64; 3] {
    let (a, b, c) = (m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re);
    let (d, e, f) = (m[(0, 1)], m[(0, 2)], m[(1, 2)]);
    let p1 = d.norm_sqr() + e.norm_sqr() + f.norm_sqr();
    if p1 <= 1e-30 {
        let mut v = [a, b, c];
        v.sort_by(f64::total_cmp);
        return v;
    }
    let q = (a + b + c) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let (aa, bb, cc) = ((a - q) / p, (b - q) / p, (c - q) / p);
    let (dd, ee, ff) = (d / p, e / p, f / p);
    let det = aa * bb * cc + 2.0 * (dd * ff * ee.conj()).re
        - aa * ff.norm_sqr()
        - bb * ee.norm_sqr()
        - cc * dd.norm_sqr();
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

/// Fast path: conditional entropy of a two-qutrit state measured in the
/// basis given by the columns of `u`.
fn qutrit_conditional_entropy(m: &DMatrix<Complex64>, u: &Matrix3<Complex64>) -> f64 {
    let mut total = 0.0;
    for k in 0..3 {
        let v = [u[(0, k)], u[(1, k)], u[(2, k)]];
        let mut post = Matrix3::<Complex64>::zeros();
        for a in 0..3 {
            for a2 in 0..3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..3 {
                    let vb = v[b].conj();
                    for b2 in 0..3 {
                        acc += vb * m[(a * 3 + b, a2 * 3 + b2)] * v[b2];
                    }
                }
                post[(a, a2)] = acc;
            }
        }
        let p = post[(0, 0)].re + post[(1, 1)].re + post[(2, 2)].re;
        if p > 1e-14 {
            let mut s = 0.0;
            for lam in herm3_eigenvalues(&post) {
                let l = (lam / p).max(0.0);
                if l > 1e-300 {
                    s -= l * l.log2();
                }
            }
            total += p * s;
        }
    }
    total
}

/// Sampling engine for the broad stage of the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchEngine {
    /// Haar-random unitaries.
    Haar,
    /// Uniformly drawn [`BasisAngles`].
    Angles,
}

/// Budget and reproducibility knobs of the conditional-entropy search.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n_samples: usize,
    pub n_refine: usize,
    pub tol: f64,
    pub seed: u64,
    /// Stream index; scans key this by grid point so that parallel points
    /// stay deterministic.
    pub stream: u64,
    pub engine: SearchEngine,
    pub max_refine_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_samples: 20_000,
            n_refine: 3,
            tol: 1e-9,
            seed: 0,
            stream: 0,
            engine: SearchEngine::Haar,
            max_refine_iters: 500,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
        }
        if self.n_refine == 0 {
            return Err(Error::InvalidParameter(
                "n_refine must be >= 1 (the best sample is always refined)".into(),
            ));
        }
        if self.tol <= 0.0 || self.tol.is_nan() {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        Ok(())
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }
}

/// Result of one conditional-entropy minimization.
#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub min_conditional_entropy: f64,
    pub basis: MeasurementBasis,
    pub i: f64,
    pub c: f64,
    pub q: f64,
    pub s_a: f64,
    /// False when the simplex refinement of the best candidate ran out of
    /// iterations; the reported value is then still the best found so far.
    pub converged: bool,
    pub evaluations: usize,
}

/// `U exp(i H(w))` with `H` the traceless Hermitian matrix holding the six
/// chart coordinates on its off-diagonal.
fn chart_unitary(base: &Matrix3<Complex64>, w: &[f64]) -> Matrix3<Complex64> {
    let h01 = Complex64::new(w[0], w[1]);
    let h02 = Complex64::new(w[2], w[3]);
    let h12 = Complex64::new(w[4], w[5]);
    let zero = Complex64::new(0.0, 0.0);
    let h = Matrix3::new(
        zero,
        h01,
        h02,
        h01.conj(),
        zero,
        h12,
        h02.conj(),
        h12.conj(),
        zero,
    );
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let mut expo = Matrix3::<Complex64>::zeros();
    for k in 0..3 {
        let lam = eig.eigenvalues[k];
        let ph = Complex64::new(lam.cos(), lam.sin());
        let v = eig.eigenvectors.column(k);
        for i in 0..3 {
            for j in 0..3 {
                expo[(i, j)] += v[i] * v[j].conj() * ph;
            }
        }
    }
    base * expo
}

struct SimplexResult {
    x: Vec<f64>,
    value: f64,
    converged: bool,
    evaluations: usize,
}

/// Textbook Nelder-Mead: reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5; stops when the simplex value spread drops below `f_tol`.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    f_tol: f64,
) -> SimplexResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = x0.to_vec();
    let f0 = eval(&v0, &mut evals);
    simplex.push((v0, f0));
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        let fv = eval(&v, &mut evals);
        simplex.push((v, fv));
    }
    let mut converged = false;
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[n].1 - simplex[0].1 < f_tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(x, _)| x[d]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n)
            .map(|d| centroid[d] + (centroid[d] - worst.0[d]))
            .collect();
        let fr = eval(&reflect, &mut evals);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|d| centroid[d] + 2.0 * (reflect[d] - centroid[d]))
                .collect();
            let fe = eval(&expand, &mut evals);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = if fr < worst.1 {
                (0..n)
                    .map(|d| centroid[d] + 0.5 * (reflect[d] - centroid[d]))
                    .collect()
            } else {
                (0..n)
                    .map(|d| centroid[d] - 0.5 * (centroid[d] - worst.0[d]))
                    .collect()
            };
            let fc = eval(&contract, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (contract, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for (coord, anchor) in entry.0.iter_mut().zip(&best) {
                        *coord = anchor + 0.5 * (*coord - anchor);
                    }
                    entry.1 = eval(&entry.0, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: simplex[0].0.clone(),
        value: simplex[0].1,
        converged,
        evaluations: evals,
    }
}

/// Minimize the measured conditional entropy of a two-qutrit state over von
/// Neumann bases on the second factor. Returns the minimum found (an upper
/// bound on the true minimum) together with the induced discord and
/// classical correlations. An optional warm-start basis is always included
/// among the refinement seeds.
pub fn minimize_conditional_entropy(
    rho: &DensityMatrix,
    cfg: &SearchConfig,
    warm_start: Option<&MeasurementBasis>,
) -> Result<MinimizeOutcome> {
    cfg.validate()?;
    if rho.dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "the three-level search needs dims [3, 3], got {:?}",
            rho.dims()
        )));
    }
    let m = rho.entries();
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream);

    let mut evaluations = 0usize;
    // best-first list of refinement seeds
    let mut seeds: Vec<(f64, Matrix3<Complex64>)> = Vec::with_capacity(cfg.n_refine + 1);
    let push_seed =
        |val: f64, u: Matrix3<Complex64>, seeds: &mut Vec<(f64, Matrix3<Complex64>)>| {
            seeds.push((val, u));
            seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
            if seeds.len() > cfg.n_refine {
                seeds.pop();
            }
        };

    for _ in 0..cfg.n_samples {
        let u = match cfg.engine {
            SearchEngine::Haar => haar3(&mut rng),
            SearchEngine::Angles => unitary_from_angles(&BasisAngles {
                eta1: rng.random::<f64>() * FRAC_PI_2,
                eta2: rng.random::<f64>() * FRAC_PI_2,
                eta3: rng.random::<f64>() * FRAC_PI_2,
                alpha: rng.random::<f64>() * 2.0 * PI,
                beta: rng.random::<f64>() * 2.0 * PI,
                gamma: rng.random::<f64>() * 2.0 * PI,
            }),
        };
        let val = qutrit_conditional_entropy(m, &u);
        evaluations += 1;
        if seeds.len() < cfg.n_refine || val < seeds.last().map_or(f64::INFINITY, |s| s.0) {
            push_seed(val, u, &mut seeds);
        }
    }
    if let Some(basis) = warm_start {
        let u = basis.as_matrix3()?;
        let val = qutrit_conditional_entropy(m, &u);
        evaluations += 1;
        seeds.insert(0, (val, u));
    }

    let mut best_val = f64::INFINITY;
    let mut best_u = Matrix3::identity();
    let mut best_converged = false;
    for (val0, u0) in &seeds {
        let result = nelder_mead(
            |w| chart_cost(m, u0, w),
            &[0.0; 6],
            0.15,
            cfg.max_refine_iters,
            cfg.tol,
        );
        evaluations += result.evaluations;
        let (val, u) = if result.value < *val0 {
            (result.value, chart_unitary(u0, &result.x))
        } else {
            (*val0, *u0)
        };
        if val < best_val {
            best_val = val;
            best_u = u;
            best_converged = result.converged;
        }
    }

    let s_a = von_neumann_entropy(&rho.partial_trace(1)?)?;
    let i = mutual_information(rho)?;
    // concavity bounds the measured conditional entropy by S(A); anything
    // materially below the clamp tolerance signals a numerical defect
    debug_assert!(s_a - best_val > -1e-6, "conditional entropy above S(A)");
    let c = (s_a - best_val).max(0.0);
    let q = (i - c).max(0.0);
    Ok(MinimizeOutcome {
        min_conditional_entropy: best_val,
        basis: MeasurementBasis::from_unitary3(&best_u)?,
        i,
        c,
        q,
        s_a,
        converged: best_converged,
        evaluations,
    })
}

fn chart_cost(m: &DMatrix<Complex64>, base: &Matrix3<Complex64>, w: &[f64]) -> f64 {
    qutrit_conditional_entropy(m, &chart_unitary(base, w))
}

/// Simplex-refine an existing basis without a sampling stage (used by
/// near-critical scans that track a slowly varying optimum).
pub fn refine_conditional_entropy(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    cfg: &SearchConfig,
) -> Result<MinimizeOutcome> {
    if rho.dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "the three-level search needs dims [3, 3], got {:?}",
            rho.dims()
        )));
    }
    let m = rho.entries();
    let u0 = basis.as_matrix3()?;
    let start = qutrit_conditional_entropy(m, &u0);
    let result = nelder_mead(
        |w| chart_cost(m, &u0, w),
        &[0.0; 6],
        0.05,
        cfg.max_refine_iters,
        cfg.tol,
    );
    let (best_val, best_u) = if result.value < start {
        (result.value, chart_unitary(&u0, &result.x))
    } else {
        (start, u0)
    };
    let s_a = von_neumann_entropy(&rho.partial_trace(1)?)?;
    let i = mutual_information(rho)?;
    let c = (s_a - best_val).max(0.0);
    let q = (i - c).max(0.0);
    Ok(MinimizeOutcome {
        min_conditional_entropy: best_val,
        basis: MeasurementBasis::from_unitary3(&best_u)?,
        i,
        c,
        q,
        s_a,
        converged: result.converged,
        evaluations: result.evaluations + 1,
    })
}

/// Conditional entropy of a two-qutrit state in one fixed basis (no search).
pub fn conditional_entropy_qutrit_basis(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<f64> {
    if rho.dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "expected dims [3, 3], got {:?}",
            rho.dims()
        )));
    }
    Ok(qutrit_conditional_entropy(
        rho.entries(),
        &basis.as_matrix3()?,
    ))
}

/// Discord and classical correlations of a two-qutrit state under a fixed
/// measurement basis (upper-bound evaluation used by near-critical scans).
pub fn correlations_with_basis(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<(f64, f64, f64)> {
    let cond = conditional_entropy_qutrit_basis(rho, basis)?;
    let s_a = von_neumann_entropy(&rho.partial_trace(1)?)?;
    let i = mutual_information(rho)?;
    let c = (s_a - cond).max(0.0);
    let q = (i - c).max(0.0);
    Ok((i, c, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::diagonal_state;
    use crate::rdm;
    use approx::assert_abs_diff_eq;

    fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
        let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
        (u.adjoint() * u - id).norm()
    }

    #[test]
    fn haar_unitarity() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut worst = 0.0f64;
        for _ in 0..2000 {
            let u = haar_random_unitary(3, &mut rng).unwrap();
            worst = worst.max(unitarity_deviation(&u));
        }
        assert!(worst < 1e-12, "max deviation {worst}");
    }

    #[test]
    fn haar_first_moment() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 20_000;
        let mean = (0..n)
            .map(|_| haar3(&mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn angles_identity_and_unitarity() {
        let id = unitary_from_angles(&BasisAngles::ZERO);
        assert!((id - Matrix3::identity()).norm() < 1e-15);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = BasisAngles {
                eta1: rng.random::<f64>() * FRAC_PI_2,
                eta2: rng.random::<f64>() * FRAC_PI_2,
                eta3: rng.random::<f64>() * FRAC_PI_2,
                alpha: rng.random::<f64>() * 2.0 * PI,
                beta: rng.random::<f64>() * 2.0 * PI,
                gamma: rng.random::<f64>() * 2.0 * PI,
            };
            let u = unitary_from_angles(&a);
            let dev = (u.adjoint() * u - Matrix3::identity()).norm();
            assert!(dev < 1e-12, "deviation {dev}");
        }
    }

    #[test]
    fn herm3_matches_nalgebra() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..500 {
            let g = Matrix3::from_fn(|_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let h = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
            let mut closed = herm3_eigenvalues(&h);
            closed.sort_by(f64::total_cmp);
            let mut reference: Vec<f64> = nalgebra::linalg::SymmetricEigen::new(h)
                .eigenvalues
                .iter()
                .copied()
                .collect();
            reference.sort_by(f64::total_cmp);
            for (a, b) in closed.iter().zip(&reference) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn conditional_entropy_of_product_state_is_marginal_entropy() {
        let a = diagonal_state(vec![3], &[0.5, 0.3, 0.2], "a").unwrap();
        let b = diagonal_state(vec![3], &[0.6, 0.3, 0.1], "b").unwrap();
        let rho = a.kron(&b).unwrap();
        let s_a = von_neumann_entropy(&a).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        for _ in 0..20 {
            let u = haar_random_unitary(3, &mut rng).unwrap();
            let basis = MeasurementBasis::from_unitary(&u).unwrap();
            let s = conditional_entropy(&rho, &basis).unwrap();
            assert_abs_diff_eq!(s, s_a, epsilon = 1e-10);
        }
    }

    #[test]
    fn conditional_entropy_classical_and_paired_states() {
        let cc = diagonal_state(vec![2, 2], &[0.5, 0.0, 0.0, 0.5], "cc").unwrap();
        let s = conditional_entropy(&cc, &MeasurementBasis::computational(2)).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);

        let paired = rdm::two_mode_rdm(0.3, true).unwrap();
        let s = conditional_entropy(&paired, &MeasurementBasis::computational(4)).unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn minimizer_agrees_with_analytic_path_on_embedded_qubits() {
        // third on-site level unpopulated: the search must land on the
        // analytic two-qubit value
        let qubit = rdm::two_site_qubit_no_pairs(0.7, 1).unwrap();
        let analytic = crate::correlations::discord_cc_xstate(&qubit).unwrap();
        let embedded = rdm::two_site_rdm(&rdm::TwoSiteParams::new(0.7, 0.0, 1).unwrap()).unwrap();
        let cfg = SearchConfig {
            n_samples: 3000,
            ..SearchConfig::default()
        };
        let out = minimize_conditional_entropy(&embedded, &cfg, None).unwrap();
        assert_abs_diff_eq!(out.q, analytic.q, epsilon = 1e-6);
        assert_abs_diff_eq!(out.c, analytic.c, epsilon = 1e-6);
    }

    #[test]
    fn minimizer_is_reproducible_and_monotone_in_samples() {
        let (n_s, n_d) = crate::phase::region2_densities(1.0, 1.0).unwrap();
        let rho = rdm::two_site_rdm(&rdm::TwoSiteParams::new(n_s, n_d, 1).unwrap()).unwrap();
        let cfg = SearchConfig {
            n_samples: 1000,
            seed: 42,
            ..SearchConfig::default()
        };
        let a = minimize_conditional_entropy(&rho, &cfg, None).unwrap();
        let b = minimize_conditional_entropy(&rho, &cfg, None).unwrap();
        assert_eq!(
            a.min_conditional_entropy.to_bits(),
            b.min_conditional_entropy.to_bits()
        );
        let big = SearchConfig {
            n_samples: 4000,
            ..cfg
        };
        let c = minimize_conditional_entropy(&rho, &big, None).unwrap();
        assert!(c.min_conditional_entropy <= a.min_conditional_entropy + cfg.tol);
    }

    #[test]
    fn exhausted_refinement_reports_best_so_far_with_a_flag() {
        let (n_s, n_d) = crate::phase::region2_densities(-2.0, 1.0).unwrap();
        let rho = rdm::two_site_rdm(&rdm::TwoSiteParams::new(n_s, n_d, 1).unwrap()).unwrap();
        let cfg = SearchConfig {
            n_samples: 50,
            max_refine_iters: 1,
            ..SearchConfig::default()
        };
        let out = minimize_conditional_entropy(&rho, &cfg, None).unwrap();
        assert!(!out.converged);
        assert!(out.min_conditional_entropy.is_finite());
    }

    #[test]
    fn haar_rejects_degenerate_dimension() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(haar_random_unitary(1, &mut rng).is_err());
    }

    #[test]
    fn engines_agree_on_a_three_species_point() {
        let (n_s, n_d) = crate::phase::region2_densities(-1.0, 1.0).unwrap();
        let rho = rdm::two_site_rdm(&rdm::TwoSiteParams::new(n_s, n_d, 1).unwrap()).unwrap();
        let haar = minimize_conditional_entropy(
            &rho,
            &SearchConfig {
                n_samples: 2000,
                ..SearchConfig::default()
            },
            None,
        )
        .unwrap();
        let angles = minimize_conditional_entropy(
            &rho,
            &SearchConfig {
                n_samples: 2000,
                engine: SearchEngine::Angles,
                seed: 5,
                ..SearchConfig::default()
            },
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(
            haar.min_conditional_entropy,
            angles.min_conditional_entropy,
            epsilon = 1e-6
        );
    }
}
