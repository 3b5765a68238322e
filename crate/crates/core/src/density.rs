//! Validated complex density matrices with declared tensor-factor structure.
//!
//! Every constructor in [`crate::rdm`] returns a [`DensityMatrix`]; the type
//! enforces Hermiticity, unit trace and positive semidefiniteness at build
//! time so that downstream entropy and measurement code can assume a valid
//! state. The `basis_tag` records the basis-ordering convention of the
//! entries (e.g. which on-site levels span an extracted qubit block).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on Hermiticity, trace normalization and eigenvalue positivity.
pub const STATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    entries: DMatrix<Complex64>,
    basis_tag: String,
}

impl DensityMatrix {
    /// Build a density matrix, checking Hermiticity within `1e-12`, unit
    /// trace within `1e-12` and spectrum bounded below by `-1e-12`.
    pub fn new(
        dims: Vec<usize>,
        entries: DMatrix<Complex64>,
        basis_tag: impl Into<String>,
    ) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total == 0 {
            return Err(Error::InvalidDensityMatrix("empty factor list".into()));
        }
        if entries.nrows() != total || entries.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "entries are {}x{}, factor dims {:?} require {}x{}",
                entries.nrows(),
                entries.ncols(),
                dims,
                total,
                total
            )));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..total {
            for j in i..total {
                let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                herm_dev = herm_dev.max(dev);
            }
        }
        if herm_dev > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "Hermiticity violated by {herm_dev:.3e}"
            )));
        }
        let trace = entries.diagonal().iter().map(|z| z.re).sum::<f64>();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&entries)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self {
            dims,
            entries,
            basis_tag: basis_tag.into(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    pub fn is_bipartite(&self) -> bool {
        self.dims.len() == 2
    }

    /// Real spectrum with values in `[-STATE_TOL, 0)` clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
            .into_iter()
            .map(|x| if x < 0.0 { 0.0 } else { x })
            .collect()
    }

    /// Trace out one factor of a bipartite state (`traced` is 0 or 1).
    pub fn partial_trace(&self, traced: usize) -> Result<DensityMatrix> {
        if !self.is_bipartite() {
            return Err(Error::DimensionMismatch(format!(
                "partial trace needs a bipartite state, got dims {:?}",
                self.dims
            )));
        }
        if traced > 1 {
            return Err(Error::InvalidParameter(
                "traced factor index must be 0 or 1".into(),
            ));
        }
        let (da, db) = (self.dims[0], self.dims[1]);
        let keep = if traced == 0 { db } else { da };
        let mut out = DMatrix::<Complex64>::zeros(keep, keep);
        for i in 0..keep {
            for j in 0..keep {
                let mut acc = Complex64::new(0.0, 0.0);
                if traced == 1 {
                    // keep factor A, sum over b
                    for b in 0..db {
                        acc += self.entries[(i * db + b, j * db + b)];
                    }
                } else {
                    // keep factor B, sum over a
                    for a in 0..da {
                        acc += self.entries[(a * db + i, a * db + j)];
                    }
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix::new(
            vec![keep],
            out,
            format!("{}|traced:{}", self.basis_tag, traced),
        )
    }

    /// Tensor product, concatenating factor lists.
    pub fn kron(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let entries = self.entries.kronecker(&other.entries);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix::new(
            dims,
            entries,
            format!("{}(x){}", self.basis_tag, other.basis_tag),
        )
    }

    /// Exchange the two factors of a bipartite state.
    pub fn swap_factors(&self) -> Result<DensityMatrix> {
        if !self.is_bipartite() {
            return Err(Error::DimensionMismatch(
                "swap needs a bipartite state".into(),
            ));
        }
        let (da, db) = (self.dims[0], self.dims[1]);
        let n = da * db;
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        for a in 0..da {
            for b in 0..db {
                for a2 in 0..da {
                    for b2 in 0..db {
                        out[(b * da + a, b2 * da + a2)] = self.entries[(a * db + b, a2 * db + b2)];
                    }
                }
            }
        }
        DensityMatrix::new(vec![db, da], out, format!("{}|swapped", self.basis_tag))
    }

    /// Restrict a two-qutrit state to the qubit block spanned by two on-site
    /// levels (the same pair on both sites). Fails if the discarded sector
    /// carries more than `1e-12` weight.
    pub fn two_level_block(&self, keep: (usize, usize)) -> Result<DensityMatrix> {
        if self.dims != [3, 3] {
            return Err(Error::DimensionMismatch(format!(
                "two_level_block needs dims [3, 3], got {:?}",
                self.dims
            )));
        }
        let (l0, l1) = keep;
        if l0 > 2 || l1 > 2 || l0 == l1 {
            return Err(Error::InvalidParameter(format!(
                "level pair ({l0}, {l1}) is not a valid on-site qubit"
            )));
        }
        let levels = [l0, l1];
        let mut out = DMatrix::<Complex64>::zeros(4, 4);
        for (p, &(a, b)) in pairs(&levels).iter().enumerate() {
            for (q, &(a2, b2)) in pairs(&levels).iter().enumerate() {
                out[(p, q)] = self.entries[(a * 3 + b, a2 * 3 + b2)];
            }
        }
        let block_trace = out.diagonal().iter().map(|z| z.re).sum::<f64>();
        if (block_trace - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "levels ({l0}, {l1}) carry weight {block_trace}, not 1"
            )));
        }
        // renormalize away the residual rounding so the invariants hold exactly
        out /= Complex64::new(block_trace, 0.0);
        DensityMatrix::new(vec![2, 2], out, format!("qubit2x2:levels({l0},{l1})"))
    }
}

/// Serializes as factor dims, basis tag and row-major `[re, im]` entries.
impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.total_dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.entries[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        let mut state = serializer.serialize_struct("DensityMatrix", 3)?;
        state.serialize_field("dims", &self.dims)?;
        state.serialize_field("basis_tag", &self.basis_tag)?;
        state.serialize_field("entries", &entries)?;
        state.end()
    }
}

fn pairs(levels: &[usize; 2]) -> [(usize, usize); 4] {
    [
        (levels[0], levels[0]),
        (levels[0], levels[1]),
        (levels[1], levels[0]),
        (levels[1], levels[1]),
    ]
}

/// Spectrum of a Hermitian matrix (unsorted).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    nalgebra::linalg::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// Convenience constructor for a diagonal state.
pub fn diagonal_state(
    dims: Vec<usize>,
    diag: &[f64],
    basis_tag: impl Into<String>,
) -> Result<DensityMatrix> {
    let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
    DensityMatrix::new(dims, DMatrix::from_diagonal(&v), basis_tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bell() -> DensityMatrix {
        let mut m = DMatrix::<Complex64>::zeros(4, 4);
        for &(i, j) in &[(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = Complex64::new(0.5, 0.0);
        }
        DensityMatrix::new(vec![2, 2], m, "bell").unwrap()
    }

    #[test]
    fn rejects_bad_trace() {
        let m = DMatrix::<Complex64>::identity(2, 2);
        assert!(DensityMatrix::new(vec![2], m, "t").is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(DensityMatrix::new(vec![2], m, "t").is_err());
    }

    #[test]
    fn rejects_negative_spectrum() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(vec![2], m, "t").is_err());
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let rho = bell();
        for traced in [0, 1] {
            let red = rho.partial_trace(traced).unwrap();
            assert_abs_diff_eq!(red.entries()[(0, 0)].re, 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(red.entries()[(1, 1)].re, 0.5, epsilon = 1e-14);
            assert_abs_diff_eq!(red.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn kron_dims_and_trace() {
        let a = diagonal_state(vec![2], &[0.25, 0.75], "a").unwrap();
        let b = diagonal_state(vec![3], &[0.5, 0.3, 0.2], "b").unwrap();
        let ab = a.kron(&b).unwrap();
        assert_eq!(ab.dims(), &[2, 3]);
        let tr: f64 = ab.entries().diagonal().iter().map(|z| z.re).sum();
        assert_abs_diff_eq!(tr, 1.0, epsilon = 1e-14);
        // marginals of a product state are the factors
        let ra = ab.partial_trace(1).unwrap();
        assert_abs_diff_eq!(ra.entries()[(0, 0)].re, 0.25, epsilon = 1e-14);
        let rb = ab.partial_trace(0).unwrap();
        assert_abs_diff_eq!(rb.entries()[(1, 1)].re, 0.3, epsilon = 1e-14);
    }

    #[test]
    fn serializes_row_major_with_basis_tag() {
        let rho = bell();
        let json = serde_json::to_value(&rho).unwrap();
        assert_eq!(json["basis_tag"], "bell");
        assert_eq!(json["dims"], serde_json::json!([2, 2]));
        let entries = json["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 16);
        assert_eq!(entries[3][0], 0.5); // row-major (0, 3) entry
        assert_eq!(entries[3][1], 0.0);
    }

    #[test]
    fn swap_is_an_involution() {
        let a = diagonal_state(vec![2], &[0.25, 0.75], "a").unwrap();
        let b = diagonal_state(vec![3], &[0.5, 0.3, 0.2], "b").unwrap();
        let ab = a.kron(&b).unwrap();
        let back = ab.swap_factors().unwrap().swap_factors().unwrap();
        assert_eq!(back.dims(), ab.dims());
        let dev = (back.entries() - ab.entries()).norm();
        assert!(dev < 1e-14);
    }
}
