//! Ground-state correlation toolkit for the bond-charge extended Hubbard
//! chain at its integrable point.
//!
//! The crate builds the closed-form reduced density matrices of the model's
//! ground states (in direct space, in momentum space, and for finite-size
//! permutation-invariant pair states) and evaluates entropy-based and
//! entanglement-based correlation measures on them: mutual information,
//! classical correlations, quantum discord, concurrence and negativity.
//! On top of those primitives, [`analysis`] provides parameter sweeps,
//! numerical derivatives, critical-exponent fits, decay-envelope extraction
//! and monogamy-ratio computations, while [`verify`] packages the whole
//! battery of self-checks behind pass/fail reports.
//!
//! Layout:
//!
//! - [`phase`] — ground-state densities, phase labels, energy density, ODLRO
//! - [`density`] — validated complex density matrices with tensor-factor dims
//! - [`rdm`] — the closed-form reduced density matrices and a brute-force
//!   symmetric-state oracle
//! - [`correlations`] — entropies and all correlation measures, including the
//!   analytic two-qubit discord path and a measurement-grid oracle
//! - [`measurement`] — von Neumann measurement bases on d-level systems and
//!   numerical minimization of the measured conditional entropy
//! - [`analysis`] — scans, derivatives, fits, monogamy reports
//! - [`verify`] — named check suites with one report per acceptance item
//!
//! ```
//! use bchubbard::{correlations, phase, rdm};
//!
//! // nearest-neighbour discord deep in the two-species phase (u = 4, mu = -2)
//! let (n_s, _n_d) = phase::ground_state_densities(4.0, -2.0)?;
//! let two_site = rdm::two_site_qubit_no_pairs(n_s, 1)?;
//! let out = correlations::discord_cc_xstate(&two_site)?;
//! assert!(out.q > 0.0 && (out.q - (out.i - out.c)).abs() < 1e-12);
//!
//! // momentum space: discord of an opposite-momentum mode pair is 2a(1-a)
//! let paired = rdm::two_mode_rdm(0.5, true)?;
//! let i = correlations::mutual_information(&paired)?;
//! let q = correlations::discord_kspace(0.5)?;
//! assert!((i - 2.5).abs() < 1e-12 && (q - 0.5).abs() < 1e-12);
//! # Ok::<(), bchubbard::Error>(())
//! ```

pub mod analysis;
pub mod correlations;
pub mod density;
pub mod error;
pub mod measurement;
pub mod phase;
pub mod rdm;
pub mod verify;

pub use error::{Error, Result};
