//! Parameter sweeps, numerical derivatives, critical-behavior fits,
//! decay-law extraction, correlation-range decomposition and monogamy
//! ratios, built on the closed-form states and the numeric three-level
//! search.

use serde::{Deserialize, Serialize};

use crate::correlations::{
    self, binary_entropy_bits, concurrence, discord_kspace, kspace_mutual_information,
    kspace_single_mode_entropy, negativity, von_neumann_entropy, CorrelationRecord, Method,
    XStateCorrelations,
};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::measurement::{
    minimize_conditional_entropy, refine_conditional_entropy, MeasurementBasis, SearchConfig,
};
use crate::phase::{classify_phase, ground_state_densities, odlro, region2_densities, PhaseLabel};
use crate::rdm::{self, TwoSiteParams};

/// Swept parameter of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    Mu,
    U,
    Nd,
    A,
    R,
}

impl ScanAxis {
    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Mu => "mu",
            ScanAxis::U => "u",
            ScanAxis::Nd => "n_d",
            ScanAxis::A => "a",
            ScanAxis::R => "r",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanPoint {
    pub param: f64,
    pub record: CorrelationRecord,
}

/// Central-difference derivatives of the entropy-based columns.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DerivativeRow {
    pub param: f64,
    pub di: f64,
    pub dc: f64,
    pub dq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `|y| ~ |lambda - lambda_c|^p`, fitted in log-log coordinates.
    Algebraic,
    /// `y ~ a log|lambda - lambda_c| + b`.
    Logarithmic,
    /// `y ~ r^p`, fitted in log-log coordinates.
    PowerLaw,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitReport {
    pub model: FitModel,
    pub exponent_or_slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub n_points: usize,
}

/// One swept series (one separation `r`) with optional derivative and fit
/// annotations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub axis: String,
    pub r: Option<u32>,
    pub fixed: Vec<(String, f64)>,
    pub points: Vec<ScanPoint>,
    pub derivatives: Vec<DerivativeRow>,
    pub fits: Vec<(String, FitReport)>,
}

/// Least-squares line through `(x, y)` pairs: `(slope, intercept, r^2)`.
pub fn linear_fit(pts: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "linear fit needs >= 2 points, got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum::<f64>();
    let ss_res = pts
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok((slope, intercept, r2))
}

// ---------------------------------------------------------------------------
// per-point records
// ---------------------------------------------------------------------------

/// Fast analytic correlations of the no-pair two-site state (levels {0, 1}).
pub fn no_pairs_correlations(n_s: f64, r: u32) -> Result<XStateCorrelations> {
    let g = rdm::gamma(n_s, r)?;
    let p = (1.0 - n_s) * (1.0 - n_s) - g * g;
    let o1 = 1.0 - n_s - p;
    let d2 = n_s * n_s - g * g;
    Ok(correlations::xstate_from_entries(p, o1, o1, d2, g.abs()))
}

/// Fast analytic correlations of the pair-sector state at density `n_d`.
pub fn pairs_only_correlations(n_d: f64) -> XStateCorrelations {
    let x = n_d * (1.0 - n_d);
    correlations::xstate_from_entries((1.0 - n_d) * (1.0 - n_d), x, x, n_d * n_d, x)
}

/// Full record (including concurrence and negativity) for a no-pair state.
pub fn record_no_pairs(n_s: f64, r: u32) -> Result<CorrelationRecord> {
    let block = rdm::two_site_qubit_no_pairs(n_s, r)?;
    let out = correlations::discord_cc_xstate(&block)?;
    Ok(CorrelationRecord {
        i: out.i,
        c: out.c,
        q: out.q,
        k: Some(concurrence(&block)?),
        negativity: negativity(&block)?,
        s_single: von_neumann_entropy(&rdm::one_site_rdm(n_s, 0.0)?)?,
        method: Method::AnalyticXstate,
    })
}

/// Full record for the pair-sector state (distance independent).
pub fn record_pairs_only(n_d: f64) -> Result<CorrelationRecord> {
    let block = rdm::two_site_qubit_pairs_only(n_d)?;
    let out = correlations::discord_cc_xstate(&block)?;
    Ok(CorrelationRecord {
        i: out.i,
        c: out.c,
        q: out.q,
        k: Some(concurrence(&block)?),
        negativity: negativity(&block)?,
        s_single: von_neumann_entropy(&rdm::one_site_rdm(0.0, n_d)?)?,
        method: Method::AnalyticXstate,
    })
}

/// Numeric record for a three-species point on the `mu = 0` line at filling
/// `n`, separation `r`. Returns the optimal basis for warm-starting the next
/// grid point.
pub fn record_three_species(
    u: f64,
    n: f64,
    r: u32,
    search: &SearchConfig,
    warm: Option<&MeasurementBasis>,
) -> Result<(CorrelationRecord, MeasurementBasis)> {
    let (n_s, n_d) = region2_densities(u, n)?;
    let rho = rdm::two_site_rdm(&TwoSiteParams::new(n_s, n_d, r)?)?;
    let out = minimize_conditional_entropy(&rho, search, warm)?;
    let record = CorrelationRecord {
        i: out.i,
        c: out.c,
        q: out.q,
        k: None,
        negativity: negativity(&rho)?,
        s_single: von_neumann_entropy(&rdm::one_site_rdm(n_s, n_d)?)?,
        method: Method::NumericQutrit,
    };
    Ok((record, out.basis))
}

/// Momentum-space record for an opposite-momentum mode pair.
pub fn record_kspace(a: f64) -> Result<CorrelationRecord> {
    let i = kspace_mutual_information(a);
    let q = discord_kspace(a)?;
    let rho = rdm::two_mode_rdm(a, true)?;
    Ok(CorrelationRecord {
        i,
        c: (i - q).max(0.0),
        q,
        k: None,
        negativity: negativity(&rho)?,
        s_single: kspace_single_mode_entropy(a),
        method: Method::Kspace,
    })
}

// ---------------------------------------------------------------------------
// scans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub region: PhaseLabel,
    pub axis: ScanAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub u: Option<f64>,
    pub mu: Option<f64>,
    pub n: Option<f64>,
    pub rs: Vec<u32>,
    pub search: SearchConfig,
    /// Skip the phase-membership validation of the range.
    pub allow_boundary_cross: bool,
}

impl ScanSpec {
    pub fn grid(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![start];
    }
    (0..points)
        .map(|k| start + (stop - start) * k as f64 / (points - 1) as f64)
        .collect()
}

/// Logarithmically spaced grid on `[start, stop]`, both positive.
pub fn logspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

const REGION_MARGIN: f64 = 1e-6;

fn require_region(u: f64, mu: f64, want: PhaseLabel) -> Result<()> {
    // boundary-exclusive membership with a small two-sided probe
    for probe_mu in [mu - REGION_MARGIN, mu, mu + REGION_MARGIN] {
        for probe_u in [u - REGION_MARGIN, u, u + REGION_MARGIN] {
            // the mu = 0 line is one-dimensional: probing off the line is
            // only meaningful for the two-dimensional phases
            let mu_used = if want == PhaseLabel::II || want == PhaseLabel::III {
                mu
            } else {
                probe_mu
            };
            let got = classify_phase(probe_u, mu_used)?;
            if got != want {
                return Err(Error::RegionMismatch(format!(
                    "(u, mu) = ({probe_u}, {mu_used}) classifies as {got}, expected {want}"
                )));
            }
        }
    }
    Ok(())
}

/// Run a sweep, producing one series per requested separation.
pub fn scan(spec: &ScanSpec) -> Result<Vec<ScanResult>> {
    if spec.points < 2 {
        return Err(Error::InvalidParameter(
            "a scan needs at least 2 grid points".into(),
        ));
    }
    if spec.start >= spec.stop || !spec.start.is_finite() || !spec.stop.is_finite() {
        return Err(Error::InvalidParameter(
            "scan range must be finite and strictly increasing".into(),
        ));
    }
    if spec.rs.is_empty() && spec.region != PhaseLabel::III && spec.axis != ScanAxis::R {
        return Err(Error::InvalidParameter(
            "at least one separation r is required".into(),
        ));
    }
    let grid = spec.grid();
    match (spec.region, spec.axis) {
        (PhaseLabel::I, ScanAxis::Mu) => {
            let u = spec
                .u
                .ok_or_else(|| Error::InvalidParameter("scan in phase I needs --u".into()))?;
            if !spec.allow_boundary_cross {
                for &m in [grid[0], grid[grid.len() / 2], grid[grid.len() - 1]].iter() {
                    require_region(u, m, PhaseLabel::I)?;
                }
            }
            let mut out = Vec::new();
            for &r in &spec.rs {
                let mut points = Vec::with_capacity(grid.len());
                for &mu in &grid {
                    let (n_s, _) = ground_state_densities(u, mu)?;
                    points.push(ScanPoint {
                        param: mu,
                        record: record_no_pairs(n_s, r)?,
                    });
                }
                out.push(ScanResult {
                    axis: spec.axis.name().to_string(),
                    r: Some(r),
                    fixed: vec![("u".into(), u)],
                    points,
                    derivatives: Vec::new(),
                    fits: Vec::new(),
                });
            }
            Ok(out)
        }
        (PhaseLabel::III, ScanAxis::Nd) => {
            if grid[0] <= 0.0 || grid[grid.len() - 1] > 1.0 {
                return Err(Error::RegionMismatch(format!(
                    "pair-density range ({}, {}) outside (0, 1)",
                    grid[0],
                    grid[grid.len() - 1]
                )));
            }
            let rs = if spec.rs.is_empty() {
                vec![1]
            } else {
                spec.rs.clone()
            };
            let mut out = Vec::new();
            for &r in &rs {
                let mut points = Vec::with_capacity(grid.len());
                for &n_d in &grid {
                    points.push(ScanPoint {
                        param: n_d,
                        record: record_pairs_only(n_d)?,
                    });
                }
                out.push(ScanResult {
                    axis: spec.axis.name().to_string(),
                    r: Some(r),
                    fixed: Vec::new(),
                    points,
                    derivatives: Vec::new(),
                    fits: Vec::new(),
                });
            }
            Ok(out)
        }
        (PhaseLabel::II, ScanAxis::U) => {
            let n = spec
                .n
                .ok_or_else(|| Error::InvalidParameter("scan in phase II needs --n".into()))?;
            if !spec.allow_boundary_cross {
                for &uu in [grid[0], grid[grid.len() - 1]].iter() {
                    region2_densities(uu, n).map_err(|_| {
                        Error::RegionMismatch(format!(
                            "u = {uu} at filling n = {n} is outside the three-species window"
                        ))
                    })?;
                }
            }
            let mut out = Vec::new();
            for &r in &spec.rs {
                let mut warm: Option<MeasurementBasis> = None;
                let mut points = Vec::with_capacity(grid.len());
                for (idx, &uu) in grid.iter().enumerate() {
                    let cfg = spec.search.with_stream(idx as u64);
                    let (record, basis) = record_three_species(uu, n, r, &cfg, warm.as_ref())?;
                    warm = Some(basis);
                    points.push(ScanPoint { param: uu, record });
                }
                out.push(ScanResult {
                    axis: spec.axis.name().to_string(),
                    r: Some(r),
                    fixed: vec![("n".into(), n)],
                    points,
                    derivatives: Vec::new(),
                    fits: Vec::new(),
                });
            }
            Ok(out)
        }
        (PhaseLabel::I, ScanAxis::R) => {
            let u = spec
                .u
                .ok_or_else(|| Error::InvalidParameter("distance scan needs --u".into()))?;
            let mu = spec
                .mu
                .ok_or_else(|| Error::InvalidParameter("distance scan needs --mu".into()))?;
            if !spec.allow_boundary_cross {
                require_region(u, mu, PhaseLabel::I)?;
            }
            let (n_s, _) = ground_state_densities(u, mu)?;
            let (r_lo, r_hi) = (spec.start.round() as i64, spec.stop.round() as i64);
            if r_lo < 1 || r_hi < r_lo {
                return Err(Error::InvalidParameter(format!(
                    "distance range [{r_lo}, {r_hi}] must cover integers >= 1"
                )));
            }
            let mut points = Vec::with_capacity((r_hi - r_lo + 1) as usize);
            for r in r_lo..=r_hi {
                points.push(ScanPoint {
                    param: r as f64,
                    record: record_no_pairs(n_s, r as u32)?,
                });
            }
            Ok(vec![ScanResult {
                axis: spec.axis.name().to_string(),
                r: None,
                fixed: vec![("u".into(), u), ("mu".into(), mu)],
                points,
                derivatives: Vec::new(),
                fits: Vec::new(),
            }])
        }
        (region, axis) => Err(Error::InvalidParameter(format!(
            "unsupported scan: region {region} along {}",
            axis.name()
        ))),
    }
}

/// Momentum-space sweep directly over the occupation parameter `a`.
pub fn scan_kspace_a(start: f64, stop: f64, points: usize) -> Result<ScanResult> {
    let grid = linspace(start, stop, points);
    let mut pts = Vec::with_capacity(grid.len());
    for &a in &grid {
        pts.push(ScanPoint {
            param: a,
            record: record_kspace(a)?,
        });
    }
    Ok(ScanResult {
        axis: "a".into(),
        r: None,
        fixed: Vec::new(),
        points: pts,
        derivatives: Vec::new(),
        fits: Vec::new(),
    })
}

/// Momentum-space sweep over `u` on the `mu = 0` line at fixed filling.
/// Outside the three-species window the pair sector empties and every
/// momentum-space correlation drops to zero.
pub fn scan_kspace_u(n: f64, u_start: f64, u_stop: f64, points: usize) -> Result<ScanResult> {
    let grid = linspace(u_start, u_stop, points);
    let mut pts = Vec::with_capacity(grid.len());
    for &u in &grid {
        let a = match region2_densities(u, n) {
            Ok((n_s, n_d)) if n_s < 1.0 => (1.0 - n_s - n_d) / (1.0 - n_s),
            _ => 1.0,
        };
        pts.push(ScanPoint {
            param: u,
            record: record_kspace(a)?,
        });
    }
    Ok(ScanResult {
        axis: "u".into(),
        r: None,
        fixed: vec![("n".into(), n)],
        points: pts,
        derivatives: Vec::new(),
        fits: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// derivatives and fits
// ---------------------------------------------------------------------------

/// Three-point central differences on a (possibly non-uniform) grid;
/// endpoints are omitted.
pub fn central_differences(xs: &[f64], ys: &[f64]) -> Result<Vec<(f64, f64)>> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch(
            "abscissa/ordinate length mismatch".into(),
        ));
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData(
            "derivatives need at least 3 points".into(),
        ));
    }
    let mut out = Vec::with_capacity(xs.len() - 2);
    for k in 1..xs.len() - 1 {
        let h0 = xs[k] - xs[k - 1];
        let h1 = xs[k + 1] - xs[k];
        if h0 <= 0.0 || h1 <= 0.0 {
            return Err(Error::InvalidParameter(
                "grid must be strictly increasing".into(),
            ));
        }
        let d = (ys[k + 1] * h0 * h0 - ys[k - 1] * h1 * h1 + ys[k] * (h1 * h1 - h0 * h0))
            / (h0 * h1 * (h0 + h1));
        out.push((xs[k], d));
    }
    Ok(out)
}

/// Annotate a scan with central-difference derivatives of `I`, `C`, `Q`.
pub fn numerical_derivative(scan: &ScanResult) -> Result<ScanResult> {
    let xs: Vec<f64> = scan.points.iter().map(|p| p.param).collect();
    let di = central_differences(
        &xs,
        &scan.points.iter().map(|p| p.record.i).collect::<Vec<_>>(),
    )?;
    let dc = central_differences(
        &xs,
        &scan.points.iter().map(|p| p.record.c).collect::<Vec<_>>(),
    )?;
    let dq = central_differences(
        &xs,
        &scan.points.iter().map(|p| p.record.q).collect::<Vec<_>>(),
    )?;
    let mut annotated = scan.clone();
    annotated.derivatives = di
        .iter()
        .zip(dc.iter())
        .zip(dq.iter())
        .map(|((a, b), c)| DerivativeRow {
            param: a.0,
            di: a.1,
            dc: b.1,
            dq: c.1,
        })
        .collect();
    Ok(annotated)
}

/// Fit the critical behavior of a derivative series near `lambda_c`.
///
/// `Algebraic` regresses `ln |d|` on `ln |lambda - lambda_c|` (slope =
/// exponent); `Logarithmic` regresses `d` on `ln |lambda - lambda_c|`.
/// Points with `|lambda - lambda_c|` outside `window` are ignored.
pub fn fit_divergence(
    derivatives: &[(f64, f64)],
    lambda_c: f64,
    model: FitModel,
    window: (f64, f64),
) -> Result<FitReport> {
    let mut pts = Vec::new();
    for &(lambda, d) in derivatives {
        let eps = (lambda - lambda_c).abs();
        if eps < window.0 || eps > window.1 || eps <= 0.0 {
            continue;
        }
        match model {
            FitModel::Algebraic => {
                if d.abs() > 0.0 {
                    pts.push((eps.ln(), d.abs().ln()));
                }
            }
            FitModel::Logarithmic => pts.push((eps.ln(), d)),
            FitModel::PowerLaw => {
                return Err(Error::InvalidParameter(
                    "power-law model applies to distance envelopes, not divergences".into(),
                ))
            }
        }
    }
    if pts.len() < 10 {
        return Err(Error::FitWindow(format!(
            "only {} points fall in |lambda - lambda_c| in [{}, {}]",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let n_points = pts.len();
    let (slope, intercept, r2) = linear_fit(&pts)?;
    Ok(FitReport {
        model,
        exponent_or_slope: slope,
        intercept,
        r_squared: r2,
        window,
        n_points,
    })
}

// ---------------------------------------------------------------------------
// decay envelopes and maxima scaling
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayReport {
    pub i: FitReport,
    pub q: FitReport,
    pub c: FitReport,
    /// Separations at which the discord envelope maxima were found.
    pub maxima_r: Vec<u32>,
}

fn power_law_fit(series: &[(u32, f64)], r_min: u32) -> Result<FitReport> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(r, v)| *r >= r_min && *v > 0.0)
        .map(|(r, v)| ((*r as f64).ln(), v.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs >= 4 envelope maxima, got {}",
            pts.len()
        )));
    }
    let n_points = pts.len();
    let (slope, intercept, r2) = linear_fit(&pts)?;
    Ok(FitReport {
        model: FitModel::PowerLaw,
        exponent_or_slope: slope,
        intercept,
        r_squared: r2,
        window: (
            r_min as f64,
            series.last().map(|p| p.0 as f64).unwrap_or(0.0),
        ),
        n_points,
    })
}

fn local_maxima(series: &[f64]) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..series.len().saturating_sub(1) {
        if series[k] > series[k - 1] && series[k] > series[k + 1] && series[k] > 1e-300 {
            out.push(k);
        }
    }
    out
}

/// Extract the distance-decay law of the envelope of `I`, `Q`, `C` maxima.
///
/// In the no-pair phase the measures oscillate with the hopping correlator;
/// the maxima over `r` are fitted to a power law. In the pair phase the
/// measures are distance independent and the slope is exactly zero.
pub fn decay_envelope(region: PhaseLabel, u: f64, param: f64, r_max: u32) -> Result<DecayReport> {
    if r_max < 16 {
        return Err(Error::InvalidParameter(
            "decay envelopes need r_max >= 16".into(),
        ));
    }
    match region {
        PhaseLabel::I => {
            let mu = param;
            require_region(u, mu, PhaseLabel::I)?;
            let (n_s, _) = ground_state_densities(u, mu)?;
            let mut iv = Vec::new();
            let mut qv = Vec::new();
            let mut cv = Vec::new();
            for r in 1..=r_max {
                let out = no_pairs_correlations(n_s, r)?;
                iv.push(out.i);
                qv.push(out.q);
                cv.push(out.c);
            }
            let envelope = |vals: &[f64]| -> Vec<(u32, f64)> {
                local_maxima(vals)
                    .into_iter()
                    .map(|k| ((k + 1) as u32, vals[k]))
                    .collect()
            };
            let (ei, eq, ec) = (envelope(&iv), envelope(&qv), envelope(&cv));
            if eq.len() < 4 {
                return Err(Error::InsufficientData(format!(
                    "only {} discord maxima up to r = {r_max}",
                    eq.len()
                )));
            }
            Ok(DecayReport {
                i: power_law_fit(&ei, 4)?,
                q: power_law_fit(&eq, 4)?,
                c: power_law_fit(&ec, 4)?,
                maxima_r: eq.iter().map(|p| p.0).collect(),
            })
        }
        PhaseLabel::III => {
            let n_d = param;
            let out = pairs_only_correlations(n_d);
            let flat = |v: f64| FitReport {
                model: FitModel::PowerLaw,
                exponent_or_slope: 0.0,
                intercept: if v > 0.0 { v.ln() } else { f64::NEG_INFINITY },
                r_squared: 1.0,
                window: (1.0, r_max as f64),
                n_points: r_max as usize,
            };
            Ok(DecayReport {
                i: flat(out.i),
                q: flat(out.q),
                c: flat(out.c),
                maxima_r: Vec::new(),
            })
        }
        other => Err(Error::RegionMismatch(format!(
            "decay envelopes are defined in phases I and III, not {other}"
        ))),
    }
}

/// Golden-section maximization of a unimodal function on `[a, b]`.
fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    (x, f(x))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MaximaPoint {
    pub r: u32,
    pub n_s_star_i: f64,
    pub i_max: f64,
    pub n_s_star_q: f64,
    pub q_max: f64,
    pub n_s_star_c: f64,
    pub c_max: f64,
}

/// Locate the global maximum over `n_s` of each measure at fixed separation
/// (coarse grid bracket followed by golden-section search to `1e-6`).
///
/// The no-pair measures are symmetric under `n_s <-> 1 - n_s`, so the
/// search runs on the `n_s >= 1/2` branch, the one approached when the
/// chemical potential drives the chain towards single occupation.
pub fn maxima_scaling(rs: &[u32]) -> Result<Vec<MaximaPoint>> {
    let mut out = Vec::with_capacity(rs.len());
    for &r in rs {
        if r < 4 {
            return Err(Error::InvalidParameter(
                "maxima scaling is meaningful for r >= 4".into(),
            ));
        }
        let argmax = |pick: fn(&XStateCorrelations) -> f64| -> (f64, f64) {
            let f = |n_s: f64| {
                no_pairs_correlations(n_s, r)
                    .map(|o| pick(&o))
                    .unwrap_or(f64::NEG_INFINITY)
            };
            let coarse = (16 * r).max(128) as usize;
            let mut best = (coarse / 2, f64::NEG_INFINITY);
            for k in coarse / 2..coarse {
                let n_s = k as f64 / coarse as f64;
                let v = f(n_s);
                if v > best.1 {
                    best = (k, v);
                }
            }
            let a = (best.0 as f64 - 1.0) / coarse as f64;
            let b = (best.0 as f64 + 1.0) / coarse as f64;
            golden_section_max(f, a.max(0.5), b.min(1.0 - 1e-9), 1e-6)
        };
        let (ni, vi) = argmax(|o| o.i);
        let (nq, vq) = argmax(|o| o.q);
        let (nc, vc) = argmax(|o| o.c);
        out.push(MaximaPoint {
            r,
            n_s_star_i: ni,
            i_max: vi,
            n_s_star_q: nq,
            q_max: vq,
            n_s_star_c: nc,
            c_max: vc,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// infinite-range decomposition
// ---------------------------------------------------------------------------

/// Infinite-distance limits `(I_inf, C_inf, Q_inf)` of the two-site measures
/// at densities `(n_s, n_d)`.
///
/// At infinite separation the two-site state factorizes up to the pair
/// coherence, so the limit mutual information is exactly twice the
/// pair-coherence order parameter and the classical part reduces to the
/// pair-sector expression at the background pair fraction `c`.
pub fn infinite_range_limit(n_s: f64, n_d: f64) -> Result<(f64, f64, f64)> {
    crate::phase::check_densities(n_s, n_d)?;
    let i_inf = 2.0 * odlro(n_s, n_d);
    if 1.0 - n_s < 1e-15 {
        return Ok((0.0, 0.0, 0.0));
    }
    let c = n_d / (1.0 - n_s);
    let c_inf = (1.0 - n_s) * (1.0 - n_s) * correlations::classical_correlations_pairs_only(c);
    Ok((i_inf, c_inf, (i_inf - c_inf).max(0.0)))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangeDecomposition {
    pub n_s: f64,
    pub n_d: f64,
    pub i_inf: f64,
    pub c_inf: f64,
    pub q_inf: f64,
    /// `(r, I_tilde, C_tilde, Q_tilde)`: finite-range parts at each separation.
    pub per_r: Vec<(u32, f64, f64, f64)>,
}

/// Split each two-site measure at a three-species point into its
/// finite-range part and the infinite-range contribution.
pub fn range_decomposition(
    u: f64,
    n: f64,
    rs: &[u32],
    search: &SearchConfig,
) -> Result<RangeDecomposition> {
    let (n_s, n_d) = region2_densities(u, n)?;
    let (i_inf, c_inf, q_inf) = infinite_range_limit(n_s, n_d)?;
    let mut per_r = Vec::with_capacity(rs.len());
    let mut warm: Option<MeasurementBasis> = None;
    for (idx, &r) in rs.iter().enumerate() {
        let cfg = search.with_stream(idx as u64);
        let (rec, basis) = record_three_species(u, n, r, &cfg, warm.as_ref())?;
        warm = Some(basis);
        per_r.push((r, rec.i - i_inf, rec.c - c_inf, rec.q - q_inf));
    }
    Ok(RangeDecomposition {
        n_s,
        n_d,
        i_inf,
        c_inf,
        q_inf,
        per_r,
    })
}

// ---------------------------------------------------------------------------
// monogamy
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonogamyFamily {
    Eta,
    Region1,
}

/// One-vs-rest discord against the summed pairwise discord.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MonogamyReport {
    pub family: MonogamyFamily,
    pub l: Option<u32>,
    pub n_d: Option<f64>,
    pub mu: Option<f64>,
    /// Discord between one site and the rest (pure state: the single-site entropy).
    pub q1: f64,
    pub q2_sum_lower: f64,
    pub q2_sum_upper: f64,
    pub r_lower: f64,
    pub r_upper: f64,
    pub violated: bool,
    /// Both tail bounds agree on the verdict.
    pub verdict_agrees: bool,
}

/// Monogamy ratio `R = Q_1 / ((L - 1) Q_2)` for the symmetric pair states.
pub fn monogamy_eta(l: u32, n_d: u32) -> Result<MonogamyReport> {
    if l < 3 {
        return Err(Error::InvalidParameter(format!(
            "monogamy needs at least 3 sites, got L = {l}"
        )));
    }
    if n_d == 0 || n_d >= l {
        return Err(Error::InvalidParameter(format!(
            "pair number N_d = {n_d} must lie in [1, L - 1] for a correlated state"
        )));
    }
    let q1 = binary_entropy_bits(n_d as f64 / l as f64);
    let rho2 = rdm::eta_pair_two_site_rdm(l, n_d)?;
    let q2 = correlations::discord_cc_xstate(&rho2)?.q;
    let sum = (l - 1) as f64 * q2;
    let r = q1 / sum;
    Ok(MonogamyReport {
        family: MonogamyFamily::Eta,
        l: Some(l),
        n_d: Some(n_d as f64 / l as f64),
        mu: None,
        q1,
        q2_sum_lower: sum,
        q2_sum_upper: sum,
        r_lower: r,
        r_upper: r,
        violated: r < 1.0,
        verdict_agrees: true,
    })
}

/// Monogamy ratio for the no-pair ground states: `Q_1 = S(rho_1)` against
/// the summed pairwise discord along the chain, with a tail bound from the
/// fitted inverse-square envelope.
pub fn monogamy_region1(mu: f64, u: f64, r_max: u32) -> Result<MonogamyReport> {
    if r_max < 100 {
        return Err(Error::InvalidParameter(
            "the chain sum needs r_max >= 100".into(),
        ));
    }
    if classify_phase(u, mu)? != PhaseLabel::I {
        return Err(Error::RegionMismatch(format!(
            "(u, mu) = ({u}, {mu}) is not in phase I"
        )));
    }
    let (n_s, _) = ground_state_densities(u, mu)?;
    let q1 = binary_entropy_bits(n_s);
    let mut sum = 0.0;
    let mut envelope_coeff = 0.0f64;
    for r in 1..=r_max {
        let q = no_pairs_correlations(n_s, r)?.q;
        sum += q;
        if r > r_max / 2 {
            envelope_coeff = envelope_coeff.max(q * (r as f64) * (r as f64));
        }
    }
    // sum_{r > r_max} B / r^2 <= B / r_max, with a 20% headroom on the
    // empirical envelope coefficient
    let tail = 1.2 * envelope_coeff / r_max as f64;
    let (lower, upper) = (sum, sum + tail);
    let r_upper = q1 / lower;
    let r_lower = q1 / upper;
    let violated_l = r_upper < 1.0;
    let violated_u = r_lower < 1.0;
    Ok(MonogamyReport {
        family: MonogamyFamily::Region1,
        l: None,
        n_d: None,
        mu: Some(mu),
        q1,
        q2_sum_lower: lower,
        q2_sum_upper: upper,
        r_lower,
        r_upper,
        violated: violated_l,
        verdict_agrees: violated_l == violated_u,
    })
}

/// Bisect for the chemical potential where the no-pair monogamy ratio
/// crosses 1 (uses the conservative lower tail bound consistently).
pub fn region1_monogamy_crossover(u: f64, lo: f64, hi: f64, r_max: u32) -> Result<f64> {
    let ratio = |mu: f64| -> Result<f64> { Ok(monogamy_region1(mu, u, r_max)?.r_upper) };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (ratio(a)? - 1.0, ratio(b)? - 1.0);
    if fa * fb > 0.0 {
        return Err(Error::InsufficientData(format!(
            "no crossover bracketed in [{lo}, {hi}] (R - 1: {fa:.3} / {fb:.3})"
        )));
    }
    let increasing_at_b = fb > 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        let fm = ratio(mid)? - 1.0;
        if (fm > 0.0) == increasing_at_b {
            b = mid;
        } else {
            a = mid;
        }
        if (b - a).abs() < 1e-10 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

// ---------------------------------------------------------------------------
// near-critical derivative windows
// ---------------------------------------------------------------------------

/// Derivative samples `(eps, dI, dC, dQ)` of the no-pair measures against
/// the chemical potential, at log-spaced distances `eps` from `mu_c`.
/// `approach` is the sign of `mu - mu_c` on the physical side.
pub fn region1_derivative_window(
    u: f64,
    mu_c: f64,
    approach: f64,
    r: u32,
    window: (f64, f64),
    n_pts: usize,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    let eps_grid = logspace(window.0, window.1, n_pts);
    let mut out = Vec::with_capacity(n_pts);
    for &eps in &eps_grid {
        let h = eps / 20.0;
        let eval = |mu: f64| -> Result<XStateCorrelations> {
            let (n_s, _) = ground_state_densities(u, mu)?;
            no_pairs_correlations(n_s, r)
        };
        let hi = eval(mu_c + approach * (eps + h))?;
        let lo = eval(mu_c + approach * (eps - h))?;
        let scale = 1.0 / (2.0 * h * approach);
        out.push((
            eps,
            (hi.i - lo.i) * scale,
            (hi.c - lo.c) * scale,
            (hi.q - lo.q) * scale,
        ));
    }
    Ok(out)
}

/// Derivative samples of the three-species measures against `u` at fixed
/// filling, warm-started from a full search at the grid point nearest the
/// critical coupling and refined point by point.
pub fn region2_derivative_window(
    n: f64,
    u_c: f64,
    approach: f64,
    r: u32,
    window: (f64, f64),
    n_pts: usize,
    search: &SearchConfig,
) -> Result<Vec<(f64, f64, f64, f64)>> {
    let eps_grid = logspace(window.0, window.1, n_pts);
    let state = |uu: f64| -> Result<DensityMatrix> {
        let (n_s, n_d) = region2_densities(uu, n)?;
        rdm::two_site_rdm(&TwoSiteParams::new(n_s, n_d, r)?)
    };
    // anchor the measurement basis next to the critical point
    let anchor = minimize_conditional_entropy(&state(u_c + approach * eps_grid[0])?, search, None)?;
    let mut basis = anchor.basis;
    let refine_cfg = SearchConfig {
        n_samples: 1,
        ..*search
    };
    let mut out = Vec::with_capacity(n_pts);
    for &eps in &eps_grid {
        let h = eps / 20.0;
        let mut vals = [(0.0, 0.0, 0.0); 2];
        for (slot, delta) in [(0usize, -h), (1usize, h)] {
            let uu = u_c + approach * (eps + delta);
            let refined = refine_conditional_entropy(&state(uu)?, &basis, &refine_cfg)?;
            vals[slot] = (refined.i, refined.c, refined.q);
            basis = refined.basis;
        }
        let scale = 1.0 / (2.0 * h * approach);
        out.push((
            eps,
            (vals[1].0 - vals[0].0) * scale,
            (vals[1].1 - vals[0].1) * scale,
            (vals[1].2 - vals[0].2) * scale,
        ));
    }
    Ok(out)
}
