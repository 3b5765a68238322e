//! Command-line front end: reproducible data files for phase-diagram
//! tables, correlation scans, momentum-space sweeps, monogamy ratios and
//! the self-check suites.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage/config error,
//! 3 domain error (range outside the requested phase, invalid parameters).

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use bchubbard::analysis::{
    self, fit_divergence, linspace, monogamy_eta, monogamy_region1, scan, scan_kspace_a,
    scan_kspace_u, FitModel, MonogamyReport, ScanAxis, ScanResult, ScanSpec,
};
use bchubbard::measurement::SearchConfig;
use bchubbard::phase::{energy_density, model_point, odlro, PhaseLabel};
use bchubbard::verify::{suite_by_name, VerifyConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: f64,
    hi: f64,
}

fn parse_range(s: &str) -> Result<Range, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: f64 = a.parse().map_err(|_| format!("bad number '{a}'"))?;
    let hi: f64 = b.parse().map_err(|_| format!("bad number '{b}'"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(format!("range '{s}' must be finite with LO <= HI"));
    }
    Ok(Range { lo, hi })
}

#[derive(Debug, Clone, Copy)]
struct Grid {
    nu: usize,
    nmu: usize,
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parse_one = |t: &str| -> Result<usize, String> {
        let n: usize = t.parse().map_err(|_| format!("bad grid size '{t}'"))?;
        if n < 1 {
            return Err("grid needs at least 1 point per axis".into());
        }
        Ok(n)
    };
    match s.split_once('x') {
        Some((a, b)) => Ok(Grid {
            nu: parse_one(a)?,
            nmu: parse_one(b)?,
        }),
        None => {
            let n = parse_one(s)?;
            Ok(Grid { nu: n, nmu: n })
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "bchubbard",
    version,
    about = "Ground-state correlations of the bond-charge Hubbard chain: discord, classical correlations, entanglement, ODLRO and monogamy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for sampled measurement searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sampling budget of each three-level conditional-entropy search.
    #[arg(long, global = true, default_value_t = 20_000)]
    samples: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// TOML file mirroring the common flags (explicit flags win).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate phase labels, densities, energy and ODLRO over a (u, mu) grid.
    Phase {
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-6:6")]
        u_range: Range,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-4:4")]
        mu_range: Range,
        /// Grid as NxM (or a single N for a square grid).
        #[arg(long, value_parser = parse_grid, default_value = "41x41")]
        grid: Grid,
    },
    /// Sweep I, C, Q, K, N along a parameter axis inside one phase.
    Scan {
        /// Phase label: I, II or III.
        #[arg(long)]
        region: String,
        /// Swept parameter: mu (phase I), u (phase II), n_d (phase III).
        #[arg(long)]
        axis: String,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: Range,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Fixed on-site repulsion (phase I scans).
        #[arg(long, allow_hyphen_values = true)]
        u: Option<f64>,
        /// Fixed chemical potential (distance scans in phase I).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        /// Fixed filling (phase II scans).
        #[arg(long)]
        n: Option<f64>,
        /// Site separations, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r: Vec<u32>,
        /// Append central-difference derivative columns.
        #[arg(long)]
        derivatives: bool,
        /// Fit the derivative divergence around this critical value.
        #[arg(long, allow_hyphen_values = true)]
        fit: Option<f64>,
        /// Fit window as LO:HI distances from the critical value
        /// (defaults to the scan's own span).
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        fit_window: Option<Range>,
        /// Allow the range to touch or cross a phase boundary.
        #[arg(long)]
        allow_boundary_cross: bool,
    },
    /// Momentum-space correlations of opposite-momentum mode pairs.
    Kspace {
        /// Sweep the occupation parameter directly.
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        a_range: Option<Range>,
        /// Or sweep u on the mu = 0 line at this filling.
        #[arg(long)]
        n: Option<f64>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        u_range: Option<Range>,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Monogamy-ratio tables.
    Monogamy {
        /// eta (symmetric pair states) or region1 (no-pair chain).
        #[arg(long)]
        family: String,
        /// Largest chain length (eta family).
        #[arg(long, default_value_t = 60)]
        l_max: u32,
        /// Fixed pair number (eta family).
        #[arg(long)]
        nd: Option<u32>,
        /// Or a fixed pair fraction N_d = floor(frac * L) (eta family).
        #[arg(long)]
        nd_frac: Option<f64>,
        /// On-site repulsion (region1 family).
        #[arg(long, allow_hyphen_values = true, default_value_t = 4.0)]
        u: f64,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-0.45:-0.02")]
        mu_range: Range,
        #[arg(long, default_value_t = 40)]
        points: usize,
        /// Chain-sum cutoff (region1 family).
        #[arg(long, default_value_t = 2000)]
        r_max: u32,
    },
    /// Run a self-check suite and report one line per check.
    Verify {
        /// oracles | boundaries | exponents | monogamy | all
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Deserialize, Default)]
struct FileConfig {
    seed: Option<u64>,
    samples: Option<usize>,
    format: Option<String>,
}

enum AppError {
    Domain(bchubbard::Error),
    Usage(String),
}

impl From<bchubbard::Error> for AppError {
    fn from(e: bchubbard::Error) -> Self {
        AppError::Domain(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Usage(format!("io error: {e}"))
    }
}

fn main() {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli, &matches) {
        Ok(code) => std::process::exit(code),
        Err(AppError::Domain(e)) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

/// Apply config-file values wherever the matching flag kept its default.
fn apply_config(cli: &mut Cli, matches: &ArgMatches) -> Result<(), AppError> {
    let Some(path) = &cli.config else {
        return Ok(());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: FileConfig = toml::from_str(&text)
        .map_err(|e| AppError::Usage(format!("bad config {}: {e}", path.display())))?;
    let defaulted =
        |name: &str| matches.value_source(name) == Some(clap::parser::ValueSource::DefaultValue);
    if defaulted("seed") {
        if let Some(s) = file.seed {
            cli.seed = s;
        }
    }
    if defaulted("samples") {
        if let Some(s) = file.samples {
            cli.samples = s;
        }
    }
    if defaulted("format") {
        if let Some(f) = file.format {
            cli.format = match f.as_str() {
                "csv" => Format::Csv,
                "json" => Format::Json,
                other => {
                    return Err(AppError::Usage(format!(
                        "config format '{other}' is not csv|json"
                    )))
                }
            };
        }
    }
    Ok(())
}

fn run(mut cli: Cli, matches: &ArgMatches) -> Result<i32, AppError> {
    apply_config(&mut cli, matches)?;
    let mut sink = open_sink(&cli.out)?;
    let format = cli.format;
    match &cli.command {
        Command::Phase {
            u_range,
            mu_range,
            grid,
        } => {
            cmd_phase(&mut sink, format, *u_range, *mu_range, *grid)?;
            Ok(0)
        }
        Command::Scan {
            region,
            axis,
            range,
            points,
            u,
            mu,
            n,
            r,
            derivatives,
            fit,
            fit_window,
            allow_boundary_cross,
        } => {
            let region =
                PhaseLabel::from_str(region).map_err(|e| AppError::Usage(e.to_string()))?;
            let axis = match axis.to_ascii_lowercase().as_str() {
                "mu" => ScanAxis::Mu,
                "u" => ScanAxis::U,
                "n_d" | "nd" => ScanAxis::Nd,
                "r" => ScanAxis::R,
                other => return Err(AppError::Usage(format!("axis '{other}' is not mu|u|n_d"))),
            };
            let spec = ScanSpec {
                region,
                axis,
                start: range.lo,
                stop: range.hi,
                points: *points,
                u: *u,
                mu: *mu,
                n: *n,
                rs: r.clone(),
                search: SearchConfig {
                    n_samples: cli.samples,
                    seed: cli.seed,
                    ..SearchConfig::default()
                },
                allow_boundary_cross: *allow_boundary_cross,
            };
            let mut results = scan(&spec)?;
            if *derivatives || fit.is_some() {
                for series in &mut results {
                    *series = analysis::numerical_derivative(series)?;
                }
            }
            if let Some(lambda_c) = fit {
                annotate_fits(&mut results, *lambda_c, *fit_window)?;
            }
            write_scan(&mut sink, format, &results)?;
            Ok(0)
        }
        Command::Kspace {
            a_range,
            n,
            u_range,
            points,
        } => {
            let result = match (a_range, n, u_range) {
                (Some(range), None, None) => scan_kspace_a(range.lo, range.hi, *points)?,
                (None, Some(n), Some(range)) => scan_kspace_u(*n, range.lo, range.hi, *points)?,
                _ => {
                    return Err(AppError::Usage(
                        "kspace needs either --a-range, or --n with --u-range".into(),
                    ))
                }
            };
            write_scan(&mut sink, format, std::slice::from_ref(&result))?;
            Ok(0)
        }
        Command::Monogamy {
            family,
            l_max,
            nd,
            nd_frac,
            u,
            mu_range,
            points,
            r_max,
        } => {
            let reports = match family.as_str() {
                "eta" => {
                    let mut out = Vec::new();
                    for l in 3..=*l_max {
                        let n_d = match (nd, nd_frac) {
                            (Some(n_d), None) => *n_d,
                            (None, Some(frac)) => ((frac * l as f64).floor() as u32).max(1),
                            (None, None) => 1,
                            _ => {
                                return Err(AppError::Usage(
                                    "give at most one of --nd / --nd-frac".into(),
                                ))
                            }
                        };
                        if n_d >= l {
                            continue;
                        }
                        out.push(monogamy_eta(l, n_d)?);
                    }
                    out
                }
                "region1" => {
                    let mut out = Vec::new();
                    for mu in linspace(mu_range.lo, mu_range.hi, *points) {
                        out.push(monogamy_region1(mu, *u, *r_max)?);
                    }
                    out
                }
                other => {
                    return Err(AppError::Usage(format!(
                        "family '{other}' is not eta|region1"
                    )))
                }
            };
            write_monogamy(&mut sink, format, &reports)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                seed: cli.seed,
                search_samples: cli.samples,
                ..VerifyConfig::default()
            };
            let reports = suite_by_name(suite, &cfg).map_err(|e| AppError::Usage(e.to_string()))?;
            let all_passed = reports.iter().all(|r| r.passed);
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &reports)
                        .map_err(|e| AppError::Usage(format!("serialization: {e}")))?;
                    writeln!(sink)?;
                }
                Format::Csv => {
                    for r in &reports {
                        writeln!(sink, "{}", r.line())?;
                    }
                    writeln!(
                        sink,
                        "{}: {}/{} checks passed",
                        if all_passed { "OK" } else { "FAILED" },
                        reports.iter().filter(|r| r.passed).count(),
                        reports.len()
                    )?;
                }
            }
            sink.flush()?;
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, AppError> {
    Ok(match out {
        Some(path) => Box::new(std::io::BufWriter::new(fs::File::create(path).map_err(
            |e| AppError::Usage(format!("cannot create {}: {e}", path.display())),
        )?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    })
}

/// 17 significant digits: lossless f64 round-trip.
fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_phase(
    sink: &mut dyn Write,
    format: Format,
    u_range: Range,
    mu_range: Range,
    grid: Grid,
) -> Result<(), AppError> {
    #[derive(serde::Serialize)]
    struct PhaseRow {
        u: f64,
        mu: f64,
        phase: String,
        n_s: f64,
        n_d: f64,
        energy: f64,
        odlro: f64,
    }
    let mut rows = Vec::with_capacity(grid.nu * grid.nmu);
    for &u in &linspace(u_range.lo, u_range.hi, grid.nu) {
        for &mu in &linspace(mu_range.lo, mu_range.hi, grid.nmu) {
            let point = model_point(u, mu)?;
            rows.push(PhaseRow {
                u,
                mu,
                phase: point.phase.to_string(),
                n_s: point.n_s,
                n_d: point.n_d,
                energy: energy_density(point.n_s, point.n_d, u, mu)?,
                odlro: odlro(point.n_s, point.n_d),
            });
        }
    }
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *sink, &rows)
                .map_err(|e| AppError::Usage(format!("serialization: {e}")))?;
            writeln!(sink)?;
        }
        Format::Csv => {
            writeln!(sink, "u,mu,phase,n_s,n_d,energy,odlro")?;
            for r in &rows {
                writeln!(
                    sink,
                    "{},{},{},{},{},{},{}",
                    fmt_f(r.u),
                    fmt_f(r.mu),
                    r.phase,
                    fmt_f(r.n_s),
                    fmt_f(r.n_d),
                    fmt_f(r.energy),
                    fmt_f(r.odlro)
                )?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}

fn annotate_fits(
    results: &mut [ScanResult],
    lambda_c: f64,
    window: Option<Range>,
) -> Result<(), AppError> {
    for series in results {
        let eps_of = |p: f64| (p - lambda_c).abs();
        let window = match window {
            Some(w) => (w.lo, w.hi),
            None => {
                let mut lo = f64::INFINITY;
                let mut hi = 0.0f64;
                for d in &series.derivatives {
                    lo = lo.min(eps_of(d.param));
                    hi = hi.max(eps_of(d.param));
                }
                (lo, hi)
            }
        };
        type Pick = fn(&analysis::DerivativeRow) -> f64;
        let columns: [(&str, Pick); 3] = [("di", |d| d.di), ("dc", |d| d.dc), ("dq", |d| d.dq)];
        for (name, pick) in columns {
            let data: Vec<(f64, f64)> = series
                .derivatives
                .iter()
                .map(|d| (d.param, pick(d)))
                .collect();
            for model in [FitModel::Algebraic, FitModel::Logarithmic] {
                if let Ok(fit) = fit_divergence(&data, lambda_c, model, window) {
                    series
                        .fits
                        .push((format!("{name}_{model:?}").to_lowercase(), fit));
                }
            }
        }
    }
    Ok(())
}

fn write_scan(
    sink: &mut dyn Write,
    format: Format,
    results: &[ScanResult],
) -> Result<(), AppError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *sink, results)
                .map_err(|e| AppError::Usage(format!("serialization: {e}")))?;
            writeln!(sink)?;
        }
        Format::Csv => {
            writeln!(
                sink,
                "r,{axis},i_bits,c_bits,q_bits,concurrence,negativity,s_single_bits,method,di,dc,dq",
                axis = results.first().map(|s| s.axis.as_str()).unwrap_or("param")
            )?;
            for series in results {
                let deriv_at = |param: f64| {
                    series
                        .derivatives
                        .iter()
                        .find(|d| d.param == param)
                        .map(|d| (fmt_f(d.di), fmt_f(d.dc), fmt_f(d.dq)))
                        .unwrap_or_default()
                };
                for p in &series.points {
                    let (di, dc, dq) = deriv_at(p.param);
                    writeln!(
                        sink,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        series.r.map(|r| r.to_string()).unwrap_or_default(),
                        fmt_f(p.param),
                        fmt_f(p.record.i),
                        fmt_f(p.record.c),
                        fmt_f(p.record.q),
                        p.record.k.map(fmt_f).unwrap_or_default(),
                        fmt_f(p.record.negativity),
                        fmt_f(p.record.s_single),
                        serde_json::to_value(p.record.method)
                            .ok()
                            .and_then(|v| v.as_str().map(String::from))
                            .unwrap_or_default(),
                        di,
                        dc,
                        dq
                    )?;
                }
                for (name, fit) in &series.fits {
                    eprintln!(
                        "fit[r={:?}] {name}: slope/exponent {:.6}, r^2 {:.6}, window [{:.1e}, {:.1e}], {} points",
                        series.r, fit.exponent_or_slope, fit.r_squared, fit.window.0, fit.window.1, fit.n_points
                    );
                }
            }
        }
    }
    sink.flush()?;
    Ok(())
}

fn write_monogamy(
    sink: &mut dyn Write,
    format: Format,
    reports: &[MonogamyReport],
) -> Result<(), AppError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *sink, reports)
                .map_err(|e| AppError::Usage(format!("serialization: {e}")))?;
            writeln!(sink)?;
        }
        Format::Csv => {
            writeln!(
                sink,
                "family,l,n_d,mu,q1_bits,q2_sum_lower,q2_sum_upper,r_lower,r_upper,violated,verdict_agrees"
            )?;
            for r in reports {
                let mut line = String::new();
                let family = match r.family {
                    analysis::MonogamyFamily::Eta => "eta",
                    analysis::MonogamyFamily::Region1 => "region1",
                };
                write!(
                    line,
                    "{family},{},{},{},{},{},{},{},{},{},{}",
                    r.l.map(|l| l.to_string()).unwrap_or_default(),
                    r.n_d.map(fmt_f).unwrap_or_default(),
                    r.mu.map(fmt_f).unwrap_or_default(),
                    fmt_f(r.q1),
                    fmt_f(r.q2_sum_lower),
                    fmt_f(r.q2_sum_upper),
                    fmt_f(r.r_lower),
                    fmt_f(r.r_upper),
                    r.violated,
                    r.verdict_agrees
                )
                .expect("string write");
                writeln!(sink, "{line}")?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}
