//! Command-line front end: bifurcation thresholds, censuses, sequences,
//! phase portraits, Poincaré sections and brute-force self-checks.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 2 malformed input, 3 degenerate secular frequencies, 4 isotropic
//! quadratic form, 5 infeasible `sigma0`, 6 no feasible initial conditions.

mod io;
mod svg;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hopf_bif::quad::{self, QuadHopfHamiltonian};
use hopf_bif::scan::{self, ScanOptions};
use hopf_bif::sequence::{bifurcation_sequence, SweepOptions};
use hopf_bif::{
    hopf_to_section_plane, octupole_coefficients, octupole_to_quad, oracle, ConicClass,
    ContourOptions, Error, PoincareState, SectionOptions,
};

use io::{fmt_f64, Model};

/// A failure carrying its process exit code.
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn schema(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SecularFrequencyDegenerate { .. } => 3,
            Error::IsotropicDegenerate => 4,
            Error::InfeasibleSigma0 { .. } => 5,
            Error::NoFeasibleInitialConditions { .. } => 6,
            Error::InvalidParams(_) => 2,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(1, e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "hopfbif",
    about = "Bifurcation analysis of integrable secular three-body models on the Hopf sphere",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args)]
struct GlobalArgs {
    /// Integration / refinement tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Worker threads for parallel scans (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (where a choice exists).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Octupole normal-form coefficients from physical parameters, plus the
    /// diagonalised quadratic model.
    Coeffs {
        /// System-parameter JSON ({m0, m2, m3, a2, a3, G, AMD}).
        params_file: Option<PathBuf>,
        /// Read pre-rotation quadratic coefficients instead of parameters.
        #[arg(long, conflicts_with = "params_file")]
        from_coeffs: Option<PathBuf>,
    },
    /// Bifurcation values of sigma0 (analytic for quadratic models, swept
    /// numerically with --scan).
    Critical {
        model_file: PathBuf,
        /// Upper end of the sigma0 search range.
        #[arg(long, default_value_t = 0.02)]
        sigma0_max: f64,
        /// Force the numeric sweep (required for non-quadratic models).
        #[arg(long)]
        scan: bool,
        /// Bracket resolution of the numeric sweep.
        #[arg(long, default_value_t = 1e-7)]
        resolution: f64,
    },
    /// Critical-point census at one sigma0.
    Tangencies {
        model_file: PathBuf,
        #[arg(long)]
        sigma0: f64,
    },
    /// Bifurcation sequence over a sigma0 range.
    Sequence {
        model_file: PathBuf,
        /// Range as `low:high`.
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 1e-7)]
        resolution: f64,
        /// Coarse sweep steps.
        #[arg(long, default_value_t = 1024)]
        coarse: usize,
    },
    /// Phase portrait (level curves + critical-point markers) at one sigma0.
    Portrait {
        model_file: PathBuf,
        #[arg(long)]
        sigma0: f64,
        /// Comma-separated level energies, or `auto:N`.
        #[arg(long, default_value = "auto:9")]
        levels: String,
        /// Reject sigma0 above this bound (e.g. the AMD).
        #[arg(long)]
        sigma0_max: Option<f64>,
        /// Contour grid nodes per axis.
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Poincaré section of a full 2-DOF Hamiltonian at fixed energy.
    Section {
        poincare_model_file: PathBuf,
        #[arg(long)]
        energy: f64,
        /// Explicit initial condition `x2,y2,x3,y3` (repeatable).
        #[arg(long = "x0")]
        x0: Vec<String>,
        /// Seed initial conditions automatically on the sphere of this
        /// radius (used when no --x0 is given).
        #[arg(long)]
        sigma0: Option<f64>,
        /// Number of automatic seeds.
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        /// Integration time.
        #[arg(long, default_value_t = 1e5)]
        time: f64,
        /// Optional system parameters enforcing the mutual-inclination bound.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Self-check: brute-force oracles against the analytic machinery.
    Oracle {
        model_file: PathBuf,
        /// Comma-separated sigma0 values to audit.
        #[arg(long)]
        sigma0: String,
        /// Meridian samples for the scan oracle.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        // A failure here only means a pool already exists; scans then run on
        // the default pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(global: &GlobalArgs, payload: &str) -> Result<(), CliError> {
    match &global.out {
        Some(path) => std::fs::write(path, payload).map_err(CliError::from),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Coeffs { params_file, from_coeffs } => {
            cmd_coeffs(&cli.global, params_file.as_deref(), from_coeffs.as_deref())
        }
        Command::Critical { model_file, sigma0_max, scan, resolution } => {
            cmd_critical(&cli.global, model_file, *sigma0_max, *scan, *resolution)
        }
        Command::Tangencies { model_file, sigma0 } => {
            cmd_tangencies(&cli.global, model_file, *sigma0)
        }
        Command::Sequence { model_file, range, resolution, coarse } => {
            cmd_sequence(&cli.global, model_file, range, *resolution, *coarse)
        }
        Command::Portrait { model_file, sigma0, levels, sigma0_max, grid } => {
            cmd_portrait(&cli.global, model_file, *sigma0, levels, *sigma0_max, *grid)
        }
        Command::Section { poincare_model_file, energy, x0, sigma0, seeds, time, params } => {
            cmd_section(
                &cli.global,
                poincare_model_file,
                *energy,
                x0,
                *sigma0,
                *seeds,
                *time,
                params.as_deref(),
            )
        }
        Command::Oracle { model_file, sigma0, n } => cmd_oracle(&cli.global, model_file, sigma0, *n),
    }
}

fn cmd_coeffs(
    global: &GlobalArgs,
    params_file: Option<&std::path::Path>,
    from_coeffs: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let (octupole, quad_model) = match (params_file, from_coeffs) {
        (Some(p), None) => {
            let params = io::load_params(p)?;
            let oc = octupole_coefficients(&params)?;
            (Some(oc), octupole_to_quad(&oc))
        }
        (None, Some(c)) => match io::load_model(c)? {
            Model::Quad(q) => (None, q),
            Model::Poly(_) => {
                return Err(CliError::schema(
                    "--from-coeffs expects a quadratic coefficient file",
                ))
            }
        },
        _ => {
            return Err(CliError::schema(
                "coeffs needs a params file or --from-coeffs",
            ))
        }
    };
    let (rotated, rotation) = quad::rotate_to_diagonal(&quad_model)?;
    let payload = serde_json::json!({
        "octupole": octupole,
        "quad": quad_model,
        "rotated": rotated,
        "rotation": rotation,
        "conic_class": quad_model.conic_class(),
    });
    let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
    text.push('\n');
    emit(global, &text)
}

fn cmd_critical(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    sigma0_max: f64,
    force_scan: bool,
    resolution: f64,
) -> Result<(), CliError> {
    let model = io::load_model(model_file)?;
    let mut rows: Vec<(String, f64, f64, &str)> = Vec::new();
    let mut note = String::new();
    match (&model, force_scan) {
        (Model::Quad(q), false) => {
            let (rot, _) = quad::rotate_to_diagonal(q)?;
            note = match q.conic_class() {
                ConicClass::Ellipse => {
                    "# conic-class ellipse: a pitchfork pair in the window is stable (sign-definite Hessian)".into()
                }
                ConicClass::Hyperbola => {
                    "# conic-class hyperbola: a pitchfork pair in the window is unstable (indefinite Hessian)".into()
                }
                ConicClass::ParabolicDegenerate => "# conic-class parabolic-degenerate".into(),
            };
            let values = quad::bifurcation_values(&rot, sigma0_max)?;
            for s in &values.cpi_sigma0 {
                rows.push(("cpi".into(), *s, quad::f1(&rot, *s).abs(), "analytic"));
            }
            for s in &values.cpii_sigma0 {
                rows.push(("cpii".into(), *s, quad::f2(&rot, *s).abs(), "analytic"));
            }
        }
        (Model::Poly(_), false) => {
            return Err(CliError::new(
                1,
                "non-quadratic model: pass --scan for the numeric sweep",
            ));
        }
        _ => {
            let z = model.to_poly();
            let lo = sigma0_max / 1024.0;
            let seq =
                bifurcation_sequence(&z, lo, sigma0_max, resolution, &SweepOptions::default())?;
            for e in &seq.events {
                let (lo, hi) = e.sigma0_bracket;
                rows.push((format!("{}", e.kind), 0.5 * (lo + hi), hi - lo, "numeric"));
            }
        }
    }
    rows.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out = String::new();
    if !note.is_empty() {
        let _ = writeln!(out, "{note}");
    }
    let _ = writeln!(out, "kind,sigma0,residual,method");
    for (kind, sigma0, residual, method) in rows {
        let _ = writeln!(out, "{kind},{},{},{method}", fmt_f64(sigma0), fmt_f64(residual));
    }
    emit(global, &out)
}

const CENSUS_HEADER: &str = "sigma0,label,kind,tangency,stability,sigma1,sigma2,sigma3,energy";

fn census_rows(out: &mut String, sigma0: f64, points: &[(String, hopf_bif::CriticalPoint)]) {
    for (label, cp) in points {
        let tangency = cp
            .tangency
            .map(|t| format!("{t:?}").to_lowercase())
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{},{label},{},{tangency},{},{},{},{},{}",
            fmt_f64(sigma0),
            match cp.kind {
                hopf_bif::CpKind::Cpi => "cpi",
                hopf_bif::CpKind::Cpii => "cpii",
            },
            format!("{:?}", cp.stability).to_lowercase(),
            fmt_f64(cp.location.sigma1),
            fmt_f64(cp.location.sigma2),
            fmt_f64(cp.location.sigma3),
            fmt_f64(cp.energy),
        );
    }
}

fn cmd_tangencies(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    sigma0: f64,
) -> Result<(), CliError> {
    let z = io::load_model(model_file)?.to_poly();
    let opts = ScanOptions::default();
    let mut labelled: Vec<(String, hopf_bif::CriticalPoint)> = Vec::new();
    for (k, cp) in scan::find_cpi(&z, sigma0, &opts)?.into_iter().enumerate() {
        labelled.push((format!("cpi{}", k + 1), cp));
    }
    for (k, pair) in scan::find_cpii(&z, sigma0, &opts)?.into_iter().enumerate() {
        let [plus, minus] = pair.points();
        labelled.push((format!("f{}", 2 * k + 1), plus));
        labelled.push((format!("f{}", 2 * k + 2), minus));
    }
    let mut out = String::new();
    let _ = writeln!(out, "{CENSUS_HEADER}");
    census_rows(&mut out, sigma0, &labelled);
    emit(global, &out)
}

fn parse_range(range: &str) -> Result<(f64, f64), CliError> {
    let (lo, hi) = range
        .split_once(':')
        .ok_or_else(|| CliError::schema(format!("range must be low:high, got {range}")))?;
    let lo: f64 = lo
        .parse()
        .map_err(|e| CliError::schema(format!("bad range low: {e}")))?;
    let hi: f64 = hi
        .parse()
        .map_err(|e| CliError::schema(format!("bad range high: {e}")))?;
    Ok((lo, hi))
}

fn cmd_sequence(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    range: &str,
    resolution: f64,
    coarse: usize,
) -> Result<(), CliError> {
    let z = io::load_model(model_file)?.to_poly();
    let (lo, hi) = parse_range(range)?;
    let opts = SweepOptions { coarse_steps: coarse, ..SweepOptions::default() };
    let seq = bifurcation_sequence(&z, lo, hi, resolution, &opts)?;
    match global.format {
        Format::Json | Format::Svg => {
            let payload = serde_json::json!({ "events": seq.events });
            let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
            text.push('\n');
            emit(global, &text)
        }
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "{CENSUS_HEADER}");
            for census in &seq.census {
                let rows: Vec<(String, hopf_bif::CriticalPoint)> = census
                    .points
                    .iter()
                    .map(|p| (p.label.clone(), p.point.clone()))
                    .collect();
                census_rows(&mut out, census.sigma0, &rows);
            }
            emit(global, &out)
        }
    }
}

fn cmd_portrait(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    sigma0: f64,
    levels_arg: &str,
    sigma0_max: Option<f64>,
    grid: usize,
) -> Result<(), CliError> {
    // Rejects NaN along with non-positive radii.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(sigma0 > 0.0) {
        return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: f64::INFINITY }.into());
    }
    if let Some(max) = sigma0_max {
        if sigma0 > max {
            return Err(Error::InfeasibleSigma0 { sigma0, sigma0_max: max }.into());
        }
    }
    let z = io::load_model(model_file)?.to_poly();
    let levels: Vec<f64> = if let Some(rest) = levels_arg.strip_prefix("auto") {
        let count: usize = rest
            .strip_prefix(':')
            .map(|c| c.parse().map_err(|e| CliError::schema(format!("bad level count: {e}"))))
            .transpose()?
            .unwrap_or(9);
        hopf_bif::auto_levels(&z, sigma0, count)
    } else {
        levels_arg
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::schema(format!("bad level list: {e}")))?
    };
    let curves =
        hopf_bif::contour_portrait(&z, sigma0, &levels, &ContourOptions { grid, polish: true })?;
    let opts = ScanOptions::default();
    let mut markers = Vec::new();
    for cp in scan::find_cpi(&z, sigma0, &opts)? {
        if let Ok((x2, y2)) = hopf_to_section_plane(&cp.location) {
            markers.push((cp, x2, y2));
        }
    }
    for pair in scan::find_cpii(&z, sigma0, &opts)? {
        for cp in pair.points() {
            if let Ok((x2, y2)) = hopf_to_section_plane(&cp.location) {
                markers.push((cp, x2, y2));
            }
        }
    }
    match global.format {
        Format::Svg => emit(global, &svg::portrait_svg(sigma0, &levels, &curves, &markers)),
        Format::Json => {
            let payload =
                serde_json::json!({ "sigma0": sigma0, "levels": levels, "curves": curves });
            let mut text = serde_json::to_string_pretty(&payload).expect("serializable");
            text.push('\n');
            emit(global, &text)
        }
        Format::Csv => {
            let mut out = String::new();
            let _ = writeln!(out, "curve,level,closed,x2,y2");
            for (k, c) in curves.iter().enumerate() {
                for &(x, y) in &c.vertices {
                    let _ = writeln!(
                        out,
                        "{k},{},{},{},{}",
                        fmt_f64(c.level),
                        c.closed,
                        fmt_f64(x),
                        fmt_f64(y)
                    );
                }
            }
            emit(global, &out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_section(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    energy: f64,
    x0_args: &[String],
    sigma0: Option<f64>,
    seeds: usize,
    time: f64,
    params_file: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let h = io::load_poincare(model_file)?;
    let params = params_file.map(io::load_params).transpose()?;
    let mut starts: Vec<PoincareState> = Vec::new();
    if x0_args.is_empty() {
        let s0 = sigma0.ok_or_else(|| {
            CliError::schema("--sigma0 is required for automatic seeding (or pass --x0)")
        })?;
        starts = auto_seeds(&h, energy, s0, seeds);
        if starts.is_empty() {
            return Err(Error::NoFeasibleInitialConditions { energy }.into());
        }
    } else {
        for arg in x0_args {
            let parts: Vec<f64> = arg
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| CliError::schema(format!("bad --x0: {e}")))?;
            if parts.len() != 4 {
                return Err(CliError::schema("--x0 needs four components x2,y2,x3,y3"));
            }
            let p = PoincareState::new(parts[0], parts[1], parts[2], parts[3]);
            let actual = h.eval(&p);
            if (actual - energy).abs() > 1e-9 * energy.abs().max(actual.abs()).max(1e-300) {
                eprintln!(
                    "note: initial condition off the requested level: H(x0) = {} vs {}",
                    fmt_f64(actual),
                    fmt_f64(energy)
                );
            }
            starts.push(p);
        }
    }
    let opts = SectionOptions { tol: global.tol, params, ..SectionOptions::default() };
    let mut out = String::new();
    let _ = writeln!(out, "trajectory,t,x2,y2,x3,y3,energy");
    for (k, x0) in starts.iter().enumerate() {
        let energy0 = h.eval(x0);
        let points = hopf_bif::poincare_section(&h, x0, time, &opts)?;
        for p in &points {
            let _ = writeln!(
                out,
                "{k},{},{},{},{},{},{}",
                fmt_f64(p.t),
                fmt_f64(p.x2),
                fmt_f64(p.y2),
                fmt_f64(p.x3),
                fmt_f64(p.y3_residual),
                fmt_f64(energy0)
            );
        }
    }
    emit(global, &out)
}

/// Seed initial conditions on the `Y2 = Y3 = 0` slice of the sphere of
/// radius `sigma0`, where the energy equation reduces to one dimension.
fn auto_seeds(
    h: &hopf_bif::PoincarePolyHamiltonian,
    energy: f64,
    sigma0: f64,
    seeds: usize,
) -> Vec<PoincareState> {
    let r = (2.0 * sigma0).sqrt();
    let n = 512;
    let value = |x2: f64| -> f64 {
        let x3 = (2.0 * sigma0 - x2 * x2).max(0.0).sqrt();
        h.eval(&PoincareState::new(x2, 0.0, x3, 0.0)) - energy
    };
    let clampr = |x: f64| x.clamp(-r * (1.0 - 1e-9), r * (1.0 - 1e-9));
    let mut crossings = Vec::new();
    let mut prev_x = clampr(-r);
    let mut prev_v = value(prev_x);
    for i in 1..=n {
        let x = clampr(-r + 2.0 * r * i as f64 / n as f64);
        let v = value(x);
        if prev_v == 0.0 {
            crossings.push(prev_x);
        } else if v != 0.0 && v.signum() != prev_v.signum() {
            let (mut a, mut b, va) = (prev_x, x, prev_v);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if value(mid).signum() == va.signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            crossings.push(0.5 * (a + b));
        }
        prev_x = x;
        prev_v = v;
    }
    crossings.truncate(seeds);
    crossings
        .into_iter()
        .map(|x2| {
            let x3 = (2.0 * sigma0 - x2 * x2).max(0.0).sqrt();
            PoincareState::new(x2, 0.0, x3, 0.0)
        })
        .collect()
}

fn cmd_oracle(
    global: &GlobalArgs,
    model_file: &std::path::Path,
    sigma0_list: &str,
    n: usize,
) -> Result<(), CliError> {
    let model = io::load_model(model_file)?;
    let z = model.to_poly();
    let quad_model: Option<QuadHopfHamiltonian> = match &model {
        Model::Quad(q) => Some(quad::rotate_to_diagonal(q)?.0),
        Model::Poly(_) => None,
    };
    let sigma0s: Vec<f64> = sigma0_list
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| CliError::schema(format!("bad sigma0 list: {e}")))?;
    let opts = ScanOptions::default();
    let theta_tol = 2.0 * std::f64::consts::TAU / n as f64;
    let mut out = String::new();
    let mut discrepancies = String::new();
    let _ = writeln!(out, "sigma0,check,analytic,oracle,verdict");
    let _ = writeln!(discrepancies, "sigma0,check,detail");
    let mut all_ok = true;
    for &s0 in &sigma0s {
        let cpi = scan::find_cpi(&z, s0, &opts)?;
        let mut thetas: Vec<f64> = cpi.iter().map(|c| c.theta.unwrap()).collect();
        thetas.sort_by(f64::total_cmp);
        let scanned = oracle::grid_tangency_scan(&z, s0, n);
        let count_ok = scanned.len() == cpi.len();
        let _ = writeln!(
            out,
            "{},tangency-count,{},{},{}",
            fmt_f64(s0),
            cpi.len(),
            scanned.len(),
            if count_ok { "pass" } else { "FAIL" }
        );
        let mut pos_ok = count_ok;
        if count_ok {
            for (a, b) in scanned.iter().zip(&thetas) {
                if (a - b).abs() > theta_tol {
                    pos_ok = false;
                    let _ = writeln!(
                        discrepancies,
                        "{},tangency-position,oracle {} vs analytic {}",
                        fmt_f64(s0),
                        fmt_f64(*a),
                        fmt_f64(*b)
                    );
                }
            }
            let _ = writeln!(
                out,
                "{},tangency-position,-,-,{}",
                fmt_f64(s0),
                if pos_ok { "pass" } else { "FAIL" }
            );
        } else {
            let _ = writeln!(
                discrepancies,
                "{},tangency-count,oracle {} vs analytic {}",
                fmt_f64(s0),
                scanned.len(),
                cpi.len()
            );
        }
        all_ok &= pos_ok;
        if let Some(q) = &quad_model {
            let analytic = quad::cpi_quartic_roots(q, s0)?.roots.len();
            let brute = oracle::quartic_bruteforce(q, s0, 4096.max(n / 16));
            let quartic_ok = analytic == brute;
            let _ = writeln!(
                out,
                "{},quartic-count,{analytic},{brute},{}",
                fmt_f64(s0),
                if quartic_ok { "pass" } else { "FAIL" }
            );
            if !quartic_ok {
                let _ = writeln!(
                    discrepancies,
                    "{},quartic-count,brute {brute} vs analytic {analytic}",
                    fmt_f64(s0)
                );
            }
            all_ok &= quartic_ok;
        }
    }
    if let Some(path) = &global.out {
        std::fs::write(path, &discrepancies)?;
        print!("{out}");
    } else {
        print!("{out}");
        if !all_ok {
            eprint!("{discrepancies}");
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::new(1, "oracle disagreement (see discrepancy dump)"))
    }
}
