//! Command-line front end.
//!
//! Three subcommands: `fringe` scans the post-selected coincidence
//! probability over a θ grid, `sensitivity` runs the Δθ estimator on
//! such a scan, and `verify` replays the propagation through the
//! permanent oracle and compares every amplitude.
//!
//! Exit codes: 0 success (including degenerate-but-valid l = 0 runs),
//! 1 verification mismatch, 2 configuration or I/O error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{OccupationMap, OperatorPolynomial};
use crate::elements::{compose_interferometer, DoveAngle};
use crate::error::{Error, Result};
use crate::metrology::{ideal_noon_fringe, uncertainty_curve, PointFlag};
use crate::modes::{input_basis, output_basis, Arm, ModeId, OamSign};
use crate::oracle;
use crate::propagation::{
    four_photon_pattern, fringe_scan, linspace, propagate, two_photon_pattern, DetectionPattern,
    FringeSample,
};
use crate::source::{
    four_photon_terms, mixed_l_two_photon, two_photon_terms, OamDistribution,
};

/// Default output directory for relative `--output` paths.
pub const OUT_DIR_ENV: &str = "OAM_SIM_OUT_DIR";

const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "oam-sim",
    version,
    about = "Angular-displacement metrology with entangled OAM photons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the post-selected coincidence probability over θ
    Fringe(FringeArgs),
    /// Estimate the angular uncertainty Δθ(θ) from a fringe scan
    Sensitivity(ScanArgs),
    /// Cross-check propagation against the permanent oracle
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scheme {
    /// (1/√2)(s†₊i†₋ + s†₋i†₊), coincidence a₊·b₋
    TwoPhoton,
    /// Four-photon entangled state, coincidence a₊³·b₋
    FourPhoton,
    /// Idealized N-photon fringe cos²(Nlθ + φ₀)
    IdealNoon,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ScanArgs {
    /// Input state / measurement scheme
    #[arg(long, value_enum, default_value = "two-photon")]
    scheme: Scheme,

    /// OAM mode index magnitude (0 is accepted but insensitive)
    #[arg(long, default_value_t = 1)]
    l: u32,

    /// Photon number; required for --scheme ideal-noon
    #[arg(long)]
    n: Option<u32>,

    /// θ grid as start:end:steps (radians unless --degrees)
    #[arg(long, default_value = "0:3.141592653589793:361")]
    theta: String,

    /// Interpret the θ grid in degrees
    #[arg(long)]
    degrees: bool,

    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Output file; relative paths resolve against $OAM_SIM_OUT_DIR,
    /// default is stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FringeArgs {
    #[command(flatten)]
    scan: ScanArgs,

    /// Detection pattern override, e.g. "a+1=3,b-1=1"
    #[arg(long)]
    pattern: Option<String>,

    /// JSON file with OAM weights {"weights": {"1": 0.5, ...}}; the
    /// two-photon state becomes Σ√P_l s†₊i†₋ and --l selects the
    /// post-selected sector
    #[arg(long)]
    distribution: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check a single l instead of the default sweep over {1, 2, 3}
    #[arg(long)]
    l: Option<u32>,

    /// Restrict to the N-photon state (2 or 4); default checks both
    #[arg(long)]
    n: Option<u32>,

    /// Number of random θ samples per configuration
    #[arg(long, default_value_t = 100)]
    thetas: usize,

    /// RNG seed for the θ samples
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Add this offset to one oracle matrix entry (sensitivity test hook)
    #[arg(long, default_value_t = 0.0, hide = true)]
    perturb: f64,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version itself (exit 0), usage errors exit 2
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Fringe(args) => cmd_fringe(&args),
        Command::Sensitivity(args) => cmd_sensitivity(&args),
        Command::Verify(args) => cmd_verify(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_theta_grid(spec: &str, degrees: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, steps] = parts.as_slice() else {
        return Err(Error::InvalidGrid(format!(
            "expected start:end:steps, got {spec:?}"
        )));
    };
    let parse = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::InvalidGrid(format!("bad number {s:?} in θ grid")))
    };
    let mut start = parse(start)?;
    let mut end = parse(end)?;
    let steps: usize = steps
        .parse()
        .map_err(|_| Error::InvalidGrid(format!("bad step count in {spec:?}")))?;
    if degrees {
        start = start.to_radians();
        end = end.to_radians();
    }
    linspace(start, end, steps)
}

fn parse_pattern(spec: &str, default_l: u32) -> Result<DetectionPattern> {
    let mut counts = Vec::new();
    for part in spec.split(',') {
        let (mode, count) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidPattern(format!("expected mode=count, got {part:?}")))?;
        let count: u32 = count
            .parse()
            .map_err(|_| Error::InvalidPattern(format!("bad count in {part:?}")))?;
        counts.push((parse_mode(mode.trim(), default_l)?, count));
    }
    DetectionPattern::new(counts)
}

/// Mode syntax: arm letter (a/b), sign (+/-), optional l ("a+", "b-2").
fn parse_mode(spec: &str, default_l: u32) -> Result<ModeId> {
    let mut chars = spec.chars();
    let arm = match chars.next() {
        Some('a') => Arm::OutA,
        Some('b') => Arm::OutB,
        _ => {
            return Err(Error::InvalidPattern(format!(
                "mode {spec:?} must start with output arm a or b"
            )))
        }
    };
    let sign = match chars.next() {
        Some('+') => OamSign::PlusL,
        Some('-') => OamSign::MinusL,
        _ => return Err(Error::InvalidPattern(format!("mode {spec:?} needs a +/- sign"))),
    };
    let rest = chars.as_str();
    let l = if rest.is_empty() {
        default_l
    } else {
        rest.parse()
            .map_err(|_| Error::InvalidPattern(format!("bad l in mode {spec:?}")))?
    };
    Ok(ModeId::new(arm, sign, l))
}

/// 12 significant digits, the precision contract for all text output.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

fn write_text(output: Option<&Path>, text: &str) -> Result<i32> {
    match output {
        None => {
            print!("{text}");
            Ok(0)
        }
        Some(path) => {
            let resolved = match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            let mut file = fs::File::create(&resolved)?;
            file.write_all(text.as_bytes())?;
            Ok(0)
        }
    }
}

fn fringe_csv(samples: &[FringeSample]) -> String {
    let mut out = String::from("theta_rad,raw,normalized\n");
    for s in samples {
        let normalized = s.normalized.map(sig12).unwrap_or_else(|| "invalid".into());
        out.push_str(&format!("{},{},{}\n", sig12(s.theta), sig12(s.raw), normalized));
    }
    out
}

fn resolve_n(scheme: Scheme, n: Option<u32>) -> Result<u32> {
    let implied = match scheme {
        Scheme::TwoPhoton => Some(2),
        Scheme::FourPhoton => Some(4),
        Scheme::IdealNoon => None,
    };
    match (implied, n) {
        (Some(fixed), Some(given)) if fixed != given => Err(Error::InvalidPattern(format!(
            "--n {given} conflicts with the {fixed}-photon scheme"
        ))),
        (Some(fixed), _) => Ok(fixed),
        (None, Some(given)) if given >= 1 => Ok(given),
        _ => Err(Error::MissingPhotonNumber),
    }
}

fn warn_if_insensitive(l: u32) {
    if l == 0 {
        eprintln!("warning: insensitive configuration (l = 0): the fringe is constant in θ");
    }
}

fn build_state(args: &FringeArgs) -> Result<OperatorPolynomial> {
    if let Some(path) = &args.distribution {
        if args.scan.scheme != Scheme::TwoPhoton {
            return Err(Error::InvalidPattern(
                "--distribution applies only to --scheme two-photon".into(),
            ));
        }
        let text = fs::read_to_string(path)?;
        let dist: OamDistribution = serde_json::from_str(&text)?;
        return mixed_l_two_photon(&dist);
    }
    Ok(match args.scan.scheme {
        Scheme::TwoPhoton => two_photon_terms(args.scan.l),
        Scheme::FourPhoton => four_photon_terms(args.scan.l),
        Scheme::IdealNoon => unreachable!("ideal-noon has no propagated state"),
    })
}

fn scan_samples(args: &FringeArgs) -> Result<Vec<FringeSample>> {
    let grid = parse_theta_grid(&args.scan.theta, args.scan.degrees)?;
    if args.scan.scheme == Scheme::IdealNoon {
        let n = resolve_n(args.scan.scheme, args.scan.n)?;
        if args.scan.l == 0 {
            // cos²(φ₀): constant, kept so downstream tooling still gets rows
            let phase0 = if n % 4 == 0 { std::f64::consts::FRAC_PI_2 } else { 0.0 };
            let a = phase0.cos().powi(2);
            return Ok(grid
                .into_iter()
                .map(|theta| FringeSample { theta, raw: a, normalized: Some(a) })
                .collect());
        }
        return ideal_noon_fringe(n, args.scan.l, &grid);
    }
    resolve_n(args.scan.scheme, args.scan.n)?;
    let state = build_state(args)?;
    let pattern = match &args.pattern {
        Some(spec) => parse_pattern(spec, args.scan.l)?,
        None => match args.scan.scheme {
            Scheme::TwoPhoton => two_photon_pattern(args.scan.l),
            Scheme::FourPhoton => four_photon_pattern(args.scan.l),
            Scheme::IdealNoon => unreachable!(),
        },
    };
    fringe_scan(&state, &pattern, args.scan.l, &grid)
}

fn cmd_fringe(args: &FringeArgs) -> Result<i32> {
    warn_if_insensitive(args.scan.l);
    let samples = scan_samples(args)?;
    let text = match args.scan.format {
        Format::Csv => fringe_csv(&samples),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "samples": samples }))?;
            s.push('\n');
            s
        }
    };
    write_text(args.scan.output.as_deref(), &text)
}

fn sensitivity_csv(report: &crate::metrology::SensitivityReport) -> String {
    let mut out = String::from("theta_rad,fringe,dfringe,delta_theta,flag\n");
    for p in &report.samples {
        let flag = match p.flag {
            PointFlag::Ok => "ok",
            PointFlag::Singular => "singular",
            PointFlag::Endpoint => "endpoint",
        };
        let dt = p.delta_theta.map(sig12).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(p.theta),
            sig12(p.fringe),
            sig12(p.dfringe_dtheta),
            dt,
            flag
        ));
    }
    out
}

fn cmd_sensitivity(args: &ScanArgs) -> Result<i32> {
    warn_if_insensitive(args.l);
    let n = resolve_n(args.scheme, args.n)?;
    let fringe_args = FringeArgs {
        scan: ScanArgs {
            scheme: args.scheme,
            l: args.l,
            n: args.n,
            theta: args.theta.clone(),
            degrees: args.degrees,
            format: args.format,
            output: args.output.clone(),
        },
        pattern: None,
        distribution: None,
    };
    let samples = scan_samples(&fringe_args)?;
    let report = match uncertainty_curve(&samples, n, args.l) {
        Ok(report) => report,
        Err(Error::InsensitiveConfiguration) => {
            eprintln!("warning: insensitive configuration: no non-singular θ points");
            return Ok(0);
        }
        Err(e) => return Err(e),
    };
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
        Format::Csv => sensitivity_csv(&report),
    };
    write_text(args.output.as_deref(), &text)
}

/// Fock ket amplitudes of a state over the 4-mode input basis, in the
/// oracle's occupation-vector form.
fn ket_amplitudes(
    state: &OperatorPolynomial,
    l: u32,
) -> Result<Vec<([u32; 4], Complex64)>> {
    let basis = input_basis(l);
    let vector = state.apply_to_vacuum()?;
    vector
        .amplitudes()
        .map(|(pattern, &amp)| {
            let mut counts = [0u32; 4];
            for (mode, &count) in pattern {
                let slot = basis
                    .iter()
                    .position(|b| b == mode)
                    .ok_or_else(|| Error::InvalidPattern(format!("mode {mode} outside l={l} sector")))?;
                counts[slot] = count;
            }
            Ok((counts, amp))
        })
        .collect()
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    if let Some(n) = args.n {
        if n as usize > oracle::PHOTON_CAP as usize {
            return Err(Error::PhotonCapExceeded(n as usize, oracle::PHOTON_CAP as usize));
        }
        if n != 2 && n != 4 {
            return Err(Error::InvalidPattern(format!(
                "--n {n}: only the 2- and 4-photon states are simulated"
            )));
        }
    }
    if args.thetas == 0 {
        return Err(Error::InvalidGrid("--thetas must be positive".into()));
    }
    let ls: Vec<u32> = match args.l {
        Some(0) => return Err(Error::DegenerateOam(0)),
        Some(l) => vec![l],
        None => vec![1, 2, 3],
    };
    let ns: Vec<u32> = match args.n {
        Some(n) => vec![n],
        None => vec![2, 4],
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut max_deviation: f64 = 0.0;
    let mut failures = 0usize;
    for &l in &ls {
        let out_basis = output_basis(l);
        for &n in &ns {
            let state = if n == 2 { two_photon_terms(l) } else { four_photon_terms(l) };
            let kets = ket_amplitudes(&state, l)?;
            let patterns = oracle::output_patterns(n);
            for _ in 0..args.thetas {
                let theta = rng.gen_range(0.0..std::f64::consts::PI);
                let mut matrix = compose_interferometer(DoveAngle::new(theta, l)).entries;
                matrix[0][0] += Complex64::new(args.perturb, 0.0);

                let propagated = propagate(&state, DoveAngle::new(theta, l))?;
                let mut total = 0.0;
                for counts in &patterns {
                    let oracle_prob =
                        oracle::state_amplitude(&matrix, &kets, *counts)?.norm_sqr();
                    let occupation: OccupationMap = out_basis
                        .iter()
                        .zip(counts)
                        .filter(|(_, &c)| c > 0)
                        .map(|(&m, &c)| (m, c))
                        .collect();
                    let pipeline_prob = propagated.amplitude(&occupation).norm_sqr();
                    total += pipeline_prob;
                    let deviation = (oracle_prob - pipeline_prob).abs();
                    max_deviation = max_deviation.max(deviation);
                    if deviation > VERIFY_TOLERANCE {
                        failures += 1;
                        if failures <= 10 {
                            eprintln!(
                                "mismatch: l={l} n={n} theta={} pattern={counts:?}: oracle {} vs pipeline {}",
                                sig12(theta),
                                sig12(oracle_prob),
                                sig12(pipeline_prob)
                            );
                        }
                    }
                }
                // Σ over all patterns is the squared norm of the input
                let expected_total = state.apply_to_vacuum()?.norm_squared();
                if (total - expected_total).abs() > VERIFY_TOLERANCE {
                    failures += 1;
                    eprintln!(
                        "distribution mismatch: l={l} n={n} theta={}: total {} vs {}",
                        sig12(theta),
                        sig12(total),
                        sig12(expected_total)
                    );
                }
            }
        }
    }
    println!("max deviation: {}", sig12(max_deviation));
    if failures > 0 {
        eprintln!("verification FAILED: {failures} mismatches above {VERIFY_TOLERANCE:e}");
        Ok(1)
    } else {
        println!("verification passed");
        Ok(0)
    }
}
