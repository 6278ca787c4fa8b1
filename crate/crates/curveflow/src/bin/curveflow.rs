//! Command-line front end: build translating solitons, run curvature-driven
//! flows, verify the soliton/critical-curve equivalence on sampled curves,
//! and render the lambda sweep of entropy-energy critical curves.

use clap::{Args, Parser, Subcommand};
use curveflow::energy::{
    energy_from_flow, first_integral, flow_from_energy, CurvatureEnergy, EnergyError, FlowMode,
    SolitonProblem,
};
use curveflow::flow::{evolve, fit_translation, Boundary, FlowConfig, FlowError};
use curveflow::geom::Vec2;
use curveflow::io::{
    read_curve_csv, write_curve_csv, write_curve_svg, write_json, ClosurePolicy, IoError,
};
use curveflow::quad::simpson;
use curveflow::soliton::{
    estimate_kappa_derivatives, fit_translation_direction, integrate_profile, reconstruct_curve,
    soliton_residual, SolitonError,
};

use curveflow::PlaneCurve;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_NO_SOLUTION: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_STABILITY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "curveflow",
    about = "Curvature-driven flows of planar curves and their translating solitons",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a translating soliton from flow constants and write it out.
    Soliton(SolitonArgs),
    /// Evolve a curve from CSV under a curvature-driven flow.
    Flow(FlowArgs),
    /// Check whether a sampled curve is a translating soliton for given
    /// flow constants, via its critical-curve characterization.
    Verify(VerifyArgs),
    /// Render the lambda sweep of entropy-energy critical curves as SVG.
    Figure1(Figure1Args),
}

#[derive(Args)]
struct ModeArgs {
    /// Curvature exponent p of the speed law (kappa^p + b)/a.
    #[arg(long, conflicts_with = "log", allow_negative_numbers = true)]
    p: Option<f64>,
    /// Use the logarithmic speed law (log kappa + b)/a instead of a power.
    #[arg(long)]
    log: bool,
}

impl ModeArgs {
    fn mode(&self) -> Result<FlowMode, String> {
        match (self.p, self.log) {
            (Some(p), false) => {
                if !p.is_finite() {
                    return Err(format!("--p must be finite, got {p}"));
                }
                Ok(FlowMode::Power(p))
            }
            (None, true) => Ok(FlowMode::Log),
            _ => Err("exactly one of --p <P> or --log is required".into()),
        }
    }
}

#[derive(Args)]
struct SolitonArgs {
    #[command(flatten)]
    mode: ModeArgs,
    /// Additive flow constant b.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b: f64,
    /// First-integral level d > 0 selecting the soliton in its family.
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Arc-length half-span to integrate on each side of the vertex.
    #[arg(long = "half-span", default_value_t = 8.0)]
    half_span: f64,
    /// Local error tolerance of the profile integrator.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output path for the curve CSV.
    #[arg(long = "out-csv")]
    out_csv: PathBuf,
    /// Output path for the metadata JSON.
    #[arg(long = "out-json")]
    out_json: PathBuf,
    /// Optional output path for an SVG rendering.
    #[arg(long = "out-svg")]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct FlowArgs {
    /// Input curve CSV (header `s,x,y,kappa`).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    mode: ModeArgs,
    /// Flow constant a (nonzero).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    /// Additive flow constant b.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b: f64,
    /// Evolution end time.
    #[arg(long = "t-end")]
    t_end: f64,
    /// Number of stored snapshots including t = 0.
    #[arg(long, default_value_t = 9)]
    snapshots: usize,
    /// Safety factor on the parabolic stability bound, in (0, 0.5].
    #[arg(long, default_value_t = 0.25)]
    cfl: f64,
    /// Fraction of samples excluded at each free end when fitting the
    /// translation.
    #[arg(long, default_value_t = 0.15)]
    margin: f64,
    /// Max/min edge ratio that triggers arc-length resampling.
    #[arg(long = "resample-threshold", default_value_t = 3.0)]
    resample_threshold: f64,
    /// Boundary policy: auto-detect closure, or force closed/free ends.
    #[arg(long, default_value = "auto", value_parser = ["auto", "closed", "free"])]
    boundary: String,
    /// Directory for the trajectory JSON and per-snapshot CSVs.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input curve CSV (header `s,x,y,kappa`).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    mode: ModeArgs,
    /// Additive flow constant b.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b: f64,
    /// Optional path for the JSON report (also printed to stdout).
    #[arg(long = "out-json")]
    out_json: Option<PathBuf>,
}

#[derive(Args)]
struct Figure1Args {
    /// Output directory for the four SVG panels.
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    /// Local error tolerance of the profile integrator.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Serialize)]
struct ResidualReport {
    soliton_residual_max: f64,
    el_residual_fd_max: f64,
    first_integral_drift: f64,
}

#[derive(Serialize)]
struct SolitonMetadata {
    mode: &'static str,
    p: Option<f64>,
    b: f64,
    a: f64,
    lambda: f64,
    d: f64,
    residuals: ResidualReport,
    half_span_requested: f64,
    half_span_achieved: [f64; 2],
    truncated: Option<String>,
    samples: usize,
}

#[derive(Serialize)]
struct FitReport {
    #[serde(rename = "V")]
    v: [f64; 2],
    shape_residual: f64,
    linearity_residual: f64,
}

#[derive(Serialize)]
struct TrajectoryReport {
    times: Vec<f64>,
    snapshots: Vec<String>,
    fit: FitReport,
}

#[derive(Serialize)]
struct VerifyReport {
    el_residual_max: f64,
    first_integral_drift: f64,
    d_estimate: f64,
    soliton_residual_max: f64,
    verdict: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Soliton(args) => cmd_soliton(args),
        Command::Flow(args) => cmd_flow(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Figure1(args) => cmd_figure1(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

impl From<IoError> for CmdError {
    fn from(e: IoError) -> Self {
        CmdError::new(1, e.to_string())
    }
}

impl From<EnergyError> for CmdError {
    fn from(e: EnergyError) -> Self {
        let code = match e {
            EnergyError::Domain { .. } => EXIT_DOMAIN,
            EnergyError::Degenerate(_) | EnergyError::NoSoliton(_) => EXIT_NO_SOLUTION,
        };
        CmdError::new(code, e.to_string())
    }
}

impl From<SolitonError> for CmdError {
    fn from(e: SolitonError) -> Self {
        match e {
            SolitonError::Energy(inner) => inner.into(),
            SolitonError::Stiffness { .. } => CmdError::new(EXIT_STABILITY, e.to_string()),
            SolitonError::DomainExit { .. }
            | SolitonError::SingularEndpoint { .. }
            | SolitonError::Curve(_) => CmdError::new(EXIT_DOMAIN, e.to_string()),
        }
    }
}

impl From<FlowError> for CmdError {
    fn from(e: FlowError) -> Self {
        let code = match &e {
            FlowError::StepTooLarge { .. } => EXIT_STABILITY,
            FlowError::Energy(EnergyError::Domain { .. }) => EXIT_DOMAIN,
            FlowError::Curve(_) => EXIT_DOMAIN,
            _ => 1,
        };
        CmdError::new(code, e.to_string())
    }
}

fn mode_error(msg: String) -> CmdError {
    CmdError::new(1, msg)
}

fn cmd_soliton(args: SolitonArgs) -> Result<(), CmdError> {
    let mode = args.mode.mode().map_err(mode_error)?;
    let seed = SolitonProblem::new(mode, 1.0, args.b, Vec2::new(0.0, 1.0))?;
    let energy = energy_from_flow(&seed);
    let problem = flow_from_energy(&energy, args.d)?;
    let profile = integrate_profile(&energy, args.d, args.half_span, args.tol)?;
    let curve = reconstruct_curve(&profile)?;
    let residual = soliton_residual(&curve, &problem)?;

    // independent finite-difference check of the Euler-Lagrange equation on
    // the integrated profile
    let (kappa_s, kappa_ss) = estimate_kappa_derivatives(&curve);
    let n = curve.len();
    let mut el_fd_max = 0.0f64;
    let margin = (n / 50).max(2);
    for i in margin..n - margin {
        let r = curveflow::el_residual(&energy, curve.kappas()[i], kappa_s[i], kappa_ss[i])?;
        el_fd_max = el_fd_max.max(r.abs());
    }

    let (neg, pos) = profile.achieved_span();
    let metadata = SolitonMetadata {
        mode: match mode {
            FlowMode::Power(_) => "power",
            FlowMode::Log => "log",
        },
        p: match mode {
            FlowMode::Power(p) => Some(p),
            FlowMode::Log => None,
        },
        b: args.b,
        a: problem.a,
        lambda: energy.lambda(),
        d: args.d,
        residuals: ResidualReport {
            soliton_residual_max: residual,
            el_residual_fd_max: el_fd_max,
            first_integral_drift: profile.drift_max,
        },
        half_span_requested: args.half_span,
        half_span_achieved: [neg, pos],
        truncated: profile.truncated.map(|t| format!("{t:?}")),
        samples: curve.len(),
    };
    write_curve_csv(&args.out_csv, &curve)?;
    write_json(&args.out_json, &metadata)?;
    if let Some(svg) = &args.out_svg {
        let desc = format!(
            "{} energy, lambda={}, d={}, b={}, a={}",
            energy.kind_name(),
            energy.lambda(),
            args.d,
            args.b,
            problem.a
        );
        write_curve_svg(svg, &curve, &desc)?;
    }
    println!(
        "soliton: {} samples, soliton_residual {:.3e}, first-integral drift {:.3e}",
        curve.len(),
        residual,
        profile.drift_max
    );
    Ok(())
}

fn cmd_flow(args: FlowArgs) -> Result<(), CmdError> {
    let mode = args.mode.mode().map_err(mode_error)?;
    let policy = match args.boundary.as_str() {
        "closed" => ClosurePolicy::Closed,
        "free" => ClosurePolicy::Open,
        _ => ClosurePolicy::Auto,
    };
    let initial = read_curve_csv(&args.input, policy)?;
    let problem = SolitonProblem::new(mode, args.a, args.b, Vec2::new(0.0, 1.0))?;
    let config = FlowConfig {
        problem,
        t_end: args.t_end,
        cfl: args.cfl,
        snapshots: args.snapshots,
        boundary: if initial.closed() {
            Boundary::Closed
        } else {
            Boundary::FreeEnds
        },
        resample_threshold: args.resample_threshold,
    };
    let trajectory = evolve(&initial, &config)?;
    let fit = fit_translation(&trajectory, args.margin)?;

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CmdError::new(1, format!("cannot create {}: {e}", args.out_dir.display())))?;
    let mut snapshot_paths = Vec::new();
    for (k, state) in trajectory.states.iter().enumerate() {
        let name = format!("snapshot_{k:03}.csv");
        write_curve_csv(&args.out_dir.join(&name), state)?;
        snapshot_paths.push(name);
    }
    let report = TrajectoryReport {
        times: trajectory.times.clone(),
        snapshots: snapshot_paths,
        fit: FitReport {
            v: [fit.v_est.x, fit.v_est.y],
            shape_residual: fit.shape_residual,
            linearity_residual: fit.linearity_residual,
        },
    };
    write_json(&args.out_dir.join("trajectory.json"), &report)?;

    let translating = fit.shape_residual < 1e-2;
    println!(
        "flow: {} snapshots to t={}, V_est=({:.6}, {:.6}), shape_residual {:.3e} -> {}",
        trajectory.states.len(),
        trajectory.times.last().unwrap(),
        fit.v_est.x,
        fit.v_est.y,
        fit.shape_residual,
        if translating {
            "translating"
        } else {
            "non-translating"
        }
    );
    if let Some(stop) = &trajectory.termination {
        println!("flow: terminated early: {stop:?}");
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CmdError> {
    let mode = args.mode.mode().map_err(mode_error)?;
    let input = read_curve_csv(&args.input, ClosurePolicy::Auto)?;
    // re-estimate geometry from the points alone; the kappa column is not
    // trusted for verification. Oversampled inputs are decimated by strided
    // selection (never interpolation, which would add sub-sample noise that
    // second differences amplify as 1/h^2); ~1200 samples sits in the flat
    // part of the noise/truncation trade-off.
    let mut points = input.points().to_vec();
    if points.len() > 1500 {
        let stride = (points.len() - 1).div_ceil(1200);
        let mut kept: Vec<_> = points.iter().copied().step_by(stride).collect();
        if kept.last() != points.last() {
            kept.push(*points.last().unwrap());
        }
        points = kept;
    }
    let mut curve = PlaneCurve::from_points(points, input.closed())
        .map_err(|e| CmdError::new(EXIT_DOMAIN, e.to_string()))?;
    let mut med: Vec<f64> = curve.kappas().to_vec();
    med.sort_by(f64::total_cmp);
    if med[med.len() / 2] < 0.0 {
        curve = curve.reversed();
    }

    let seed = SolitonProblem::new(mode, 1.0, args.b, Vec2::new(0.0, 1.0))?;
    let energy = energy_from_flow(&seed);

    let n = curve.len();
    let margin = (n / 20).max(3);
    let (kappa_s, kappa_ss) = estimate_kappa_derivatives(&curve);
    let mut el_max = 0.0f64;
    let mut fi_values = Vec::new();
    for i in margin..n - margin {
        let kappa = curve.kappas()[i];
        let el = curveflow::el_residual(&energy, kappa, kappa_s[i], kappa_ss[i])?;
        el_max = el_max.max(el.abs());
        fi_values.push(first_integral(&energy, kappa, kappa_s[i])?);
    }
    let mut sorted = fi_values.clone();
    sorted.sort_by(f64::total_cmp);
    let d_estimate = sorted[sorted.len() / 2];
    let drift = fi_values
        .iter()
        .map(|v| (v - d_estimate).abs())
        .fold(0.0, f64::max);

    // residual over the same estimable interior as the other statistics:
    // the two boundary samples carry copied curvature and one-sided
    // tangents by construction
    let soliton_residual_max = if d_estimate > 0.0 {
        let canonical = flow_from_energy(&energy, d_estimate)?;
        let direction = fit_translation_direction(&curve, &canonical)?;
        let problem = SolitonProblem::new(canonical.mode, canonical.a, canonical.b, direction)?;
        let mut worst = 0.0f64;
        for i in margin..n - margin {
            let lhs = problem.speed_law(curve.kappas()[i])? + problem.b;
            let rhs = problem.a * curve.normals()[i].dot(problem.direction);
            worst = worst.max((lhs - rhs).abs());
        }
        worst
    } else {
        f64::INFINITY
    };

    let verdict = if el_max < 1e-3 && soliton_residual_max < 1e-3 {
        "PASS"
    } else {
        "FAIL"
    };
    let report = VerifyReport {
        el_residual_max: el_max,
        first_integral_drift: drift,
        d_estimate,
        soliton_residual_max,
        verdict: verdict.into(),
    };
    let text = serde_json::to_string_pretty(&report).map_err(IoError::from)?;
    println!("{text}");
    if let Some(path) = &args.out_json {
        write_json(path, &report)?;
    }
    Ok(())
}

fn cmd_figure1(args: Figure1Args) -> Result<(), CmdError> {
    // lambda sweep of the p = 1 dictionary; the d defaults keep every
    // panel's curvature range strictly admissible
    let panels: [(f64, f64, f64); 4] = [
        (-0.5, 1.0, 9.0),
        (0.0, 1.0, 9.0),
        (1.0, 0.25, 12.0),
        (1.8, 1.0, 12.0),
    ];
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CmdError::new(1, format!("cannot create {}: {e}", args.out_dir.display())))?;
    for (lambda, d, half_span) in panels {
        let energy = CurvatureEnergy::Entropy { lambda };
        let profile = integrate_profile(&energy, d, half_span, args.tol)?;
        let curve = reconstruct_curve(&profile)?;
        let turning = simpson(curve.kappas(), profile.grid_step());
        let desc = format!(
            "entropy energy, lambda={lambda}, d={d}, half_span={half_span}, b={}, total_turning={turning:.6}",
            -lambda
        );
        let name = format!("figure1_lambda_{lambda}.svg");
        write_curve_svg(&args.out_dir.join(name), &curve, &desc)?;
    }
    println!("figure1: wrote 4 panels to {}", args.out_dir.display());
    Ok(())
}
