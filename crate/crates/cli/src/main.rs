//! `shiftlab` — weighted-shift experiments, claim verification and data
//! export from the command line.
//!
//! Exit codes: 0 success (and claim pass), 1 claim failure, 2 configuration
//! or validation error, 3 numerical error raised during a run.

mod settings;

use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shiftlab_core::claims::{self, ClaimReport};
use shiftlab_core::continuum::{
    generator_apply, generator_consistency, group_residual, propagate, Grid, Profile,
    WeightFunction,
};
use shiftlab_core::fockspace::SparseVector;
use shiftlab_core::shiftop::{FamilyMember, WindowPolicy};
use shiftlab_core::spectral::{
    ljapunov_upper, membership, spectral_radius_estimate, trajectory, MembershipSet,
};
use shiftlab_core::weights::{TabulatedWeights, WeightSequence};

use settings::Settings;

/// Environment variable naming the directory relative `--out` paths resolve
/// against.
const OUT_DIR_ENV: &str = "SHIFTLAB_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, unreadable input: exit code 2.
    Config(String),
    /// A numerical error raised by the core while running: exit code 3.
    Numeric(shiftlab_core::Error),
    /// A claim verification ran fine and failed: exit code 1.
    ClaimFailed,
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            Self::ClaimFailed => 1,
            Self::Config(_) => 2,
            Self::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "configuration error: {msg}"),
            Self::Numeric(e) => write!(f, "numerical error: {e}"),
            Self::ClaimFailed => write!(f, "claim verification failed"),
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

#[derive(Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Bilateral weighted-shift dynamics: trajectories, Ljapunov indices, \
             spectral radii, membership verdicts, claim verification and the \
             continuous-time transport analogue."
)]
struct Cli {
    /// Flat `key = value` config file supplying defaults for unset flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format (default: csv for series, json for estimates/reports).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Output path; written to stdout when absent. Relative paths resolve
    /// against $SHIFTLAB_OUT_DIR when that is set.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Sample ln||T^N v|| for N = 1..horizon and emit `N,logNorm`.
    Trajectory(OrbitArgs),
    /// Ljapunov upper-index estimate from a growth trajectory.
    Ljapunov(OrbitArgs),
    /// Window-restricted spectral radius estimate ||T^N||^(1/N).
    Specradius(SpecRadiusArgs),
    /// Horizon-limited membership verdict for S0 / S / S+(a).
    Membership(MembershipArgs),
    /// Verify a quantitative claim and report pass/fail with measurements.
    Verify(VerifyArgs),
    /// Continuous-time transport analogue.
    #[command(subcommand)]
    Continuum(ContinuumCommand),
}

#[derive(Args)]
struct FamilyArgs {
    /// Weight family.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Family parameter c (krein: c > 0, geometric: c >= 1).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Two-column log-weight table (tabulated family).
    #[arg(long, value_name = "PATH")]
    table: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Krein,
    Geometric,
    Hybrid,
    Tabulated,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MemberArg {
    Shift,
    Inverse,
    Adjoint,
    Adjinv,
}

impl From<MemberArg> for FamilyMember {
    fn from(m: MemberArg) -> Self {
        match m {
            MemberArg::Shift => FamilyMember::Shift,
            MemberArg::Inverse => FamilyMember::Inverse,
            MemberArg::Adjoint => FamilyMember::Adjoint,
            MemberArg::Adjinv => FamilyMember::AdjointInverse,
        }
    }
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Operator family member.
    #[arg(long, value_enum)]
    member: Option<MemberArg>,
    /// Vector literal: comma-separated `index:coefficient` pairs.
    #[arg(long, allow_hyphen_values = true)]
    vector: Option<String>,
    /// Trajectory horizon (number of steps, >= 1).
    #[arg(long)]
    horizon: Option<i64>,
}

#[derive(Args)]
struct SpecRadiusArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    member: Option<MemberArg>,
    /// Power at which the Gelfand root is taken.
    #[arg(long)]
    nmax: Option<i64>,
    /// Explicit window `LO:HI` of base indices (default: family policy).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Args)]
struct MembershipArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    member: Option<MemberArg>,
    #[arg(long)]
    vector: Option<String>,
    /// Which stability set to test.
    #[arg(long, value_enum)]
    set: Option<SetArg>,
    /// Growth base for s-plus (a > 1).
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long)]
    horizon: Option<i64>,
    /// Refutation threshold in nats (default ln 10^6).
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetArg {
    S0,
    S,
    Splus,
}

#[derive(Args)]
struct VerifyArgs {
    /// Claim id: L2-1, R3-1, R3-2, L3-2, Th3-2 or Th2-1.
    claim: String,
    #[arg(long)]
    c: Option<f64>,
    /// Peak subsequence depth (L2-1).
    #[arg(long)]
    kmax: Option<u32>,
    /// One-step window `LO:HI` (L2-1).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Base-index range half-width (R3-1).
    #[arg(long)]
    nrange: Option<i64>,
    /// Max power (R3-1, R3-2, L3-2).
    #[arg(long)]
    nmax: Option<i64>,
    /// Harmonic truncation M (R3-2).
    #[arg(long, alias = "M")]
    m: Option<u32>,
    /// Orbit horizon (Th3-2, Th2-1).
    #[arg(long)]
    horizon: Option<i64>,
}

#[derive(Subcommand)]
enum ContinuumCommand {
    /// Apply the exact propagator and emit the transported profile.
    Propagate(ContinuumArgs),
    /// Apply the formal generator to a profile.
    Generator(ContinuumArgs),
    /// Check the two-parameter group property V(t) V(-tau) = V(t - tau).
    GroupCheck(ContinuumArgs),
    /// Check the finite-time quotient against the generator at h and h/2.
    GenCheck(ContinuumArgs),
}

#[derive(Args)]
struct ContinuumArgs {
    /// Weight case: a (oscillatory), b (symmetric decay), c (hybrid), uniform.
    #[arg(long = "case")]
    case: Option<String>,
    /// Propagation time.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Second time parameter for the group check.
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Quotient step for the generator check.
    #[arg(long)]
    h: Option<f64>,
    /// Input profile as CSV `x,value` (default: Gaussian on the grid).
    #[arg(long, value_name = "PATH")]
    profile: Option<PathBuf>,
    /// Grid left end.
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Grid right end.
    #[arg(long, allow_negative_numbers = true)]
    x1: Option<f64>,
    /// Grid step.
    #[arg(long)]
    step: Option<f64>,
    /// Emit this many equally spaced frames up to t (propagate only).
    #[arg(long)]
    frames: Option<u32>,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("shiftlab: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = Settings::load(cli.config.as_deref())?;
    let format = resolve_format(cli.format, &settings)?;
    let out = cli
        .out
        .or_else(|| settings.string("out").map(PathBuf::from));

    match cli.command {
        Command::Trajectory(args) => cmd_trajectory(args, &settings, format, out.as_deref()),
        Command::Ljapunov(args) => cmd_ljapunov(args, &settings, format, out.as_deref()),
        Command::Specradius(args) => cmd_specradius(args, &settings, format, out.as_deref()),
        Command::Membership(args) => cmd_membership(args, &settings, format, out.as_deref()),
        Command::Verify(args) => cmd_verify(args, &settings, format, out.as_deref()),
        Command::Continuum(sub) => cmd_continuum(sub, &settings, format, out.as_deref()),
    }
}

fn resolve_format(
    flag: Option<OutputFormat>,
    settings: &Settings,
) -> Result<Option<OutputFormat>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match settings.raw("format") {
        None => Ok(None),
        Some("csv") => Ok(Some(OutputFormat::Csv)),
        Some("json") => Ok(Some(OutputFormat::Json)),
        Some(other) => Err(config_err(format!(
            "config key format: unknown value {other:?}"
        ))),
    }
}

/// Writes `text` to `--out` (resolved against $SHIFTLAB_OUT_DIR when
/// relative) or to stdout.
fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let resolved = if path.is_relative() {
                match std::env::var_os(OUT_DIR_ENV) {
                    Some(dir) => PathBuf::from(dir).join(path),
                    None => path.to_path_buf(),
                }
            } else {
                path.to_path_buf()
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        config_err(format!("cannot create {}: {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(&resolved, text)
                .map_err(|e| config_err(format!("cannot write {}: {e}", resolved.display())))
        }
    }
}

fn resolve_family(args: &FamilyArgs, settings: &Settings) -> Result<WeightSequence, CliError> {
    let family = match args.family {
        Some(f) => f,
        None => match settings.raw("family") {
            Some("krein") => FamilyArg::Krein,
            Some("geometric") => FamilyArg::Geometric,
            Some("hybrid") => FamilyArg::Hybrid,
            Some("tabulated") => FamilyArg::Tabulated,
            Some(other) => return Err(config_err(format!("unknown family {other:?}"))),
            None => return Err(config_err("missing --family")),
        },
    };
    match family {
        FamilyArg::Krein => {
            let c = resolve_c(args, settings)?.unwrap_or(1.0);
            WeightSequence::krein_oscillatory(c).map_err(|e| config_err(e.to_string()))
        }
        FamilyArg::Geometric => {
            let c = resolve_c(args, settings)?.unwrap_or(1.0);
            WeightSequence::geometric_valley(c).map_err(|e| config_err(e.to_string()))
        }
        FamilyArg::Hybrid => Ok(WeightSequence::hybrid_decay_harmonic()),
        FamilyArg::Tabulated => {
            let path = args
                .table
                .clone()
                .or_else(|| settings.string("table").map(PathBuf::from))
                .ok_or_else(|| config_err("tabulated family needs --table"))?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            let table = TabulatedWeights::parse(&text).map_err(|e| config_err(e.to_string()))?;
            Ok(WeightSequence::tabulated(table))
        }
    }
}

fn resolve_c(args: &FamilyArgs, settings: &Settings) -> Result<Option<f64>, CliError> {
    match args.c {
        Some(c) => Ok(Some(c)),
        None => settings.f64("c"),
    }
}

fn resolve_member(arg: Option<MemberArg>, settings: &Settings) -> Result<FamilyMember, CliError> {
    if let Some(m) = arg {
        return Ok(m.into());
    }
    match settings.raw("member") {
        Some("shift") => Ok(FamilyMember::Shift),
        Some("inverse") => Ok(FamilyMember::Inverse),
        Some("adjoint") => Ok(FamilyMember::Adjoint),
        Some("adjinv") | Some("adjoint-inverse") => Ok(FamilyMember::AdjointInverse),
        Some(other) => Err(config_err(format!("unknown member {other:?}"))),
        None => Err(config_err("missing --member")),
    }
}

fn resolve_vector(arg: Option<&str>, settings: &Settings) -> Result<SparseVector, CliError> {
    let literal = match arg {
        Some(v) => v.to_string(),
        None => settings
            .string("vector")
            .ok_or_else(|| config_err("missing --vector"))?,
    };
    SparseVector::parse_literal(&literal).map_err(|e| config_err(e.to_string()))
}

fn resolve_horizon(arg: Option<i64>, settings: &Settings) -> Result<i64, CliError> {
    let horizon = match arg {
        Some(h) => h,
        None => settings.i64("horizon")?.unwrap_or(512),
    };
    if horizon < 1 {
        return Err(config_err(format!("horizon must be >= 1, got {horizon}")));
    }
    Ok(horizon)
}

fn parse_window(text: &str) -> Result<RangeInclusive<i64>, CliError> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| config_err(format!("window must be LO:HI, got {text:?}")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| config_err(format!("bad window bound {lo:?}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| config_err(format!("bad window bound {hi:?}")))?;
    if lo > hi {
        return Err(config_err(format!("empty window {lo}:{hi}")));
    }
    Ok(lo..=hi)
}

fn cmd_trajectory(
    args: OrbitArgs,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let seq = resolve_family(&args.family, settings)?;
    let member = resolve_member(args.member, settings)?;
    let vector = resolve_vector(args.vector.as_deref(), settings)?;
    let horizon = resolve_horizon(args.horizon, settings)?;
    let traj = trajectory(&seq, member, &vector, horizon).map_err(CliError::Numeric)?;
    let text = match format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => traj.to_csv(),
        OutputFormat::Json => to_json(&traj),
    };
    emit(&text, out)
}

fn cmd_ljapunov(
    args: OrbitArgs,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let seq = resolve_family(&args.family, settings)?;
    let member = resolve_member(args.member, settings)?;
    let vector = resolve_vector(args.vector.as_deref(), settings)?;
    let horizon = resolve_horizon(args.horizon, settings)?;
    let traj = trajectory(&seq, member, &vector, horizon).map_err(CliError::Numeric)?;
    let est = ljapunov_upper(&traj).map_err(CliError::Numeric)?;
    let text = match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(&est),
        OutputFormat::Csv => format!(
            "lambdaHat,achievedAt,regressionSlope,horizon\n{},{},{},{}\n",
            est.lambda_hat, est.achieved_at, est.regression_slope, est.horizon
        ),
    };
    emit(&text, out)
}

#[derive(Serialize)]
struct SpecRadiusReport {
    sequence: String,
    member: &'static str,
    nmax: i64,
    window: String,
    estimate: f64,
}

fn cmd_specradius(
    args: SpecRadiusArgs,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let seq = resolve_family(&args.family, settings)?;
    let member = resolve_member(args.member, settings)?;
    let nmax = match args.nmax {
        Some(n) => n,
        None => settings.i64("nmax")?.unwrap_or(64),
    };
    if nmax < 1 {
        return Err(config_err(format!("nmax must be >= 1, got {nmax}")));
    }
    let window_text = args.window.or_else(|| settings.string("window"));
    let policy = match &window_text {
        Some(w) => WindowPolicy::Explicit(parse_window(w)?),
        None => WindowPolicy::FamilyDefault,
    };
    let estimate =
        spectral_radius_estimate(&seq, member, nmax, &policy).map_err(CliError::Numeric)?;
    let resolved_window = policy
        .resolve(&seq, member, nmax)
        .map_err(CliError::Numeric)?;
    let report = SpecRadiusReport {
        sequence: seq.describe(),
        member: member.name(),
        nmax,
        window: format!("{}..={}", resolved_window.start(), resolved_window.end()),
        estimate,
    };
    let text = match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => format!(
            "sequence,member,nmax,window,estimate\n{},{},{},{},{}\n",
            report.sequence, report.member, report.nmax, report.window, report.estimate
        ),
    };
    emit(&text, out)
}

fn cmd_membership(
    args: MembershipArgs,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let seq = resolve_family(&args.family, settings)?;
    let member = resolve_member(args.member, settings)?;
    let vector = resolve_vector(args.vector.as_deref(), settings)?;
    let horizon = resolve_horizon(args.horizon, settings)?;
    let set = match args.set {
        Some(SetArg::S0) => MembershipSet::S0,
        Some(SetArg::S) => MembershipSet::S,
        Some(SetArg::Splus) => {
            let a = match args.a {
                Some(a) => a,
                None => settings
                    .f64("a")?
                    .ok_or_else(|| config_err("splus needs --a"))?,
            };
            if !a.is_finite() || a <= 1.0 {
                return Err(config_err(format!("splus needs a > 1, got {a}")));
            }
            MembershipSet::SPlus { a }
        }
        None => return Err(config_err("missing --set")),
    };
    let threshold = match args.threshold {
        Some(t) => t,
        None => settings
            .f64("threshold")?
            .unwrap_or_else(claims::default_threshold),
    };
    let verdict =
        membership(&seq, member, &vector, set, horizon, threshold).map_err(CliError::Numeric)?;
    let text = match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(&verdict),
        OutputFormat::Csv => {
            let mut s = format!(
                "set,decision,horizon,threshold\n{},{:?},{},{}\ncertificateN,certificateLogNorm\n",
                verdict.set.describe(),
                verdict.decision,
                verdict.horizon,
                verdict.threshold
            );
            for c in &verdict.certificate {
                s.push_str(&format!("{},{}\n", c.step, c.log_norm));
            }
            s
        }
    };
    emit(&text, out)
}

fn cmd_verify(
    args: VerifyArgs,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let c = match args.c {
        Some(c) => Some(c),
        None => settings.f64("c")?,
    };
    let window = match &args.window {
        Some(w) => Some(parse_window(w)?),
        None => match settings.string("window") {
            Some(w) => Some(parse_window(&w)?),
            None => None,
        },
    };
    let nmax = match args.nmax {
        Some(n) => Some(n),
        None => settings.i64("nmax")?,
    };
    let horizon = match args.horizon {
        Some(h) => Some(h),
        None => settings.i64("horizon")?,
    };

    let claim_id = args.claim.to_ascii_uppercase();
    let report: ClaimReport = match claim_id.as_str() {
        "L2-1" => claims::verify_l2_1(
            c.unwrap_or(1.0),
            args.kmax
                .map(Ok)
                .unwrap_or_else(|| settings.u32("kmax").map(|v| v.unwrap_or(3)))?,
            window.unwrap_or(-100_000..=100_000),
        ),
        "R3-1" => claims::verify_r3_1(
            c.unwrap_or(1.0),
            args.nrange
                .map(Ok)
                .unwrap_or_else(|| settings.i64("nrange").map(|v| v.unwrap_or(64)))?,
            nmax.unwrap_or(64),
        ),
        "R3-2" => claims::verify_r3_2(
            c.unwrap_or(1.0),
            args.m
                .map(Ok)
                .unwrap_or_else(|| settings.u32("m").map(|v| v.unwrap_or(4096)))?,
            nmax.unwrap_or(2048),
        ),
        "L3-2" => claims::verify_l3_2(nmax.unwrap_or(1000), window),
        "TH3-2" => claims::verify_th3_2_structure(horizon.unwrap_or(512)),
        "TH2-1" => claims::verify_th2_1_growth(c.unwrap_or(1.0), horizon.unwrap_or(511)),
        other => {
            return Err(config_err(format!(
                "unknown claim {other:?} (expected L2-1, R3-1, R3-2, L3-2, Th3-2 or Th2-1)"
            )))
        }
    }
    .map_err(CliError::Numeric)?;

    // Human table on stdout; JSON to --out, or appended when asked for.
    print!("{}", report.render_table());
    match (out, format) {
        (Some(path), _) => emit(&report.to_json(), Some(path))?,
        (None, Some(OutputFormat::Json)) => print!("{}", report.to_json()),
        _ => {}
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::ClaimFailed)
    }
}

#[derive(Serialize)]
struct ResidualReport {
    case: String,
    kind: &'static str,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_half: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

fn cmd_continuum(
    sub: ContinuumCommand,
    settings: &Settings,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    match sub {
        ContinuumCommand::Propagate(args) => {
            let (case, profile) = continuum_setup(&args, settings)?;
            let t = resolve_t(&args, settings)?;
            let frames = args.frames.unwrap_or(1).max(1);
            let mut text = String::from("t,x,value\n");
            for frame in 1..=frames {
                let tf = t * frame as f64 / frames as f64;
                let advanced = propagate(case, tf, &profile);
                for i in 0..advanced.len() {
                    if let Some(v) = advanced.value(i) {
                        text.push_str(&format!("{},{},{}\n", tf, advanced.grid.point(i), v));
                    }
                }
            }
            match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => emit(&text, out),
                OutputFormat::Json => {
                    let advanced = propagate(case, t, &profile);
                    let rows: Vec<(f64, f64)> = (0..advanced.len())
                        .filter_map(|i| advanced.value(i).map(|v| (advanced.grid.point(i), v)))
                        .collect();
                    emit(&to_json(&rows), out)
                }
            }
        }
        ContinuumCommand::Generator(args) => {
            let (case, profile) = continuum_setup(&args, settings)?;
            let generated = generator_apply(case, &profile, profile.grid.step);
            match format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => emit(&generated.to_csv(), out),
                OutputFormat::Json => {
                    let rows: Vec<(f64, f64)> = (0..generated.len())
                        .filter_map(|i| generated.value(i).map(|v| (generated.grid.point(i), v)))
                        .collect();
                    emit(&to_json(&rows), out)
                }
            }
        }
        ContinuumCommand::GroupCheck(args) => {
            let (case, profile) = continuum_setup(&args, settings)?;
            let t = resolve_t(&args, settings)?;
            let tau = match args.tau {
                Some(tau) => tau,
                None => settings.f64("tau")?.unwrap_or(0.5),
            };
            let residual = group_residual(case, t, tau, &profile).map_err(CliError::Numeric)?;
            let report = ResidualReport {
                case: case.case_name().into(),
                kind: "group-check",
                residual,
                residual_half: None,
                ratio: None,
            };
            emit_residual(&report, format, out)
        }
        ContinuumCommand::GenCheck(args) => {
            let (case, profile) = continuum_setup(&args, settings)?;
            let h = match args.h {
                Some(h) => h,
                None => settings.f64("h")?.unwrap_or(1e-3),
            };
            let residual = generator_consistency(case, &profile, h).map_err(CliError::Numeric)?;
            // Joint refinement: halve the quotient step and the grid step.
            let fine_grid = Grid::new(
                profile.grid.x0,
                profile.grid.step / 2.0,
                profile.grid.count * 2 - 1,
            )
            .map_err(CliError::Numeric)?;
            // The default Gaussian is regenerated analytically on the fine
            // grid; a loaded profile can only be resampled.
            let fine = if args.profile.is_some() {
                resample(&profile, fine_grid)
            } else {
                Profile::gaussian(fine_grid)
            };
            let residual_half =
                generator_consistency(case, &fine, h / 2.0).map_err(CliError::Numeric)?;
            let report = ResidualReport {
                case: case.case_name().into(),
                kind: "generator-check",
                residual,
                residual_half: Some(residual_half),
                ratio: Some(residual / residual_half),
            };
            emit_residual(&report, format, out)
        }
    }
}

fn emit_residual(
    report: &ResidualReport,
    format: Option<OutputFormat>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let text = match format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut s = String::from("case,kind,residual,residualHalf,ratio\n");
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                report.case,
                report.kind,
                report.residual,
                report
                    .residual_half
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                report.ratio.map(|v| v.to_string()).unwrap_or_default()
            ));
            s
        }
    };
    emit(&text, out)
}

fn continuum_setup(
    args: &ContinuumArgs,
    settings: &Settings,
) -> Result<(WeightFunction, Profile), CliError> {
    let case_name = args
        .case
        .clone()
        .or_else(|| settings.string("case"))
        .ok_or_else(|| config_err("missing --case"))?;
    let case = WeightFunction::from_case_name(&case_name).map_err(|e| config_err(e.to_string()))?;

    let profile = match &args.profile {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            Profile::parse_csv(&text).map_err(|e| config_err(e.to_string()))?
        }
        None => {
            let x0 = match args.x0 {
                Some(v) => v,
                None => settings.f64("x0")?.unwrap_or(-6.0),
            };
            let x1 = match args.x1 {
                Some(v) => v,
                None => settings.f64("x1")?.unwrap_or(6.0),
            };
            let step = match args.step {
                Some(v) => v,
                None => settings.f64("step")?.unwrap_or(1e-2),
            };
            if x1.partial_cmp(&x0) != Some(std::cmp::Ordering::Greater) {
                return Err(config_err(format!("need x1 > x0, got {x0}..{x1}")));
            }
            let count = ((x1 - x0) / step).round() as usize + 1;
            let grid = Grid::new(x0, step, count).map_err(|e| config_err(e.to_string()))?;
            Profile::gaussian(grid)
        }
    };
    Ok((case, profile))
}

fn resolve_t(args: &ContinuumArgs, settings: &Settings) -> Result<f64, CliError> {
    match args.t {
        Some(t) => Ok(t),
        None => Ok(settings.f64("t")?.unwrap_or(1.0)),
    }
}

/// Resamples a profile onto a finer grid by linear interpolation.
fn resample(p: &Profile, grid: Grid) -> Profile {
    Profile::from_fn(grid, |x| p.interpolate(x).unwrap_or(f64::NAN))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
