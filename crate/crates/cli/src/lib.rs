//! The `cuspidal` command-line tool.
//!
//! Every command writes its results as CSV (plus an SVG for `slice`) into
//! the output directory, together with a `run_manifest.txt` recording the
//! geometry and every setting. Exit codes: 0 success, 1 usage or
//! configuration error, 2 certification incomplete.

pub mod args;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Parser;
use log::info;
use thiserror::Error;

use cuspidal::atlas::{count_profile, cusp_slice, direct_kinematics, singular_slice, ProfileOptions, SliceGrid};
use cuspidal::error::{AtlasError, GeometryError, ParseError};
use cuspidal::model::{build_cusp_system, inverse_kinematics, parse_geometry_config, Geometry, JointLengths, Pose};
use cuspidal::numeric::{format_rational, parse_rational, Rational};
use cuspidal::solver::SolverOptions;

use crate::args::{Cli, Command, GlobalArgs, InlineGeometry};

/// Share of excluded profile samples above which `profile` exits with 2.
pub const PROFILE_EXCLUDED_LIMIT: f64 = 0.05;
/// Share of failed grid nodes above which `slice` exits with 2.
pub const SLICE_FAILED_LIMIT: f64 = 0.01;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Incomplete,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Complete => 0,
            Outcome::Incomplete => 2,
        }
    }

    fn from_complete(complete: bool) -> Self {
        if complete {
            Outcome::Complete
        } else {
            Outcome::Incomplete
        }
    }
}

/// Everything a command needs besides its own arguments.
pub struct RunConfig {
    pub geometry: Geometry,
    pub geometry_source: String,
    pub out: PathBuf,
    pub solver: SolverOptions,
    manifest: String,
}

impl RunConfig {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.manifest, "{key} = {value}");
    }
}

fn parse_exact(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|_| CliError::Usage(format!("--{flag}: `{text}` is not a decimal number")))
}

fn nonnegative(flag: &str, text: &str) -> Result<Rational, CliError> {
    let v = parse_exact(flag, text)?;
    if v < Rational::from_integer(0.into()) {
        return Err(CliError::Usage(format!("--{flag} must be nonnegative, got {text}")));
    }
    Ok(v)
}

const BENCHMARK_VALUES: [(&str, &str); 6] = [
    ("A2x", "15.91"),
    ("A3x", "0"),
    ("A3y", "10"),
    ("d1", "17.04"),
    ("d2", "16.54"),
    ("d3", "20.84"),
];

fn inline_geometry(inline: &InlineGeometry) -> Result<Geometry, CliError> {
    let given = [
        &inline.a2x,
        &inline.a3x,
        &inline.a3y,
        &inline.d1,
        &inline.d2,
        &inline.d3,
    ];
    let mut text = String::new();
    for ((key, default), value) in BENCHMARK_VALUES.iter().zip(given) {
        let _ = writeln!(text, "{key} = {}", value.as_deref().unwrap_or(default));
    }
    if let Some(sign) = &inline.beta_sign {
        let _ = writeln!(text, "beta_sign = {sign}");
    }
    Ok(parse_geometry_config(&text)?)
}

fn load_geometry(global: &GlobalArgs) -> Result<(Geometry, String), CliError> {
    match &global.geometry {
        Some(path) => {
            if !global.inline.is_empty() {
                return Err(CliError::Usage("give either --geometry or inline geometry flags, not both".into()));
            }
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
            Ok((parse_geometry_config(&text)?, path.display().to_string()))
        }
        None if global.inline.is_empty() => Ok((Geometry::benchmark(), "benchmark".into())),
        None => Ok((inline_geometry(&global.inline)?, "inline flags".into())),
    }
}

fn prepare(global: &GlobalArgs, argv: &[String]) -> Result<RunConfig, CliError> {
    if !(global.min_width > 0.0 && global.min_width < 1.0) {
        return Err(CliError::Usage(format!("--min-width must lie in (0, 1), got {}", global.min_width)));
    }
    if global.max_depth == 0 {
        return Err(CliError::Usage("--max-depth must be positive".into()));
    }
    if global.threads == Some(0) {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    let (geometry, geometry_source) = load_geometry(global)?;
    fs::create_dir_all(&global.out).map_err(|e| CliError::Io(global.out.display().to_string(), e))?;
    let solver = SolverOptions {
        min_width: global.min_width,
        max_depth: global.max_depth,
        ..SolverOptions::default()
    };
    let mut cfg = RunConfig {
        geometry,
        geometry_source,
        out: global.out.clone(),
        solver,
        manifest: String::new(),
    };
    cfg.note("tool", concat!("cuspidal ", env!("CARGO_PKG_VERSION")));
    cfg.note("argv", argv.join(" "));
    cfg.note("geometry_source", cfg.geometry_source.clone());
    cfg.note(
        "threads",
        global.threads.map_or("all".to_string(), |t| t.to_string()),
    );
    cfg.note("min_width", global.min_width);
    cfg.note("max_depth", global.max_depth);
    cfg.note("max_boxes", cfg.solver.max_boxes);
    for line in cfg.geometry.to_config_string().lines().filter(|l| !l.starts_with('#')) {
        let (k, v) = line.split_once(" = ").expect("config line");
        cfg.note(&format!("geometry.{k}"), v);
    }
    if global.dump_config {
        output::write_text(&cfg.path("geometry.cfg"), &cfg.geometry.to_config_string())?;
    }
    if global.dump_system {
        let sys = build_cusp_system(&cfg.geometry);
        output::write_text(&cfg.path("system.txt"), &sys.dump("cusp system"))?;
    }
    Ok(cfg)
}

fn finish(cfg: &RunConfig, outcome: Outcome) -> Result<Outcome, CliError> {
    let mut manifest = cfg.manifest.clone();
    let _ = writeln!(manifest, "exit_code = {}", outcome.code());
    output::write_text(&cfg.path("run_manifest.txt"), &manifest)?;
    Ok(outcome)
}

fn display_value(r: &Rational) -> String {
    format_rational(r).replace('/', "_")
}

pub fn cmd_dk(cfg: &mut RunConfig, a: &args::DkArgs) -> Result<Outcome, CliError> {
    let lengths = JointLengths::new(nonnegative("r1", &a.r1)?, nonnegative("r2", &a.r2)?, nonnegative("r3", &a.r3)?);
    cfg.note("command", "dk");
    cfg.note("lengths", format!("{} {} {}", a.r1, a.r2, a.r3));
    let dk = direct_kinematics(&cfg.geometry, &lengths, &cfg.solver)?;
    info!(
        "dk: {} poses, {} unresolved boxes, {} boxes processed",
        dk.poses.len(),
        dk.report.unresolved.len(),
        dk.report.stats.boxes_processed
    );
    output::write_dk(&cfg.path("dk.csv"), &dk)?;
    cfg.note("poses", dk.poses.len());
    cfg.note("unresolved_boxes", dk.report.unresolved.len());
    let outcome = Outcome::from_complete(dk.is_complete());
    finish(cfg, outcome)
}

pub fn cmd_cusps(cfg: &mut RunConfig, a: &args::CuspsArgs) -> Result<Outcome, CliError> {
    let r1 = nonnegative("r1", &a.r1)?;
    cfg.note("command", "cusps");
    cfg.note("r1", format_rational(&r1));
    let slice = cusp_slice(&cfg.geometry, &r1, &cfg.solver)?;
    info!(
        "cusps: {} configurations, {} unresolved boxes, {:?}",
        slice.count(),
        slice.unresolved.len(),
        slice.report_stats.wall_time
    );
    let name = format!("cusps_r1={}.csv", display_value(&r1));
    output::write_cusps(&cfg.path(&name), &slice.cusps)?;
    cfg.note("cusps", slice.count());
    cfg.note("unresolved_boxes", slice.unresolved.len());
    let outcome = Outcome::from_complete(slice.is_complete());
    finish(cfg, outcome)
}

pub fn cmd_slice(cfg: &mut RunConfig, a: &args::SliceArgs) -> Result<Outcome, CliError> {
    let r1 = nonnegative("r1", &a.r1)?;
    if a.grid < 2 {
        return Err(CliError::Usage(format!("--grid must be at least 2, got {}", a.grid)));
    }
    if !(a.min >= 0.0 && a.min < a.max && a.max.is_finite()) {
        return Err(CliError::Usage(format!("need 0 <= --min < --max, got {} and {}", a.min, a.max)));
    }
    cfg.note("command", "slice");
    cfg.note("r1", format_rational(&r1));
    cfg.note("grid", a.grid);
    cfg.note("axes", format!("[{}, {}]", a.min, a.max));
    let grid = SliceGrid::square(a.grid, a.min, a.max);
    let slice = singular_slice(&cfg.geometry, &r1, &grid, &cfg.solver)?;
    let cusps = cusp_slice(&cfg.geometry, &r1, &cfg.solver)?;
    info!(
        "slice: {} polylines, {} of {} nodes failed, {} cusps",
        slice.polylines.len(),
        slice.failed_nodes(),
        slice.nodes.len(),
        cusps.count()
    );
    let stem = format!("slice_r1={}", display_value(&r1));
    output::write_polylines(&cfg.path(&format!("{stem}.csv")), &slice)?;
    output::write_text(&cfg.path(&format!("{stem}.svg")), &output::slice_svg(&slice, &cusps.cusps))?;
    output::write_cusps(&cfg.path(&format!("cusps_r1={}.csv", display_value(&r1))), &cusps.cusps)?;
    cfg.note("polylines", slice.polylines.len());
    cfg.note("failed_nodes", slice.failed_nodes());
    cfg.note("cusps", cusps.count());
    let outcome = Outcome::from_complete(slice.failed_fraction() <= SLICE_FAILED_LIMIT && cusps.is_complete());
    finish(cfg, outcome)
}

fn parse_range(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("--range expects `lo:hi`, got `{text}`"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(CliError::Usage(format!("--range needs 0 <= lo < hi, got `{text}`")));
    }
    Ok((lo, hi))
}

pub fn cmd_profile(cfg: &mut RunConfig, a: &args::ProfileArgs) -> Result<Outcome, CliError> {
    let range = parse_range(&a.range)?;
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(CliError::Usage(format!("--step must be positive, got {}", a.step)));
    }
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    cfg.note("command", "profile");
    cfg.note("range", &a.range);
    cfg.note("step", a.step);
    cfg.note("tol", a.tol);
    let opts = ProfileOptions {
        step: a.step,
        bracket_tol: a.tol,
        solver: cfg.solver.clone(),
    };
    let planned = cuspidal::atlas::sample_points(range, a.step).len();
    let profile = count_profile(&cfg.geometry, range, &opts)?;
    info!(
        "profile: {} breakpoints, {} of {} samples excluded",
        profile.breakpoints.len(),
        profile.excluded_samples.len(),
        planned
    );
    output::write_profile(&cfg.path("profile.csv"), &profile)?;
    output::write_breakpoints(&cfg.path("breakpoints.csv"), &profile)?;
    output::write_excluded(&cfg.path("excluded_samples.csv"), &profile)?;
    cfg.note("samples", planned);
    cfg.note("excluded_samples", profile.excluded_samples.len());
    cfg.note("breakpoints", profile.breakpoints.len());
    let outcome = Outcome::from_complete(profile.excluded_fraction(planned) <= PROFILE_EXCLUDED_LIMIT);
    finish(cfg, outcome)
}

pub fn cmd_ik(cfg: &mut RunConfig, a: &args::IkArgs) -> Result<Outcome, CliError> {
    let pose = match (a.alpha, a.tx, a.ty) {
        (Some(alpha), _, _) => Pose::from_angle(a.b1x, a.b1y, alpha.to_radians()),
        (None, Some(tx), Some(ty)) => Pose::new(a.b1x, a.b1y, tx, ty),
        _ => return Err(CliError::Usage("ik needs --alpha or both --tx and --ty".into())),
    };
    cfg.note("command", "ik");
    let lengths = inverse_kinematics(&cfg.geometry, &pose)?;
    println!("r1 = {}\nr2 = {}\nr3 = {}", lengths[0], lengths[1], lengths[2]);
    output::write_ik(&cfg.path("ik.csv"), &pose, lengths)?;
    finish(cfg, Outcome::Complete)
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Outcome, CliError> {
    let mut cfg = prepare(&cli.global, argv)?;
    match &cli.command {
        Command::Dk(a) => cmd_dk(&mut cfg, a),
        Command::Cusps(a) => cmd_cusps(&mut cfg, a),
        Command::Slice(a) => cmd_slice(&mut cfg, a),
        Command::Profile(a) => cmd_profile(&mut cfg, a),
        Command::Ik(a) => cmd_ik(&mut cfg, a),
    }
}

fn init_logging(verbose: bool) {
    let level = if verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Warn
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.global.verbose);
    let result = match cli.global.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &argv)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&cli, &argv),
    };
    match result {
        Ok(outcome) => {
            if outcome == Outcome::Incomplete {
                eprintln!("certification incomplete; see run_manifest.txt");
            }
            outcome.code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

