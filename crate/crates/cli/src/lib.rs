//! The `diskgroups` command line.
//!
//! Results go to stdout as one JSON object per run (tables as CSV, images as
//! PPM files). Exit status: 0 on success, 1 when a verification fails or a
//! computation cannot be completed, 2 on usage errors.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diskgroups::constructions::{
    interval_exchange_iterate, lcm_rotation_word, shrinking_translations, spiral_radius,
    theorem2_check, three_disk_demo, Report, CLOSED_FORMS,
};
use diskgroups::critical::{
    classify, estimate_rc, radius_table, table_csv, ClassifyOptions,
};
use diskgroups::exact::minpoly_check;
use diskgroups::orbit::{frontier_bfs, orbit_bfs, OrbitParams};
use diskgroups::render::{
    generator_invariance_violations, render_boundary, render_orbit, render_single_generator,
    write_ppm, BoundaryColoring, OrbitColoring, SingleColoring, Viewport,
};
use diskgroups::{Error, PlanePoint, Word};
use serde_json::{json, Map, Value};

pub use config::{load_config, parse_config, RunConfig};

pub const THREADS_ENV: &str = "DISKGROUPS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "diskgroups", version, about = "Two-disk compound symmetry groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Args)]
struct Common {
    /// `key=value` config file read before the flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Worker threads; falls back to DISKGROUPS_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Rotation order of both disks.
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    n1: Option<String>,
    #[arg(long, global = true)]
    n2: Option<String>,
    /// Radius of both disks.
    #[arg(long, global = true)]
    r: Option<String>,
    #[arg(long, global = true)]
    r1: Option<String>,
    #[arg(long, global = true)]
    r2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "X,Y")]
    center1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "X,Y")]
    center2: Option<String>,
    /// Maximum distinct orbit points per seed.
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Dedup grid cell size.
    #[arg(long, global = true)]
    quantum: Option<String>,
    /// Seed of the lens-point generator (decimal or 0x hex).
    #[arg(long, global = true)]
    rng_seed: Option<String>,
    #[arg(long, global = true)]
    lens_seeds: Option<String>,
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
    /// Image width in pixels.
    #[arg(long, global = true)]
    width: Option<String>,
    #[arg(long, global = true)]
    height: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "X,Y")]
    view_center: Option<String>,
    /// Viewport width in plane units.
    #[arg(long, global = true)]
    view_width: Option<String>,
}

impl Common {
    fn overrides(&self) -> [(&'static str, &Option<String>); 17] {
        // Shorthands first so that `--n1` and friends win over `--n`.
        [
            ("n", &self.n),
            ("r", &self.r),
            ("n1", &self.n1),
            ("n2", &self.n2),
            ("r1", &self.r1),
            ("r2", &self.r2),
            ("center1", &self.center1),
            ("center2", &self.center2),
            ("budget", &self.budget),
            ("quantum", &self.quantum),
            ("rng_seed", &self.rng_seed),
            ("lens_seeds", &self.lens_seeds),
            ("out", &self.out),
            ("width", &self.width),
            ("height", &self.height),
            ("view_center", &self.view_center),
            ("view_width", &self.view_width),
        ]
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orbit of one seed under the group.
    Orbit {
        /// Defaults to the upper intersection point of the circles.
        #[arg(long, allow_hyphen_values = true, value_name = "X,Y")]
        seed: Option<String>,
        /// Keep every point in memory instead of the last three levels.
        #[arg(long)]
        full: bool,
        /// Include the point list in the output.
        #[arg(long)]
        points: bool,
    },
    /// Finite / presumed-infinite verdict at the configured radii.
    Classify {
        /// Repeatable; defaults to the intersection point plus lens points.
        #[arg(long, allow_hyphen_values = true, value_name = "X,Y")]
        seed: Vec<String>,
    },
    /// Bisection for the critical radius of GG_n (uses `--n`).
    EstimateRc {
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, requires = "hi")]
        lo: Option<f64>,
        #[arg(long, requires = "lo")]
        hi: Option<f64>,
    },
    /// CSV of critical-radius estimates.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "5,7,8")]
        n_list: Vec<u32>,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Write a PPM image.
    Render {
        #[command(subcommand)]
        kind: RenderKind,
    },
    /// Exact and numerical checks of the constructions.
    Verify {
        #[command(subcommand)]
        what: VerifyKind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FractalColoring {
    Binary,
    Density,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegionColoring {
    Order,
    Size,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MapColoring {
    Density,
    Order,
}

#[derive(Debug, Subcommand)]
enum RenderKind {
    /// Orbit points of the seeds.
    Fractal {
        #[arg(long, allow_hyphen_values = true, value_name = "X,Y")]
        seed: Vec<String>,
        #[arg(long, value_enum, default_value_t = FractalColoring::Density)]
        coloring: FractalColoring,
        /// Check that completed levels are closed under every generator.
        #[arg(long)]
        check_invariance: bool,
    },
    /// Piece boundaries with their regions filled.
    Boundary {
        #[arg(long, default_value_t = 256)]
        segments: usize,
        #[arg(long, default_value_t = 1_000_000)]
        segment_budget: usize,
        #[arg(long, value_enum, default_value_t = RegionColoring::Size)]
        coloring: RegionColoring,
    },
    /// Iterates of a single word.
    SingleGen {
        /// For example `a b` or `a^2 b^-1`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value_t = 100_000)]
        iterations: u64,
        #[arg(long, allow_hyphen_values = true, value_name = "X,Y")]
        seed: Vec<String>,
        #[arg(long, value_enum, default_value_t = MapColoring::Density)]
        coloring: MapColoring,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyKind {
    /// Segment dynamics of GG_5 at r² = 3 + φ in exact arithmetic.
    Theorem2 {
        /// Interval-exchange iterations to run.
        #[arg(long, default_value_t = 100_000)]
        iterations: usize,
    },
    /// Shrinking translations and the lcm rotation of orders 3 and 5.
    Theorem1 {
        /// Orders whose translations are shrunk.
        #[arg(long, value_delimiter = ',', default_value = "5,7")]
        orders: Vec<u32>,
        #[arg(long, default_value_t = 1e-4)]
        epsilon: f64,
        /// Radius used for the translations.
        #[arg(long = "shrink-r", default_value_t = 4.0)]
        shrink_r: f64,
    },
    /// Closed-form critical radii against their minimal polynomials.
    Minpoly,
    /// Spiral radii for n = 8 and 12.
    Spiral,
    /// Incommensurable translations from three disks.
    ThreeDisk,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Usage(_) | Error::Parse { .. } | Error::AlwaysFinite { .. } | Error::Unsupported(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Failed(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Output, Failure>;

/// What a command produced: text for stdout and whether its checks passed.
struct Output {
    text: String,
    passed: bool,
}

impl Output {
    fn json(mut body: Map<String, Value>, cfg: &RunConfig, passed: bool) -> Self {
        body.insert("config".into(), json!(cfg));
        Self {
            text: Value::Object(body).to_string(),
            passed,
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", out.text);
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            eprintln!("run `diskgroups --help` for usage");
            2
        }
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn thread_count(flag: Option<usize>) -> std::result::Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{THREADS_ENV} must be a thread count, got `{v}`"))),
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Outcome {
    let mut cfg = match &cli.common.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    for (key, value) in cli.common.overrides() {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|m| Failure::Usage(format!("--{}: {m}", key.replace('_', "-"))))?;
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(cli.common.threads)? {
        if t == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| Failure::Failed(e.to_string()))?;
    pool.install(|| dispatch(cli.command, &cfg))
}

fn point(s: &str) -> std::result::Result<PlanePoint, Failure> {
    Ok(s.parse::<PlanePoint>()?)
}

fn points(list: &[String]) -> std::result::Result<Option<Vec<PlanePoint>>, Failure> {
    if list.is_empty() {
        return Ok(None);
    }
    list.iter().map(|s| point(s)).collect::<Result<Vec<_>, _>>().map(Some)
}

fn classify_options(cfg: &RunConfig) -> ClassifyOptions {
    ClassifyOptions {
        budget: cfg.budget,
        quantum: cfg.quantum,
        rng_seed: cfg.rng_seed,
        lens_seeds: cfg.lens_seeds,
    }
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Outcome {
    match cmd {
        Command::Orbit { seed, full, points } => {
            let sys = cfg.system()?;
            let seed = match seed {
                Some(s) => point(&s)?,
                None => sys.intersection_points().first().copied().unwrap_or(PlanePoint::ORIGIN),
            };
            let params = OrbitParams {
                budget: cfg.budget,
                quantum: cfg.quantum,
                emit_points: points,
                ..OrbitParams::default()
            };
            let res = if full {
                orbit_bfs(&sys, seed, &params)?
            } else {
                frontier_bfs(&sys, seed, &params)?
            };
            let mut body = object(json!(res));
            body.insert("seed".into(), json!(seed));
            body.insert("retention".into(), json!(if full { "Full" } else { "Frontier" }));
            Ok(Output::json(body, cfg, true))
        }
        Command::Classify { seed } => {
            let sys = cfg.system()?;
            let seeds = points(&seed)?;
            let c = classify(&sys, &classify_options(cfg), seeds.as_deref())?;
            Ok(Output::json(object(json!(c)), cfg, true))
        }
        Command::EstimateRc { tol, lo, hi } => {
            let bracket = lo.zip(hi);
            let est = estimate_rc(cfg.n1, &classify_options(cfg), tol, bracket)?;
            let mut body = object(json!(est));
            body.insert("estimate".into(), json!(est.estimate()));
            Ok(Output::json(body, cfg, true))
        }
        Command::Table { n_list, tol } => {
            let rows = radius_table(&n_list, &classify_options(cfg), tol)?;
            let csv = table_csv(&rows, cfg.budget, tol);
            match &cfg.out {
                Some(path) => {
                    fs::write(path, &csv).map_err(Error::from)?;
                    let mut body = Map::new();
                    body.insert("table".into(), json!(path));
                    body.insert("rows".into(), json!(rows));
                    Ok(Output::json(body, cfg, true))
                }
                None => Ok(Output {
                    text: csv.trim_end().to_string(),
                    passed: true,
                }),
            }
        }
        Command::Render { kind } => render(kind, cfg),
        Command::Verify { what } => verify(what, cfg),
    }
}

fn viewport(cfg: &RunConfig) -> std::result::Result<Viewport, Failure> {
    let sys = cfg.system()?;
    let default = Viewport::default_for(&sys, cfg.width, cfg.height)?;
    Ok(Viewport::new(
        cfg.view_center.unwrap_or(default.center),
        cfg.view_width.unwrap_or(default.width),
        cfg.width,
        cfg.height,
    )?)
}

fn render(kind: RenderKind, cfg: &RunConfig) -> Outcome {
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| Failure::Usage("render needs --out PATH (or `out=` in the config)".into()))?;
    let sys = cfg.system()?;
    let vp = viewport(cfg)?;
    let mut body = Map::new();
    body.insert("image".into(), json!(out));
    let mut passed = true;
    let image = match kind {
        RenderKind::Fractal {
            seed,
            coloring,
            check_invariance,
        } => {
            let seeds = match points(&seed)? {
                Some(s) => s,
                None => sys.intersection_points().into_iter().take(1).collect(),
            };
            let params = OrbitParams {
                budget: cfg.budget,
                quantum: cfg.quantum,
                emit_points: check_invariance,
                ..OrbitParams::default()
            };
            let coloring = match coloring {
                FractalColoring::Binary => OrbitColoring::Binary,
                FractalColoring::Density => OrbitColoring::HitDensity,
            };
            let r = render_orbit(&sys, &seeds, &params, &vp, coloring)?;
            body.insert("seeds".into(), json!(seeds));
            body.insert("orbits".into(), json!(r.summaries));
            if check_invariance {
                let mask = r.interior_mask();
                let pts = r.points.as_deref().unwrap_or_default();
                let violations = generator_invariance_violations(&sys, pts, &mask, cfg.quantum);
                body.insert(
                    "invariance".into(),
                    json!({
                        "checked_points": mask.iter().filter(|&&m| m).count(),
                        "violations": violations,
                    }),
                );
                passed = violations == 0;
            }
            r.image
        }
        RenderKind::Boundary {
            segments,
            segment_budget,
            coloring,
        } => {
            let coloring = match coloring {
                RegionColoring::Order => BoundaryColoring::OrbitOrder,
                RegionColoring::Size => BoundaryColoring::RegionSize,
            };
            let r = render_boundary(&sys, segments, segment_budget, &vp, coloring)?;
            body.insert("regions".into(), json!(r.regions));
            body.insert("interior_regions".into(), json!(r.interior_regions));
            body.insert("segments".into(), json!(r.segments));
            body.insert("partial".into(), json!(r.partial));
            r.image
        }
        RenderKind::SingleGen {
            word,
            iterations,
            seed,
            coloring,
        } => {
            let w: Word = word.parse()?;
            let seeds = points(&seed)?;
            let coloring = match coloring {
                MapColoring::Density => SingleColoring::Density,
                MapColoring::Order => SingleColoring::OrbitOrder,
            };
            let r = render_single_generator(&sys, &w, iterations, seeds.as_deref(), &vp, coloring, cfg.quantum)?;
            body.insert("word".into(), json!(w.to_string()));
            if !r.periods.is_empty() {
                let returned = r.periods.iter().filter(|p| p.is_some()).count();
                body.insert("seeds".into(), json!(r.periods.len()));
                body.insert("periodic_seeds".into(), json!(returned));
            }
            r.image
        }
    };
    write_ppm(&image, &out)?;
    body.insert("width".into(), json!(image.width));
    body.insert("height".into(), json!(image.height));
    Ok(Output::json(body, cfg, passed))
}

fn report_output(name: &str, report: &Report, mut body: Map<String, Value>, cfg: &RunConfig) -> Output {
    body.insert("verify".into(), json!(name));
    body.insert("passed".into(), json!(report.all_passed()));
    body.insert("checks".into(), json!(report.checks));
    Output::json(body, cfg, report.all_passed())
}

fn verify(what: VerifyKind, cfg: &RunConfig) -> Outcome {
    let mut report = Report::default();
    let mut body = Map::new();
    let name = match what {
        VerifyKind::Theorem2 { iterations } => {
            report = theorem2_check()?;
            match interval_exchange_iterate(iterations) {
                Ok(k) => report.push(
                    "interval_exchange",
                    k == iterations,
                    format!("{k} distinct points on E'E after {iterations} steps"),
                ),
                Err(e) => report.push("interval_exchange", false, e.to_string()),
            }
            "theorem2"
        }
        VerifyKind::Theorem1 {
            orders,
            epsilon,
            shrink_r,
        } => {
            let mut witnesses = Vec::new();
            for n in orders {
                match shrinking_translations(n, shrink_r, epsilon) {
                    Ok(w) => {
                        let err = w.stages.iter().map(|s| s.max_error).fold(0.0, f64::max);
                        report.push(
                            format!("shrink_n{n}"),
                            w.final_length < epsilon && err <= 1e-9,
                            format!(
                                "{} stages, final length {:.3e}, max prediction error {err:.1e}",
                                w.stages.len(),
                                w.final_length
                            ),
                        );
                        witnesses.push(json!({
                            "n": n,
                            "ratio": w.ratio,
                            "stages": w.stages.len(),
                            "final_length": w.final_length,
                            "max_error": err,
                        }));
                    }
                    Err(e @ (Error::Usage(_) | Error::AlwaysFinite { .. })) => return Err(e.into()),
                    Err(e) => report.push(format!("shrink_n{n}"), false, e.to_string()),
                }
            }
            body.insert("shrink".into(), json!(witnesses));
            match lcm_rotation_word(3, 5) {
                Ok(rot) => {
                    let target = -std::f64::consts::TAU / 15.0;
                    report.push(
                        "lcm_rotation_3_5",
                        (rot.angle - target).abs() <= 1e-9 && rot.max_residual <= 1e-9,
                        format!(
                            "alpha {}, angle {:.12}, residual {:.1e}",
                            rot.alpha, rot.angle, rot.max_residual
                        ),
                    );
                    body.insert("lcm_rotation".into(), json!(rot));
                }
                Err(e) => report.push("lcm_rotation_3_5", false, e.to_string()),
            }
            "theorem1"
        }
        VerifyKind::Minpoly => {
            for c in &CLOSED_FORMS {
                let exact = minpoly_check(&c.minpoly, &c.r_squared())?;
                let r = c.radius();
                let close = (r - c.numerical).abs() <= 5e-6;
                report.push(
                    format!("n{}", c.n),
                    exact && close,
                    format!(
                        "r^2 = {}, r = {r:.7}, numerical estimate {:.6}, minimal polynomial {}",
                        c.r_squared(),
                        c.numerical,
                        if exact { "holds" } else { "fails" }
                    ),
                );
            }
            "minpoly"
        }
        VerifyKind::Spiral => {
            for n in [8, 12] {
                match spiral_radius(n) {
                    Ok((r2, r)) => report.push(format!("spiral_n{n}"), true, format!("r^2 = {r2}, r = {r:.7}")),
                    Err(e) => report.push(format!("spiral_n{n}"), false, e.to_string()),
                }
            }
            "spiral"
        }
        VerifyKind::ThreeDisk => {
            match three_disk_demo() {
                Ok(d) => {
                    let want = (2.0, 2.0 * std::f64::consts::SQRT_2);
                    let ok = (d.lengths.0 - want.0).abs() <= 1e-12 && (d.lengths.1 - want.1).abs() <= 1e-12;
                    report.push(
                        "translation_lengths",
                        ok,
                        format!("{:.15}, {:.15} (ratio {:.15})", d.lengths.0, d.lengths.1, d.ratio),
                    );
                    body.insert("demo".into(), json!(d));
                }
                Err(e) => report.push("translation_lengths", false, e.to_string()),
            }
            "three-disk"
        }
    };
    Ok(report_output(name, &report, body, cfg))
}
