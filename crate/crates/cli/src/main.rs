#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! zdl: command-line front end for the divisor-problem / zeta
//! mean-square laboratory.
//!
//! Every command validates its parameters, builds or loads the caches it
//! needs (divisor table, zeta sample grid), runs one module operation,
//! and writes a report to stdout or a file. Exit codes: 0 success, 2
//! validation error, 3 acceptance-check failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use zdl_core::divisor::{delta, delta_star_alternating, delta_star_combination};
use zdl_core::explicit::{atkinson_e, voronoi_delta, voronoi_delta_star, AtkinsonParams};
use zdl_core::moments::{
    estimate_moment_windowed, geometric_samples, verify_moment_suite, MomentContext,
    MomentQuantity, MomentSuiteConfig,
};
use zdl_core::quadruples::{count_quadruples, DEFAULT_RATIO_BOUND};
use zdl_core::report;
use zdl_core::short_interval::{
    dyadic_classes, fourth_power_sum, twelfth_moment, PointSystem,
    DEFAULT_RATIO_BOUND as T2_RATIO_BOUND,
};
use zdl_core::smoothing::{check_delta_star_smoothing, check_e_sandwich};
use zdl_core::zeta::{e_quadrature, e_star, DEFAULT_RS_ORDER};
use zdl_core::{cache, Error};

const DEFAULT_GRID_STEP: f64 = 0.05;
const ATKINSON_ENVELOPE_C: f64 = 10.0;
const TWELFTH_SLOPE_BOUND: f64 = 2.3;

#[derive(Parser)]
#[command(name = "zdl", version, about = "Divisor-problem and zeta mean-square laboratory")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Cache directory (env ZDL_CACHE_DIR, default ./zdl-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_enum)]
    output: Option<OutputFormat>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Optional key=value config file; flags win over file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Envelope exponent ε₀ for O-term envelopes.
    #[arg(long, global = true)]
    epsilon0: Option<f64>,

    /// Seed for random point systems.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Riemann–Siegel correction order (0..=2).
    #[arg(long, global = true)]
    rs_order: Option<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
    Plotdata,
}

#[derive(Subcommand)]
enum Command {
    /// Build (or refresh) the divisor-table cache and validate it.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Evaluate Δ(x) and both Δ*(x) routes.
    Delta {
        #[arg(long)]
        x: f64,
        /// Table limit; at least ⌈4x⌉ is required.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Evaluate E(t), Δ*(t/2π) and E*(t) by quadrature.
    Estar {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Atkinson's formula against quadrature over a log-spaced T sweep.
    Atkinson {
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Truncation as a multiple of T (the conventional choice is 1).
        #[arg(long, default_value_t = 1.0)]
        n_ratio: f64,
    },
    /// Truncated Voronoi series against the exact route at one x.
    Voronoi {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = VoronoiQuantity::Delta)]
        quantity: VoronoiQuantity,
    },
    /// Gaussian smoothing checks (the E sandwich or the Δ* identity).
    Smooth {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 2)]
        lemma: u8,
        #[arg(long, default_value_t = 3.0)]
        envelope_c: f64,
    },
    /// Moment integral scan and log-log exponent fit for one quantity.
    Moments {
        #[arg(long, value_enum)]
        quantity: CliQuantity,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 100.0)]
        tmin: f64,
        #[arg(long, default_value_t = 1.25)]
        ratio: f64,
        /// Run the whole verification suite instead of one quantity.
        #[arg(long, default_value_t = false)]
        suite: bool,
    },
    /// Exact near-coincident quadruple counting at one (N, k, δ).
    Quadruples {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        delta: f64,
    },
    /// Fourth-power short-interval sums over separated point systems.
    ShortInterval {
        #[arg(long)]
        t: f64,
        /// G = T^exponent.
        #[arg(long, default_value_t = 0.25)]
        g_exponent: f64,
        #[arg(long, value_enum, default_value_t = CliGenerator::All)]
        generator: CliGenerator,
        /// Also emit the dyadic large-value classification.
        #[arg(long, default_value_t = false)]
        dyadic: bool,
    },
    /// Twelfth-moment scan with fitted growth exponent.
    Twelfth {
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VoronoiQuantity {
    Delta,
    DeltaStar,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliQuantity {
    Delta,
    DeltaStar,
    E,
    EStar,
}

impl From<CliQuantity> for MomentQuantity {
    fn from(q: CliQuantity) -> Self {
        match q {
            CliQuantity::Delta => MomentQuantity::Delta,
            CliQuantity::DeltaStar => MomentQuantity::DeltaStar,
            CliQuantity::E => MomentQuantity::E,
            CliQuantity::EStar => MomentQuantity::EStar,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliGenerator {
    Uniform,
    Random,
    Greedy,
    All,
}

/// Fully resolved run settings: flags win over the config file, the
/// config file wins over environment/defaults.
struct Settings {
    cache_dir: PathBuf,
    output: OutputFormat,
    out: Option<PathBuf>,
    epsilon0: Option<f64>,
    seed: u64,
    rs_order: u8,
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                return Err(Error::Parameter(format!(
                    "config {}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    Ok(map)
}

fn resolve_settings(args: &GlobalArgs) -> Result<Settings, Error> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };
    let file_get = |key: &str| file.get(key).cloned();
    let parse_f64 = |key: &str, v: String| {
        v.parse::<f64>()
            .map_err(|_| Error::Parameter(format!("config {key} = {v} is not a number")))
    };

    let cache_dir = args
        .cache_dir
        .clone()
        .or_else(|| file_get("cache_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("ZDL_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("zdl-cache"));
    let output = match args.output {
        Some(o) => o,
        None => match file_get("output").as_deref() {
            Some("csv") | None => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some("plotdata") => OutputFormat::Plotdata,
            Some(other) => {
                return Err(Error::Parameter(format!("config output = {other}")))
            }
        },
    };
    let epsilon0 = match (args.epsilon0, file_get("epsilon0")) {
        (Some(e), _) => Some(e),
        (None, Some(v)) => Some(parse_f64("epsilon0", v)?),
        _ => None,
    };
    let seed = match (args.seed, file_get("seed")) {
        (Some(s), _) => s,
        (None, Some(v)) => v
            .parse()
            .map_err(|_| Error::Parameter(format!("config seed = {v}")))?,
        _ => 0,
    };
    let rs_order = match (args.rs_order, file_get("rs_order")) {
        (Some(o), _) => o,
        (None, Some(v)) => v
            .parse()
            .map_err(|_| Error::Parameter(format!("config rs_order = {v}")))?,
        _ => DEFAULT_RS_ORDER,
    };
    Ok(Settings {
        cache_dir,
        output,
        out: args.out.clone(),
        epsilon0,
        seed,
        rs_order,
    })
}

impl Settings {
    fn divisor_table(&self, limit: u64) -> Result<zdl_core::divisor::DivisorTable, Error> {
        let path = self.cache_dir.join("divisor.zdl");
        let (table, rebuilt) = cache::load_or_build_divisor_table(&path, limit)?;
        if rebuilt {
            eprintln!("cache: sieved divisor table to {} at {}", table.limit(), path.display());
        }
        Ok(table)
    }

    fn zeta_grid(&self, t_end: f64) -> Result<zdl_core::zeta::ZetaSampleGrid, Error> {
        let step = DEFAULT_GRID_STEP;
        let path = self
            .cache_dir
            .join(format!("zeta-s{step}-rs{}.zgr", self.rs_order));
        let (grid, rebuilt) = cache::load_or_build_zeta_grid(&path, t_end, step, self.rs_order)?;
        if rebuilt {
            eprintln!(
                "cache: sampled zeta grid to {} at {}",
                grid.t_end(),
                path.display()
            );
        }
        Ok(grid)
    }

    fn emit(&self, body: &str) -> Result<(), Error> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, body)?;
                Ok(())
            }
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }

    fn emit_json<T: serde::Serialize>(&self, value: &T) -> Result<(), Error> {
        let body = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Data(format!("serialization: {e}")))?;
        self.emit(&format!("{body}\n"))
    }
}

/// Outcome of a command: the checks it ran either all held or not.
enum Outcome {
    Ok,
    ChecksFailed(String),
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let settings = resolve_settings(&cli.global)?;
    match cli.command {
        Command::Sieve { limit } => cmd_sieve(&settings, limit),
        Command::Delta { x, limit } => cmd_delta(&settings, x, limit),
        Command::Estar { t, step } => cmd_estar(&settings, t, step),
        Command::Atkinson {
            tmin,
            tmax,
            points,
            n_ratio,
        } => cmd_atkinson(&settings, tmin, tmax, points, n_ratio),
        Command::Voronoi { x, n, quantity } => cmd_voronoi(&settings, x, n, quantity),
        Command::Smooth {
            t,
            g,
            lemma,
            envelope_c,
        } => cmd_smooth(&settings, t, g, lemma, envelope_c),
        Command::Moments {
            quantity,
            power,
            tmax,
            tmin,
            ratio,
            suite,
        } => cmd_moments(&settings, quantity, power, tmax, tmin, ratio, suite),
        Command::Quadruples { n, k, delta } => cmd_quadruples(&settings, n, k, delta),
        Command::ShortInterval {
            t,
            g_exponent,
            generator,
            dyadic,
        } => cmd_short_interval(&settings, t, g_exponent, generator, dyadic),
        Command::Twelfth { tmin, tmax, points } => cmd_twelfth(&settings, tmin, tmax, points),
    }
}

fn cmd_sieve(s: &Settings, limit: u64) -> Result<Outcome, Error> {
    let start = std::time::Instant::now();
    let table = s.divisor_table(limit)?;
    table.validate_hyperbola()?;
    let elapsed = start.elapsed().as_secs_f64();
    let body = format!(
        "limit,prefix_total,hyperbola_ok,seconds\n{},{},true,{}\n",
        table.limit(),
        table.prefix(table.limit()),
        elapsed
    );
    s.emit(&body)?;
    Ok(Outcome::Ok)
}

fn cmd_delta(s: &Settings, x: f64, limit: Option<u64>) -> Result<Outcome, Error> {
    if !(x > 0.0) {
        return Err(Error::Parameter(format!("x = {x} must be positive")));
    }
    let needed = (4.0 * x).floor() as u64 + 1;
    let table = s.divisor_table(limit.unwrap_or(needed).max(needed))?;
    let rows = vec![
        delta(x, &table)?,
        delta_star_combination(x, &table)?,
        delta_star_alternating(x, &table)?,
    ];
    match s.output {
        OutputFormat::Json => s.emit_json(&rows)?,
        _ => s.emit(&report::delta_csv(&rows))?,
    }
    let (comb, alt) = (rows[1].value, rows[2].value);
    if (comb - alt).abs() > 1e-8 * (1.0 + comb.abs()) {
        return Ok(Outcome::ChecksFailed(format!(
            "delta* route disagreement at x = {x}: {comb} vs {alt}"
        )));
    }
    Ok(Outcome::Ok)
}

fn cmd_estar(s: &Settings, t: f64, step: Option<f64>) -> Result<Outcome, Error> {
    if !(t > 0.0) {
        return Err(Error::Parameter(format!("t = {t} must be positive")));
    }
    if let Some(h) = step {
        if (h - DEFAULT_GRID_STEP).abs() > 1e-12 {
            return Err(Error::Parameter(format!(
                "only the cached default step {DEFAULT_GRID_STEP} is supported, got {h}"
            )));
        }
    }
    let table = s.divisor_table((4.0 * t / (2.0 * PI)).floor() as u64 + 2)?;
    let grid = s.zeta_grid(t + 1.0)?;
    let e = e_quadrature(t, &grid)?;
    let ds = delta_star_combination(t / (2.0 * PI), &table)?;
    let es = e_star(t, &grid, &table)?;
    let body = format!(
        "t,E,delta_star,E_star\n{},{},{},{}\n",
        t, e.value, ds.value, es
    );
    s.emit(&body)?;
    Ok(Outcome::Ok)
}

fn cmd_atkinson(
    s: &Settings,
    tmin: f64,
    tmax: f64,
    points: usize,
    n_ratio: f64,
) -> Result<Outcome, Error> {
    if !(tmin > 0.0 && tmax > tmin && points >= 1) {
        return Err(Error::Parameter(format!(
            "need 0 < tmin < tmax and points >= 1, got [{tmin}, {tmax}] x {points}"
        )));
    }
    let table = s.divisor_table((tmax * n_ratio).ceil() as u64 + 1)?;
    let grid = s.zeta_grid(tmax + 1.0)?;
    let mut rows = Vec::new();
    let mut worst: Option<(f64, f64)> = None;
    for i in 0..points {
        let t = if points == 1 {
            tmin
        } else {
            tmin * (tmax / tmin).powf(i as f64 / (points - 1) as f64)
        };
        let params = AtkinsonParams::new(t, t * n_ratio)?;
        let atk = atkinson_e(&params, &table)?;
        let quad = e_quadrature(t, &grid)?;
        let envelope = ATKINSON_ENVELOPE_C * t.ln() * t.ln();
        let diff = (atk.value - quad.value).abs();
        if diff > envelope {
            worst = Some((t, diff));
        }
        rows.push((quad, None));
        rows.push((atk, Some((params.n, envelope))));
    }
    match s.output {
        OutputFormat::Json => s.emit_json(&rows.iter().map(|(e, _)| e).collect::<Vec<_>>())?,
        _ => s.emit(&report::e_routes_csv(&rows))?,
    }
    match worst {
        Some((t, diff)) => Ok(Outcome::ChecksFailed(format!(
            "atkinson residual {diff} exceeds {ATKINSON_ENVELOPE_C}·log²T at T = {t}"
        ))),
        None => Ok(Outcome::Ok),
    }
}

fn cmd_voronoi(
    s: &Settings,
    x: f64,
    n: u64,
    quantity: VoronoiQuantity,
) -> Result<Outcome, Error> {
    let needed = ((4.0 * x).floor() as u64 + 1).max(n);
    let table = s.divisor_table(needed)?;
    let (series, exact, name) = match quantity {
        VoronoiQuantity::Delta => (
            voronoi_delta(x, n, &table)?,
            delta(x, &table)?,
            "voronoi",
        ),
        VoronoiQuantity::DeltaStar => (
            voronoi_delta_star(x, n, &table)?,
            delta_star_combination(x, &table)?,
            "voronoi-star",
        ),
    };
    let mut body = report::series_csv(&[(x, name, series)]);
    body.push_str(&format!("{},{},{},,\n", x, exact.route, exact.value));
    s.emit(&body)?;
    Ok(Outcome::Ok)
}

fn cmd_smooth(s: &Settings, t: f64, g: f64, lemma: u8, envelope_c: f64) -> Result<Outcome, Error> {
    match lemma {
        2 => {
            let window = g * t.ln().max(8.0);
            let grid = s.zeta_grid(t + window + 1.0)?;
            let report_row = check_e_sandwich(t, g, &grid, envelope_c)?;
            s.emit(&report::sandwich_csv(&[report_row]))?;
            if report_row.holds {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::ChecksFailed(format!(
                    "sandwich violated at (T, G) = ({t}, {g})"
                )))
            }
        }
        3 => {
            let epsilon = s.epsilon0.unwrap_or(zdl_core::smoothing::DEFAULT_LEMMA3_EPSILON);
            let window = g * t.ln().max(8.0);
            let table = s.divisor_table((4.0 * (t + window) / (2.0 * PI)).ceil() as u64 + 2)?;
            let report_row = check_delta_star_smoothing(t, g, &table, envelope_c, epsilon)?;
            s.emit(&report::delta_star_smoothing_csv(&[report_row]))?;
            if report_row.holds {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::ChecksFailed(format!(
                    "smoothing identity residual exceeds envelope at (T, G) = ({t}, {g})"
                )))
            }
        }
        other => Err(Error::Parameter(format!("lemma must be 2 or 3, got {other}"))),
    }
}

fn cmd_moments(
    s: &Settings,
    quantity: CliQuantity,
    power: u32,
    tmax: f64,
    tmin: f64,
    ratio: f64,
    suite: bool,
) -> Result<Outcome, Error> {
    if suite {
        let cfg = MomentSuiteConfig {
            delta_max: tmax.max(1e4),
            ..MomentSuiteConfig::default()
        };
        let series_table = s.divisor_table(1_000_000.max(4 * cfg.delta_max as u64))?;
        let grid = s.zeta_grid(cfg.e_max + 1.0)?;
        let ctx = MomentContext {
            table: &series_table,
            grid: Some(&grid),
        };
        let rows = verify_moment_suite(&cfg, &ctx, &series_table)?;
        match s.output {
            OutputFormat::Json => s.emit_json(&rows)?,
            _ => s.emit(&report::moment_suite_csv(&rows))?,
        }
        let failed: Vec<String> = rows
            .iter()
            .filter(|r| !r.slope_pass || r.coefficient_pass == Some(false))
            .map(|r| format!("{}^{}", r.quantity, r.power))
            .collect();
        if failed.is_empty() {
            return Ok(Outcome::Ok);
        }
        return Ok(Outcome::ChecksFailed(format!(
            "moment rows outside bands: {}",
            failed.join(", ")
        )));
    }

    let q: MomentQuantity = quantity.into();
    let needed_table = if q.is_delta_family() {
        (4.0 * tmax) as u64 + 2
    } else {
        (4.0 * tmax / (2.0 * PI)) as u64 + 2
    };
    let table = s.divisor_table(needed_table)?;
    let grid_store;
    let grid_ref = if q.is_delta_family() {
        None
    } else {
        grid_store = s.zeta_grid(tmax + 1.0)?;
        Some(&grid_store)
    };
    let ctx = MomentContext {
        table: &table,
        grid: grid_ref,
    };
    let ts = geometric_samples(tmin, tmax, ratio);
    let expected = match (q, power) {
        (MomentQuantity::Delta | MomentQuantity::DeltaStar, 2) => 1.5,
        (MomentQuantity::Delta | MomentQuantity::DeltaStar, 3) => 1.75,
        (MomentQuantity::Delta | MomentQuantity::DeltaStar, 4) => 2.0,
        (MomentQuantity::E, 2) => 1.5,
        (MomentQuantity::E, 3) => 1.75,
        (MomentQuantity::E, 4) => 2.0,
        (MomentQuantity::EStar, 2) => 4.0 / 3.0,
        (MomentQuantity::EStar, 4) => 16.0 / 9.0,
        _ => 0.0,
    };
    let est = estimate_moment_windowed(q, power, expected, &ts, tmax / 100.0, &ctx)?;
    match s.output {
        OutputFormat::Json => s.emit_json(&est)?,
        OutputFormat::Plotdata => s.emit(&report::plot_data(
            &format!("moment quantity={q} k={power}: T vs integral"),
            &est.samples,
        ))?,
        OutputFormat::Csv => {
            s.emit(&report::moment_samples_csv(&q.to_string(), power, &est.samples))?
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_quadruples(s: &Settings, n: u64, k: u32, delta: f64) -> Result<Outcome, Error> {
    let epsilon = s
        .epsilon0
        .unwrap_or(zdl_core::quadruples::DEFAULT_ENVELOPE_EPSILON);
    let row = match s.epsilon0 {
        None => count_quadruples(n, k, delta)?,
        Some(_) => zdl_core::quadruples::PairSums::new(n, k)?.report(delta, epsilon)?,
    };
    match s.output {
        OutputFormat::Json => s.emit_json(&row)?,
        _ => s.emit(&report::quadruples_csv(&[row]))?,
    }
    if row.ratio > DEFAULT_RATIO_BOUND {
        return Ok(Outcome::ChecksFailed(format!(
            "count/envelope ratio {} exceeds {DEFAULT_RATIO_BOUND}",
            row.ratio
        )));
    }
    Ok(Outcome::Ok)
}

fn cmd_short_interval(
    s: &Settings,
    t: f64,
    g_exponent: f64,
    generator: CliGenerator,
    dyadic: bool,
) -> Result<Outcome, Error> {
    let epsilon = s
        .epsilon0
        .unwrap_or(zdl_core::short_interval::DEFAULT_EPSILON);
    let g = t.powf(g_exponent);
    let grid = s.zeta_grid(2.0 * t + g + 1.0)?;
    let mut systems = Vec::new();
    if matches!(generator, CliGenerator::Uniform | CliGenerator::All) {
        systems.push(PointSystem::uniform(t, g));
    }
    if matches!(generator, CliGenerator::Random | CliGenerator::All) {
        systems.push(PointSystem::random(t, g, s.seed));
    }
    if matches!(generator, CliGenerator::Greedy | CliGenerator::All) {
        systems.push(PointSystem::greedy_peaks(t, g, &grid)?);
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for sys in &systems {
        let row = fourth_power_sum(sys, &grid, epsilon)?;
        if row.ratio > T2_RATIO_BOUND {
            violations.push(format!("{}: ratio {}", sys.generator, row.ratio));
        }
        rows.push(row);
    }
    let mut body = report::fourth_power_csv(&rows);
    if dyadic {
        let classes = dyadic_classes(t, &grid)?;
        body.push_str(&report::dyadic_csv(&classes));
    }
    match s.output {
        OutputFormat::Json => s.emit_json(&rows)?,
        _ => s.emit(&body)?,
    }
    if violations.is_empty() {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::ChecksFailed(format!(
            "fourth-power ratio bound exceeded: {}",
            violations.join("; ")
        )))
    }
}

fn cmd_twelfth(s: &Settings, tmin: f64, tmax: f64, points: usize) -> Result<Outcome, Error> {
    if !(tmin > 0.0 && tmax > tmin && points >= 2) {
        return Err(Error::Parameter(format!(
            "need 0 < tmin < tmax, points >= 2; got [{tmin}, {tmax}] x {points}"
        )));
    }
    let epsilon = s
        .epsilon0
        .unwrap_or(zdl_core::short_interval::DEFAULT_EPSILON);
    let grid = s.zeta_grid(tmax + 1.0)?;
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let t = tmin * (tmax / tmin).powf(i as f64 / (points - 1) as f64);
        let row = twelfth_moment(t, &grid, epsilon)?;
        samples.push((t, row.value));
    }
    let fit = zdl_core::moments::fit_exponent(&samples)?;
    let mut body = String::from("T,twelfth_moment\n");
    for (t, v) in &samples {
        body.push_str(&format!("{t},{v}\n"));
    }
    body.push_str(&format!("# fitted_slope,{}\n", fit.slope));
    match s.output {
        OutputFormat::Plotdata => s.emit(&report::plot_data(
            &format!("twelfth moment scan, fitted slope {}", fit.slope),
            &samples,
        ))?,
        _ => s.emit(&body)?,
    }
    if fit.slope > TWELFTH_SLOPE_BOUND {
        return Ok(Outcome::ChecksFailed(format!(
            "twelfth-moment slope {} exceeds {TWELFTH_SLOPE_BOUND}",
            fit.slope
        )));
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::from(0),
        Ok(Outcome::ChecksFailed(msg)) => {
            eprintln!("acceptance check failed: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
