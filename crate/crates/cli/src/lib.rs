//! Command-line entry point: compute volumes, scan Euler-form fluxes,
//! estimate Poincaré indices, evaluate bounds, verify the symbolic
//! expansion and probe the pointwise hypothesis; persist reproducible
//! JSON/CSV records.
//!
//! Exit codes: `0` success, `2` configuration or usage error, `3`
//! numeric failure (residual or verification tolerance exceeded).

use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use puncvol_core::bounds::{bound_report, closed_volumes, ClosedVolumes};
use puncvol_core::error::Error as CoreError;
use puncvol_core::exterior::verify_lemma;
use puncvol_core::fields::VectorFieldSpec;
use puncvol_core::functionals::{stokes_scan, volume, FluxScan};
use puncvol_core::probe::{run_probe, ProbeConfig};
use puncvol_core::quad::{
    default_parallel_orders, default_product_orders, default_sliced_spec, GridSpec,
};
use puncvol_core::sphere::SpherePoint;
use puncvol_core::topology::field_index;

pub const SCHEMA_VERSION: u32 = 1;

/// Residual above which an index report counts as a numeric failure.
pub const INDEX_RESIDUAL_TOLERANCE: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(
    name = "puncvol",
    version,
    about = "Volume, Euler-form flux and Poincaré indices of unit vector fields on punctured odd spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the volume of a unit vector field over the sphere.
    Volume(VolumeArgs),
    /// Euler-form flux through a family of parallels, with pole limits.
    EulerScan(EulerScanArgs),
    /// Poincaré index of the field around a point.
    Index(IndexArgs),
    /// Index-dependent lower bounds for a given configuration.
    Bounds(BoundsArgs),
    /// Normalized closed-form volume constants per sphere parameter.
    ChainTable(ChainTableArgs),
    /// Exact symbolic check of the Euler-form expansion.
    VerifyLemma(VerifyLemmaArgs),
    /// Seeded randomized probe of the pointwise comparison hypothesis.
    ProbeLemma(ProbeLemmaArgs),
    /// Volume estimates across monotone grid refinements.
    Convergence(ConvergenceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldChoice {
    Hopf,
    Radial,
    Power,
    PerturbedHopf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Field from the catalog.
    #[arg(long, value_enum, default_value = "hopf")]
    pub field: FieldChoice,
    /// Sphere parameter: the field lives on S^{2n+1}.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Pole as comma-separated ambient coordinates (radial/power);
    /// defaults to the last coordinate axis.
    #[arg(long)]
    pub pole: Option<String>,
    /// Exponent of the power field.
    #[arg(long)]
    pub d: Option<u32>,
    /// Amplitude of the perturbed-hopf field.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Seed: fixes the perturbed-hopf direction, Monte Carlo sampling
    /// and the prober. Drawn and recorded when absent where one is
    /// needed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Write the record here (atomically) instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Grid spec as JSON, e.g.
    /// {"kind":"sliced","slices":40,"parallel":[24,24,24,48],"seed":null}.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EulerScanArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Latitudes of the scanned parallels (strictly increasing).
    #[arg(long, default_value = "-1.2,-0.8,-0.4,0,0.4,0.8,1.2")]
    pub thetas: String,
    /// Grid spec for the parallels: {"kind":"parallel","orders":[...]}.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Point as comma-separated ambient coordinates; defaults to the
    /// field's pole.
    #[arg(long)]
    pub point: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    /// Grid spec for the degree integral:
    /// {"kind":"parallel","orders":[...]}.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Indices as comma-separated integers, e.g. "1,-1".
    #[arg(long, default_value = "1,-1")]
    pub indices: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ChainTableArgs {
    /// Sphere parameters, e.g. "1,2,3".
    #[arg(long, default_value = "1,2,3")]
    pub n: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyLemmaArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProbeLemmaArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Matrix entries are drawn uniformly from [−scale, scale].
    #[arg(long, default_value_t = 2.0)]
    pub scale: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Number of refinement levels (each level doubles every order).
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Result of executing one command, before any IO.
#[derive(Debug)]
pub struct RunOutput {
    pub exit_code: i32,
    pub payload: String,
    /// Human-readable companion text (written to stderr).
    pub human: Option<String>,
    pub out_path: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunRecord {
    schema: u32,
    command: String,
    version: String,
    timestamp_unix: u64,
    duration_seconds: f64,
    config: serde_json::Value,
    results: serde_json::Value,
}

fn record(command: &str, config: serde_json::Value, results: serde_json::Value, t0: Instant) -> String {
    let rec = RunRecord {
        schema: SCHEMA_VERSION,
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        duration_seconds: t0.elapsed().as_secs_f64(),
        config,
        results,
    };
    serde_json::to_string_pretty(&rec).expect("record serializes")
}

fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::Numeric(_) | CoreError::Singularity { .. } => 3,
        _ => 2,
    }
}

fn error_output(command: &str, err: &CoreError) -> RunOutput {
    let payload = serde_json::to_string_pretty(&json!({
        "schema": SCHEMA_VERSION,
        "command": command,
        "error": err.to_string(),
    }))
    .expect("error record serializes");
    RunOutput {
        exit_code: exit_code_for(err),
        payload,
        human: Some(err.to_string()),
        out_path: None,
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, CoreError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CoreError::config(format!("cannot parse '{t}' as a number")))
        })
        .collect()
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, CoreError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| CoreError::config(format!("cannot parse '{t}' as an integer")))
        })
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, CoreError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CoreError::config(format!("cannot parse '{t}' as a count")))
        })
        .collect()
}

fn parse_point(s: &str, ambient: usize) -> Result<SpherePoint, CoreError> {
    let coords = parse_f64_list(s)?;
    if coords.len() != ambient {
        return Err(CoreError::config(format!(
            "expected {ambient} coordinates, got {}",
            coords.len()
        )));
    }
    SpherePoint::project(&coords)
}

fn build_field(args: &FieldArgs) -> Result<VectorFieldSpec, CoreError> {
    let n = args.n;
    let ambient = 2 * n + 2;
    let pole = match &args.pole {
        Some(s) => parse_point(s, ambient)?,
        None => VectorFieldSpec::default_pole(n),
    };
    match args.field {
        FieldChoice::Hopf => VectorFieldSpec::hopf(n),
        FieldChoice::Radial => VectorFieldSpec::radial(n, pole),
        FieldChoice::Power => VectorFieldSpec::power(n, args.d.unwrap_or(1), pole),
        FieldChoice::PerturbedHopf => {
            let seed = args.seed.unwrap_or_else(|| rand::rng().random());
            VectorFieldSpec::perturbed_hopf(n, args.eps.unwrap_or(0.2), seed)
        }
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, CoreError> {
    serde_json::from_str(s).map_err(|e| CoreError::config(format!("invalid grid JSON: {e}")))
}

fn default_volume_spec(f: &VectorFieldSpec) -> GridSpec {
    if f.is_singular() {
        default_sliced_spec(f.n)
    } else {
        GridSpec::Product {
            orders: default_product_orders(2 * f.n + 1),
        }
    }
}

fn scan_orders(grid: &Option<String>, n: usize) -> Result<Vec<usize>, CoreError> {
    match grid {
        None => Ok(default_parallel_orders(n)),
        Some(s) => match parse_grid(s)? {
            GridSpec::Parallel { orders } | GridSpec::Product { orders } => {
                if orders.len() != 2 * n {
                    return Err(CoreError::config(format!(
                        "parallel grids on S^{} need {} axis orders",
                        2 * n,
                        2 * n
                    )));
                }
                Ok(orders)
            }
            _ => Err(CoreError::config(
                "scans and degree integrals take {\"kind\":\"parallel\",\"orders\":[...]}",
            )),
        },
    }
}

fn scan_csv(scan: &FluxScan) -> String {
    let mut out = String::from("theta,flux\n");
    for (theta, flux) in scan.thetas.iter().zip(&scan.fluxes) {
        out.push_str(&format!("{theta},{flux}\n"));
    }
    out
}

fn chain_csv(rows: &[ClosedVolumes]) -> String {
    let mut out = String::from("n,volM,radial,pedersen,hopf,bcn_a\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.vol_m, r.radial, r.pedersen, r.hopf, r.bcn_a
        ));
    }
    out
}

fn csv_unsupported(cmd: &str) -> CoreError {
    CoreError::config(format!(
        "--format csv is supported for euler-scan and chain-table, not {cmd}"
    ))
}

pub fn execute(cli: Cli) -> RunOutput {
    match cli.command {
        Command::Volume(args) => run_volume(args),
        Command::EulerScan(args) => run_euler_scan(args),
        Command::Index(args) => run_index(args),
        Command::Bounds(args) => run_bounds(args),
        Command::ChainTable(args) => run_chain_table(args),
        Command::VerifyLemma(args) => run_verify_lemma(args),
        Command::ProbeLemma(args) => run_probe_lemma(args),
        Command::Convergence(args) => run_convergence(args),
    }
}

fn run_volume(args: VolumeArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "volume";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        let field = build_field(&args.field)?;
        let spec = match &args.grid {
            Some(s) => {
                let mut g = parse_grid(s)?;
                if let (GridSpec::MonteCarlo { seed, .. }, Some(cli_seed)) =
                    (&mut g, args.field.seed)
                {
                    seed.get_or_insert(cli_seed);
                }
                g
            }
            None => default_volume_spec(&field),
        };
        let estimate = volume(&field, &spec)?;
        let config = json!({ "field": field, "grid": estimate.grid });
        let results = serde_json::to_value(&estimate).expect("estimate serializes");
        Ok(RunOutput {
            exit_code: 0,
            payload: record(cmd, config, results, t0),
            human: None,
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_euler_scan(args: EulerScanArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "euler-scan";
    let inner = || -> Result<RunOutput, CoreError> {
        let field = build_field(&args.field)?;
        let thetas = parse_f64_list(&args.thetas)?;
        let orders = scan_orders(&args.grid, field.n)?;
        let pole = field
            .pole
            .clone()
            .unwrap_or_else(|| VectorFieldSpec::default_pole(field.n));
        let scan = stokes_scan(&field, &pole, &thetas, &orders)?;
        let payload = match args.output.format {
            OutputFormat::Csv => scan_csv(&scan),
            OutputFormat::Json => {
                let config = json!({ "field": field, "thetas": thetas, "orders": orders });
                record(
                    cmd,
                    config,
                    serde_json::to_value(&scan).expect("scan serializes"),
                    t0,
                )
            }
        };
        Ok(RunOutput {
            exit_code: 0,
            payload,
            human: None,
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_index(args: IndexArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "index";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        let field = build_field(&args.field)?;
        let point = match &args.point {
            Some(s) => parse_point(s, field.ambient_dim())?,
            None => field
                .pole
                .clone()
                .ok_or_else(|| CoreError::config("--point is required for fields without a pole"))?,
        };
        let orders = scan_orders(&args.grid, field.n)?;
        let report = field_index(&field, &point, args.radius, &orders)?;
        let ok = report.residual <= INDEX_RESIDUAL_TOLERANCE;
        let config = json!({
            "field": field, "point": point, "radius": args.radius, "orders": orders,
        });
        let results = serde_json::to_value(&report).expect("report serializes");
        Ok(RunOutput {
            exit_code: if ok { 0 } else { 3 },
            payload: record(cmd, config, results, t0),
            human: if ok {
                None
            } else {
                Some(format!(
                    "index residual {:.3e} exceeds tolerance {INDEX_RESIDUAL_TOLERANCE:.0e}",
                    report.residual
                ))
            },
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_bounds(args: BoundsArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "bounds";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        let indices = parse_i64_list(&args.indices)?;
        let report = bound_report(args.n, &indices, None)?;
        let config = json!({ "n": args.n, "indices": indices });
        Ok(RunOutput {
            exit_code: 0,
            payload: record(
                cmd,
                config,
                serde_json::to_value(&report).expect("report serializes"),
                t0,
            ),
            human: None,
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_chain_table(args: ChainTableArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "chain-table";
    let inner = || -> Result<RunOutput, CoreError> {
        let ns = parse_usize_list(&args.n)?;
        let rows: Result<Vec<ClosedVolumes>, CoreError> =
            ns.iter().map(|&n| closed_volumes(n)).collect();
        let rows = rows?;
        let payload = match args.output.format {
            OutputFormat::Csv => chain_csv(&rows),
            OutputFormat::Json => record(
                cmd,
                json!({ "n": ns }),
                serde_json::to_value(&rows).expect("rows serialize"),
                t0,
            ),
        };
        Ok(RunOutput {
            exit_code: 0,
            payload,
            human: None,
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_verify_lemma(args: VerifyLemmaArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "verify-lemma";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        let report = verify_lemma(args.n)?;
        let results = json!({
            "status": if report.verified { "verified" } else { "mismatch" },
            "n": report.n,
            "basis_tuples": report.basis_tuples,
            "mismatches": report.mismatches,
        });
        Ok(RunOutput {
            exit_code: if report.verified { 0 } else { 3 },
            payload: record(cmd, json!({ "n": args.n }), results, t0),
            human: Some(report.human_readable()),
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

fn run_probe_lemma(args: ProbeLemmaArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "probe-lemma";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        let seed = args.seed.unwrap_or_else(|| rand::rng().random());
        let mut config = ProbeConfig::new(args.n, args.trials, seed);
        config.scale = args.scale;
        let report = run_probe(&config)?;
        let human = format!(
            "probe n={} trials={} seed={}: {} absolute-form violations, {} common-angle violations\n",
            args.n, args.trials, seed, report.abs_violations, report.angle_violations
        );
        Ok(RunOutput {
            exit_code: 0,
            payload: record(
                cmd,
                serde_json::to_value(&config).expect("config serializes"),
                serde_json::to_value(&report).expect("report serializes"),
                t0,
            ),
            human: Some(human),
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

#[derive(Serialize)]
struct ConvergenceRow {
    level: usize,
    grid: GridSpec,
    nodes: usize,
    estimate: f64,
    normalized: f64,
    delta_from_previous: Option<f64>,
}

fn run_convergence(args: ConvergenceArgs) -> RunOutput {
    let t0 = Instant::now();
    let cmd = "convergence";
    let inner = || -> Result<RunOutput, CoreError> {
        if args.output.format == OutputFormat::Csv {
            return Err(csv_unsupported(cmd));
        }
        if args.levels == 0 || args.levels > 6 {
            return Err(CoreError::config("levels must lie in 1..=6"));
        }
        let field = build_field(&args.field)?;
        let m = 2 * field.n + 1;
        let mut rows: Vec<ConvergenceRow> = Vec::new();
        for level in 1..=args.levels {
            let factor = 1usize << (level - 1);
            let spec = if field.is_singular() {
                GridSpec::Sliced {
                    slices: 8 * factor,
                    parallel: (0..m - 1)
                        .map(|i| if i == m - 2 { 16 * factor } else { 8 * factor })
                        .collect(),
                    seed: None,
                }
            } else {
                GridSpec::Product {
                    orders: (0..m)
                        .map(|i| if i == m - 1 { 16 * factor } else { 8 * factor })
                        .collect(),
                }
            };
            let grid = match &spec {
                GridSpec::Product { orders } => puncvol_core::quad::quad_sphere(m, orders)?,
                GridSpec::Sliced {
                    slices, parallel, ..
                } => {
                    let pole = field
                        .pole
                        .clone()
                        .unwrap_or_else(|| VectorFieldSpec::default_pole(field.n));
                    puncvol_core::quad::quad_sliced(&pole, *slices, parallel)?
                }
                _ => unreachable!(),
            };
            let estimate = puncvol_core::functionals::volume_on_grid(&field, &grid)?;
            let normalized = estimate / puncvol_core::sphere::sphere_volume(m)?;
            let delta = rows.last().map(|r: &ConvergenceRow| (estimate - r.estimate).abs());
            rows.push(ConvergenceRow {
                level,
                grid: spec,
                nodes: grid.len(),
                estimate,
                normalized,
                delta_from_previous: delta,
            });
        }
        let config = json!({ "field": field, "levels": args.levels });
        Ok(RunOutput {
            exit_code: 0,
            payload: record(
                cmd,
                config,
                serde_json::to_value(&rows).expect("rows serialize"),
                t0,
            ),
            human: None,
            out_path: args.output.out.clone(),
        })
    };
    inner().unwrap_or_else(|e| error_output(cmd, &e))
}

/// Builds the global worker pool from `PUNCVOL_THREADS` (ignored when the
/// pool already exists or the variable is unset/invalid).
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("PUNCVOL_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn write_atomic(path: &std::path::Path, data: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, data)?;
    std::fs::rename(&tmp, path)
}

/// Parses and executes; returns the process exit code after writing the
/// payload to `--out` or standard output and the human text to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_thread_pool();
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = execute(cli);
    if let Some(h) = &out.human {
        eprint!("{h}");
        if !h.ends_with('\n') {
            eprintln!();
        }
    }
    match &out.out_path {
        Some(path) => {
            if let Err(e) = write_atomic(path, &out.payload) {
                eprintln!("cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => println!("{}", out.payload),
    }
    out.exit_code
}

/// Test helper: executes a full argv and returns `(exit code, payload)`.
pub fn run_capture(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["puncvol".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    match Cli::try_parse_from(&argv) {
        Ok(cli) => {
            let out = execute(cli);
            (out.exit_code, out.payload)
        }
        Err(e) => (if e.use_stderr() { 2 } else { 0 }, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_kind_round_trip() {
        let (code, payload) = run_capture(&["volume", "--field", "hopf", "--n", "1", "--grid",
            r#"{"kind":"product","orders":[8,8,16]}"#]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["command"], "volume");
        assert_eq!(v["results"]["field"]["kind"], "hopf");
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _) = run_capture(&["volume", "--nope"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn kind_matches_field_choice() {
        use puncvol_core::fields::FieldKind;
        for (choice, kind) in [
            (FieldChoice::Hopf, FieldKind::Hopf),
            (FieldChoice::Radial, FieldKind::Radial),
            (FieldChoice::Power, FieldKind::Power),
            (FieldChoice::PerturbedHopf, FieldKind::PerturbedHopf),
        ] {
            let args = FieldArgs {
                field: choice,
                n: 1,
                pole: None,
                d: Some(2),
                eps: Some(0.2),
                seed: Some(1),
            };
            assert_eq!(build_field(&args).unwrap().kind, kind);
        }
    }
}
