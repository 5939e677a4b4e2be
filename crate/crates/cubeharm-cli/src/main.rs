//! Single binary exposing every module as a subcommand with deterministic,
//! machine-readable output. Validation failures exit with status 2 and a
//! diagnostic naming the offending field.

use clap::{Parser, Subcommand, ValueEnum};
use cubeharm::bilinear::{self, RealMatrix};
use cubeharm::cube::CubeFunction;
use cubeharm::lacunary::LacunaryPolynomial;
use cubeharm::{gaussian, khintchine, martingale, verify, walsh};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "cubeharm", version, about)]
struct Cli {
    /// Seed recorded in and used by every randomized computation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Input file (defaults to stdin where input is required)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Walsh-Hadamard analysis of a cube function
    Walsh,
    /// Dyadic maximal function M(f)
    Maximal,
    /// Martingale square function S(f)
    Square,
    /// Stopping-time block decomposition at a threshold
    Czdecomp {
        #[arg(long)]
        lambda: f64,
    },
    /// Khintchine constants on the Rademacher span
    Khintchine {
        #[arg(long)]
        ell: usize,
        /// Even moment exponent p = 2s >= 4 (forward constant)
        #[arg(long)]
        p: Option<u32>,
        /// Exponent q in (0, 2) (reverse constant)
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Sweep ell from 1 to --ell and emit one row per level
        #[arg(long)]
        sweep: bool,
    },
    /// Closed-form Gaussian absolute moment
    GaussianMoment {
        #[arg(long)]
        p: f64,
        /// Also report the quadrature oracle value
        #[arg(long)]
        check_quadrature: bool,
    },
    /// Norms of a lacunary polynomial, closed form and quadrature
    Lacunary,
    /// Exact l_inf -> l_1 operator norm with optimal sign vector
    Opnorm,
    /// Alternating-maximization lower bound for the vector-valued supremum
    Grothendieck {
        /// Ambient dimension (default m + n)
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Run every verification suite and print a pass/fail table
    VerifyAll,
}

#[derive(Deserialize)]
struct FunctionInput {
    schema: u32,
    ell: u32,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct MatrixInput {
    schema: u32,
    rows: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct LacunaryInput {
    schema: u32,
    coeffs: Vec<[f64; 2]>,
}

/// Validation failure with the offending field named.
struct FieldError {
    field: &'static str,
    message: String,
}

impl FieldError {
    fn new(field: &'static str, message: impl ToString) -> Self {
        FieldError { field, message: message.to_string() }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, FieldError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| FieldError::new("input", format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| FieldError::new("input", format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn check_schema(schema: u32) -> Result<(), FieldError> {
    if schema != SCHEMA_VERSION {
        return Err(FieldError::new(
            "schema",
            format!("unsupported schema version {schema}, expected {SCHEMA_VERSION}"),
        ));
    }
    Ok(())
}

fn parse_function(raw: &str) -> Result<CubeFunction, FieldError> {
    let input: FunctionInput =
        serde_json::from_str(raw).map_err(|e| FieldError::new("input", e))?;
    check_schema(input.schema)?;
    CubeFunction::new(input.ell, input.values).map_err(|e| FieldError::new("values", e))
}

fn parse_matrix(raw: &str, is_csv: bool) -> Result<RealMatrix, FieldError> {
    let rows: Vec<Vec<f64>> = if is_csv {
        let mut rows = Vec::new();
        for (i, line) in raw.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row: Result<Vec<f64>, _> =
                line.split(',').map(|c| c.trim().parse::<f64>()).collect();
            rows.push(row.map_err(|e| FieldError::new("rows", format!("line {}: {e}", i + 1)))?);
        }
        rows
    } else {
        let input: MatrixInput =
            serde_json::from_str(raw).map_err(|e| FieldError::new("input", e))?;
        check_schema(input.schema)?;
        input.rows
    };
    RealMatrix::from_rows(&rows).map_err(|e| FieldError::new("rows", e))
}

fn parse_lacunary(raw: &str) -> Result<LacunaryPolynomial, FieldError> {
    let input: LacunaryInput =
        serde_json::from_str(raw).map_err(|e| FieldError::new("input", e))?;
    check_schema(input.schema)?;
    let coeffs = input.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    LacunaryPolynomial::new(coeffs).map_err(|e| FieldError::new("coeffs", e))
}

fn emit(format: Format, value: &serde_json::Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Csv => emit_csv(value),
    }
}

/// CSV view of a JSON object: `rows` arrays become record lines, scalar
/// fields become `key,value` lines, in sorted key order.
fn emit_csv(value: &serde_json::Value) {
    if let Some(rows) = value.get("rows").and_then(|r| r.as_array()) {
        if let Some(first) = rows.first().and_then(|r| r.as_object()) {
            let keys: Vec<&String> = first.keys().collect();
            println!("{}", keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(","));
            for row in rows {
                let cells: Vec<String> = keys
                    .iter()
                    .map(|k| {
                        row.get(k.as_str()).map_or(String::new(), |v| match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        })
                    })
                    .collect();
                println!("{}", cells.join(","));
            }
            return;
        }
    }
    if let Some(obj) = value.as_object() {
        for (k, v) in obj {
            match v {
                serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                    println!("{k},{}", serde_json::to_string(v).expect("serializable"))
                }
                serde_json::Value::String(s) => println!("{k},{s}"),
                other => println!("{k},{other}"),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<Option<serde_json::Value>, FieldError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Walsh => {
            let f = parse_function(&read_input(&cli.input)?)?;
            let spectrum = walsh::analyze(&f);
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "ell": f.ell(),
                "coeffs": spectrum.coeffs(),
                "method": "fast Walsh-Hadamard transform, subset-bitmask order",
            })))
        }
        Command::Maximal => {
            let f = parse_function(&read_input(&cli.input)?)?;
            let m = martingale::maximal_function(&f);
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "ell": f.ell(),
                "values": m.values(),
                "method": "pointwise max of |E_k(f)| over all levels",
            })))
        }
        Command::Square => {
            let f = parse_function(&read_input(&cli.input)?)?;
            let s = martingale::square_function(&f);
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "ell": f.ell(),
                "values": s.values(),
                "method": "root-sum-of-squares of martingale differences",
            })))
        }
        Command::Czdecomp { lambda } => {
            let f = parse_function(&read_input(&cli.input)?)?;
            let blocks = martingale::cz_blocks(&f, *lambda)
                .map_err(|e| FieldError::new("lambda", e))?;
            let set = martingale::superlevel_set(&f, *lambda).expect("lambda validated");
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "lambda": lambda,
                "blocks": blocks.iter().map(|b| json!({
                    "level": b.level,
                    "prefix": b.prefix,
                    "measure": b.measure(),
                })).collect::<Vec<_>>(),
                "superlevel_measure": set.measure,
                "method": "top-down stopping-time scan, strict threshold",
            })))
        }
        Command::Khintchine { ell, p, q, restarts, sweep } => {
            let levels: Vec<usize> = if *sweep { (1..=*ell).collect() } else { vec![*ell] };
            let mut rows = Vec::new();
            for &level in &levels {
                let (constant, argvector, method) = match (p, q) {
                    (Some(p), None) => {
                        if p % 2 != 0 || *p < 4 {
                            return Err(FieldError::new("p", "p must be an even integer >= 4"));
                        }
                        let r = khintchine::best_ratio_even(level, p / 2, *restarts, seed)
                            .map_err(|e| FieldError::new("ell", e))?;
                        (r.ratio, r.coefficients,
                         "projected gradient ascent on the coefficient sphere")
                    }
                    (None, Some(q)) => {
                        let r = khintchine::best_ratio_low(level, *q, *restarts, seed)
                            .map_err(|e| FieldError::new("q", e))?;
                        (1.0 / r.ratio, r.coefficients,
                         "reciprocal of projected gradient descent minimum")
                    }
                    _ => return Err(FieldError::new("p", "exactly one of --p or --q is required")),
                };
                rows.push(json!({
                    "ell": level,
                    "constant": constant,
                    "argvector": argvector,
                    "method": method,
                }));
            }
            let mut out = json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "restarts": restarts,
                "note": format!("empirical at ell = {ell}; not the universal constant"),
                "tolerance": 1e-6,
            });
            if *sweep {
                out["rows"] = json!(rows);
            } else {
                for (k, v) in rows[0].as_object().unwrap() {
                    out[k] = v.clone();
                }
            }
            Ok(Some(out))
        }
        Command::GaussianMoment { p, check_quadrature } => {
            let m = gaussian::gaussian_moment(*p).map_err(|e| FieldError::new("p", e))?;
            let mut out = json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "p": m.p,
                "value": m.value,
                "root": m.root,
                "method": "pi^{-(p+1)/2} Gamma((p+1)/2) via Lanczos gamma",
            });
            if *check_quadrature {
                let quad = gaussian::gaussian_moment_quadrature(*p);
                out["quadrature"] = json!(quad);
                out["quadrature_relative_gap"] = json!((quad - m.value).abs() / m.value);
                out["quadrature_tolerance"] = json!(1e-9);
            }
            Ok(Some(out))
        }
        Command::Lacunary => {
            let f = parse_lacunary(&read_input(&cli.input)?)?;
            let quad2 = f.circle_quadrature_norm(2, None).expect("p = 2 valid");
            let quad4 = f.circle_quadrature_norm(4, None).expect("p = 4 valid");
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "m": f.m(),
                "l2_closed": f.l2_norm(),
                "l2_quadrature": quad2,
                "l4_closed": f.l4_norm_closed(),
                "l4_quadrature": quad4,
                "ratio_l4_l2": f.l4_norm_closed() / f.l2_norm(),
                "ratio_bound": 2f64.powf(0.25),
                "method": "collision-structure closed form; exact trapezoid quadrature",
                "tolerance": 1e-9,
            })))
        }
        Command::Opnorm => {
            let raw = read_input(&cli.input)?;
            let is_csv = cli.input.as_ref().is_some_and(|p| {
                p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
            });
            let a = parse_matrix(&raw, is_csv)?;
            let (norm, w) = bilinear::infty_to_one_norm(&a)
                .map_err(|e| FieldError::new("rows", e))?;
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "m": a.rows(),
                "n": a.cols(),
                "norm": norm,
                "witness_signs": w,
                "method": "exact sign enumeration over one sign class",
            })))
        }
        Command::Grothendieck { dim, restarts, tol } => {
            let raw = read_input(&cli.input)?;
            let is_csv = cli.input.as_ref().is_some_and(|p| {
                p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
            });
            let a = parse_matrix(&raw, is_csv)?;
            let d = dim.unwrap_or(a.rows() + a.cols());
            let (norm, _) = bilinear::infty_to_one_norm(&a)
                .map_err(|e| FieldError::new("rows", e))?;
            let config = bilinear::grothendieck_ratio(&a, d, *restarts, *tol, seed)
                .map_err(|e| FieldError::new("rows", e))?;
            Ok(Some(json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "dim": d,
                "restarts": restarts,
                "tol": tol,
                "objective": config.objective,
                "scalar_norm": norm,
                "ratio": config.objective / norm,
                "ratio_is_lower_bound": true,
                "grothendieck_bound": bilinear::grothendieck_bound(),
                "v": config.v,
                "w": config.w,
                "method": "alternating maximization over unit vectors; lower bound only, \
                           certifying the true supremum is out of scope",
            })))
        }
        Command::VerifyAll => {
            let results = verify::run_all(seed);
            let all_passed = results.iter().all(|r| r.passed);
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                eprintln!("[{status}] {}: {}", r.name, r.details);
            }
            let report = verify::empirical_report(seed, 2000);
            let out = json!({
                "schema": SCHEMA_VERSION,
                "seed": seed,
                "passed": all_passed,
                "criteria": results.iter().map(|r| json!({
                    "name": r.name,
                    "passed": r.passed,
                    "details": r.details,
                })).collect::<Vec<_>>(),
                "empirical_constants": report.iter().map(|r| json!({
                    "ell": r.ell,
                    "maximal_ratios": r.maximal_ratios.iter()
                        .map(|(p, v)| json!({"p": p, "sup": v})).collect::<Vec<_>>(),
                    "square_l4_ratio": r.square_ratio,
                    "note": "logged statistic, no pass threshold beyond finiteness",
                })).collect::<Vec<_>>(),
            });
            if !all_passed {
                emit(cli.format, &out);
                std::process::exit(1);
            }
            Ok(Some(out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(value)) => {
            emit(cli.format, &value);
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: field `{}`: {}", e.field, e.message);
            ExitCode::from(2)
        }
    }
}
