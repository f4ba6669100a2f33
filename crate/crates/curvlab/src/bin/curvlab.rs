//! Command-line front end: exposes the metric catalog and the global
//! verifiers, emitting CSV profile tables and machine-readable JSON reports.
//!
//! Exit codes: 0 success / verified, 1 verification failure, 2 usage or
//! input errors.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use curvlab::frame::CoframeConvention;
use curvlab::metric::{self, DiagonalMetric, End};
use curvlab::verify;

#[derive(Parser)]
#[command(
    name = "curvlab",
    about = "Curvature laboratory for diagonal cohomogeneity-one 4-metrics",
    version
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for quasi-random plane sampling.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Page-metric verifiers.
    Page {
        #[command(subcommand)]
        command: PageCommand,
    },
    /// Euler characteristic and signature by curvature quadrature, plus the
    /// curvature inequalities.
    CharNumbers {
        #[command(flatten)]
        metric: MetricArg,
        /// Gauss-Legendre order (error estimated against order 2Q).
        #[arg(long, default_value_t = 128)]
        order: usize,
    },
    /// Global sectional-curvature range scan.
    KRange {
        #[command(flatten)]
        metric: MetricArg,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 32)]
        planes: usize,
    },
    /// Solve the Page quartic and report the derived constants.
    SolveA,
    /// Calibrate the coframe convention against the Einstein property.
    Calibrate {
        /// Candidate structure constants.
        #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [1.0, 2.0])]
        candidates: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum PageCommand {
    /// Coefficient and curvature profile table (CSV).
    Profile {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Chart: polar r on (0, pi) or x = cos r on (-1, 1).
        #[arg(long, value_enum, default_value_t = Coord::R)]
        coord: Coord,
    },
    /// Einstein residual report; exit 0 iff residual <= tolerance.
    VerifyEinstein {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Certificate that K01 takes both signs on (-1, 1).
    SignChange {
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Totally-geodesic residuals for both end spheres.
    BoltCheck {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Coord {
    R,
    X,
}

#[derive(Args)]
struct MetricArg {
    /// One of `page`, `s4`, `fs`, or a path to a metric config file.
    #[arg(long)]
    metric: String,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: serde_json::Value,
    results: serde_json::Value,
    status: Status,
}

#[derive(Serialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Info,
}

enum Output {
    Json(RunReport),
    Csv(String),
}

fn resolve_metric(selector: &str) -> Result<DiagonalMetric, String> {
    let conv = CoframeConvention::calibrated();
    match selector {
        "page" => Ok(metric::page_metric_r(&metric::solve_page_constant(), conv)),
        "s4" => metric::round_sphere_metric(conv).map_err(|e| e.to_string()),
        "fs" => metric::fubini_study_metric(conv).map_err(|e| e.to_string()),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read metric config {path:?}: {e}"))?;
            metric::custom_metric(&text).map_err(|e| e.to_string())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, String> {
    match &cli.command {
        Command::Page { command } => run_page(command, cli.seed),
        Command::CharNumbers { metric, order } => {
            let m = resolve_metric(&metric.metric)?;
            let nums = curvlab::char_numbers(&m, *order).map_err(|e| e.to_string())?;
            let predicates = curvlab::inequality_predicates(nums.chi, nums.tau);
            Ok(Output::Json(RunReport {
                command: "char-numbers".into(),
                inputs: json!({ "metric": metric.metric, "order": order }),
                results: json!({ "char_numbers": nums, "inequalities": predicates }),
                status: Status::Info,
            }))
        }
        Command::KRange {
            metric,
            points,
            planes,
        } => {
            let m = resolve_metric(&metric.metric)?;
            let range =
                curvlab::k_range_scan(&m, *points, *planes, cli.seed).map_err(|e| e.to_string())?;
            Ok(Output::Json(RunReport {
                command: "k-range".into(),
                inputs: json!({
                    "metric": metric.metric,
                    "points": points,
                    "planes": planes,
                    "seed": cli.seed,
                }),
                results: serde_json::to_value(range).expect("serializable"),
                status: Status::Info,
            }))
        }
        Command::SolveA => {
            let pc = metric::solve_page_constant();
            let residual = metric::page_quartic(pc.a);
            Ok(Output::Json(RunReport {
                command: "solve-a".into(),
                inputs: json!({}),
                results: json!({
                    "constants": pc,
                    "quartic_residual": residual,
                    "uniqueness_grid_points": 10_000,
                }),
                status: if residual.abs() < 1e-13 {
                    Status::Pass
                } else {
                    Status::Fail
                },
            }))
        }
        Command::Calibrate { candidates } => match curvlab::calibrate_convention(candidates) {
            Ok(report) => Ok(Output::Json(RunReport {
                command: "calibrate".into(),
                inputs: json!({ "candidates": candidates }),
                results: serde_json::to_value(report).expect("serializable"),
                status: Status::Pass,
            })),
            Err(verify::VerifyError::CalibrationFailed {
                best_kappa,
                best_residual,
            }) => Ok(Output::Json(RunReport {
                command: "calibrate".into(),
                inputs: json!({ "candidates": candidates }),
                results: json!({
                    "best_kappa": best_kappa,
                    "best_residual": best_residual,
                }),
                status: Status::Fail,
            })),
            Err(e) => Err(e.to_string()),
        },
    }
}

fn run_page(command: &PageCommand, _seed: u64) -> Result<Output, String> {
    let pc = metric::solve_page_constant();
    let conv = CoframeConvention::calibrated();
    match command {
        PageCommand::Profile { samples, coord } => {
            let m = match coord {
                Coord::R => metric::page_metric_r(&pc, conv),
                Coord::X => metric::page_metric_x(&pc, conv),
            };
            let (t0, t1) = m.domain();
            let mut csv = String::from("t,A,B,C,D,K01,K02,K03,K12,s\n");
            for i in 0..*samples {
                let t = t0 + (t1 - t0) * (i as f64 + 0.5) / *samples as f64;
                let coeffs = m.coefficients(t).map_err(|e| e.to_string())?;
                let rc = curvlab::riemann_frame(&m, t).map_err(|e| e.to_string())?;
                let (_, dec) = rc.decompose();
                writeln!(
                    csv,
                    "{t},{},{},{},{},{},{},{},{},{}",
                    coeffs[0].val,
                    coeffs[1].val,
                    coeffs[2].val,
                    coeffs[3].val,
                    rc.sectional_frame(0, 1),
                    rc.sectional_frame(0, 2),
                    rc.sectional_frame(0, 3),
                    rc.sectional_frame(1, 2),
                    dec.s,
                )
                .expect("string write");
            }
            Ok(Output::Csv(csv))
        }
        PageCommand::VerifyEinstein { samples, tol } => {
            let m = metric::page_metric_r(&pc, conv);
            let report = curvlab::einstein_report(&m, *samples).map_err(|e| e.to_string())?;
            let pass = report.max_residual <= *tol;
            Ok(Output::Json(RunReport {
                command: "page verify-einstein".into(),
                inputs: json!({ "samples": samples, "tol": tol, "kappa": conv.kappa }),
                results: serde_json::to_value(report).expect("serializable"),
                status: if pass { Status::Pass } else { Status::Fail },
            }))
        }
        PageCommand::SignChange { n } => {
            let scan = curvlab::sign_change_scan(|x| curvlab::page_k01(&pc, x), (-1.0, 1.0), *n)
                .map_err(|e| e.to_string())?;
            let pass = scan.certificate().is_some();
            Ok(Output::Json(RunReport {
                command: "page sign-change".into(),
                inputs: json!({ "n": n }),
                results: serde_json::to_value(scan).expect("serializable"),
                status: if pass { Status::Pass } else { Status::Fail },
            }))
        }
        PageCommand::BoltCheck { tol } => {
            let m = metric::page_metric_r(&pc, conv);
            let mut reports = Vec::new();
            let mut pass = true;
            for end in [End::Lower, End::Upper] {
                let report = curvlab::bolt_geodesy_check(&m, end).map_err(|e| e.to_string())?;
                pass &= report.profile_derivative_residual < *tol
                    && report.shape_operator_limit < *tol;
                reports.push(report);
            }
            Ok(Output::Json(RunReport {
                command: "page bolt-check".into(),
                inputs: json!({ "tol": tol }),
                results: serde_json::to_value(reports).expect("serializable"),
                status: if pass { Status::Pass } else { Status::Fail },
            }))
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {path:?}: {e}")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Output::Csv(csv)) => match emit(cli.out.as_ref(), csv.trim_end()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Ok(Output::Json(report)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match emit(cli.out.as_ref(), &text) {
                Ok(()) if report.status != Status::Fail => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
