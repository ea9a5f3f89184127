#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use robin_gap_cli::commands::{self, ZeroKind};
use robin_gap_cli::config::{log_grid, threads_from_env, RunConfig};
use robin_gap_cli::output::{table_to_csv, write_atomic, Report};
use robin_gap_cli::CliError;

/// Large-coupling spectral experiments for the Robin Laplacian on the unit
/// disc: certified Bessel zero tables, Dirichlet-to-Neumann spectra,
/// resolvent-gap norms, eigenvalue expansions, and the acceptance suite.
#[derive(Parser)]
#[command(name = "robin-gap", version, disable_help_subcommand = true)]
struct Cli {
    /// Flat JSON config file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Include wall-clock timings in the JSON report (off by default so
    /// reruns are byte-identical).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct OutArgs {
    /// Write the primary table as CSV here (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write the full JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certified zeros of J_n and J'_n with brackets and residuals.
    Zeros {
        /// dirichlet | neumann | both
        #[arg(long, default_value = "both")]
        kind: String,
        /// Order range, inclusive: `0..2` or a single `3`.
        #[arg(long = "n", default_value = "0..2")]
        n: String,
        /// Index range, inclusive (1-based).
        #[arg(long = "m", default_value = "1..3")]
        m: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Dirichlet-to-Neumann eigenvalues and coupling weights.
    Dtn {
        /// Order range, inclusive.
        #[arg(long = "n", default_value = "0..16")]
        n: String,
        /// Truncation of the weight sums (m_trunc).
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact Robin eigenvalues of one disc mode over a β list.
    RobinEig {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Single coupling value.
        #[arg(long)]
        beta: Option<f64>,
        /// Log grid `lo:hi:points`.
        #[arg(long = "beta-grid")]
        beta_grid: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Schatten / operator norms of D_β - D_∞ (or of D_∞ itself).
    GapNorms {
        /// Which operator: `gap` (D_β - D_∞) or `dinf` (D_∞).
        #[arg(long, default_value = "gap")]
        operator: String,
        /// Schatten exponent p ≥ 1/2, or `inf` for the operator norm.
        #[arg(long, default_value = "1")]
        p: String,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long = "beta-grid")]
        beta_grid: Option<String>,
        /// Mode-table size (n_max) of the diagonal model.
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Convergence-rate fits for the operator and trace norms.
    Rates {
        #[arg(long = "beta-grid")]
        beta_grid: Option<String>,
        /// Mode-table size (n_max) of the diagonal model.
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Richardson extraction of the eigenvalue expansion for one mode.
    Expansion {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        beta0: Option<f64>,
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long)]
        levels: Option<u32>,
        /// Cross-space ladder truncation (q_trunc).
        #[arg(long)]
        trunc: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the acceptance suite and write the report.
    Verify {
        /// Output directory (default: config `output_dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the effective configuration as JSON and exit.
        #[arg(long)]
        print_config: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap would exit 2; usage errors are contractually 1
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let timings = cli.timings;

    match cli.cmd {
        Cmd::Zeros { kind, n, m, out } => {
            let kind = parse_kind(&kind)?;
            let n = parse_range(&n)?;
            let m = parse_range(&m)?;
            let report = commands::cmd_zeros(&cfg, kind, n, m, timings)?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dtn { n, trunc, out } => {
            let n = parse_range(&n)?;
            let report = commands::cmd_dtn(&cfg, n, trunc.unwrap_or(cfg.m_trunc), timings)?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::RobinEig {
            n,
            m,
            beta,
            beta_grid,
            out,
        } => {
            let betas = betas_from(beta, beta_grid.as_deref(), &cfg)?;
            let report = commands::cmd_robin_eig(&cfg, n, m, &betas, timings)?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GapNorms {
            operator,
            p,
            beta,
            beta_grid,
            trunc,
            out,
        } => {
            let target = match operator.as_str() {
                "gap" => commands::NormTarget::Gap,
                "dinf" => commands::NormTarget::Dinf,
                other => {
                    return Err(CliError::usage(format!(
                        "operator must be gap|dinf, got {other:?}"
                    )))
                }
            };
            let p = parse_p(&p)?;
            let betas = betas_from(beta, beta_grid.as_deref(), &cfg)?;
            let report = commands::cmd_gap_norms(
                &cfg,
                target,
                p,
                &betas,
                trunc.unwrap_or(cfg.n_max),
                timings,
            )?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Rates {
            beta_grid,
            trunc,
            out,
        } => {
            let betas = betas_from(None, beta_grid.as_deref(), &cfg)?;
            let report = commands::cmd_rates(&cfg, &betas, trunc.unwrap_or(cfg.n_max), timings)?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Expansion {
            n,
            m,
            beta0,
            ratio,
            levels,
            trunc,
            out,
        } => {
            let report = commands::cmd_expansion(
                &cfg,
                n,
                m,
                beta0.unwrap_or(cfg.beta0),
                ratio.unwrap_or(cfg.ratio),
                levels.unwrap_or(cfg.levels),
                trunc.unwrap_or(cfg.q_trunc),
                timings,
            )?;
            emit(&report, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { out, print_config } => {
            if print_config {
                println!("{}", serde_json::to_string_pretty(&cfg).unwrap());
                return Ok(ExitCode::SUCCESS);
            }
            let threads = threads_from_env()?;
            let (report, all_passed) = commands::cmd_verify(&cfg, threads, timings)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            write_verify_outputs(&report, &dir)?;
            print_verify_summary(&report, &dir);
            if all_passed {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

/// Primary table to `--out` (or stdout), full report to `--json`.
fn emit(report: &Report, out: &OutArgs) -> Result<(), CliError> {
    let csv = table_to_csv(&report.tables[0]);
    match &out.out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            println!(
                "wrote {} ({} rows)",
                path.display(),
                report.tables[0].rows.len()
            );
        }
        None => print!("{csv}"),
    }
    if let Some(path) = &out.json {
        write_atomic(path, &report.json_bytes())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    for flag in &report.flags {
        eprintln!("note: {flag}");
    }
    Ok(())
}

fn write_verify_outputs(report: &Report, dir: &Path) -> Result<(), CliError> {
    let to_io =
        |e: std::io::Error| CliError::usage(format!("cannot write into {}: {e}", dir.display()));
    write_atomic(&dir.join("report.json"), &report.json_bytes()).map_err(to_io)?;
    for table in &report.tables {
        write_atomic(
            &dir.join(format!("{}.csv", table.name)),
            table_to_csv(table).as_bytes(),
        )
        .map_err(to_io)?;
    }
    Ok(())
}

fn print_verify_summary(report: &Report, dir: &Path) {
    let criteria = &report.tables[0];
    for row in &criteria.rows {
        use robin_gap::verify::Cell;
        let (Cell::Int(id), Cell::Text(name), Cell::Bool(passed), Cell::Text(details)) =
            (&row[0], &row[1], &row[2], &row[3])
        else {
            continue;
        };
        println!(
            "criterion {:02} [{}] {} — {}",
            id,
            if *passed { "PASS" } else { "FAIL" },
            name,
            details
        );
    }
    for flag in &report.flags {
        println!("             note: {flag}");
    }
    println!("report written to {}", dir.join("report.json").display());
}

fn parse_kind(s: &str) -> Result<ZeroKind, CliError> {
    match s {
        "dirichlet" => Ok(ZeroKind::Dirichlet),
        "neumann" => Ok(ZeroKind::Neumann),
        "both" => Ok(ZeroKind::Both),
        _ => Err(CliError::usage(format!(
            "kind must be dirichlet|neumann|both, got {s:?}"
        ))),
    }
}

/// `a..b` (inclusive) or a single integer.
fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let parse_u32 = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| CliError::usage(format!("bad integer {t:?}")))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (lo, hi) = (parse_u32(a)?, parse_u32(b)?);
        if hi < lo {
            return Err(CliError::usage(format!("empty range {s:?}")));
        }
        Ok((lo, hi))
    } else {
        let v = parse_u32(s)?;
        Ok((v, v))
    }
}

/// `lo:hi:points`, log-spaced.
fn parse_beta_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "beta grid must be lo:hi:points, got {s:?}"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::usage("bad grid lo"))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::usage("bad grid hi"))?;
    let points: u32 = parts[2]
        .parse()
        .map_err(|_| CliError::usage("bad grid points"))?;
    if !(lo > 0.0) || hi <= lo || points < 2 {
        return Err(CliError::usage(
            "beta grid needs 0 < lo < hi and ≥ 2 points",
        ));
    }
    Ok(log_grid(lo, hi, points))
}

fn betas_from(
    beta: Option<f64>,
    grid: Option<&str>,
    cfg: &RunConfig,
) -> Result<Vec<f64>, CliError> {
    match (beta, grid) {
        (Some(_), Some(_)) => Err(CliError::usage(
            "--beta and --beta-grid are mutually exclusive",
        )),
        (Some(b), None) => {
            if !(b >= 0.0) {
                return Err(CliError::usage("beta must be ≥ 0"));
            }
            Ok(vec![b])
        }
        (None, Some(g)) => parse_beta_grid(g),
        (None, None) => Ok(cfg.beta_grid.clone()),
    }
}

fn parse_p(s: &str) -> Result<f64, CliError> {
    if s == "inf" {
        return Ok(f64::INFINITY);
    }
    let p: f64 = s
        .parse()
        .map_err(|_| CliError::usage(format!("p must be a number or `inf`, got {s:?}")))?;
    Ok(p)
}
