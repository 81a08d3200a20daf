//! Command-line front end for the `catenoid` library.
//!
//! Exit codes: 0 success, 2 domain error, 3 solver failure, 4 configuration error.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use catenoid::asymptotics::{asymptotic_report, geometric_grid};
use catenoid::numerics::Tolerance;
use catenoid::spectrum::{index_total, mode_index_table};
use clap::{Parser, Subcommand};

use crate::commands::*;
use crate::error::{CliError, Result};
use crate::output::{emit, format_float, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "catenoid", version, about = "Free boundary catenoids in hyperbolic space: profiles, radii, spectra, asymptotics")]
pub struct Cli {
    /// Absolute tolerance of the numerical kernels.
    #[arg(long, global = true, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol_abs: f64,
    /// Relative tolerance of the numerical kernels.
    #[arg(long, global = true, default_value_t = 1e-12, allow_hyphen_values = true)]
    pub tol_rel: f64,
    /// Iteration budget of root finders and bracket searches.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file (atomically) instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Suppress warnings and progress messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Meridian profile on a uniform s-grid (theta = 0).
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        /// Defaults to -s0.
        #[arg(long, allow_hyphen_values = true)]
        s_min: Option<f64>,
        /// Defaults to s0.
        #[arg(long, allow_hyphen_values = true)]
        s_max: Option<f64>,
        #[arg(long, default_value_t = 101)]
        n: usize,
    },
    /// Free-boundary solution s0 and boundary radius r.
    Radius {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
    },
    /// Radial Robin eigenvalues of angular mode k below mu_max.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        mu_max: f64,
    },
    /// Mode-by-mode negative counts and kernel dimensions.
    Index {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        a: Vec<f64>,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
    },
    /// Convergence tables of both asymptotic laws.
    Asymptotics {
        #[arg(long, default_value_t = 1e2, allow_hyphen_values = true)]
        large_min: f64,
        #[arg(long, default_value_t = 1e6, allow_hyphen_values = true)]
        large_max: f64,
        #[arg(long, default_value_t = 5)]
        large_n: usize,
        #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
        eps_max: f64,
        #[arg(long, default_value_t = 4)]
        eps_n: usize,
        /// Grid points for the 1/a fit on [1e3, 1e6]; 0 skips the fit.
        #[arg(long, default_value_t = 6)]
        d1_n: usize,
    },
    /// Closed-form constants and their cross-checks.
    Constants,
    /// Runs a sweep described by a key = value configuration file.
    Sweep { config: PathBuf },
}

impl Cli {
    fn tolerance(&self) -> Result<Tolerance> {
        Tolerance::new(self.tol_abs, self.tol_rel)
            .map(|t| t.with_max_iter(self.max_iter))
            .and_then(Tolerance::validated)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 4 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn warn(cli: &Cli, msg: &str) {
    if !cli.quiet {
        eprintln!("warning: {msg}");
    }
}

fn base_table(columns: &[&str], command: &str, tol: &Tolerance) -> Table {
    let mut t = Table::new(columns);
    t.meta("tool_version", env!("CARGO_PKG_VERSION"));
    t.meta("command", command);
    t.meta("tolerance", tol);
    t
}

fn dispatch(cli: &Cli) -> Result<()> {
    let tol = cli.tolerance()?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Profile { a, s_min, s_max, n } => {
            let range = match (s_min, s_max) {
                (None, None) => None,
                (Some(lo), Some(hi)) => Some((*lo, *hi)),
                _ => return Err(CliError::Usage("give both --s-min and --s-max, or neither".into())),
            };
            let mut t = base_table(&PROFILE_COLUMNS, "profile", &tol);
            t.rows = profile_rows(*a, range, *n, &tol)?;
            t.meta("a", a);
            emit(&t.render(cli.format), out)
        }
        Command::Radius { a } => {
            let mut t = base_table(&RADIUS_COLUMNS, "radius", &tol);
            t.push(radius_row(*a, &tol)?);
            emit(&t.render(cli.format), out)
        }
        Command::Spectrum { a, k, mu_max } => {
            let s = spectrum_rows(*a, *k, *mu_max, &tol)?;
            let mut t = base_table(&SPECTRUM_COLUMNS, "spectrum", &tol);
            t.rows = s.rows;
            t.footer.push(format!("negatives={},kernel={}", s.negatives, s.kernel));
            for (key, v) in [("a", *a), ("mu_max", *mu_max)] {
                t.meta(key, v);
            }
            t.meta("k", k);
            t.meta("negatives", s.negatives);
            t.meta("kernel", s.kernel);
            emit(&t.render(cli.format), out)?;
            match s.failure {
                Some(e) => {
                    warn(cli, "spectrum is incomplete; listed eigenvalues are the ones isolated");
                    Err(e.into())
                }
                None => Ok(()),
            }
        }
        Command::Index { a, k_max } => {
            for &x in a {
                catenoid::geometry::make_params(x)?;
            }
            let rows = mode_index_table(a, *k_max, &tol);
            let mut t = base_table(&INDEX_COLUMNS, "index", &tol);
            t.rows = rows.iter().map(index_row).collect();
            t.footer.push(EXPLORATORY.to_string());
            for &x in a {
                t.footer.push(format!("index_total a={} k<={k_max}: {}", format_float(x), index_total(&rows, x)));
            }
            t.meta("label", "EXPLORATORY");
            emit(&t.render(cli.format), out)?;
            let failed: Vec<String> =
                rows.iter().filter_map(|r| r.failure.as_ref().map(|f| format!("a={} k={}: {f}", r.a, r.k))).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                for f in &failed {
                    warn(cli, f);
                }
                Err(catenoid::Error::NonConvergence { what: "index table", detail: format!("{} row(s) failed", failed.len()) }.into())
            }
        }
        Command::Asymptotics { large_min, large_max, large_n, eps_min, eps_max, eps_n, d1_n } => {
            let large = geometric_grid(*large_min, *large_max, *large_n)?;
            let eps = geometric_grid(*eps_min, *eps_max, *eps_n)?;
            let d1_grid = if *d1_n == 0 { Vec::new() } else { geometric_grid(1e3, 1e6, *d1_n)? };
            let report = asymptotic_report(&large, &eps, &d1_grid, &tol)?;
            let mut t = base_table(&CONVERGENCE_COLUMNS, "asymptotics", &tol);
            t.rows.extend(report.large_a.iter().map(|r| convergence_row(r, None)));
            t.rows.extend(report.degenerate.iter().map(|r| convergence_row(r, Some(r.a - 0.5))));
            let c = &report.constants;
            t.footer.push(format!(
                "d_inf={} s0_shift={} c_star={} rho_star={}",
                format_float(c.d_inf),
                format_float(c.s0_shift),
                format_float(c.c_star),
                format_float(c.rho_star)
            ));
            if let Some(d1) = &report.d1 {
                t.footer.push(d1_footer(d1));
            }
            t.meta("constants", c);
            t.meta("checks", report.checks);
            t.meta("i_inf", report.i_inf);
            t.meta("d1", report.d1.map(|d| serde_json::json!({ "estimate": d, "label": "EXPLORATORY" })));
            emit(&t.render(cli.format), out)
        }
        Command::Constants => {
            let mut t = constants_table(&tol)?;
            t.meta("tool_version", env!("CARGO_PKG_VERSION"));
            t.meta("command", "constants");
            t.meta("tolerance", tol);
            emit(&t.render(cli.format), out)
        }
        Command::Sweep { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| CliError::Config {
                path: config.display().to_string(),
                line: 0,
                column: 0,
                message: e.to_string(),
            })?;
            let cfg = config::parse_config(&text, &config.display().to_string())?;
            let record = sweep::execute(&cfg)?;
            for w in &record.warnings {
                warn(cli, &format!("grid point {}: {}", w.row, w.message));
            }
            if !cli.quiet {
                let n = record.rows.as_array().map_or(0, Vec::len);
                eprintln!("wrote {n} row(s) to {}", cfg.output_path.display());
            }
            Ok(())
        }
    }
}
