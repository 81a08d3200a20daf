use std::path::PathBuf;

use catenoid::asymptotics::{degenerate_table, estimate_d1, large_a_table};
use catenoid::numerics::Tolerance;
use catenoid::spectrum::{index_total, mode_index_table};
use catenoid::Error;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::commands::*;
use crate::config::{SweepConfig, SweepMode};
use crate::error::Result;
use crate::output::{format_float, write_atomic, Cell, Table};

/// A non-fatal problem with one grid point; `row` indexes the configured grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Warning {
    pub row: usize,
    pub message: String,
}

/// Sidecar metadata of one sweep, written next to the output as `<output>.meta.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub config_echo: SweepConfig,
    /// Canonical configuration text; running it again reproduces the data file.
    pub config_text: String,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
    pub output_path: PathBuf,
    pub rows: Value,
    pub warnings: Vec<Warning>,
}

pub fn sidecar_path(output: &std::path::Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Evaluates `f` on every grid point concurrently; results come back in grid order.
fn per_point<F>(points: &[f64], f: F) -> (Vec<Vec<Vec<Cell>>>, Vec<Warning>)
where
    F: Fn(f64) -> Result<Vec<Vec<Cell>>, Error> + Sync,
{
    let results: Vec<_> = points.par_iter().map(|&x| f(x)).collect();
    let mut rows = Vec::with_capacity(points.len());
    let mut warnings = Vec::new();
    for (row, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => rows.push(v),
            Err(e) => warnings.push(Warning { row, message: e.to_string() }),
        }
    }
    (rows, warnings)
}

fn with_columns(prefix: &[&str], rest: &[&str]) -> Vec<String> {
    prefix.iter().chain(rest).map(|c| c.to_string()).collect()
}

/// Computes the table for `cfg` without writing anything.
pub fn build_table(cfg: &SweepConfig) -> Result<(Table, Vec<Warning>)> {
    let tol = cfg.tolerance;
    let points = cfg.grid.as_ref().map(|g| g.points()).unwrap_or_default();
    let mut table = Table::default();
    let mut warnings = Vec::new();
    match cfg.mode {
        SweepMode::Constants => table = constants_table(&tol)?,
        SweepMode::Profile => {
            table.columns = with_columns(&["a"], &PROFILE_COLUMNS);
            let n = cfg.s_samples;
            absorb(&mut table, &mut warnings, per_point(&points, |a| Ok(prefixed(a, profile_rows(a, None, n, &tol)?))));
        }
        SweepMode::Radius => {
            table.columns = with_columns(&[], &RADIUS_COLUMNS);
            absorb(&mut table, &mut warnings, per_point(&points, |a| Ok(vec![radius_row(a, &tol)?])));
        }
        SweepMode::Spectrum => {
            table.columns = with_columns(&["a", "k"], &SPECTRUM_COLUMNS);
            let (k_max, mu_max) = (cfg.k_max, cfg.mu_max);
            let results: Vec<_> = points.par_iter().map(|&a| spectrum_block(a, k_max, mu_max, &tol)).collect();
            for (row, r) in results.into_iter().enumerate() {
                match r {
                    Ok((rows, notes, failure)) => {
                        table.rows.extend(rows);
                        table.footer.extend(notes);
                        if let Some(message) = failure {
                            warnings.push(Warning { row, message });
                        }
                    }
                    Err(e) => warnings.push(Warning { row, message: e.to_string() }),
                }
            }
        }
        SweepMode::Index => {
            table.columns = with_columns(&[], &INDEX_COLUMNS);
            let rows = mode_index_table(&points, cfg.k_max, &tol);
            for r in &rows {
                if let Some(f) = &r.failure {
                    let row = points.iter().position(|&a| a == r.a).unwrap_or(0);
                    warnings.push(Warning { row, message: format!("k={}: {f}", r.k) });
                }
                table.rows.push(index_row(r));
            }
            table.footer.push(EXPLORATORY.to_string());
            for &a in &points {
                table.footer.push(format!("index_total a={} k<={}: {}", format_float(a), cfg.k_max, index_total(&rows, a)));
            }
        }
        SweepMode::AsymptoticsLarge => {
            table.columns = with_columns(&[], &CONVERGENCE_COLUMNS);
            absorb(
                &mut table,
                &mut warnings,
                per_point(&points, |a| Ok(large_a_table(&[a], &tol)?.iter().map(|r| convergence_row(r, None)).collect())),
            );
            match estimate_d1(&points, &tol) {
                Ok(d1) => table.footer.push(d1_footer(&d1)),
                Err(e) => table.footer.push(format!("d1 not estimated: {e}")),
            }
        }
        SweepMode::AsymptoticsDegenerate => {
            table.columns = with_columns(&[], &CONVERGENCE_COLUMNS);
            absorb(
                &mut table,
                &mut warnings,
                per_point(&points, |eps| Ok(degenerate_table(&[eps], &tol)?.iter().map(|r| convergence_row(r, Some(eps))).collect())),
            );
        }
    }
    table.meta("tool_version", env!("CARGO_PKG_VERSION"));
    table.meta("mode", cfg.mode.as_str());
    table.meta("config", cfg);
    Ok((table, warnings))
}

fn absorb(table: &mut Table, warnings: &mut Vec<Warning>, (rows, w): (Vec<Vec<Vec<Cell>>>, Vec<Warning>)) {
    table.rows.extend(rows.into_iter().flatten());
    warnings.extend(w);
}

fn prefixed(a: f64, rows: Vec<Vec<Cell>>) -> Vec<Vec<Cell>> {
    rows.into_iter()
        .map(|r| {
            let mut v = Vec::with_capacity(r.len() + 1);
            v.push(Cell::Float(a));
            v.extend(r);
            v
        })
        .collect()
}

type SpectrumBlock = (Vec<Vec<Cell>>, Vec<String>, Option<String>);

fn spectrum_block(a: f64, k_max: u32, mu_max: f64, tol: &Tolerance) -> Result<SpectrumBlock, Error> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for k in 0..=k_max {
        let s = spectrum_rows(a, k, mu_max, tol)?;
        for r in s.rows {
            let mut v = vec![Cell::Float(a), Cell::from(k)];
            v.extend(r);
            rows.push(v);
        }
        notes.push(format!("a={} k={k}: negatives={},kernel={}", format_float(a), s.negatives, s.kernel));
        if let Some(e) = s.failure {
            failures.push(format!("k={k}: {e}"));
        }
    }
    Ok((rows, notes, (!failures.is_empty()).then(|| failures.join("; "))))
}

/// Runs the sweep, writes the output and its sidecar atomically, and returns the record.
pub fn execute(cfg: &SweepConfig) -> Result<RunRecord> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let (table, warnings) = build_table(cfg)?;
    write_atomic(&cfg.output_path, &table.render(cfg.output_format))?;
    let record = RunRecord {
        config_echo: cfg.clone(),
        config_text: cfg.to_text(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_at,
        finished_at: chrono::Utc::now().to_rfc3339(),
        output_path: cfg.output_path.clone(),
        rows: table.rows_json(),
        warnings,
    };
    let mut meta = serde_json::to_string_pretty(&record).expect("run records serialize");
    meta.push('\n');
    write_atomic(&sidecar_path(&cfg.output_path), &meta)?;
    Ok(record)
}
