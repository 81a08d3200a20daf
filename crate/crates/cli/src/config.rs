//! Sweep configuration: flat `key = value` lines, `#` comments, comma lists.
//!
//! ```text
//! mode = index
//! a_values = 0.6, 1, 2
//! k_max = 3
//! output_path = index.csv
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use catenoid::geometry::A_GUARD;
use catenoid::numerics::Tolerance;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::output::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Profile,
    Radius,
    Spectrum,
    Index,
    AsymptoticsLarge,
    AsymptoticsDegenerate,
    Constants,
}

impl SweepMode {
    const ALL: [SweepMode; 7] = [
        SweepMode::Profile,
        SweepMode::Radius,
        SweepMode::Spectrum,
        SweepMode::Index,
        SweepMode::AsymptoticsLarge,
        SweepMode::AsymptoticsDegenerate,
        SweepMode::Constants,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepMode::Profile => "profile",
            SweepMode::Radius => "radius",
            SweepMode::Spectrum => "spectrum",
            SweepMode::Index => "index",
            SweepMode::AsymptoticsLarge => "asymptotics-large",
            SweepMode::AsymptoticsDegenerate => "asymptotics-degenerate",
            SweepMode::Constants => "constants",
        }
    }

    /// The degenerate mode is parametrized by `eps = a - 1/2` instead of `a`.
    pub fn uses_eps(self) -> bool {
        self == SweepMode::AsymptoticsDegenerate
    }
}

/// Explicit values or `count` points equally spaced in `ln` from `min` to `max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Values(Vec<f64>),
    Range { min: f64, max: f64, count: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::Values(v) => v.clone(),
            Grid::Range { min, max, count } => {
                catenoid::asymptotics::geometric_grid(*min, *max, *count).expect("validated when parsed")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub mode: SweepMode,
    /// `a` values, or `eps` values for the degenerate mode; absent for constants.
    pub grid: Option<Grid>,
    pub k_max: u32,
    pub s_samples: usize,
    pub mu_max: f64,
    pub tolerance: Tolerance,
    pub output_path: PathBuf,
    pub output_format: Format,
}

const KEYS: [&str; 13] = [
    "mode",
    "a_values",
    "a_range",
    "eps_values",
    "eps_range",
    "k_max",
    "s_samples",
    "mu_max",
    "tol_abs",
    "tol_rel",
    "max_iter",
    "output_path",
    "output_format",
];

struct Entry<'a> {
    line: usize,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

struct Parser<'a> {
    path: &'a str,
}

impl Parser<'_> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> CliError {
        CliError::Config { path: self.path.to_string(), line, column, message: message.into() }
    }

    fn items<'v>(&self, e: &Entry<'v>) -> Vec<(usize, &'v str)> {
        let mut out = Vec::new();
        let mut offset = 0;
        for part in e.value.split(',') {
            let lead = part.chars().count() - part.trim_start().chars().count();
            out.push((e.value_col + offset + lead, part.trim()));
            offset += part.chars().count() + 1;
        }
        out
    }

    fn number(&self, line: usize, col: usize, text: &str) -> Result<f64> {
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(line, col, format!("expected a finite number, found `{text}`"))),
        }
    }

    fn integer<T: std::str::FromStr>(&self, e: &Entry) -> Result<T> {
        e.value.parse().map_err(|_| self.err(e.line, e.value_col, format!("expected a non-negative integer, found `{}`", e.value)))
    }

    fn single_number(&self, e: &Entry) -> Result<f64> {
        self.number(e.line, e.value_col, e.value)
    }

    fn check_point(&self, line: usize, col: usize, v: f64, eps: bool) -> Result<()> {
        let ok = if eps { v > A_GUARD } else { v > 0.5 + A_GUARD };
        if ok {
            Ok(())
        } else if eps {
            Err(self.err(line, col, format!("eps must exceed {A_GUARD:e}, got {v}")))
        } else {
            Err(self.err(line, col, format!("a must satisfy a > 1/2 + {A_GUARD:e}, got {v}")))
        }
    }

    fn values(&self, e: &Entry, eps: bool) -> Result<Grid> {
        let mut v = Vec::new();
        for (col, text) in self.items(e) {
            if text.is_empty() {
                return Err(self.err(e.line, col, "empty list item"));
            }
            let x = self.number(e.line, col, text)?;
            self.check_point(e.line, col, x, eps)?;
            v.push(x);
        }
        Ok(Grid::Values(v))
    }

    fn range(&self, e: &Entry, eps: bool) -> Result<Grid> {
        let items = self.items(e);
        if items.len() != 3 {
            return Err(self.err(e.line, e.value_col, format!("range needs `min, max, count`, found {} item(s)", items.len())));
        }
        let min = self.number(e.line, items[0].0, items[0].1)?;
        let max = self.number(e.line, items[1].0, items[1].1)?;
        let count: usize = items[2]
            .1
            .parse()
            .map_err(|_| self.err(e.line, items[2].0, format!("expected an integer count, found `{}`", items[2].1)))?;
        self.check_point(e.line, items[0].0, min, eps)?;
        if !(max > min) {
            return Err(self.err(e.line, items[1].0, format!("range needs min < max, got {min} and {max}")));
        }
        if count < 2 {
            return Err(self.err(e.line, items[2].0, format!("range count must be at least 2, got {count}")));
        }
        Ok(Grid::Range { min, max, count })
    }
}

/// Parses a sweep configuration. `path` is used only in error messages.
pub fn parse_config(text: &str, path: &str) -> Result<SweepConfig> {
    let p = Parser { path };
    let mut entries: Vec<(&str, Entry)> = Vec::new();
    let mut n_lines = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        n_lines = line;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            let col = content.chars().count() - content.trim_start().chars().count() + 1;
            return Err(p.err(line, col, "expected `key = value`"));
        };
        let key_part = &content[..eq];
        let key = key_part.trim();
        let key_col = key_part.chars().count() - key_part.trim_start().chars().count() + 1;
        if key.is_empty() {
            return Err(p.err(line, key_col, "missing key before `=`"));
        }
        if !KEYS.contains(&key) {
            return Err(p.err(line, key_col, format!("unknown key `{key}`")));
        }
        if let Some((_, prev)) = entries.iter().find(|(k, _)| *k == key) {
            return Err(p.err(line, key_col, format!("duplicate key `{key}` (first set on line {})", prev.line)));
        }
        let value_part = &content[eq + 1..];
        let value = value_part.trim();
        let value_col = content[..eq + 1].chars().count() + value_part.chars().count() - value_part.trim_start().chars().count() + 1;
        if value.is_empty() {
            return Err(p.err(line, value_col, format!("missing value for `{key}`")));
        }
        entries.push((key, Entry { line, key_col, value, value_col }));
    }

    let get = |k: &str| entries.iter().find(|(key, _)| *key == k).map(|(_, e)| e);
    let eof = n_lines + 1;

    let mode_entry = get("mode").ok_or_else(|| p.err(eof, 1, "missing required key `mode`"))?;
    let mode = SweepMode::ALL.into_iter().find(|m| m.as_str() == mode_entry.value).ok_or_else(|| {
        let names: Vec<&str> = SweepMode::ALL.iter().map(|m| m.as_str()).collect();
        p.err(mode_entry.line, mode_entry.value_col, format!("unknown mode `{}` (expected one of {})", mode_entry.value, names.join(", ")))
    })?;

    let (values_key, range_key) = if mode.uses_eps() { ("eps_values", "eps_range") } else { ("a_values", "a_range") };
    for key in ["a_values", "a_range", "eps_values", "eps_range"] {
        if let Some(e) = get(key) {
            if mode == SweepMode::Constants {
                return Err(p.err(e.line, e.key_col, "mode constants takes no grid"));
            }
            if key != values_key && key != range_key {
                return Err(p.err(e.line, e.key_col, format!("`{key}` does not apply to mode {}", mode.as_str())));
            }
        }
    }
    let grid = match (get(values_key), get(range_key)) {
        (Some(a), Some(b)) => {
            let later = if a.line > b.line { a } else { b };
            return Err(p.err(later.line, later.key_col, format!("give either `{values_key}` or `{range_key}`, not both")));
        }
        (Some(e), None) => Some(p.values(e, mode.uses_eps())?),
        (None, Some(e)) => Some(p.range(e, mode.uses_eps())?),
        (None, None) if mode == SweepMode::Constants => None,
        (None, None) => return Err(p.err(eof, 1, format!("mode {} needs `{values_key}` or `{range_key}`", mode.as_str()))),
    };

    let k_max = get("k_max").map(|e| p.integer::<u32>(e)).transpose()?.unwrap_or(3);
    let s_samples = match get("s_samples") {
        Some(e) => {
            let n: usize = p.integer(e)?;
            if n < 2 {
                return Err(p.err(e.line, e.value_col, format!("s_samples must be at least 2, got {n}")));
            }
            n
        }
        None => 101,
    };
    let mu_max = get("mu_max").map(|e| p.single_number(e)).transpose()?.unwrap_or(1.0);

    let mut tolerance = Tolerance::default();
    if let Some(e) = get("tol_abs") {
        tolerance.abs_tol = p.single_number(e)?;
    }
    if let Some(e) = get("tol_rel") {
        tolerance.rel_tol = p.single_number(e)?;
    }
    if let Some(e) = get("max_iter") {
        tolerance.max_iter = p.integer(e)?;
    }
    let tolerance = tolerance.validated().map_err(|err| {
        let at = get("tol_abs").or(get("tol_rel")).or(get("max_iter")).map_or((eof, 1), |e| (e.line, e.value_col));
        p.err(at.0, at.1, err.to_string())
    })?;

    let output_path = get("output_path").map(|e| PathBuf::from(e.value)).ok_or_else(|| p.err(eof, 1, "missing required key `output_path`"))?;
    let output_format = match get("output_format") {
        None => Format::Csv,
        Some(e) => match e.value {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(p.err(e.line, e.value_col, format!("unknown output_format `{other}` (expected csv or json)"))),
        },
    };

    Ok(SweepConfig { mode, grid, k_max, s_samples, mu_max, tolerance, output_path, output_format })
}

impl SweepConfig {
    /// Canonical text form; parsing it gives back an equal configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode = {}", self.mode.as_str());
        let prefix = if self.mode.uses_eps() { "eps" } else { "a" };
        match &self.grid {
            Some(Grid::Values(v)) => {
                let items: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
                let _ = writeln!(out, "{prefix}_values = {}", items.join(", "));
            }
            Some(Grid::Range { min, max, count }) => {
                let _ = writeln!(out, "{prefix}_range = {min:e}, {max:e}, {count}");
            }
            None => {}
        }
        let _ = writeln!(out, "k_max = {}", self.k_max);
        let _ = writeln!(out, "s_samples = {}", self.s_samples);
        let _ = writeln!(out, "mu_max = {:e}", self.mu_max);
        let _ = writeln!(out, "tol_abs = {:e}", self.tolerance.abs_tol);
        let _ = writeln!(out, "tol_rel = {:e}", self.tolerance.rel_tol);
        let _ = writeln!(out, "max_iter = {}", self.tolerance.max_iter);
        let _ = writeln!(out, "output_path = {}", self.output_path.display());
        let _ = writeln!(out, "output_format = {}", self.output_format.as_str());
        out
    }
}
