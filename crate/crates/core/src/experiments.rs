//! Config-driven parameter sweeps and single-instance analysis.
//!
//! A config is a plain-text file of `key = value` lines; `#` starts a
//! comment. Values may be scalars, comma lists, inclusive integer ranges
//! (`1..6`) or float grids (`lo:hi:n`), and list items may mix forms
//! (`0..3,5`). The relative planner level accepts `inf`.
//!
//! ```text
//! experiment = por_vs_f
//! f = 0.05:0.75:15
//! k = 1
//! delta = -1,0,1,2,inf
//! out = por.csv
//! ```
//!
//! Every table carries the full parameter tuple (`a, b, c, m`, and `f` where
//! it applies) so each row is self-describing. Numbers are written with 12
//! significant digits and `.` as decimal separator.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::design::{self, CooperationLevel};
use crate::error::{Error, Result};
use crate::level_k::{self, LevelSpec, RelativeLevel};
use crate::market::MarketParams;
use crate::oracles::GridSpec;
use crate::strategies::{self, RationalityDistribution};
use crate::welfare;

pub const KEYS: &[&str] = &[
    "experiment",
    "a",
    "b",
    "c",
    "m",
    "f",
    "k",
    "delta",
    "tau",
    "kmax",
    "gamma",
    "levels_sum",
    "out",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ProductionVsF,
    PorVsF,
    WelfareVsDelta,
    FixedSumLevels,
    PorRegion,
    ValueOfInformation,
    OptimalGamma,
    PorWithDesign,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::ProductionVsF,
        ExperimentKind::PorVsF,
        ExperimentKind::WelfareVsDelta,
        ExperimentKind::FixedSumLevels,
        ExperimentKind::PorRegion,
        ExperimentKind::ValueOfInformation,
        ExperimentKind::OptimalGamma,
        ExperimentKind::PorWithDesign,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::ProductionVsF => "production_vs_f",
            ExperimentKind::PorVsF => "por_vs_f",
            ExperimentKind::WelfareVsDelta => "welfare_vs_delta",
            ExperimentKind::FixedSumLevels => "fixed_sum_levels",
            ExperimentKind::PorRegion => "por_region",
            ExperimentKind::ValueOfInformation => "value_of_information",
            ExperimentKind::OptimalGamma => "optimal_gamma",
            ExperimentKind::PorWithDesign => "por_with_design",
        }
    }

    /// CSV header of the experiment's table.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::ProductionVsF => &["a", "b", "c", "m", "f", "k", "delta", "q_s", "q_b", "total"],
            ExperimentKind::PorVsF => &[
                "a",
                "b",
                "c",
                "m",
                "f",
                "k",
                "delta",
                "q_b",
                "welfare",
                "welfare_ne",
                "por",
            ],
            ExperimentKind::WelfareVsDelta => &[
                "a", "b", "c", "m", "f", "k", "delta", "q_s", "q_b", "distance", "welfare",
            ],
            ExperimentKind::FixedSumLevels => &[
                "a",
                "b",
                "c",
                "m",
                "f",
                "levels_sum",
                "k",
                "planner_level",
                "delta",
                "q_s",
                "q_b",
                "welfare",
                "max_welfare",
            ],
            ExperimentKind::PorRegion => &[
                "a",
                "b",
                "c",
                "m",
                "k",
                "delta",
                "beta_lower",
                "beta_upper",
                "f_lower",
                "f_upper",
            ],
            ExperimentKind::ValueOfInformation => &[
                "a", "b", "c", "m", "f", "tau", "kmax", "k", "q_b_opt", "q_b_ss", "q_b_rs", "vci_ss", "vci_rs", "evii",
            ],
            ExperimentKind::OptimalGamma => &[
                "a",
                "b",
                "c",
                "m",
                "f",
                "k",
                "gamma_star",
                "welfare_star",
                "multiple_optima",
                "grid_gamma",
                "grid_welfare",
            ],
            ExperimentKind::PorWithDesign => &[
                "a",
                "b",
                "c",
                "m",
                "f",
                "k",
                "gamma_star",
                "welfare_star",
                "welfare_ne",
                "por",
            ],
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::config(
                    "experiment",
                    format!("unknown experiment `{s}`; expected one of {}", names.join(", ")),
                )
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config(
                "format",
                format!("expected `csv` or `json`, got `{other}`"),
            )),
        }
    }
}

/// Raw `key = value` entries before interpretation. Later `set` calls
/// override earlier values, so command-line flags applied after parsing win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigEntries {
    entries: BTreeMap<String, String>,
}

impl ConfigEntries {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ConfigEntries::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            out.set(key.trim(), value.trim())?;
        }
        Ok(out)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::config(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn resolve(&self) -> Result<ExperimentConfig> {
        ExperimentConfig::from_entries(self)
    }
}

/// Fully interpreted sweep description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub m: f64,
    pub f_values: Vec<f64>,
    pub levels: Vec<u32>,
    /// `None` means the experiment's default (for `welfare_vs_delta` this
    /// depends on `k`).
    pub deltas: Option<Vec<RelativeLevel>>,
    pub tau: f64,
    pub max_level: u32,
    pub gammas: Vec<f64>,
    pub levels_sum: u32,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    fn from_entries(entries: &ConfigEntries) -> Result<Self> {
        let experiment: ExperimentKind = entries
            .get("experiment")
            .ok_or_else(|| Error::config("experiment", "missing"))?
            .parse()?;
        let scalar = |key: &str, default: f64| -> Result<f64> {
            match entries.get(key) {
                None => Ok(default),
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::config(key, format!("expected a number, got `{v}`"))),
            }
        };
        let a = scalar("a", 1.0)?;
        let b = scalar("b", 1.0)?;
        let c = scalar("c", 0.25)?;
        let m = scalar("m", 0.0)?;
        let tau = scalar("tau", strategies::DEFAULT_POISSON_MEAN)?;

        use ExperimentKind::*;
        let default_f = match experiment {
            WelfareVsDelta | FixedSumLevels => "0.3,0.5,0.7",
            _ => "0.05:0.75:15",
        };
        let f_values = parse_floats("f", entries.get("f").unwrap_or(default_f))?;

        let levels_sum = match entries.get("levels_sum") {
            None => 7,
            Some(v) => parse_uint("levels_sum", v)?,
        };
        let default_k = match experiment {
            ProductionVsF | PorVsF => "1".to_string(),
            WelfareVsDelta => "4".to_string(),
            FixedSumLevels => format!("1..{}", levels_sum.saturating_sub(1).max(1)),
            PorRegion | OptimalGamma | PorWithDesign => "1..8".to_string(),
            ValueOfInformation => "1,2,3".to_string(),
        };
        let levels = parse_uints("k", entries.get("k").unwrap_or(&default_k))?;

        let default_delta = match experiment {
            ProductionVsF | PorVsF => Some("-1,0,1,2,inf"),
            PorRegion => Some("0..5"),
            _ => None,
        };
        let deltas = match entries.get("delta").or(default_delta) {
            Some(v) => Some(parse_deltas(v)?),
            None => None,
        };
        let max_level = match entries.get("kmax") {
            None => strategies::DEFAULT_MAX_LEVEL,
            Some(v) => parse_uint("kmax", v)?,
        };
        let gammas = parse_floats("gamma", entries.get("gamma").unwrap_or("-3:3:601"))?;
        let format = match entries.get("format") {
            None => OutputFormat::Csv,
            Some(v) => v.parse()?,
        };
        let output = entries.get("out").map(PathBuf::from);

        let config = ExperimentConfig {
            experiment,
            a,
            b,
            c,
            m,
            f_values,
            levels,
            deltas,
            tau,
            max_level,
            gammas,
            levels_sum,
            output,
            format,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        for &f in &self.f_values {
            self.params(f).map_err(|e| Error::config("f", e.to_string()))?;
        }
        if let Some(deltas) = &self.deltas {
            for &k in &self.levels {
                for &d in deltas {
                    LevelSpec::new(k, d).map_err(|e| Error::config("delta", e.to_string()))?;
                }
            }
        }
        if self.gammas.iter().any(|g| !g.is_finite()) {
            return Err(Error::config("gamma", "values must be finite"));
        }
        match self.experiment {
            ExperimentKind::FixedSumLevels => {
                if let Some(&k) = self.levels.iter().find(|&&k| k > self.levels_sum) {
                    return Err(Error::config(
                        "k",
                        format!("k={k} exceeds levels_sum={}", self.levels_sum),
                    ));
                }
            }
            ExperimentKind::PorRegion => {
                for &k in &self.levels {
                    for d in self.deltas.as_deref().unwrap_or_default() {
                        match d {
                            RelativeLevel::Finite(d) if *d >= 0 && k as i64 + d > 0 => {}
                            other => {
                                return Err(Error::config(
                                    "delta",
                                    format!("region needs delta >= 0 and k + delta > 0, got k={k}, delta={other}"),
                                ))
                            }
                        }
                    }
                }
            }
            ExperimentKind::OptimalGamma | ExperimentKind::PorWithDesign => {
                if self.levels.contains(&0) {
                    return Err(Error::config("k", "cooperation design needs k >= 1"));
                }
            }
            ExperimentKind::ValueOfInformation => {
                RationalityDistribution::truncated_poisson(self.tau, self.max_level)
                    .map_err(|e| Error::config("tau", e.to_string()))?;
            }
            _ => {}
        }
        Ok(())
    }

    pub fn params(&self, f: f64) -> Result<MarketParams> {
        MarketParams::new(self.a, self.b, self.c, self.m, f)
    }
}

fn parse_floats(field: &str, text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            continue;
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(
                single
                    .parse()
                    .map_err(|_| Error::config(field, format!("expected a number, got `{single}`")))?,
            ),
            [lo, hi, n] => {
                let lo: f64 = lo
                    .parse()
                    .map_err(|_| Error::config(field, format!("bad grid start `{lo}`")))?;
                let hi: f64 = hi
                    .parse()
                    .map_err(|_| Error::config(field, format!("bad grid end `{hi}`")))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::config(field, format!("bad grid size `{n}`")))?;
                let grid = GridSpec::new(lo, hi, n).map_err(|e| Error::config(field, e.to_string()))?;
                out.extend(grid.points());
            }
            _ => return Err(Error::config(field, format!("expected `x` or `lo:hi:n`, got `{item}`"))),
        }
    }
    if out.is_empty() {
        return Err(Error::config(field, "sweep is empty"));
    }
    Ok(out)
}

fn parse_int_items(field: &str, text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            continue;
        }
        let bad = || Error::config(field, format!("expected an integer or `lo..hi`, got `{item}`"));
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
                let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(Error::config(field, format!("empty range `{item}`")));
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(Error::config(field, "sweep is empty"));
    }
    Ok(out)
}

fn parse_uint(field: &str, text: &str) -> Result<u32> {
    text.trim()
        .parse()
        .map_err(|_| Error::config(field, format!("expected a non-negative integer, got `{text}`")))
}

fn parse_uints(field: &str, text: &str) -> Result<Vec<u32>> {
    parse_int_items(field, text)?
        .into_iter()
        .map(|v| u32::try_from(v).map_err(|_| Error::config(field, format!("level must be non-negative, got {v}"))))
        .collect()
}

fn parse_deltas(text: &str) -> Result<Vec<RelativeLevel>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.eq_ignore_ascii_case("inf") {
            out.push(RelativeLevel::Infinite);
        } else if !item.is_empty() {
            out.extend(parse_int_items("delta", item)?.into_iter().map(RelativeLevel::Finite));
        }
    }
    if out.is_empty() {
        return Err(Error::config("delta", "sweep is empty"));
    }
    Ok(out)
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<RelativeLevel> for Cell {
    fn from(v: RelativeLevel) -> Self {
        match v {
            RelativeLevel::Finite(d) => Cell::Int(d),
            RelativeLevel::Infinite => Cell::Text("inf".into()),
        }
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) if v.is_finite() => {
                let rendered: f64 = format_number(*v).parse().expect("formatted number parses");
                serde_json::Number::from_f64(rendered)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null)
            }
            Cell::Num(v) => serde_json::Value::String(format_number(*v)),
            Cell::Int(v) => serde_json::Value::from(*v),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Formats with 12 significant digits, trailing zeros trimmed; plain
/// notation for magnitudes in `[1e-5, 1e12)`, scientific otherwise.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format has exponent");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rows of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        csv.write_record(&self.columns)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::render))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let record: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(name, cell)| (name.to_string(), cell.to_json()))
                    .collect();
                serde_json::Value::Object(record)
            })
            .collect();
        serde_json::Value::Array(rows)
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut writer, &self.to_json())?;
        writeln!(writer)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, writer: W) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(writer),
            OutputFormat::Json => self.write_json(writer),
        }
    }

    /// Writes the whole table to `path`, replacing any existing file.
    pub fn write_to_path(&self, format: OutputFormat, path: &Path) -> Result<()> {
        let output_error = |source| Error::Output {
            path: path.to_path_buf(),
            source,
        };
        let file = File::create(path).map_err(output_error)?;
        let mut writer = BufWriter::new(file);
        self.write(format, &mut writer)?;
        writer.flush().map_err(output_error)
    }
}

fn param_cells(p: &MarketParams) -> Vec<Cell> {
    vec![p.a().into(), p.b().into(), p.c().into(), p.m().into()]
}

/// Runs the configured sweep. Rows are emitted in the nesting order of the
/// sweep fields, so identical configs yield identical tables.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Table> {
    use ExperimentKind::*;
    let kind = config.experiment;
    let mut table = Table::new(kind.columns());
    let deltas = config.deltas.clone().unwrap_or_default();

    match kind {
        ProductionVsF | PorVsF => {
            for &k in &config.levels {
                for &delta in &deltas {
                    for &f in &config.f_values {
                        let p = config.params(f)?;
                        let spec = LevelSpec::new(k, delta)?;
                        let prof = spec.profile(&p);
                        let mut row = param_cells(&p);
                        row.extend([f.into(), k.into(), delta.into()]);
                        if kind == ProductionVsF {
                            row.extend([prof.self_interested.into(), prof.planner.into(), prof.total().into()]);
                        } else {
                            let w = p.welfare(&prof);
                            let w_ne = welfare::equilibrium_performance(&p);
                            row.extend([
                                prof.planner.into(),
                                w.into(),
                                w_ne.into(),
                                welfare::price_of_rationality(&spec, &p)?.into(),
                            ]);
                        }
                        table.push(row);
                    }
                }
            }
        }
        WelfareVsDelta => {
            for &k in &config.levels {
                let ds: Vec<RelativeLevel> = match &config.deltas {
                    Some(ds) => ds.clone(),
                    None => (-(k as i64)..=6).map(RelativeLevel::Finite).collect(),
                };
                for &f in &config.f_values {
                    let p = config.params(f)?;
                    for &delta in &ds {
                        let prof = LevelSpec::new(k, delta)?.profile(&p);
                        let mut row = param_cells(&p);
                        row.extend([
                            f.into(),
                            k.into(),
                            delta.into(),
                            prof.self_interested.into(),
                            prof.planner.into(),
                            p.welfare_distance(&prof).into(),
                            p.welfare(&prof).into(),
                        ]);
                        table.push(row);
                    }
                }
            }
        }
        FixedSumLevels => {
            for &f in &config.f_values {
                let p = config.params(f)?;
                for &k in &config.levels {
                    let planner_level = config.levels_sum - k;
                    let delta = planner_level as i64 - k as i64;
                    let prof = LevelSpec::finite(k, delta)?.profile(&p);
                    let mut row = param_cells(&p);
                    row.extend([
                        f.into(),
                        config.levels_sum.into(),
                        k.into(),
                        planner_level.into(),
                        delta.into(),
                        prof.self_interested.into(),
                        prof.planner.into(),
                        p.welfare(&prof).into(),
                        p.max_welfare().into(),
                    ]);
                    table.push(row);
                }
            }
        }
        PorRegion => {
            let p = config.params(config.f_values[0])?;
            for &k in &config.levels {
                for &delta in &deltas {
                    let RelativeLevel::Finite(d) = delta else {
                        unreachable!("validated")
                    };
                    let region = welfare::por_lt_one_region(k, d)?;
                    let mut row = param_cells(&p);
                    row.extend([
                        k.into(),
                        delta.into(),
                        region.lower.into(),
                        region.upper.into(),
                        (region.lower * p.efficient_total()).into(),
                        (region.upper * p.efficient_total()).into(),
                    ]);
                    table.push(row);
                }
            }
        }
        ValueOfInformation => {
            let dist = RationalityDistribution::truncated_poisson(config.tau, config.max_level)?;
            for &k in &config.levels {
                for &f in &config.f_values {
                    let p = config.params(f)?;
                    let q_opt = strategies::optimal_strategy(k, &p);
                    let q_ss = strategies::stochastic_strategy(&dist, &p);
                    let q_rs = strategies::robust_strategy(&p);
                    let mut row = param_cells(&p);
                    row.extend([
                        f.into(),
                        config.tau.into(),
                        config.max_level.into(),
                        k.into(),
                        q_opt.into(),
                        q_ss.into(),
                        q_rs.into(),
                        strategies::vci(k, q_ss, &p).into(),
                        strategies::vci(k, q_rs, &p).into(),
                        strategies::evii(&dist, &p).into(),
                    ]);
                    table.push(row);
                }
            }
        }
        OptimalGamma => {
            for &k in &config.levels {
                for &f in &config.f_values {
                    let p = config.params(f)?;
                    let star = design::optimal_cooperation_level(k, &p)?;
                    let multiple = if k % 2 == 1 {
                        Cell::Int(design::has_multiple_optima(k, &p)? as i64)
                    } else {
                        Cell::Empty
                    };
                    let (g_grid, w_grid) = best_on_list(k, &config.gammas, &p);
                    let mut row = param_cells(&p);
                    row.extend([
                        f.into(),
                        k.into(),
                        star.value().into(),
                        design::equal_level_welfare(k, star, &p).into(),
                        multiple,
                        g_grid.into(),
                        w_grid.into(),
                    ]);
                    table.push(row);
                }
            }
        }
        PorWithDesign => {
            for &k in &config.levels {
                for &f in &config.f_values {
                    let p = config.params(f)?;
                    let star = design::optimal_cooperation_level(k, &p)?;
                    let mut row = param_cells(&p);
                    row.extend([
                        f.into(),
                        k.into(),
                        star.value().into(),
                        design::equal_level_welfare(k, star, &p).into(),
                        welfare::equilibrium_performance(&p).into(),
                        design::por_with_design(k, &p)?.into(),
                    ]);
                    table.push(row);
                }
            }
        }
    }
    Ok(table)
}

/// Best listed cooperation level by exhaustive evaluation (first wins ties).
fn best_on_list(k: u32, gammas: &[f64], p: &MarketParams) -> (f64, f64) {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &g in gammas {
        let w = design::equal_level_welfare(k, CooperationLevel::new(g).expect("validated"), p);
        if w > best.1 {
            best = (g, w);
        }
    }
    best
}

/// Everything worth knowing about one market instance and level pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub m: f64,
    pub f: f64,
    pub k: u32,
    pub delta: RelativeLevel,
    pub q_s: f64,
    pub q_b: f64,
    pub total: f64,
    pub price: f64,
    pub profit_self: f64,
    pub welfare: f64,
    pub distance: f64,
    pub q_s_ne: f64,
    pub q_b_ne: f64,
    pub welfare_ne: f64,
    pub por: f64,
    pub optimal_strategy: f64,
    pub stochastic_strategy: f64,
    pub robust_strategy: f64,
    pub tau: f64,
    pub kmax: u32,
    /// `None` for `k = 0`, where cooperation design does not apply.
    pub gamma_star: Option<f64>,
    pub welfare_with_design: Option<f64>,
}

/// Single-instance report. The stochastic strategy assumes a Poisson(`tau`)
/// opponent level truncated at `kmax`.
pub fn analyze(params: &MarketParams, spec: &LevelSpec, tau: f64, kmax: u32) -> Result<AnalysisReport> {
    let prof = spec.profile(params);
    let ne = level_k::nash_equilibrium(params);
    let dist = RationalityDistribution::truncated_poisson(tau, kmax)?;
    let (gamma_star, welfare_with_design) = if spec.k() >= 1 {
        let g = design::optimal_cooperation_level(spec.k(), params)?;
        (Some(g.value()), Some(design::equal_level_welfare(spec.k(), g, params)))
    } else {
        (None, None)
    };
    Ok(AnalysisReport {
        a: params.a(),
        b: params.b(),
        c: params.c(),
        m: params.m(),
        f: params.f(),
        k: spec.k(),
        delta: spec.delta(),
        q_s: prof.self_interested,
        q_b: prof.planner,
        total: prof.total(),
        price: params.inverse_demand(prof.total()),
        profit_self: params.profit_self(&prof),
        welfare: params.welfare(&prof),
        distance: params.welfare_distance(&prof),
        q_s_ne: ne.self_interested,
        q_b_ne: ne.planner,
        welfare_ne: welfare::equilibrium_performance(params),
        por: welfare::price_of_rationality(spec, params)?,
        optimal_strategy: strategies::optimal_strategy(spec.k(), params),
        stochastic_strategy: strategies::stochastic_strategy(&dist, params),
        robust_strategy: strategies::robust_strategy(params),
        tau,
        kmax,
        gamma_star,
        welfare_with_design,
    })
}

impl AnalysisReport {
    /// One-row table with the same rendering rules as experiment output.
    pub fn to_table(&self) -> Table {
        let opt = |v: Option<f64>| v.map(Cell::Num).unwrap_or(Cell::Empty);
        let mut table = Table::new(&[
            "a",
            "b",
            "c",
            "m",
            "f",
            "k",
            "delta",
            "q_s",
            "q_b",
            "total",
            "price",
            "profit_self",
            "welfare",
            "distance",
            "q_s_ne",
            "q_b_ne",
            "welfare_ne",
            "por",
            "optimal_strategy",
            "stochastic_strategy",
            "robust_strategy",
            "tau",
            "kmax",
            "gamma_star",
            "welfare_with_design",
        ]);
        table.push(vec![
            self.a.into(),
            self.b.into(),
            self.c.into(),
            self.m.into(),
            self.f.into(),
            self.k.into(),
            self.delta.into(),
            self.q_s.into(),
            self.q_b.into(),
            self.total.into(),
            self.price.into(),
            self.profit_self.into(),
            self.welfare.into(),
            self.distance.into(),
            self.q_s_ne.into(),
            self.q_b_ne.into(),
            self.welfare_ne.into(),
            self.por.into(),
            self.optimal_strategy.into(),
            self.stochastic_strategy.into(),
            self.robust_strategy.into(),
            self.tau.into(),
            self.kmax.into(),
            opt(self.gamma_star),
            opt(self.welfare_with_design),
        ]);
        table
    }
}
