use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{OutputFormat, RunConfig};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = concat!("psquid ", env!("CARGO_PKG_VERSION"));

/// Rectangular numeric table; `NaN` marks undefined entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    #[serde(with = "nan_as_null")]
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            columns,
            rows: Vec::new(),
        }
    }

    /// Appends a row; every `NaN` is stored as the canonical `f64::NAN`.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width of table {}",
            self.name
        );
        self.rows.push(
            row.into_iter()
                .map(|v| if v.is_nan() { f64::NAN } else { v })
                .collect(),
        );
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Equality of every entry's bit pattern.
    pub fn bitwise_eq(&self, other: &Table) -> bool {
        self.name == other.name
            && self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<f64>], s: S) -> Result<S::Ok, S::Error> {
        let mapped: Vec<Vec<Option<f64>>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.is_finite().then_some(*v)).collect())
            .collect();
        mapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let raw: Vec<Vec<Option<f64>>> = Vec::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect())
    }
}

/// Everything a run emits: the producing config, provenance metadata and
/// the payload tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultEnvelope {
    pub tool_version: String,
    pub config: RunConfig,
    pub wall_clock_s: f64,
    pub meta: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

impl ResultEnvelope {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn payload_bitwise_eq(&self, other: &ResultEnvelope) -> bool {
        self.tables.len() == other.tables.len()
            && self
                .tables
                .iter()
                .zip(&other.tables)
                .all(|(a, b)| a.bitwise_eq(b))
    }
}

fn csv_path(dir: &Path, stem: &str, table: &Table, single: bool) -> PathBuf {
    if single {
        dir.join(format!("{stem}.csv"))
    } else {
        dir.join(format!("{stem}_{}.csv", table.name))
    }
}

fn format_value(v: f64) -> String {
    let a = v.abs();
    if v.is_nan() {
        "nan".into()
    } else if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// CSV text of one table with the `# key: value` envelope preamble.
pub fn render_csv(envelope: &ResultEnvelope, table: &Table) -> String {
    let mut out = String::new();
    writeln!(out, "# tool_version: {}", envelope.tool_version).unwrap();
    writeln!(out, "# config: {}", envelope.config.to_json()).unwrap();
    writeln!(out, "# wall_clock_s: {}", envelope.wall_clock_s).unwrap();
    for (k, v) in &envelope.meta {
        writeln!(out, "# meta.{k}: {v}").unwrap();
    }
    writeln!(out, "# table: {}", table.name).unwrap();
    writeln!(out, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

pub fn render_json(envelope: &ResultEnvelope) -> String {
    let mut text = serde_json::to_string_pretty(envelope).expect("envelope serializes");
    text.push('\n');
    text
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Writes the envelope under `dir` and returns the files created. CSV
/// output produces one file per table.
pub fn write_envelope(
    envelope: &ResultEnvelope,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let stem = envelope.config.name();
    match format {
        OutputFormat::Json => {
            let path = dir.join(format!("{stem}.json"));
            write_atomic(&path, &render_json(envelope))?;
            Ok(vec![path])
        }
        OutputFormat::Csv => {
            let single = envelope.tables.len() == 1;
            let mut paths = Vec::new();
            for table in &envelope.tables {
                let path = csv_path(dir, &stem, table, single);
                write_atomic(&path, &render_csv(envelope, table))?;
                paths.push(path);
            }
            Ok(paths)
        }
    }
}

fn parse_error(path: &Path, what: impl std::fmt::Display) -> Error {
    Error::Config(format!("{}: {what}", path.display()))
}

/// Reads one emitted CSV file back into an envelope holding its single table.
pub fn read_csv(path: &Path) -> Result<ResultEnvelope> {
    let text = std::fs::read_to_string(path)?;
    let mut tool_version = None;
    let mut config = None;
    let mut wall_clock_s = f64::NAN;
    let mut meta = BTreeMap::new();
    let mut name = String::new();
    let mut lines = text.lines();
    let header = loop {
        let line = lines
            .next()
            .ok_or_else(|| parse_error(path, "missing header row"))?;
        let Some(rest) = line.strip_prefix("# ") else {
            break line;
        };
        let (key, value) = rest
            .split_once(": ")
            .ok_or_else(|| parse_error(path, format!("malformed envelope line {line:?}")))?;
        match key {
            "tool_version" => tool_version = Some(value.to_string()),
            "config" => config = Some(RunConfig::from_json(value)?),
            "wall_clock_s" => wall_clock_s = value.parse().map_err(|e| parse_error(path, e))?,
            "table" => name = value.to_string(),
            other => {
                let key = other
                    .strip_prefix("meta.")
                    .ok_or_else(|| parse_error(path, format!("unknown envelope key {other:?}")))?;
                let v: Value = serde_json::from_str(value).map_err(|e| parse_error(path, e))?;
                meta.insert(key.to_string(), v);
            }
        }
    };
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut table = Table::new(name, columns);
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| parse_error(path, format!("row {i}: {e}")))?;
        if row.len() != table.columns.len() {
            return Err(parse_error(path, format!("row {i} is not rectangular")));
        }
        table.rows.push(row);
    }
    Ok(ResultEnvelope {
        tool_version: tool_version.ok_or_else(|| parse_error(path, "missing tool_version"))?,
        config: config.ok_or_else(|| parse_error(path, "missing config"))?,
        wall_clock_s,
        meta,
        tables: vec![table],
    })
}

pub fn read_json(path: &Path) -> Result<ResultEnvelope> {
    let text = std::fs::read_to_string(path)?;
    let envelope: ResultEnvelope = serde_json::from_str(&text).map_err(|e| parse_error(path, e))?;
    envelope.config.validate()?;
    Ok(envelope)
}

/// Reads an emitted file by extension.
pub fn read_envelope(path: &Path) -> Result<ResultEnvelope> {
    if path.extension().is_some_and(|e| e == "json") {
        read_json(path)
    } else {
        read_csv(path)
    }
}
