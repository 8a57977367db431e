//! CSV and JSON output. Floats carry 17 significant digits, enough to read
//! back the identical f64; JSON has no NaN, so those become null.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scan::{CrossingRecord, CutSample, LevelFlags, ScanRow, ScanTable, SweepVar};
use crate::solver::Parity;

pub const SCHEMA_VERSION: u32 = 1;
pub const TABLE_HEADER: &str = "sweep_var,value,level_index,energy,parity,flags";
pub const CROSSING_HEADER: &str = "sweep_var,value,gap,lower_index,upper_index,parity,lower_energy,upper_energy";
pub const CUT_HEADER: &str = "x,z,value";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

/// A float that serialises as a JSON number with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
struct F17(f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let n: serde_json::Number = fmt_f64(self.0).parse().map_err(serde::ser::Error::custom)?;
            n.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n: Option<serde_json::Number> = Option::deserialize(d)?;
        match n {
            None => Ok(F17(f64::NAN)),
            Some(n) => n.to_string().parse::<f64>().map(F17).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    sweep_var: String,
    value: F17,
    level_index: i64,
    energy: F17,
    parity: String,
    flags: String,
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    version: u32,
    sweep_var: String,
    rows: Vec<JsonRow>,
}

/// `None` sweeps (a single spectrum) are written as "none".
fn sweep_name(sweep: Option<SweepVar>) -> &'static str {
    sweep.map(SweepVar::as_str).unwrap_or("none")
}

pub fn table_to_csv(table: &ScanTable) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    let name = sweep_name(table.sweep);
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            name,
            fmt_f64(r.value),
            r.level_index,
            fmt_f64(r.energy),
            r.parity.as_str(),
            r.flags.render()
        );
    }
    out
}

pub fn table_to_json(table: &ScanTable) -> Result<String> {
    let name = sweep_name(table.sweep);
    let doc = JsonTable {
        version: SCHEMA_VERSION,
        sweep_var: name.into(),
        rows: table
            .rows
            .iter()
            .map(|r| JsonRow {
                sweep_var: name.into(),
                value: F17(r.value),
                level_index: r.level_index,
                energy: F17(r.energy),
                parity: r.parity.as_str().into(),
                flags: r.flags.render(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_sweep(s: &str) -> Result<Option<SweepVar>> {
    if s == "none" {
        Ok(None)
    } else {
        s.parse().map(Some)
    }
}

pub fn table_from_csv(text: &str) -> Result<ScanTable> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TABLE_HEADER => {}
        other => return Err(Error::Parse(format!("unexpected header {other:?}"))),
    }
    let mut sweep = None;
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::Parse(format!("line {}: expected 6 fields, got {}", n + 2, f.len())));
        }
        sweep = parse_sweep(f[0])?;
        rows.push(ScanRow {
            value: parse_f64(f[1])?,
            level_index: f[2].parse().map_err(|_| Error::Parse(format!("line {}: bad level index", n + 2)))?,
            energy: parse_f64(f[3])?,
            parity: f[4].parse::<Parity>()?,
            flags: LevelFlags::parse(f[5])?,
        });
    }
    Ok(ScanTable { sweep, rows })
}

pub fn table_from_json(text: &str) -> Result<ScanTable> {
    let doc: JsonTable = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", doc.version)));
    }
    let rows = doc
        .rows
        .into_iter()
        .map(|r| {
            Ok(ScanRow {
                value: r.value.0,
                level_index: r.level_index,
                energy: r.energy.0,
                parity: r.parity.parse()?,
                flags: LevelFlags::parse(&r.flags)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanTable { sweep: parse_sweep(&doc.sweep_var)?, rows })
}

#[derive(Serialize)]
struct JsonCrossing {
    sweep_var: String,
    value: F17,
    gap: F17,
    lower_index: usize,
    upper_index: usize,
    parity: String,
    lower_energy: F17,
    upper_energy: F17,
}

#[derive(Serialize)]
struct JsonCrossings {
    version: u32,
    sweep_var: String,
    crossings: Vec<JsonCrossing>,
}

pub fn crossings_to_csv(sweep: SweepVar, records: &[CrossingRecord]) -> String {
    let mut out = String::from(CROSSING_HEADER);
    out.push('\n');
    for c in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            sweep.as_str(),
            fmt_f64(c.value),
            fmt_f64(c.gap),
            c.lower,
            c.upper,
            c.parity.as_str(),
            fmt_f64(c.lower_energy),
            fmt_f64(c.upper_energy)
        );
    }
    out
}

pub fn crossings_to_json(sweep: SweepVar, records: &[CrossingRecord]) -> Result<String> {
    let doc = JsonCrossings {
        version: SCHEMA_VERSION,
        sweep_var: sweep.as_str().into(),
        crossings: records
            .iter()
            .map(|c| JsonCrossing {
                sweep_var: sweep.as_str().into(),
                value: F17(c.value),
                gap: F17(c.gap),
                lower_index: c.lower,
                upper_index: c.upper,
                parity: c.parity.as_str().into(),
                lower_energy: F17(c.lower_energy),
                upper_energy: F17(c.upper_energy),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct JsonSample {
    x: F17,
    z: F17,
    value: F17,
}

#[derive(Serialize)]
struct JsonCut {
    version: u32,
    samples: Vec<JsonSample>,
}

pub fn cut_to_csv(samples: &[CutSample]) -> String {
    let mut out = String::from(CUT_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(out, "{},{},{}", fmt_f64(s.x), fmt_f64(s.z), fmt_f64(s.value));
    }
    out
}

pub fn cut_to_json(samples: &[CutSample]) -> Result<String> {
    let doc = JsonCut {
        version: SCHEMA_VERSION,
        samples: samples.iter().map(|s| JsonSample { x: F17(s.x), z: F17(s.z), value: F17(s.value) }).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}
