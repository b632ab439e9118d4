//! Report records and their JSON and CSV encodings.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// One comparison made while running a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub expected: Value,
    /// `approx`, `eq`, `le` or `ge`.
    pub comparison: String,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub scenario_id: String,
    pub module: String,
    pub operation: String,
    pub inputs: Value,
    pub outputs: BTreeMap<String, Value>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
    pub wall_time_ms: f64,
}

impl ReportRecord {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenarios_run: usize,
    pub all_passed: bool,
    pub records: Vec<ReportRecord>,
}

impl Report {
    pub fn new(scenarios_run: usize, records: Vec<ReportRecord>) -> Self {
        Self {
            scenarios_run,
            all_passed: records.iter().all(ReportRecord::passed),
            records,
        }
    }
}

/// Pretty JSON with every float written as `{:.16e}`, i.e. 17 significant
/// digits, so values round-trip exactly.
struct RoundTripFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for RoundTripFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, RoundTripFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(io::Error::other)?;
    out.push(b'\n');
    Ok(out)
}

pub const CSV_HEADER: [&str; 8] = [
    "scenario_id",
    "module",
    "operation",
    "key",
    "value",
    "expected",
    "tolerance",
    "passed",
];

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        other => {
            String::from_utf8(to_compact_json(other)).unwrap_or_default()
        }
    }
}

fn to_compact_json(v: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CompactRoundTrip);
    let _ = v.serialize(&mut ser);
    out
}

struct CompactRoundTrip;

impl Formatter for CompactRoundTrip {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Long-format CSV: one row per output key, with the matching check (if any)
/// in the last three columns, then one row per check that has no output of the
/// same name.
pub fn to_csv(records: &[ReportRecord]) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        let by_name: BTreeMap<&str, &Check> = r.checks.iter().map(|c| (c.name.as_str(), c)).collect();
        for (key, value) in &r.outputs {
            let check = by_name.get(key.as_str());
            w.write_record([
                r.scenario_id.as_str(),
                &r.module,
                &r.operation,
                key,
                &csv_cell(value),
                &check.map_or(String::new(), |c| csv_cell(&c.expected)),
                &check
                    .and_then(|c| c.tolerance)
                    .map_or(String::new(), |t| format!("{t:.16e}")),
                &check.map_or(String::new(), |c| c.passed.to_string()),
            ])?;
        }
        for c in r.checks.iter().filter(|c| !r.outputs.contains_key(&c.name)) {
            w.write_record([
                r.scenario_id.as_str(),
                &r.module,
                &r.operation,
                &c.name,
                &csv_cell(&c.value),
                &csv_cell(&c.expected),
                &c.tolerance.map_or(String::new(), |t| format!("{t:.16e}")),
                &c.passed.to_string(),
            ])?;
        }
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}
