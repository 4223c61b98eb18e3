//! Report envelope, float normalization and the sweep CSV format.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

pub const TOOL: &str = "ctxbell";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIGNIFICANT_DIGITS: usize = 12;

/// One pass/fail assertion derived from the payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Top-level JSON document written by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
    pub timing: Timing,
}

impl Report {
    pub fn new(
        command: &str,
        config: &impl Serialize,
        results: &impl Serialize,
        checks: Vec<Check>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report {
            tool: TOOL.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            config: normalized(config),
            results: normalized(results),
            checks,
            pass,
            timing: Timing { elapsed_ms: 0.0 },
        }
    }

    /// Everything except timing; stable across reruns of the same config.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        v
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Serializes `value` and rounds every float in the tree.
pub fn normalized(value: &impl Serialize) -> Value {
    let mut v = serde_json::to_value(value).expect("payload serializes");
    round_floats(&mut v);
    v
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            *v = Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// One line of the sweep table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub variant: String,
    pub visibility: f64,
    pub chi: f64,
    pub s: f64,
    pub omega: f64,
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepCsvRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(input: R) -> csv::Result<Vec<SweepCsvRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
