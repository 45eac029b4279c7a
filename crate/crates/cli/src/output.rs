use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sl3_kloosterman::sums::SumResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

pub type Record = Map<String, Value>;

/// Writes records as JSON lines, CSV rows or `key=value` text.
pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    header: Option<Vec<String>>,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Self {
            format,
            out,
            header: None,
        }
    }

    pub fn emit(&mut self, rec: &Record) -> io::Result<()> {
        match self.format {
            Format::Json => writeln!(self.out, "{}", Value::Object(rec.clone())),
            Format::Text => {
                let line: Vec<String> = rec.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
                writeln!(self.out, "{}", line.join(" "))
            }
            Format::Csv => {
                if self.header.is_none() {
                    let keys: Vec<String> = rec.keys().cloned().collect();
                    writeln!(self.out, "{}", csv_line(keys.iter().map(String::as_str)))?;
                    self.header = Some(keys);
                }
                let header = self.header.as_ref().unwrap();
                let cells: Vec<String> = header.iter().map(|k| rec.get(k).map(cell).unwrap_or_default()).collect();
                writeln!(self.out, "{}", csv_line(cells.iter().map(String::as_str)))
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_line<'a>(cells: impl Iterator<Item = &'a str>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(cells).expect("in-memory csv");
    let mut s = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8");
    s.pop();
    s
}

/// `value` is the integer when the sum is rational, else `[re, im]`.
pub fn sum_fields(r: &SumResult, exact: bool) -> Record {
    let approx = json!([r.approx.re, r.approx.im]);
    let value = match r.exact.as_integer() {
        Some(n) => n.to_string().parse::<i64>().map(Value::from).unwrap_or(Value::String(n.to_string())),
        None => approx.clone(),
    };
    let mut m = Map::new();
    m.insert("value".into(), value);
    m.insert("approx".into(), approx);
    if exact {
        m.insert("exact".into(), serde_json::to_value(&r.exact).expect("serializable"));
        m.insert("exact_text".into(), Value::String(r.exact.to_string()));
    }
    m.insert("formula".into(), Value::String(r.formula.clone()));
    m.insert("terms".into(), Value::from(r.terms));
    m
}

pub fn record(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Record {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
