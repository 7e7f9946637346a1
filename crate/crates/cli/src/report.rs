use std::io::Write;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Output of one subcommand: human-readable lines, machine-readable fields
/// and an optional table.
#[derive(Debug, Default)]
pub struct Report {
    command: String,
    lines: Vec<String>,
    fields: Map<String, Value>,
    table: Option<(Vec<String>, Vec<Vec<Value>>)>,
    failed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn table(&mut self, header: &[&str], rows: Vec<Vec<Value>>) -> &mut Self {
        self.table = Some((header.iter().map(|h| h.to_string()).collect(), rows));
        self
    }

    /// Marks a failed verification (exit code 1).
    pub fn fail(&mut self) -> &mut Self {
        self.failed = true;
        self
    }

    pub fn failed(&self) -> bool {
        self.failed
    }

    pub fn render(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Text => {
                for l in &self.lines {
                    writeln!(out, "{l}")?;
                }
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema".into(), 1.into());
                obj.insert("command".into(), self.command.clone().into());
                obj.insert("ok".into(), (!self.failed).into());
                obj.extend(self.fields.clone());
                if let Some((header, rows)) = &self.table {
                    let rows: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            Value::Object(header.iter().cloned().zip(r.iter().cloned()).collect())
                        })
                        .collect();
                    obj.insert("rows".into(), rows.into());
                }
                serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                match &self.table {
                    Some((header, rows)) => {
                        w.write_record(header)?;
                        for r in rows {
                            w.write_record(r.iter().map(cell))?;
                        }
                    }
                    None => {
                        w.write_record(self.fields.keys())?;
                        w.write_record(self.fields.values().map(cell))?;
                    }
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
