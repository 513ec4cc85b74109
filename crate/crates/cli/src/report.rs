//! Output plumbing: every command builds a plain-text transcript and a
//! structured value side by side, and one of them is printed depending on
//! `--format`. The structured form uses insertion-ordered maps so that
//! parsing an emitted report and re-serializing it is byte-identical.

use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" | "structured" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format `{other}` (use text or json)")),
        }
    }
}

/// A report that accumulates human-readable lines and structured fields in
/// lockstep.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), Value::String(command.into()));
        Report {
            lines: Vec::new(),
            fields,
        }
    }

    /// A text-only line (still part of the transcript, not the structure).
    pub fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    /// A line that is also recorded as a structured field.
    pub fn field(&mut self, key: &str, value: Value, line: impl Into<String>) {
        self.lines.push(line.into());
        self.fields.insert(key.into(), value);
    }

    /// A structured field with no text counterpart.
    pub fn silent_field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    pub fn print(&self, format: OutputFormat) {
        match format {
            OutputFormat::Text => {
                for l in &self.lines {
                    println!("{l}");
                }
            }
            OutputFormat::Json => {
                let v = Value::Object(self.fields.clone());
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
        }
    }
}
