//! Report envelope shared by every command.

use std::collections::BTreeMap;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use labelspace::dynamics::Bounds;
use labelspace::{Scope, Status, Verdict, Window};

/// `certified (up_to_bounds)`, using the serialized names.
pub fn status_line(status: Status, scope: Scope) -> String {
    let name = |v: Value| v.as_str().unwrap_or_default().to_string();
    format!("{} ({})", name(serde_json::json!(status)), name(serde_json::json!(scope)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: BTreeMap<String, String>,
    /// Search bounds, window depths and command parameters.
    pub bounds: BTreeMap<String, usize>,
    pub result: Value,
    #[serde(skip)]
    pub exit: i32,
    #[serde(skip)]
    pub text: String,
    #[serde(skip)]
    pub dot: Option<String>,
}

impl Report {
    pub fn new(command: &str, input: BTreeMap<String, String>, bounds: &Bounds, win: &Window) -> Self {
        let bounds = bounds.entries().into_iter().chain(win.describe()).collect();
        Self { command: command.into(), input, bounds, result: Value::Null, exit: 0, text: String::new(), dot: None }
    }

    pub fn param(&mut self, name: &str, value: usize) {
        self.bounds.insert(name.into(), value);
    }

    pub fn set<T: Serialize>(&mut self, result: &T, exit: i32) {
        self.result = serde_json::to_value(result).expect("report serializes");
        self.exit = exit;
    }

    pub fn verdict<W: Serialize>(&mut self, v: Verdict<W>) {
        let exit = v.exit_code();
        let mut text = format!("{}: {}\n", v.property, status_line(v.status, v.scope));
        for note in &v.notes {
            text.push_str(&format!("note: {note}\n"));
        }
        if let Some(w) = &v.witness {
            text.push_str(&serde_json::to_string_pretty(w).expect("witness serializes"));
            text.push('\n');
        }
        // Lift the verdict's own bounds into the header.
        self.bounds.extend(v.bounds.iter().map(|(k, &b)| (k.clone(), b)));
        self.set(&v, exit);
        self.text = text;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Dot => self.dot.clone().unwrap_or_default(),
            Format::Text => {
                let input: Vec<String> = self.input.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let bounds: Vec<String> = self.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let body = if self.text.is_empty() {
                    serde_json::to_string_pretty(&self.result).expect("report serializes") + "\n"
                } else {
                    self.text.clone()
                };
                format!("# {}\n# input: {}\n# bounds: {}\n{body}", self.command, input.join(" "), bounds.join(" "))
            }
        }
    }
}
