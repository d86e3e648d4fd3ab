use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};

/// What every subcommand returns. Keys are kept sorted, so equal reports
/// serialize to equal bytes.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub inputs: Map<String, Value>,
    pub verdicts: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    /// False when an assertion made by the command failed.
    pub passed: bool,
    /// Preformatted text used instead of the generic listing.
    pub text: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report { command: command.to_string(), seed, passed: true, ..Default::default() }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn verdict(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.verdicts.insert(key.into(), value.into());
        self
    }

    pub fn witness(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.witnesses.insert(key.into(), value.into());
        self
    }

    pub fn assert(mut self, ok: bool) -> Self {
        self.passed &= ok;
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn to_json(&self, elapsed: Option<Duration>) -> Value {
        let mut v = json!({
            "command": self.command,
            "seed": self.seed,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "witnesses": self.witnesses,
            "passed": self.passed,
        });
        if let Some(d) = elapsed {
            v["timings"] = json!({ "total_ms": d.as_secs_f64() * 1e3 });
        }
        v
    }

    pub fn render(&self, elapsed: Option<Duration>) -> String {
        let mut out = String::new();
        writeln!(out, "{} (seed {})", self.command, self.seed).unwrap();
        if let Some(text) = &self.text {
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        } else {
            for (title, map) in [("inputs", &self.inputs), ("verdicts", &self.verdicts), ("witnesses", &self.witnesses)] {
                if map.is_empty() {
                    continue;
                }
                writeln!(out, "{title}:").unwrap();
                for (k, v) in map {
                    writeln!(out, "  {k}: {}", plain(v)).unwrap();
                }
            }
        }
        writeln!(out, "{}", if self.passed { "result: ok" } else { "result: FAILED" }).unwrap();
        if let Some(d) = elapsed {
            writeln!(out, "time: {:.1} ms", d.as_secs_f64() * 1e3).unwrap();
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
