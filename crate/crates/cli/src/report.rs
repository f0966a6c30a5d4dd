use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::config::RunConfig;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Sos,
    Refuted,
    PsatzFound,
    NotFound,
    NegativeWitness,
    Ok,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Sos => "SOS",
            Verdict::Refuted => "REFUTED",
            Verdict::PsatzFound => "PSATZ_FOUND",
            Verdict::NotFound => "NOT_FOUND",
            Verdict::NegativeWitness => "NEGATIVE_WITNESS",
            Verdict::Ok => "OK",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub verdict: Verdict,
    pub payload: Value,
    /// Human-readable body for `--format text`.
    pub text: Vec<String>,
    /// Table for `--format csv`, when the command has one.
    pub csv: Option<String>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, verdict: Verdict, payload: Value) -> Self {
        Report {
            command: command.to_string(),
            config: config.clone(),
            verdict,
            payload,
            text: Vec::new(),
            csv: None,
        }
    }

    pub fn line(mut self, s: impl Into<String>) -> Self {
        self.text.push(s.into());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "config": self.config,
            "verdict": self.verdict,
            "payload": self.payload,
        })
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&self.to_json()).expect("report serializes"))),
            Format::Text => {
                let mut out = String::new();
                for l in &self.text {
                    out.push_str(l);
                    out.push('\n');
                }
                out.push_str(&format!("verdict: {}\n", self.verdict.as_str()));
                Ok(out)
            }
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| CliError::Usage(format!("'{}' has no CSV output; use json or text", self.command))),
        }
    }
}
