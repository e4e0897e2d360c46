//! JSON reports, verdicts and exit codes.

use serde_json::{json, Map, Value};
use thiserror::Error;

use supersymp_core::scalar::{q_str, Gq, Q};

use crate::dsl::DslError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Dsl { path: String, source: DslError },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] supersymp_core::Error),
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        CliError::Dsl { path: String::from("<expr>"), source: e }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Verified
        } else {
            Verdict::Refuted
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Refuted | Verdict::Inconclusive => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub body: Map<String, Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdict: Verdict) -> Self {
        Report { command: command.into(), verdict, body: Map::new() }
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.body.insert(key.to_string(), v.into());
        self
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.body.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert(String::from("command"), Value::from(self.command.clone()));
        m.insert(String::from("verdict"), Value::from(self.verdict.name()));
        for (k, v) in &self.body {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

pub fn error_json(e: &CliError) -> Value {
    json!({ "verdict": "error", "error": e.to_string() })
}

pub fn q_json(x: &Q) -> Value {
    Value::from(q_str(x))
}

pub fn gq_json(x: &Gq) -> Value {
    Value::from(x.to_string())
}

pub fn qs_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_json).collect())
}

pub fn matrix_json(m: &[Vec<Gq>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(gq_json).collect())).collect())
}

pub fn qmatrix_json(m: &[Vec<Q>]) -> Value {
    Value::Array(m.iter().map(|r| qs_json(r)).collect())
}

/// One named check with the expected and computed values as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub section: String,
    pub pass: bool,
    pub expected: String,
    pub got: String,
}

impl Check {
    pub fn eq(section: &str, name: &str, expected: impl Into<String>, got: impl Into<String>) -> Self {
        let (expected, got) = (expected.into(), got.into());
        Check { name: name.to_string(), section: section.to_string(), pass: expected == got, expected, got }
    }

    pub fn holds(section: &str, name: &str, pass: bool) -> Self {
        Check {
            name: name.to_string(),
            section: section.to_string(),
            pass,
            expected: String::from("true"),
            got: pass.to_string(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "section": self.section,
            "name": self.name,
            "pass": self.pass,
            "expected": self.expected,
            "got": self.got,
        })
    }
}
