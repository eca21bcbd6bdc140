//! The JSON report printed by every command.

use serde_json::{json, Map, Value};

use crate::input::InputError;

pub const SCHEMA: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

/// What a command computed, plus any verified property that failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub result: Value,
    pub certificates: Vec<Value>,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn new(result: Value) -> Self {
        Outcome { result, certificates: Vec::new(), violations: Vec::new() }
    }

    pub fn certificate(mut self, kind: &str, body: Value) -> Self {
        let mut m = Map::new();
        m.insert("kind".into(), kind.into());
        match body {
            Value::Object(o) => m.extend(o),
            other => {
                m.insert("data".into(), other);
            }
        }
        self.certificates.push(Value::Object(m));
        self
    }

    /// Records a failure when `ok` is false.
    pub fn require(mut self, ok: bool, what: impl Into<String>) -> Self {
        if !ok {
            self.violations.push(what.into());
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Input(InputError),
    /// A library call reported a violated property.
    Property(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<ksymbol::Error> for Failure {
    fn from(e: ksymbol::Error) -> Self {
        match e {
            ksymbol::Error::PropertyViolated(m) => Failure::Property(m),
            other => Failure::Input(InputError::Invalid(other.to_string())),
        }
    }
}

/// Builds the report and its exit code.
pub fn render(command: &str, inputs: Value, outcome: Result<Outcome, Failure>) -> (Value, i32) {
    let mut report = Map::new();
    report.insert("schema".into(), SCHEMA.into());
    report.insert("command".into(), command.into());
    report.insert("inputs".into(), inputs);
    let code = match outcome {
        Ok(o) => {
            let code = if o.violations.is_empty() { EXIT_OK } else { EXIT_PROPERTY };
            report.insert("result".into(), o.result);
            report.insert("certificates".into(), Value::Array(o.certificates));
            if code == EXIT_OK {
                report.insert("status".into(), "ok".into());
            } else {
                report.insert("status".into(), "property_failed".into());
                report.insert("error".into(), json!({"kind": "property", "messages": o.violations}));
            }
            code
        }
        Err(f) => {
            report.insert("result".into(), Value::Null);
            report.insert("certificates".into(), json!([]));
            match f {
                Failure::Input(InputError::Syntax { input, error }) => {
                    report.insert("status".into(), "invalid_input".into());
                    report.insert(
                        "error".into(),
                        json!({"kind": "syntax", "input": input, "offset": error.offset, "message": error.message}),
                    );
                    EXIT_INVALID
                }
                Failure::Input(InputError::Invalid(m)) => {
                    report.insert("status".into(), "invalid_input".into());
                    report.insert("error".into(), json!({"kind": "invalid", "message": m}));
                    EXIT_INVALID
                }
                Failure::Property(m) => {
                    report.insert("status".into(), "property_failed".into());
                    report.insert("error".into(), json!({"kind": "property", "messages": [m]}));
                    EXIT_PROPERTY
                }
            }
        }
    };
    (Value::Object(report), code)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_text(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("JSON values always serialize");
    s.push('\n');
    s
}
