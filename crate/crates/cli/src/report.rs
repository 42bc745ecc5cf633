//! Report envelope, exit codes and rendering helpers.

use helly_core::{Error, Scalar, Subspace};
use serde_json::{json, Value};

use crate::files::InputError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Refuted,
    InputError,
    BudgetExceeded,
    Contradiction,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Refuted => 1,
            Status::InputError => 2,
            Status::BudgetExceeded => 3,
            Status::Contradiction => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Refuted => "refuted",
            Status::InputError => "input_error",
            Status::BudgetExceeded => "budget_exceeded",
            Status::Contradiction => "contradiction",
        }
    }
}

/// A finished command: status, machine result and human text.
pub struct Output {
    pub status: Status,
    pub result: Value,
    pub text: String,
}

/// A command that could not produce a result.
#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            status: Status::InputError,
            kind: "input".into(),
            message: message.into(),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (status, kind) = match &e {
            Error::BudgetExceeded { .. } => (Status::BudgetExceeded, "budget"),
            Error::NoRedundantUnion { .. } => (Status::Refuted, "no_witness"),
            Error::ConstructionFailed(_) => (Status::Refuted, "construction_failed"),
            Error::Internal(_) => (Status::Contradiction, "internal"),
            Error::FieldTooSmall { .. } => (Status::InputError, "field_too_small"),
            Error::Unsupported(_) => (Status::InputError, "unsupported"),
            Error::HypothesisViolated(_) => (Status::InputError, "hypothesis_violated"),
            _ => (Status::InputError, "input"),
        };
        Failure {
            status,
            kind: kind.into(),
            message: e.to_string(),
        }
    }
}

pub type CommandResult = Result<Output, Failure>;

pub fn envelope(command: &str, outcome: &CommandResult) -> Value {
    match outcome {
        Ok(out) => json!({
            "version": SCHEMA_VERSION,
            "command": command,
            "status": out.status.as_str(),
            "exit_code": out.status.code(),
            "result": out.result,
        }),
        Err(f) => json!({
            "version": SCHEMA_VERSION,
            "command": command,
            "status": f.status.as_str(),
            "exit_code": f.status.code(),
            "error": {"kind": f.kind, "message": f.message},
        }),
    }
}

pub fn scalar_json(x: &Scalar) -> Value {
    Value::String(x.to_string())
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn vectors_json(vs: &[Vec<Scalar>]) -> Value {
    Value::Array(vs.iter().map(|v| vector_json(v)).collect())
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({"dim": s.dim(), "basis": vectors_json(&s.basis_vectors())})
}

pub fn vector_text(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn span_text(vs: &[Vec<Scalar>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| vector_text(v)).collect();
    format!("span{{{}}}", parts.join(", "))
}

/// 1-based, brace-delimited.
pub fn set_text(elements: &[usize]) -> String {
    let parts: Vec<String> = elements.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}
