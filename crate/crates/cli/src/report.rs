use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Found,
    Violation,
    NoneExhaustive,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Found => EXIT_OK,
            Status::Violation | Status::NoneExhaustive => EXIT_NEGATIVE,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Found => "found",
            Status::Violation => "violation",
            Status::NoneExhaustive => "none-exhaustive",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn of_verdict<T>(v: &coarsegraph::Verdict<T>) -> Status {
        match v {
            coarsegraph::Verdict::Found(_) => Status::Found,
            coarsegraph::Verdict::NoneExhaustive => Status::NoneExhaustive,
            coarsegraph::Verdict::Inconclusive { .. } => Status::Inconclusive,
        }
    }
}

/// Outcome of one subcommand. Fields keep insertion order in text mode and
/// sorted order in JSON.
#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    fields: Vec<(String, Value)>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report {
            status,
            fields: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("report values serialize");
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Fields only, without the status.
    pub fn body(&self) -> Value {
        Value::Object(self.fields.iter().cloned().collect::<Map<_, _>>())
    }

    pub fn to_json(&self, command: &str) -> Value {
        let mut map = Map::new();
        map.insert("command".into(), command.into());
        map.insert("status".into(), self.status.as_str().into());
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }

    pub fn emit(&self, command: &str, json: bool, out: &mut impl Write) -> std::io::Result<()> {
        if json {
            serde_json::to_writer_pretty(&mut *out, &self.to_json(command))?;
            return writeln!(out);
        }
        writeln!(out, "{command}: {}", self.status.as_str())?;
        for (k, v) in &self.fields {
            if k == "certificate" {
                continue;
            }
            match v {
                Value::String(s) => writeln!(out, "  {k}: {s}")?,
                other => writeln!(out, "  {k}: {other}")?,
            }
        }
        Ok(())
    }
}
