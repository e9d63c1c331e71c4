use std::fmt::{Display, Write as _};

use serde_json::{json, Map, Value};
use spcodes_core::codes::WeightDistribution;
use spcodes_core::{Error, Eisenstein};

use crate::args::Format;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Results and assertions collected by one suite.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub notices: Vec<String>,
    /// Part of the request was beyond the enumerable range.
    pub unsupported: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(Check {
            name: name.to_owned(),
            pass,
            detail: None,
        });
    }

    pub fn notice(&mut self, msg: impl Into<String>) {
        self.notices.push(msg.into());
    }

    /// Records a check for a computation that asserts internally.
    /// Invariant failures become failed checks; other errors propagate.
    pub fn verify<T>(&mut self, name: &str, res: spcodes_core::Result<T>) -> Result<Option<T>, CliError> {
        match res {
            Ok(v) => {
                self.check(name, true);
                Ok(Some(v))
            }
            Err(e @ Error::Invariant { .. }) => {
                self.checks.push(Check {
                    name: name.to_owned(),
                    pass: false,
                    detail: Some(e.to_string()),
                });
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Nests `sub` under `key`, prefixing its check names and notices.
    pub fn absorb(&mut self, key: &str, sub: Report) {
        self.results.insert(key.to_owned(), Value::Object(sub.results));
        for mut c in sub.checks {
            c.name = format!("{key}.{}", c.name);
            self.checks.push(c);
        }
        for n in sub.notices {
            self.notices.push(format!("{key}: {n}"));
        }
    }

    pub fn exit_code(&self) -> u8 {
        if !self.passed() {
            1
        } else if self.unsupported {
            3
        } else {
            0
        }
    }

    pub fn into_envelope(self, command: &str, params: Map<String, Value>, elapsed_ms: u128) -> Value {
        let verdict = if self.passed() { "pass" } else { "fail" };
        let mut results = self.results;
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut o = json!({ "name": c.name, "pass": c.pass });
                if let Some(d) = &c.detail {
                    o["detail"] = json!(d);
                }
                o
            })
            .collect();
        results.insert("checks".into(), Value::Array(checks));
        results.insert("notices".into(), json!(self.notices));
        json!({
            "command": command,
            "params": params,
            "results": results,
            "verdict": verdict,
            "elapsed_ms": elapsed_ms as u64,
        })
    }
}

/// Exact integers travel as decimal strings.
pub fn big(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn eisenstein(x: &Eisenstein) -> Value {
    match x.to_integer() {
        Some(n) => big(n),
        None => big(x),
    }
}

pub fn weights(d: &WeightDistribution) -> Value {
    let counts: Vec<Value> = d.iter().map(|(w, c)| json!([w, c.to_string()])).collect();
    json!({ "length": d.length(), "counts": counts })
}

pub fn render(envelope: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(envelope).expect("values are serializable");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut out = String::from("#path\tvalue\n");
            flatten(envelope, String::new(), &mut out);
            out
        }
    }
}

fn flatten(v: &Value, path: String, out: &mut String) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_owned()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(x, join(k), out);
            }
        }
        Value::Array(a) => {
            if a.is_empty() {
                let _ = writeln!(out, "{path}\t");
            }
            for (i, x) in a.iter().enumerate() {
                flatten(x, join(&i.to_string()), out);
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, "{path}\t{}", s.replace(['\t', '\n'], " "));
        }
        other => {
            let _ = writeln!(out, "{path}\t{other}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_flattens_nested_values() {
        let v = json!({"a": {"b": [1, "22"]}, "c": true, "d": []});
        assert_eq!(render(&v, Format::Tsv), "#path\tvalue\na.b.0\t1\na.b.1\t22\nc\ttrue\nd\t\n");
    }

    #[test]
    fn verify_turns_invariants_into_failed_checks() {
        let mut r = Report::new();
        let bad: spcodes_core::Result<()> = Err(Error::Invariant {
            what: "x".into(),
            expected: "1".into(),
            actual: "2".into(),
        });
        assert!(r.verify("x", bad).unwrap().is_none());
        assert!(!r.passed());
        assert_eq!(r.exit_code(), 1);
        let unsupported: spcodes_core::Result<()> = Err(Error::UnsupportedScale("big".into()));
        assert_eq!(r.verify("y", unsupported).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut sub = Report::new();
        sub.check("ok", true);
        sub.notice("skipped");
        let mut top = Report::new();
        top.absorb("field", sub);
        assert_eq!(top.checks[0].name, "field.ok");
        assert_eq!(top.notices, ["field: skipped"]);
    }
}
