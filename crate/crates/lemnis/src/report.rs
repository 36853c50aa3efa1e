//! Deterministic key/value report tree.
//!
//! Floats are written with 17 significant digits so every value round-trips
//! bit-exactly. Keys keep insertion order. Nothing time-dependent goes in the
//! body; callers print wall-clock time separately.

use std::fmt::{self, Write as _};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<usize> for Value {
    fn from(x: usize) -> Self {
        Value::Int(x as i64)
    }
}

impl From<bool> for Value {
    fn from(x: bool) -> Self {
        Value::Bool(x)
    }
}

impl From<&str> for Value {
    fn from(x: &str) -> Self {
        Value::Text(x.to_owned())
    }
}

impl From<String> for Value {
    fn from(x: String) -> Self {
        Value::Text(x)
    }
}

/// `x` with 17 significant digits, in scientific notation.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(x) => f.write_str(&format_real(*x)),
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Entry {
    Field(String, Value),
    Section(Section),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    name: String,
    entries: Vec<Entry>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section { name: name.into(), entries: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push(Entry::Field(key.into(), value.into()));
        self
    }

    /// Append a child section and return it for filling.
    pub fn section(&mut self, name: impl Into<String>) -> &mut Section {
        self.entries.push(Entry::Section(Section::new(name)));
        match self.entries.last_mut() {
            Some(Entry::Section(s)) => s,
            _ => unreachable!(),
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find_map(|e| match e {
            Entry::Field(k, v) if k == key => Some(v),
            _ => None,
        })
    }

    pub fn child(&self, name: &str) -> Option<&Section> {
        self.entries.iter().find_map(|e| match e {
            Entry::Section(s) if s.name == name => Some(s),
            _ => None,
        })
    }

    fn render(&self, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        for e in &self.entries {
            match e {
                Entry::Field(k, v) => {
                    let _ = writeln!(out, "{pad}{k}: {v}");
                }
                Entry::Section(s) => {
                    let _ = writeln!(out, "{pad}{}:", s.name);
                    s.render(depth + 1, out);
                }
            }
        }
    }
}

/// One named pass/fail check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub params: Section,
    pub body: Section,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            params: Section::new("parameters"),
            body: Section::new("results"),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, label: impl Into<String>, pass: bool) -> bool {
        self.checks.push(Check { label: label.into(), pass });
        pass
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for s in [&self.params, &self.body] {
            let _ = writeln!(out, "{}:", s.name);
            s.render(1, &mut out);
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = writeln!(out, "  {}: {}", c.label, if c.pass { "PASS" } else { "FAIL" });
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        let _ = writeln!(out, "summary:");
        let _ = writeln!(out, "  checks: {}", self.checks.len());
        let _ = writeln!(out, "  failed: {failed}");
        let _ = writeln!(out, "  pass: {}", failed == 0);
        out
    }
}
