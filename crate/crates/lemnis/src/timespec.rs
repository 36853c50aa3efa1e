//! Time expressions for `--t`: a number, or a multiple of the quarter period
//! `K` or the period `tau`, optionally divided by an integer.
//!
//! Accepted forms: `0.3`, `K`, `K/5`, `2K`, `3*K/5`, `tau/8`, `-tau/4`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSpec {
    text: String,
    coefficient: f64,
    unit: Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Absolute,
    Quarter,
    Period,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTimeError(String);

impl fmt::Display for ParseTimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot read time expression {:?} (try 0.3, K/5, 2K, tau/8)", self.0)
    }
}

impl std::error::Error for ParseTimeError {}

impl std::str::FromStr for TimeSpec {
    type Err = ParseTimeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseTimeError(s.to_owned());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (numer, denom) = match compact.split_once('/') {
            Some((a, b)) => (a, b.parse::<u32>().map_err(|_| err())?),
            None => (compact.as_str(), 1),
        };
        if denom == 0 {
            return Err(err());
        }
        let (head, unit) = if let Some(h) = numer.strip_suffix("tau") {
            (h, Unit::Period)
        } else if let Some(h) = numer.strip_suffix('K') {
            (h, Unit::Quarter)
        } else {
            (numer, Unit::Absolute)
        };
        let head = head.strip_suffix('*').unwrap_or(head);
        let coefficient = match (head, unit) {
            ("", Unit::Absolute) => return Err(err()),
            ("" | "+", _) => 1.0,
            ("-", _) => -1.0,
            (h, _) => h.parse::<f64>().map_err(|_| err())?,
        };
        if !coefficient.is_finite() {
            return Err(err());
        }
        Ok(TimeSpec { text: s.trim().to_owned(), coefficient: coefficient / f64::from(denom), unit })
    }
}

impl TimeSpec {
    /// Time value for a curve with quarter period `quarter`.
    pub fn resolve(&self, quarter: f64) -> f64 {
        match self.unit {
            Unit::Absolute => self.coefficient,
            Unit::Quarter => self.coefficient * quarter,
            Unit::Period => self.coefficient * 4.0 * quarter,
        }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}
