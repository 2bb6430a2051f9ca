use super::config::ExperimentConfig;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// How a row's estimate is judged against its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|estimate - target| <= budget`
    Within,
    /// `estimate >= target - budget`
    AtLeast,
    /// `estimate <= target + budget`
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub estimate: f64,
    pub target: f64,
    pub budget: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(name: impl Into<String>, estimate: f64, target: f64, budget: f64, comparison: Comparison) -> Self {
        let pass = match comparison {
            Comparison::Within => (estimate - target).abs() <= budget,
            Comparison::AtLeast => estimate >= target - budget,
            Comparison::AtMost => estimate <= target + budget,
        };
        Self { name: name.into(), estimate, target, budget, comparison, pass }
    }

    pub fn within(name: impl Into<String>, estimate: f64, target: f64, budget: f64) -> Self {
        Self::new(name, estimate, target, budget, Comparison::Within)
    }

    pub fn at_least(name: impl Into<String>, estimate: f64, bound: f64, budget: f64) -> Self {
        Self::new(name, estimate, bound, budget, Comparison::AtLeast)
    }

    pub fn at_most(name: impl Into<String>, estimate: f64, bound: f64, budget: f64) -> Self {
        Self::new(name, estimate, bound, budget, Comparison::AtMost)
    }
}

/// Facts about the run that do not follow from the config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub timestamp_unix: u64,
    pub wall_clock_seconds: f64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub library_version: String,
    pub suite: String,
    pub config: ExperimentConfig,
    pub stream_layout: String,
    pub rows: Vec<CheckRow>,
    pub pass: bool,
    pub runtime: Runtime,
}

impl ExperimentReport {
    /// Pretty JSON of everything except `runtime`; identical for identical
    /// config and seed.
    pub fn canonical_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("runtime");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(CheckRow::within("a", 1.0, 1.5, 0.5).pass);
        assert!(!CheckRow::within("a", 1.0, 1.6, 0.5).pass);
        assert!(CheckRow::at_least("b", -1e-9, 0.0, 1e-8).pass);
        assert!(!CheckRow::at_least("b", -1e-7, 0.0, 1e-8).pass);
        assert!(CheckRow::at_most("c", 3.0, 3.0, 0.0).pass);
        assert!(!CheckRow::within("nan", f64::NAN, 0.0, 1.0).pass);
    }
}
