use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportViolation {
    /// What was checked, e.g. `table 12` or `v = 9`.
    pub subject: String,
    pub check: String,
    pub detail: String,
}

/// Outcome of one command. `pass` is true exactly when `violations` is
/// empty; everything except `duration_secs` is a function of the
/// configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub violations: Vec<ReportViolation>,
    pub pass: bool,
    pub duration_secs: f64,
}

impl ReportDocument {
    pub fn new(
        command: &str,
        config: Value,
        results: Value,
        violations: Vec<ReportViolation>,
        started: Instant,
    ) -> Self {
        ReportDocument {
            command: command.into(),
            config,
            results,
            pass: violations.is_empty(),
            violations,
            duration_secs: started.elapsed().as_secs_f64(),
        }
    }

    /// The report without its timing, for comparing runs.
    pub fn body(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("duration_secs");
        v
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
