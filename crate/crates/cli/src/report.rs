use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// One measured quantity and the bound it was held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckRecord {
    fn new(id: &str, ok: bool, value: f64, tolerance: f64) -> Self {
        Self {
            id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            tolerance,
            detail: String::new(),
        }
    }

    /// Passes when `value <= tolerance`; NaN fails.
    pub fn at_most(id: &str, value: f64, tolerance: f64) -> Self {
        Self::new(id, value <= tolerance, value, tolerance)
    }

    /// Passes when `value >= bound`; NaN fails.
    pub fn at_least(id: &str, value: f64, bound: f64) -> Self {
        Self::new(id, value >= bound, value, bound)
    }

    /// Passes when `value > bound`.
    pub fn above(id: &str, value: f64, bound: f64) -> Self {
        Self::new(id, value > bound, value, bound)
    }

    pub fn flag(id: &str, ok: bool) -> Self {
        Self::new(id, ok, if ok { 1.0 } else { 0.0 }, 1.0)
    }

    pub fn skip(id: &str, value: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.to_string(),
            status: Status::Skip,
            value,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub algebra: String,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    /// Sorts the checks by id; the report fails iff some check fails.
    pub fn new(suite: &str, algebra: &str, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        };
        Self {
            suite: suite.to_string(),
            algebra: algebra.to_string(),
            status,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One line per check followed by the overall status.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<44} value={:<12.4e} tol={:.1e}{}\n",
                c.status.label(),
                c.id,
                c.value,
                c.tolerance,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!("  ({})", c.detail)
                }
            ));
        }
        out.push_str(&format!(
            "suite {} [{}]: {}\n",
            self.suite,
            self.algebra,
            self.status.label()
        ));
        out
    }
}
