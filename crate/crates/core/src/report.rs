//! Residual reports with a stable JSON layout.

use serde::Serialize;

use crate::config::RunConfig;

/// Whether the tolerance is an upper or a lower bound on the residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The identity, written as a formula.
    pub paper_eq: String,
    /// `null` in JSON when the computation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub fn at_most(name: impl Into<String>, eq: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(name, eq, residual, tolerance, Bound::Upper)
    }

    /// Passes when `residual >= tolerance`.
    pub fn at_least(name: impl Into<String>, eq: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self::new(name, eq, residual, tolerance, Bound::Lower)
    }

    fn new(name: impl Into<String>, eq: impl Into<String>, residual: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = residual.is_finite()
            && match bound {
                Bound::Upper => residual <= tolerance,
                Bound::Lower => residual >= tolerance,
            };
        Self { name: name.into(), paper_eq: eq.into(), residual: residual.is_finite().then_some(residual), tolerance, bound, pass, detail: None }
    }

    /// A check whose computation returned an error.
    pub fn failed(name: impl Into<String>, eq: impl Into<String>, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            paper_eq: eq.into(),
            residual: None,
            tolerance,
            bound: Bound::Upper,
            pass: false,
            detail: Some(err.to_string()),
        }
    }

    /// Builds from a fallible residual.
    pub fn from_result<E: std::fmt::Display>(
        name: impl Into<String>,
        eq: impl Into<String>,
        r: std::result::Result<f64, E>,
        tolerance: f64,
        bound: Bound,
    ) -> Self {
        match r {
            Ok(v) => Self::new(name, eq, v, tolerance, bound),
            Err(e) => Self { bound, ..Self::failed(name, eq, tolerance, e) },
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    /// `PASS name residual (tol)` line for logs.
    pub fn line(&self) -> String {
        let r = self.residual.map_or("error".to_string(), |v| format!("{v:.3e}"));
        let op = match self.bound {
            Bound::Upper => "<=",
            Bound::Lower => ">=",
        };
        let mut s = format!("{} {} residual={} {} {:.1e}", if self.pass { "PASS" } else { "FAIL" }, self.name, r, op, self.tolerance);
        if let Some(d) = &self.detail {
            s.push_str(&format!(" [{d}]"));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    /// Sorts checks by name so the output does not depend on evaluation order.
    pub fn new(config: RunConfig, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = checks.iter().all(|c| c.pass);
        Self { config, checks, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_errors() {
        assert!(Check::at_most("a", "x = y", 1e-9, 1e-8).pass);
        assert!(!Check::at_most("a", "x = y", f64::NAN, 1e-8).pass);
        assert!(Check::at_least("b", "x != y", 0.5, 1e-2).pass);
        let f = Check::failed("c", "z", 1e-5, "singular");
        assert!(!f.pass && f.residual.is_none());
        assert!(f.line().starts_with("FAIL c residual=error"));
    }

    #[test]
    fn json_is_sorted_and_stable() {
        let checks = vec![Check::at_most("b", "", 0.0, 1.0), Check::at_most("a", "", 2.0, 1.0)];
        let r = Report::new(RunConfig::default(), checks.clone());
        assert_eq!(r.checks[0].name, "a");
        assert!(!r.pass);
        assert_eq!(r.to_json(), Report::new(RunConfig::default(), checks.into_iter().rev().collect()).to_json());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["bound"], "upper");
        assert!(v["checks"][0].get("detail").is_none());
    }
}
