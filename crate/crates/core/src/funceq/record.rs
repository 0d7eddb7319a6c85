use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One link of the verification chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "EQ1")]
    Eq1,
    #[serde(rename = "TELESCOPE")]
    Telescope,
    #[serde(rename = "INTERCHANGE")]
    Interchange,
    #[serde(rename = "SERIES_SUM")]
    SeriesSum,
    #[serde(rename = "FUNC_EQ")]
    FuncEq,
}

impl Step {
    pub fn as_str(self) -> &'static str {
        match self {
            Step::Eq1 => "EQ1",
            Step::Telescope => "TELESCOPE",
            Step::Interchange => "INTERCHANGE",
            Step::SeriesSum => "SERIES_SUM",
            Step::FuncEq => "FUNC_EQ",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A record passes when either tolerance is met.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationRecord {
    pub step: Step,
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    /// abs_err / max(|lhs|, |rhs|, 1)
    pub rel_err: f64,
    pub n_terms: usize,
    pub converged: bool,
    pub pass: bool,
}

impl VerificationRecord {
    pub fn new(
        step: Step,
        s: Complex64,
        lhs: Complex64,
        rhs: Complex64,
        n_terms: usize,
        converged: bool,
        tol: &TolerancePolicy,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / lhs.norm().max(rhs.norm()).max(1.0);
        let within = abs_err <= tol.abs_tol || rel_err <= tol.rel_tol;
        Self {
            step,
            s,
            lhs,
            rhs,
            abs_err,
            rel_err,
            n_terms,
            converged,
            pass: converged && within,
        }
    }

    /// A step that could not be computed at all.
    pub fn failed(step: Step, s: Complex64) -> Self {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        Self {
            step,
            s,
            lhs: nan,
            rhs: nan,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            n_terms: 0,
            converged: false,
            pass: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn either_tolerance_suffices() {
        let tol = TolerancePolicy::default();
        let s = Complex64::new(0.5, 14.0);
        // tiny values: relative error huge, absolute error fine
        let r = VerificationRecord::new(
            Step::FuncEq,
            s,
            Complex64::new(1e-12, 0.0),
            Complex64::new(2e-12, 0.0),
            1,
            true,
            &tol,
        );
        assert!(r.pass);
        // large values: absolute error above 1e-8 but relative below 1e-9
        let r = VerificationRecord::new(
            Step::FuncEq,
            s,
            Complex64::new(1e2, 0.0),
            Complex64::new(1e2 + 5e-8, 0.0),
            1,
            true,
            &tol,
        );
        assert!(r.abs_err > tol.abs_tol && r.pass);
        let r = VerificationRecord::new(
            Step::FuncEq,
            s,
            Complex64::new(1.0, 0.0),
            Complex64::new(1.1, 0.0),
            1,
            true,
            &tol,
        );
        assert!(!r.pass);
    }

    #[test]
    fn unconverged_never_passes() {
        let one = Complex64::new(1.0, 0.0);
        let r = VerificationRecord::new(
            Step::Eq1,
            one,
            one,
            one,
            3,
            false,
            &TolerancePolicy::default(),
        );
        assert_eq!(r.abs_err, 0.0);
        assert!(!r.pass);
        assert!(!VerificationRecord::failed(Step::Eq1, one).pass);
    }

    #[test]
    fn step_names() {
        assert_eq!(Step::SeriesSum.to_string(), "SERIES_SUM");
        assert_eq!(serde_json::to_string(&Step::FuncEq).unwrap(), "\"FUNC_EQ\"");
    }
}
