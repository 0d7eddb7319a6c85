//! CSV and JSON serialization of verification records.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::funceq::{GridSpec, Step, TolerancePolicy, VerificationRecord};
use crate::mellin::TruncationConfig;

pub const CSV_HEADER: &str =
    "step,s_re,s_im,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,n_terms,converged,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flat form of a record as it appears in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub step: Step,
    pub s_re: f64,
    pub s_im: f64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub n_terms: usize,
    pub converged: bool,
    pub pass: bool,
}

impl From<&VerificationRecord> for ReportRow {
    fn from(r: &VerificationRecord) -> Self {
        Self {
            step: r.step,
            s_re: r.s.re,
            s_im: r.s.im,
            lhs_re: r.lhs.re,
            lhs_im: r.lhs.im,
            rhs_re: r.rhs.re,
            rhs_im: r.rhs.im,
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            n_terms: r.n_terms,
            converged: r.converged,
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationMeta {
    pub max_intervals: usize,
    pub target_tol: f64,
    pub tail_strategy: String,
    pub series_terms: usize,
}

impl From<&TruncationConfig> for TruncationMeta {
    fn from(t: &TruncationConfig) -> Self {
        Self {
            max_intervals: t.max_intervals,
            target_tol: t.target_tol,
            tail_strategy: format!("{:?}", t.tail_strategy),
            series_terms: t.series_terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub tolerances: TolerancePolicy,
    pub grid: GridSpec,
    pub truncation: TruncationMeta,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub metadata: Metadata,
    pub records: Vec<ReportRow>,
}

/// Shortest round-trip decimal; scientific notation outside [1e-5, 1e16).
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn to_csv(records: &[VerificationRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let nums = [
            r.s.re, r.s.im, r.lhs.re, r.lhs.im, r.rhs.re, r.rhs.im, r.abs_err, r.rel_err,
        ];
        out.push_str(r.step.as_str());
        for x in nums {
            out.push(',');
            out.push_str(&format_number(x));
        }
        let _ = writeln!(out, ",{},{},{}", r.n_terms, r.converged, r.pass);
    }
    out
}

pub fn to_json(records: &[VerificationRecord], metadata: Metadata) -> String {
    let report = JsonReport {
        metadata,
        records: records.iter().map(ReportRow::from).collect(),
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report is serializable");
    s.push('\n');
    s
}

/// Parses a CSV report back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err("missing or wrong header".into());
    }
    lines
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(format!("expected 12 fields, got {}: {line}", f.len()));
            }
            let num = |i: usize| f[i].parse::<f64>().map_err(|e| format!("field {i}: {e}"));
            let flag = |i: usize| f[i].parse::<bool>().map_err(|e| format!("field {i}: {e}"));
            let step: Step =
                serde_json::from_str(&format!("\"{}\"", f[0])).map_err(|e| e.to_string())?;
            Ok(ReportRow {
                step,
                s_re: num(1)?,
                s_im: num(2)?,
                lhs_re: num(3)?,
                lhs_im: num(4)?,
                rhs_re: num(5)?,
                rhs_im: num(6)?,
                abs_err: num(7)?,
                rel_err: num(8)?,
                n_terms: f[9].parse().map_err(|e| format!("field 9: {e}"))?,
                converged: flag(10)?,
                pass: flag(11)?,
            })
        })
        .collect()
}
