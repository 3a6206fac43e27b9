use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type Params = BTreeMap<String, Value>;

/// Outcome of one check at one parameter point. `max_residual` is absent when the check
/// could not be evaluated, in which case `error` says why and `pass` is false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub check: String,
    pub params: Params,
    pub samples: usize,
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    pub fn measured(
        check: &str,
        params: Params,
        samples: usize,
        max_residual: f64,
        tolerance: f64,
    ) -> Self {
        Record {
            check: check.to_string(),
            params,
            samples,
            max_residual: Some(max_residual),
            tolerance,
            pass: max_residual <= tolerance,
            error: None,
        }
    }

    pub fn failed(check: &str, params: Params, tolerance: f64, error: impl Into<String>) -> Self {
        Record {
            check: check.to_string(),
            params,
            samples: 0,
            max_residual: None,
            tolerance,
            pass: false,
            error: Some(error.into()),
        }
    }

    fn sort_key(&self) -> (String, String) {
        (
            self.check.clone(),
            serde_json::to_string(&self.params).unwrap_or_default(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    /// Orders records by check name, then by serialized parameters, and summarizes them.
    pub fn from_records(mut records: Vec<Record>) -> Self {
        records.sort_by_cached_key(Record::sort_key);
        let passed = records.iter().filter(|r| r.pass).count();
        Report {
            summary: Summary {
                total: records.len(),
                passed,
                failed: records.len() - passed,
            },
            records,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// Checks that every `pass` flag agrees with its residual and the summary agrees with the
    /// records.
    pub fn validate(&self) -> Result<(), CliError> {
        for r in &self.records {
            let expect = r.error.is_none() && r.max_residual.is_some_and(|m| m <= r.tolerance);
            if r.pass != expect {
                return Err(CliError::Report(format!(
                    "pass flag of {} disagrees with its residual",
                    r.check
                )));
            }
        }
        if Report::from_records(self.records.clone()).summary != self.summary {
            return Err(CliError::Report("summary disagrees with records".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit(report: &Report, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, report)?;
            writeln!(out)
        }
        Format::Text => emit_text(report, out),
    }
}

fn format_params(p: &Params) -> String {
    p.iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn emit_text(report: &Report, out: &mut impl Write) -> std::io::Result<()> {
    let rows: Vec<[String; 6]> = report
        .records
        .iter()
        .map(|r| {
            [
                r.check.clone(),
                format_params(&r.params),
                r.samples.to_string(),
                r.max_residual.map_or("-".into(), |m| format!("{m:.3e}")),
                format!("{:.1e}", r.tolerance),
                if r.pass { "PASS".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    let header = [
        "check",
        "params",
        "samples",
        "max_residual",
        "tolerance",
        "result",
    ]
    .map(String::from);
    let mut width = header.clone().map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |row: &[String; 6]| {
        let cells: Vec<String> = row
            .iter()
            .zip(width)
            .enumerate()
            .map(|(i, (cell, w))| {
                let pad = w - cell.chars().count();
                if i == 2 || i == 3 || i == 4 {
                    format!("{}{cell}", " ".repeat(pad))
                } else {
                    format!("{cell}{}", " ".repeat(pad))
                }
            })
            .collect();
        cells.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(&header))?;
    for (row, r) in rows.iter().zip(&report.records) {
        writeln!(out, "{}", line(row))?;
        if let Some(e) = &r.error {
            writeln!(out, "    error: {e}")?;
        }
    }
    let s = report.summary;
    writeln!(
        out,
        "total {}, passed {}, failed {}",
        s.total, s.passed, s.failed
    )
}

pub fn parse(text: &str) -> Result<Report, CliError> {
    let report: Report = serde_json::from_str(text).map_err(|e| CliError::Report(e.to_string()))?;
    report.validate()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn json(r: &Report) -> String {
        let mut buf = Vec::new();
        emit(r, Format::Json, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_report() {
        let r = Report::from_records(Vec::new());
        assert_eq!(
            json(&r),
            "{\"records\":[],\"summary\":{\"total\":0,\"passed\":0,\"failed\":0}}\n"
        );
    }

    #[test]
    fn summary_and_round_trip() {
        let mut p = Params::new();
        p.insert("order".into(), 32.into());
        let records = vec![
            Record::measured("stokes", p.clone(), 10, 0.1 + 0.2, 1e-8),
            Record::measured("cone", p.clone(), 10, 3.3e-16, 1e-8),
            Record::failed("covariance", p, 1e-8, "no analytic convolution"),
        ];
        let r = Report::from_records(records);
        assert_eq!(
            r.records
                .iter()
                .map(|r| r.check.as_str())
                .collect::<Vec<_>>(),
            ["cone", "covariance", "stokes"]
        );
        assert_eq!(
            r.summary,
            Summary {
                total: 3,
                passed: 1,
                failed: 2
            }
        );
        assert_eq!(parse(&json(&r)).unwrap(), r);

        let one = Report::from_records(vec![r.records[0].clone()]);
        assert!(json(&one).ends_with("\"summary\":{\"total\":1,\"passed\":1,\"failed\":0}}\n"));
    }

    #[test]
    fn inconsistent_reports_are_rejected() {
        let mut r =
            Report::from_records(vec![Record::measured("cone", Params::new(), 1, 1.0, 0.5)]);
        r.records[0].pass = true;
        assert!(parse(&json(&r)).is_err());
        let mut r = Report::from_records(Vec::new());
        r.summary.total = 1;
        assert!(parse(&json(&r)).is_err());
    }

    #[test]
    fn text_table() {
        let r = Report::from_records(vec![
            Record::measured("stokes", Params::new(), 4, 2.5e-15, 1e-8),
            Record::failed("cone", Params::new(), 1e-8, "boom"),
        ]);
        let mut buf = Vec::new();
        emit(&r, Format::Text, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("check"));
        assert!(text.contains("error: boom"));
        assert!(text.contains("PASS") && text.contains("FAIL"));
        assert!(text.ends_with("total 2, passed 1, failed 1\n"));
    }
}
