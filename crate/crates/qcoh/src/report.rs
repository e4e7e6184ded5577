//! Writers for verification output: JSON lines for per-trial reports, a
//! CSV summary for ensemble runs, and fixed-width text tables for the
//! reference-value comparison.

use crate::error::Result;
use crate::verifier::{EnsembleReport, ReferenceRow, RowStatus, TheoremReport};
use std::io::Write;

/// Writes one JSON object per line, one line per report.
pub fn write_reports_jsonl<W: Write>(mut w: W, reports: &[TheoremReport]) -> Result<()> {
    for report in reports {
        let line = serde_json::to_string(report)
            .expect("theorem reports contain only serializable finite terms");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// CSV summary of ensemble runs: `theorem_id,trials,passes,min_slack`.
pub fn ensemble_summary_csv(reports: &[EnsembleReport]) -> String {
    let mut out = String::from("theorem_id,trials,passes,min_slack\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{:.9e}\n",
            r.theorem_id, r.trials, r.passes, r.min_slack
        ));
    }
    out
}

/// Fixed-width table of reference-value rows for terminal output.
pub fn reference_table(rows: &[ReferenceRow]) -> String {
    let name_width = rows
        .iter()
        .map(|r| r.name.len())
        .max()
        .unwrap_or(4)
        .max("name".len());
    let mut out = format!(
        "{:<name_width$}  {:>12}  {:>20}  {:>10}  {:>8}  status\n",
        "name", "expected", "computed", "|delta|", "tol"
    );
    for r in rows {
        let status = match r.status {
            RowStatus::Pass => "pass",
            RowStatus::Finding => "FINDING",
            RowStatus::Fail => "FAIL",
        };
        out.push_str(&format!(
            "{:<name_width$}  {:>12.6}  {:>20.16}  {:>10.3e}  {:>8.0e}  {status}\n",
            r.name, r.expected, r.computed, r.delta, r.tolerance
        ));
    }
    out
}

/// One-line human summary of an ensemble run.
pub fn ensemble_summary_line(report: &EnsembleReport) -> String {
    format!(
        "theorem {}: {}/{} passed, min slack {:.3e}, {} retried{}",
        report.theorem_id,
        report.passes,
        report.trials,
        report.min_slack,
        report.retried,
        if report.failures.is_empty() {
            String::new()
        } else {
            format!(", {} FAILED", report.failures.len())
        }
    )
}
