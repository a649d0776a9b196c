//! Benchmark runner over a directory of `.c` programs with `.expected`
//! companions.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use boxprune::bmc::{compare_runs, ComparisonStatus, VerdictClass};
use boxprune::pipeline::instrument_program;

use crate::report::{verdict_word, Report};
use crate::{load, sidecar_for, Checker};

/// Competition-style score of one answer.
pub fn score(answer: VerdictClass, expected: VerdictClass) -> i64 {
    match (answer, expected) {
        (VerdictClass::Unknown, _) => 0,
        (VerdictClass::Safe, VerdictClass::Safe) => 2,
        (VerdictClass::Unsafe, VerdictClass::Unsafe) => 1,
        (VerdictClass::Safe, _) => -32,
        (VerdictClass::Unsafe, _) => -16,
    }
}

#[derive(Debug, Serialize)]
struct Row {
    name: String,
    expected: VerdictClass,
    plan: String,
    original: Option<VerdictClass>,
    instrumented: Option<VerdictClass>,
    status: Option<ComparisonStatus>,
    states_original: u64,
    states_instrumented: u64,
    score_original: i64,
    score_instrumented: i64,
    error: Option<String>,
}

fn run_one(path: &Path, checker: &Checker, eps: f64) -> Option<Row> {
    let name = path.file_name()?.to_string_lossy().into_owned();
    let sidecar = match sidecar_for(path) {
        Ok(Some(s)) => s,
        Ok(None) => {
            eprintln!("warning: {name}: no .expected file, skipped");
            return None;
        }
        Err(e) => {
            eprintln!("warning: {name}: {e:#}, skipped");
            return None;
        }
    };
    let mut row = Row {
        name,
        expected: sidecar.expected,
        plan: String::new(),
        original: None,
        instrumented: None,
        status: None,
        states_original: 0,
        states_instrumented: 0,
        score_original: 0,
        score_instrumented: 0,
        error: None,
    };
    let result = (|| -> Result<()> {
        let p = load(path)?;
        let (q, a) = instrument_program(&p, eps)?;
        row.plan = if a.plan.applied {
            a.plan.insertions.iter().map(|i| i.text.clone()).collect::<Vec<_>>().join(", ")
        } else {
            a.plan.reason.map(|r| r.code().to_string()).unwrap_or_default()
        };
        let cmp = compare_runs(&p, &q, checker.k_max, &checker.policy(Some(&sidecar)))?;
        row.original = Some(cmp.original.class);
        row.instrumented = Some(cmp.instrumented.class);
        row.status = Some(cmp.status);
        row.states_original = cmp.original.stats.states_visited;
        row.states_instrumented = cmp.instrumented.stats.states_visited;
        row.score_original = score(cmp.original.class, sidecar.expected);
        row.score_instrumented = score(cmp.instrumented.class, sidecar.expected);
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(format!("{e:#}"));
    }
    Some(row)
}

pub fn run(dir: &Path, checker: &Checker, eps: f64) -> Result<Report> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "c"))
        .collect();
    files.sort();
    let rows: Vec<Row> = files.par_iter().filter_map(|f| run_one(f, checker, eps)).collect();

    let total_orig: u64 = rows.iter().map(|r| r.states_original).sum();
    let total_instr: u64 = rows.iter().map(|r| r.states_instrumented).sum();
    let reduction = if total_orig == 0 {
        0.0
    } else {
        100.0 * (1.0 - total_instr as f64 / total_orig as f64)
    };
    let divergences = rows.iter().filter(|r| r.status == Some(ComparisonStatus::VerdictDivergence)).count();
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    let score_orig: i64 = rows.iter().map(|r| r.score_original).sum();
    let score_instr: i64 = rows.iter().map(|r| r.score_instrumented).sum();

    let mut report = Report::new("bench");
    report.line(format!(
        "{:<20} {:<8} {:<10} {:<10} {:>10} {:>10}  plan",
        "program", "expected", "original", "pruned", "states", "pruned"
    ));
    for r in &rows {
        let pad = |c: Option<VerdictClass>| match c {
            Some(c) => {
                let w = verdict_word(c);
                let plain = format!("{c:?}").len();
                format!("{w}{}", " ".repeat(10 - plain))
            }
            None => format!("{:<10}", "ERROR"),
        };
        let expected = format!("{:?}", r.expected).to_uppercase();
        let mut line = format!(
            "{:<20} {:<8} {} {} {:>10} {:>10}  {}",
            r.name,
            expected,
            pad(r.original),
            pad(r.instrumented),
            r.states_original,
            r.states_instrumented,
            r.plan
        );
        if let Some(e) = &r.error {
            line.push_str(&format!("  error: {e}"));
        }
        if r.status == Some(ComparisonStatus::VerdictDivergence) {
            line.push_str("  VERDICT_DIVERGENCE");
        }
        report.line(line);
    }
    report.line(format!("programs: {}, divergences: {divergences}, errors: {errors}", rows.len()));
    report.line(format!("score: original {score_orig}, instrumented {score_instr}"));
    report.line(format!("aggregate state reduction: {reduction:.2}%"));
    report.value("programs", json!(rows));
    report.value(
        "summary",
        json!({
            "programs": rows.len(),
            "divergences": divergences,
            "errors": errors,
            "score_original": score_orig,
            "score_instrumented": score_instr,
            "states_original": total_orig,
            "states_instrumented": total_instr,
            "reduction_percent": reduction,
        }),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring_table() {
        use VerdictClass::*;
        assert_eq!(score(Safe, Safe), 2);
        assert_eq!(score(Unsafe, Unsafe), 1);
        assert_eq!(score(Safe, Unsafe), -32);
        assert_eq!(score(Unsafe, Safe), -16);
        assert_eq!(score(Unknown, Safe), 0);
        assert_eq!(score(Unknown, Unsafe), 0);
    }
}
