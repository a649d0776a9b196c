//! Text and machine renderings of analysis, verification and bench results.
//!
//! Machine output is a JSON object whose keys serialise in sorted order, so
//! equal runs print byte-identical reports.

use std::io::IsTerminal;

use serde_json::{json, Map, Value};

use boxprune::bmc::{Comparison, Verdict, VerdictClass};
use boxprune::boxes::BoxSet;
use boxprune::contractor::{ContractionReport, RegionPartition};
use boxprune::instrument::{InstrumentationPlan, Side};
use boxprune::pipeline::Analysis;

use crate::Format;

pub struct Report {
    json: Map<String, Value>,
    lines: Vec<String>,
}

impl Report {
    pub fn new(kind: &str) -> Report {
        let mut json = Map::new();
        json.insert("kind".into(), Value::from(kind));
        Report { json, lines: Vec::new() }
    }

    /// Adds a value to both renderings.
    pub fn field(&mut self, key: &str, v: impl Into<Value>) {
        let v = v.into();
        let text = match &v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        self.lines.push(format!("{key}: {text}"));
        self.json.insert(key.into(), v);
    }

    /// Adds a value to the machine rendering only.
    pub fn value(&mut self, key: &str, v: Value) {
        self.json.insert(key.into(), v);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut s = serde_json::to_string_pretty(&Value::Object(self.json.clone())).expect("plain json");
                s.push('\n');
                s
            }
            Format::Text => self.lines.iter().map(|l| format!("{l}\n")).collect(),
        }
    }

    pub fn print(&self, format: Format) {
        print!("{}", self.render(format));
    }

    pub fn eprint(&self) {
        eprint!("{}", self.render(Format::Text));
    }
}

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal()
}

pub fn verdict_word(class: VerdictClass) -> String {
    let (word, code) = match class {
        VerdictClass::Safe => ("SAFE", "32"),
        VerdictClass::Unsafe => ("UNSAFE", "31"),
        VerdictClass::Unknown => ("UNKNOWN", "33"),
    };
    if color_enabled() {
        format!("\x1b[{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn boxes_text(s: &BoxSet) -> String {
    match s.len() {
        0 => "empty".into(),
        _ => s.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ∪ "),
    }
}

fn contraction_text(r: &ContractionReport) -> String {
    let state = if r.converged { "converged" } else { "sweep limit" };
    format!("{} ({} sweeps, {state})", r.output, r.sweeps)
}

fn add_partition(report: &mut Report, part: &RegionPartition) {
    report.line(format!("outer: {}", contraction_text(&part.outer_report)));
    match &part.inner_report {
        Some(r) => report.line(format!("inner: {}", contraction_text(r))),
        None => report.line("inner: not run"),
    }
    report.line(format!("violating region: {}", boxes_text(&part.s_out)));
    report.line(format!("satisfying region: {}", boxes_text(&part.s_in)));
    report.line(format!("undecided region: {}", boxes_text(&part.s_boundary)));
    if part.whole_domain_violates {
        report.line("every point of the domain violates the constraints");
    }
    report.value("partition", serde_json::to_value(part).expect("serialisable"));
}

pub fn plan_text(plan: &InstrumentationPlan) -> String {
    if !plan.applied {
        return format!("not applied ({})", plan.reason.map(|r| r.code()).unwrap_or("?"));
    }
    let cuts: Vec<String> = plan.insertions.iter().map(|i| format!("assume({})", i.text)).collect();
    format!("{} ({} cut{})", cuts.join(", "), cuts.len(), if cuts.len() == 1 { "" } else { "s" })
}

/// Contraction of a standalone box.
pub fn contraction(constraints: &[String], part: &RegionPartition) -> Report {
    let mut r = Report::new("contraction");
    r.field("constraints", constraints.join(", "));
    r.value("constraints", json!(constraints));
    r.line(format!("domain: {}", part.original));
    add_partition(&mut r, part);
    r
}

/// Everything the pipeline found out about one program.
pub fn analysis(program: &str, a: &Analysis) -> Report {
    let mut r = Report::new("analysis");
    r.field("program", program);
    let texts = a.properties.constraint_texts();
    r.line(format!("constraints: {}", if texts.is_empty() { "none".into() } else { texts.join(", ") }));
    r.value("constraints", json!(texts));
    for s in &a.properties.skipped {
        r.line(format!("skipped assertion {}: {} ({})", s.index, s.text, s.reason));
    }
    r.value("skipped_asserts", serde_json::to_value(&a.properties.skipped).expect("serialisable"));
    let domains: Vec<String> = a.domains.entries().iter().map(|e| format!("{}:{}", e.name, e.interval)).collect();
    r.line(format!("domains: {}", domains.join(", ")));
    r.value("domains", serde_json::to_value(&a.domains).expect("serialisable"));
    if !a.monotonicity.is_empty() {
        let m: Vec<String> = a
            .monotonicity
            .iter()
            .map(|(v, m)| format!("{v} {}", serde_json::to_value(m).expect("serialisable").as_str().unwrap_or("?")))
            .collect();
        r.line(format!("monotonicity: {}", m.join(", ")));
    }
    r.value(
        "monotonicity",
        Value::Object(
            a.monotonicity
                .iter()
                .map(|(v, m)| (v.clone(), serde_json::to_value(m).expect("serialisable")))
                .collect(),
        ),
    );
    if let Some(part) = &a.partition {
        add_partition(&mut r, part);
    }
    r.line(format!("plan: {}", plan_text(&a.plan)));
    for s in &a.plan.skipped_vars {
        let side = match s.side {
            Side::Upper => "upper",
            Side::Lower => "lower",
        };
        r.line(format!("  refused {side} cut on {}: loop direction does not allow it", s.var));
    }
    r.value("plan", serde_json::to_value(&a.plan).expect("serialisable"));
    r
}

pub fn add_verdict(r: &mut Report, v: &Verdict) {
    r.line(format!("verdict: {}", verdict_word(v.class)));
    r.line(format!(
        "bound reached: {}{}",
        v.k_reached,
        if v.completion { " (state space exhausted)" } else { "" }
    ));
    r.line(format!(
        "states: {}, paths: {}, deepest: {}",
        v.stats.states_visited, v.stats.paths_explored, v.stats.max_depth
    ));
    if let Some(cex) = &v.counterexample {
        let inputs: Vec<String> = cex.inputs.iter().map(|(n, x)| format!("{n}={x}")).collect();
        r.line(format!(
            "counterexample: assertion {} fails after {} iterations with {}",
            cex.failed_assert,
            cex.iterations,
            if inputs.is_empty() { "no inputs".into() } else { inputs.join(", ") }
        ));
    }
    r.value("verdict", serde_json::to_value(v).expect("serialisable"));
}

pub fn add_comparison(r: &mut Report, c: &Comparison) {
    r.line(format!(
        "original: {} ({} states)",
        verdict_word(c.original.class),
        c.original.stats.states_visited
    ));
    r.line(format!(
        "instrumented: {} ({} states)",
        verdict_word(c.instrumented.class),
        c.instrumented.stats.states_visited
    ));
    r.line(format!(
        "status: {}",
        serde_json::to_value(c.status).expect("serialisable").as_str().unwrap_or("?")
    ));
    r.line(format!("state reduction: {:.2}%", c.reduction_percent));
    r.value("comparison", serde_json::to_value(c).expect("serialisable"));
}
