//! End-to-end driver: properties, intervals, contraction and the
//! instrumentation plan for one program.

use serde::Serialize;

use crate::bmc::{explore_with, HarnessError, Observer, ResolvedInputs};
use crate::contractor::{partition, RegionPartition};
use crate::expr::{Csp, CspVar};
use crate::instrument::{instrument, plan_instrumentation, InstrumentationPlan, SkipReason};
use crate::program::analysis::has_opaque_update;
use crate::program::{
    analyze_intervals, analyze_properties, monotonicity_check, AnalysisError, Assume, DomainMap, Monotonicity,
    ProgramIR, Properties,
};

#[derive(Debug, Clone)]
pub struct Analysis {
    pub properties: Properties,
    pub domains: DomainMap,
    pub csp: Option<Csp>,
    pub partition: Option<RegionPartition>,
    pub monotonicity: Vec<(String, Monotonicity)>,
    pub plan: InstrumentationPlan,
}

/// Runs property analysis, interval analysis, contraction and planning.
pub fn analyze(p: &ProgramIR, eps: f64) -> Result<Analysis, AnalysisError> {
    let properties = analyze_properties(p);
    let domains = analyze_intervals(p)?;
    let monotonicity: Vec<(String, Monotonicity)> = properties
        .vars
        .iter()
        .map(|v| (v.clone(), monotonicity_check(p, v, &domains)))
        .collect();
    let mut out = Analysis {
        csp: None,
        partition: None,
        plan: InstrumentationPlan::not_applied(SkipReason::NoConstraints),
        properties,
        domains,
        monotonicity,
    };
    if !out.properties.skipped.is_empty() {
        out.plan = InstrumentationPlan::not_applied(SkipReason::UnsupportedOperator);
        return Ok(out);
    }
    if out.properties.constraints.is_empty() || out.properties.vars.is_empty() {
        return Ok(out);
    }
    let vars = &out.properties.vars;
    let integral = out.domains.integral_mask(vars);
    let csp = Csp::new(
        vars.iter()
            .zip(&integral)
            .map(|(name, &integral)| CspVar {
                name: name.clone(),
                integral,
            })
            .collect(),
        out.domains.box_for(vars),
        out.properties.constraints.clone(),
    )
    .expect("constraints are built over the assertion variables");
    let part = partition(csp.domain(), csp.constraints(), &integral, eps);
    out.csp = Some(csp);
    let part = match part {
        Ok(part) => part,
        Err(_) => {
            out.plan = InstrumentationPlan::not_applied(SkipReason::UnsupportedOperator);
            return Ok(out);
        }
    };
    out.plan = if has_opaque_update(p) {
        InstrumentationPlan::not_applied(SkipReason::OpaqueUpdate)
    } else {
        plan_instrumentation(p, &part, &out.monotonicity)
    };
    out.partition = Some(part);
    Ok(out)
}

/// Analyses and instruments a program in one step.
pub fn instrument_program(p: &ProgramIR, eps: f64) -> Result<(ProgramIR, Analysis), AnalysisError> {
    let a = analyze(p, eps)?;
    Ok((instrument(p, &a.plan), a))
}

/// Outcome of checking which states the inserted assumptions cut.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PruningAudit {
    /// States cut by inserted assumptions.
    pub pruned: u64,
    /// Cut states that lie in the region still to be searched.
    pub unsound: u64,
    pub first_unsound: Option<Vec<(String, i64)>>,
}

struct AuditObserver<'a> {
    part: &'a RegionPartition,
    vars: Vec<String>,
    audit: PruningAudit,
}

impl Observer for AuditObserver<'_> {
    fn on_pruned(&mut self, assume: &Assume, names: &[String], values: &[i64]) {
        if !assume.is_synthetic() {
            return;
        }
        self.audit.pruned += 1;
        let point: Vec<f64> = self
            .vars
            .iter()
            .map(|v| values[names.iter().position(|n| n == v).expect("declared")] as f64)
            .collect();
        if self.part.s_out.contains_point(&point) || self.part.s_boundary.contains_point(&point) {
            self.audit.unsound += 1;
            if self.audit.first_unsound.is_none() {
                self.audit.first_unsound = Some(self.vars.iter().cloned().zip(point.iter().map(|&v| v as i64)).collect());
            }
        }
    }
}

/// Explores `instrumented` to bound `k` and counts inserted-assumption cuts
/// that fall outside the proven-safe region of `part`.
pub fn audit_pruning(
    instrumented: &ProgramIR,
    part: &RegionPartition,
    k: usize,
    inputs: &ResolvedInputs,
) -> Result<PruningAudit, HarnessError> {
    let mut obs = AuditObserver {
        part,
        vars: part.original.var_names(),
        audit: PruningAudit::default(),
    };
    explore_with(instrumented, k, inputs, &mut obs)?;
    Ok(obs.audit)
}
