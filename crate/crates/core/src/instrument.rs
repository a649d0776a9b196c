//! Turns a region partition into `assume` directives and splices them into
//! the program.

use serde::Serialize;

use crate::contractor::RegionPartition;
use crate::program::{Assume, BinOp, BodyStmt, Expr, Init, Monotonicity, PreludeStmt, ProgramIR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SkipReason {
    /// A loop update is not of the form `v = v + e`.
    OpaqueUpdate,
    /// The outer contractor emptied the domain; every state violates.
    WholeDomainViolates,
    /// Nothing was proven safe, or nothing provable could be cut.
    NoPruning,
    NoConstraints,
    UnsupportedOperator,
    /// Every cut would land on the side the loop still has to pass through.
    UnsafePlacement,
}

impl SkipReason {
    pub fn code(self) -> &'static str {
        match self {
            SkipReason::OpaqueUpdate => "OPAQUE_UPDATE",
            SkipReason::WholeDomainViolates => "WHOLE_DOMAIN_VIOLATES",
            SkipReason::NoPruning => "NO_PRUNING",
            SkipReason::NoConstraints => "NO_CONSTRAINTS",
            SkipReason::UnsupportedOperator => "UNSUPPORTED_OPERATOR",
            SkipReason::UnsafePlacement => "UNSAFE_PLACEMENT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    LoopBodyEnd,
    BeforeAsserts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Insertion {
    pub var: String,
    pub side: Side,
    pub bound: i64,
    /// The comparison as it appears in the program.
    pub text: String,
}

impl Insertion {
    fn new(var: &str, side: Side, bound: i64) -> Insertion {
        let op = match side {
            Side::Upper => BinOp::Le,
            Side::Lower => BinOp::Ge,
        };
        let text = Expr::binary(op, Expr::var(var), Expr::Int(bound)).to_string();
        Insertion {
            var: var.to_string(),
            side,
            bound,
            text,
        }
    }

    pub fn expr(&self) -> Expr {
        let op = match self.side {
            Side::Upper => BinOp::Le,
            Side::Lower => BinOp::Ge,
        };
        Expr::binary(op, Expr::var(&self.var), Expr::Int(self.bound))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedVar {
    pub var: String,
    pub side: Side,
    pub monotonicity: Monotonicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstrumentationPlan {
    pub applied: bool,
    pub reason: Option<SkipReason>,
    pub placement: Option<Placement>,
    pub insertions: Vec<Insertion>,
    /// Cuts that were found but refused because of loop direction.
    pub skipped_vars: Vec<SkippedVar>,
}

impl InstrumentationPlan {
    pub fn not_applied(reason: SkipReason) -> InstrumentationPlan {
        InstrumentationPlan {
            applied: false,
            reason: Some(reason),
            placement: None,
            insertions: Vec::new(),
            skipped_vars: Vec::new(),
        }
    }
}

fn finite_int(v: f64) -> Option<i64> {
    (v.is_finite() && v.fract() == 0.0).then_some(v as i64)
}

/// Chooses the `assume` comparisons that remove only states proven to satisfy
/// every assertion. `mono` lists the direction of each partition variable.
pub fn plan_instrumentation(
    p: &ProgramIR,
    part: &RegionPartition,
    mono: &[(String, Monotonicity)],
) -> InstrumentationPlan {
    if part.whole_domain_violates {
        return InstrumentationPlan::not_applied(SkipReason::WholeDomainViolates);
    }
    if part.s_in.is_empty() {
        return InstrumentationPlan::not_applied(SkipReason::NoPruning);
    }
    let Some(keep) = part.keep_hull() else {
        return InstrumentationPlan::not_applied(SkipReason::NoPruning);
    };
    let mut insertions = Vec::new();
    let mut skipped_vars = Vec::new();
    let in_loop = p.lp.is_some();
    for (idx, (var, dom)) in part.original.iter().enumerate() {
        let k = keep.at(idx);
        let mut cuts = Vec::new();
        if let Some(b) = finite_int(k.hi()).filter(|_| k.hi() < dom.hi()) {
            cuts.push((Side::Upper, b));
        }
        if let Some(b) = finite_int(k.lo()).filter(|_| k.lo() > dom.lo()) {
            cuts.push((Side::Lower, b));
        }
        if cuts.is_empty() {
            continue;
        }
        if in_loop {
            let m = mono
                .iter()
                .find(|(n, _)| n == var)
                .map(|(_, m)| *m)
                .unwrap_or(Monotonicity::Unknown);
            for (side, bound) in cuts {
                let safe = matches!(
                    (m, side),
                    (Monotonicity::Constant, _)
                        | (Monotonicity::MonotoneIncreasing, Side::Upper)
                        | (Monotonicity::MonotoneDecreasing, Side::Lower)
                );
                if safe {
                    insertions.push(Insertion::new(var, side, bound));
                } else {
                    skipped_vars.push(SkippedVar {
                        var: var.to_string(),
                        side,
                        monotonicity: m,
                    });
                }
            }
        } else {
            let nondet = p.decl(var).is_some_and(|d| !matches!(d.init, Some(Init::Const(_))));
            if nondet {
                insertions.extend(cuts.into_iter().map(|(side, bound)| Insertion::new(var, side, bound)));
            }
        }
    }
    if insertions.is_empty() {
        let reason = if skipped_vars.is_empty() {
            SkipReason::NoPruning
        } else {
            SkipReason::UnsafePlacement
        };
        let mut plan = InstrumentationPlan::not_applied(reason);
        plan.skipped_vars = skipped_vars;
        return plan;
    }
    InstrumentationPlan {
        applied: true,
        reason: None,
        placement: Some(if in_loop {
            Placement::LoopBodyEnd
        } else {
            Placement::BeforeAsserts
        }),
        insertions,
        skipped_vars,
    }
}

/// Applies a plan. A plan that is not applied returns the program unchanged.
pub fn instrument(p: &ProgramIR, plan: &InstrumentationPlan) -> ProgramIR {
    let mut out = p.clone();
    if !plan.applied {
        return out;
    }
    let assumes = plan.insertions.iter().map(|i| Assume::synthetic(i.expr()));
    match (plan.placement, &mut out.lp) {
        (Some(Placement::LoopBodyEnd), Some(lp)) => lp.body.extend(assumes.map(BodyStmt::Assume)),
        _ => out.prelude.extend(assumes.map(PreludeStmt::Assume)),
    }
    out
}
