//! Outer and inner forward-backward contractors, their fixpoint and the
//! resulting three-way split of a domain box.

use serde::Serialize;

use crate::boxes::{BoxSet, IntBox};
use crate::expr::{backward_project, complement, forward_eval, ConstraintError, ConstraintExpr};
use crate::interval::Interval;

/// Default convergence threshold on bound movement between sweeps.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Hard cap on fixpoint sweeps.
pub const MAX_SWEEPS: usize = 100;

/// One forward evaluation followed by one backward projection of `c` onto
/// the target interval.
pub fn hc4_revise(b: &IntBox, c: &ConstraintExpr, target: Interval) -> IntBox {
    let (value, tree) = forward_eval(c, b);
    if value.intersect(&target).is_empty() {
        return IntBox::empty_over(&b.var_names());
    }
    backward_project(&tree, target, b)
}

/// Narrows `b` without losing any point that satisfies every constraint.
pub fn outer_contract(b: &IntBox, cs: &[ConstraintExpr]) -> IntBox {
    let mut cur = b.clone();
    for c in cs {
        if cur.is_empty() {
            break;
        }
        cur = hc4_revise(&cur, c, c.relation.interval());
    }
    cur
}

/// Narrows `b` without losing any point that violates some constraint. Every
/// point of `b` outside the result satisfies all constraints.
pub fn inner_contract(b: &IntBox, cs: &[ConstraintExpr]) -> Result<IntBox, ConstraintError> {
    let mut acc = IntBox::empty_over(&b.var_names());
    for c in cs {
        let neg = complement(c)?;
        let part = hc4_revise(b, &neg, neg.relation.interval());
        acc = acc.hull(&part).expect("same variables");
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ContractorKind {
    Outer,
    Inner,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    pub kind: ContractorKind,
    pub input: IntBox,
    pub output: IntBox,
    pub sweeps: usize,
    pub converged: bool,
    pub widths_before: Vec<f64>,
    pub widths_after: Vec<f64>,
}

fn widths(b: &IntBox) -> Vec<f64> {
    b.intervals().map(|iv| iv.width().unwrap_or(0.0)).collect()
}

fn bound_shift(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

/// Largest movement of any bound between two boxes; infinite if emptiness
/// differs.
fn movement(a: &IntBox, b: &IntBox) -> f64 {
    if a.is_empty() != b.is_empty() {
        return f64::INFINITY;
    }
    if a.is_empty() {
        return 0.0;
    }
    a.intervals()
        .zip(b.intervals())
        .map(|(x, y)| bound_shift(x.lo(), y.lo()).max(bound_shift(x.hi(), y.hi())))
        .fold(0.0, f64::max)
}

fn tighten(b: &IntBox, integral: &[bool]) -> IntBox {
    b.map_intervals(|i, iv| {
        if integral.get(i).copied().unwrap_or(false) {
            iv.integral_tighten()
        } else {
            iv
        }
    })
}

/// Repeats the chosen contractor until no bound moves by more than `eps`, the
/// box empties, or [`MAX_SWEEPS`] is reached. Integer dimensions are rounded
/// inward after every sweep.
pub fn fixpoint(
    kind: ContractorKind,
    b: &IntBox,
    cs: &[ConstraintExpr],
    integral: &[bool],
    eps: f64,
) -> Result<(IntBox, ContractionReport), ConstraintError> {
    let mut cur = tighten(b, integral);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let next = match kind {
            ContractorKind::Outer => outer_contract(&cur, cs),
            ContractorKind::Inner => inner_contract(&cur, cs)?,
        };
        let next = tighten(&next, integral);
        let moved = movement(&cur, &next);
        cur = next;
        if cur.is_empty() || moved <= eps {
            converged = true;
            break;
        }
    }
    let report = ContractionReport {
        kind,
        input: b.clone(),
        output: cur.clone(),
        sweeps,
        converged,
        widths_before: widths(b),
        widths_after: widths(&cur),
    };
    Ok((cur, report))
}

/// Split of a domain into a region where some constraint certainly fails,
/// a region where all constraints certainly hold, and an undecided remainder.
#[derive(Debug, Clone, Serialize)]
pub struct RegionPartition {
    pub original: IntBox,
    pub outer: IntBox,
    pub inner: IntBox,
    /// Points violating at least one constraint.
    pub s_out: BoxSet,
    /// Points satisfying every constraint.
    pub s_in: BoxSet,
    pub s_boundary: BoxSet,
    pub whole_domain_violates: bool,
    pub outer_report: ContractionReport,
    pub inner_report: Option<ContractionReport>,
}

impl RegionPartition {
    /// Hull of everything that is not proven to satisfy the constraints.
    pub fn keep_hull(&self) -> Option<IntBox> {
        self.s_out.union(&self.s_boundary).hull()
    }
}

pub fn partition(
    b: &IntBox,
    cs: &[ConstraintExpr],
    integral: &[bool],
    eps: f64,
) -> Result<RegionPartition, ConstraintError> {
    let vars = b.var_names();
    let (outer, outer_report) = fixpoint(ContractorKind::Outer, b, cs, integral, eps)?;
    let s_out = b.difference_with(&outer, integral).expect("same variables");
    if outer.is_empty() {
        return Ok(RegionPartition {
            original: b.clone(),
            inner: IntBox::empty_over(&vars),
            outer,
            s_out,
            s_in: BoxSet::default(),
            s_boundary: BoxSet::default(),
            whole_domain_violates: !b.is_empty(),
            outer_report,
            inner_report: None,
        });
    }
    let (inner, inner_report) = fixpoint(ContractorKind::Inner, &outer, cs, integral, eps)?;
    let s_in = outer.difference_with(&inner, integral).expect("same variables");
    let s_boundary = BoxSet::single(inner.clone());
    Ok(RegionPartition {
        original: b.clone(),
        outer,
        inner,
        s_out,
        s_in,
        s_boundary,
        whole_domain_violates: false,
        outer_report,
        inner_report: Some(inner_report),
    })
}
