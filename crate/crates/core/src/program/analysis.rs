//! Property and interval analysis over the program IR.

use serde::Serialize;
use thiserror::Error;

use super::ast::*;
use crate::boxes::IntBox;
use crate::contractor::{fixpoint, ContractorKind, DEFAULT_EPS};
use crate::expr::{parse_constraint, ConstraintExpr, SymbolTable};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("assume-unsatisfiable program: the assumptions admit no initial state")]
    EmptyDomain,
}

/// An assertion that could not be turned into a constraint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedAssert {
    pub index: usize,
    pub text: String,
    pub reason: String,
    /// The operator that made the assertion unsupported, if any.
    pub operator: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Properties {
    /// Variables mentioned by assertions, in declaration order.
    pub vars: Vec<String>,
    pub constraints: Vec<ConstraintExpr>,
    pub skipped: Vec<SkippedAssert>,
}

impl Properties {
    pub fn symbols(&self) -> SymbolTable {
        SymbolTable::new(self.vars.iter().cloned())
    }

    /// Human-readable rendering of each constraint.
    pub fn constraint_texts(&self) -> Vec<String> {
        self.constraints.iter().map(|c| c.display(&self.vars).to_string()).collect()
    }
}

fn has_division(e: &Expr) -> bool {
    match e {
        Expr::Binary(BinOp::Div, ..) => true,
        Expr::Binary(_, l, r) => has_division(l) || has_division(r),
        Expr::Unary(_, e) | Expr::Cast(_, e) => has_division(e),
        _ => false,
    }
}

/// Converts every assertion into a normalised constraint over the variables
/// the assertions mention. Unsupported assertions are reported, not fatal.
pub fn analyze_properties(p: &ProgramIR) -> Properties {
    let mut mentioned = Vec::new();
    for a in &p.asserts {
        a.cond.collect_vars(&mut mentioned);
    }
    let vars: Vec<String> = p
        .decls()
        .into_iter()
        .map(|d| d.name)
        .filter(|n| mentioned.contains(&n.as_str()))
        .collect();
    let symbols = SymbolTable::new(vars.iter().cloned());
    let mut constraints = Vec::new();
    let mut skipped = Vec::new();
    for (index, a) in p.asserts.iter().enumerate() {
        let text = a.cond.to_string();
        if has_division(&a.cond) {
            skipped.push(SkippedAssert {
                index,
                text,
                reason: "integer division has no real-interval counterpart".into(),
                operator: Some("/".into()),
            });
            continue;
        }
        match parse_constraint(&text, &symbols) {
            Ok(c) => constraints.push(c),
            Err(e) => skipped.push(SkippedAssert {
                index,
                operator: e.unsupported_operator().map(str::to_string),
                reason: e.to_string(),
                text,
            }),
        }
    }
    Properties {
        vars,
        constraints,
        skipped,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainEntry {
    pub name: String,
    pub ty: CType,
    pub interval: Interval,
    pub integral: bool,
}

/// Per-variable intervals in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DomainMap {
    entries: Vec<DomainEntry>,
}

impl DomainMap {
    pub fn get(&self, name: &str) -> Option<Interval> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.interval)
    }

    pub fn entry(&self, name: &str) -> Option<&DomainEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[DomainEntry] {
        &self.entries
    }

    fn set(&mut self, name: &str, iv: Interval) {
        if let Some(e) = self.entries.iter_mut().find(|e| e.name == name) {
            e.interval = iv;
        }
    }

    /// The box over `vars`, in the given order.
    pub fn box_for(&self, vars: &[String]) -> IntBox {
        IntBox::new(vars.iter().map(|v| (v.clone(), self.get(v).unwrap_or(Interval::ENTIRE))))
    }

    pub fn integral_mask(&self, vars: &[String]) -> Vec<bool> {
        vars.iter()
            .map(|v| self.entry(v).is_some_and(|e| e.integral))
            .collect()
    }
}

/// Interval of a mini-C expression over a domain map, where that is
/// meaningful. Comparisons, division and casts yield `None`.
pub fn eval_interval(e: &Expr, d: &DomainMap) -> Option<Interval> {
    Some(match e {
        Expr::Int(v) => Interval::point(*v as f64),
        Expr::Var(v) => d.get(v)?,
        Expr::Unary(UnOp::Neg, e) => -eval_interval(e, d)?,
        Expr::Binary(BinOp::Add, l, r) => eval_interval(l, d)? + eval_interval(r, d)?,
        Expr::Binary(BinOp::Sub, l, r) => eval_interval(l, d)? - eval_interval(r, d)?,
        Expr::Binary(BinOp::Mul, l, r) => eval_interval(l, d)? * eval_interval(r, d)?,
        _ => return None,
    })
}

/// Domains at loop entry: declared type ranges, constant initialisers, and
/// the prelude assumptions.
pub fn prelude_domains(p: &ProgramIR) -> Result<DomainMap, AnalysisError> {
    let decls = p.decls();
    let entries: Vec<DomainEntry> = decls
        .iter()
        .map(|d| DomainEntry {
            name: d.name.clone(),
            ty: d.ty,
            interval: match d.init {
                Some(Init::Const(v)) => Interval::point(v as f64),
                _ => d.ty.range(),
            },
            integral: true,
        })
        .collect();
    let mut map = DomainMap { entries };
    let names: Vec<String> = decls.iter().map(|d| d.name.clone()).collect();
    let symbols = SymbolTable::new(names.iter().cloned());
    let cs: Vec<ConstraintExpr> = p
        .prelude_assumes()
        .flat_map(|a| a.conds.iter())
        .filter(|c| !has_division(c))
        .filter_map(|c| parse_constraint(&c.to_string(), &symbols).ok())
        .collect();
    if cs.is_empty() || names.is_empty() {
        return Ok(map);
    }
    let b = map.box_for(&names);
    let (out, _) = fixpoint(ContractorKind::Outer, &b, &cs, &vec![true; names.len()], DEFAULT_EPS)
        .expect("outer contraction never complements");
    if out.is_empty() {
        return Err(AnalysisError::EmptyDomain);
    }
    for (name, iv) in out.iter() {
        map.set(name, iv);
    }
    Ok(map)
}

/// Bound on `var` implied by one guard operand while the loop keeps running.
/// Returns `(upper, lower)` candidates.
fn guard_bounds(var: &str, cond: &Expr, d: &DomainMap) -> (Option<f64>, Option<f64>) {
    let Expr::Binary(op, l, r) = cond else { return (None, None) };
    let is_v = |e: &Expr| matches!(e, Expr::Var(n) if n == var);
    // normalise to `var op other`
    let (op, other) = if is_v(l) && !r.mentions(var) {
        (*op, r)
    } else if is_v(r) && !l.mentions(var) {
        let flipped = match op {
            BinOp::Lt => BinOp::Gt,
            BinOp::Le => BinOp::Ge,
            BinOp::Gt => BinOp::Lt,
            BinOp::Ge => BinOp::Le,
            o => *o,
        };
        (flipped, l)
    } else {
        return (None, None);
    };
    let Some(iv) = eval_interval(other, d).filter(|iv| !iv.is_empty()) else {
        return (None, None);
    };
    match op {
        BinOp::Lt => (Some(iv.hi() - 1.0), None),
        BinOp::Le => (Some(iv.hi()), None),
        BinOp::Gt => (None, Some(iv.lo() + 1.0)),
        BinOp::Ge => (None, Some(iv.lo())),
        _ => (None, None),
    }
}

/// Interval added to `var` per iteration, if its only update is linear.
pub fn step_interval(lp: &Loop, var: &str, d: &DomainMap) -> Option<Interval> {
    let mut updates = lp.updates_of(var);
    let u = updates.next()?;
    if updates.next().is_some() {
        return None;
    }
    match &u.kind {
        UpdateKind::Linear { delta } => eval_interval(delta, d),
        UpdateKind::Opaque => None,
    }
}

const WIDENING_ROUNDS: usize = 16;

/// Variable domains at the assertions. Loop-updated variables are widened
/// along their update direction up to the bound the guard implies, or to the
/// type bound when the guard says nothing about them.
pub fn analyze_intervals(p: &ProgramIR) -> Result<DomainMap, AnalysisError> {
    let init = prelude_domains(p)?;
    let Some(lp) = &p.lp else { return Ok(init) };
    let mut targets: Vec<String> = Vec::new();
    for u in lp.updates() {
        if !targets.contains(&u.target) {
            targets.push(u.target.clone());
        }
    }
    let widen = |cur: &DomainMap| -> DomainMap {
        let mut next = init.clone();
        for v in &targets {
            let e = init.entry(v).expect("declared");
            let d0 = e.interval;
            let ty = e.ty.range();
            let iv = match step_interval(lp, v, cur) {
                Some(s) if s.is_degenerate() && s.lo() == 0.0 => d0,
                Some(s) if !s.is_empty() && s.lo() >= 0.0 => {
                    let bound = lp.guard.iter().filter_map(|g| guard_bounds(v, g, cur).0).reduce(f64::min);
                    let hi = match bound {
                        Some(b) => d0.hi().max(b + s.hi()).min(ty.hi()),
                        None => ty.hi(),
                    };
                    Interval::new(d0.lo(), hi)
                }
                Some(s) if !s.is_empty() && s.hi() <= 0.0 => {
                    let bound = lp.guard.iter().filter_map(|g| guard_bounds(v, g, cur).1).reduce(f64::max);
                    let lo = match bound {
                        Some(b) => d0.lo().min(b + s.lo()).max(ty.lo()),
                        None => ty.lo(),
                    };
                    Interval::new(lo, d0.hi())
                }
                _ => ty,
            };
            next.set(v, iv);
        }
        next
    };
    let mut cur = init.clone();
    for _ in 0..WIDENING_ROUNDS {
        let next = widen(&cur);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    for v in &targets {
        let ty = cur.entry(v).expect("declared").ty.range();
        cur.set(v, ty);
    }
    Ok(cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Monotonicity {
    MonotoneIncreasing,
    MonotoneDecreasing,
    Constant,
    Unknown,
}

/// Syntactic direction of change of `var` across loop iterations.
pub fn monotonicity_check(p: &ProgramIR, var: &str, d: &DomainMap) -> Monotonicity {
    let Some(lp) = &p.lp else { return Monotonicity::Constant };
    if lp.updates_of(var).next().is_none() {
        return Monotonicity::Constant;
    }
    match step_interval(lp, var, d) {
        Some(s) if s.is_empty() => Monotonicity::Unknown,
        Some(s) if s.lo() == 0.0 && s.hi() == 0.0 => Monotonicity::Constant,
        Some(s) if s.lo() >= 0.0 => Monotonicity::MonotoneIncreasing,
        Some(s) if s.hi() <= 0.0 => Monotonicity::MonotoneDecreasing,
        _ => Monotonicity::Unknown,
    }
}

/// Whether any loop update falls outside the linear forms the analysis
/// understands.
pub fn has_opaque_update(p: &ProgramIR) -> bool {
    p.lp.as_ref().is_some_and(|lp| {
        lp.updates().any(|u| u.kind == UpdateKind::Opaque)
            || lp.updates().enumerate().any(|(i, u)| lp.updates().skip(i + 1).any(|w| w.target == u.target))
    })
}
