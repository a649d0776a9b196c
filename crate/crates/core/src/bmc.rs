//! Explicit-state incremental bounded checking by exhaustive enumeration.
//!
//! Nondet initialisers range over finite integer sets; the loop's nondet
//! continue is a binary exit-or-iterate choice, explored exit first.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::program::{
    prelude_domains, AnalysisError, Assume, BinOp, BodyStmt, CType, Expr, Init, PreludeStmt, ProgramIR, UnOp,
};

pub const DEFAULT_NONDET_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("arithmetic overflow assigning `{var}`{}", line_suffix(*.line))]
    Overflow { var: String, line: Option<usize> },
    #[error("division by zero{}", line_suffix(*.line))]
    DivisionByZero { line: Option<usize> },
    #[error("assume-unsatisfiable program: the assumptions admit no initial state")]
    EmptyDomain,
}

fn line_suffix(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

/// How nondet initialisers are enumerated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondetPolicy {
    /// Maximum number of candidate values per nondet variable.
    pub cap: u64,
    /// Explicit inclusive ranges that replace the analysed domains.
    pub ranges: BTreeMap<String, (i64, i64)>,
}

impl Default for NondetPolicy {
    fn default() -> Self {
        NondetPolicy {
            cap: DEFAULT_NONDET_CAP,
            ranges: BTreeMap::new(),
        }
    }
}

impl NondetPolicy {
    pub fn with_range(mut self, var: &str, lo: i64, hi: i64) -> NondetPolicy {
        self.ranges.insert(var.to_string(), (lo, hi));
        self
    }
}

/// The concrete value range of every nondet variable, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedInputs {
    pub ranges: Vec<(String, i64, i64)>,
}

impl ResolvedInputs {
    pub fn get(&self, var: &str) -> Option<(i64, i64)> {
        self.ranges.iter().find(|(n, ..)| n == var).map(|(_, l, h)| (*l, *h))
    }
}

/// Fixes the enumeration range of each nondet variable: an explicit policy
/// range when given, otherwise the type range narrowed by the prelude
/// assumptions.
pub fn resolve_inputs(p: &ProgramIR, policy: &NondetPolicy) -> Result<ResolvedInputs, HarnessError> {
    let domains = prelude_domains(p).map_err(|e| match e {
        AnalysisError::EmptyDomain => HarnessError::EmptyDomain,
    })?;
    let mut ranges = Vec::new();
    for d in p.decls() {
        if matches!(d.init, Some(Init::Const(_))) {
            continue;
        }
        let (tlo, thi) = (d.ty.min(), d.ty.max());
        let (lo, hi) = match policy.ranges.get(&d.name) {
            Some(&(lo, hi)) => (lo.max(tlo), hi.min(thi)),
            None => {
                let iv = domains.get(&d.name).expect("declared");
                (iv.lo() as i64, iv.hi() as i64)
            }
        };
        let count = if hi < lo { 0 } else { (hi - lo) as u64 + 1 };
        if count > policy.cap {
            return Err(HarnessError::Config(format!(
                "nondet variable `{}` has {count} candidate values, above the cap of {}; give it an explicit range",
                d.name, policy.cap
            )));
        }
        ranges.push((d.name, lo, hi));
    }
    Ok(ResolvedInputs { ranges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictClass {
    Safe,
    Unsafe,
    Unknown,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExplorationStats {
    /// Executed (program point, valuation) pairs, shared prefixes counted
    /// once. Assume statements are not counted.
    pub states_visited: u64,
    /// Paths that ended: by termination, bug, failed assume or bound.
    pub paths_explored: u64,
    /// Largest number of loop iterations on any path.
    pub max_depth: usize,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ExplorationStats {
    fn absorb(&mut self, other: &ExplorationStats) {
        self.states_visited += other.states_visited;
        self.paths_explored += other.paths_explored;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.wall_time += other.wall_time;
    }
}

/// One step of a counterexample trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceState {
    pub pc: String,
    pub line: Option<usize>,
    /// Values of the variables declared so far.
    pub values: Vec<(String, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Chosen value of each nondet variable, in declaration order.
    pub inputs: Vec<(String, i64)>,
    /// Loop iterations before exit.
    pub iterations: usize,
    /// Index of the violated assertion.
    pub failed_assert: usize,
    pub trace: Vec<TraceState>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Bug(Counterexample),
    AllComplete,
    BoundHit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub class: VerdictClass,
    pub counterexample: Option<Counterexample>,
    pub k_reached: usize,
    pub completion: bool,
    /// Totals over every bound tried.
    pub stats: ExplorationStats,
}

/// Program point reported to observers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pc<'a> {
    Decl(&'a str),
    PreludeAssume(&'a Assume),
    LoopHead(usize),
    Update(&'a str),
    BodyAssume(&'a Assume),
    Assert(usize),
    Return,
}

/// Hook into exploration, used for soundness audits.
pub trait Observer {
    /// Called for every visited state, before the statement at `pc` runs.
    fn on_state(&mut self, _pc: Pc<'_>, _names: &[String], _values: &[i64]) {}
    /// Called when an assume cuts the current path.
    fn on_pruned(&mut self, _assume: &Assume, _names: &[String], _values: &[i64]) {}
}

struct NoObserver;
impl Observer for NoObserver {}

// ---------------------------------------------------------------------------
// Compiled program

#[derive(Debug, Clone)]
enum CExpr {
    Int(i64),
    Var(usize),
    Unary(UnOp, Box<CExpr>),
    Cast(CType, Box<CExpr>),
    Binary(BinOp, Box<CExpr>, Box<CExpr>),
}

enum Step<'a> {
    Decl { slot: usize, name: &'a str, init: Option<i64> },
    Assume { conds: Vec<CExpr>, src: &'a Assume },
}

enum BodyStep<'a> {
    Update { slot: usize, name: &'a str, ty: CType, rhs: CExpr, line: Option<usize> },
    Assume { conds: Vec<CExpr>, src: &'a Assume },
}

struct Compiled<'a> {
    names: Vec<String>,
    prelude: Vec<Step<'a>>,
    guard: Vec<CExpr>,
    nondet_continue: bool,
    has_loop: bool,
    body: Vec<BodyStep<'a>>,
    asserts: Vec<(CExpr, Option<usize>)>,
    has_return: bool,
}

fn compile_expr(e: &Expr, slots: &HashMap<String, usize>) -> CExpr {
    match e {
        Expr::Int(v) => CExpr::Int(*v),
        Expr::Var(n) => CExpr::Var(slots[n]),
        Expr::Nondet(_) => unreachable!("parser rejects nondet calls outside initialisers and guards"),
        Expr::Unary(op, e) => CExpr::Unary(*op, Box::new(compile_expr(e, slots))),
        Expr::Cast(t, e) => CExpr::Cast(*t, Box::new(compile_expr(e, slots))),
        Expr::Binary(op, l, r) => CExpr::Binary(*op, Box::new(compile_expr(l, slots)), Box::new(compile_expr(r, slots))),
    }
}

fn compile(p: &ProgramIR) -> Compiled<'_> {
    let decls = p.decls();
    let names: Vec<String> = decls.iter().map(|d| d.name.clone()).collect();
    let slots: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    let types: HashMap<&str, CType> = decls.iter().map(|d| (d.name.as_str(), d.ty)).collect();
    let mut prelude = Vec::new();
    for s in &p.prelude {
        match s {
            PreludeStmt::Decl(g) => {
                for d in &g.declarators {
                    let init = match d.init {
                        Some(Init::Const(v)) => Some(v),
                        _ => None,
                    };
                    prelude.push(Step::Decl {
                        slot: slots[&d.name],
                        name: &d.name,
                        init,
                    });
                }
            }
            PreludeStmt::Assume(a) => prelude.push(Step::Assume {
                conds: a.conds.iter().map(|c| compile_expr(c, &slots)).collect(),
                src: a,
            }),
        }
    }
    let (guard, nondet_continue, body) = match &p.lp {
        Some(lp) => (
            lp.guard.iter().map(|g| compile_expr(g, &slots)).collect(),
            lp.nondet_continue.is_some(),
            lp.body
                .iter()
                .map(|s| match s {
                    BodyStmt::Update(u) => {
                        let cur = Expr::var(&u.target);
                        let rhs = match u.op {
                            crate::program::AssignOp::Set => u.rhs.clone(),
                            crate::program::AssignOp::AddSet => Expr::binary(BinOp::Add, cur, u.rhs.clone()),
                            crate::program::AssignOp::SubSet => Expr::binary(BinOp::Sub, cur, u.rhs.clone()),
                        };
                        BodyStep::Update {
                            slot: slots[&u.target],
                            name: &u.target,
                            ty: types[u.target.as_str()],
                            rhs: compile_expr(&rhs, &slots),
                            line: u.span.line(),
                        }
                    }
                    BodyStmt::Assume(a) => BodyStep::Assume {
                        conds: a.conds.iter().map(|c| compile_expr(c, &slots)).collect(),
                        src: a,
                    },
                })
                .collect(),
        ),
        None => (Vec::new(), false, Vec::new()),
    };
    Compiled {
        names,
        prelude,
        guard,
        nondet_continue,
        has_loop: p.lp.is_some(),
        body,
        asserts: p.asserts.iter().map(|a| (compile_expr(&a.cond, &slots), a.span.line())).collect(),
        has_return: p.ret.is_some(),
    }
}

fn eval(e: &CExpr, vals: &[i64], line: Option<usize>) -> Result<i64, HarnessError> {
    let overflow = || HarnessError::Overflow {
        var: "<expression>".into(),
        line,
    };
    Ok(match e {
        CExpr::Int(v) => *v,
        CExpr::Var(s) => vals[*s],
        CExpr::Unary(UnOp::Neg, e) => eval(e, vals, line)?.checked_neg().ok_or_else(overflow)?,
        CExpr::Unary(UnOp::Not, e) => (eval(e, vals, line)? == 0) as i64,
        CExpr::Cast(CType::Int, e) => eval(e, vals, line)? as i32 as i64,
        CExpr::Cast(CType::UInt, e) => eval(e, vals, line)? as u32 as i64,
        CExpr::Binary(BinOp::And, l, r) => (eval(l, vals, line)? != 0 && eval(r, vals, line)? != 0) as i64,
        CExpr::Binary(BinOp::Or, l, r) => (eval(l, vals, line)? != 0 || eval(r, vals, line)? != 0) as i64,
        CExpr::Binary(op, l, r) => {
            let (a, b) = (eval(l, vals, line)?, eval(r, vals, line)?);
            match op {
                BinOp::Add => a.checked_add(b).ok_or_else(overflow)?,
                BinOp::Sub => a.checked_sub(b).ok_or_else(overflow)?,
                BinOp::Mul => a.checked_mul(b).ok_or_else(overflow)?,
                BinOp::Div | BinOp::Rem if b == 0 => return Err(HarnessError::DivisionByZero { line }),
                BinOp::Div => a.checked_div(b).ok_or_else(overflow)?,
                BinOp::Rem => a.checked_rem(b).ok_or_else(overflow)?,
                BinOp::Lt => (a < b) as i64,
                BinOp::Le => (a <= b) as i64,
                BinOp::Gt => (a > b) as i64,
                BinOp::Ge => (a >= b) as i64,
                BinOp::Eq => (a == b) as i64,
                BinOp::Ne => (a != b) as i64,
                BinOp::And | BinOp::Or => unreachable!(),
            }
        }
    })
}

fn all_true(conds: &[CExpr], vals: &[i64], line: Option<usize>) -> Result<bool, HarnessError> {
    for c in conds {
        if eval(c, vals, line)? == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Exploration

struct Bug {
    inputs: Vec<i64>,
    iterations: usize,
    failed_assert: usize,
}

struct Explorer<'a, 'o, O: Observer> {
    c: &'a Compiled<'a>,
    k: usize,
    ranges: Vec<(i64, i64)>,
    stats: ExplorationStats,
    bound_hit: bool,
    bug: Option<Bug>,
    chosen: Vec<i64>,
    obs: &'o mut O,
}

impl<O: Observer> Explorer<'_, '_, O> {
    fn state(&mut self, pc: Pc<'_>, vals: &[i64]) {
        self.stats.states_visited += 1;
        self.obs.on_state(pc, &self.c.names, vals);
    }

    fn prelude(&mut self, i: usize, nondet_idx: usize, vals: &mut Vec<i64>) -> Result<(), HarnessError> {
        let c = self.c;
        let Some(step) = c.prelude.get(i) else {
            return self.run_loop(vals.clone());
        };
        match step {
            Step::Decl { slot, name, init: Some(v) } => {
                self.state(Pc::Decl(name), vals);
                vals[*slot] = *v;
                self.prelude(i + 1, nondet_idx, vals)
            }
            Step::Decl { slot, name, init: None } => {
                let (lo, hi) = self.ranges[nondet_idx];
                for v in lo..=hi {
                    self.state(Pc::Decl(name), vals);
                    vals[*slot] = v;
                    self.chosen.push(v);
                    let r = self.prelude(i + 1, nondet_idx + 1, vals);
                    self.chosen.pop();
                    r?;
                }
                Ok(())
            }
            Step::Assume { conds, src } => {
                if all_true(conds, vals, src.span.line())? {
                    self.prelude(i + 1, nondet_idx, vals)
                } else {
                    self.obs.on_pruned(src, &c.names, vals);
                    self.stats.paths_explored += 1;
                    Ok(())
                }
            }
        }
    }

    fn run_loop(&mut self, mut vals: Vec<i64>) -> Result<(), HarnessError> {
        let c = self.c;
        if !c.has_loop {
            return self.tail(&vals, 0);
        }
        let mut iter = 0;
        loop {
            self.state(Pc::LoopHead(iter), &vals);
            if !all_true(&c.guard, &vals, None)? {
                return self.tail(&vals, iter);
            }
            if c.nondet_continue {
                self.tail(&vals, iter)?;
            }
            if iter == self.k {
                self.bound_hit = true;
                self.stats.paths_explored += 1;
                return Ok(());
            }
            for s in &c.body {
                match s {
                    BodyStep::Update { slot, name, ty, rhs, line } => {
                        self.state(Pc::Update(name), &vals);
                        let v = eval(rhs, &vals, *line).map_err(|e| match e {
                            HarnessError::Overflow { line, .. } => HarnessError::Overflow {
                                var: name.to_string(),
                                line,
                            },
                            e => e,
                        })?;
                        if v < ty.min() || v > ty.max() {
                            return Err(HarnessError::Overflow {
                                var: name.to_string(),
                                line: *line,
                            });
                        }
                        vals[*slot] = v;
                    }
                    BodyStep::Assume { conds, src } => {
                        if !all_true(conds, &vals, src.span.line())? {
                            self.obs.on_pruned(src, &c.names, &vals);
                            self.stats.paths_explored += 1;
                            self.stats.max_depth = self.stats.max_depth.max(iter + 1);
                            return Ok(());
                        }
                    }
                }
            }
            iter += 1;
            self.stats.max_depth = self.stats.max_depth.max(iter);
        }
    }

    fn tail(&mut self, vals: &[i64], iterations: usize) -> Result<(), HarnessError> {
        let c = self.c;
        self.stats.paths_explored += 1;
        for (idx, (cond, line)) in c.asserts.iter().enumerate() {
            self.state(Pc::Assert(idx), vals);
            if eval(cond, vals, *line)? == 0 {
                if self.bug.as_ref().is_none_or(|b| iterations < b.iterations) {
                    self.bug = Some(Bug {
                        inputs: self.chosen.clone(),
                        iterations,
                        failed_assert: idx,
                    });
                }
                return Ok(());
            }
        }
        if c.has_return {
            self.state(Pc::Return, vals);
        }
        Ok(())
    }
}

fn explore_compiled<O: Observer>(
    p: &ProgramIR,
    c: &Compiled<'_>,
    k: usize,
    inputs: &ResolvedInputs,
    obs: &mut O,
) -> Result<(Outcome, ExplorationStats), HarnessError> {
    let start = Instant::now();
    let ranges = c
        .prelude
        .iter()
        .filter_map(|s| match s {
            Step::Decl { name, init: None, .. } => Some(
                inputs
                    .get(name)
                    .ok_or_else(|| HarnessError::Config(format!("no input range for nondet variable `{name}`"))),
            ),
            _ => None,
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut ex = Explorer {
        c,
        k,
        ranges,
        stats: ExplorationStats::default(),
        bound_hit: false,
        bug: None,
        chosen: Vec::new(),
        obs,
    };
    let mut vals = vec![0; c.names.len()];
    ex.prelude(0, 0, &mut vals)?;
    let mut stats = ex.stats;
    stats.wall_time = start.elapsed();
    let outcome = match ex.bug {
        Some(b) => {
            let names: Vec<String> = inputs.ranges.iter().map(|(n, ..)| n.clone()).collect();
            let cex = Counterexample {
                inputs: names.into_iter().zip(b.inputs).collect(),
                iterations: b.iterations,
                failed_assert: b.failed_assert,
                trace: Vec::new(),
            };
            let trace = replay(p, &cex)?.trace;
            Outcome::Bug(Counterexample { trace, ..cex })
        }
        None if ex.bound_hit => Outcome::BoundHit,
        None => Outcome::AllComplete,
    };
    Ok((outcome, stats))
}

/// Enumerates every execution with at most `k` loop iterations. A bug with
/// the fewest iterations is reported when several exist.
pub fn explore(p: &ProgramIR, k: usize, policy: &NondetPolicy) -> Result<(Outcome, ExplorationStats), HarnessError> {
    let inputs = resolve_inputs(p, policy)?;
    explore_with(p, k, &inputs, &mut NoObserver)
}

/// [`explore`] with fixed input ranges and an observer.
pub fn explore_with<O: Observer>(
    p: &ProgramIR,
    k: usize,
    inputs: &ResolvedInputs,
    obs: &mut O,
) -> Result<(Outcome, ExplorationStats), HarnessError> {
    let c = compile(p);
    explore_compiled(p, &c, k, inputs, obs)
}

pub fn verify_incremental(p: &ProgramIR, k_max: usize, policy: &NondetPolicy) -> Result<Verdict, HarnessError> {
    let inputs = resolve_inputs(p, policy)?;
    verify_with(p, k_max, &inputs)
}

/// Raises the bound from 0 until a bug, completion, or `k_max`.
pub fn verify_with(p: &ProgramIR, k_max: usize, inputs: &ResolvedInputs) -> Result<Verdict, HarnessError> {
    let c = compile(p);
    let mut total = ExplorationStats::default();
    for k in 0..=k_max {
        let (outcome, stats) = explore_compiled(p, &c, k, inputs, &mut NoObserver)?;
        total.absorb(&stats);
        match outcome {
            Outcome::Bug(cex) => {
                return Ok(Verdict {
                    class: VerdictClass::Unsafe,
                    counterexample: Some(cex),
                    k_reached: k,
                    completion: false,
                    stats: total,
                })
            }
            Outcome::AllComplete => {
                return Ok(Verdict {
                    class: VerdictClass::Safe,
                    counterexample: None,
                    k_reached: k,
                    completion: true,
                    stats: total,
                })
            }
            Outcome::BoundHit => {}
        }
    }
    Ok(Verdict {
        class: VerdictClass::Unknown,
        counterexample: None,
        k_reached: k_max,
        completion: false,
        stats: total,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replay {
    /// Whether the targeted assertion failed at the end of the trace.
    pub violated: bool,
    pub trace: Vec<TraceState>,
}

/// Re-executes a counterexample concretely and records every state.
pub fn replay(p: &ProgramIR, cex: &Counterexample) -> Result<Replay, HarnessError> {
    let c = compile(p);
    let mut vals = vec![0i64; c.names.len()];
    let mut declared = 0usize;
    let mut trace = Vec::new();
    let snapshot = |vals: &[i64], declared: usize, pc: String, line: Option<usize>, trace: &mut Vec<TraceState>| {
        trace.push(TraceState {
            pc,
            line,
            values: c.names[..declared].iter().cloned().zip(vals[..declared].iter().copied()).collect(),
        });
    };
    let mut inputs = cex.inputs.iter();
    let not_feasible = |why: &str| Replay {
        violated: false,
        trace: vec![TraceState {
            pc: format!("infeasible: {why}"),
            line: None,
            values: Vec::new(),
        }],
    };
    for s in &c.prelude {
        match s {
            Step::Decl { slot, name, init } => {
                vals[*slot] = match init {
                    Some(v) => *v,
                    None => match inputs.next() {
                        Some((n, v)) if n == name => *v,
                        _ => return Ok(not_feasible("inputs do not match declarations")),
                    },
                };
                declared = declared.max(slot + 1);
                snapshot(&vals, declared, format!("decl {name}"), None, &mut trace);
            }
            Step::Assume { conds, src } => {
                if !all_true(conds, &vals, src.span.line())? {
                    return Ok(not_feasible("assumption fails"));
                }
            }
        }
    }
    if c.has_loop {
        for iter in 0..=cex.iterations {
            snapshot(&vals, declared, format!("loop head, iteration {iter}"), None, &mut trace);
            let guard = all_true(&c.guard, &vals, None)?;
            if iter == cex.iterations {
                if guard && !c.nondet_continue {
                    return Ok(not_feasible("loop cannot exit here"));
                }
                break;
            }
            if !guard {
                return Ok(not_feasible("loop exits early"));
            }
            for s in &c.body {
                match s {
                    BodyStep::Update { slot, name, rhs, line, .. } => {
                        vals[*slot] = eval(rhs, &vals, *line)?;
                        snapshot(&vals, declared, format!("update {name}"), *line, &mut trace);
                    }
                    BodyStep::Assume { conds, src } => {
                        if !all_true(conds, &vals, src.span.line())? {
                            return Ok(not_feasible("assumption fails in loop"));
                        }
                    }
                }
            }
        }
    }
    for (idx, (cond, line)) in c.asserts.iter().enumerate() {
        let ok = eval(cond, &vals, *line)? != 0;
        snapshot(&vals, declared, format!("assert #{idx}"), *line, &mut trace);
        if !ok {
            return Ok(Replay {
                violated: idx == cex.failed_assert,
                trace,
            });
        }
    }
    Ok(Replay { violated: false, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComparisonStatus {
    Agree,
    VerdictDivergence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub status: ComparisonStatus,
    pub original: Verdict,
    pub instrumented: Verdict,
    pub states_ratio: f64,
    pub paths_ratio: f64,
    /// `100 * (1 - states_ratio)`.
    pub reduction_percent: f64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

/// Verifies both programs with the input ranges of the original and compares
/// verdict classes and effort.
pub fn compare_runs(
    original: &ProgramIR,
    instrumented: &ProgramIR,
    k_max: usize,
    policy: &NondetPolicy,
) -> Result<Comparison, HarnessError> {
    if original.decls() != instrumented.decls() {
        return Err(HarnessError::Config("programs do not share declarations".into()));
    }
    let inputs = resolve_inputs(original, policy)?;
    let a = verify_with(original, k_max, &inputs)?;
    let b = verify_with(instrumented, k_max, &inputs)?;
    let status = if a.class == b.class {
        ComparisonStatus::Agree
    } else {
        ComparisonStatus::VerdictDivergence
    };
    let states_ratio = ratio(b.stats.states_visited, a.stats.states_visited);
    Ok(Comparison {
        status,
        states_ratio,
        paths_ratio: ratio(b.stats.paths_explored, a.stats.paths_explored),
        reduction_percent: 100.0 * (1.0 - states_ratio),
        original: a,
        instrumented: b,
    })
}
