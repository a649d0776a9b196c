use std::fmt;

use serde::Serialize;

use crate::interval::{Interval, MAX_INT, MAX_UINT, MIN_INT};

/// Where an IR element came from. Inserted statements carry `Synthetic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Span {
    Source { line: usize, col: usize },
    Synthetic,
}

impl Span {
    pub fn line(&self) -> Option<usize> {
        match self {
            Span::Source { line, .. } => Some(*line),
            Span::Synthetic => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CType {
    Int,
    UInt,
}

impl CType {
    pub fn range(self) -> Interval {
        match self {
            CType::Int => Interval::new(MIN_INT, MAX_INT),
            CType::UInt => Interval::new(0.0, MAX_UINT),
        }
    }

    pub fn min(self) -> i64 {
        self.range().lo() as i64
    }

    pub fn max(self) -> i64 {
        self.range().hi() as i64
    }

    pub fn keyword(self) -> &'static str {
        match self {
            CType::Int => "int",
            CType::UInt => "unsigned int",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// C binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 6,
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Expr {
    Int(i64),
    Var(String),
    /// Call to a nondeterministic value source such as `nondet_int()`.
    Nondet(String),
    Unary(UnOp, Box<Expr>),
    Cast(CType, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Var(v) => v == name,
            Expr::Int(_) | Expr::Nondet(_) => false,
            Expr::Unary(_, e) | Expr::Cast(_, e) => e.mentions(name),
            Expr::Binary(_, l, r) => l.mentions(name) || r.mentions(name),
        }
    }

    pub fn has_nondet(&self) -> bool {
        match self {
            Expr::Nondet(_) => true,
            Expr::Int(_) | Expr::Var(_) => false,
            Expr::Unary(_, e) | Expr::Cast(_, e) => e.has_nondet(),
            Expr::Binary(_, l, r) => l.has_nondet() || r.has_nondet(),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Expr::Int(_) | Expr::Nondet(_) => {}
            Expr::Unary(_, e) | Expr::Cast(_, e) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Splits a top-level `&&` chain into its operands.
    pub fn conjuncts(self) -> Vec<Expr> {
        match self {
            Expr::Binary(BinOp::And, l, r) => {
                let mut v = l.conjuncts();
                v.extend(r.conjuncts());
                v
            }
            e => vec![e],
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(..) | Expr::Cast(..) => 7,
            Expr::Int(v) if *v < 0 => 7,
            _ => 8,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn sub(e: &Expr, paren: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Nondet(name) => write!(f, "{name}()"),
            Expr::Unary(op, e) => {
                write!(f, "{}", if *op == UnOp::Neg { "-" } else { "!" })?;
                // `- -1` and `--x` would lex differently
                let nested_neg = *op == UnOp::Neg
                    && matches!(**e, Expr::Unary(UnOp::Neg, _) | Expr::Int(i64::MIN..=-1));
                sub(e, e.precedence() < 7 || nested_neg, f)
            }
            Expr::Cast(t, e) => {
                write!(f, "({})", t.keyword())?;
                sub(e, e.precedence() < 7, f)
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                sub(l, l.precedence() < p, f)?;
                write!(f, " {} ", op.symbol())?;
                sub(r, r.precedence() <= p, f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Init {
    Const(i64),
    Nondet(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Declarator {
    pub name: String,
    pub init: Option<Init>,
    pub span: Span,
}

/// One declaration statement, possibly declaring several variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeclGroup {
    pub ty: CType,
    pub declarators: Vec<Declarator>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assume {
    /// Spelling of the directive, e.g. `assume` or `__ESBMC_assume`.
    pub keyword: String,
    /// The `&&` operands of the condition.
    pub conds: Vec<Expr>,
    pub span: Span,
}

impl Assume {
    pub fn synthetic(cond: Expr) -> Assume {
        Assume {
            keyword: "assume".into(),
            conds: vec![cond],
            span: Span::Synthetic,
        }
    }

    pub fn is_synthetic(&self) -> bool {
        self.span == Span::Synthetic
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AssignOp {
    Set,
    AddSet,
    SubSet,
}

impl AssignOp {
    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Set => "=",
            AssignOp::AddSet => "+=",
            AssignOp::SubSet => "-=",
        }
    }
}

/// Shape of a loop-body assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum UpdateKind {
    /// `v ← v + delta`, with `delta` free of `v`.
    Linear { delta: Expr },
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Update {
    pub target: String,
    pub op: AssignOp,
    pub rhs: Expr,
    pub kind: UpdateKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BodyStmt {
    Update(Update),
    Assume(Assume),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Loop {
    /// Deterministic `&&` operands of the guard.
    pub guard: Vec<Expr>,
    /// Name of the nondet call in the guard, if the loop may exit at any time.
    pub nondet_continue: Option<String>,
    pub body: Vec<BodyStmt>,
    pub span: Span,
}

impl Loop {
    pub fn updates(&self) -> impl Iterator<Item = &Update> {
        self.body.iter().filter_map(|s| match s {
            BodyStmt::Update(u) => Some(u),
            BodyStmt::Assume(_) => None,
        })
    }

    pub fn updates_of<'a>(&'a self, var: &'a str) -> impl Iterator<Item = &'a Update> {
        self.updates().filter(move |u| u.target == var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PreludeStmt {
    Decl(DeclGroup),
    Assume(Assume),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assert {
    pub keyword: String,
    pub cond: Expr,
    pub span: Span,
}

/// A parsed mini-C verification program: declarations and assumptions,
/// at most one loop, then assertions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProgramIR {
    pub includes: Vec<String>,
    /// Whether the statements sit inside `int main() { ... }`.
    pub wrapped_main: bool,
    pub prelude: Vec<PreludeStmt>,
    pub lp: Option<Loop>,
    pub asserts: Vec<Assert>,
    pub ret: Option<i64>,
}

/// A declared variable, flattened out of its declaration group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VarDecl {
    pub name: String,
    pub ty: CType,
    pub init: Option<Init>,
}

impl ProgramIR {
    pub fn decls(&self) -> Vec<VarDecl> {
        self.prelude
            .iter()
            .filter_map(|s| match s {
                PreludeStmt::Decl(g) => Some(g),
                PreludeStmt::Assume(_) => None,
            })
            .flat_map(|g| {
                g.declarators.iter().map(move |d| VarDecl {
                    name: d.name.clone(),
                    ty: g.ty,
                    init: d.init.clone(),
                })
            })
            .collect()
    }

    pub fn decl(&self, name: &str) -> Option<VarDecl> {
        self.decls().into_iter().find(|d| d.name == name)
    }

    pub fn prelude_assumes(&self) -> impl Iterator<Item = &Assume> {
        self.prelude.iter().filter_map(|s| match s {
            PreludeStmt::Assume(a) => Some(a),
            PreludeStmt::Decl(_) => None,
        })
    }

    /// Every assume in the program, prelude first.
    pub fn all_assumes(&self) -> Vec<&Assume> {
        let mut v: Vec<&Assume> = self.prelude_assumes().collect();
        if let Some(lp) = &self.lp {
            v.extend(lp.body.iter().filter_map(|s| match s {
                BodyStmt::Assume(a) => Some(a),
                BodyStmt::Update(_) => None,
            }));
        }
        v
    }

    /// A copy with every span replaced by `Synthetic`, for structural
    /// comparison.
    pub fn without_spans(&self) -> ProgramIR {
        let mut p = self.clone();
        let strip_assume = |a: &mut Assume| a.span = Span::Synthetic;
        for s in &mut p.prelude {
            match s {
                PreludeStmt::Decl(g) => {
                    g.span = Span::Synthetic;
                    for d in &mut g.declarators {
                        d.span = Span::Synthetic;
                    }
                }
                PreludeStmt::Assume(a) => strip_assume(a),
            }
        }
        if let Some(lp) = &mut p.lp {
            lp.span = Span::Synthetic;
            for s in &mut lp.body {
                match s {
                    BodyStmt::Update(u) => u.span = Span::Synthetic,
                    BodyStmt::Assume(a) => strip_assume(a),
                }
            }
        }
        for a in &mut p.asserts {
            a.span = Span::Synthetic;
        }
        p
    }
}
