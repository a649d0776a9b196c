//! Constraint expressions `f(x) ⋈ 0`: parsing, natural interval evaluation
//! and the top-down projection used by the forward-backward contractor.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::boxes::IntBox;
use crate::interval::{ArithOp, Interval, UnaryFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("unsupported operator `{0}` in constraint")]
    Unsupported(String),
    #[error("unknown variable `{0}` in constraint")]
    UnknownVariable(String),
    #[error("constraint syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

impl ConstraintError {
    /// The offending operator for `Unsupported` errors.
    pub fn unsupported_operator(&self) -> Option<&str> {
        match self {
            ConstraintError::Unsupported(op) => Some(op),
            _ => None,
        }
    }
}

/// How `f(x)` relates to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// `f(x) <= 0`
    Le0,
    /// `f(x) == 0`
    Eq0,
    /// `f(x) > 0`
    Gt0,
    /// `f(x) >= 0`
    Ge0,
    /// `f(x) < 0`
    Lt0,
}

impl Relation {
    /// The interval `I` that `f(x)` must lie in. Strict relations use the
    /// closed counterpart.
    pub fn interval(self) -> Interval {
        match self {
            Relation::Le0 | Relation::Lt0 => Interval::at_most(0.0),
            Relation::Gt0 | Relation::Ge0 => Interval::at_least(0.0),
            Relation::Eq0 => Interval::point(0.0),
        }
    }

    pub fn holds(self, v: f64) -> bool {
        match self {
            Relation::Le0 => v <= 0.0,
            Relation::Eq0 => v == 0.0,
            Relation::Gt0 => v > 0.0,
            Relation::Ge0 => v >= 0.0,
            Relation::Lt0 => v < 0.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le0 => "<=",
            Relation::Eq0 => "==",
            Relation::Gt0 => ">",
            Relation::Ge0 => ">=",
            Relation::Lt0 => "<",
        }
    }
}

/// Free function form of [`Relation::interval`].
pub fn relation_interval(rel: Relation) -> Interval {
    rel.interval()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// A literal. `exact` is false when the decimal text had no exact binary
    /// representation; evaluation then widens to the neighbouring floats.
    Const { value: f64, exact: bool },
    /// Index into the CSP variable order.
    Var(usize),
    Binary(ArithOp, Box<Node>, Box<Node>),
    Unary(UnaryFn, Box<Node>),
}

impl Node {
    pub fn constant(value: f64) -> Node {
        Node::Const { value, exact: true }
    }

    pub fn var(idx: usize) -> Node {
        Node::Var(idx)
    }

    pub fn binary(op: ArithOp, l: Node, r: Node) -> Node {
        Node::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn unary(f: UnaryFn, e: Node) -> Node {
        Node::Unary(f, Box::new(e))
    }

    fn is_zero(&self) -> bool {
        matches!(self, Node::Const { value, exact: true } if *value == 0.0)
    }

    /// Point evaluation in ordinary floating point.
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Node::Const { value, .. } => *value,
            Node::Var(i) => point[*i],
            Node::Binary(op, l, r) => {
                let (a, b) = (l.eval(point), r.eval(point));
                match op {
                    ArithOp::Add => a + b,
                    ArithOp::Sub => a - b,
                    ArithOp::Mul => a * b,
                    ArithOp::Div => a / b,
                }
            }
            Node::Unary(f, e) => {
                let a = e.eval(point);
                match f {
                    UnaryFn::Neg => -a,
                    UnaryFn::Sqr => a * a,
                    UnaryFn::Sqrt => a.sqrt(),
                }
            }
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Node::Const { .. } => {}
            Node::Var(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Node::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Node::Unary(_, e) => e.collect_vars(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Binary(ArithOp::Add | ArithOp::Sub, ..) => 1,
            Node::Binary(ArithOp::Mul | ArithOp::Div, ..) => 2,
            Node::Unary(UnaryFn::Neg, _) => 3,
            Node::Unary(UnaryFn::Sqr, _) => 4,
            Node::Const { value, .. } if *value < 0.0 => 0,
            _ => 5,
        }
    }

    fn write(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |n: &Node, need: bool, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if need {
                write!(f, "(")?;
                n.write(names, f)?;
                write!(f, ")")
            } else {
                n.write(names, f)
            }
        };
        match self {
            Node::Const { value, .. } => write!(f, "{value}"),
            Node::Var(i) => match names.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "x{}", i + 1),
            },
            Node::Binary(op, l, r) => {
                let p = self.precedence();
                paren(l, l.precedence() < p, f)?;
                let sym = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                    ArithOp::Div => "/",
                };
                write!(f, " {sym} ")?;
                paren(r, r.precedence() <= p, f)
            }
            Node::Unary(UnaryFn::Neg, e) => {
                write!(f, "-")?;
                let need = e.precedence() < 3 || matches!(**e, Node::Const { .. });
                paren(e, need, f)
            }
            Node::Unary(UnaryFn::Sqr, e) => {
                paren(e, e.precedence() < 5, f)?;
                write!(f, "^2")
            }
            Node::Unary(UnaryFn::Sqrt, e) => {
                write!(f, "sqrt(")?;
                e.write(names, f)?;
                write!(f, ")")
            }
        }
    }
}

/// One constraint `root ⋈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintExpr {
    pub root: Node,
    pub relation: Relation,
}

impl ConstraintExpr {
    pub fn new(root: Node, relation: Relation) -> ConstraintExpr {
        ConstraintExpr { root, relation }
    }

    /// Whether the point satisfies the constraint, evaluated in floating point.
    pub fn holds_at(&self, point: &[f64]) -> bool {
        self.relation.holds(self.root.eval(point))
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut v = Vec::new();
        self.root.collect_vars(&mut v);
        v
    }

    /// Renders the constraint with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a ConstraintExpr, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.root.write(self.1, f)?;
                write!(f, " {} 0", self.0.relation.symbol())
            }
        }
        D(self, names)
    }
}

/// The complementary constraint used by the inner contractor.
///
/// `== 0` has no single-interval complement and is rejected.
pub fn complement(c: &ConstraintExpr) -> Result<ConstraintExpr, ConstraintError> {
    let relation = match c.relation {
        Relation::Le0 => Relation::Gt0,
        Relation::Gt0 => Relation::Le0,
        Relation::Ge0 => Relation::Lt0,
        Relation::Lt0 => Relation::Ge0,
        Relation::Eq0 => return Err(ConstraintError::Unsupported("==".into())),
    };
    Ok(ConstraintExpr::new(c.root.clone(), relation))
}

/// Names of the CSP variables, in dimension order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
}

impl SymbolTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> SymbolTable {
        SymbolTable {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Cmp(Cmp),
    /// An operator the grammar knows about but refuses.
    Refused(&'static str),
    Eof,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ConstraintError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if c.is_whitespace() {
            i += 1;
            continue;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            toks.push((start, Tok::Num(text[start..i].to_string())));
            continue;
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        } else if two("&&") {
            i += 2;
            Tok::Refused("&&")
        } else if two("||") {
            i += 2;
            Tok::Refused("||")
        } else if two("!=") {
            i += 2;
            Tok::Refused("!=")
        } else if two("<=") {
            i += 2;
            Tok::Cmp(Cmp::Le)
        } else if two(">=") {
            i += 2;
            Tok::Cmp(Cmp::Ge)
        } else if two("==") {
            i += 2;
            Tok::Cmp(Cmp::Eq)
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::Cmp(Cmp::Lt),
                '>' => Tok::Cmp(Cmp::Gt),
                '!' => Tok::Refused("!"),
                '%' => Tok::Refused("%"),
                '&' => Tok::Refused("&"),
                '|' => Tok::Refused("|"),
                '=' => Tok::Refused("="),
                '?' | ':' => Tok::Refused("?:"),
                _ => {
                    return Err(ConstraintError::Syntax {
                        pos: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        toks.push((start, tok));
    }
    toks.push((text.len(), Tok::Eof));
    Ok(toks)
}

const CAST_TYPES: &[&str] = &["int", "unsigned", "signed", "long", "short", "char", "float", "double", "_Bool"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ConstraintError> {
        Err(ConstraintError::Syntax {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn sum(&mut self) -> Result<Node, ConstraintError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Node, ConstraintError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Node, ConstraintError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            if let Tok::Num(text) = self.peek().clone() {
                // a literal directly after unary minus folds into the constant
                if !matches!(self.toks.get(self.pos + 1), Some((_, Tok::Caret))) {
                    self.bump();
                    return Ok(number(&format!("-{text}")));
                }
            }
            let e = self.unary()?;
            return Ok(Node::unary(UnaryFn::Neg, e));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ConstraintError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Num(n) if n == "2" => Ok(Node::unary(UnaryFn::Sqr, base)),
                Tok::Num(n) => Err(ConstraintError::Unsupported(format!("^{n}"))),
                _ => self.syntax("expected exponent after `^`"),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Node, ConstraintError> {
        match self.bump() {
            Tok::Num(text) => Ok(number(&text)),
            Tok::Ident(name) => {
                if *self.peek() == Tok::LParen {
                    if name != "sqrt" {
                        return Err(ConstraintError::Unsupported(format!("{name}()")));
                    }
                    self.bump();
                    let arg = self.sum()?;
                    self.close_paren()?;
                    return Ok(Node::unary(UnaryFn::Sqrt, arg));
                }
                match self.symbols.lookup(&name) {
                    Some(i) => Ok(Node::Var(i)),
                    None => Err(ConstraintError::UnknownVariable(name)),
                }
            }
            Tok::LParen => {
                if let Tok::Ident(id) = self.peek() {
                    if CAST_TYPES.contains(&id.as_str()) {
                        return Err(ConstraintError::Unsupported("typecast".into()));
                    }
                }
                let e = self.sum()?;
                self.close_paren()?;
                Ok(e)
            }
            Tok::Refused(op) => Err(ConstraintError::Unsupported(op.into())),
            Tok::Eof => self.syntax("unexpected end of constraint"),
            other => self.syntax(format!("unexpected token {other:?}")),
        }
    }

    fn close_paren(&mut self) -> Result<(), ConstraintError> {
        match self.bump() {
            Tok::RParen => Ok(()),
            Tok::Cmp(_) => Err(ConstraintError::Unsupported(
                "comparison nested in arithmetic".into(),
            )),
            Tok::Refused(op) => Err(ConstraintError::Unsupported(op.into())),
            _ => self.syntax("expected `)`"),
        }
    }
}

fn decimal_value(text: &str) -> Option<BigRational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exp - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(digits);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

fn number(text: &str) -> Node {
    let value: f64 = text.parse().unwrap_or(f64::NAN);
    let exact = match (decimal_value(text), BigRational::from_float(value)) {
        (Some(d), Some(v)) => d == v,
        (Some(d), None) => d.is_zero(),
        _ => false,
    };
    Node::Const { value, exact }
}

/// Parses one comparison `E ⋈ E` and normalises it to `f(x) ⋈ 0`.
///
/// `L <= R` and `L < R` become `L - R <= 0`; `L >= R` and `L > R` become
/// `R - L <= 0`; `L == R` becomes `L - R == 0`. A literal zero operand is
/// dropped instead of subtracted. `!=`, logical connectives, casts, `%` and
/// comparisons nested inside arithmetic are refused.
pub fn parse_constraint(text: &str, symbols: &SymbolTable) -> Result<ConstraintExpr, ConstraintError> {
    let toks = tokenize(text)?;
    if let Some(op) = toks.iter().find_map(|(_, t)| match t {
        Tok::Refused(op) if matches!(*op, "&&" | "||" | "!=" | "!") => Some(*op),
        _ => None,
    }) {
        return Err(ConstraintError::Unsupported(op.into()));
    }
    let mut p = Parser { toks, pos: 0, symbols };
    let lhs = p.sum()?;
    let cmp = match p.bump() {
        Tok::Cmp(c) => c,
        Tok::Eof => return p.syntax("expected a comparison operator"),
        Tok::Refused(op) => return Err(ConstraintError::Unsupported(op.into())),
        Tok::RParen => return p.syntax("unbalanced `)`"),
        other => return p.syntax(format!("unexpected token {other:?}")),
    };
    let rhs = p.sum()?;
    match p.bump() {
        Tok::Eof => {}
        Tok::Cmp(_) => return Err(ConstraintError::Unsupported("chained comparison".into())),
        Tok::Refused(op) => return Err(ConstraintError::Unsupported(op.into())),
        other => return p.syntax(format!("unexpected token {other:?}")),
    }
    let diff = |a: Node, b: Node| if b.is_zero() { a } else { Node::binary(ArithOp::Sub, a, b) };
    Ok(match cmp {
        Cmp::Le => ConstraintExpr::new(diff(lhs, rhs), Relation::Le0),
        Cmp::Lt => ConstraintExpr::new(diff(lhs, rhs), Relation::Lt0),
        Cmp::Ge => ConstraintExpr::new(diff(rhs, lhs), Relation::Le0),
        Cmp::Gt => ConstraintExpr::new(diff(rhs, lhs), Relation::Lt0),
        Cmp::Eq => ConstraintExpr::new(diff(lhs, rhs), Relation::Eq0),
    })
}

// ---------------------------------------------------------------------------
// Forward evaluation and backward projection

/// A constraint tree annotated with the interval of every sub-expression.
#[derive(Debug, Clone)]
pub struct Evaluated<'a> {
    pub node: &'a Node,
    pub value: Interval,
    pub children: Vec<Evaluated<'a>>,
}

fn eval_node<'a>(node: &'a Node, b: &IntBox) -> Evaluated<'a> {
    match node {
        Node::Const { value, exact } => {
            let v = if *exact {
                Interval::point(*value)
            } else {
                Interval::new(value.next_down(), value.next_up())
            };
            Evaluated { node, value: v, children: vec![] }
        }
        Node::Var(i) => Evaluated {
            node,
            value: b.at(*i),
            children: vec![],
        },
        Node::Binary(op, l, r) => {
            let l = eval_node(l, b);
            let r = eval_node(r, b);
            Evaluated {
                node,
                value: Interval::apply(*op, l.value, r.value),
                children: vec![l, r],
            }
        }
        Node::Unary(f, e) => {
            let e = eval_node(e, b);
            Evaluated {
                node,
                value: Interval::apply_fn(*f, e.value),
                children: vec![e],
            }
        }
    }
}

/// Natural interval extension of `e.root` over `b`, with the annotated tree
/// needed by [`backward_project`]. An empty box evaluates to `EMPTY`.
pub fn forward_eval<'a>(e: &'a ConstraintExpr, b: &IntBox) -> (Interval, Evaluated<'a>) {
    if b.is_empty() {
        let ev = Evaluated {
            node: &e.root,
            value: Interval::EMPTY,
            children: vec![],
        };
        return (Interval::EMPTY, ev);
    }
    let ev = eval_node(&e.root, b);
    (ev.value, ev)
}

/// `{x ∈ ℝ | ∃ o ∈ other: x·o ∈ target}`, hulled.
fn mul_rev(target: Interval, other: Interval) -> Interval {
    if target.contains_zero() && other.contains_zero() {
        Interval::ENTIRE
    } else {
        target / other
    }
}

/// Walks the annotated tree top-down, narrowing every variable so that the
/// root stays inside `target`. Returns the contracted box, possibly empty.
pub fn backward_project(tree: &Evaluated<'_>, target: Interval, b: &IntBox) -> IntBox {
    let mut out = b.clone();
    if b.is_empty() || !project(tree, target, &mut out) {
        return IntBox::empty_over(&b.var_names());
    }
    out
}

fn project(ev: &Evaluated<'_>, target: Interval, out: &mut IntBox) -> bool {
    let y = ev.value.intersect(&target);
    if y.is_empty() {
        return false;
    }
    match ev.node {
        Node::Const { .. } => true,
        Node::Var(i) => {
            let v = out.at(*i).intersect(&y);
            out.set(*i, v);
            !v.is_empty()
        }
        Node::Binary(op, ..) => {
            let (l, r) = (&ev.children[0], &ev.children[1]);
            let l_target = match op {
                ArithOp::Add => y - r.value,
                ArithOp::Sub => y + r.value,
                ArithOp::Mul => mul_rev(y, r.value),
                ArithOp::Div => y * r.value,
            };
            let l_new = l.value.intersect(&l_target);
            if !project(l, l_target, out) {
                return false;
            }
            let r_target = match op {
                ArithOp::Add => y - l_new,
                ArithOp::Sub => l_new - y,
                ArithOp::Mul => mul_rev(y, l_new),
                ArithOp::Div => mul_rev(l_new, y),
            };
            project(r, r_target, out)
        }
        Node::Unary(f, _) => {
            let c = &ev.children[0];
            let c_target = match f {
                UnaryFn::Neg => -y,
                UnaryFn::Sqr => {
                    let root = y.sqrt();
                    c.value.intersect(&root).hull(&c.value.intersect(&-root))
                }
                UnaryFn::Sqrt => y.intersect(&Interval::at_least(0.0)).sqr(),
            };
            project(c, c_target, out)
        }
    }
}

// ---------------------------------------------------------------------------
// CSP

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CspError {
    #[error("a CSP needs at least one constraint")]
    NoConstraints,
    #[error("domain variables do not match the CSP variables")]
    DomainMismatch,
    #[error("constraint {0} refers to a variable outside the CSP")]
    UnboundVariable(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CspVar {
    pub name: String,
    pub integral: bool,
}

/// Variables with integrality flags, a domain box and `m >= 1` constraints.
#[derive(Debug, Clone)]
pub struct Csp {
    vars: Vec<CspVar>,
    domain: IntBox,
    constraints: Vec<ConstraintExpr>,
}

impl Csp {
    pub fn new(vars: Vec<CspVar>, domain: IntBox, constraints: Vec<ConstraintExpr>) -> Result<Csp, CspError> {
        if constraints.is_empty() {
            return Err(CspError::NoConstraints);
        }
        if !domain.vars().eq(vars.iter().map(|v| v.name.as_str())) {
            return Err(CspError::DomainMismatch);
        }
        for (k, c) in constraints.iter().enumerate() {
            if c.variables().iter().any(|&i| i >= vars.len()) {
                return Err(CspError::UnboundVariable(k));
            }
        }
        Ok(Csp { vars, domain, constraints })
    }

    pub fn vars(&self) -> &[CspVar] {
        &self.vars
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.name.clone()).collect()
    }

    pub fn integral_mask(&self) -> Vec<bool> {
        self.vars.iter().map(|v| v.integral).collect()
    }

    pub fn domain(&self) -> &IntBox {
        &self.domain
    }

    pub fn constraints(&self) -> &[ConstraintExpr] {
        &self.constraints
    }

    /// Whether a point satisfies every constraint.
    pub fn satisfied_at(&self, point: &[f64]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::MAX_UINT;

    fn xy() -> SymbolTable {
        SymbolTable::new(["x", "y"])
    }

    fn sub(a: Node, b: Node) -> Node {
        Node::binary(ArithOp::Sub, a, b)
    }

    fn b2(x: (f64, f64), y: (f64, f64)) -> IntBox {
        IntBox::new([("x", Interval::new(x.0, x.1)), ("y", Interval::new(y.0, y.1))])
    }

    #[test]
    fn parse_ge_moves_left_operand_right() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        assert_eq!(c, ConstraintExpr::new(sub(Node::Var(1), Node::Var(0)), Relation::Le0));
    }

    #[test]
    fn parse_square_sugar() {
        let c = parse_constraint("y >= x^2", &xy()).unwrap();
        let expect = sub(Node::unary(UnaryFn::Sqr, Node::Var(0)), Node::Var(1));
        assert_eq!(c, ConstraintExpr::new(expect, Relation::Le0));
    }

    #[test]
    fn parse_refuses_not_equal() {
        assert_eq!(
            parse_constraint("x != y", &xy()),
            Err(ConstraintError::Unsupported("!=".into()))
        );
    }

    #[test]
    fn parse_refuses_logic_casts_and_nesting() {
        let unsupported = |t: &str| parse_constraint(t, &xy()).unwrap_err().unsupported_operator().map(str::to_string);
        assert_eq!(unsupported("x >= 0 && y >= 0").as_deref(), Some("&&"));
        assert_eq!(unsupported("x >= 0 || y >= 0").as_deref(), Some("||"));
        assert_eq!(unsupported("!(x >= 0)").as_deref(), Some("!"));
        assert_eq!(unsupported("(int)x >= y").as_deref(), Some("typecast"));
        assert_eq!(unsupported("x < y < 1").as_deref(), Some("chained comparison"));
        assert_eq!(unsupported("(x > 1) + 1").as_deref(), Some("comparison nested in arithmetic"));
        assert_eq!(unsupported("x % 2 == 0").as_deref(), Some("%"));
        assert_eq!(unsupported("x^3 <= y").as_deref(), Some("^3"));
        assert_eq!(unsupported("nondet_int() <= y").as_deref(), Some("nondet_int()"));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_constraint("x + y", &xy()), Err(ConstraintError::Syntax { .. })));
        assert!(matches!(parse_constraint("x <= ", &xy()), Err(ConstraintError::Syntax { .. })));
        assert_eq!(
            parse_constraint("z <= 1", &xy()),
            Err(ConstraintError::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn parse_zero_sides_and_strict_relations() {
        let c = parse_constraint("x - y <= 0", &xy()).unwrap();
        assert_eq!(c.root, sub(Node::Var(0), Node::Var(1)));
        let c = parse_constraint("0 >= x", &xy()).unwrap();
        assert_eq!(c, ConstraintExpr::new(Node::Var(0), Relation::Le0));
        // strictness is kept for truth, only the contractors close it
        let c = parse_constraint("x > y", &xy()).unwrap();
        assert_eq!(c, ConstraintExpr::new(sub(Node::Var(1), Node::Var(0)), Relation::Lt0));
        assert!(!c.holds_at(&[2.0, 2.0]));
        let c = parse_constraint("x == 3", &xy()).unwrap();
        assert_eq!(c.relation, Relation::Eq0);
    }

    #[test]
    fn decimal_literals_track_exactness() {
        let c = parse_constraint("x <= 0.5", &xy()).unwrap();
        assert_eq!(c.root, sub(Node::Var(0), Node::Const { value: 0.5, exact: true }));
        let c = parse_constraint("x <= 0.1", &xy()).unwrap();
        assert_eq!(c.root, sub(Node::Var(0), Node::Const { value: 0.1, exact: false }));
        let c = parse_constraint("x <= -3", &xy()).unwrap();
        assert_eq!(c.root, sub(Node::Var(0), Node::constant(-3.0)));
        let c = parse_constraint("x <= 2.5e3", &xy()).unwrap();
        assert_eq!(c.root, sub(Node::Var(0), Node::constant(2500.0)));
    }

    #[test]
    fn inexact_constant_evaluates_to_enclosure() {
        let c = parse_constraint("x <= 0.1", &xy()).unwrap();
        let (v, _) = forward_eval(&c, &b2((0.0, 0.0), (0.0, 0.0)));
        assert!(v.lo() < -0.1 && v.hi() > -0.1);
    }

    #[test]
    fn display_round_trips() {
        let s = xy();
        for text in ["x - y <= 0", "x^2 - y <= 0", "y - sqrt(x) <= 0", "-(x + y) * 2 <= 0", "x - (y - 1) == 0", "(-3) - x / (y * 2) <= 0", "-(x^2) <= 0"] {
            let c = parse_constraint(text, &s).unwrap();
            let printed = c.display(s.names()).to_string();
            assert_eq!(parse_constraint(&printed, &s).unwrap(), c, "{text} -> {printed}");
        }
    }

    #[test]
    fn forward_unsigned_pair_operands() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let (v, _) = forward_eval(&c, &b2((0.0, 20.0), (0.0, MAX_UINT)));
        assert_eq!(v, Interval::new(-20.0, MAX_UINT));
    }

    #[test]
    fn forward_shifted_pair_operands() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let (v, _) = forward_eval(&c, &b2((20.0, 30.0), (0.0, 30.0)));
        assert_eq!(v, Interval::new(-30.0, 10.0));
    }

    #[test]
    fn forward_on_empty_box() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let (v, _) = forward_eval(&c, &IntBox::empty_over(&["x".into(), "y".into()]));
        assert!(v.is_empty());
    }

    #[test]
    fn backward_outer_example() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let b = b2((0.0, 20.0), (0.0, MAX_UINT));
        let (_, tree) = forward_eval(&c, &b);
        let out = backward_project(&tree, Interval::new(-20.0, 0.0), &b);
        assert_eq!(out, b2((0.0, 20.0), (0.0, 20.0)));
    }

    #[test]
    fn backward_inner_example() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let b = b2((20.0, 30.0), (0.0, 30.0));
        let (_, tree) = forward_eval(&c, &b);
        let out = backward_project(&tree, Interval::new(0.0, 10.0), &b);
        assert_eq!(out, b2((20.0, 30.0), (20.0, 30.0)));
    }

    #[test]
    fn backward_without_information_is_identity() {
        let c = parse_constraint("x * y + sqrt(x) >= y^2", &xy()).unwrap();
        let b = b2((1.0, 4.0), (-2.0, 3.0));
        let (v, tree) = forward_eval(&c, &b);
        assert_eq!(backward_project(&tree, v, &b), b);
    }

    #[test]
    fn backward_mul_with_zero_factor_keeps_other_side() {
        // x * y <= 0 with y possibly zero cannot narrow x
        let c = parse_constraint("x * y <= 0", &xy()).unwrap();
        let b = b2((-5.0, 5.0), (0.0, 0.0));
        let (_, tree) = forward_eval(&c, &b);
        assert_eq!(backward_project(&tree, Relation::Le0.interval(), &b), b);
    }

    #[test]
    fn complement_rules() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let k = complement(&c).unwrap();
        assert_eq!(k, ConstraintExpr::new(c.root.clone(), Relation::Gt0));
        assert_eq!(complement(&k).unwrap(), c);
        let ge = ConstraintExpr::new(Node::Var(0), Relation::Ge0);
        assert_eq!(complement(&complement(&ge).unwrap()).unwrap(), ge);
        let eq = parse_constraint("x == y", &xy()).unwrap();
        assert_eq!(complement(&eq), Err(ConstraintError::Unsupported("==".into())));
    }

    #[test]
    fn relation_intervals() {
        assert_eq!(relation_interval(Relation::Le0), Interval::at_most(0.0));
        assert_eq!(relation_interval(Relation::Gt0), Interval::at_least(0.0));
        assert_eq!(relation_interval(Relation::Ge0), Interval::at_least(0.0));
        assert_eq!(relation_interval(Relation::Eq0), Interval::point(0.0));
        assert_eq!(relation_interval(Relation::Lt0), Interval::at_most(0.0));
    }

    #[test]
    fn csp_validation() {
        let c = parse_constraint("x >= y", &xy()).unwrap();
        let vars = vec![
            CspVar { name: "x".into(), integral: true },
            CspVar { name: "y".into(), integral: true },
        ];
        let dom = b2((0.0, 1.0), (0.0, 1.0));
        assert!(Csp::new(vars.clone(), dom.clone(), vec![c.clone()]).is_ok());
        assert_eq!(Csp::new(vars.clone(), dom.clone(), vec![]).unwrap_err(), CspError::NoConstraints);
        let other = IntBox::new([("x", Interval::new(0.0, 1.0))]);
        assert_eq!(Csp::new(vars, other, vec![c]).unwrap_err(), CspError::DomainMismatch);
    }
}
