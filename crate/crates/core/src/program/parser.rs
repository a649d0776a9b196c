use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::ParseError;

const ASSUME_KEYWORDS: &[&str] = &["assume", "__ESBMC_assume", "__VERIFIER_assume"];
const ASSERT_KEYWORDS: &[&str] = &["assert", "__VERIFIER_assert"];
const UNSUPPORTED_STMTS: &[&str] = &["if", "for", "do", "switch", "goto", "break", "continue"];

fn is_nondet_fn(name: &str) -> bool {
    name.contains("nondet")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    Prelude,
    AfterLoop,
    Asserts,
    Returned,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    declared: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> Span {
        let t = &self.toks[self.pos];
        Span::Source { line: t.line, col: t.col }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError::new(t.line, t.col, msg))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(n) if n == name)
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                Ok(n)
            }
            other => self.err(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn check_declared(&self, e: &Expr, span: Span) -> Result<(), ParseError> {
        let mut vars = Vec::new();
        e.collect_vars(&mut vars);
        match vars.into_iter().find(|v| !self.declared.iter().any(|d| d == v)) {
            Some(v) => {
                let (line, col) = match span {
                    Span::Source { line, col } => (line, col),
                    Span::Synthetic => (0, 0),
                };
                Err(ParseError::new(line, col, format!("use of undeclared variable `{v}`")))
            }
            None => Ok(()),
        }
    }

    fn program(&mut self) -> Result<ProgramIR, ParseError> {
        let mut includes = Vec::new();
        while let Tok::Include(text) = self.peek().clone() {
            includes.push(text);
            self.bump();
        }
        let wrapped_main = self.is_ident("int")
            && matches!(self.peek_at(1), Tok::Ident(n) if n == "main")
            && matches!(self.peek_at(2), Tok::Punct("("));
        if wrapped_main {
            self.bump();
            self.bump();
            self.bump();
            if self.is_ident("void") {
                self.bump();
            }
            self.expect_punct(")")?;
            self.expect_punct("{")?;
        }
        let mut p = ProgramIR {
            includes,
            wrapped_main,
            prelude: Vec::new(),
            lp: None,
            asserts: Vec::new(),
            ret: None,
        };
        let mut phase = Phase::Prelude;
        loop {
            if wrapped_main && self.is_punct("}") {
                self.bump();
                break;
            }
            if *self.peek() == Tok::Eof {
                if wrapped_main {
                    return self.err("expected `}` closing main");
                }
                break;
            }
            let span = self.here();
            let word = match self.peek().clone() {
                Tok::Ident(w) => w,
                other => return self.err(format!("expected a statement, found {}", describe(&other))),
            };
            if phase == Phase::Returned {
                return self.err("statement after return");
            }
            if matches!(word.as_str(), "int" | "unsigned" | "signed") {
                if phase > Phase::Prelude {
                    return self.err("declarations must precede the loop and assertions");
                }
                let g = self.decl_group()?;
                p.prelude.push(PreludeStmt::Decl(g));
            } else if ASSUME_KEYWORDS.contains(&word.as_str()) {
                if phase > Phase::Prelude {
                    return self.err("assumptions after the loop or assertions are not supported");
                }
                let a = self.assume()?;
                p.prelude.push(PreludeStmt::Assume(a));
            } else if ASSERT_KEYWORDS.contains(&word.as_str()) {
                self.bump();
                self.expect_punct("(")?;
                let cond = self.expr()?;
                self.check_declared(&cond, span)?;
                self.expect_punct(")")?;
                self.expect_punct(";")?;
                p.asserts.push(Assert { keyword: word, cond, span });
                phase = Phase::Asserts;
            } else if word == "while" {
                if p.lp.is_some() {
                    return self.err("multiple loops are not supported");
                }
                if phase > Phase::Prelude {
                    return self.err("the loop must precede the assertions");
                }
                p.lp = Some(self.while_loop()?);
                phase = Phase::AfterLoop;
            } else if word == "return" {
                self.bump();
                let neg = self.is_punct("-");
                if neg {
                    self.bump();
                }
                let v = match self.bump() {
                    Tok::Int(v) => v as i64,
                    _ => return self.err("expected integer after return"),
                };
                self.expect_punct(";")?;
                p.ret = Some(if neg { -v } else { v });
                phase = Phase::Returned;
            } else if UNSUPPORTED_STMTS.contains(&word.as_str()) {
                return self.err(format!("unsupported statement `{word}`"));
            } else if matches!(self.peek_at(1), Tok::Punct("=" | "+=" | "-=")) {
                return self.err("assignments are only supported inside the loop body");
            } else {
                return self.err(format!("unsupported statement starting with `{word}`"));
            }
        }
        if *self.peek() != Tok::Eof {
            return self.err(format!("unexpected {} after main", describe(self.peek())));
        }
        Ok(p)
    }

    fn ctype(&mut self) -> Result<CType, ParseError> {
        let first = self.ident()?;
        let ty = match first.as_str() {
            "int" => CType::Int,
            "signed" => CType::Int,
            "unsigned" => CType::UInt,
            other => return self.err(format!("unsupported type `{other}`")),
        };
        if first != "int" && self.is_ident("int") {
            self.bump();
        }
        if let Tok::Ident(n) = self.peek() {
            if matches!(n.as_str(), "long" | "short" | "char") {
                return self.err(format!("unsupported type `{n}`"));
            }
        }
        Ok(ty)
    }

    fn decl_group(&mut self) -> Result<DeclGroup, ParseError> {
        let span = self.here();
        let ty = self.ctype()?;
        let mut declarators = Vec::new();
        loop {
            let dspan = self.here();
            let name = self.ident()?;
            if self.declared.contains(&name) {
                return self.err(format!("variable `{name}` declared twice"));
            }
            let init = if self.is_punct("=") {
                self.bump();
                Some(self.initializer(ty)?)
            } else {
                None
            };
            self.declared.push(name.clone());
            declarators.push(Declarator { name, init, span: dspan });
            if self.is_punct(",") {
                self.bump();
                continue;
            }
            self.expect_punct(";")?;
            break;
        }
        Ok(DeclGroup { ty, declarators, span })
    }

    fn initializer(&mut self, ty: CType) -> Result<Init, ParseError> {
        let neg = self.is_punct("-");
        if neg {
            self.bump();
        }
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                let v = if neg { -(v as i128) } else { v as i128 };
                if v < ty.min() as i128 || v > ty.max() as i128 {
                    return self.err(format!("initializer {v} is out of range for {}", ty.keyword()));
                }
                Ok(Init::Const(v as i64))
            }
            Tok::Ident(name) if !neg && is_nondet_fn(&name) => {
                self.bump();
                self.expect_punct("(")?;
                self.expect_punct(")")?;
                Ok(Init::Nondet(name))
            }
            other => self.err(format!(
                "expected an integer constant or nondet call as initializer, found {}",
                describe(&other)
            )),
        }
    }

    fn assume(&mut self) -> Result<Assume, ParseError> {
        let span = self.here();
        let keyword = self.ident()?;
        self.expect_punct("(")?;
        let cond = self.expr()?;
        if cond.has_nondet() {
            return self.err("nondet calls inside assume are not supported");
        }
        self.check_declared(&cond, span)?;
        self.expect_punct(")")?;
        self.expect_punct(";")?;
        Ok(Assume {
            keyword,
            conds: cond.conjuncts(),
            span,
        })
    }

    fn while_loop(&mut self) -> Result<Loop, ParseError> {
        let span = self.here();
        self.bump();
        self.expect_punct("(")?;
        let cond = self.expr()?;
        self.expect_punct(")")?;
        let mut guard = Vec::new();
        let mut nondet_continue = None;
        for c in cond.conjuncts() {
            match c {
                Expr::Nondet(name) if nondet_continue.is_none() => nondet_continue = Some(name),
                c if c.has_nondet() => {
                    return Err(ParseError::at(span, "nondet calls in the loop guard must be plain `&&` operands"))
                }
                c => {
                    self.check_declared(&c, span)?;
                    guard.push(c);
                }
            }
        }
        self.expect_punct("{")?;
        let mut body = Vec::new();
        while !self.is_punct("}") {
            let sspan = self.here();
            match self.peek().clone() {
                Tok::Ident(w) if ASSUME_KEYWORDS.contains(&w.as_str()) => {
                    body.push(BodyStmt::Assume(self.assume()?));
                }
                Tok::Ident(w) if w == "while" => return self.err("nested loops are not supported"),
                Tok::Ident(w) if UNSUPPORTED_STMTS.contains(&w.as_str()) => {
                    return self.err(format!("unsupported statement `{w}`"))
                }
                Tok::Ident(target) if matches!(self.peek_at(1), Tok::Punct("=" | "+=" | "-=")) => {
                    self.bump();
                    let op = match self.bump() {
                        Tok::Punct("=") => AssignOp::Set,
                        Tok::Punct("+=") => AssignOp::AddSet,
                        _ => AssignOp::SubSet,
                    };
                    if !self.declared.contains(&target) {
                        return Err(ParseError::at(sspan, format!("assignment to undeclared variable `{target}`")));
                    }
                    let rhs = self.expr()?;
                    if rhs.has_nondet() {
                        return self.err("nondet calls in loop updates are not supported");
                    }
                    self.check_declared(&rhs, sspan)?;
                    self.expect_punct(";")?;
                    let kind = classify(&target, op, &rhs);
                    body.push(BodyStmt::Update(Update {
                        target,
                        op,
                        rhs,
                        kind,
                        span: sspan,
                    }));
                }
                Tok::Ident(w) if matches!(w.as_str(), "int" | "unsigned" | "signed") => {
                    return self.err("declarations inside the loop body are not supported")
                }
                Tok::Eof => return self.err("unterminated loop body"),
                other => return self.err(format!("unsupported loop-body statement starting with {}", describe(&other))),
            }
        }
        self.bump();
        Ok(Loop {
            guard,
            nondet_continue,
            body,
            span,
        })
    }

    // expression grammar, C precedence

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        let Tok::Punct(p) = self.peek() else { return None };
        Some(match *p {
            "||" => BinOp::Or,
            "&&" => BinOp::And,
            "==" => BinOp::Eq,
            "!=" => BinOp::Ne,
            "<" => BinOp::Lt,
            "<=" => BinOp::Le,
            ">" => BinOp::Gt,
            ">=" => BinOp::Ge,
            "+" => BinOp::Add,
            "-" => BinOp::Sub,
            "*" => BinOp::Mul,
            "/" => BinOp::Div,
            "%" => BinOp::Rem,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            let p = op.precedence();
            if p < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(p + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_punct("-") {
            self.bump();
            if let Tok::Int(v) = self.peek().clone() {
                self.bump();
                return Ok(Expr::Int(-(self.int_value(v)?)));
            }
            return Ok(Expr::Unary(UnOp::Neg, Box::new(self.unary()?)));
        }
        if self.is_punct("!") {
            self.bump();
            return Ok(Expr::Unary(UnOp::Not, Box::new(self.unary()?)));
        }
        if self.is_punct("(")
            && matches!(self.peek_at(1), Tok::Ident(n) if matches!(n.as_str(), "int" | "unsigned" | "signed"))
        {
            self.bump();
            let ty = self.ctype()?;
            self.expect_punct(")")?;
            return Ok(Expr::Cast(ty, Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn int_value(&self, v: u64) -> Result<i64, ParseError> {
        i64::try_from(v).or_else(|_| self.err("integer literal too large"))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(self.int_value(v)?))
            }
            Tok::Ident(name) => {
                if matches!(self.peek_at(1), Tok::Punct("(")) {
                    if !is_nondet_fn(&name) {
                        return self.err(format!("unsupported function call `{name}`"));
                    }
                    self.bump();
                    self.bump();
                    self.expect_punct(")")?;
                    return Ok(Expr::Nondet(name));
                }
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::Punct("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(")")?;
                Ok(e)
            }
            other => self.err(format!("expected an expression, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("`{n}`"),
        Tok::Int(v) => format!("`{v}`"),
        Tok::Include(_) => "an #include line".into(),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".into(),
    }
}

/// Recognises `v = v + e`, `v = e + v`, `v = v - e`, `v += e` and `v -= e`
/// with `e` free of `v`.
pub fn classify(target: &str, op: AssignOp, rhs: &Expr) -> UpdateKind {
    let free = |e: &Expr| !e.mentions(target);
    let is_target = |e: &Expr| matches!(e, Expr::Var(v) if v == target);
    let neg = |e: &Expr| Expr::Unary(UnOp::Neg, Box::new(e.clone()));
    let delta = match (op, rhs) {
        (AssignOp::AddSet, e) if free(e) => Some(e.clone()),
        (AssignOp::SubSet, e) if free(e) => Some(neg(e)),
        (AssignOp::Set, Expr::Binary(BinOp::Add, l, r)) if is_target(l) && free(r) => Some((**r).clone()),
        (AssignOp::Set, Expr::Binary(BinOp::Add, l, r)) if is_target(r) && free(l) => Some((**l).clone()),
        (AssignOp::Set, Expr::Binary(BinOp::Sub, l, r)) if is_target(l) && free(r) => Some(neg(r)),
        _ => None,
    };
    match delta {
        Some(delta) => UpdateKind::Linear { delta },
        None => UpdateKind::Opaque,
    }
}

pub fn parse_program(text: &str) -> Result<ProgramIR, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        declared: Vec::new(),
    };
    p.program()
}
