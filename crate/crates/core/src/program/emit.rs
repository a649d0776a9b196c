use super::ast::*;

fn join_conds(conds: &[Expr]) -> String {
    let mut it = conds.iter().cloned();
    let first = it.next().expect("at least one condition");
    it.fold(first, |acc, c| Expr::binary(BinOp::And, acc, c)).to_string()
}

fn decl_line(g: &DeclGroup) -> String {
    let parts: Vec<String> = g
        .declarators
        .iter()
        .map(|d| match &d.init {
            None => d.name.clone(),
            Some(Init::Const(v)) => format!("{} = {v}", d.name),
            Some(Init::Nondet(f)) => format!("{} = {f}()", d.name),
        })
        .collect();
    format!("{} {};", g.ty.keyword(), parts.join(", "))
}

fn assume_line(a: &Assume) -> String {
    format!("{}({});", a.keyword, join_conds(&a.conds))
}

/// Pretty-prints a program in the accepted grammar. Parsing the output
/// yields a structurally equal program.
pub fn emit_source(p: &ProgramIR) -> String {
    let mut out = String::new();
    for inc in &p.includes {
        out.push_str(inc);
        out.push('\n');
    }
    let ind = if p.wrapped_main { "    " } else { "" };
    if p.wrapped_main {
        out.push_str("int main() {\n");
    }
    let mut line = |depth: usize, text: &str| {
        out.push_str(ind);
        for _ in 0..depth {
            out.push_str("    ");
        }
        out.push_str(text);
        out.push('\n');
    };
    for s in &p.prelude {
        match s {
            PreludeStmt::Decl(g) => line(0, &decl_line(g)),
            PreludeStmt::Assume(a) => line(0, &assume_line(a)),
        }
    }
    if let Some(lp) = &p.lp {
        let mut guard = lp.guard.clone();
        if let Some(f) = &lp.nondet_continue {
            guard.push(Expr::Nondet(f.clone()));
        }
        let cond = if guard.is_empty() { "1".to_string() } else { join_conds(&guard) };
        line(0, &format!("while ({cond}) {{"));
        for s in &lp.body {
            match s {
                BodyStmt::Update(u) => line(1, &format!("{} {} {};", u.target, u.op.symbol(), u.rhs)),
                BodyStmt::Assume(a) => line(1, &assume_line(a)),
            }
        }
        line(0, "}");
    }
    for a in &p.asserts {
        line(0, &format!("{}({});", a.keyword, a.cond));
    }
    if let Some(r) = p.ret {
        line(0, &format!("return {r};"));
    }
    if p.wrapped_main {
        out.push_str("}\n");
    }
    out
}
