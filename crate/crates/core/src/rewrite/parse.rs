use std::collections::BTreeSet;

use super::ast::*;
use crate::qasm::lexer::{tokenize, Cursor, Tok};
use crate::span::{Diagnostic, SourceSpan};

/// Built-in functions and their arities.
pub const FUNCTIONS: &[(&str, usize)] = &[
    ("sin", 1),
    ("cos", 1),
    ("tan", 1),
    ("atan2", 2),
    ("sqrt", 1),
    ("abs", 1),
    ("floor", 1),
    ("mod", 2),
];

pub fn parse_rules(text: &str, file: &str) -> Result<RuleScript, Diagnostic> {
    let mut cur = Cursor::new(tokenize(text, file)?);
    let mut rules = Vec::new();
    while !cur.at_eof() {
        rules.push(rule(&mut cur, text)?);
    }
    Ok(RuleScript { rules })
}

fn rule(cur: &mut Cursor, text: &str) -> Result<RewriteRule, Diagnostic> {
    let span = cur.span();
    let mut pattern = vec![term(cur)?];
    while cur.eat_sym(".") {
        pattern.push(term(cur)?);
    }
    let arrow = cur.span();
    cur.expect_sym("=>")?;
    let header = source_between(text, &span, &arrow);
    let name = format!("{} ({})", header, span);

    let mut scope = Scope::default();
    for t in &pattern {
        for p in &t.params {
            if scope.vars.contains(p) {
                return Err(Diagnostic::new(
                    t.span.clone(),
                    format!("parameter variable '{p}' bound twice"),
                ));
            }
            scope.vars.insert(p.clone());
        }
        if let Some(qs) = &t.qubits {
            scope.qubits.extend(qs.iter().cloned());
        }
    }
    scope.implicit = pattern.iter().any(|t| t.qubits.is_none());
    let block = block(cur, &mut scope)?;
    Ok(RewriteRule {
        name,
        pattern,
        block,
        span,
    })
}

fn source_between(text: &str, from: &SourceSpan, to: &SourceSpan) -> String {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = String::new();
    for line in from.line..=to.line {
        let Some(l) = lines.get(line - 1) else { break };
        let chars: Vec<char> = l.chars().collect();
        let start = if line == from.line { from.column - 1 } else { 0 };
        let end = if line == to.line {
            (to.column - 1).min(chars.len())
        } else {
            chars.len()
        };
        if start < end {
            out.push_str(&chars[start..end].iter().collect::<String>());
            out.push(' ');
        }
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn term(cur: &mut Cursor) -> Result<PatternTerm, Diagnostic> {
    let (gate, span) = cur.expect_ident()?;
    let mut params = Vec::new();
    if cur.eat_sym("(") {
        if !cur.is_sym(")") {
            loop {
                params.push(cur.expect_ident()?.0);
                if !cur.eat_sym(",") {
                    break;
                }
            }
        }
        cur.expect_sym(")")?;
    }
    let qubits = qubit_list(cur)?;
    if let Some(qs) = &qubits {
        let unique: BTreeSet<&String> = qs.iter().collect();
        if unique.len() != qs.len() {
            return Err(Diagnostic::new(span, format!("repeated qubit variable in '{gate}'")));
        }
    }
    Ok(PatternTerm {
        gate,
        params,
        qubits,
        span,
    })
}

fn qubit_list(cur: &mut Cursor) -> Result<Option<Vec<String>>, Diagnostic> {
    if !matches!(cur.peek(), Tok::Ident(_)) {
        return Ok(None);
    }
    let mut qs = vec![cur.expect_ident()?.0];
    while cur.eat_sym(",") {
        qs.push(cur.expect_ident()?.0);
    }
    Ok(Some(qs))
}

#[derive(Default, Clone)]
struct Scope {
    vars: BTreeSet<String>,
    qubits: BTreeSet<String>,
    implicit: bool,
}

fn block(cur: &mut Cursor, scope: &mut Scope) -> Result<Vec<Stmt>, Diagnostic> {
    let open = cur.span();
    cur.expect_sym("{")?;
    let mut out = Vec::new();
    loop {
        if cur.eat_sym("}") {
            return Ok(out);
        }
        if cur.at_eof() {
            return Err(Diagnostic::new(open, "unterminated block"));
        }
        out.push(stmt(cur, scope)?);
    }
}

fn stmt(cur: &mut Cursor, scope: &mut Scope) -> Result<Stmt, Diagnostic> {
    let span = cur.span();
    if cur.is_ident("if") {
        cur.bump();
        return if_stmt(cur, scope, span);
    }
    if cur.is_ident("return") {
        cur.bump();
        let calls = composition(cur, scope)?;
        cur.expect_sym(";")?;
        return Ok(Stmt::Return { calls, span });
    }
    let (name, _) = cur.expect_ident()?;
    cur.expect_sym("=")?;
    let value = expr(cur, scope)?;
    cur.expect_sym(";")?;
    scope.vars.insert(name.clone());
    Ok(Stmt::Assign { name, value, span })
}

fn if_stmt(cur: &mut Cursor, scope: &mut Scope, span: SourceSpan) -> Result<Stmt, Diagnostic> {
    let cond = expr(cur, scope)?;
    let mut then_scope = scope.clone();
    let then = block(cur, &mut then_scope)?;
    let mut otherwise = None;
    if cur.is_ident("else") {
        cur.bump();
        let mut else_scope = scope.clone();
        let body = if cur.is_ident("if") {
            let s = cur.span();
            cur.bump();
            vec![if_stmt(cur, &mut else_scope, s)?]
        } else {
            block(cur, &mut else_scope)?
        };
        // Only variables assigned on both paths stay visible.
        scope.vars = then_scope.vars.intersection(&else_scope.vars).cloned().collect();
        otherwise = Some(body);
    }
    Ok(Stmt::If {
        cond,
        then,
        otherwise,
        span,
    })
}

fn composition(cur: &mut Cursor, scope: &Scope) -> Result<Vec<CallTerm>, Diagnostic> {
    if cur.is_ident("id") && matches!(cur.peek_at(1), Tok::Sym(";")) {
        cur.bump();
        return Ok(Vec::new());
    }
    let mut calls = vec![call_term(cur, scope)?];
    while cur.eat_sym(".") {
        calls.push(call_term(cur, scope)?);
    }
    Ok(calls)
}

fn call_term(cur: &mut Cursor, scope: &Scope) -> Result<CallTerm, Diagnostic> {
    let (gate, span) = cur.expect_ident()?;
    let mut params = Vec::new();
    if cur.eat_sym("(") {
        if !cur.is_sym(")") {
            loop {
                params.push(expr(cur, scope)?);
                if !cur.eat_sym(",") {
                    break;
                }
            }
        }
        cur.expect_sym(")")?;
    }
    let qubits = qubit_list(cur)?;
    match &qubits {
        Some(qs) => {
            for q in qs {
                if !scope.qubits.contains(q) {
                    return Err(Diagnostic::new(span, format!("unbound qubit variable '{q}'")));
                }
            }
        }
        None if !scope.implicit => {
            return Err(Diagnostic::new(
                span,
                format!("'{gate}' needs explicit qubits: the pattern binds none implicitly"),
            ))
        }
        None => {}
    }
    Ok(CallTerm {
        gate,
        params,
        qubits,
        span,
    })
}

fn expr(cur: &mut Cursor, scope: &Scope) -> Result<Expr, Diagnostic> {
    binary(cur, scope, 0)
}

const LEVELS: &[&[(&str, Op)]] = &[
    &[("||", Op::Or)],
    &[("&&", Op::And)],
    &[
        ("==", Op::Eq),
        ("!=", Op::Ne),
        ("<=", Op::Le),
        (">=", Op::Ge),
        ("<", Op::Lt),
        (">", Op::Gt),
    ],
    &[("+", Op::Add), ("-", Op::Sub)],
    &[("*", Op::Mul), ("/", Op::Div)],
];

fn binary(cur: &mut Cursor, scope: &Scope, level: usize) -> Result<Expr, Diagnostic> {
    if level == LEVELS.len() {
        return unary(cur, scope);
    }
    let mut lhs = binary(cur, scope, level + 1)?;
    'outer: loop {
        for (sym, op) in LEVELS[level] {
            if cur.eat_sym(sym) {
                let rhs = binary(cur, scope, level + 1)?;
                lhs = Expr::Bin(*op, Box::new(lhs), Box::new(rhs));
                continue 'outer;
            }
        }
        return Ok(lhs);
    }
}

fn unary(cur: &mut Cursor, scope: &Scope) -> Result<Expr, Diagnostic> {
    if cur.eat_sym("-") {
        return Ok(Expr::Neg(Box::new(unary(cur, scope)?)));
    }
    let t = cur.bump();
    match t.tok {
        Tok::Real(x) => Ok(Expr::Num(x)),
        Tok::Int(x) => Ok(Expr::Num(x as f64)),
        Tok::Sym("(") => {
            let e = expr(cur, scope)?;
            cur.expect_sym(")")?;
            Ok(e)
        }
        Tok::Ident(name) if cur.is_sym("(") => {
            let Some((_, arity)) = FUNCTIONS.iter().find(|(f, _)| *f == name) else {
                return Err(Diagnostic::new(t.span, format!("unknown function '{name}'")));
            };
            cur.bump();
            let mut args = Vec::new();
            if !cur.is_sym(")") {
                loop {
                    args.push(expr(cur, scope)?);
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            cur.expect_sym(")")?;
            if args.len() != *arity {
                return Err(Diagnostic::new(
                    t.span,
                    format!("'{name}' takes {arity} argument(s), got {}", args.len()),
                ));
            }
            Ok(Expr::Call(name, args))
        }
        Tok::Ident(name) if name == "pi" => Ok(Expr::Num(std::f64::consts::PI)),
        Tok::Ident(name) => {
            if !scope.vars.contains(&name) {
                return Err(Diagnostic::new(t.span, format!("unbound variable '{name}'")));
            }
            Ok(Expr::Var(name))
        }
        _ => Err(Diagnostic::new(t.span, "expected expression")),
    }
}
