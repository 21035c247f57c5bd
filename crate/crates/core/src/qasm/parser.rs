use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{tokenize, Cursor, Tok};
use crate::span::{Diagnostic, SourceSpan};

/// Resolves an `include` file name to its source text.
pub type IncludeResolver<'a> = &'a dyn Fn(&str) -> Option<String>;

const FUNCTIONS: &[&str] = &["sin", "cos", "tan", "exp", "ln", "sqrt"];

/// Parses and checks a program. Gate names are not resolved here; that is
/// left to expansion so that cycles and unknown gates report uniformly.
pub fn parse_qasm(text: &str, file: &str, resolve: IncludeResolver) -> Result<QasmProgram, Diagnostic> {
    let mut program = QasmProgram::default();
    let mut p = Parser {
        cur: Cursor::new(tokenize(text, file)?),
        resolve,
        depth: 0,
    };
    p.program(&mut program, true)?;
    Ok(program)
}

struct Parser<'a> {
    cur: Cursor,
    resolve: IncludeResolver<'a>,
    depth: usize,
}

impl Parser<'_> {
    fn program(&mut self, prog: &mut QasmProgram, top: bool) -> Result<(), Diagnostic> {
        if self.cur.is_ident("OPENQASM") {
            let span = self.cur.bump().span;
            let version = match self.cur.bump().tok {
                Tok::Real(v) => v,
                Tok::Int(v) => v as f64,
                _ => return Err(Diagnostic::new(span, "expected version number after OPENQASM")),
            };
            if version != 2.0 {
                return Err(Diagnostic::new(span, format!("unsupported OpenQASM version {version}")));
            }
            self.cur.expect_sym(";")?;
            if top {
                prog.version = Some("2.0".into());
            }
        }
        while !self.cur.at_eof() {
            self.statement(prog)?;
        }
        Ok(())
    }

    fn statement(&mut self, prog: &mut QasmProgram) -> Result<(), Diagnostic> {
        let span = self.cur.span();
        let Tok::Ident(word) = self.cur.peek().clone() else {
            return Err(self.cur.unexpected("statement"));
        };
        match word.as_str() {
            "include" => {
                self.cur.bump();
                let name = match self.cur.bump().tok {
                    Tok::Str(s) => s,
                    _ => return Err(Diagnostic::new(span, "expected file name after include")),
                };
                self.cur.expect_sym(";")?;
                self.include(prog, &name, span)
            }
            "qreg" | "creg" => {
                self.cur.bump();
                let (name, nspan) = self.cur.expect_ident()?;
                self.cur.expect_sym("[")?;
                let (size, _) = self.cur.expect_int()?;
                self.cur.expect_sym("]")?;
                self.cur.expect_sym(";")?;
                if prog.qreg(&name).is_some() || prog.creg(&name).is_some() {
                    return Err(Diagnostic::new(nspan, format!("register '{name}' already declared")));
                }
                if size == 0 {
                    return Err(Diagnostic::new(nspan, format!("register '{name}' has size 0")));
                }
                let regs = if word == "qreg" {
                    &mut prog.qregs
                } else {
                    &mut prog.cregs
                };
                regs.push((name, size as usize));
                Ok(())
            }
            "gate" | "opaque" => {
                let def = self.gatedef()?;
                if prog.gatedefs.contains_key(&def.name) {
                    return Err(Diagnostic::new(
                        def.span,
                        format!("gate '{}' already defined", def.name),
                    ));
                }
                prog.gatedefs.insert(def.name.clone(), def);
                Ok(())
            }
            _ => {
                let st = self.qop(prog)?;
                prog.body.push(st);
                Ok(())
            }
        }
    }

    fn include(&mut self, prog: &mut QasmProgram, name: &str, span: SourceSpan) -> Result<(), Diagnostic> {
        if self.depth > 16 {
            return Err(Diagnostic::new(span, "include nesting too deep"));
        }
        let text = (self.resolve)(name)
            .ok_or_else(|| Diagnostic::new(span.clone(), format!("cannot resolve include \"{name}\"")))?;
        prog.includes.push(name.to_string());
        let mut inner = Parser {
            cur: Cursor::new(tokenize(&text, name)?),
            resolve: self.resolve,
            depth: self.depth + 1,
        };
        inner.program(prog, false)
    }

    fn gatedef(&mut self) -> Result<GateDef, Diagnostic> {
        let kw = self.cur.bump();
        let opaque = kw.tok == Tok::Ident("opaque".into());
        let (name, span) = self.cur.expect_ident()?;
        let mut params = Vec::new();
        if self.cur.eat_sym("(") {
            if !self.cur.is_sym(")") {
                loop {
                    params.push(self.cur.expect_ident()?.0);
                    if !self.cur.eat_sym(",") {
                        break;
                    }
                }
            }
            self.cur.expect_sym(")")?;
        }
        let mut qubits = Vec::new();
        loop {
            let (q, qspan) = self.cur.expect_ident()?;
            if qubits.contains(&q) || params.contains(&q) {
                return Err(Diagnostic::new(
                    qspan,
                    format!("duplicate argument '{q}' in gate '{name}'"),
                ));
            }
            qubits.push(q);
            if !self.cur.eat_sym(",") {
                break;
            }
        }
        if opaque {
            self.cur.expect_sym(";")?;
            return Ok(GateDef {
                name,
                params,
                qubits,
                body: None,
                span,
            });
        }
        self.cur.expect_sym("{")?;
        let mut body = Vec::new();
        while !self.cur.eat_sym("}") {
            if self.cur.at_eof() {
                return Err(self.cur.error(format!("unterminated body of gate '{name}'")));
            }
            let (callee, cspan) = self.cur.expect_ident()?;
            let mut cparams = Vec::new();
            if callee != "barrier" && self.cur.eat_sym("(") {
                cparams = self.expr_list(&params)?;
            }
            let mut args = Vec::new();
            loop {
                let (a, aspan) = self.cur.expect_ident()?;
                if !qubits.contains(&a) {
                    return Err(Diagnostic::new(
                        aspan,
                        format!("'{a}' is not an argument of gate '{name}'"),
                    ));
                }
                if args.contains(&a) {
                    return Err(Diagnostic::new(aspan, format!("qubit '{a}' used twice in one call")));
                }
                args.push(a);
                if !self.cur.eat_sym(",") {
                    break;
                }
            }
            self.cur.expect_sym(";")?;
            body.push(GateCall {
                name: callee,
                params: cparams,
                args,
                span: cspan,
            });
        }
        Ok(GateDef {
            name,
            params,
            qubits,
            body: Some(body),
            span,
        })
    }

    /// Quantum operation at top level: gate call, measure, reset, barrier, if.
    fn qop(&mut self, prog: &QasmProgram) -> Result<Statement, Diagnostic> {
        let span = self.cur.span();
        let (word, _) = self.cur.expect_ident()?;
        match word.as_str() {
            "measure" => {
                let qubit = self.operand(prog, true)?;
                self.cur.expect_sym("->")?;
                let clbit = self.operand(prog, false)?;
                self.cur.expect_sym(";")?;
                let qs = operand_size(prog, &qubit, true);
                let cs = operand_size(prog, &clbit, false);
                if qs != cs {
                    return Err(Diagnostic::new(span, "measure operands have different sizes"));
                }
                Ok(Statement::Measure { qubit, clbit, span })
            }
            "reset" => {
                let arg = self.operand(prog, true)?;
                self.cur.expect_sym(";")?;
                Ok(Statement::Reset { arg, span })
            }
            "barrier" => {
                let args = self.operands(prog)?;
                self.cur.expect_sym(";")?;
                Ok(Statement::Barrier { args, span })
            }
            "if" => {
                self.cur.expect_sym("(")?;
                let (creg, cspan) = self.cur.expect_ident()?;
                if prog.creg(&creg).is_none() {
                    return Err(Diagnostic::new(
                        cspan,
                        format!("undeclared classical register '{creg}'"),
                    ));
                }
                self.cur.expect_sym("==")?;
                let (value, _) = self.cur.expect_int()?;
                self.cur.expect_sym(")")?;
                let body = self.qop(prog)?;
                if matches!(body, Statement::If { .. } | Statement::Barrier { .. }) {
                    return Err(Diagnostic::new(
                        body.span().clone(),
                        "only a gate, measure or reset may be conditioned",
                    ));
                }
                Ok(Statement::If {
                    creg,
                    value,
                    body: Box::new(body),
                    span,
                })
            }
            _ => {
                let mut params = Vec::new();
                if self.cur.eat_sym("(") {
                    params = self.expr_list(&[])?;
                }
                let args = self.operands(prog)?;
                self.cur.expect_sym(";")?;
                let mut sizes = args
                    .iter()
                    .filter(|a| a.index.is_none())
                    .map(|a| operand_size(prog, a, true));
                if let Some(first) = sizes.next() {
                    if sizes.any(|s| s != first) {
                        return Err(Diagnostic::new(span, "register operands have different sizes"));
                    }
                }
                let mut seen = BTreeSet::new();
                for a in &args {
                    let key = (a.reg.clone(), a.index);
                    let clash = seen.iter().any(|(r, i): &(String, Option<usize>)| {
                        r == &a.reg && (i.is_none() || a.index.is_none() || *i == a.index)
                    });
                    if clash {
                        return Err(Diagnostic::new(a.span.clone(), "duplicate qubit in gate operands"));
                    }
                    seen.insert(key);
                }
                Ok(Statement::Gate {
                    name: word,
                    params,
                    args,
                    span,
                })
            }
        }
    }

    fn operands(&mut self, prog: &QasmProgram) -> Result<Vec<Operand>, Diagnostic> {
        let mut args = vec![self.operand(prog, true)?];
        while self.cur.eat_sym(",") {
            args.push(self.operand(prog, true)?);
        }
        Ok(args)
    }

    fn operand(&mut self, prog: &QasmProgram, quantum: bool) -> Result<Operand, Diagnostic> {
        let (reg, span) = self.cur.expect_ident()?;
        let size = if quantum { prog.qreg(&reg) } else { prog.creg(&reg) };
        let Some((_, size)) = size else {
            let kind = if quantum { "quantum" } else { "classical" };
            return Err(Diagnostic::new(span, format!("undeclared {kind} register '{reg}'")));
        };
        let mut index = None;
        if self.cur.eat_sym("[") {
            let (i, ispan) = self.cur.expect_int()?;
            self.cur.expect_sym("]")?;
            if i as usize >= size {
                return Err(Diagnostic::new(
                    ispan,
                    format!("index out of range: {reg}[{i}] (size {size})"),
                ));
            }
            index = Some(i as usize);
        }
        Ok(Operand { reg, index, span })
    }

    fn expr_list(&mut self, scope: &[String]) -> Result<Vec<Expr>, Diagnostic> {
        let mut out = Vec::new();
        if !self.cur.is_sym(")") {
            loop {
                out.push(self.expr(scope)?);
                if !self.cur.eat_sym(",") {
                    break;
                }
            }
        }
        self.cur.expect_sym(")")?;
        Ok(out)
    }

    fn expr(&mut self, scope: &[String]) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term(scope)?;
        loop {
            let op = if self.cur.eat_sym("+") {
                BinOp::Add
            } else if self.cur.eat_sym("-") {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term(scope)?));
        }
    }

    fn term(&mut self, scope: &[String]) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary(scope)?;
        loop {
            let op = if self.cur.eat_sym("*") {
                BinOp::Mul
            } else if self.cur.eat_sym("/") {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary(scope)?));
        }
    }

    fn unary(&mut self, scope: &[String]) -> Result<Expr, Diagnostic> {
        if self.cur.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary(scope)?)));
        }
        if self.cur.eat_sym("+") {
            return self.unary(scope);
        }
        let base = self.primary(scope)?;
        if self.cur.eat_sym("^") {
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary(scope)?)));
        }
        Ok(base)
    }

    fn primary(&mut self, scope: &[String]) -> Result<Expr, Diagnostic> {
        let t = self.cur.bump();
        match t.tok {
            Tok::Real(x) => Ok(Expr::Num(x)),
            Tok::Int(x) => Ok(Expr::Num(x as f64)),
            Tok::Sym("(") => {
                let e = self.expr(scope)?;
                self.cur.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(name) if name == "pi" => Ok(Expr::Pi),
            Tok::Ident(name) if self.cur.is_sym("(") => {
                if !FUNCTIONS.contains(&name.as_str()) {
                    return Err(Diagnostic::new(t.span, format!("unknown function '{name}'")));
                }
                self.cur.bump();
                let arg = self.expr(scope)?;
                self.cur.expect_sym(")")?;
                Ok(Expr::Call(name, Box::new(arg)))
            }
            Tok::Ident(name) => {
                if !scope.contains(&name) {
                    return Err(Diagnostic::new(t.span, format!("unknown parameter '{name}'")));
                }
                Ok(Expr::Var(name))
            }
            _ => Err(Diagnostic::new(t.span, "expected expression")),
        }
    }
}

fn operand_size(prog: &QasmProgram, op: &Operand, quantum: bool) -> usize {
    if op.index.is_some() {
        return 1;
    }
    let reg = if quantum {
        prog.qreg(&op.reg)
    } else {
        prog.creg(&op.reg)
    };
    reg.map_or(0, |r| r.1)
}
