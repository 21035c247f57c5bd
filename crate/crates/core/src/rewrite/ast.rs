use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternTerm {
    pub gate: String,
    pub params: Vec<String>,
    /// `None` means the rule's implicit shared qubit tuple.
    pub qubits: Option<Vec<String>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CallTerm {
    pub gate: String,
    pub params: Vec<Expr>,
    pub qubits: Option<Vec<String>>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Assign {
        name: String,
        value: Expr,
        span: SourceSpan,
    },
    If {
        cond: Expr,
        then: Vec<Stmt>,
        otherwise: Option<Vec<Stmt>>,
        span: SourceSpan,
    },
    /// An empty list is `return id`.
    Return { calls: Vec<CallTerm>, span: SourceSpan },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    /// Pattern text with its location, used in diagnostics.
    pub name: String,
    pub pattern: Vec<PatternTerm>,
    pub block: Vec<Stmt>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RuleScript {
    pub rules: Vec<RewriteRule>,
}

impl RewriteRule {
    /// Every gate name used in the pattern or in a return statement, with
    /// the number of parameters and (when explicit) qubits at that use.
    pub fn gate_uses(&self) -> Vec<(String, usize, Option<usize>, SourceSpan)> {
        let mut out: Vec<_> = self
            .pattern
            .iter()
            .map(|t| {
                (
                    t.gate.clone(),
                    t.params.len(),
                    t.qubits.as_ref().map(Vec::len),
                    t.span.clone(),
                )
            })
            .collect();
        fn walk(stmts: &[Stmt], out: &mut Vec<(String, usize, Option<usize>, SourceSpan)>) {
            for s in stmts {
                match s {
                    Stmt::Assign { .. } => {}
                    Stmt::If { then, otherwise, .. } => {
                        walk(then, out);
                        if let Some(o) = otherwise {
                            walk(o, out);
                        }
                    }
                    Stmt::Return { calls, .. } => {
                        for c in calls {
                            out.push((
                                c.gate.clone(),
                                c.params.len(),
                                c.qubits.as_ref().map(Vec::len),
                                c.span.clone(),
                            ));
                        }
                    }
                }
            }
        }
        walk(&self.block, &mut out);
        out
    }

    pub fn has_implicit_terms(&self) -> bool {
        self.pattern.iter().any(|t| t.qubits.is_none())
    }
}
