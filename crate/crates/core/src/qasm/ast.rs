use std::collections::BTreeMap;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Unevaluated parameter expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    Var(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Box<Expr>),
}

impl Expr {
    /// Evaluates with `lookup` resolving identifiers. Returns the name of the
    /// first unbound identifier on failure.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<f64>) -> Result<f64, String> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Pi => std::f64::consts::PI,
            Expr::Var(v) => lookup(v).ok_or_else(|| format!("unbound parameter '{v}'"))?,
            Expr::Neg(e) => -e.eval(lookup)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(lookup)?, b.eval(lookup)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => {
                let x = e.eval(lookup)?;
                match f.as_str() {
                    "sin" => x.sin(),
                    "cos" => x.cos(),
                    "tan" => x.tan(),
                    "exp" => x.exp(),
                    "ln" => x.ln(),
                    "sqrt" => x.sqrt(),
                    other => return Err(format!("unknown function '{other}'")),
                }
            }
        })
    }
}

/// Register operand: `q` (whole register) or `q[3]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operand {
    pub reg: String,
    pub index: Option<usize>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Gate {
        name: String,
        params: Vec<Expr>,
        args: Vec<Operand>,
        span: SourceSpan,
    },
    Measure {
        qubit: Operand,
        clbit: Operand,
        span: SourceSpan,
    },
    Barrier {
        args: Vec<Operand>,
        span: SourceSpan,
    },
    Reset {
        arg: Operand,
        span: SourceSpan,
    },
    If {
        creg: String,
        value: u64,
        body: Box<Statement>,
        span: SourceSpan,
    },
}

impl Statement {
    pub fn span(&self) -> &SourceSpan {
        match self {
            Statement::Gate { span, .. }
            | Statement::Measure { span, .. }
            | Statement::Barrier { span, .. }
            | Statement::Reset { span, .. }
            | Statement::If { span, .. } => span,
        }
    }
}

/// Call inside a gate body; operands are the definition's formal qubit names.
/// A `barrier` in a body is kept as a call named `barrier`.
#[derive(Debug, Clone, PartialEq)]
pub struct GateCall {
    pub name: String,
    pub params: Vec<Expr>,
    pub args: Vec<String>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateDef {
    pub name: String,
    pub params: Vec<String>,
    pub qubits: Vec<String>,
    /// `None` for `opaque` declarations.
    pub body: Option<Vec<GateCall>>,
    pub span: SourceSpan,
}

impl GateDef {
    pub fn is_opaque(&self) -> bool {
        self.body.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct QasmProgram {
    pub version: Option<String>,
    pub includes: Vec<String>,
    pub qregs: Vec<(String, usize)>,
    pub cregs: Vec<(String, usize)>,
    pub gatedefs: BTreeMap<String, GateDef>,
    pub body: Vec<Statement>,
}

impl QasmProgram {
    pub fn num_qubits(&self) -> usize {
        self.qregs.iter().map(|r| r.1).sum()
    }

    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|r| r.1).sum()
    }

    /// Offset of a register in the flattened index space, with its size.
    pub fn qreg(&self, name: &str) -> Option<(usize, usize)> {
        flat_offset(&self.qregs, name)
    }

    pub fn creg(&self, name: &str) -> Option<(usize, usize)> {
        flat_offset(&self.cregs, name)
    }
}

fn flat_offset(regs: &[(String, usize)], name: &str) -> Option<(usize, usize)> {
    let mut off = 0;
    for (n, size) in regs {
        if n == name {
            return Some((off, *size));
        }
        off += size;
    }
    None
}
