use std::collections::BTreeMap;

use super::ast::*;
use crate::error::{Error, Result};
use crate::ir::GateOp;

/// Tolerance of `==` and `!=` between numbers.
pub const EQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Num(f64),
    Bool(bool),
}

/// Result of matching a rule: parameter values, qubit variables and the
/// matched op positions (ascending).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatchBinding {
    pub params: BTreeMap<String, f64>,
    pub qubits: BTreeMap<String, usize>,
    /// Qubits of the implicit shared tuple, when the pattern uses one.
    pub implicit: Option<Vec<usize>>,
    pub positions: Vec<usize>,
}

struct Frame<'a> {
    rule: &'a RewriteRule,
    vars: BTreeMap<String, Value>,
}

impl Frame<'_> {
    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::RuleEval {
            rule: self.rule.name.clone(),
            message: msg.into(),
        }
    }

    fn num(&self, e: &Expr) -> Result<f64> {
        match self.eval(e)? {
            Value::Num(x) => Ok(x),
            Value::Bool(_) => Err(self.fail("expected a number, found a boolean")),
        }
    }

    fn boolean(&self, e: &Expr) -> Result<bool> {
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            Value::Num(_) => Err(self.fail("expected a boolean, found a number")),
        }
    }

    fn eval(&self, e: &Expr) -> Result<Value> {
        Ok(match e {
            Expr::Num(x) => Value::Num(*x),
            Expr::Var(v) => *self
                .vars
                .get(v)
                .ok_or_else(|| self.fail(format!("variable '{v}' is not set")))?,
            Expr::Neg(inner) => Value::Num(-self.num(inner)?),
            Expr::Bin(Op::And, a, b) => Value::Bool(self.boolean(a)? && self.boolean(b)?),
            Expr::Bin(Op::Or, a, b) => Value::Bool(self.boolean(a)? || self.boolean(b)?),
            Expr::Bin(op, a, b) => {
                let (x, y) = (self.num(a)?, self.num(b)?);
                match op {
                    Op::Add => Value::Num(x + y),
                    Op::Sub => Value::Num(x - y),
                    Op::Mul => Value::Num(x * y),
                    Op::Div => {
                        if y == 0.0 {
                            return Err(self.fail("division by zero"));
                        }
                        Value::Num(x / y)
                    }
                    Op::Eq => Value::Bool((x - y).abs() <= EQ_TOL),
                    Op::Ne => Value::Bool((x - y).abs() > EQ_TOL),
                    Op::Lt => Value::Bool(x < y),
                    Op::Gt => Value::Bool(x > y),
                    Op::Le => Value::Bool(x <= y),
                    Op::Ge => Value::Bool(x >= y),
                    Op::And | Op::Or => unreachable!(),
                }
            }
            Expr::Call(f, args) => {
                let a: Vec<f64> = args.iter().map(|x| self.num(x)).collect::<Result<_>>()?;
                let v = match (f.as_str(), a.as_slice()) {
                    ("sin", [x]) => x.sin(),
                    ("cos", [x]) => x.cos(),
                    ("tan", [x]) => x.tan(),
                    ("atan2", [y, x]) => y.atan2(*x),
                    ("sqrt", [x]) => {
                        if *x < 0.0 {
                            return Err(self.fail("sqrt of a negative number"));
                        }
                        x.sqrt()
                    }
                    ("abs", [x]) => x.abs(),
                    ("floor", [x]) => x.floor(),
                    ("mod", [x, y]) => {
                        if *y == 0.0 {
                            return Err(self.fail("mod by zero"));
                        }
                        x - y * (x / y).floor()
                    }
                    _ => return Err(self.fail(format!("bad call to '{f}'"))),
                };
                Value::Num(v)
            }
        })
    }
}

enum Flow {
    Continue,
    Return(Vec<GateOp>),
}

/// Runs the rule body. `Ok(None)` means the block ended without `return`.
pub fn eval_block(rule: &RewriteRule, binding: &MatchBinding) -> Result<Option<Vec<GateOp>>> {
    let mut frame = Frame {
        rule,
        vars: binding
            .params
            .iter()
            .map(|(k, v)| (k.clone(), Value::Num(*v)))
            .collect(),
    };
    match exec(&mut frame, &rule.block, binding)? {
        Flow::Return(ops) => Ok(Some(ops)),
        Flow::Continue => Ok(None),
    }
}

fn exec(frame: &mut Frame, stmts: &[Stmt], binding: &MatchBinding) -> Result<Flow> {
    for s in stmts {
        match s {
            Stmt::Assign { name, value, .. } => {
                let v = frame.eval(value)?;
                frame.vars.insert(name.clone(), v);
            }
            Stmt::If {
                cond, then, otherwise, ..
            } => {
                let flow = if frame.boolean(cond)? {
                    exec(frame, then, binding)?
                } else if let Some(o) = otherwise {
                    exec(frame, o, binding)?
                } else {
                    Flow::Continue
                };
                if let Flow::Return(ops) = flow {
                    return Ok(Flow::Return(ops));
                }
            }
            Stmt::Return { calls, .. } => {
                let mut ops = Vec::with_capacity(calls.len());
                for c in calls {
                    let params = c.params.iter().map(|e| frame.num(e)).collect::<Result<Vec<f64>>>()?;
                    if let Some(bad) = params.iter().find(|p| !p.is_finite()) {
                        return Err(frame.fail(format!("'{}' parameter evaluates to {bad}", c.gate)));
                    }
                    let qubits = match &c.qubits {
                        Some(qs) => qs
                            .iter()
                            .map(|q| {
                                binding
                                    .qubits
                                    .get(q)
                                    .copied()
                                    .ok_or_else(|| frame.fail(format!("qubit '{q}' unbound")))
                            })
                            .collect::<Result<Vec<usize>>>()?,
                        None => binding
                            .implicit
                            .clone()
                            .ok_or_else(|| frame.fail("no implicit qubits bound"))?,
                    };
                    ops.push(GateOp::new(c.gate.clone(), params, qubits));
                }
                return Ok(Flow::Return(ops));
            }
        }
    }
    Ok(Flow::Continue)
}
