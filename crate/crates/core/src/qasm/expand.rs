use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use crate::error::{Error, Result};
use crate::ir::{GateOp, IrOp, QubitCircuit};
use crate::runtime::NativeSet;
use crate::span::{Diagnostic, SourceSpan};

const MAX_DEPTH: usize = 256;

/// Expands every gate call of `program` down to `natives`.
pub fn expand(program: &QasmProgram, natives: &NativeSet) -> Result<QubitCircuit> {
    check_acyclic(&program.gatedefs)?;
    let mut out = QubitCircuit::new(program.num_qubits(), program.num_clbits());
    out.cregs = program.cregs.clone();
    let ex = Expander { program, natives };
    for st in &program.body {
        ex.statement(st, &mut out.ops)?;
    }
    Ok(out)
}

/// Depth-first search over the call graph of gate definitions.
fn check_acyclic(defs: &BTreeMap<String, GateDef>) -> Result<()> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit(
        name: &str,
        defs: &BTreeMap<String, GateDef>,
        marks: &mut BTreeMap<String, Mark>,
        path: &mut Vec<String>,
    ) -> Result<()> {
        match marks.get(name) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => {
                let start = path.iter().position(|p| p == name).unwrap_or(0);
                let mut cycle = path[start..].to_vec();
                cycle.push(name.to_string());
                return Err(Error::RecursiveGate(cycle.join(" -> ")));
            }
            None => {}
        }
        let Some(def) = defs.get(name) else { return Ok(()) };
        marks.insert(name.to_string(), Mark::Active);
        path.push(name.to_string());
        for call in def.body.iter().flatten() {
            if call.name != "barrier" {
                visit(&call.name, defs, marks, path)?;
            }
        }
        path.pop();
        marks.insert(name.to_string(), Mark::Done);
        Ok(())
    }
    let mut marks = BTreeMap::new();
    for name in defs.keys() {
        visit(name, defs, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

struct Expander<'a> {
    program: &'a QasmProgram,
    natives: &'a NativeSet,
}

fn at(span: &SourceSpan, err: Error) -> Error {
    match err {
        Error::Source(d) => Error::Source(d),
        other => Error::Source(Diagnostic::new(span.clone(), other.to_string())),
    }
}

impl Expander<'_> {
    fn resolve(&self, op: &Operand, k: usize, quantum: bool) -> usize {
        let (offset, _) = if quantum {
            self.program.qreg(&op.reg)
        } else {
            self.program.creg(&op.reg)
        }
        .expect("operands are checked by the parser");
        offset + op.index.unwrap_or(k)
    }

    fn width(&self, ops: &[&Operand], quantum: bool) -> usize {
        ops.iter()
            .filter(|o| o.index.is_none())
            .map(|o| {
                if quantum {
                    self.program.qreg(&o.reg)
                } else {
                    self.program.creg(&o.reg)
                }
                .map_or(1, |r| r.1)
            })
            .max()
            .unwrap_or(1)
    }

    fn statement(&self, st: &Statement, out: &mut Vec<IrOp>) -> Result<()> {
        match st {
            Statement::Gate {
                name,
                params,
                args,
                span,
            } => {
                let values = params
                    .iter()
                    .map(|e| eval(e, &BTreeMap::new(), name, span))
                    .collect::<Result<Vec<f64>>>()?;
                let refs: Vec<&Operand> = args.iter().collect();
                for k in 0..self.width(&refs, true) {
                    let qubits: Vec<usize> = args.iter().map(|a| self.resolve(a, k, true)).collect();
                    self.call(name, &values, &qubits, span, out, 0)?;
                }
            }
            Statement::Measure { qubit, clbit, .. } => {
                for k in 0..self.width(&[qubit], true) {
                    out.push(IrOp::Measure {
                        qubit: self.resolve(qubit, k, true),
                        clbit: self.resolve(clbit, k, false),
                    });
                }
            }
            Statement::Reset { arg, span } => {
                for k in 0..self.width(&[arg], true) {
                    out.push(IrOp::Reset {
                        qubit: self.resolve(arg, k, true),
                        span: span.clone(),
                    });
                }
            }
            Statement::Barrier { args, .. } => {
                let mut qubits = Vec::new();
                for a in args {
                    for k in 0..self.width(&[a], true) {
                        let q = self.resolve(a, k, true);
                        if !qubits.contains(&q) {
                            qubits.push(q);
                        }
                    }
                }
                out.push(IrOp::Barrier { qubits });
            }
            Statement::If {
                creg,
                value,
                body,
                span,
            } => {
                let mut inner = Vec::new();
                self.statement(body, &mut inner)?;
                for op in inner {
                    out.push(IrOp::Conditional {
                        creg: creg.clone(),
                        value: *value,
                        ops: vec![op],
                        span: span.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    fn call(
        &self,
        name: &str,
        params: &[f64],
        qubits: &[usize],
        span: &SourceSpan,
        out: &mut Vec<IrOp>,
        depth: usize,
    ) -> Result<()> {
        if depth > MAX_DEPTH {
            return Err(at(span, Error::RecursiveGate(name.to_string())));
        }
        if name == "barrier" {
            out.push(IrOp::Barrier {
                qubits: qubits.to_vec(),
            });
            return Ok(());
        }
        let arity = |expected_p: usize, expected_q: usize| -> Result<()> {
            if params.len() != expected_p {
                return Err(at(
                    span,
                    Error::Arity {
                        name: name.into(),
                        what: "parameters",
                        expected: expected_p,
                        got: params.len(),
                    },
                ));
            }
            if qubits.len() != expected_q {
                return Err(at(
                    span,
                    Error::Arity {
                        name: name.into(),
                        what: "qubits",
                        expected: expected_q,
                        got: qubits.len(),
                    },
                ));
            }
            Ok(())
        };
        match self.program.gatedefs.get(name) {
            Some(def) if !def.is_opaque() => {
                arity(def.params.len(), def.qubits.len())?;
                let env: BTreeMap<&str, f64> = def
                    .params
                    .iter()
                    .map(String::as_str)
                    .zip(params.iter().copied())
                    .collect();
                let formal: BTreeMap<&str, usize> = def
                    .qubits
                    .iter()
                    .map(String::as_str)
                    .zip(qubits.iter().copied())
                    .collect();
                for inner in def.body.as_ref().expect("non-opaque") {
                    let values = inner
                        .params
                        .iter()
                        .map(|e| eval(e, &env, &inner.name, &inner.span))
                        .collect::<Result<Vec<f64>>>()?;
                    let args: Vec<usize> = inner.args.iter().map(|a| formal[a.as_str()]).collect();
                    self.call(&inner.name, &values, &args, span, out, depth + 1)?;
                }
                Ok(())
            }
            _ => {
                let Some(native) = self.natives.get(name) else {
                    return Err(at(span, Error::UnknownGate(name.to_string())));
                };
                arity(native.params, native.qubits)?;
                out.push(IrOp::Gate(GateOp::new(name, params.to_vec(), qubits.to_vec())));
                Ok(())
            }
        }
    }
}

fn eval(e: &Expr, env: &BTreeMap<&str, f64>, gate: &str, span: &SourceSpan) -> Result<f64> {
    let v = e
        .eval(&|name| env.get(name).copied())
        .map_err(|m| Error::Source(Diagnostic::new(span.clone(), m)))?;
    if !v.is_finite() {
        return Err(at(span, Error::NonNumeric(gate.to_string())));
    }
    Ok(v)
}

/// Qubits touched by the gate statements of a program body, flattened.
pub fn touched_qubits(program: &QasmProgram) -> BTreeSet<usize> {
    let mut set = BTreeSet::new();
    for st in &program.body {
        if let Statement::Gate { args, .. } = st {
            for a in args {
                let (offset, size) = program.qreg(&a.reg).expect("checked");
                match a.index {
                    Some(i) => {
                        set.insert(offset + i);
                    }
                    None => set.extend(offset..offset + size),
                }
            }
        }
    }
    set
}
