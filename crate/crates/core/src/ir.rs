//! The qubit-level intermediate representation shared by the frontend, the
//! rewrite engine and the lowering step.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::span::SourceSpan;

/// Application of a native gate to concrete qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub name: String,
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(name: impl Into<String>, params: Vec<f64>, qubits: Vec<usize>) -> Self {
        Self {
            name: name.into(),
            params,
            qubits,
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            f.write_char('(')?;
            for (k, p) in self.params.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p:?}")?;
            }
            f.write_char(')')?;
        }
        for (k, q) in self.qubits.iter().enumerate() {
            f.write_str(if k == 0 { " " } else { ", " })?;
            write!(f, "q[{q}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IrOp {
    Gate(GateOp),
    Barrier {
        qubits: Vec<usize>,
    },
    Measure {
        qubit: usize,
        clbit: usize,
    },
    /// Carried through so that targets without mid-circuit reset can reject it.
    Reset {
        qubit: usize,
        span: SourceSpan,
    },
    /// `if (creg == value) op;` with the body already expanded.
    Conditional {
        creg: String,
        value: u64,
        ops: Vec<IrOp>,
        span: SourceSpan,
    },
}

impl IrOp {
    /// Qubits the operation acts on, in operand order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            IrOp::Gate(g) => g.qubits.clone(),
            IrOp::Barrier { qubits } => qubits.clone(),
            IrOp::Measure { qubit, .. } | IrOp::Reset { qubit, .. } => vec![*qubit],
            IrOp::Conditional { ops, .. } => {
                let set: BTreeSet<usize> = ops.iter().flat_map(|o| o.qubits()).collect();
                set.into_iter().collect()
            }
        }
    }

    pub fn as_gate(&self) -> Option<&GateOp> {
        match self {
            IrOp::Gate(g) => Some(g),
            _ => None,
        }
    }
}

/// A flat circuit over `num_qubits` qubits and `num_clbits` classical bits.
///
/// Registers of the source program are flattened in declaration order; the
/// declared classical registers are kept so conditionals can be printed back.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QubitCircuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub cregs: Vec<(String, usize)>,
    pub ops: Vec<IrOp>,
}

impl QubitCircuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Self {
            num_qubits,
            num_clbits,
            cregs: Vec::new(),
            ops: Vec::new(),
        }
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateOp> {
        self.ops.iter().filter_map(IrOp::as_gate)
    }

    pub fn push_gate(&mut self, name: &str, params: Vec<f64>, qubits: Vec<usize>) {
        self.ops.push(IrOp::Gate(GateOp::new(name, params, qubits)));
    }

    /// Measurement pairs `(qubit, clbit)` in program order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.ops
            .iter()
            .filter_map(|op| match op {
                IrOp::Measure { qubit, clbit } => Some((*qubit, *clbit)),
                _ => None,
            })
            .collect()
    }

    /// Copy of the circuit without measurements and barriers.
    pub fn unitary_part(&self) -> QubitCircuit {
        QubitCircuit {
            ops: self
                .ops
                .iter()
                .filter(|o| matches!(o, IrOp::Gate(_)))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }

    /// Renders the circuit as OpenQASM 2.0 over a single flat register `q`.
    pub fn to_qasm(&self) -> String {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        if self.num_qubits > 0 {
            let _ = writeln!(out, "qreg q[{}];", self.num_qubits);
        }
        let cregs: Vec<(String, usize)> = if self.cregs.is_empty() && self.num_clbits > 0 {
            vec![("c".to_string(), self.num_clbits)]
        } else {
            self.cregs.clone()
        };
        for (name, size) in &cregs {
            let _ = writeln!(out, "creg {name}[{size}];");
        }
        let clbit_name = |mut bit: usize| -> String {
            for (name, size) in &cregs {
                if bit < *size {
                    return format!("{name}[{bit}]");
                }
                bit -= size;
            }
            format!("c[{bit}]")
        };
        for op in &self.ops {
            write_op(&mut out, op, &clbit_name);
        }
        out
    }
}

fn write_op(out: &mut String, op: &IrOp, clbit_name: &dyn Fn(usize) -> String) {
    match op {
        IrOp::Gate(g) => {
            let _ = writeln!(out, "{g};");
        }
        IrOp::Barrier { qubits } => {
            let list: Vec<String> = qubits.iter().map(|q| format!("q[{q}]")).collect();
            let _ = writeln!(out, "barrier {};", list.join(", "));
        }
        IrOp::Measure { qubit, clbit } => {
            let _ = writeln!(out, "measure q[{qubit}] -> {};", clbit_name(*clbit));
        }
        IrOp::Reset { qubit, .. } => {
            let _ = writeln!(out, "reset q[{qubit}];");
        }
        IrOp::Conditional { creg, value, ops, .. } => {
            for inner in ops {
                let _ = write!(out, "if ({creg}=={value}) ");
                write_op(out, inner, clbit_name);
            }
        }
    }
}
