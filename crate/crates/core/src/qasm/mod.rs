//! OpenQASM 2.0 frontend: lexing, parsing with semantic checks, and
//! expansion of gate calls down to a runtime's native gates.

pub mod ast;
mod expand;
pub mod lexer;
mod parser;

pub use ast::{GateDef, QasmProgram, Statement};
pub use expand::{expand, touched_qubits};
pub use parser::{parse_qasm, IncludeResolver};

use crate::error::{Error, Result};
use crate::ir::QubitCircuit;
use crate::runtime::Runtime;

/// Checks that a set of gate definitions is closed (every callee is
/// defined) and free of recursion.
pub fn check_definitions(program: &QasmProgram) -> Result<()> {
    for def in program.gatedefs.values() {
        for call in def.body.iter().flatten() {
            if call.name != "barrier" && !program.gatedefs.contains_key(&call.name) {
                return Err(Error::Source(crate::span::Diagnostic::new(
                    call.span.clone(),
                    format!("gate '{}' calls undefined gate '{}'", def.name, call.name),
                )));
            }
        }
    }
    expand(
        &QasmProgram {
            gatedefs: program.gatedefs.clone(),
            ..Default::default()
        },
        &Default::default(),
    )?;
    Ok(())
}

/// Parses `text` with includes served by `runtime` and expands it to the
/// runtime's native gates.
pub fn compile(text: &str, file: &str, runtime: &Runtime) -> Result<QubitCircuit> {
    let program = parse_qasm(text, file, &|name| runtime.resolve_include(name))?;
    expand(&program, &runtime.natives)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::IrOp;

    fn ion_ir() -> Runtime {
        Runtime::bundled("ion-ir").unwrap()
    }

    fn names(c: &QubitCircuit) -> Vec<String> {
        c.gates().map(|g| g.name.clone()).collect()
    }

    #[test]
    fn minimal_program() {
        let p = parse_qasm("qreg q[2]; h q[0];", "m.qasm", &|_| None).unwrap();
        assert_eq!(p.qregs, vec![("q".to_string(), 2)]);
        assert_eq!(p.body.len(), 1);
    }

    #[test]
    fn index_out_of_range() {
        let err = parse_qasm("qreg q[2]; x q[5];", "m.qasm", &|_| None).unwrap_err();
        assert_eq!(err.span.line, 1);
        assert!(err.message.contains("index out of range"), "{err}");
    }

    #[test]
    fn hadamard_definition_shape() {
        let p = parse_qasm("gate h q0 { r(pi/2, -pi/2) q0; rz(pi) q0; }", "h.inc", &|_| None).unwrap();
        let h = &p.gatedefs["h"];
        assert_eq!(h.qubits.len(), 1);
        assert_eq!(h.body.as_ref().unwrap().len(), 2);
    }

    #[test]
    fn cx_expands_through_cz() {
        let c = compile("include \"qelib1.inc\"; qreg q[2]; cx q[0],q[1];", "t", &ion_ir()).unwrap();
        assert_eq!(names(&c), vec!["r", "rz", "cz", "r", "rz"]);
        assert_eq!(c.gates().nth(2).unwrap().qubits, vec![0, 1]);
    }

    #[test]
    fn ccx_keeps_native_ccz() {
        let c = compile("include \"qelib1.inc\"; qreg q[3]; ccx q[0],q[1],q[2];", "t", &ion_ir()).unwrap();
        assert_eq!(names(&c), vec!["r", "rz", "ccz", "r", "rz"]);
    }

    #[test]
    fn zero_u3_gives_zero_angle_natives() {
        let c = compile("include \"qelib1.inc\"; qreg q[1]; u3(0,0,0) q[0];", "t", &ion_ir()).unwrap();
        assert_eq!(names(&c), vec!["rz", "r", "rz"]);
        assert!(c.gates().all(|g| g.params[0] == 0.0));
    }

    #[test]
    fn recursion_is_detected() {
        let src = "include \"qelib1.inc\"; gate a q { b q; } gate b q { a q; } qreg q[1]; a q[0];";
        let err = compile(src, "t", &ion_ir()).unwrap_err();
        assert!(matches!(err, Error::RecursiveGate(_)), "{err}");
    }

    #[test]
    fn unknown_gate_reports_position() {
        let err = compile("qreg q[1];\nfoo q[0];", "t.qasm", &ion_ir()).unwrap_err();
        assert_eq!(err.to_string(), "t.qasm:2:1: unknown gate 'foo'");
    }

    #[test]
    fn broadcasting_and_registers() {
        let src = "include \"qelib1.inc\"; qreg a[2]; qreg b[2]; creg c[2]; cz a, b; measure b -> c;";
        let c = compile(src, "t", &ion_ir()).unwrap();
        let cz: Vec<Vec<usize>> = c.gates().map(|g| g.qubits.clone()).collect();
        assert_eq!(cz, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(c.measurements(), vec![(2, 0), (3, 1)]);
    }

    #[test]
    fn conditionals_and_resets_are_carried() {
        let src = "include \"qelib1.inc\"; qreg q[1]; creg c[1]; reset q[0]; if (c==1) x q[0];";
        let c = compile(src, "t", &ion_ir()).unwrap();
        assert!(matches!(c.ops[0], IrOp::Reset { .. }));
        assert!(matches!(&c.ops[1], IrOp::Conditional { value: 1, ops, .. } if ops.len() == 1));
    }

    #[test]
    fn arity_mismatch() {
        let err = compile("include \"qelib1.inc\"; qreg q[2]; h q[0], q[1];", "t", &ion_ir()).unwrap_err();
        assert!(err.to_string().contains("expects 1 qubits"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_qasm("qreg q[2];\nh q[0]\n", "s.qasm", &|_| None).unwrap_err();
        assert_eq!((err.span.line, err.span.column), (3, 1));
    }

    #[test]
    fn every_bundled_definition_expands_to_natives() {
        for name in crate::runtime::BUNDLED {
            let rt = Runtime::bundled(name).unwrap();
            for def in rt.library_program().gatedefs.values() {
                let qubits: Vec<String> = (0..def.qubits.len()).map(|i| format!("q[{i}]")).collect();
                let params: Vec<&str> = def.params.iter().map(|_| "0.25").collect();
                let call = if params.is_empty() {
                    format!("{} {};", def.name, qubits.join(","))
                } else {
                    format!("{}({}) {};", def.name, params.join(","), qubits.join(","))
                };
                let src = format!("include \"qelib1.inc\"; qreg q[{}]; {call}", def.qubits.len());
                let c = compile(&src, "t", &rt).unwrap_or_else(|e| panic!("{name}/{}: {e}", def.name));
                assert!(c.gates().all(|g| rt.is_native(&g.name)));
            }
        }
    }
}
