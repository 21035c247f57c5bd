//! The full transpilation flow for one source file:
//! frontend → ion IR → [rewrite rules] → lowering → routing →
//! [qudit optimizer] → [strip trailing phases].

use crate::error::{Error, Result};
use crate::ir::{IrOp, QubitCircuit};
use crate::lowering::lower;
use crate::mapping::{default_mapping, Mapping};
use crate::qasm;
use crate::qudit::{QuditCircuit, QuditParams};
use crate::qudit_opt::{optimize_qudit, strip_trailing_phases};
use crate::rewrite::{self, RewriteStats, REWRITE_CAP};
use crate::router::{route, TransitionGraph};
use crate::runtime::{IonDeviceSpec, Runtime};
use crate::sim::{self, Equivalence, EquivalenceMode, EQUIVALENCE_TOL};
use crate::unmap::{MeasureMap, Sidecar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Qubit,
    Qutrit,
    Ququart,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Qubit, Regime::Qutrit, Regime::Ququart];

    pub fn params(self) -> QuditParams {
        match self {
            Regime::Qubit => QuditParams::QUBIT,
            Regime::Qutrit => QuditParams::QUTRIT,
            Regime::Ququart => QuditParams::QUQUART,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Qubit => "qubit",
            Regime::Qutrit => "qutrit",
            Regime::Ququart => "ququart",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Params(format!("unknown regime '{s}' (expected qubit, qutrit or ququart)")))
    }
}

#[derive(Debug, Clone)]
pub struct Options {
    pub params: QuditParams,
    /// Consecutive packing when absent.
    pub mapping: Option<Mapping>,
    pub optimize: bool,
    pub strip_trailing_phases: bool,
    pub device: IonDeviceSpec,
}

impl Options {
    pub fn new(params: QuditParams) -> Self {
        Self {
            params,
            mapping: None,
            optimize: false,
            strip_trailing_phases: false,
            device: IonDeviceSpec::star(),
        }
    }

    pub fn regime(r: Regime) -> Self {
        Self::new(r.params())
    }

    pub fn optimized(mut self, on: bool) -> Self {
        self.optimize = on;
        self
    }

    pub fn with_mapping(mut self, m: Mapping) -> Self {
        self.mapping = Some(m);
        self
    }
}

/// Every intermediate product of one run.
#[derive(Debug, Clone)]
pub struct Transpiled {
    pub source: String,
    pub params: QuditParams,
    pub mapping: Mapping,
    pub measures: MeasureMap,
    /// Native IR straight from the frontend; the verification reference.
    pub reference: QubitCircuit,
    /// IR after the rewrite rules (same as `reference` without `-O`).
    pub ir: QubitCircuit,
    pub rewrite: RewriteStats,
    pub lowered: QuditCircuit,
    pub routed: QuditCircuit,
    pub circuit: QuditCircuit,
}

impl Transpiled {
    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            source: self.source.clone(),
            params: self.params,
            mapping: self.mapping.clone(),
            measures: self.measures.clone(),
        }
    }
}

/// Rejects constructs the ion target cannot run and returns the measurement
/// map. A program without measurements measures every qubit into the
/// matching clbit.
pub fn check_ion_program(ir: &QubitCircuit) -> Result<MeasureMap> {
    let mut measured = vec![false; ir.num_qubits];
    for op in &ir.ops {
        match op {
            IrOp::Reset { span, .. } => {
                return Err(Error::Rejected {
                    construct: "reset".into(),
                    target: "ion".into(),
                    span: span.to_string(),
                })
            }
            IrOp::Conditional { span, .. } => {
                return Err(Error::Rejected {
                    construct: "conditional".into(),
                    target: "ion".into(),
                    span: span.to_string(),
                })
            }
            IrOp::Measure { qubit, .. } => measured[*qubit] = true,
            IrOp::Gate(g) => {
                if let Some(q) = g.qubits.iter().find(|q| measured[**q]) {
                    return Err(Error::Rejected {
                        construct: "mid-circuit measurement".into(),
                        target: "ion".into(),
                        span: format!("gate {g} after measuring q[{q}]"),
                    });
                }
            }
            IrOp::Barrier { .. } => {}
        }
    }
    let pairs = ir.measurements();
    if pairs.is_empty() {
        Ok(MeasureMap::identity(ir.num_qubits))
    } else {
        MeasureMap::new(ir.num_clbits, pairs)
    }
}

/// Frontend plus optional rewriting for a qubit runtime.
pub fn transpile_qubit(
    text: &str,
    file: &str,
    runtime: &Runtime,
    optimize: bool,
) -> Result<(QubitCircuit, RewriteStats)> {
    let ir = qasm::compile(text, file, runtime)?;
    if optimize {
        rewrite::optimize_with_stats(&ir, &runtime.rules, REWRITE_CAP)
    } else {
        Ok((ir, RewriteStats::default()))
    }
}

pub fn transpile(text: &str, file: &str, opts: &Options) -> Result<Transpiled> {
    let runtime = Runtime::bundled("ion-ir")?;
    let reference = qasm::compile(text, file, &runtime)?;
    let measures = check_ion_program(&reference)?;
    let (ir, stats) = if opts.optimize {
        rewrite::optimize_with_stats(&reference, &runtime.rules, REWRITE_CAP)?
    } else {
        (reference.clone(), RewriteStats::default())
    };
    let mapping = match &opts.mapping {
        Some(m) => m.clone(),
        None => default_mapping(reference.num_qubits, opts.params.b),
    };
    if mapping.num_qubits() != reference.num_qubits {
        return Err(Error::Mapping(format!(
            "mapping places {} qubits, {file} declares {}",
            mapping.num_qubits(),
            reference.num_qubits
        )));
    }
    let lowered = lower(&ir, opts.params, &mapping)?;
    let graph = TransitionGraph::from_device(&opts.device, opts.params.d)?;
    // Before routing every level pair is still reachable, so rotations of
    // one qubit stored in several pairs merge without swap pulses in between.
    let routed = if opts.optimize {
        route(&optimize_qudit(&lowered), &graph)?
    } else {
        route(&lowered, &graph)?
    };
    let mut circuit = if opts.optimize {
        optimize_qudit(&routed)
    } else {
        routed.clone()
    };
    if opts.strip_trailing_phases {
        circuit = strip_trailing_phases(&circuit);
    }
    Ok(Transpiled {
        source: file.to_string(),
        params: opts.params,
        mapping,
        measures,
        reference: reference.unitary_part(),
        ir,
        rewrite: stats,
        lowered,
        routed,
        circuit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub global: Equivalence,
    pub diagonal: Equivalence,
}

impl Verdict {
    pub fn passed(&self, strict_phase: bool) -> bool {
        self.diagonal.equivalent && (!strict_phase || self.global.equivalent)
    }
}

/// Compares the final qudit circuit with the qubit reference on the
/// embedded subspace.
pub fn verify(t: &Transpiled, cap: usize) -> Result<Verdict> {
    verify_circuit(&t.circuit, &t.reference, &t.mapping, cap)
}

pub fn verify_circuit(
    circuit: &QuditCircuit,
    reference: &QubitCircuit,
    mapping: &Mapping,
    cap: usize,
) -> Result<Verdict> {
    let we = sim::embedded_action(circuit, mapping, cap)?;
    let ev = sim::embedded_reference(reference, mapping, circuit.levels, cap)?;
    Ok(Verdict {
        global: sim::compare_embedded(&we, &ev, EquivalenceMode::GlobalPhase, EQUIVALENCE_TOL),
        diagonal: sim::compare_embedded(&we, &ev, EquivalenceMode::DiagonalPhase, EQUIVALENCE_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BELL: &str =
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";

    #[test]
    fn bell_all_regimes() {
        for r in Regime::ALL {
            for o in [false, true] {
                let t = transpile(BELL, "bell.qasm", &Options::regime(r).optimized(o)).unwrap();
                let v = verify(&t, sim::DEFAULT_CAP).unwrap();
                assert!(v.passed(true), "{} -O={o}: {v:?}", r.name());
                assert_eq!(t.circuit.counts().xx, usize::from(r != Regime::Ququart));
            }
        }
    }

    #[test]
    fn measures_and_rejections() {
        let t = transpile(
            "include \"qelib1.inc\"; qreg q[2]; creg c[1]; x q[1]; measure q[1] -> c[0];",
            "m",
            &Options::regime(Regime::Qutrit),
        )
        .unwrap();
        assert_eq!(
            t.measures,
            MeasureMap {
                clbits: 1,
                map: vec![(1, 0)]
            }
        );
        let t = transpile(
            "include \"qelib1.inc\"; qreg q[2]; x q[1];",
            "m",
            &Options::regime(Regime::Qutrit),
        )
        .unwrap();
        assert_eq!(t.measures, MeasureMap::identity(2));
        for bad in [
            "qreg q[1]; reset q[0];",
            "include \"qelib1.inc\"; qreg q[1]; creg c[1]; if (c == 1) x q[0];",
            "include \"qelib1.inc\"; qreg q[1]; creg c[1]; measure q[0] -> c[0]; x q[0];",
        ] {
            let err = transpile(bad, "bad.qasm", &Options::regime(Regime::Qutrit)).unwrap_err();
            assert!(matches!(err, Error::Rejected { .. }), "{bad}: {err}");
        }
    }

    #[test]
    fn mapping_size_checked() {
        let m = Mapping::from_pairs(&[(0, 0)], 1).unwrap();
        let err = transpile(BELL, "bell.qasm", &Options::regime(Regime::Qutrit).with_mapping(m)).unwrap_err();
        assert!(matches!(err, Error::Mapping(_)));
    }
}
