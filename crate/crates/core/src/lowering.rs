//! Lowering of intermediate-representation qubit circuits (`rz`, `r`, `cz`
//! and multi-controlled Z) into qudit `Ph`/`R`/`XX` operations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::ir::{GateOp, IrOp, QubitCircuit};
use crate::mapping::{Mapping, Slot};
use crate::network::{mcz_network, NetOp};
use crate::qudit::{QuditCircuit, QuditOp, QuditParams};
use crate::runtime::MAX_MCZ_ARITY;
use crate::sim::mcz_arity;

/// Lowers `ir` for qudits with parameters `params` under `mapping`.
/// Measurements are dropped here; they travel in the sidecar file.
pub fn lower(ir: &QubitCircuit, params: QuditParams, mapping: &Mapping) -> Result<QuditCircuit> {
    if mapping.num_qubits() < ir.num_qubits {
        return Err(Error::Mapping(format!(
            "mapping places {} qubits, circuit has {}",
            mapping.num_qubits(),
            ir.num_qubits
        )));
    }
    if let Some((n, s)) = mapping.slots.iter().enumerate().find(|(_, s)| s.slot >= params.b) {
        return Err(Error::Mapping(format!("qubit {n}: slot {} ≥ b={}", s.slot, params.b)));
    }
    let mut out = QuditCircuit::new(mapping.qudits, params.d);
    for op in &ir.ops {
        match op {
            IrOp::Gate(g) => lower_gate(g, params, mapping, &mut out.ops)?,
            IrOp::Barrier { qubits } => {
                let mut qudits: Vec<usize> = qubits.iter().map(|&q| mapping.slot(q).qudit).collect();
                qudits.sort_unstable();
                qudits.dedup();
                out.ops.push(QuditOp::Barrier { qudits });
            }
            IrOp::Measure { .. } => {}
            IrOp::Reset { span, .. } => {
                return Err(Error::Rejected {
                    construct: "reset".into(),
                    target: "qudit".into(),
                    span: span.to_string(),
                })
            }
            IrOp::Conditional { span, .. } => {
                return Err(Error::Rejected {
                    construct: "conditional".into(),
                    target: "qudit".into(),
                    span: span.to_string(),
                })
            }
        }
    }
    Ok(out)
}

/// Levels `l < 2^b` whose bit `slot` is clear.
fn levels_with_bit_clear(b: usize, slot: usize) -> impl Iterator<Item = usize> {
    (0..1usize << b).filter(move |l| l & (1 << slot) == 0)
}

fn lower_gate(g: &GateOp, params: QuditParams, mapping: &Mapping, out: &mut Vec<QuditOp>) -> Result<()> {
    let b = params.b;
    let slot = |k: usize| mapping.slot(g.qubits[k]);
    match (g.name.as_str(), g.params.as_slice()) {
        ("r", &[theta, phi]) => {
            let Slot { qudit, slot } = slot(0);
            for l in levels_with_bit_clear(b, slot) {
                out.push(QuditOp::r(qudit, l, l | 1 << slot, theta, phi));
            }
        }
        ("rz", &[theta]) => {
            let Slot { qudit, slot } = slot(0);
            for l in levels_with_bit_clear(b, slot) {
                out.push(QuditOp::ph(qudit, l | 1 << slot, theta));
            }
        }
        ("cz", &[]) => lower_cz(slot(0), slot(1), params, out)?,
        (name, &[]) if mcz_arity(name).is_some_and(|k| k > 2) => {
            let k = mcz_arity(name).expect("checked");
            if g.qubits.len() != k {
                return Err(Error::Arity {
                    name: name.into(),
                    what: "qubits",
                    expected: k,
                    got: g.qubits.len(),
                });
            }
            if b == 1 && params.d >= 3 {
                let qudits: Vec<usize> = (0..k).map(|i| slot(i).qudit).collect();
                out.extend(mcz_ladder(&qudits[..k - 1], qudits[k - 1], params.d)?);
            } else {
                if k > MAX_MCZ_ARITY {
                    return Err(Error::Unsupported(format!(
                        "{name}: arity {k} exceeds the network table (max {MAX_MCZ_ARITY})"
                    )));
                }
                for op in network_in_ir(&g.qubits) {
                    lower_gate(&op, params, mapping, out)?;
                }
            }
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "gate {g} is outside the intermediate representation (rz, r, cz, multi-controlled z)"
            )))
        }
    }
    Ok(())
}

fn lower_cz(a: Slot, c: Slot, params: QuditParams, out: &mut Vec<QuditOp>) -> Result<()> {
    let b = params.b;
    if a.qudit == c.qudit {
        let mask = (1 << a.slot) | (1 << c.slot);
        for l in (0..1usize << b).filter(|l| l & mask == mask) {
            out.push(QuditOp::ph(a.qudit, l, PI));
        }
        return Ok(());
    }
    match b {
        1 => out.extend(cz_template(a.qudit, c.qudit)),
        2 => {
            let (i, j) = (1 << a.slot, 1 << c.slot);
            out.push(QuditOp::xx(a.qudit, c.qudit, (i, 3), (j, 3), PI));
        }
        _ => return Err(Error::Unsupported(format!("cz across qudits with b={b}"))),
    }
    Ok(())
}

/// `cz` between levels `{0,1}` of two qudits from one `XX(π/4)`, equal to
/// CZ up to the global phase `e^{iπ/4}`.
pub fn cz_template(a: usize, b: usize) -> Vec<QuditOp> {
    vec![
        QuditOp::r(a, 0, 1, FRAC_PI_2, FRAC_PI_2),
        QuditOp::r(b, 0, 1, FRAC_PI_2, FRAC_PI_2),
        QuditOp::xx(a, b, (0, 1), (0, 1), FRAC_PI_4),
        QuditOp::r(a, 0, 1, -FRAC_PI_2, FRAC_PI_2),
        QuditOp::r(b, 0, 1, -FRAC_PI_2, FRAC_PI_2),
        QuditOp::ph(a, 1, -FRAC_PI_2),
        QuditOp::ph(b, 1, -FRAC_PI_2),
    ]
}

/// `CX{1|12}`: swaps levels 1 and 2 of `t` when `c` is at level 1. Only
/// meaningful while level 2 of `c` is empty.
fn cx_from_one(c: usize, t: usize) -> Vec<QuditOp> {
    vec![
        QuditOp::r(c, 1, 2, FRAC_PI_2, FRAC_PI_2),
        QuditOp::xx(c, t, (1, 2), (1, 2), FRAC_PI_2),
        QuditOp::r(c, 1, 2, -FRAC_PI_2, FRAC_PI_2),
    ]
}

/// `CX{2|12}`: swaps levels 1 and 2 of `t` when `c` is at level 2.
fn cx_from_two(c: usize, t: usize) -> Vec<QuditOp> {
    vec![
        QuditOp::r(c, 0, 1, FRAC_PI_2, FRAC_PI_2),
        QuditOp::xx(c, t, (0, 1), (1, 2), FRAC_PI_2),
        QuditOp::r(c, 0, 1, -FRAC_PI_2, FRAC_PI_2),
        QuditOp::r(t, 1, 2, PI, 0.0),
    ]
}

/// `CZ{2|1}`: phase -1 when `c` is at level 2 and `t` at level 1, exact up to
/// a global phase.
fn cz_from_two(c: usize, t: usize) -> Vec<QuditOp> {
    vec![
        QuditOp::r(c, 0, 1, FRAC_PI_2, FRAC_PI_2),
        QuditOp::r(t, 0, 1, FRAC_PI_2, FRAC_PI_2),
        QuditOp::xx(c, t, (0, 1), (0, 1), FRAC_PI_2),
        QuditOp::r(c, 0, 1, -FRAC_PI_2, FRAC_PI_2),
        QuditOp::r(t, 0, 1, -FRAC_PI_2, FRAC_PI_2),
        QuditOp::ph(c, 1, -PI),
        QuditOp::ph(c, 2, -FRAC_PI_2),
        QuditOp::ph(t, 1, PI),
    ]
}

/// Multi-controlled Z on qutrits (or larger) holding one qubit each.
///
/// Level 2 of each control records "all previous controls were 1": a chain of
/// controlled level flips walks down the controls, one controlled phase hits
/// the target, and the chain is undone. Every step uses one `XX`, so `N`
/// qubits cost `2N - 3`.
pub fn mcz_ladder(controls: &[usize], target: usize, d: usize) -> Result<Vec<QuditOp>> {
    if d < 3 {
        return Err(Error::Unsupported(format!(
            "the ancilla-level ladder needs d ≥ 3, got d={d}"
        )));
    }
    match controls {
        [] => {
            return Err(Error::Unsupported(
                "multi-controlled z needs at least one control".into(),
            ))
        }
        [c] => return Ok(cz_template(*c, target)),
        _ => {}
    }
    let mut chain = cx_from_one(controls[0], controls[1]);
    for w in controls[1..].windows(2) {
        chain.extend(cx_from_two(w[0], w[1]));
    }
    let mut out = chain.clone();
    out.extend(cz_from_two(*controls.last().expect("non-empty"), target));
    out.extend(chain.iter().rev().map(QuditOp::inverse));
    Ok(out)
}

/// Multi-controlled Z as intermediate-representation gates via the CNOT
/// network, with `cx t` written as `h t; cz; h t`.
pub fn network_in_ir(qubits: &[usize]) -> Vec<GateOp> {
    let h = |q: usize| {
        [
            GateOp::new("r", vec![FRAC_PI_2, -FRAC_PI_2], vec![q]),
            GateOp::new("rz", vec![PI], vec![q]),
        ]
    };
    let mut out = Vec::new();
    for op in mcz_network(qubits) {
        match op {
            NetOp::Phase(q, a) => out.push(GateOp::new("rz", vec![a], vec![q])),
            NetOp::Cx(c, t) => {
                out.extend(h(t));
                out.push(GateOp::new("cz", vec![], vec![c, t]));
                out.extend(h(t));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::default_mapping;
    use crate::sim::{self, EquivalenceMode, DEFAULT_CAP};

    fn single(g: GateOp, n: usize, params: QuditParams) -> QuditCircuit {
        let mut ir = QubitCircuit::new(n, 0);
        ir.ops.push(IrOp::Gate(g));
        lower(&ir, params, &default_mapping(n, params.b)).unwrap()
    }

    #[test]
    fn single_qubit_rules() {
        let c = single(
            GateOp::new("r", vec![FRAC_PI_2, -FRAC_PI_2], vec![0]),
            1,
            QuditParams::QUTRIT,
        );
        assert_eq!(c.ops, vec![QuditOp::r(0, 0, 1, FRAC_PI_2, -FRAC_PI_2)]);
        let c = single(GateOp::new("r", vec![1.0, 0.5], vec![1]), 2, QuditParams::QUQUART);
        assert_eq!(
            c.ops,
            vec![QuditOp::r(0, 0, 2, 1.0, 0.5), QuditOp::r(0, 1, 3, 1.0, 0.5)]
        );
        let c = single(GateOp::new("rz", vec![0.7], vec![0]), 2, QuditParams::QUQUART);
        assert_eq!(c.ops, vec![QuditOp::ph(0, 1, 0.7), QuditOp::ph(0, 3, 0.7)]);
    }

    #[test]
    fn ququart_cz_rules() {
        let c = single(GateOp::new("cz", vec![], vec![0, 1]), 2, QuditParams::QUQUART);
        assert_eq!(c.ops, vec![QuditOp::ph(0, 3, PI)]);
        let c = single(GateOp::new("cz", vec![], vec![0, 2]), 4, QuditParams::QUQUART);
        assert_eq!(c.ops, vec![QuditOp::xx(0, 1, (1, 3), (1, 3), PI)]);
    }

    fn mcz_reference(n: usize) -> QubitCircuit {
        let mut c = QubitCircuit::new(n, 0);
        c.push_gate(&sim::mcz_name(n), vec![], (0..n).collect());
        c
    }

    fn assert_lowering_exact(n: usize, params: QuditParams) {
        let reference = mcz_reference(n);
        let mapping = default_mapping(n, params.b);
        let lowered = lower(&reference, params, &mapping).unwrap();
        let we = sim::embedded_action(&lowered, &mapping, DEFAULT_CAP).unwrap();
        let ev = sim::embedded_reference(&reference, &mapping, params.d, DEFAULT_CAP).unwrap();
        let eq = sim::compare_embedded(&we, &ev, EquivalenceMode::GlobalPhase, 1e-9);
        assert!(eq.equivalent, "n={n} {params:?}: deviation {}", eq.max_deviation);
    }

    #[test]
    fn ladder_counts_and_exactness() {
        for n in 2..=8 {
            let qudits: Vec<usize> = (0..n).collect();
            let ops = mcz_ladder(&qudits[..n - 1], n - 1, 3).unwrap();
            let xx = ops.iter().filter(|o| matches!(o, QuditOp::XX { .. })).count();
            assert_eq!(xx, 2 * n - 3, "n={n}");
        }
        for n in 2..=5 {
            assert_lowering_exact(n, QuditParams::QUTRIT);
        }
    }

    #[test]
    fn network_lowerings_are_exact() {
        for n in 2..=5 {
            assert_lowering_exact(n, QuditParams::QUBIT);
        }
        for n in 2..=5 {
            assert_lowering_exact(n, QuditParams::QUQUART);
        }
    }

    #[test]
    fn ladder_needs_third_level() {
        assert!(mcz_ladder(&[0, 1], 2, 2).is_err());
    }

    #[test]
    fn oversized_network_is_rejected() {
        let mut ir = QubitCircuit::new(10, 0);
        ir.push_gate("c9z", vec![], (0..10).collect());
        let err = lower(&ir, QuditParams::QUBIT, &default_mapping(10, 1)).unwrap_err();
        assert!(err.to_string().contains("exceeds the network table"), "{err}");
    }
}
