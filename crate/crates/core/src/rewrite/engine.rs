use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::eval::{eval_block, MatchBinding};
use crate::error::Result;
use crate::ir::{GateOp, IrOp, QubitCircuit};

/// Rewrites per circuit before the optimizer gives up.
pub const REWRITE_CAP: usize = 100_000;

fn bind_term(term: &PatternTerm, op: &GateOp, b: &mut MatchBinding) -> bool {
    if op.name != term.gate || op.params.len() != term.params.len() {
        return false;
    }
    match &term.qubits {
        Some(vars) => {
            if vars.len() != op.qubits.len() {
                return false;
            }
            let mut fresh = Vec::new();
            for (v, q) in vars.iter().zip(&op.qubits) {
                match b.qubits.get(v) {
                    Some(bound) if bound != q => return false,
                    Some(_) => {}
                    None => {
                        if b.qubits.values().any(|x| x == q) || fresh.iter().any(|(_, x)| x == q) {
                            return false;
                        }
                        fresh.push((v.clone(), *q));
                    }
                }
            }
            b.qubits.extend(fresh);
        }
        None => match &b.implicit {
            Some(tuple) if tuple != &op.qubits => return false,
            Some(_) => {}
            None => b.implicit = Some(op.qubits.clone()),
        },
    }
    for (name, value) in term.params.iter().zip(&op.params) {
        b.params.insert(name.clone(), *value);
    }
    true
}

fn touched(op: &IrOp) -> Vec<usize> {
    op.qubits()
}

/// Matches `rule` with its first term at `start`. Later terms bind to the
/// first later gate whose qubits, together with the qubits bound so far, are
/// untouched by every op in between.
pub fn find_match(ops: &[IrOp], start: usize, rule: &RewriteRule) -> Option<MatchBinding> {
    let first = ops.get(start)?.as_gate()?;
    let mut b = MatchBinding::default();
    if !bind_term(&rule.pattern[0], first, &mut b) {
        return None;
    }
    b.positions.push(start);
    let mut bound: BTreeSet<usize> = first.qubits.iter().copied().collect();
    for term in &rule.pattern[1..] {
        let mut blocked: BTreeSet<usize> = BTreeSet::new();
        let mut found = None;
        for (j, op) in ops.iter().enumerate().skip(b.positions.last().copied()? + 1) {
            if let Some(g) = op.as_gate() {
                if g.qubits.iter().all(|q| !blocked.contains(q)) {
                    let mut trial = b.clone();
                    if bind_term(term, g, &mut trial) {
                        found = Some((j, trial, g));
                        break;
                    }
                }
            }
            blocked.extend(touched(op));
            if blocked.iter().any(|q| bound.contains(q)) {
                return None;
            }
        }
        let (j, trial, g) = found?;
        b = trial;
        b.positions.push(j);
        bound.extend(g.qubits.iter().copied());
    }
    Some(b)
}

/// Tries each rule in order at `start`; returns the first applicable rewrite.
fn try_at(ops: &[IrOp], start: usize, script: &RuleScript) -> Result<Option<(MatchBinding, Vec<GateOp>)>> {
    for rule in &script.rules {
        if let Some(b) = find_match(ops, start, rule) {
            if let Some(replacement) = eval_block(rule, &b)? {
                return Ok(Some((b, replacement)));
            }
        }
    }
    Ok(None)
}

/// Statistics of one optimizer run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RewriteStats {
    pub rewrites: usize,
    pub capped: bool,
}

/// Applies rules until none matches anywhere. The leftmost position wins,
/// then the first rule in file order; the replacement takes the place of
/// the last matched op.
pub fn optimize(circuit: &QubitCircuit, script: &RuleScript) -> Result<QubitCircuit> {
    optimize_with_stats(circuit, script, REWRITE_CAP).map(|(c, _)| c)
}

pub fn optimize_with_stats(
    circuit: &QubitCircuit,
    script: &RuleScript,
    cap: usize,
) -> Result<(QubitCircuit, RewriteStats)> {
    let mut ops = circuit.ops.clone();
    let mut stats = RewriteStats::default();
    'search: loop {
        for start in 0..ops.len() {
            if ops[start].as_gate().is_none() {
                continue;
            }
            if let Some((b, replacement)) = try_at(&ops, start, script)? {
                if stats.rewrites == cap {
                    log::warn!("rewrite cap of {cap} reached; returning the partially optimized circuit");
                    stats.capped = true;
                    break 'search;
                }
                stats.rewrites += 1;
                apply(&mut ops, &b.positions, replacement);
                continue 'search;
            }
        }
        break;
    }
    Ok((QubitCircuit { ops, ..circuit.clone() }, stats))
}

fn apply(ops: &mut Vec<IrOp>, positions: &[usize], replacement: Vec<GateOp>) {
    let last = *positions.last().expect("non-empty pattern");
    let drop: BTreeSet<usize> = positions.iter().copied().collect();
    let mut out = Vec::with_capacity(ops.len() + replacement.len());
    let mut replacement = Some(replacement);
    for (k, op) in ops.drain(..).enumerate() {
        if k == last {
            out.extend(replacement.take().into_iter().flatten().map(IrOp::Gate));
        } else if !drop.contains(&k) {
            out.push(op);
        }
    }
    *ops = out;
}

/// Checks rule gate names and arities against a native set.
pub fn check_natives(
    script: &RuleScript,
    natives: &BTreeMap<String, (usize, usize)>,
) -> std::result::Result<(), String> {
    for rule in &script.rules {
        let mut implicit_arity = None;
        for t in &rule.pattern {
            if t.qubits.is_none() {
                let arity = natives.get(&t.gate).map(|n| n.1);
                if implicit_arity.is_some() && arity.is_some() && implicit_arity != arity {
                    return Err(format!("{}: implicit qubit terms of different arity", t.span));
                }
                implicit_arity = implicit_arity.or(arity);
            }
        }
        for (gate, params, qubits, span) in rule.gate_uses() {
            let Some((np, nq)) = natives.get(&gate) else {
                return Err(format!("{span}: rule uses non-native gate '{gate}'"));
            };
            if *np != params {
                return Err(format!("{span}: '{gate}' takes {np} parameter(s), rule gives {params}"));
            }
            let q = qubits.or(implicit_arity).unwrap_or(*nq);
            if *nq != q {
                return Err(format!("{span}: '{gate}' acts on {nq} qubit(s), rule gives {q}"));
            }
        }
    }
    Ok(())
}
