//! Level routing: rewrites every `R`/`XX` whose level pairs break the
//! device's selection rules by conjugating with level-swap pulses
//! `R{xy}(π, π/2)`, which are themselves allowed.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::qudit::{QuditCircuit, QuditOp};
use crate::runtime::IonDeviceSpec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub d: usize,
    /// Allowed single-qudit pairs, stored `(low, high)`.
    pub r_pairs: BTreeSet<(usize, usize)>,
    /// Allowed per-qudit pairs of the two-qudit gate, stored `(low, high)`.
    pub xx_pair: ((usize, usize), (usize, usize)),
}

fn ordered((a, b): (usize, usize)) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl TransitionGraph {
    pub fn new(
        d: usize,
        r_pairs: impl IntoIterator<Item = (usize, usize)>,
        xx_pair: ((usize, usize), (usize, usize)),
    ) -> Self {
        Self {
            d,
            r_pairs: r_pairs.into_iter().map(ordered).collect(),
            xx_pair: (ordered(xx_pair.0), ordered(xx_pair.1)),
        }
    }

    /// Star graph centred on level 0 with the two-qudit gate on `{0,1}`.
    pub fn star(d: usize) -> Self {
        Self::new(d, (1..d).map(|i| (0, i)), ((0, 1), (0, 1)))
    }

    pub fn from_device(spec: &IonDeviceSpec, d: usize) -> Result<Self> {
        Ok(Self::new(d, spec.r_pairs(d)?, spec.xx_levels))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.d];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.r_pairs {
                for (u, v) in [(a, b), (b, a)] {
                    if u == x && !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        seen.iter().all(|s| *s)
    }

    pub fn allows(&self, op: &QuditOp) -> bool {
        match op {
            QuditOp::R { levels, .. } => self.r_pairs.contains(&ordered(*levels)),
            QuditOp::XX { levels, .. } => ordered(levels.0) == self.xx_pair.0 && ordered(levels.1) == self.xx_pair.1,
            QuditOp::Ph { .. } | QuditOp::Barrier { .. } => true,
        }
    }
}

/// A level permutation with a sign per level: `P|l⟩ = sign[l]·|perm[l]⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Signed {
    perm: Vec<usize>,
    negative: Vec<bool>,
}

impl Signed {
    fn identity(d: usize) -> Self {
        Self {
            perm: (0..d).collect(),
            negative: vec![false; d],
        }
    }

    /// `pulse ∘ self`, where `pulse = R{xy}(π, π/2)` maps `|x⟩ → |y⟩`
    /// and `|y⟩ → -|x⟩`.
    fn then_pulse(&self, (x, y): (usize, usize)) -> Self {
        let mut next = self.clone();
        for l in 0..self.perm.len() {
            if self.perm[l] == x {
                next.perm[l] = y;
            } else if self.perm[l] == y {
                next.perm[l] = x;
                next.negative[l] = !next.negative[l];
            }
        }
        next
    }

    /// Axis shift picked up by `σφ{ij}` under conjugation.
    fn axis_shift(&self, i: usize, j: usize) -> f64 {
        if self.negative[i] != self.negative[j] {
            PI
        } else {
            0.0
        }
    }
}

/// `R{xy}(π, ±π/2)`; the minus form is the inverse pulse.
fn swap_pulse(qudit: usize, (x, y): (usize, usize), sign: f64) -> QuditOp {
    QuditOp::r(qudit, x, y, PI, sign * FRAC_PI_2)
}

/// Shortest pulse word whose permutation carries `pair` onto one of
/// `targets`. Generators are tried in ascending pair order, so among equally
/// short words the one with the smallest levels wins.
fn shortest_word(
    graph: &TransitionGraph,
    pair: (usize, usize),
    targets: &[(usize, usize)],
) -> Option<(Vec<(usize, usize)>, Signed)> {
    let start = Signed::identity(graph.d);
    let hit = |s: &Signed| targets.contains(&ordered((s.perm[pair.0], s.perm[pair.1])));
    if hit(&start) {
        return Some((Vec::new(), start));
    }
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    seen.insert(start.perm.clone(), ());
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some((state, word)) = queue.pop_front() {
        for &g in &graph.r_pairs {
            let next = state.then_pulse(g);
            if seen.insert(next.perm.clone(), ()).is_some() {
                continue;
            }
            let mut w: Vec<(usize, usize)> = word.clone();
            w.push(g);
            if hit(&next) {
                return Some((w, next));
            }
            queue.push_back((next, w));
        }
    }
    None
}

/// Number of swap pulses needed to route `op` (zero when allowed).
pub fn routing_cost(op: &QuditOp, graph: &TransitionGraph) -> Option<usize> {
    if graph.allows(op) {
        return Some(0);
    }
    match op {
        QuditOp::R { levels, .. } => {
            let targets: Vec<_> = graph.r_pairs.iter().copied().collect();
            shortest_word(graph, *levels, &targets).map(|(w, _)| 2 * w.len())
        }
        QuditOp::XX { levels, .. } => {
            let a = shortest_word(graph, levels.0, &[graph.xx_pair.0])?;
            let b = shortest_word(graph, levels.1, &[graph.xx_pair.1])?;
            Some(2 * (a.0.len() + b.0.len()))
        }
        _ => Some(0),
    }
}

/// Routes every operation onto allowed transitions.
pub fn route(circuit: &QuditCircuit, graph: &TransitionGraph) -> Result<QuditCircuit> {
    if graph.d != circuit.levels {
        return Err(Error::Unroutable(format!(
            "graph has {} levels, circuit {}",
            graph.d, circuit.levels
        )));
    }
    let mut out = QuditCircuit::new(circuit.qudits, circuit.levels);
    for op in &circuit.ops {
        route_op(op, graph, &mut out.ops)?;
    }
    Ok(out)
}

fn route_op(op: &QuditOp, graph: &TransitionGraph, out: &mut Vec<QuditOp>) -> Result<()> {
    if graph.allows(op) {
        out.push(op.clone());
        return Ok(());
    }
    match op {
        QuditOp::R {
            qudit,
            levels: (i, j),
            theta,
            phi,
        } => {
            let targets: Vec<_> = graph.r_pairs.iter().copied().collect();
            let (word, p) =
                shortest_word(graph, (*i, *j), &targets).ok_or_else(|| Error::Unroutable(op.to_string()))?;
            let (pi_, pj) = (p.perm[*i], p.perm[*j]);
            let phi = phi + p.axis_shift(*i, *j);
            let inner = if pi_ < pj {
                QuditOp::r(*qudit, pi_, pj, *theta, phi)
            } else {
                QuditOp::r(*qudit, pj, pi_, *theta, -phi)
            };
            out.extend(word.iter().map(|&g| swap_pulse(*qudit, g, 1.0)));
            out.push(inner);
            out.extend(word.iter().rev().map(|&g| swap_pulse(*qudit, g, -1.0)));
        }
        QuditOp::XX {
            qudits: (a, b),
            levels: (la, lb),
            theta,
        } => {
            let (wa, pa) =
                shortest_word(graph, *la, &[graph.xx_pair.0]).ok_or_else(|| Error::Unroutable(op.to_string()))?;
            let (wb, pb) =
                shortest_word(graph, *lb, &[graph.xx_pair.1]).ok_or_else(|| Error::Unroutable(op.to_string()))?;
            let flips = (pa.axis_shift(la.0, la.1) != 0.0) != (pb.axis_shift(lb.0, lb.1) != 0.0);
            let theta = if flips { -theta } else { *theta };
            out.extend(wa.iter().map(|&g| swap_pulse(*a, g, 1.0)));
            out.extend(wb.iter().map(|&g| swap_pulse(*b, g, 1.0)));
            out.push(QuditOp::xx(*a, *b, graph.xx_pair.0, graph.xx_pair.1, theta));
            out.extend(wb.iter().rev().map(|&g| swap_pulse(*b, g, -1.0)));
            out.extend(wa.iter().rev().map(|&g| swap_pulse(*a, g, -1.0)));
        }
        QuditOp::Ph { .. } | QuditOp::Barrier { .. } => out.push(op.clone()),
    }
    Ok(())
}

/// Every `R`/`XX` of `circuit` satisfies the graph.
pub fn is_legal(circuit: &QuditCircuit, graph: &TransitionGraph) -> bool {
    circuit.ops.iter().all(|op| graph.allows(op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{self, equal_up_to_phase};

    fn unitary(ops: Vec<QuditOp>, m: usize, d: usize) -> sim::Matrix {
        sim::qudit_unitary(
            &QuditCircuit {
                qudits: m,
                levels: d,
                ops,
            },
            usize::MAX,
        )
        .unwrap()
    }

    #[test]
    fn r12_on_qutrit_star() {
        let g = TransitionGraph::star(3);
        let op = QuditOp::r(0, 1, 2, 0.83, 0.41);
        let routed = route(
            &QuditCircuit {
                qudits: 1,
                levels: 3,
                ops: vec![op.clone()],
            },
            &g,
        )
        .unwrap();
        assert_eq!(routed.ops.len(), 3);
        assert!(is_legal(&routed, &g));
        let direct = sim::r_local(3, 1, 2, 0.83, 0.41);
        assert!(unitary(routed.ops, 1, 3).max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn allowed_op_is_fixed() {
        let g = TransitionGraph::star(4);
        let c = QuditCircuit {
            qudits: 1,
            levels: 4,
            ops: vec![QuditOp::r(0, 0, 3, 1.0, 0.2)],
        };
        assert_eq!(route(&c, &g).unwrap(), c);
    }

    #[test]
    fn xx_13_23_matches_cz() {
        let g = TransitionGraph::star(4);
        let op = QuditOp::xx(0, 1, (1, 3), (2, 3), PI);
        let c = QuditCircuit {
            qudits: 2,
            levels: 4,
            ops: vec![op.clone()],
        };
        let routed = route(&c, &g).unwrap();
        assert!(is_legal(&routed, &g));
        assert_eq!(routed.counts().xx, 1);
        let u = unitary(routed.ops, 2, 4);
        assert!(u.max_abs_diff(&unitary(vec![op], 2, 4)) < 1e-12);
    }

    #[test]
    fn star_pair_costs() {
        let g = TransitionGraph::star(4);
        let cost = |i, j| shortest_word(&g, (i, j), &[(0, 1)]).unwrap().0.len();
        assert_eq!(cost(1, 2), 1);
        assert_eq!(cost(1, 3), 1);
        assert_eq!(cost(0, 2), 2);
        assert_eq!(cost(0, 3), 2);
        assert_eq!(cost(2, 3), 3);
        assert_eq!(routing_cost(&QuditOp::xx(0, 1, (2, 3), (2, 3), 1.0), &g), Some(12));
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(routing_cost(&QuditOp::r(0, i, j, 1.0, 0.0), &g), Some(2));
        }
    }

    #[test]
    fn every_pair_routes_exactly() {
        for d in [3, 4, 5] {
            let g = TransitionGraph::star(d);
            for i in 0..d {
                for j in 0..d {
                    if i == j {
                        continue;
                    }
                    let r = QuditOp::r(0, i, j, 1.1, -0.7);
                    let routed = route(
                        &QuditCircuit {
                            qudits: 1,
                            levels: d,
                            ops: vec![r.clone()],
                        },
                        &g,
                    )
                    .unwrap();
                    assert!(
                        unitary(routed.ops, 1, d).max_abs_diff(&unitary(vec![r], 1, d)) < 1e-12,
                        "R{i}{j} d={d}"
                    );
                    let x = QuditOp::xx(0, 1, (i, j), (j, i), 0.37);
                    let routed = route(
                        &QuditCircuit {
                            qudits: 2,
                            levels: d,
                            ops: vec![x.clone()],
                        },
                        &g,
                    )
                    .unwrap();
                    let (a, b) = (unitary(routed.ops, 2, d), unitary(vec![x], 2, d));
                    assert!(a.max_abs_diff(&b) < 1e-12, "XX{i}{j} d={d}");
                    assert!(equal_up_to_phase(&a, &b, 1e-12));
                }
            }
        }
    }

    #[test]
    fn disconnected_graph_is_reported() {
        let g = TransitionGraph::new(3, [(0, 1)], ((0, 1), (0, 1)));
        assert!(!g.is_connected());
        let c = QuditCircuit {
            qudits: 1,
            levels: 3,
            ops: vec![QuditOp::r(0, 1, 2, 1.0, 0.0)],
        };
        assert!(matches!(route(&c, &g), Err(Error::Unroutable(_))));
    }
}
