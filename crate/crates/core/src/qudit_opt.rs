//! Peephole optimizer for routed qudit circuits.
//!
//! Rules, applied until nothing changes:
//!
//! * `Ph{i}(a)·Ph{i}(b) → Ph{i}(a+b)`, `Ph(2nπ) → id`
//! * `R{ij}(a,φ)·R{ij}(b,φ) → R{ij}(a+b,φ)` (also for axes differing by π)
//! * `R{ij}(a,φ)·R{ij}(b,ψ) → R{ij}(c,χ)·Ph{i}(β)·Ph{j}(-β)` otherwise
//! * `R{ji}(θ,φ) → R{ij}(θ,-φ)`, `R(4nπ) → id`, `R(2π) → Ph{i}(π)·Ph{j}(π)`
//! * `XX(a)·XX(b) → XX(a+b)`, `XX(2nπ) → id`
//! * `Ph{k}(α)·R{ij}(θ,φ) → R{ij}(θ,φ∓α)·Ph{k}(α)` for `k ∈ {i,j}`
//!
//! Two operations are adjacent when every operation between them commutes
//! with the first one: different qudits, disjoint levels on a shared qudit,
//! or both diagonal. An `R` about the x axis also commutes with an `XX` on
//! the same level pair.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::qudit::{QuditCircuit, QuditOp};
use crate::sim::wrap_angle;

const TOL: f64 = 1e-12;

fn near_zero(x: f64) -> bool {
    x.abs() < TOL
}

/// `a ≡ b (mod 2π)`.
fn same_axis(a: f64, b: f64) -> bool {
    near_zero(wrap_angle(a - b, 2.0 * PI))
}

/// Canonical form of one op; `None` when it is the identity.
fn normalize(op: &QuditOp) -> Option<Vec<QuditOp>> {
    let out = match *op {
        QuditOp::Ph { qudit, level, theta } => {
            let t = wrap_angle(theta, 2.0 * PI);
            if near_zero(t) {
                vec![]
            } else {
                vec![QuditOp::ph(qudit, level, t)]
            }
        }
        QuditOp::R {
            qudit,
            levels: (i, j),
            theta,
            phi,
        } => {
            let (i, j, phi) = if i < j { (i, j, phi) } else { (j, i, -phi) };
            let t = wrap_angle(theta, 4.0 * PI);
            let phi = wrap_angle(phi, 2.0 * PI);
            if near_zero(t) {
                vec![]
            } else if near_zero(t - 2.0 * PI) {
                vec![QuditOp::ph(qudit, i, PI), QuditOp::ph(qudit, j, PI)]
            } else {
                vec![QuditOp::r(qudit, i, j, t, phi)]
            }
        }
        QuditOp::XX {
            qudits: (a, b),
            levels: (la, lb),
            theta,
        } => {
            let sort = |(x, y): (usize, usize)| (x.min(y), x.max(y));
            let (a, b, la, lb) = if a < b { (a, b, la, lb) } else { (b, a, lb, la) };
            let t = wrap_angle(theta, 2.0 * PI);
            if near_zero(t) {
                vec![]
            } else {
                vec![QuditOp::xx(a, b, sort(la), sort(lb), t)]
            }
        }
        QuditOp::Barrier { .. } => return Some(vec![op.clone()]),
    };
    Some(out)
}

fn is_diagonal(op: &QuditOp) -> bool {
    matches!(op, QuditOp::Ph { .. })
}

/// `R{ij}(θ, 0 or π)` against an `XX` coupling `(i,j)` on the same qudit.
fn x_rotation_under_xx(r: &QuditOp, xx: &QuditOp) -> bool {
    let (
        QuditOp::R { qudit, levels, phi, .. },
        QuditOp::XX {
            qudits,
            levels: (la, lb),
            ..
        },
    ) = (r, xx)
    else {
        return false;
    };
    near_zero(wrap_angle(*phi, PI)) && ((qudits.0 == *qudit && la == levels) || (qudits.1 == *qudit && lb == levels))
}

/// Sufficient commutation test used for adjacency.
fn commutes(a: &QuditOp, b: &QuditOp, d: usize) -> bool {
    if matches!(a, QuditOp::Barrier { .. }) || matches!(b, QuditOp::Barrier { .. }) {
        return a.qudits().iter().all(|q| !b.qudits().contains(q));
    }
    if is_diagonal(a) && is_diagonal(b) || x_rotation_under_xx(a, b) || x_rotation_under_xx(b, a) {
        return true;
    }
    for q in a.qudits() {
        if let (Some(la), Some(lb)) = (a.levels_on(q, d), b.levels_on(q, d)) {
            if la.iter().any(|l| lb.contains(l)) {
                continue;
            }
            return true;
        }
    }
    // No shared qudit at all, or overlapping levels on every shared one.
    a.qudits().iter().all(|q| !b.qudits().contains(q))
}

/// `a` then `b`, both rotations on the same pair of one qudit, as one
/// rotation followed by opposite phases on the two levels.
fn fuse(a: &QuditOp, b: &QuditOp) -> Option<Vec<QuditOp>> {
    let (
        QuditOp::R {
            qudit: q1,
            levels: l1,
            theta: t1,
            phi: p1,
        },
        QuditOp::R {
            qudit: q2,
            levels: l2,
            theta: t2,
            phi: p2,
        },
    ) = (a, b)
    else {
        return None;
    };
    if q1 != q2 || l1 != l2 {
        return None;
    }
    // SU(2) blocks [[c, -i s e^{-iφ}], [-i s e^{iφ}, c]].
    let block = |t: f64, p: f64| {
        let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
        let m01 = C64::new(0.0, -s) * C64::from_polar(1.0, -p);
        let m10 = C64::new(0.0, -s) * C64::from_polar(1.0, p);
        [[C64::new(c, 0.0), m01], [m10, C64::new(c, 0.0)]]
    };
    let (x, y) = (block(*t1, *p1), block(*t2, *p2));
    let m00 = y[0][0] * x[0][0] + y[0][1] * x[1][0];
    let m10 = y[1][0] * x[0][0] + y[1][1] * x[1][0];
    let beta = if m00.norm() > TOL { m00.arg() } else { 0.0 };
    let theta = 2.0 * m10.norm().atan2(m00.norm());
    let phi = m10.arg() + beta + PI / 2.0;
    let (i, j) = *l1;
    Some(vec![
        QuditOp::r(*q1, i, j, theta, phi),
        QuditOp::ph(*q1, i, beta),
        QuditOp::ph(*q1, j, -beta),
    ])
}

fn merge(a: &QuditOp, b: &QuditOp) -> Option<QuditOp> {
    match (a, b) {
        (
            QuditOp::Ph {
                qudit: q1,
                level: l1,
                theta: t1,
            },
            QuditOp::Ph {
                qudit: q2,
                level: l2,
                theta: t2,
            },
        ) if q1 == q2 && l1 == l2 => Some(QuditOp::ph(*q1, *l1, t1 + t2)),
        (
            QuditOp::R {
                qudit: q1,
                levels: l1,
                theta: t1,
                phi: p1,
            },
            QuditOp::R {
                qudit: q2,
                levels: l2,
                theta: t2,
                phi: p2,
            },
        ) if q1 == q2 && l1 == l2 => {
            if same_axis(*p1, *p2) {
                Some(QuditOp::r(*q1, l1.0, l1.1, t1 + t2, *p1))
            } else if same_axis(*p1, p2 + PI) {
                Some(QuditOp::r(*q1, l1.0, l1.1, t1 - t2, *p1))
            } else {
                None
            }
        }
        (
            QuditOp::XX {
                qudits: q1,
                levels: l1,
                theta: t1,
            },
            QuditOp::XX {
                qudits: q2,
                levels: l2,
                theta: t2,
            },
        ) if q1 == q2 && l1 == l2 => Some(QuditOp::XX {
            qudits: *q1,
            levels: *l1,
            theta: t1 + t2,
        }),
        _ => None,
    }
}

/// Moves a phase past a rotation that shares one of its levels.
fn push_phase(ph: &QuditOp, r: &QuditOp) -> Option<QuditOp> {
    let (
        QuditOp::Ph {
            qudit: q,
            level: k,
            theta: alpha,
        },
        QuditOp::R {
            qudit: rq,
            levels: (i, j),
            theta,
            phi,
        },
    ) = (ph, r)
    else {
        return None;
    };
    if q != rq {
        return None;
    }
    let phi = if k == j {
        phi - alpha
    } else if k == i {
        phi + alpha
    } else {
        return None;
    };
    Some(QuditOp::r(*q, *i, *j, *theta, wrap_angle(phi, 2.0 * PI)))
}

fn normalize_all(ops: &[QuditOp]) -> Option<Vec<QuditOp>> {
    let mut changed = false;
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        let n = normalize(op).unwrap_or_default();
        if n.len() != 1 || n[0] != *op {
            changed = true;
        }
        out.extend(n);
    }
    changed.then_some(out)
}

/// First rewrite in position order, or `None` at the fixpoint.
fn step(ops: &[QuditOp], d: usize) -> Option<Vec<QuditOp>> {
    if let Some(n) = normalize_all(ops) {
        return Some(n);
    }
    for (i, a) in ops.iter().enumerate() {
        if matches!(a, QuditOp::Barrier { .. }) {
            continue;
        }
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            if let Some(m) = merge(a, b) {
                let mut out = ops.to_vec();
                out[j] = m;
                out.remove(i);
                return Some(out);
            }
            if let Some(f) = fuse(a, b) {
                let mut out = ops.to_vec();
                out.splice(j..=j, f);
                out.remove(i);
                return Some(out);
            }
            if let Some(r) = push_phase(a, b) {
                let mut out = ops.to_vec();
                out[j] = r;
                out.insert(j + 1, a.clone());
                out.remove(i);
                return Some(out);
            }
            if !commutes(a, b, d) {
                break;
            }
        }
    }
    None
}

pub fn optimize_qudit(circuit: &QuditCircuit) -> QuditCircuit {
    let mut ops = circuit.ops.clone();
    while let Some(next) = step(&ops, circuit.levels) {
        ops = next;
    }
    QuditCircuit {
        qudits: circuit.qudits,
        levels: circuit.levels,
        ops,
    }
}

/// Drops phases that no later pulse on the same qudit follows. Changes the
/// unitary; computational-basis statistics are unaffected.
pub fn strip_trailing_phases(circuit: &QuditCircuit) -> QuditCircuit {
    let mut live = vec![false; circuit.qudits];
    let mut kept = Vec::with_capacity(circuit.ops.len());
    for op in circuit.ops.iter().rev() {
        match op {
            QuditOp::Ph { qudit, .. } if !live[*qudit] => continue,
            QuditOp::Barrier { .. } => {}
            _ => op.qudits().into_iter().for_each(|q| live[q] = true),
        }
        kept.push(op.clone());
    }
    kept.reverse();
    QuditCircuit {
        qudits: circuit.qudits,
        levels: circuit.levels,
        ops: kept,
    }
}
