//! Phase-polynomial network for multi-controlled Z over CNOT and phase gates.
//!
//! Uses `x1·x2·…·xk = 2^{1-k} Σ_S (-1)^{|S|-1} ⊕_{i∈S} x_i`. Parities that
//! contain the last qubit are visited by a Gray-code walk of CNOTs onto it;
//! the remaining parities recurse on the other qubits. Arity `k` costs
//! `2^k - 2` CNOTs, six for a Toffoli-class gate.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NetOp {
    /// `diag(1, e^{iθ})` on a qubit.
    Phase(usize, f64),
    /// CNOT `(control, target)`.
    Cx(usize, usize),
}

/// Network for the `k`-qubit multi-controlled Z on `qubits`, exact including
/// global phase.
pub fn mcz_network(qubits: &[usize]) -> Vec<NetOp> {
    let k = qubits.len();
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let unit = PI / f64::from(1u32 << (k - 1));
    build(qubits, unit, &mut out);
    out
}

fn build(qubits: &[usize], unit: f64, out: &mut Vec<NetOp>) {
    let Some((&t, rest)) = qubits.split_last() else { return };
    let m = rest.len();
    // Walk the Gray code over `rest`; `t` holds x_t ⊕ (selected parity).
    let mut code = 0usize;
    for step in 0..(1usize << m) {
        let weight = code.count_ones() + 1;
        let sign = if weight % 2 == 1 { 1.0 } else { -1.0 };
        out.push(NetOp::Phase(t, sign * unit));
        let flip = if step + 1 == 1 << m {
            m.saturating_sub(1)
        } else {
            (step + 1).trailing_zeros() as usize
        };
        if m > 0 {
            out.push(NetOp::Cx(rest[flip], t));
            code ^= 1 << flip;
        }
    }
    debug_assert_eq!(code, 0);
    build(rest, unit, out);
}

pub fn cx_count(net: &[NetOp]) -> usize {
    net.iter().filter(|op| matches!(op, NetOp::Cx(..))).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force evaluation of the network on every basis state.
    fn phases(k: usize) -> Vec<f64> {
        let qubits: Vec<usize> = (0..k).collect();
        let net = mcz_network(&qubits);
        (0..1usize << k)
            .map(|mut bits| {
                let mut phase = 0.0;
                for op in &net {
                    match *op {
                        NetOp::Phase(q, a) => {
                            if (bits >> q) & 1 == 1 {
                                phase += a;
                            }
                        }
                        NetOp::Cx(c, t) => {
                            if (bits >> c) & 1 == 1 {
                                bits ^= 1 << t;
                            }
                        }
                    }
                }
                phase
            })
            .collect()
    }

    #[test]
    fn network_is_exact_multi_controlled_z() {
        for k in 1..=7 {
            let ph = phases(k);
            for (x, p) in ph.iter().enumerate() {
                let expected = if x == (1 << k) - 1 { PI } else { 0.0 };
                let diff = (p - expected).rem_euclid(2.0 * PI);
                assert!(!(1e-9..=2.0 * PI - 1e-9).contains(&diff), "k={k} x={x} phase={p}");
            }
        }
    }

    #[test]
    fn cnot_counts() {
        for k in 1..=9 {
            let q: Vec<usize> = (0..k).collect();
            assert_eq!(cx_count(&mcz_network(&q)), (1 << k) - 2);
        }
    }

    #[test]
    fn toffoli_class_pairs() {
        let net = mcz_network(&[0, 1, 2]);
        let pairs: Vec<(usize, usize)> = net
            .iter()
            .filter_map(|op| if let NetOp::Cx(c, t) = op { Some((*c, *t)) } else { None })
            .collect();
        assert_eq!(pairs, vec![(0, 2), (1, 2), (0, 2), (1, 2), (0, 1), (0, 1)]);
    }
}
