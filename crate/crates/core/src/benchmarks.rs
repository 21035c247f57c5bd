//! Generators for the benchmark circuits: Bernstein-Vazirani, Grover search
//! and the SWAP test. Each comes with the hand-picked ququart placement used
//! in the comparison tables.

use std::fmt::Write as _;

use crate::mapping::Mapping;
use crate::pipeline::Regime;

#[derive(Debug, Clone)]
pub struct Benchmark {
    pub name: String,
    pub qasm: String,
    pub num_qubits: usize,
    /// `(qudit, slot)` per qubit for the ququart regime.
    pub ququart_placement: Option<Vec<(usize, usize)>>,
}

impl Benchmark {
    /// Mapping for `regime`, `None` meaning consecutive packing.
    pub fn mapping(&self, regime: Regime) -> Option<Mapping> {
        match (regime, &self.ququart_placement) {
            (Regime::Ququart, Some(p)) => Some(Mapping::from_pairs(p, 2).expect("valid placement")),
            _ => None,
        }
    }

    pub fn file_name(&self) -> String {
        format!("{}.qasm", self.name)
    }
}

fn header(n: usize, c: usize) -> String {
    format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n}];\ncreg c[{c}];\n")
}

/// Bernstein-Vazirani for `secret`, whose character `i` is the bit of
/// qubit `i`; the ancilla is the last qubit.
pub fn bernstein_vazirani(secret: &str) -> Benchmark {
    let bits: Vec<bool> = secret.chars().map(|c| c == '1').collect();
    let n = bits.len();
    let anc = n;
    let mut s = header(n + 1, n);
    let _ = writeln!(s, "x q[{anc}];");
    for q in 0..=n {
        let _ = writeln!(s, "h q[{q}];");
    }
    for (q, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
        let _ = writeln!(s, "cx q[{q}],q[{anc}];");
    }
    for q in 0..n {
        let _ = writeln!(s, "h q[{q}];");
    }
    for q in 0..n {
        let _ = writeln!(s, "measure q[{q}] -> c[{q}];");
    }
    // The ancilla shares a ququart with the first qubit whose bit is set, so
    // that oracle call needs no two-qudit gate.
    let first = bits.iter().position(|b| *b).unwrap_or(0);
    let mut placement = vec![(0, 0); n + 1];
    placement[first] = (0, 0);
    placement[anc] = (0, 1);
    let mut next = 2;
    for (q, p) in placement.iter_mut().enumerate().take(n) {
        if q != first {
            *p = (next / 2, next % 2);
            next += 1;
        }
    }
    Benchmark {
        name: format!("bv{secret}"),
        qasm: s,
        num_qubits: n + 1,
        ququart_placement: Some(placement),
    }
}

fn mcz_call(n: usize) -> String {
    let name = crate::sim::mcz_name(n);
    let args: Vec<String> = (0..n).map(|q| format!("q[{q}]")).collect();
    format!("{name} {};", args.join(","))
}

/// Grover search for the basis state `marked` (character `i` is qubit `i`)
/// with the optimal number of iterations.
pub fn grover(marked: &str) -> Benchmark {
    let n = marked.len();
    let iterations = ((std::f64::consts::FRAC_PI_4) * ((1usize << n) as f64).sqrt()).floor() as usize;
    let mut s = header(n, n);
    for q in 0..n {
        let _ = writeln!(s, "h q[{q}];");
    }
    for _ in 0..iterations {
        for (q, c) in marked.chars().enumerate() {
            if c == '0' {
                let _ = writeln!(s, "x q[{q}];");
            }
        }
        let _ = writeln!(s, "{}", mcz_call(n));
        for (q, c) in marked.chars().enumerate() {
            if c == '0' {
                let _ = writeln!(s, "x q[{q}];");
            }
        }
        for q in 0..n {
            let _ = writeln!(s, "h q[{q}];\nx q[{q}];");
        }
        let _ = writeln!(s, "{}", mcz_call(n));
        for q in 0..n {
            let _ = writeln!(s, "x q[{q}];\nh q[{q}];");
        }
    }
    let _ = writeln!(s, "measure q -> c;");
    Benchmark {
        name: format!("grover{marked}"),
        qasm: s,
        num_qubits: n,
        ququart_placement: None,
    }
}

/// SWAP test of two `k`-qubit states. Qubit 0 is the ancilla, qubits
/// `1..=k` hold the first state and `k+1..=2k` the second.
pub fn swap_test(k: usize) -> Benchmark {
    let n = 2 * k + 1;
    let mut s = header(n, 1);
    for i in 0..k {
        let (a, b) = (1 + i, 1 + k + i);
        let _ = writeln!(s, "ry({}) q[{a}];", 0.3 + 0.4 * i as f64);
        let _ = writeln!(s, "rx({}) q[{b}];", 1.1 - 0.2 * i as f64);
    }
    let _ = writeln!(s, "h q[0];");
    for i in 0..k {
        let _ = writeln!(s, "cswap q[0],q[{}],q[{}];", 1 + i, 1 + k + i);
    }
    let _ = writeln!(s, "h q[0];\nmeasure q[0] -> c[0];");
    // Each swapped pair shares a ququart; the ancilla sits alone.
    let mut placement = vec![(k, 0); n];
    for i in 0..k {
        placement[1 + i] = (i, 0);
        placement[1 + k + i] = (i, 1);
    }
    Benchmark {
        name: format!("swaptest{k}"),
        qasm: s,
        num_qubits: n,
        ququart_placement: Some(placement),
    }
}

/// Every bundled benchmark, in table order.
pub fn suite() -> Vec<Benchmark> {
    vec![
        bernstein_vazirani("101"),
        bernstein_vazirani("10101"),
        grover("000"),
        grover("0000"),
        swap_test(1),
        swap_test(2),
    ]
}
