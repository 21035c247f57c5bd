//! Qudit circuits over `Ph`, `R` and `XX` operations.
//!
//! Angle conventions used throughout the crate:
//!
//! * `Ph{i}(θ) = exp(iθ |i⟩⟨i|)`
//! * `R{ij}(θ, φ) = exp(-i θ/2 (cos φ σx{ij} + sin φ σy{ij}))` (half-angle, the
//!   ion convention, so emission copies θ unchanged)
//! * `XX{ij|kl}(θ) = exp(-i θ σx{ij} ⊗ σx{kl})`

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Levels per qudit `d` and qubits stored per qudit `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditParams {
    #[serde(rename = "levels")]
    pub d: usize,
    #[serde(rename = "qubits_per_qudit")]
    pub b: usize,
}

impl QuditParams {
    pub fn new(d: usize, b: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Params(format!("d={d} must be at least 2")));
        }
        if b < 1 {
            return Err(Error::Params("b must be at least 1".into()));
        }
        if b >= usize::BITS as usize || (1usize << b) > d {
            return Err(Error::Params(format!("2^b must not exceed d (d={d}, b={b})")));
        }
        Ok(Self { d, b })
    }

    pub const QUBIT: QuditParams = QuditParams { d: 2, b: 1 };
    pub const QUTRIT: QuditParams = QuditParams { d: 3, b: 1 };
    pub const QUQUART: QuditParams = QuditParams { d: 4, b: 2 };

    /// Number of levels that encode qubit states, `2^b`.
    pub fn qubit_levels(&self) -> usize {
        1 << self.b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuditOp {
    Ph {
        qudit: usize,
        level: usize,
        theta: f64,
    },
    R {
        qudit: usize,
        levels: (usize, usize),
        theta: f64,
        phi: f64,
    },
    XX {
        qudits: (usize, usize),
        levels: ((usize, usize), (usize, usize)),
        theta: f64,
    },
    Barrier {
        qudits: Vec<usize>,
    },
}

impl QuditOp {
    pub fn ph(qudit: usize, level: usize, theta: f64) -> Self {
        QuditOp::Ph { qudit, level, theta }
    }

    pub fn r(qudit: usize, i: usize, j: usize, theta: f64, phi: f64) -> Self {
        QuditOp::R {
            qudit,
            levels: (i, j),
            theta,
            phi,
        }
    }

    pub fn xx(a: usize, b: usize, la: (usize, usize), lb: (usize, usize), theta: f64) -> Self {
        QuditOp::XX {
            qudits: (a, b),
            levels: (la, lb),
            theta,
        }
    }

    pub fn qudits(&self) -> Vec<usize> {
        match self {
            QuditOp::Ph { qudit, .. } | QuditOp::R { qudit, .. } => vec![*qudit],
            QuditOp::XX { qudits, .. } => vec![qudits.0, qudits.1],
            QuditOp::Barrier { qudits } => qudits.clone(),
        }
    }

    /// Phase gates are implemented by frame bookkeeping on the device.
    pub fn is_virtual(&self) -> bool {
        matches!(self, QuditOp::Ph { .. })
    }

    /// Inverse operation (barriers are their own inverse).
    pub fn inverse(&self) -> QuditOp {
        match self.clone() {
            QuditOp::Ph { qudit, level, theta } => QuditOp::Ph {
                qudit,
                level,
                theta: -theta,
            },
            QuditOp::R {
                qudit,
                levels,
                theta,
                phi,
            } => QuditOp::R {
                qudit,
                levels,
                theta: -theta,
                phi,
            },
            QuditOp::XX { qudits, levels, theta } => QuditOp::XX {
                qudits,
                levels,
                theta: -theta,
            },
            b @ QuditOp::Barrier { .. } => b,
        }
    }

    /// Levels touched on `qudit`, or `None` when the op does not act on it.
    /// Barriers report every level.
    pub fn levels_on(&self, qudit: usize, d: usize) -> Option<Vec<usize>> {
        match self {
            QuditOp::Ph { qudit: q, level, .. } => (*q == qudit).then(|| vec![*level]),
            QuditOp::R { qudit: q, levels, .. } => (*q == qudit).then(|| vec![levels.0, levels.1]),
            QuditOp::XX { qudits, levels, .. } => {
                if qudits.0 == qudit {
                    Some(vec![levels.0 .0, levels.0 .1])
                } else if qudits.1 == qudit {
                    Some(vec![levels.1 .0, levels.1 .1])
                } else {
                    None
                }
            }
            QuditOp::Barrier { qudits } => qudits.contains(&qudit).then(|| (0..d).collect()),
        }
    }
}

impl fmt::Display for QuditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuditOp::Ph { qudit, level, theta } => write!(f, "Ph^{level}({theta}) d{qudit}"),
            QuditOp::R {
                qudit,
                levels,
                theta,
                phi,
            } => {
                write!(f, "R^{}{}({theta}, {phi}) d{qudit}", levels.0, levels.1)
            }
            QuditOp::XX { qudits, levels, theta } => write!(
                f,
                "XX^{}{}|{}{}({theta}) d{},d{}",
                levels.0 .0, levels.0 .1, levels.1 .0, levels.1 .1, qudits.0, qudits.1
            ),
            QuditOp::Barrier { qudits } => write!(f, "barrier {qudits:?}"),
        }
    }
}

/// Ordered list of qudit operations on `qudits` qudits with `levels` levels each.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditCircuit {
    pub qudits: usize,
    pub levels: usize,
    pub ops: Vec<QuditOp>,
}

/// Gate counts in the layout of the comparison tables: virtual phases,
/// single-qudit rotations and two-qudit gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct GateCounts {
    pub ph: usize,
    pub r: usize,
    pub xx: usize,
}

impl QuditCircuit {
    pub fn new(qudits: usize, levels: usize) -> Self {
        Self {
            qudits,
            levels,
            ops: Vec::new(),
        }
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for op in &self.ops {
            match op {
                QuditOp::Ph { .. } => c.ph += 1,
                QuditOp::R { .. } => c.r += 1,
                QuditOp::XX { .. } => c.xx += 1,
                QuditOp::Barrier { .. } => {}
            }
        }
        c
    }

    /// Checks level and qudit indices and angle finiteness.
    pub fn validate(&self) -> Result<()> {
        let d = self.levels;
        let bad = |op: &QuditOp, why: &str| Error::Unsupported(format!("invalid qudit op {op}: {why}"));
        for op in &self.ops {
            for q in op.qudits() {
                if q >= self.qudits {
                    return Err(bad(op, "qudit index out of range"));
                }
            }
            match op {
                QuditOp::Ph { level, theta, .. } => {
                    if *level >= d || !theta.is_finite() {
                        return Err(bad(op, "level or angle"));
                    }
                }
                QuditOp::R {
                    levels: (i, j),
                    theta,
                    phi,
                    ..
                } => {
                    if *i >= d || *j >= d || i == j || !theta.is_finite() || !phi.is_finite() {
                        return Err(bad(op, "levels or angles"));
                    }
                }
                QuditOp::XX {
                    qudits: (a, b),
                    levels: ((i, j), (k, l)),
                    theta,
                } => {
                    if a == b || [i, j, k, l].iter().any(|x| **x >= d) || i == j || k == l || !theta.is_finite() {
                        return Err(bad(op, "qudits, levels or angle"));
                    }
                }
                QuditOp::Barrier { .. } => {}
            }
        }
        Ok(())
    }
}
