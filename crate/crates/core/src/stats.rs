//! Gate counts and the additive error estimate `E = e1·N1 + e2·N2`, where
//! `N1` counts physical single-particle pulses (virtual phases excluded) and
//! `N2` counts two-particle gates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ir::QubitCircuit;
use crate::qudit::{GateCounts, QuditCircuit};
use crate::sim::mcz_arity;

/// Error rates for qubit (`b`) and qudit (`d`) devices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRates {
    pub e1_qubit: f64,
    pub e2_qubit: f64,
    pub e1_qudit: f64,
    pub e2_qudit: f64,
}

impl ErrorRates {
    /// Parses `e1b,e2b,e1d,e2d`.
    pub fn parse(text: &str) -> Result<Self> {
        let xs: Vec<f64> = text
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Params(format!("rates '{text}': {e}")))?;
        match xs.as_slice() {
            &[a, b, c, d] if xs.iter().all(|x| x.is_finite() && *x >= 0.0) => Ok(Self {
                e1_qubit: a,
                e2_qubit: b,
                e1_qudit: c,
                e2_qudit: d,
            }),
            _ => Err(Error::Params(format!(
                "rates '{text}': expected four non-negative numbers e1b,e2b,e1d,e2d"
            ))),
        }
    }

    /// Rates for a device with `d` levels.
    pub fn for_levels(&self, d: usize) -> (f64, f64) {
        if d == 2 {
            (self.e1_qubit, self.e2_qubit)
        } else {
            (self.e1_qudit, self.e2_qudit)
        }
    }
}

pub fn error_estimate(n1: usize, n2: usize, e1: f64, e2: f64) -> f64 {
    e1 * n1 as f64 + e2 * n2 as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircuitStats {
    pub levels: usize,
    pub counts: GateCounts,
    pub n1: usize,
    pub n2: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
}

pub fn qudit_stats(c: &QuditCircuit, rates: Option<&ErrorRates>) -> CircuitStats {
    let counts = c.counts();
    let (n1, n2) = (counts.r, counts.xx);
    let error = rates.map(|r| {
        let (e1, e2) = r.for_levels(c.levels);
        error_estimate(n1, n2, e1, e2)
    });
    CircuitStats {
        levels: c.levels,
        counts,
        n1,
        n2,
        error,
    }
}

/// Counts of a native qubit IR circuit: `rz` is virtual, `r` a pulse and any
/// entangling gate one two-particle gate.
pub fn qubit_counts(c: &QubitCircuit) -> GateCounts {
    let mut out = GateCounts::default();
    for g in c.gates() {
        match g.name.as_str() {
            "rz" => out.ph += 1,
            _ if g.qubits.len() == 1 => out.r += 1,
            name if mcz_arity(name).is_some() || g.qubits.len() >= 2 => out.xx += 1,
            _ => {}
        }
    }
    out
}
