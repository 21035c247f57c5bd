//! Placement of qubits into `(qudit, slot)` pairs.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot {
    pub qudit: usize,
    pub slot: usize,
}

/// `slots[n]` is the position of qubit `n`; slot `k` of a qudit is bit `k` of
/// its level index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mapping {
    #[serde(rename = "qubits")]
    pub slots: Vec<Slot>,
    /// Qudit count `M`.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub qudits: usize,
}

fn is_zero(x: &usize) -> bool {
    *x == 0
}

impl Mapping {
    /// Validates slot ranges and uniqueness. `M` is the larger of `qudits` and
    /// one past the highest qudit index used.
    pub fn new(slots: Vec<Slot>, qudits: usize, b: usize) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (n, s) in slots.iter().enumerate() {
            if s.slot >= b {
                return Err(Error::Mapping(format!("qubit {n}: slot {} ≥ b={b}", s.slot)));
            }
            if !seen.insert(*s) {
                return Err(Error::Mapping(format!(
                    "qubit {n}: duplicate position (qudit {}, slot {})",
                    s.qudit, s.slot
                )));
            }
        }
        let used = slots.iter().map(|s| s.qudit + 1).max().unwrap_or(0);
        Ok(Self {
            slots,
            qudits: qudits.max(used),
        })
    }

    pub fn from_pairs(pairs: &[(usize, usize)], b: usize) -> Result<Self> {
        Self::new(pairs.iter().map(|&(qudit, slot)| Slot { qudit, slot }).collect(), 0, b)
    }

    pub fn num_qubits(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, qubit: usize) -> Slot {
        self.slots[qubit]
    }

    /// Qubit stored at `(qudit, slot)`, if any.
    pub fn qubit_at(&self, qudit: usize, slot: usize) -> Option<usize> {
        self.slots.iter().position(|s| s.qudit == qudit && s.slot == slot)
    }
}

/// Consecutive packing: `Q_n = n / b`, `I_n = n mod b`.
pub fn default_mapping(n: usize, b: usize) -> Mapping {
    let slots = (0..n)
        .map(|k| Slot {
            qudit: k / b,
            slot: k % b,
        })
        .collect();
    Mapping {
        slots,
        qudits: n.div_ceil(b),
    }
}

/// Parses `{"qubits": [{"qudit": 0, "slot": 0}, ...]}`.
pub fn parse_mapping(text: &str, b: usize) -> Result<Mapping> {
    let raw: Mapping = serde_json::from_str(text)?;
    Mapping::new(raw.slots, raw.qudits, b)
}

pub fn load_mapping(path: &Path, b: usize) -> Result<Mapping> {
    parse_mapping(&std::fs::read_to_string(path)?, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(m: &Mapping) -> (Vec<usize>, Vec<usize>) {
        (
            m.slots.iter().map(|s| s.qudit).collect(),
            m.slots.iter().map(|s| s.slot).collect(),
        )
    }

    #[test]
    fn default_placements() {
        let m = default_mapping(3, 1);
        assert_eq!(pairs(&m), (vec![0, 1, 2], vec![0, 0, 0]));
        let m = default_mapping(6, 2);
        assert_eq!(pairs(&m), (vec![0, 0, 1, 1, 2, 2], vec![0, 1, 0, 1, 0, 1]));
        let m = default_mapping(5, 2);
        assert_eq!(pairs(&m), (vec![0, 0, 1, 1, 2], vec![0, 1, 0, 1, 0]));
        assert_eq!(m.qudits, 3);
    }

    #[test]
    fn custom_file() {
        let text = r#"{"qubits":[{"qudit":0,"slot":0},{"qudit":1,"slot":0},{"qudit":0,"slot":1}]}"#;
        let m = parse_mapping(text, 2).unwrap();
        assert_eq!(m.slot(2).qudit, m.slot(0).qudit);
        assert_eq!(m.qudits, 2);
        let err = parse_mapping(text, 1).unwrap_err().to_string();
        assert!(err.contains("slot 1 ≥ b=1"), "{err}");
    }

    #[test]
    fn duplicate_rejected() {
        assert!(Mapping::from_pairs(&[(0, 0), (0, 0)], 2).is_err());
    }
}
