//! Ion quantum computer JSON format (`.iqc.json`).
//!
//! A file is an array of circuits:
//!
//! ```json
//! [{"repetitions": 100, "levels": 3, "sequence": [
//!   {"type": "Rz", "angle": 0.5, "upper_state": 2, "qudit": 0},
//!   {"type": "Rphi", "angle": 1.0, "axis": 0.5, "upper_state": 1, "qudit": 0},
//!   {"type": "XX", "angle": 0.25, "upper_state": 1, "qudits": [0, 1]}]}]
//! ```
//!
//! Angles are in units of π. `Rphi` with upper state `i` is `R{0i}`, `Rz`
//! with upper state `i` is `Ph{i}`, and `XX` always acts on `(0,1)|(0,1)`.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::qudit::{QuditCircuit, QuditOp};
use crate::sim::wrap_angle;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum IqcGate {
    Rz {
        angle: f64,
        upper_state: usize,
        qudit: usize,
    },
    Rphi {
        angle: f64,
        axis: f64,
        upper_state: usize,
        qudit: usize,
    },
    XX {
        angle: f64,
        upper_state: usize,
        qudits: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IqcCircuit {
    pub repetitions: u64,
    pub levels: usize,
    pub sequence: Vec<IqcGate>,
}

/// Angle in units of π, wrapped into (-2, 2].
fn turns(theta: f64) -> f64 {
    wrap_angle(theta / std::f64::consts::PI, 4.0) + 0.0
}

fn axis(phi: f64) -> f64 {
    wrap_angle(phi / std::f64::consts::PI, 2.0) + 0.0
}

pub fn to_iqc(circuit: &QuditCircuit, repetitions: u64) -> Result<IqcCircuit> {
    if repetitions == 0 {
        return Err(Error::Unsupported("repetitions must be at least 1".into()));
    }
    let mut sequence = Vec::new();
    for op in &circuit.ops {
        let gate = match *op {
            QuditOp::Ph { qudit, level, theta } => IqcGate::Rz {
                angle: turns(theta),
                upper_state: level,
                qudit,
            },
            QuditOp::R {
                qudit,
                levels: (0, i),
                theta,
                phi,
            } => IqcGate::Rphi {
                angle: turns(theta),
                axis: axis(phi),
                upper_state: i,
                qudit,
            },
            QuditOp::XX {
                qudits: (a, b),
                levels: ((0, 1), (0, 1)),
                theta,
            } => IqcGate::XX {
                angle: turns(theta),
                upper_state: 1,
                qudits: [a, b],
            },
            QuditOp::Barrier { .. } => continue,
            _ => return Err(Error::SelectionRule(op.to_string())),
        };
        sequence.push(gate);
    }
    Ok(IqcCircuit {
        repetitions,
        levels: circuit.levels,
        sequence,
    })
}

/// Serializes circuits into one `.iqc.json` document.
pub fn emit(circuits: &[(QuditCircuit, u64)]) -> Result<String> {
    let docs = circuits
        .iter()
        .map(|(c, r)| to_iqc(c, *r))
        .collect::<Result<Vec<_>>>()?;
    let mut text = serde_json::to_string_pretty(&docs)?;
    text.push('\n');
    Ok(text)
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field '{key}'")))
}

fn number(obj: &serde_json::Map<String, Value>, path: &str, key: &str) -> Result<f64> {
    field(obj, path, key)?
        .as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(&format!("{path}/{key}"), "expected a finite number"))
}

fn index(obj: &serde_json::Map<String, Value>, path: &str, key: &str) -> Result<usize> {
    let v = field(obj, path, key)?;
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(&format!("{path}/{key}"), "expected a non-negative integer"))
}

fn parse_gate(v: &Value, path: &str, levels: usize) -> Result<QuditOp> {
    let obj = v.as_object().ok_or_else(|| schema(path, "expected an object"))?;
    let kind = field(obj, path, "type")?
        .as_str()
        .ok_or_else(|| schema(&format!("{path}/type"), "expected a string"))?;
    let pi = std::f64::consts::PI;
    let upper = index(obj, path, "upper_state")?;
    if upper >= levels {
        return Err(schema(
            &format!("{path}/upper_state"),
            format!("level {upper} ≥ levels={levels}"),
        ));
    }
    let angle = number(obj, path, "angle")? * pi;
    match kind {
        "Rz" => Ok(QuditOp::ph(index(obj, path, "qudit")?, upper, angle)),
        "Rphi" => {
            if upper == 0 {
                return Err(schema(
                    &format!("{path}/upper_state"),
                    "Rphi needs an upper state above 0",
                ));
            }
            Ok(QuditOp::r(
                index(obj, path, "qudit")?,
                0,
                upper,
                angle,
                number(obj, path, "axis")? * pi,
            ))
        }
        "XX" => {
            if upper != 1 {
                return Err(schema(
                    &format!("{path}/upper_state"),
                    format!("unsupported upper_state {upper}"),
                ));
            }
            let qpath = format!("{path}/qudits");
            let qs = field(obj, path, "qudits")?
                .as_array()
                .ok_or_else(|| schema(&qpath, "expected an array"))?;
            if qs.len() != 2 {
                return Err(schema(&qpath, "expected two qudits"));
            }
            let q = |k: usize| {
                qs[k]
                    .as_u64()
                    .map(|x| x as usize)
                    .ok_or_else(|| schema(&format!("{qpath}/{k}"), "expected a non-negative integer"))
            };
            let (a, b) = (q(0)?, q(1)?);
            if a == b {
                return Err(schema(&qpath, "qudits must differ"));
            }
            Ok(QuditOp::xx(a, b, (0, 1), (0, 1), angle))
        }
        other => Err(schema(&format!("{path}/type"), format!("unknown gate type '{other}'"))),
    }
}

/// Parses an `.iqc.json` document. The qudit count of each circuit is one
/// past the highest index it uses.
pub fn parse_iqc(text: &str) -> Result<Vec<(QuditCircuit, u64)>> {
    let doc: Value = serde_json::from_str(text)?;
    let arr = doc
        .as_array()
        .ok_or_else(|| schema("", "expected an array of circuits"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (n, c) in arr.iter().enumerate() {
        let path = format!("/{n}");
        let obj = c.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
        let repetitions = field(obj, &path, "repetitions")?
            .as_u64()
            .filter(|r| *r >= 1)
            .ok_or_else(|| schema(&format!("{path}/repetitions"), "expected a positive integer"))?;
        let levels = index(obj, &path, "levels")?;
        if levels < 2 {
            return Err(schema(&format!("{path}/levels"), "expected at least 2 levels"));
        }
        let seq_path = format!("{path}/sequence");
        let seq = field(obj, &path, "sequence")?
            .as_array()
            .ok_or_else(|| schema(&seq_path, "expected an array"))?;
        let ops = seq
            .iter()
            .enumerate()
            .map(|(k, g)| parse_gate(g, &format!("{seq_path}/{k}"), levels))
            .collect::<Result<Vec<_>>>()?;
        let qudits = ops.iter().flat_map(|o| o.qudits()).map(|q| q + 1).max().unwrap_or(0);
        out.push((QuditCircuit { qudits, levels, ops }, repetitions));
    }
    Ok(out)
}
