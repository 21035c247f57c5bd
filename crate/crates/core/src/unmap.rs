//! Conversion of measured qudit states back into classical bit-strings.
//!
//! Dit-strings are written most significant qudit first: the rightmost
//! character is qudit 0, the same way the output bit-strings put clbit 0
//! rightmost. The array form `[d_{M-1}, ..., d_0]` uses the same order.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::mapping::Mapping;
use crate::qudit::QuditParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnmapMode {
    Strict,
    #[serde(alias = "non-strict", alias = "non_strict")]
    Nonstrict,
}

/// Which classical bit receives each measured qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureMap {
    pub clbits: usize,
    /// `(qubit, clbit)` pairs.
    pub map: Vec<(usize, usize)>,
}

impl MeasureMap {
    pub fn new(clbits: usize, map: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = vec![false; clbits];
        for &(q, c) in &map {
            if c >= clbits {
                return Err(Error::Samples(format!("qubit {q} measured into clbit {c} ≥ {clbits}")));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::Samples(format!("clbit {c} written by two measurements")));
            }
        }
        Ok(Self { clbits, map })
    }

    /// Qubit `n` into clbit `n` for every qubit.
    pub fn identity(n: usize) -> Self {
        Self {
            clbits: n,
            map: (0..n).map(|q| (q, q)).collect(),
        }
    }
}

/// Measured states with weights (shot counts or probabilities).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleTable<W = u64> {
    /// `digits[q]` is the outcome of qudit (or clbit) `q`.
    pub entries: Vec<(Vec<usize>, W)>,
}

impl<W: Copy + Default + AddAssign> SampleTable<W> {
    pub fn total(&self) -> W {
        let mut t = W::default();
        for (_, w) in &self.entries {
            t += *w;
        }
        t
    }

    /// Merges duplicate states and sorts by state string.
    pub fn canonical(&self) -> Self {
        let mut acc: BTreeMap<Vec<usize>, W> = BTreeMap::new();
        for (s, w) in &self.entries {
            let mut key = s.clone();
            key.reverse();
            *acc.entry(key).or_default() += *w;
        }
        Self {
            entries: acc
                .into_iter()
                .map(|(mut k, w)| {
                    k.reverse();
                    (k, w)
                })
                .collect(),
        }
    }
}

pub fn digits_to_string(digits: &[usize]) -> String {
    digits
        .iter()
        .rev()
        .map(|&x| std::char::from_digit(x as u32, 36).expect("digit below 36"))
        .collect()
}

fn string_to_digits(s: &str, path: &str) -> Result<Vec<usize>> {
    s.chars()
        .rev()
        .map(|c| {
            c.to_digit(36)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Samples(format!("{path}: bad digit '{c}'")))
        })
        .collect()
}

impl SampleTable<u64> {
    /// Parses `[{"state": "012" | [0,1,2], "count": n}, ...]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let arr = doc
            .as_array()
            .ok_or_else(|| Error::Samples("expected an array of samples".into()))?;
        let mut entries = Vec::with_capacity(arr.len());
        let mut seen = std::collections::BTreeSet::new();
        for (n, e) in arr.iter().enumerate() {
            let path = format!("/{n}");
            let state = match e.get("state") {
                Some(Value::String(s)) => string_to_digits(s, &path)?,
                Some(Value::Array(xs)) => {
                    let mut v = xs
                        .iter()
                        .map(|x| x.as_u64().map(|x| x as usize))
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| Error::Samples(format!("{path}/state: expected non-negative integers")))?;
                    v.reverse();
                    v
                }
                _ => return Err(Error::Samples(format!("{path}/state: expected a string or an array"))),
            };
            let count = e
                .get("count")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Samples(format!("{path}/count: expected a non-negative integer")))?;
            if !seen.insert(state.clone()) {
                return Err(Error::Samples(format!(
                    "{path}/state: duplicate state '{}'",
                    digits_to_string(&state)
                )));
            }
            entries.push((state, count));
        }
        Ok(Self { entries })
    }

    pub fn to_json(&self) -> String {
        let arr: Vec<Value> = self
            .canonical()
            .entries
            .iter()
            .map(|(s, c)| serde_json::json!({"state": digits_to_string(s), "count": c}))
            .collect();
        let mut text = serde_json::to_string_pretty(&arr).expect("plain values");
        text.push('\n');
        text
    }
}

/// Maps qudit samples to classical bit-strings.
///
/// `Strict` drops any sample with a level `≥ 2^b`, and any sample where a slot
/// that holds no qubit reads 1. `Nonstrict` clamps such levels to `2^b - 1`
/// and ignores unmapped slots.
pub fn unmap<W: Copy + Default + AddAssign>(
    samples: &SampleTable<W>,
    mapping: &Mapping,
    params: QuditParams,
    measures: &MeasureMap,
    mode: UnmapMode,
) -> Result<SampleTable<W>> {
    let m = mapping.qudits;
    let top = params.qubit_levels() - 1;
    for &(q, _) in &measures.map {
        if q >= mapping.num_qubits() {
            return Err(Error::Samples(format!("measured qubit {q} is not in the mapping")));
        }
    }
    let mut out = Vec::with_capacity(samples.entries.len());
    'samples: for (state, w) in &samples.entries {
        if state.len() != m {
            return Err(Error::Samples(format!(
                "state '{}' has {} digits, expected {m}",
                digits_to_string(state),
                state.len()
            )));
        }
        if let Some(x) = state.iter().find(|&&x| x >= params.d) {
            return Err(Error::Samples(format!(
                "state '{}': level {x} ≥ d={}",
                digits_to_string(state),
                params.d
            )));
        }
        let mut levels = state.clone();
        for (q, l) in levels.iter_mut().enumerate() {
            if *l > top {
                match mode {
                    UnmapMode::Strict => continue 'samples,
                    UnmapMode::Nonstrict => *l = top,
                }
            }
            if mode == UnmapMode::Strict {
                for slot in 0..params.b {
                    if *l >> slot & 1 == 1 && mapping.qubit_at(q, slot).is_none() {
                        continue 'samples;
                    }
                }
            }
        }
        let mut bits = vec![0; measures.clbits];
        for &(qubit, clbit) in &measures.map {
            let s = mapping.slot(qubit);
            bits[clbit] = levels[s.qudit] >> s.slot & 1;
        }
        out.push((bits, *w));
    }
    Ok(SampleTable { entries: out }.canonical())
}

/// Everything `unmap` needs besides the samples, written next to each
/// transpiled file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub source: String,
    pub params: QuditParams,
    pub mapping: Mapping,
    pub measures: MeasureMap,
}

pub fn sidecar_to_json(entries: &[Sidecar]) -> String {
    let mut text = serde_json::to_string_pretty(entries).expect("plain values");
    text.push('\n');
    text
}

pub fn sidecar_from_json(text: &str) -> Result<Vec<Sidecar>> {
    let entries: Vec<Sidecar> = serde_json::from_str(text)?;
    for e in &entries {
        QuditParams::new(e.params.d, e.params.b)?;
        Mapping::new(e.mapping.slots.clone(), e.mapping.qudits, e.params.b)?;
        MeasureMap::new(e.measures.clbits, e.measures.map.clone())?;
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::default_mapping;

    fn table(pairs: &[(&str, u64)]) -> SampleTable {
        SampleTable {
            entries: pairs
                .iter()
                .map(|(s, c)| (string_to_digits(s, "").unwrap(), *c))
                .collect(),
        }
    }

    fn strings(t: &SampleTable) -> Vec<(String, u64)> {
        t.entries.iter().map(|(s, c)| (digits_to_string(s), *c)).collect()
    }

    #[test]
    fn leakage_modes() {
        let s = table(&[("012", 5), ("010", 7)]);
        let map = default_mapping(3, 1);
        let meas = MeasureMap::identity(3);
        let strict = unmap(&s, &map, QuditParams::QUTRIT, &meas, UnmapMode::Strict).unwrap();
        assert_eq!(strings(&strict), vec![("010".into(), 7)]);
        let loose = unmap(&s, &map, QuditParams::QUTRIT, &meas, UnmapMode::Nonstrict).unwrap();
        assert_eq!(strings(&loose), vec![("010".into(), 7), ("011".into(), 5)]);
        assert_eq!(loose.total(), s.total());
    }

    #[test]
    fn ququart_level_three() {
        let s = table(&[("3", 9)]);
        let out = unmap(
            &s,
            &default_mapping(2, 2),
            QuditParams::QUQUART,
            &MeasureMap::identity(2),
            UnmapMode::Strict,
        )
        .unwrap();
        assert_eq!(strings(&out), vec![("11".into(), 9)]);
    }

    #[test]
    fn unmapped_slot_strict_and_nonstrict() {
        let map = Mapping::from_pairs(&[(0, 0)], 2).unwrap();
        let s = table(&[("2", 4), ("1", 3)]);
        let meas = MeasureMap::identity(1);
        let strict = unmap(&s, &map, QuditParams::QUQUART, &meas, UnmapMode::Strict).unwrap();
        assert_eq!(strings(&strict), vec![("1".into(), 3)]);
        let loose = unmap(&s, &map, QuditParams::QUQUART, &meas, UnmapMode::Nonstrict).unwrap();
        assert_eq!(strings(&loose), vec![("0".into(), 4), ("1".into(), 3)]);
    }

    #[test]
    fn json_forms() {
        let a = SampleTable::from_json(r#"[{"state": "012", "count": 5}]"#).unwrap();
        let b = SampleTable::from_json(r#"[{"state": [0, 1, 2], "count": 5}]"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.entries[0].0, vec![2, 1, 0]);
        assert!(SampleTable::from_json("[]").unwrap().entries.is_empty());
        assert!(SampleTable::from_json(r#"[{"state": "0", "count": -1}]"#).is_err());
    }

    #[test]
    fn shape_errors() {
        let map = default_mapping(2, 1);
        let meas = MeasureMap::identity(2);
        assert!(unmap(&table(&[("0", 1)]), &map, QuditParams::QUTRIT, &meas, UnmapMode::Strict).is_err());
        assert!(unmap(
            &table(&[("03", 1)]),
            &map,
            QuditParams::QUTRIT,
            &meas,
            UnmapMode::Strict
        )
        .is_err());
    }
}
