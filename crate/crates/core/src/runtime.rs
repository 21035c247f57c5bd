//! Runtimes: a gate library (`qelib1.inc`), rewrite rules (`matcher.script`)
//! and target metadata (`runtime.json`).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{mcz_network, NetOp};
use crate::qasm::{self, ast::QasmProgram};
use crate::rewrite::{self, RuleScript};
use crate::sim::mcz_name;

/// Largest multi-controlled Z arity shipped in the bundled libraries.
pub const MAX_MCZ_ARITY: usize = 9;

pub const ENV_RUNTIME_DIR: &str = "QUDITC_RUNTIME_DIR";

pub const BUNDLED: &[&str] = &["emulator", "ion", "ion-ir"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NativeGate {
    pub params: usize,
    pub qubits: usize,
}

pub type NativeSet = BTreeMap<String, NativeGate>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    Emulator,
    Ion,
    IonIr,
}

/// Which level pairs single-qudit pulses may couple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Transitions {
    /// `"star"`: every pair `(0, i)`.
    Named(String),
    Pairs(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IonDeviceSpec {
    pub transitions: Transitions,
    /// The one level pair per qudit the two-qudit gate may couple.
    pub xx_levels: ((usize, usize), (usize, usize)),
}

impl IonDeviceSpec {
    pub fn star() -> Self {
        Self {
            transitions: Transitions::Named("star".into()),
            xx_levels: ((0, 1), (0, 1)),
        }
    }

    /// Allowed single-qudit level pairs for `d` levels, each as `(low, high)`.
    pub fn r_pairs(&self, d: usize) -> Result<Vec<(usize, usize)>> {
        match &self.transitions {
            Transitions::Named(n) if n == "star" => Ok((1..d).map(|i| (0, i)).collect()),
            Transitions::Named(n) => Err(Error::RuntimeInconsistent {
                runtime: "device".into(),
                message: format!("unknown transition set '{n}'"),
            }),
            Transitions::Pairs(p) => Ok(p
                .iter()
                .filter(|(a, b)| *a < d && *b < d)
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Manifest {
    name: String,
    target: TargetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    device: Option<IonDeviceSpec>,
}

#[derive(Debug, Clone)]
pub struct Runtime {
    pub name: String,
    pub target: TargetKind,
    pub library: String,
    pub rules_source: String,
    pub rules: RuleScript,
    pub natives: NativeSet,
    pub device: Option<IonDeviceSpec>,
    library_program: QasmProgram,
}

impl Runtime {
    /// Loads a runtime by bundled name, by name under a directory listed in
    /// `QUDITC_RUNTIME_DIR`, or from a runtime directory path.
    pub fn load(name_or_path: &str) -> Result<Runtime> {
        let path = Path::new(name_or_path);
        if path.join("runtime.json").is_file() {
            return Self::from_dir(path);
        }
        if let Some(dirs) = std::env::var_os(ENV_RUNTIME_DIR) {
            for dir in std::env::split_paths(&dirs) {
                let candidate: PathBuf = dir.join(name_or_path);
                if candidate.join("runtime.json").is_file() {
                    return Self::from_dir(&candidate);
                }
            }
        }
        Self::bundled(name_or_path)
    }

    pub fn bundled(name: &str) -> Result<Runtime> {
        let (library, rules, manifest) = match name {
            "emulator" => (
                include_str!("../runtimes/emulator/qelib1.inc"),
                include_str!("../runtimes/emulator/matcher.script"),
                include_str!("../runtimes/emulator/runtime.json"),
            ),
            "ion" => (
                include_str!("../runtimes/ion/qelib1.inc"),
                include_str!("../runtimes/ion/matcher.script"),
                include_str!("../runtimes/ion/runtime.json"),
            ),
            "ion-ir" => (
                include_str!("../runtimes/ion-ir/qelib1.inc"),
                include_str!("../runtimes/ion-ir/matcher.script"),
                include_str!("../runtimes/ion-ir/runtime.json"),
            ),
            other => return Err(Error::UnknownRuntime(other.to_string())),
        };
        Self::from_sources(library, rules, manifest)
    }

    pub fn from_dir(dir: &Path) -> Result<Runtime> {
        let read = |f: &str| std::fs::read_to_string(dir.join(f));
        Self::from_sources(&read("qelib1.inc")?, &read("matcher.script")?, &read("runtime.json")?)
    }

    /// Parses and cross-validates the three runtime files.
    pub fn from_sources(library: &str, rules_source: &str, manifest: &str) -> Result<Runtime> {
        let manifest: Manifest = serde_json::from_str(manifest)?;
        let name = manifest.name.clone();
        let bad = |message: String| Error::RuntimeInconsistent {
            runtime: name.clone(),
            message,
        };

        let program = qasm::parse_qasm(library, "qelib1.inc", &|_| None)?;
        if !program.body.is_empty() || program.num_qubits() > 0 {
            return Err(bad("gate library must contain only declarations".into()));
        }
        let natives: NativeSet = program
            .gatedefs
            .values()
            .filter(|d| d.is_opaque())
            .map(|d| {
                (
                    d.name.clone(),
                    NativeGate {
                        params: d.params.len(),
                        qubits: d.qubits.len(),
                    },
                )
            })
            .collect();
        if natives.is_empty() {
            return Err(bad("gate library declares no opaque gates".into()));
        }
        qasm::check_definitions(&program).map_err(|e| bad(e.to_string()))?;

        let rules = rewrite::parse_rules(rules_source, "matcher.script")?;
        let arities = natives.iter().map(|(k, v)| (k.clone(), (v.params, v.qubits))).collect();
        rewrite::check_natives(&rules, &arities).map_err(bad)?;

        match (manifest.target, &manifest.device) {
            (TargetKind::Ion, None) => return Err(bad("ion target requires a device spec".into())),
            (TargetKind::Ion, Some(dev)) => {
                let pairs = dev.r_pairs(2)?;
                if pairs.is_empty() {
                    return Err(bad("device allows no transitions".into()));
                }
            }
            (_, Some(_)) => return Err(bad("only ion targets carry a device spec".into())),
            _ => {}
        }

        Ok(Runtime {
            name: manifest.name,
            target: manifest.target,
            library: library.to_string(),
            rules_source: rules_source.to_string(),
            rules,
            natives,
            device: manifest.device,
            library_program: program,
        })
    }

    /// Source of an include as seen by programs compiled for this runtime.
    pub fn resolve_include(&self, name: &str) -> Option<String> {
        (name == "qelib1.inc").then(|| self.library.clone())
    }

    pub fn library_program(&self) -> &QasmProgram {
        &self.library_program
    }

    pub fn is_native(&self, name: &str) -> bool {
        self.natives.contains_key(name)
    }

    /// Writes the runtime in directory layout.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("qelib1.inc"), &self.library)?;
        std::fs::write(dir.join("matcher.script"), &self.rules_source)?;
        let manifest = Manifest {
            name: self.name.clone(),
            target: self.target,
            device: self.device.clone(),
        };
        std::fs::write(
            dir.join("runtime.json"),
            serde_json::to_string_pretty(&manifest)? + "\n",
        )?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Generators for the bundled runtime files. The checked-in files under
// `runtimes/` are exactly their output.

fn qubit_args(k: usize) -> String {
    (0..k).map(|i| format!("q{i}")).collect::<Vec<_>>().join(", ")
}

fn mcx_name(arity: usize) -> String {
    match arity {
        2 => "cx".into(),
        3 => "ccx".into(),
        n => format!("c{}x", n - 1),
    }
}

const SINGLE_QUBIT: &str = "\
gate x q0 { r(pi, 0) q0; }
gate y q0 { r(pi, pi/2) q0; }
gate z q0 { rz(pi) q0; }
gate h q0 {
  r(pi/2, -pi/2) q0;
  rz(pi) q0;
}
gate s q0 { rz(pi/2) q0; }
gate sdg q0 { rz(-pi/2) q0; }
gate t q0 { rz(pi/4) q0; }
gate tdg q0 { rz(-pi/4) q0; }
gate rx(the) q0 { r(the, 0) q0; }
gate ry(the) q0 { r(the, pi/2) q0; }
gate u3(the, phi, lam) q0 {
  rz(lam) q0;
  ry(the) q0;
  rz(phi) q0;
}
gate u2(phi, lam) q0 { u3(pi/2, phi, lam) q0; }
gate u1(lam) q0 { rz(lam) q0; }
gate id q0 { rz(0) q0; }
";

const TWO_QUBIT: &str = "\
gate CX q0, q1 { cx q0, q1; }
gate cy q0, q1 {
  sdg q1;
  cx q0, q1;
  s q1;
}
gate swap q0, q1 {
  cx q0, q1;
  cx q1, q0;
  cx q0, q1;
}
gate crz(lam) q0, q1 {
  rz(lam/2) q1;
  cx q0, q1;
  rz(-lam/2) q1;
  cx q0, q1;
}
gate cu1(lam) q0, q1 {
  rz(lam/2) q0;
  cx q0, q1;
  rz(-lam/2) q1;
  cx q0, q1;
  rz(lam/2) q1;
}
";

const CX_VIA_CZ: &str = "\
gate cx q0, q1 {
  h q1;
  cz q0, q1;
  h q1;
}
";

fn angle_text(a: f64) -> String {
    let k = (a / std::f64::consts::PI * 256.0).round() as i64;
    debug_assert!((k as f64 * std::f64::consts::PI / 256.0 - a).abs() < 1e-12);
    let (mut num, mut den) = (k, 256i64);
    while num % 2 == 0 && den > 1 {
        num /= 2;
        den /= 2;
    }
    let sign = if num < 0 { "-" } else { "" };
    let num = num.abs();
    match (num, den) {
        (0, _) => "0".into(),
        (1, 1) => format!("{sign}pi"),
        (n, 1) => format!("{sign}{n}*pi"),
        (1, d) => format!("{sign}pi/{d}"),
        (n, d) => format!("{sign}{n}*pi/{d}"),
    }
}

fn mcz_family(out: &mut String, opaque: bool) {
    for k in 3..=MAX_MCZ_ARITY {
        let name = mcz_name(k);
        if opaque {
            let _ = writeln!(out, "opaque {name} {};", qubit_args(k));
            continue;
        }
        let _ = writeln!(out, "gate {name} {} {{", qubit_args(k));
        let q: Vec<usize> = (0..k).collect();
        for op in mcz_network(&q) {
            match op {
                NetOp::Phase(t, a) => {
                    let _ = writeln!(out, "  rz({}) q{t};", angle_text(a));
                }
                NetOp::Cx(c, t) => {
                    let _ = writeln!(out, "  cx q{c}, q{t};");
                }
            }
        }
        out.push_str("}\n");
    }
}

fn mcx_family(out: &mut String) {
    for k in 3..=MAX_MCZ_ARITY {
        let t = k - 1;
        let _ = writeln!(out, "gate {} {} {{", mcx_name(k), qubit_args(k));
        let _ = writeln!(out, "  h q{t};\n  {} {};\n  h q{t};\n}}", mcz_name(k), qubit_args(k));
    }
    out.push_str("gate cswap q0, q1, q2 {\n  cx q2, q1;\n  ccx q0, q1, q2;\n  cx q2, q1;\n}\n");
}

/// Text of the bundled `qelib1.inc` for a runtime.
pub fn generate_library(kind: TargetKind) -> String {
    let mut out = String::new();
    match kind {
        TargetKind::IonIr => {
            out.push_str("// Trapped-ion intermediate representation.\nopaque rz(the) q0;\nopaque r(the, phi) q0;\nopaque cz q0, q1;\n");
            mcz_family(&mut out, true);
            out.push_str(SINGLE_QUBIT);
            out.push_str("gate U(the, phi, lam) q0 { u3(the, phi, lam) q0; }\n");
            out.push_str(CX_VIA_CZ);
        }
        TargetKind::Ion => {
            out.push_str("// Trapped-ion qubit native set.\nopaque rz(the) q0;\nopaque r(the, phi) q0;\nopaque xx(the) q0, q1;\n");
            out.push_str(SINGLE_QUBIT);
            out.push_str("gate U(the, phi, lam) q0 { u3(the, phi, lam) q0; }\n");
            out.push_str(
                "gate cz q0, q1 {\n  r(pi/2, pi/2) q0;\n  r(pi/2, pi/2) q1;\n  xx(pi/4) q0, q1;\n  r(-pi/2, pi/2) q0;\n  r(-pi/2, pi/2) q1;\n  rz(-pi/2) q0;\n  rz(-pi/2) q1;\n}\n",
            );
            out.push_str(CX_VIA_CZ);
        }
        TargetKind::Emulator => {
            out.push_str("// Generic emulator.\nopaque U(theta, phi, lambda) q0;\nopaque cx q0, q1;\n");
            out.push_str(
                "gate rz(the) q0 { U(0, 0, the) q0; }\ngate r(the, phi) q0 { U(the, phi - pi/2, pi/2 - phi) q0; }\n",
            );
            out.push_str(SINGLE_QUBIT);
            out.push_str("gate cz q0, q1 {\n  h q1;\n  cx q0, q1;\n  h q1;\n}\n");
        }
    }
    out.push_str(TWO_QUBIT);
    if kind != TargetKind::IonIr {
        mcz_family(&mut out, false);
    }
    mcx_family(&mut out);
    out
}

const RZ_RULES: &str = "\
// Reducing sequence length
rz(a0) . rz(a1) => {
  return rz(a0 + a1);
}
// Replacing gate parameters according to symmetries
rz(a) => {
  a_2 = a / 2;
  s = sin(a_2);
  if s == 0 {
    return id;
  } else if a_2 > pi || a_2 < -pi {
    return rz(2 * atan2(s, cos(a_2)));
  }
}
";

const R_RULES: &str = "\
// Two rotations fuse into one rotation followed by a phase
r(t0, p0) . r(t1, p1) => {
  if p0 == p1 {
    return r(t0 + t1, p0);
  }
  c0 = cos(t0 / 2);
  s0 = sin(t0 / 2);
  c1 = cos(t1 / 2);
  s1 = sin(t1 / 2);
  w = c1 * c0 - s1 * s0 * cos(p1 - p0);
  vx = c1 * s0 * cos(p0) + c0 * s1 * cos(p1);
  vy = c1 * s0 * sin(p0) + c0 * s1 * sin(p1);
  vz = s0 * s1 * sin(p0 - p1);
  h = atan2(vz, w);
  return r(2 * atan2(sqrt(vx * vx + vy * vy), sqrt(w * w + vz * vz)), atan2(vy, vx) - h) . rz(2 * h);
}
// Angle in (0, pi], axis in (-pi, pi], up to global phase
r(a, b) => {
  if sin(a / 2) == 0 {
    return id;
  }
  t = pi - mod(pi - a, 2 * pi);
  p = b;
  if t < 0 {
    t = -t;
    p = b + pi;
  }
  p = pi - mod(pi - p, 2 * pi);
  if t == a && p == b {
  } else {
    return r(t, p);
  }
}
// Preserving some ordering in a sequence
rz(a) . r(b, c) => {
  return r(b, c - a) . rz(a);
}
";

fn push_phase_rules(out: &mut String, gate: &str, arity: usize) {
    let vars: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
    let list = vars.join(",");
    for v in &vars {
        let _ = writeln!(
            out,
            "rz(a) {v} . {gate} {list} => {{\n  return {gate} {list} . rz(a) {v};\n}}"
        );
    }
}

/// Text of the bundled `matcher.script` for a runtime.
pub fn generate_rules(kind: TargetKind) -> String {
    let mut out = String::new();
    match kind {
        TargetKind::IonIr | TargetKind::Ion => {
            out.push_str(RZ_RULES);
            out.push_str(R_RULES);
            if kind == TargetKind::IonIr {
                push_phase_rules(&mut out, "cz", 2);
                out.push_str("cz x,y . cz x,y => {\n  return id;\n}\ncz x,y . cz y,x => {\n  return id;\n}\n");
                for k in 3..=MAX_MCZ_ARITY {
                    push_phase_rules(&mut out, &mcz_name(k), k);
                }
                for k in 3..=MAX_MCZ_ARITY {
                    let list = (0..k).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
                    let _ = writeln!(out, "{0} {1} . {0} {1} => {{\n  return id;\n}}", mcz_name(k), list);
                }
            } else {
                out.push_str(
                    "\
xx(a) x,y . xx(b) x,y => {
  return xx(a + b) x,y;
}
xx(a) x,y . xx(b) y,x => {
  return xx(a + b) x,y;
}
xx(a) x,y => {
  if sin(a) == 0 {
    return id;
  }
}
",
                );
            }
        }
        TargetKind::Emulator => out.push_str(
            "\
// Diagonal single-qubit gates merge and vanish at multiples of 2pi
U(a0, b0, c0) . U(a1, b1, c1) => {
  if a0 == 0 && a1 == 0 {
    return U(0, 0, b0 + c0 + b1 + c1);
  }
}
U(a, b, c) => {
  if a == 0 && sin((b + c) / 2) == 0 {
    return id;
  }
}
U(a, b, c) x . cx x,y => {
  if a == 0 {
    return cx x,y . U(a, b, c) x;
  }
}
cx x,y . cx x,y => {
  return id;
}
",
        ),
    }
    out
}

pub fn generate_manifest(kind: TargetKind) -> String {
    let (name, device) = match kind {
        TargetKind::Emulator => ("emulator", None),
        TargetKind::Ion => ("ion", Some(IonDeviceSpec::star())),
        TargetKind::IonIr => ("ion-ir", None),
    };
    let m = Manifest {
        name: name.into(),
        target: kind,
        device,
    };
    serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds() -> [(TargetKind, &'static str); 3] {
        [
            (TargetKind::Emulator, "emulator"),
            (TargetKind::Ion, "ion"),
            (TargetKind::IonIr, "ion-ir"),
        ]
    }

    #[test]
    fn bundled_files_are_generated() {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("runtimes");
        let update = std::env::var_os("QUDITC_UPDATE_RUNTIMES").is_some();
        for (kind, name) in kinds() {
            let dir = root.join(name);
            for (file, text) in [
                ("qelib1.inc", generate_library(kind)),
                ("matcher.script", generate_rules(kind)),
                ("runtime.json", generate_manifest(kind)),
            ] {
                if update {
                    std::fs::create_dir_all(&dir).unwrap();
                    std::fs::write(dir.join(file), &text).unwrap();
                }
                let on_disk = std::fs::read_to_string(dir.join(file)).unwrap();
                assert_eq!(
                    on_disk, text,
                    "{name}/{file} is stale; rerun with QUDITC_UPDATE_RUNTIMES=1"
                );
            }
        }
    }

    #[test]
    fn native_sets() {
        let set = |name: &str| -> Vec<(String, usize, usize)> {
            Runtime::bundled(name)
                .unwrap()
                .natives
                .iter()
                .map(|(k, v)| (k.clone(), v.params, v.qubits))
                .collect()
        };
        assert_eq!(set("emulator"), vec![("U".into(), 3, 1), ("cx".into(), 0, 2)]);
        assert_eq!(
            set("ion"),
            vec![("r".into(), 2, 1), ("rz".into(), 1, 1), ("xx".into(), 1, 2)]
        );
        let ir = set("ion-ir");
        let names: Vec<&str> = ir.iter().map(|n| n.0.as_str()).collect();
        for n in ["rz", "r", "cz", "ccz", "cccz", "c4z", "c8z"] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(!names.contains(&"c9z"));
        assert_eq!(ir.iter().find(|n| n.0 == "c8z").unwrap().2, 9);
    }

    #[test]
    fn unknown_runtime() {
        assert!(matches!(
            Runtime::bundled("superconducting"),
            Err(Error::UnknownRuntime(_))
        ));
    }

    #[test]
    fn rule_with_foreign_gate_is_rejected() {
        let lib = generate_library(TargetKind::IonIr);
        let rules = "xx(a) x,y => { return id; }";
        let err = Runtime::from_sources(&lib, rules, &generate_manifest(TargetKind::IonIr)).unwrap_err();
        assert!(err.to_string().contains("non-native gate 'xx'"), "{err}");
    }

    #[test]
    fn ion_manifest_requires_device() {
        let lib = generate_library(TargetKind::Ion);
        let rules = generate_rules(TargetKind::Ion);
        let err = Runtime::from_sources(&lib, &rules, r#"{"name":"x","target":"ion"}"#).unwrap_err();
        assert!(err.to_string().contains("device spec"));
    }

    #[test]
    fn bundled_scripts_carry_reference_rule_families() {
        for (_, name) in kinds() {
            let rt = Runtime::bundled(name).unwrap();
            assert!(!rt.rules.rules.is_empty());
        }
        let ir = Runtime::bundled("ion-ir").unwrap();
        let heads: Vec<String> = ir
            .rules
            .rules
            .iter()
            .map(|r| r.name.split(" (").next().unwrap().to_string())
            .collect();
        assert!(heads.contains(&"rz(a0) . rz(a1)".to_string()));
        assert!(heads.contains(&"rz(a)".to_string()));
        assert!(heads.contains(&"rz(a) . r(b, c)".to_string()));
        assert!(heads.contains(&"rz(a) x0 . cz x0,x1".to_string()));
    }

    #[test]
    fn angle_text_forms() {
        use std::f64::consts::PI;
        assert_eq!(angle_text(PI / 4.0), "pi/4");
        assert_eq!(angle_text(-PI / 2.0), "-pi/2");
        assert_eq!(angle_text(3.0 * PI / 8.0), "3*pi/8");
        assert_eq!(angle_text(PI), "pi");
    }

    #[test]
    fn runtime_directory_round_trip() {
        let dir = std::env::temp_dir().join(format!("quditc-rt-{}", std::process::id()));
        let rt = Runtime::bundled("ion").unwrap();
        rt.write_dir(&dir).unwrap();
        let back = Runtime::load(dir.to_str().unwrap()).unwrap();
        assert_eq!(back.natives, rt.natives);
        assert_eq!(back.device, rt.device);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
