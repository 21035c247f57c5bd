//! Transpiler from OpenQASM 2.0 qubit circuits to trapped-ion qudit circuits.
//!
//! The pipeline has three steps:
//!
//! 1. **Qubit transpilation** ([`qasm`], [`rewrite`]): parse, expand every gate
//!    down to the native set of a [`runtime::Runtime`], then optionally run the
//!    runtime's `matcher.script` peephole rules.
//! 2. **Qubit-to-qudit lowering** ([`mapping`], [`lowering`]): place each qubit
//!    in a `(qudit, slot)` pair and lower `rz`/`r`/`cz`/multi-controlled-Z into
//!    qudit `Ph`/`R`/`XX` operations for the chosen `(d, b)`.
//! 3. **Qudit finishing** ([`router`], [`qudit_opt`], [`iqc`]): route every
//!    operation onto allowed level transitions, peephole-optimize and emit the
//!    ion JSON format.
//!
//! Measurement samples from the device are mapped back to qubit results by
//! [`unmap`]. Every step can be checked against the dense simulator in [`sim`].

pub mod benchmarks;
pub mod error;
pub mod iqc;
pub mod ir;
pub mod lowering;
pub mod mapping;
pub mod network;
pub mod pipeline;
pub mod qasm;
pub mod qudit;
pub mod qudit_opt;
pub mod rewrite;
pub mod router;
pub mod runtime;
pub mod sim;
pub mod span;
pub mod stats;
pub mod unmap;

pub use error::{Error, Result};
pub use ir::{GateOp, IrOp, QubitCircuit};
pub use mapping::Mapping;
pub use qudit::{QuditCircuit, QuditOp, QuditParams};
pub use runtime::{Runtime, TargetKind};
pub use span::SourceSpan;
