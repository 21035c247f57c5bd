//! The `matcher.script` rewrite language and its fixpoint optimizer.
//!
//! ```text
//! rz(a0) . rz(a1) => { return rz(a0 + a1); }
//! rz(a) x . cz x,y => { return cz x,y . rz(a) x; }
//! ```
//!
//! Terms without qubit variables share one implicit qubit tuple. A block
//! that finishes without `return` leaves the match untouched.

mod ast;
mod engine;
mod eval;
mod parse;

pub use ast::{CallTerm, Expr, Op, PatternTerm, RewriteRule, RuleScript, Stmt};
pub use engine::{check_natives, find_match, optimize, optimize_with_stats, RewriteStats, REWRITE_CAP};
pub use eval::{eval_block, MatchBinding, Value, EQ_TOL};
pub use parse::{parse_rules, FUNCTIONS};
