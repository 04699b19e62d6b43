//! Finite-state calculus with Optimality Theory operators.
//!
//! The crate is layered bottom-up:
//!
//! - [`fsm`], [`ops`], [`determinize`], [`apply`], [`att`]: machines over
//!   pair labels and the closed set of regular operations on them.
//! - [`regex`]: a small expression language with macros, compiled to
//!   machines. It covers the usual calculus operators plus `replace`,
//!   `ignore` and `intro_each_pos`.
//! - [`ot`]: lenient composition and the two optimality operators, one that
//!   bounds violation counts and one that matches violation positions
//!   against alternative candidates.
//! - [`grammars`]: built-in syllabification and toy grammars.
//! - [`exactness`]: functionality testing, exactness verdicts and the
//!   greedy precision search.

pub mod apply;
pub mod att;
pub mod determinize;
pub mod error;
pub mod exactness;
pub mod fsm;
pub mod grammars;
pub mod ops;
pub mod ot;
pub mod regex;
pub mod rewrite;
pub mod symbol;

pub use error::{Error, Result};
pub use fsm::{Fsm, Kind, Label, StateId};
pub use symbol::{Alphabet, Sym, EPS};
