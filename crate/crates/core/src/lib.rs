//! Finite-group computation engine for Andrews-Curtis graphs.
//!
//! The crate works with concrete finite groups given by Cayley tables and
//! provides:
//!
//! - group arithmetic, normal closures, quotients and abelianizations
//!   ([`group`]);
//! - free-group words and the Akbulut-Kirby family ([`words`]);
//! - invariant-factor decompositions of finite abelian groups and the
//!   Diaconis-Graham component count ([`abelian`]);
//! - exhaustive connected-component computation for plain and relativised
//!   Andrews-Curtis graphs, with replayable move certificates ([`graph`]);
//! - the N-Frattini subgroup, semisimple decompositions and the
//!   normal-generation rank formula ([`structure`]);
//! - the product-replacement random walk for sampling elements of a normal
//!   subgroup, with uniformity diagnostics ([`blackbox`]);
//! - a verification harness that re-checks the structural connectivity
//!   statements on a built-in matrix of small groups ([`verify`]).

pub mod abelian;
pub mod blackbox;
pub mod catalog;
pub mod error;
pub mod graph;
pub mod group;
pub mod structure;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use group::{Automorphism, FiniteGroup, Homomorphism, OperatorSet};

/// Engine version embedded in reports and persisted component tables.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default cap on the order of constructed groups.
pub const DEFAULT_ORDER_CAP: usize = 2048;

/// Default cap on group order for normal-subgroup-lattice computations.
pub const DEFAULT_STRUCTURE_CAP: usize = 512;

/// Default state-space budget: maximum number of tuple codes `n^k`.
pub const DEFAULT_CODE_BUDGET: u64 = 1 << 28;
