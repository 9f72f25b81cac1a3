//! Banzhaf voting power of weighted yes-no voting systems, computed with
//! switching algebra.
//!
//! A voting system `(T; W_1, …, W_n)` is a threshold switching function;
//! a voter's raw (total) Banzhaf power is the weight of the function's
//! Boolean difference with respect to that voter. The crate provides:
//!
//! - [`boolean_core`]: dense truth tables, restriction, Boolean difference,
//!   weight, and the structural tests every other module is checked against.
//! - [`sop_algebra`]: cubes, a sum-of-products parser, sequential
//!   disjointing, and three weight methods (disjoint sum, inclusion-exclusion,
//!   real transform).
//! - [`symmetric`]: the characteristic-set calculus of symmetric functions.
//! - [`threshold`]: voting systems, their tables, dummies, symmetry classes.
//! - [`banzhaf`]: raw and normalized powers with enumeration and subset-sum
//!   oracles.
//! - [`cli`]: the `banzhaf` command-line front end.
//!
//! ```
//! use banzhaf_switching::{banzhaf, threshold::VotingSystem};
//!
//! let eec = VotingSystem::new(12, vec![4, 4, 4, 2, 2, 1]).unwrap();
//! let report = banzhaf::analyze(&eec).unwrap();
//! assert_eq!(report.tbp, vec![5, 5, 5, 3, 3, 0]);
//! assert_eq!(report.dummies, vec![6]);
//! ```

pub mod banzhaf;
pub mod boolean_core;
pub mod cli;
pub mod error;
pub mod sop_algebra;
pub mod symmetric;
pub mod threshold;

pub use boolean_core::{Connective, TruthTable, N_MAX};
pub use error::{Error, Result};
pub use sop_algebra::{parse_sop, Cube, SopExpr};
pub use symmetric::SymFn;
pub use threshold::{SymmetryClasses, VotingSystem};
