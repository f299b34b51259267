//! Exact enumeration and verification engine for valley-decorated
//! parking functions at `q = -1`.
//!
//! The crate enumerates standardly labelled Dyck paths with decorated
//! contractible valleys, computes their statistics, implements schedule
//! numbers and the two generating trees relating decorated permutations of
//! schedule `1ⁿ` to plain permutations under inv3 and monot, and checks the
//! resulting polynomial identities exhaustively.

pub mod error;
pub mod identities;
pub mod paths;
pub mod perm;
pub mod poly;
pub mod schedule;
pub mod trees;

pub use error::{Error, Result};
pub use paths::{DecoratedLabelledPath, DyckPath, PathRecord};
pub use perm::{DecoratedPermutation, PositionKind};
pub use poly::{Monomial, Polynomial};
pub use schedule::Schedule;
pub use trees::TreeAddress;
