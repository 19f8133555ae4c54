//! Deciding polymorphism metaproblems for finite relational structures.
//!
//! The crate covers four layers:
//!
//! * [`structures`]: finite relational structures, powers and exact
//!   homomorphism search;
//! * [`identities`]: linear identity sets, their classification and the
//!   clone-extension construction;
//! * [`groups`]: finite groups as Cayley tables, the dihedral/dicyclic
//!   families, subgroups, cosets and coset graphs;
//! * [`meta`], [`aip`] and [`reductions`]: polymorphism detection via
//!   indicator structures, coset-generating (heap) polymorphisms, the promise
//!   metaproblem for abelian heaps versus Maltsev operations, and the two
//!   hardness reductions as instance generators.

pub mod aip;
mod error;
pub mod graph;
pub mod groups;
pub mod identities;
mod limits;
pub mod meta;
pub mod operation;
pub mod reductions;
pub mod structures;

pub use error::{Error, Result};
pub use limits::Limits;
pub use operation::OperationTable;
