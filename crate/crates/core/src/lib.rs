//! Aligning the users of two networks from structure alone.
//!
//! Known anchor pairs seed a cross-network Weisfeiler-Lehman relabeling
//! ([`relabel`]); the resulting shared labels regularise a second-order
//! proximity embedding trained with Adam ([`embed`]); held-out pairs are then
//! recovered by cosine ranking and scored with Precision@N and
//! reachability-to-shared-anchors diagnostics ([`eval`]).

pub mod error;
pub mod exec;
pub mod graph;
pub mod embed;
pub mod relabel;
pub mod eval;

pub use error::{Error, Result};
pub use exec::Exec;
