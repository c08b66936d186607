//! Semigroup-labeled graph presentations of subshifts.
//!
//! The crate builds up from exact arithmetic in graph-attached inverse
//! semigroups to labeled presentations, their languages, periodic-point
//! counting, zeta functions, instantaneity analysis of sofic shifts, and
//! structured searches for separating invariants.

pub mod error;
pub mod fixtures;
pub mod language;
pub mod periodic;
pub mod presentation;
pub mod rgraph;
pub mod semigroup;
pub mod series;
pub mod search;
pub mod sofic;
pub mod twisted;
pub mod zeta;

pub use error::{Error, Result};
pub use rgraph::{Digraph, MinusId, PlusId, RGraph, VertexId};
pub use semigroup::{mul, product, ElemClass, SgElem, Word};
