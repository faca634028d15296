//! Structural decision of (4,2)-choosability and exhaustive certification of
//! (a,b)-choosability on small graphs.
//!
//! The library has two independent pillars.
//!
//! * **Structure** ([`classify`], [`obstruction`], [`witness`]): decide whether
//!   a graph is (4,2)-choosable by reducing it to its core and matching the
//!   core against a finite list of shapes, producing either the matched shape
//!   or a concrete bad list assignment lifted from a small obstruction.
//! * **Search** ([`flat`], [`solve`]): decide (a,b)-choosability at small
//!   scale by enumerating list assignments up to symmetry and exhausting a
//!   solver over each, with machine-checkable certificates either way.
//!
//! The two pillars share nothing but the graph and color types, so each can
//! audit the other: every structural verdict on a small graph can be replayed
//! by the search, and every search verdict on a catalogued shape can be
//! checked against the classifier.

pub mod catalogue;
pub mod classify;
pub mod color;
pub mod error;
pub mod flat;
pub mod graph;
pub mod solve;
pub mod witness;

pub use color::{ColorPerm, ColorSet, ListAssignment, MultiColoring};
pub use error::Error;
pub use graph::Graph;
