//! Labeled oriented graphs (LOGs) and trees (LOTs): reachability closure,
//! complexity computation, Rosebrock decomposition and asphericity
//! certificates.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, JSON and the
//! command line live in the `lotkit` companion crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod certify;
pub mod complexity;
pub mod decomposition;
pub mod gen;
pub mod graph;
pub mod presentation;
pub mod reachability;
mod subsets;

pub use certify::{certify_aspherical, verify_certificate, AsphericityCertificate, Effort, Evidence, Reason};
pub use complexity::{
    complexity_bounds, exact_complexity, greedy_seed, submaximal_seed, ComplexityError, ComplexityReport, Method, SubmaximalCase,
};
pub use decomposition::{compose, decompose, is_maximal_complexity, is_rosebrock, rosebrock_cover, Decomposition};
pub use graph::{GraphError, LabeledEdge, LogGraph, RawEdge, RawLog, ValidationReport, VertexId};
pub use presentation::{LotPresentation, Relation};
pub use reachability::{closure, is_reachable_from, ReachabilityResult};
