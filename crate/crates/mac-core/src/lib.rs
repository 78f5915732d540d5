//! Causal graph discovery over tabular data, three ways:
//!
//! * **Debate pipelines** — panels of LLM agents (affirmative, negative, judge)
//!   argue pairwise cause/effect questions; judge verdicts become a directed
//!   adjacency matrix.
//! * **Statistical pipelines** — native implementations of PC, exact BIC
//!   search, and DirectLiNGAM driven by a debated analysis plan.
//! * **Hybrids** — either direction of composition: statistical output seeds
//!   the debate with per-edge hints, or debate output constrains the
//!   statistical search (prior knowledge, edge constraints, super-structure).
//!
//! Agent traffic goes through pluggable [`agents::Backend`]s: a live HTTP
//! client, a scripted player for offline fixtures, and a record/replay cache
//! that makes whole runs reproducible byte for byte.

// Indexed loops stay: the numeric modules walk several arrays at once with
// offset ranges like `(i + 1)..n`, where iterator/enumerate rewrites obscure
// the matrix arithmetic.
#![allow(clippy::needless_range_loop)]

pub mod agents;
pub mod datasets;
pub mod debate;
pub mod graph;
mod linalg;
pub mod metrics;
pub mod pipelines;
pub mod scd;
pub mod sim;
pub mod store;

pub use datasets::{DatasetDescriptor, TabularData, VariableMeta};
pub use graph::{BinaryAdjacency, EdgeConstraints, PatternGraph, PriorKnowledge};
pub use metrics::{Confusion, MetricsReport};
pub use scd::{AlgorithmConfig, SearchMethod};
