//! Nowhere-zero flows on signed graphs.
//!
//! A signed graph is an ordinary multigraph (loops and parallel edges allowed)
//! whose edges carry a sign. Flows live on *bidirected* orientations: each
//! edge gets an independent arrow at each endpoint, and the two arrows agree
//! with the edge sign. The crate provides
//!
//! * core types ([`graph::SignedGraph`], [`flow::Flow`]) with verification,
//! * structural machinery: switching, balance, cuts, bridges, admissibility,
//!   two-cut reduction and recombination ([`structure`]),
//! * perfect matchings, proper 3-edge-colorings and derived flows ([`matching`]),
//! * constructive flow builders for graphs with exactly two negative edges
//!   ([`build`]),
//! * an exact backtracking search usable as an oracle ([`oracle`]),
//! * generators for test corpora ([`gen`]).
//!
//! Determinism is a design rule: every search breaks ties by ascending vertex
//! or edge id, so identical inputs give identical outputs across runs.

pub mod build;
pub mod flow;
pub mod gen;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod structure;

/// Vertices are dense indices `0..n`.
pub type VertexId = usize;
/// Edges are dense indices `0..m` in insertion order.
pub type EdgeId = usize;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input violates a documented precondition of the routine.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal step that is guaranteed to succeed did not. Indicates a
    /// bug in this crate, not bad input.
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    /// The graph (or a mandated part of it) is not connected.
    #[error("graph is not connected: {0}")]
    Disconnected(String),

    /// A routine that requires a cubic graph was handed something else.
    #[error("graph is not cubic: {0}")]
    NotCubic(String),

    /// No nowhere-zero flow exists for the requested parameters.
    #[error("no flow: {0}")]
    NoFlow(String),

    /// The search gave up (node budget or deadline) without an answer.
    #[error("search exhausted its budget: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
