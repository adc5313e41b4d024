//! Generalized theta graphs and their extremal behaviour, as executable objects.
//!
//! A generalized theta graph `Θ_{k1,…,kℓ}` consists of two poles joined by `ℓ`
//! internally disjoint paths of lengths `k1,…,kℓ` (all lengths of the same
//! parity, the length 1 used at most once). This crate provides:
//!
//! - a compact immutable [`graph::Graph`] with graph6 and edge-list I/O,
//! - validated theta specifications, the `k*` statistic and bound exponent,
//!   and explicit construction of theta graphs ([`theta`]),
//! - exact, budgeted subgraph detection with independently verifiable
//!   embedding certificates ([`detect`]), and fixed-length cycle enumeration
//!   ([`cycles`]),
//! - GF(q) arithmetic and the moment-curve point/line incidence construction
//!   whose q-regular bipartite graph on `2q^4` vertices has `q^5` edges and is
//!   `Θ_{3,5,5}`-free ([`field`], [`geometry`]),
//! - the extraction/embedding machinery behind the `O(n^{1+1/k*})` upper
//!   bound as checkable algorithms: core peeling, greedy tree embedding,
//!   disjoint star extraction, degree regularization, regular-tree growth,
//!   bad-set pruning and thick/thin classification ([`lemmas`]),
//! - exact extremal numbers at small scale and certified lower-bound search
//!   ([`extremal`]).
//!
//! All search operations are deterministic: randomized paths are driven by a
//! caller-supplied seed and budgets are counted in node expansions rather
//! than wall clock.

pub mod canon;
pub mod cycles;
pub mod detect;
pub mod extremal;
pub mod field;
pub mod geometry;
pub mod graph;
pub mod graph6;
pub mod lemmas;
pub mod theta;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("invalid vertex: {0}")]
    InvalidVertex(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mixed parity in theta specification: {0}")]
    Parity(String),
    #[error("length 1 appears more than once in theta specification")]
    Multiplicity,
    #[error("invalid theta specification: {0}")]
    Spec(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("guaranteed bound missed: {0}")]
    BoundMissed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
