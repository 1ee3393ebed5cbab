//! Boundary path spaces and graph groupoids of directed graphs.
//!
//! A directed graph (finite core, edge multiplicities in ℕ∪{ω}, symbolic
//! infinite heads and out-rays) determines its **boundary path space** ∂E —
//! infinite paths together with finite paths ending at a singular vertex —
//! and the **graph groupoid** G_E of tail-equivalences with its integer
//! cocycle. This crate classifies the isolated points of ∂E (finite /
//! eventually periodic / wandering), computes the census and no-exit cycles,
//! checks condition (L), cross-checks everything against an independent
//! depth-bounded oracle, and — when ∂E is countable and discrete — computes
//! orbits with isotropy, decides orbit equivalence and groupoid isomorphism,
//! and constructs and verifies the explicit isomorphism witness.
//!
//! Start with [`graph::parse_graph`], then:
//!
//! * [`isolated::census`] — whole-space isolated-point census,
//! * [`cycle::condition_l`] — every cycle has an exit?
//! * [`oracle::cross_check`] — classifier vs. brute-force tree,
//! * [`groupoid::orbits`] / [`groupoid::signature`] — discrete-space orbit
//!   structure,
//! * [`equivalence::decide_groupoid_iso_discrete`] — decision procedures
//!   with verified witnesses.
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `grpd` binary exposes the same operations as subcommands.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod boundary;
pub mod cli;
pub mod count;
pub mod cycle;
pub mod dot;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod groupoid;
pub mod isolated;
pub mod oracle;

pub use count::Count;
pub use error::{Error, Result};
pub use graph::{parse_graph, serialize_graph, Graph};
