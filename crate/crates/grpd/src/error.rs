//! One error type for the whole crate.

use thiserror::Error;

/// Everything that can go wrong across parsing, validation and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// Text-format parse failure with 1-based position.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        /// 1-based line of the offending token.
        line: usize,
        /// 1-based column of the offending token.
        col: usize,
        /// What was wrong.
        msg: String,
    },

    /// A declaration referenced a vertex that was never declared.
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    /// Two edge bundles share a label, or a ray id collides.
    #[error("duplicate identifier `{0}`")]
    DuplicateIdent(String),

    /// An edge reference names a bundle/ray the graph does not have,
    /// or an index past the bundle's multiplicity.
    #[error("edge reference not in graph: {0}")]
    UnknownEdge(String),

    /// Consecutive edges of a path do not compose (range ≠ next source).
    #[error("edges do not compose at position {position}: {msg}")]
    NotComposable {
        /// 0-based index of the first edge of the offending pair.
        position: usize,
        /// Details (the mismatched vertices).
        msg: String,
    },

    /// A path claimed to be a cycle is not closed, is empty, or leaves
    /// the core.
    #[error("not a cycle: {0}")]
    NotACycle(String),

    /// A cycle handed to an operation does not live in the given graph.
    #[error("cycle does not belong to this graph: {0}")]
    ForeignCycle(String),

    /// An enumeration hit its safety cap.
    #[error("enumeration cap exceeded while counting {what} (cap {cap})")]
    CapExceeded {
        /// What was being enumerated.
        what: &'static str,
        /// The cap that was hit.
        cap: u64,
    },

    /// The shift map is undefined on a length-zero finite point.
    #[error("shift is undefined on a vertex (length-0) boundary point")]
    ShiftOnVertexPoint,

    /// An eventually-periodic point failed a canonical-form requirement.
    #[error("eventually periodic point is not in canonical form: {0}")]
    NonCanonicalEp(String),

    /// A finite path was offered as a boundary point but its range is a
    /// regular vertex (neither sink nor infinite emitter).
    #[error("finite path is not a boundary point: range `{0}` is not singular")]
    NotBoundaryFinite(String),

    /// A boundary point failed validation against a graph.
    #[error("boundary point does not belong to this graph: {0}")]
    InvalidPoint(String),

    /// A groupoid-level operation was asked of a non-discrete boundary space.
    #[error("boundary space is not discrete: {0}")]
    NotDiscrete(String),

    /// `classify_isolated` was called on a non-isolated point.
    #[error("boundary point is not isolated")]
    NotIsolated,

    /// An orbit-family matching is not a usable bijection.
    #[error("invalid orbit matching: {0}")]
    BadMatching(String),

    /// A triple (x, k, y) is not a groupoid element.
    #[error("not a groupoid element: {0}")]
    NotElement(String),

    /// A point could not be located inside the orbit family it was claimed
    /// to belong to.
    #[error("point not found in orbit family: {0}")]
    NotInFamily(String),

    /// An operation received a point of the wrong kind.
    #[error("wrong kind of boundary point: expected {expected}")]
    WrongPointKind {
        /// The kind the operation needed.
        expected: &'static str,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
