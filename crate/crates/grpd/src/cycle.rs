//! Cycle analysis on the finite core: simple-cycle enumeration, exit
//! detection, condition (L), primitive roots.
//!
//! A **cycle** is a closed path γ with |γ| ≥ 1 and s(γ) = r(γ); it need not
//! be vertex-simple (powers δᵏ are cycles). [`simple_cycles`] enumerates the
//! vertex-simple ones — they suffice for condition (L): every cycle shares
//! its vertices with the simple cycles it factors through, and an exit at a
//! shared vertex is an exit for both.
//!
//! Cycles of the derived graph never leave the core: head edges strictly
//! descend toward their anchor and ray edges strictly ascend, so no closed
//! path uses them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, Path, Vertex, VertexName};

/// Default cap on the number of enumerated cycles (and on search steps,
/// scaled by [`STEP_FACTOR`]). Exceeding it is an explicit error, never a
/// silent truncation. The `GRPD_NODE_CAP` environment variable, when set to
/// a valid u64, takes precedence in every function that would use this
/// default.
pub const DEFAULT_CYCLE_CAP: u64 = 1_000_000;

/// The effective enumeration cap: `GRPD_NODE_CAP` when set and parseable,
/// otherwise the given default. Explicit `_with_cap` arguments always win —
/// this is only consulted by the default-cap wrappers.
pub(crate) fn env_cap_or(default: u64) -> u64 {
    std::env::var("GRPD_NODE_CAP").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}

/// Search-step allowance per unit of cycle cap.
const STEP_FACTOR: u64 = 64;

/// Serialization mirror of [`Cycle`] (the rotation base is derived data).
#[derive(Debug, Clone, Serialize, Deserialize)]
struct CycleData {
    edges: Vec<EdgeRef>,
}

/// A closed path, stored in a presented rotation together with the index of
/// its canonical (lexicographically least) rotation.
///
/// Deserialized values recompute the canonical base but are *unchecked*
/// against any graph until [`Cycle::validate`] runs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "CycleData", into = "CycleData")]
pub struct Cycle {
    edges: Vec<EdgeRef>,
    canon_base: usize,
}

impl From<CycleData> for Cycle {
    fn from(d: CycleData) -> Cycle {
        Cycle::from_edge_seq(d.edges)
    }
}

impl From<Cycle> for CycleData {
    fn from(c: Cycle) -> CycleData {
        CycleData { edges: c.edges }
    }
}

/// Index of the lexicographically least rotation of `edges`.
fn least_rotation(edges: &[EdgeRef]) -> usize {
    let n = edges.len();
    let mut best = 0;
    for k in 1..n {
        for i in 0..n {
            let a = &edges[(k + i) % n];
            let b = &edges[(best + i) % n];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = k;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    best
}

impl Cycle {
    /// Build a cycle from a closed path of `g`.
    pub fn new(g: &Graph, path: Path) -> Result<Cycle> {
        if path.is_empty() {
            return Err(Error::NotACycle("a cycle has length ≥ 1".into()));
        }
        let r = path.range(g)?;
        if &r != path.source() {
            return Err(Error::NotACycle(format!(
                "path starts at {} but ends at {r}",
                path.source()
            )));
        }
        Ok(Cycle::from_edge_seq(path.edges().to_vec()))
    }

    /// Build a cycle from its edges (validated against `g`).
    pub fn from_edges(g: &Graph, edges: Vec<EdgeRef>) -> Result<Cycle> {
        let path = Path::from_edges(g, edges)?;
        Cycle::new(g, path)
    }

    fn from_edge_seq(edges: Vec<EdgeRef>) -> Cycle {
        let canon_base = least_rotation(&edges);
        Cycle { edges, canon_base }
    }

    /// Re-check this cycle against a graph (for deserialized values):
    /// edges exist, compose, and close up.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::NotACycle("a cycle has length ≥ 1".into()));
        }
        let path = Path::from_edges(g, self.edges.clone())
            .map_err(|e| Error::ForeignCycle(e.to_string()))?;
        let r = path.range(g).map_err(|e| Error::ForeignCycle(e.to_string()))?;
        if &r != path.source() {
            return Err(Error::ForeignCycle(format!(
                "not closed: starts at {}, ends at {r}",
                path.source()
            )));
        }
        Ok(())
    }

    /// The edges in the presented rotation.
    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// True when a cycle has no edges — never, by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when the presented rotation is the canonical one.
    pub fn is_canonical(&self) -> bool {
        self.canon_base == 0
    }

    /// The canonical rotation (lexicographically least edge sequence).
    pub fn canonical(&self) -> Cycle {
        self.rotated(self.canon_base)
    }

    /// Rotate left by `k`: the presented edges become `edges[k..] ++ edges[..k]`.
    pub fn rotated(&self, k: usize) -> Cycle {
        let n = self.edges.len();
        let k = k % n;
        let mut edges = Vec::with_capacity(n);
        edges.extend_from_slice(&self.edges[k..]);
        edges.extend_from_slice(&self.edges[..k]);
        Cycle::from_edge_seq(edges)
    }

    /// True when `other` is a rotation of `self`.
    pub fn rotation_eq(&self, other: &Cycle) -> bool {
        self.len() == other.len() && self.canonical().edges == other.canonical().edges
    }

    /// The base vertex (source of the first presented edge).
    pub fn source(&self, g: &Graph) -> Result<Vertex> {
        g.edge_source(&self.edges[0])
    }

    /// The sources of the presented edges, in order.
    pub fn vertex_seq(&self, g: &Graph) -> Result<Vec<Vertex>> {
        self.edges.iter().map(|e| g.edge_source(e)).collect()
    }

    /// The cycle as a closed path.
    pub fn to_path(&self, g: &Graph) -> Result<Path> {
        Path::from_edges(g, self.edges.clone())
    }

    /// The k-th power γᵏ (k ≥ 1) in the presented rotation.
    pub fn power(&self, k: u64) -> Cycle {
        let mut edges = Vec::with_capacity(self.edges.len() * k as usize);
        for _ in 0..k.max(1) {
            edges.extend_from_slice(&self.edges);
        }
        Cycle::from_edge_seq(edges)
    }
}

impl std::fmt::Display for Cycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "⟨{}⟩", labels.join(" "))
    }
}

/// Enumerate all vertex-simple cycles of the core, each in canonical
/// rotation, sorted; with the default cap.
pub fn simple_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    simple_cycles_with_cap(g, env_cap_or(DEFAULT_CYCLE_CAP))
}

/// [`simple_cycles`] with an explicit cap on results and search steps.
pub fn simple_cycles_with_cap(g: &Graph, cap: u64) -> Result<Vec<Cycle>> {
    let verts: Vec<&VertexName> = g.core_vertices().collect();
    let mut found: Vec<Cycle> = Vec::new();
    let mut steps: u64 = 0;
    let step_cap = cap.saturating_mul(STEP_FACTOR);

    // Anchor every cycle at its least vertex: search paths start → … → u
    // whose intermediate vertices are distinct and all > start, and close
    // them with any edge u → start. Parallel edges multiply at every hop,
    // so each vertex-simple cycle is produced exactly once per edge choice.
    for (vi, _start) in verts.iter().enumerate() {
        let mut stack: Vec<(usize, Vec<EdgeRef>)> = vec![(vi, Vec::new())];
        let mut on_path = vec![false; verts.len()];
        // Iterative DFS over (vertex index, edge path so far); `on_path`
        // tracks the current chain via explicit unwind markers.
        let mut trail: Vec<usize> = Vec::new();
        let mut depth_of: Vec<usize> = Vec::new();
        while let Some((ui, path)) = stack.pop() {
            // Unwind the on-path markers to this branch's depth.
            while depth_of.last().is_some_and(|d| *d >= path.len()) {
                depth_of.pop();
                on_path[trail.pop().expect("trail tracks depth_of")] = false;
            }
            if ui != vi || path.is_empty() {
                on_path[ui] = true;
                trail.push(ui);
                depth_of.push(path.len());
            }
            steps += 1;
            if steps > step_cap {
                return Err(Error::CapExceeded { what: "cycle search steps", cap: step_cap });
            }
            for b in g.out_bundles(verts[ui]) {
                let wi = match verts.binary_search(&&b.range) {
                    Ok(i) => i,
                    Err(_) => continue,
                };
                for index in 0..b.multiplicity.sample_size() {
                    let e = EdgeRef::Core { label: b.label.clone(), index };
                    if wi == vi {
                        // Closing edge: a complete vertex-simple cycle.
                        let mut edges = path.clone();
                        edges.push(e);
                        found.push(Cycle::from_edge_seq(edges).canonical());
                        if found.len() as u64 > cap {
                            return Err(Error::CapExceeded { what: "simple cycles", cap });
                        }
                    } else if wi > vi && !on_path[wi] {
                        let mut next = path.clone();
                        next.push(e);
                        stack.push((wi, next));
                    }
                }
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

/// Does some edge leave the cycle? True iff some cycle vertex has
/// out-degree ≥ 2 (an ω bundle or an out-ray at a cycle vertex always
/// yields an exit).
///
/// This matches the definition "some edge e with s(e) = s(γᵢ) and e ≠ γᵢ":
/// at a vertex with two or more out-edges, whichever edge the cycle uses,
/// another one exits — even when both lie on the cycle.
pub fn has_exit(g: &Graph, cycle: &Cycle) -> Result<bool> {
    cycle.validate(g)?;
    for e in cycle.edges() {
        let v = g.edge_source(e)?;
        if g.out_degree(&v)? >= crate::count::Count::Finite(2) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Condition (L): every cycle has an exit. Checked over the vertex-simple
/// cycles, which suffice (module docs).
pub fn condition_l(g: &Graph) -> Result<bool> {
    condition_l_with_cap(g, env_cap_or(DEFAULT_CYCLE_CAP))
}

/// [`condition_l`] with an explicit enumeration cap.
pub fn condition_l_with_cap(g: &Graph, cap: u64) -> Result<bool> {
    for c in simple_cycles_with_cap(g, cap)? {
        if !has_exit(g, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The vertex-simple cycles without an exit, canonical and sorted.
///
/// These are pairwise vertex-disjoint (a shared vertex of two distinct
/// simple cycles has out-degree ≥ 2, i.e. an exit) and each is primitive.
pub fn no_exit_cycles(g: &Graph) -> Result<Vec<Cycle>> {
    no_exit_cycles_with_cap(g, env_cap_or(DEFAULT_CYCLE_CAP))
}

/// [`no_exit_cycles`] with an explicit enumeration cap.
pub fn no_exit_cycles_with_cap(g: &Graph, cap: u64) -> Result<Vec<Cycle>> {
    let mut out = Vec::new();
    for c in simple_cycles_with_cap(g, cap)? {
        if !has_exit(g, &c)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Factor γ = δᵏ with δ primitive (not a proper power) and k ≥ 1 maximal;
/// scans the divisors of |γ| in ascending order. Rotation is preserved: the
/// returned δ is the first |δ| edges of γ's presented rotation.
pub fn primitive_root(cycle: &Cycle) -> (Cycle, u64) {
    let n = cycle.len();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let head = &cycle.edges()[..d];
        if cycle.edges().chunks(d).all(|chunk| chunk == head) {
            return (Cycle::from_edge_seq(head.to_vec()), (n / d) as u64);
        }
    }
    unreachable!("d = n always matches");
}
