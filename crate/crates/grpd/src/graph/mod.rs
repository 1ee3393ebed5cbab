//! Graph model: a finite named core digraph plus symbolic infinite
//! attachments.
//!
//! A [`Graph`] has
//!
//! * a finite set of **core vertices** (strings),
//! * **edge bundles** — a bundle `(label, src, dst, m)` stands for `m`
//!   parallel edges `src → dst` sharing the label stem; multiplicity ω
//!   declares `src` an infinite emitter,
//! * **heads**: an infinite chain `… → h₂ → h₁ → anchor` draining into a
//!   core vertex, and
//! * **out-rays**: an infinite chain `anchor → t₁ → t₂ → …` leaving a core
//!   vertex, every ray vertex emitting exactly one edge.
//!
//! Heads and out-rays make the interesting infinite graphs (stabilisations,
//! wandering tails) representable while keeping every analysis terminating:
//! their vertices and edges are addressed *symbolically* by ray id and
//! depth/position instead of being materialized.
//!
//! Edges of an ω bundle beyond a finite sample ([`OMEGA_SAMPLE`]) cannot be
//! traversed; only the emitter's singularity status matters to the boundary
//! path space.

mod parse;

pub use parse::{parse_graph, serialize_graph};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::count::Count;
use crate::error::{Error, Result};

/// Core vertex identifier.
pub type VertexName = String;
/// Edge-bundle label.
pub type EdgeLabel = String;
/// Head / out-ray identifier.
pub type RayId = String;

/// How many parallel edges of an ω bundle are traversable as samples.
///
/// Two samples are enough for every consumer: one edge witnesses
/// reachability, a second one witnesses branching (out-degree ≥ 2).
pub const OMEGA_SAMPLE: u64 = 2;

/// Bundle multiplicity: a positive number of parallel edges, or ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    /// Exactly this many parallel edges (≥ 1).
    Finite(u64),
    /// Infinitely many parallel edges; the source is an infinite emitter.
    Omega,
}

impl Multiplicity {
    /// The number of traversable edge indices in this bundle.
    pub fn sample_size(self) -> u64 {
        match self {
            Multiplicity::Finite(m) => m,
            Multiplicity::Omega => OMEGA_SAMPLE,
        }
    }

    /// The bundle's contribution to its source's out-degree.
    pub fn as_count(self) -> Count {
        match self {
            Multiplicity::Finite(m) => Count::Finite(m),
            Multiplicity::Omega => Count::Omega,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Omega => write!(f, "omega"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(m) => s.serialize_u64(*m),
            Multiplicity::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Count::deserialize(d)? {
            Count::Finite(0) => Err(D::Error::custom("multiplicity must be ≥ 1")),
            Count::Finite(m) => Ok(Multiplicity::Finite(m)),
            Count::Omega => Ok(Multiplicity::Omega),
        }
    }
}

/// An edge bundle: `multiplicity` parallel edges `source → range`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    /// Unique label; individual edges are addressed as `label[index]`.
    pub label: EdgeLabel,
    /// Source vertex (where the edges start).
    pub source: VertexName,
    /// Range vertex (where the edges end).
    pub range: VertexName,
    /// Number of parallel edges.
    pub multiplicity: Multiplicity,
}

/// A head declaration: the chain `… → h₂ → h₁ → anchor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadSpec {
    /// Head identifier (shares a namespace with out-ray identifiers).
    pub ray: RayId,
    /// The core vertex the chain drains into.
    pub anchor: VertexName,
}

/// An out-ray declaration: the chain `anchor → t₁ → t₂ → …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySpec {
    /// Ray identifier (shares a namespace with head identifiers).
    pub ray: RayId,
    /// The core vertex the chain leaves from.
    pub anchor: VertexName,
}

/// A vertex of the (countable) derived graph: core, head-chain, or
/// out-ray-chain.
///
/// `Head { ray, depth }` is the vertex `h_depth` of that head (depth ≥ 1;
/// `h_1` emits the edge into the anchor). `Ray { ray, depth }` is `t_depth`
/// of that out-ray (depth ≥ 1; `t_1` is the anchor's successor).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Vertex {
    /// A named core vertex.
    Core {
        /// The vertex name.
        name: VertexName,
    },
    /// `h_depth` on a head chain.
    Head {
        /// Head identifier.
        ray: RayId,
        /// Position on the chain, ≥ 1.
        depth: u64,
    },
    /// `t_depth` on an out-ray chain.
    Ray {
        /// Ray identifier.
        ray: RayId,
        /// Position on the chain, ≥ 1.
        depth: u64,
    },
}

impl Vertex {
    /// Convenience constructor for a core vertex.
    pub fn core(name: impl Into<VertexName>) -> Vertex {
        Vertex::Core { name: name.into() }
    }

    /// True when this is a core vertex.
    pub fn is_core(&self) -> bool {
        matches!(self, Vertex::Core { .. })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Core { name } => write!(f, "{name}"),
            Vertex::Head { ray, depth } => write!(f, "{ray}.{depth}"),
            Vertex::Ray { ray, depth } => write!(f, "{ray}.{depth}"),
        }
    }
}

/// A reference to one edge of the derived graph.
///
/// * `Core { label, index }` — the `index`-th parallel edge of a bundle
///   (0-based; for ω bundles only indices `< OMEGA_SAMPLE` are traversable).
/// * `Head { ray, pos }` — the edge leaving `h_pos` (pos ≥ 1), i.e.
///   `h_pos → h_{pos−1}` with `h_0` read as the anchor.
/// * `Ray { ray, pos }` — the edge leaving `t_pos` (pos ≥ 0 with `t_0` read
///   as the anchor), i.e. `t_pos → t_{pos+1}`.
///
/// The derived `Ord` compares core edges by (label, index), which is exactly
/// the lexicographic edge-label order used for canonical cycle rotations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeRef {
    /// One parallel edge of a bundle.
    Core {
        /// Bundle label.
        label: EdgeLabel,
        /// 0-based index among the bundle's parallel edges.
        index: u64,
    },
    /// A head-chain edge `h_pos → h_{pos−1}`.
    Head {
        /// Head identifier.
        ray: RayId,
        /// Source depth, ≥ 1.
        pos: u64,
    },
    /// An out-ray edge `t_pos → t_{pos+1}`.
    Ray {
        /// Ray identifier.
        ray: RayId,
        /// Source depth, ≥ 0 (0 = the anchor).
        pos: u64,
    },
}

impl EdgeRef {
    /// Convenience constructor for a bundle edge.
    pub fn core(label: impl Into<EdgeLabel>, index: u64) -> EdgeRef {
        EdgeRef::Core { label: label.into(), index }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeRef::Core { label, index } => {
                if *index == 0 {
                    write!(f, "{label}")
                } else {
                    write!(f, "{label}[{index}]")
                }
            }
            EdgeRef::Head { ray, pos } => write!(f, "{ray}@{pos}"),
            EdgeRef::Ray { ray, pos } => write!(f, "{ray}@{pos}"),
        }
    }
}

/// Per-vertex classification tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTag {
    /// Emits at least one and finitely many edges.
    Regular,
    /// Emits no edges.
    Sink,
    /// Source of an ω bundle.
    InfiniteEmitter,
}

/// Classification of every core vertex; symbolic ray vertices are always
/// regular (out-degree exactly 1) and are handled by [`VertexClass::tag`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClass {
    /// Tag per core vertex.
    pub core: BTreeMap<VertexName, VertexTag>,
}

impl VertexClass {
    /// Tag of an arbitrary derived vertex. Head/ray vertices are regular.
    pub fn tag(&self, v: &Vertex) -> VertexTag {
        match v {
            Vertex::Core { name } => *self.core.get(name).unwrap_or(&VertexTag::Regular),
            _ => VertexTag::Regular,
        }
    }

    /// The singular core vertices (sinks ∪ infinite emitters), sorted.
    pub fn singular(&self) -> Vec<&VertexName> {
        self.core
            .iter()
            .filter(|(_, t)| **t != VertexTag::Regular)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Serialization mirror of [`Graph`]; `Graph` itself keeps its fields
/// private so every in-memory value has passed validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphData {
    vertices: Vec<VertexName>,
    bundles: Vec<Bundle>,
    heads_in: Vec<HeadSpec>,
    rays_out: Vec<RaySpec>,
}

/// A validated graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphData", into = "GraphData")]
pub struct Graph {
    vertices: BTreeSet<VertexName>,
    bundles: BTreeMap<EdgeLabel, Bundle>,
    heads_in: BTreeMap<RayId, VertexName>,
    rays_out: BTreeMap<RayId, VertexName>,
}

impl From<Graph> for GraphData {
    fn from(g: Graph) -> GraphData {
        GraphData {
            vertices: g.vertices.into_iter().collect(),
            bundles: g.bundles.into_values().collect(),
            heads_in: g
                .heads_in
                .into_iter()
                .map(|(ray, anchor)| HeadSpec { ray, anchor })
                .collect(),
            rays_out: g
                .rays_out
                .into_iter()
                .map(|(ray, anchor)| RaySpec { ray, anchor })
                .collect(),
        }
    }
}

impl TryFrom<GraphData> for Graph {
    type Error = Error;

    fn try_from(d: GraphData) -> Result<Graph> {
        Graph::from_parts(d.vertices, d.bundles, d.heads_in, d.rays_out)
    }
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Graph {
    /// Build and validate a graph from its parts.
    ///
    /// Enforces: identifiers well-formed; bundle endpoints declared; bundle
    /// labels unique; head/ray identifiers unique among themselves and
    /// disjoint from vertex names.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = VertexName>,
        bundles: impl IntoIterator<Item = Bundle>,
        heads: impl IntoIterator<Item = HeadSpec>,
        rays: impl IntoIterator<Item = RaySpec>,
    ) -> Result<Graph> {
        let mut vs = BTreeSet::new();
        for v in vertices {
            if !valid_ident(&v) {
                return Err(Error::UnknownVertex(format!("invalid vertex name `{v}`")));
            }
            if !vs.insert(v.clone()) {
                return Err(Error::DuplicateIdent(v));
            }
        }
        let mut bs: BTreeMap<EdgeLabel, Bundle> = BTreeMap::new();
        for b in bundles {
            if !valid_ident(&b.label) {
                return Err(Error::DuplicateIdent(format!("invalid edge label `{}`", b.label)));
            }
            for end in [&b.source, &b.range] {
                if !vs.contains(end) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
            }
            if b.multiplicity == Multiplicity::Finite(0) {
                return Err(Error::DuplicateIdent(format!(
                    "bundle `{}` has multiplicity 0",
                    b.label
                )));
            }
            if bs.insert(b.label.clone(), b).is_some() {
                return Err(Error::DuplicateIdent("duplicate edge label".into()));
            }
        }
        let mut heads_in = BTreeMap::new();
        let mut rays_out = BTreeMap::new();
        for (is_head, ray, anchor) in heads
            .into_iter()
            .map(|h| (true, h.ray, h.anchor))
            .chain(rays.into_iter().map(|r| (false, r.ray, r.anchor)))
        {
            if !valid_ident(&ray) {
                return Err(Error::DuplicateIdent(format!("invalid ray id `{ray}`")));
            }
            if vs.contains(&ray) {
                return Err(Error::DuplicateIdent(format!(
                    "ray id `{ray}` collides with a vertex name"
                )));
            }
            if !vs.contains(&anchor) {
                return Err(Error::UnknownVertex(anchor));
            }
            let clash = if is_head {
                heads_in.insert(ray.clone(), anchor).is_some() || rays_out.contains_key(&ray)
            } else {
                rays_out.insert(ray.clone(), anchor).is_some() || heads_in.contains_key(&ray)
            };
            if clash {
                return Err(Error::DuplicateIdent(ray));
            }
        }
        Ok(Graph { vertices: vs, bundles: bs, heads_in, rays_out })
    }

    /// Core vertex names, sorted.
    pub fn core_vertices(&self) -> impl Iterator<Item = &VertexName> {
        self.vertices.iter()
    }

    /// Number of core vertices.
    pub fn core_vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// All bundles, sorted by label.
    pub fn bundles(&self) -> impl Iterator<Item = &Bundle> {
        self.bundles.values()
    }

    /// All heads as (id, anchor), sorted by id.
    pub fn heads(&self) -> impl Iterator<Item = (&RayId, &VertexName)> {
        self.heads_in.iter()
    }

    /// All out-rays as (id, anchor), sorted by id.
    pub fn rays(&self) -> impl Iterator<Item = (&RayId, &VertexName)> {
        self.rays_out.iter()
    }

    /// True when the graph declares this core vertex.
    pub fn has_vertex(&self, name: &str) -> bool {
        self.vertices.contains(name)
    }

    /// Look up a bundle by label.
    pub fn bundle(&self, label: &str) -> Option<&Bundle> {
        self.bundles.get(label)
    }

    /// Anchor of a head, if `id` names one.
    pub fn head_anchor(&self, id: &str) -> Option<&VertexName> {
        self.heads_in.get(id)
    }

    /// Anchor of an out-ray, if `id` names one.
    pub fn ray_anchor(&self, id: &str) -> Option<&VertexName> {
        self.rays_out.get(id)
    }

    /// True when any bundle has multiplicity ω.
    pub fn has_omega_bundle(&self) -> bool {
        self.bundles
            .values()
            .any(|b| b.multiplicity == Multiplicity::Omega)
    }

    /// Bundles leaving a core vertex, sorted by label.
    pub fn out_bundles<'g>(&'g self, v: &'g str) -> impl Iterator<Item = &'g Bundle> {
        self.bundles.values().filter(move |b| b.source == v)
    }

    /// Bundles entering a core vertex, sorted by label.
    pub fn in_bundles<'g>(&'g self, v: &'g str) -> impl Iterator<Item = &'g Bundle> {
        self.bundles.values().filter(move |b| b.range == v)
    }

    /// Out-rays anchored at a core vertex, sorted by id.
    pub fn rays_at<'g>(&'g self, v: &'g str) -> impl Iterator<Item = &'g RayId> {
        self.rays_out
            .iter()
            .filter(move |(_, anchor)| anchor.as_str() == v)
            .map(|(id, _)| id)
    }

    /// Heads anchored at a core vertex, sorted by id.
    pub fn heads_at<'g>(&'g self, v: &'g str) -> impl Iterator<Item = &'g RayId> {
        self.heads_in
            .iter()
            .filter(move |(_, anchor)| anchor.as_str() == v)
            .map(|(id, _)| id)
    }

    /// True when the derived graph contains this vertex.
    pub fn contains_vertex(&self, v: &Vertex) -> bool {
        match v {
            Vertex::Core { name } => self.vertices.contains(name),
            Vertex::Head { ray, depth } => *depth >= 1 && self.heads_in.contains_key(ray),
            Vertex::Ray { ray, depth } => *depth >= 1 && self.rays_out.contains_key(ray),
        }
    }

    /// Out-degree of a derived vertex, in ℕ ∪ {ω}.
    pub fn out_degree(&self, v: &Vertex) -> Result<Count> {
        match v {
            Vertex::Core { name } => {
                if !self.vertices.contains(name) {
                    return Err(Error::UnknownVertex(name.clone()));
                }
                let from_bundles: Count = self
                    .out_bundles(name)
                    .map(|b| b.multiplicity.as_count())
                    .sum();
                let from_rays = Count::Finite(self.rays_at(name).count() as u64);
                Ok(from_bundles + from_rays)
            }
            Vertex::Head { .. } | Vertex::Ray { .. } => {
                if self.contains_vertex(v) {
                    Ok(Count::ONE)
                } else {
                    Err(Error::UnknownVertex(v.to_string()))
                }
            }
        }
    }

    /// True for a core sink: a declared vertex emitting nothing.
    pub fn is_sink(&self, name: &str) -> bool {
        self.vertices.contains(name)
            && self.out_bundles(name).next().is_none()
            && self.rays_at(name).next().is_none()
    }

    /// True for a core vertex that sources an ω bundle.
    pub fn is_infinite_emitter(&self, name: &str) -> bool {
        self.out_bundles(name)
            .any(|b| b.multiplicity == Multiplicity::Omega)
    }

    /// True when the vertex is singular (sink or infinite emitter).
    /// Symbolic ray vertices have out-degree exactly 1 and are never
    /// singular.
    pub fn is_singular(&self, v: &Vertex) -> bool {
        match v {
            Vertex::Core { name } => self.is_sink(name) || self.is_infinite_emitter(name),
            _ => false,
        }
    }

    /// Check that an edge reference names a traversable edge of this graph.
    pub fn validate_edge(&self, e: &EdgeRef) -> Result<()> {
        match e {
            EdgeRef::Core { label, index } => {
                let b = self
                    .bundles
                    .get(label)
                    .ok_or_else(|| Error::UnknownEdge(format!("no bundle `{label}`")))?;
                if *index >= b.multiplicity.sample_size() {
                    return Err(Error::UnknownEdge(format!(
                        "index {index} out of range for bundle `{label}` (×{})",
                        b.multiplicity
                    )));
                }
                Ok(())
            }
            EdgeRef::Head { ray, pos } => {
                if *pos < 1 {
                    return Err(Error::UnknownEdge(format!("head edge `{ray}@{pos}`: pos must be ≥ 1")));
                }
                self.heads_in
                    .get(ray)
                    .map(|_| ())
                    .ok_or_else(|| Error::UnknownEdge(format!("no head `{ray}`")))
            }
            EdgeRef::Ray { ray, .. } => self
                .rays_out
                .get(ray)
                .map(|_| ())
                .ok_or_else(|| Error::UnknownEdge(format!("no ray `{ray}`"))),
        }
    }

    /// Source vertex of an edge.
    pub fn edge_source(&self, e: &EdgeRef) -> Result<Vertex> {
        self.validate_edge(e)?;
        Ok(match e {
            EdgeRef::Core { label, .. } => Vertex::core(self.bundles[label].source.clone()),
            EdgeRef::Head { ray, pos } => Vertex::Head { ray: ray.clone(), depth: *pos },
            EdgeRef::Ray { ray, pos } => {
                if *pos == 0 {
                    Vertex::core(self.rays_out[ray].clone())
                } else {
                    Vertex::Ray { ray: ray.clone(), depth: *pos }
                }
            }
        })
    }

    /// Range vertex of an edge.
    pub fn edge_range(&self, e: &EdgeRef) -> Result<Vertex> {
        self.validate_edge(e)?;
        Ok(match e {
            EdgeRef::Core { label, .. } => Vertex::core(self.bundles[label].range.clone()),
            EdgeRef::Head { ray, pos } => {
                if *pos == 1 {
                    Vertex::core(self.heads_in[ray].clone())
                } else {
                    Vertex::Head { ray: ray.clone(), depth: *pos - 1 }
                }
            }
            EdgeRef::Ray { ray, pos } => Vertex::Ray { ray: ray.clone(), depth: *pos + 1 },
        })
    }

    /// Traversable edges leaving a vertex, sorted; the flag reports whether
    /// an ω bundle was truncated to its sample edges.
    pub fn out_edges(&self, v: &Vertex) -> Result<(Vec<EdgeRef>, bool)> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(match v {
            Vertex::Core { name } => {
                let mut out = Vec::new();
                let mut truncated = false;
                for b in self.out_bundles(name) {
                    if b.multiplicity == Multiplicity::Omega {
                        truncated = true;
                    }
                    for i in 0..b.multiplicity.sample_size() {
                        out.push(EdgeRef::Core { label: b.label.clone(), index: i });
                    }
                }
                for ray in self.rays_at(name) {
                    out.push(EdgeRef::Ray { ray: ray.clone(), pos: 0 });
                }
                (out, truncated)
            }
            Vertex::Head { ray, depth } => {
                (vec![EdgeRef::Head { ray: ray.clone(), pos: *depth }], false)
            }
            Vertex::Ray { ray, depth } => {
                (vec![EdgeRef::Ray { ray: ray.clone(), pos: *depth }], false)
            }
        })
    }

    /// Traversable edges entering a vertex, sorted. Edges of an ω bundle
    /// appear as their finite sample only (callers that need exact counts
    /// use symbolic counting instead).
    pub fn in_edges(&self, v: &Vertex) -> Result<Vec<EdgeRef>> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(match v {
            Vertex::Core { name } => {
                let mut inc = Vec::new();
                for b in self.in_bundles(name) {
                    for i in 0..b.multiplicity.sample_size() {
                        inc.push(EdgeRef::Core { label: b.label.clone(), index: i });
                    }
                }
                for head in self.heads_at(name) {
                    inc.push(EdgeRef::Head { ray: head.clone(), pos: 1 });
                }
                inc
            }
            Vertex::Head { ray, depth } => vec![EdgeRef::Head { ray: ray.clone(), pos: *depth + 1 }],
            Vertex::Ray { ray, depth } => vec![EdgeRef::Ray { ray: ray.clone(), pos: *depth - 1 }],
        })
    }
}

/// A finite path of composable edges; vertices are admitted as length-0
/// paths. `range(edge i) = source(edge i+1)` is enforced at construction.
///
/// Deserialized values are *unchecked* until [`Path::validate`] runs against
/// a graph (serde has no graph to resolve edges in).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    start: Vertex,
    edges: Vec<EdgeRef>,
}

impl Path {
    /// The length-0 path at a vertex.
    pub fn at(v: Vertex) -> Path {
        Path { start: v, edges: Vec::new() }
    }

    /// Build a path, validating edge existence and composability in `g`.
    pub fn new(g: &Graph, start: Vertex, edges: Vec<EdgeRef>) -> Result<Path> {
        let p = Path { start, edges };
        p.validate(g)?;
        Ok(p)
    }

    /// Build a non-empty path from its edges; the start is derived.
    pub fn from_edges(g: &Graph, edges: Vec<EdgeRef>) -> Result<Path> {
        let first = edges.first().ok_or(Error::NotComposable {
            position: 0,
            msg: "cannot derive the start of an empty path".into(),
        })?;
        let start = g.edge_source(first)?;
        Path::new(g, start, edges)
    }

    /// Re-check this path against a graph (for deserialized values).
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if !g.contains_vertex(&self.start) {
            return Err(Error::UnknownVertex(self.start.to_string()));
        }
        let mut cur = self.start.clone();
        for (i, e) in self.edges.iter().enumerate() {
            let s = g.edge_source(e)?;
            if s != cur {
                return Err(Error::NotComposable {
                    position: i,
                    msg: format!("expected source {cur}, edge {e} starts at {s}"),
                });
            }
            cur = g.edge_range(e)?;
        }
        Ok(())
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    /// True for a length-0 path.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The source vertex.
    pub fn source(&self) -> &Vertex {
        &self.start
    }

    /// The edges.
    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    /// The range vertex (needs the graph to resolve the last edge).
    pub fn range(&self, g: &Graph) -> Result<Vertex> {
        match self.edges.last() {
            None => Ok(self.start.clone()),
            Some(e) => g.edge_range(e),
        }
    }

    /// The first `n` edges as a path (same source). `n` ≥ length returns
    /// a copy.
    pub fn prefix(&self, n: usize) -> Path {
        Path { start: self.start.clone(), edges: self.edges[..n.min(self.edges.len())].to_vec() }
    }

    /// The path after dropping the first `n` edges.
    pub fn suffix_from(&self, g: &Graph, n: usize) -> Result<Path> {
        if n == 0 {
            return Ok(self.clone());
        }
        if n > self.edges.len() {
            return Err(Error::NotComposable {
                position: n,
                msg: format!("suffix start {n} past path length {}", self.edges.len()),
            });
        }
        let start = g.edge_range(&self.edges[n - 1])?;
        Ok(Path { start, edges: self.edges[n..].to_vec() })
    }

    /// This path extended by one edge.
    pub fn extended(&self, g: &Graph, e: EdgeRef) -> Result<Path> {
        let r = self.range(g)?;
        let s = g.edge_source(&e)?;
        if r != s {
            return Err(Error::NotComposable {
                position: self.edges.len(),
                msg: format!("path ends at {r}, edge {e} starts at {s}"),
            });
        }
        let mut edges = self.edges.clone();
        edges.push(e);
        Ok(Path { start: self.start.clone(), edges })
    }

    /// Concatenation `self · other` (requires `r(self) = s(other)`).
    pub fn concat(&self, g: &Graph, other: &Path) -> Result<Path> {
        let r = self.range(g)?;
        if &r != other.source() {
            return Err(Error::NotComposable {
                position: self.edges.len(),
                msg: format!("cannot append a path starting at {} after {r}", other.source()),
            });
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path { start: self.start.clone(), edges })
    }

    /// The visited vertices: sources of each edge, then the final range
    /// (length + 1 entries).
    pub fn vertex_seq(&self, g: &Graph) -> Result<Vec<Vertex>> {
        let mut seq = Vec::with_capacity(self.edges.len() + 1);
        let mut cur = self.start.clone();
        for e in &self.edges {
            seq.push(cur);
            cur = g.edge_range(e)?;
        }
        seq.push(cur);
        Ok(seq)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edges.is_empty() {
            write!(f, "({})", self.start)
        } else {
            let labels: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", labels.join(" "))
        }
    }
}

/// Classify every core vertex as regular / sink / infinite emitter.
///
/// The singular vertices (sinks ∪ infinite emitters) are exactly the range
/// vertices at which finite paths belong to the boundary path space.
pub fn classify_vertices(g: &Graph) -> VertexClass {
    let core = g
        .core_vertices()
        .map(|v| {
            let tag = if g.is_infinite_emitter(v) {
                VertexTag::InfiniteEmitter
            } else if g.is_sink(v) {
                VertexTag::Sink
            } else {
                VertexTag::Regular
            };
            (v.clone(), tag)
        })
        .collect();
    VertexClass { core }
}

/// The stabilisation: attach one fresh head to every core vertex.
///
/// The core is unchanged; head ids are derived from the vertex name
/// (`H_<vertex>`, extended with underscores until fresh). Heads are attached
/// to core vertices only — stabilising the infinitely many vertices of
/// existing symbolic rays is out of scope.
pub fn stabilize(g: &Graph) -> Graph {
    let mut taken: BTreeSet<String> = g.core_vertices().cloned().collect();
    taken.extend(g.heads().map(|(id, _)| id.clone()));
    taken.extend(g.rays().map(|(id, _)| id.clone()));

    let mut heads: Vec<HeadSpec> = g
        .heads()
        .map(|(ray, anchor)| HeadSpec { ray: ray.clone(), anchor: anchor.clone() })
        .collect();
    for v in g.core_vertices() {
        let mut id = format!("H_{v}");
        while taken.contains(&id) {
            id.push('_');
        }
        taken.insert(id.clone());
        heads.push(HeadSpec { ray: id, anchor: v.clone() });
    }

    Graph::from_parts(
        g.core_vertices().cloned().collect::<Vec<_>>(),
        g.bundles().cloned().collect::<Vec<_>>(),
        heads,
        g.rays()
            .map(|(ray, anchor)| RaySpec { ray: ray.clone(), anchor: anchor.clone() })
            .collect::<Vec<_>>(),
    )
    .expect("stabilisation of a valid graph is valid")
}
