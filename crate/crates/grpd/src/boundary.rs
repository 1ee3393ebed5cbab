//! The boundary path space ∂E: symbolic points, the shift map σ, eventual
//! periodicity and least periods, and tail equivalence with minimal
//! witnesses.
//!
//! ∂E consists of the infinite paths together with the finite paths ending
//! at a singular vertex (sink or infinite emitter). Three kinds of points
//! are representable, and they cover everything the analyses need:
//!
//! * [`BoundaryPoint::Finite`] — a finite path whose range is singular;
//! * [`BoundaryPoint::Ep`] — an eventually periodic path μγγγ… stored as
//!   (prefix μ, primitive cycle γ in the rotation entered at r(μ));
//! * [`BoundaryPoint::Ray`] — a path whose tail runs along an out-ray
//!   (entering at a given depth) and therefore wanders.
//!
//! Infinite paths that are neither eventually periodic nor eventually on an
//! out-ray exist only in graphs with two reachable branching structures;
//! they are never isolated and no operation here needs them individually.
//!
//! **Canonical forms.** Each representable path has exactly one canonical
//! representation: for Ep points the cycle is primitive and the prefix does
//! not end with the cycle's last edge (otherwise that edge is absorbed by
//! rotating the cycle backwards); for Ray points a non-empty prefix runs all
//! the way to the ray's anchor (entry 0). Constructors enforce this;
//! [`canonicalize_ep`] normalizes arbitrary (prefix, cycle) presentations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cycle::{has_exit, primitive_root, Cycle};
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, Path, RayId, Vertex};

/// A representable point of ∂E. See the module docs for the three kinds and
/// their canonical-form invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryPoint {
    /// A finite path ending at a singular vertex.
    Finite {
        /// The path; its range is a sink or an infinite emitter.
        path: Path,
    },
    /// An eventually periodic infinite path μγγγ….
    Ep {
        /// The finite prefix μ (possibly empty).
        prefix: Path,
        /// The primitive cycle γ, presented in the rotation whose source is
        /// r(prefix).
        cycle: Cycle,
    },
    /// An infinite path whose tail travels an out-ray.
    Ray {
        /// The finite prefix before the tail enters the ray.
        prefix: Path,
        /// The out-ray the tail runs along.
        ray: RayId,
        /// Ray depth at which the tail enters (0 = at the anchor). Non-zero
        /// only when the prefix is empty (the point starts mid-ray).
        entry: u64,
    },
}

/// A pair (m, n) with σᵐ(x) = σⁿ(y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftWitness {
    /// Shifts applied to x.
    pub m: u64,
    /// Shifts applied to y.
    pub n: u64,
    /// Set when produced by [`tail_equivalent`], which minimizes (m+n, m).
    pub minimal: bool,
}

impl ShiftWitness {
    /// The cocycle value m − n.
    pub fn k(&self) -> i64 {
        self.m as i64 - self.n as i64
    }
}

impl BoundaryPoint {
    /// A finite boundary point: the path's range must be singular.
    pub fn finite(g: &Graph, path: Path) -> Result<BoundaryPoint> {
        path.validate(g)?;
        let r = path.range(g)?;
        if !g.is_singular(&r) {
            return Err(Error::NotBoundaryFinite(r.to_string()));
        }
        Ok(BoundaryPoint::Finite { path })
    }

    /// An eventually periodic point in strict canonical form; rejects
    /// non-canonical presentations (use [`canonicalize_ep`] to normalize).
    pub fn ep(g: &Graph, prefix: Path, cycle: Cycle) -> Result<BoundaryPoint> {
        prefix.validate(g)?;
        cycle.validate(g)?;
        let r = prefix.range(g)?;
        let s = cycle.source(g)?;
        if r != s {
            return Err(Error::NotComposable {
                position: prefix.len(),
                msg: format!("prefix ends at {r}, cycle starts at {s}"),
            });
        }
        let (_, k) = primitive_root(&cycle);
        if k != 1 {
            return Err(Error::NonCanonicalEp(format!(
                "cycle {cycle} is a proper power (exponent {k})"
            )));
        }
        if let (Some(pl), Some(cl)) = (prefix.edges().last(), cycle.edges().last()) {
            if pl == cl {
                return Err(Error::NonCanonicalEp(format!(
                    "prefix ends with {pl}, the cycle's last edge — absorb it by rotating"
                )));
            }
        }
        Ok(BoundaryPoint::Ep { prefix, cycle })
    }

    /// A wandering point entering out-ray `ray` at depth `entry`. A prefix
    /// that already runs into the ray is absorbed (the representation is
    /// canonicalized silently — the redundancy is trivial, unlike Ep's).
    pub fn ray(g: &Graph, prefix: Path, ray: RayId, entry: u64) -> Result<BoundaryPoint> {
        prefix.validate(g)?;
        let anchor = g
            .ray_anchor(&ray)
            .ok_or_else(|| Error::UnknownEdge(format!("no ray `{ray}`")))?
            .clone();
        let expected = if entry == 0 {
            Vertex::core(anchor)
        } else {
            Vertex::Ray { ray: ray.clone(), depth: entry }
        };
        let r = prefix.range(g)?;
        if r != expected {
            return Err(Error::NotComposable {
                position: prefix.len(),
                msg: format!("prefix ends at {r}, ray `{ray}` at depth {entry} starts at {expected}"),
            });
        }
        // Absorb trailing ray edges: the only edge into the ray vertex at
        // depth d is the ray edge from depth d−1, so this is deterministic.
        let mut prefix = prefix;
        let mut entry = entry;
        while entry > 0 && !prefix.is_empty() {
            debug_assert_eq!(
                prefix.edges().last(),
                Some(&EdgeRef::Ray { ray: ray.clone(), pos: entry - 1 })
            );
            prefix = prefix.prefix(prefix.len() - 1);
            entry -= 1;
        }
        Ok(BoundaryPoint::Ray { prefix, ray, entry })
    }

    /// Short tag for messages and JSON-adjacent output.
    pub fn kind(&self) -> &'static str {
        match self {
            BoundaryPoint::Finite { .. } => "finite",
            BoundaryPoint::Ep { .. } => "ep",
            BoundaryPoint::Ray { .. } => "ray",
        }
    }

    /// The number of edges for a finite point, `None` for infinite points.
    pub fn finite_len(&self) -> Option<usize> {
        match self {
            BoundaryPoint::Finite { path } => Some(path.len()),
            _ => None,
        }
    }

    /// The finite part: the whole path of a finite point, or the prefix of
    /// an infinite one.
    pub fn finite_part(&self) -> &Path {
        match self {
            BoundaryPoint::Finite { path } => path,
            BoundaryPoint::Ep { prefix, .. } => prefix,
            BoundaryPoint::Ray { prefix, .. } => prefix,
        }
    }

    /// The source vertex of the path.
    pub fn source(&self) -> &Vertex {
        self.finite_part().source()
    }

    /// The i-th edge of the (possibly infinite) expansion; `None` past the
    /// end of a finite point.
    pub fn edge_at(&self, i: usize) -> Option<EdgeRef> {
        match self {
            BoundaryPoint::Finite { path } => path.edges().get(i).cloned(),
            BoundaryPoint::Ep { prefix, cycle } => {
                if i < prefix.len() {
                    Some(prefix.edges()[i].clone())
                } else {
                    let j = (i - prefix.len()) % cycle.len();
                    Some(cycle.edges()[j].clone())
                }
            }
            BoundaryPoint::Ray { prefix, ray, entry } => {
                if i < prefix.len() {
                    Some(prefix.edges()[i].clone())
                } else {
                    Some(EdgeRef::Ray { ray: ray.clone(), pos: entry + (i - prefix.len()) as u64 })
                }
            }
        }
    }

    /// The first `n` edges of the expansion (fewer for a shorter finite
    /// point).
    pub fn expand(&self, n: usize) -> Vec<EdgeRef> {
        (0..n).map_while(|i| self.edge_at(i)).collect()
    }

    /// Re-check a (possibly deserialized) point against a graph: paths
    /// resolve, and the canonical-form invariants hold.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            BoundaryPoint::Finite { path } => {
                BoundaryPoint::finite(g, path.clone()).map(|_| ())
            }
            BoundaryPoint::Ep { prefix, cycle } => {
                BoundaryPoint::ep(g, prefix.clone(), cycle.clone()).map(|_| ())
            }
            BoundaryPoint::Ray { prefix, ray, entry } => {
                let canon = BoundaryPoint::ray(g, prefix.clone(), ray.clone(), *entry)?;
                if &canon != self {
                    return Err(Error::InvalidPoint(format!(
                        "ray point is not canonical: entry {entry} with a non-empty prefix"
                    )));
                }
                Ok(())
            }
        }
    }
}

impl std::fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryPoint::Finite { path } => write!(f, "{path}"),
            BoundaryPoint::Ep { prefix, cycle } => {
                if prefix.is_empty() {
                    write!(f, "{cycle}^∞")
                } else {
                    write!(f, "{prefix}·{cycle}^∞")
                }
            }
            BoundaryPoint::Ray { prefix, ray, entry } => {
                if prefix.is_empty() {
                    write!(f, "{ray}@{entry}→")
                } else {
                    write!(f, "{prefix}·{ray}@{entry}→")
                }
            }
        }
    }
}

/// The shift map σ: delete the first edge. A length-1 finite path maps to
/// the length-0 path at its range; σ is undefined on length-0 points.
pub fn shift(g: &Graph, x: &BoundaryPoint) -> Result<BoundaryPoint> {
    match x {
        BoundaryPoint::Finite { path } => {
            if path.is_empty() {
                return Err(Error::ShiftOnVertexPoint);
            }
            Ok(BoundaryPoint::Finite { path: path.suffix_from(g, 1)? })
        }
        BoundaryPoint::Ep { prefix, cycle } => {
            if prefix.is_empty() {
                // γγγ… shifts to the next rotation of γ.
                Ok(BoundaryPoint::Ep { prefix: Path::at(cycle.rotated(1).source(g)?), cycle: cycle.rotated(1) })
            } else {
                // Dropping the first prefix edge keeps the canonical form:
                // the absorb condition concerns the prefix's last edge.
                Ok(BoundaryPoint::Ep { prefix: prefix.suffix_from(g, 1)?, cycle: cycle.clone() })
            }
        }
        BoundaryPoint::Ray { prefix, ray, entry } => {
            if prefix.is_empty() {
                let entry = entry + 1;
                Ok(BoundaryPoint::Ray {
                    prefix: Path::at(Vertex::Ray { ray: ray.clone(), depth: entry }),
                    ray: ray.clone(),
                    entry,
                })
            } else {
                Ok(BoundaryPoint::Ray {
                    prefix: prefix.suffix_from(g, 1)?,
                    ray: ray.clone(),
                    entry: *entry,
                })
            }
        }
    }
}

/// Least period of an eventually periodic point: the length of its
/// primitive cycle. Errors on other kinds.
pub fn least_period(x: &BoundaryPoint) -> Result<u64> {
    match x {
        BoundaryPoint::Ep { cycle, .. } => Ok(cycle.len() as u64),
        _ => Err(Error::WrongPointKind { expected: "eventually periodic" }),
    }
}

/// Normalize an arbitrary (prefix, cycle) presentation of μγγγ… into the
/// canonical Ep point: replace the cycle by its primitive root, then absorb
/// the shared suffix of prefix and cycle by rotating the cycle backwards and
/// shortening the prefix.
pub fn canonicalize_ep(g: &Graph, prefix: Path, cycle: Cycle) -> Result<BoundaryPoint> {
    prefix.validate(g)?;
    cycle.validate(g)?;
    let r = prefix.range(g)?;
    let s = cycle.source(g)?;
    if r != s {
        return Err(Error::NotComposable {
            position: prefix.len(),
            msg: format!("prefix ends at {r}, cycle starts at {s}"),
        });
    }
    let (mut delta, _) = primitive_root(&cycle);
    let mut prefix = prefix;
    while let (Some(pl), Some(cl)) = (prefix.edges().last(), delta.edges().last()) {
        if pl != cl {
            break;
        }
        // Rotate right: the absorbed edge becomes the cycle's first edge.
        delta = delta.rotated(delta.len() - 1);
        prefix = prefix.prefix(prefix.len() - 1);
    }
    BoundaryPoint::ep(g, prefix, delta)
}

/// The chain x, σx, σ²x, … with at most `max + 1` entries (shorter when a
/// finite point runs out of edges).
pub fn shift_chain(g: &Graph, x: &BoundaryPoint, max: u64) -> Result<Vec<BoundaryPoint>> {
    let mut chain = vec![x.clone()];
    for _ in 0..max {
        match shift(g, chain.last().unwrap()) {
            Ok(next) => chain.push(next),
            Err(Error::ShiftOnVertexPoint) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(chain)
}

/// Decide tail equivalence: is σᵐ(x) = σⁿ(y) for some m, n? Returns the
/// minimal witness (minimizing m+n, then m), or `None`.
///
/// Decidability rests on per-kind search bounds — a witness exists iff one
/// exists inside the scanned rectangle:
///
/// * two finite points: any witness shifts each path into a suffix, so
///   m ≤ |x|, n ≤ |y|;
/// * two Ep points: least periods must agree (lp is shift-invariant), and
///   σᵐx for m ≥ |prefix| cycles through lp points, so any witness reduces
///   mod lp into m ≤ |prefix(x)| + lp, n ≤ |prefix(y)| + lp;
/// * two Ray points: the rays must be the same, and on the pure-ray tail a
///   witness must align entries, pinning m − n; the smallest aligned pair
///   is in the rectangle m ≤ |prefix(x)| + gap⁺, n ≤ |prefix(y)| + gap⁻
///   (gap = entry difference);
/// * mixed kinds: never equivalent (σ preserves the kind).
pub fn tail_equivalent(
    g: &Graph,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
) -> Result<Option<ShiftWitness>> {
    use BoundaryPoint::*;
    let (mx, my) = match (x, y) {
        (Finite { path: px }, Finite { path: py }) => (px.len() as u64, py.len() as u64),
        (Ep { prefix: px, cycle: cx }, Ep { prefix: py, cycle: cy }) => {
            if cx.len() != cy.len() {
                return Ok(None);
            }
            let lp = cx.len() as u64;
            (px.len() as u64 + lp, py.len() as u64 + lp)
        }
        (Ray { prefix: px, ray: rx, entry: ax }, Ray { prefix: py, ray: ry, entry: ay }) => {
            if rx != ry {
                return Ok(None);
            }
            let up = ay.saturating_sub(*ax);
            let down = ax.saturating_sub(*ay);
            (px.len() as u64 + up, py.len() as u64 + down)
        }
        _ => return Ok(None),
    };

    let xs = shift_chain(g, x, mx)?;
    let ys = shift_chain(g, y, my)?;
    // Scan by total shift, then by m: the first hit is the minimal witness.
    for total in 0..=(mx + my) {
        let lo = total.saturating_sub(ys.len() as u64 - 1);
        for m in lo..=total.min(xs.len() as u64 - 1) {
            let n = total - m;
            if xs[m as usize] == ys[n as usize] {
                return Ok(Some(ShiftWitness { m, n, minimal: true }));
            }
        }
    }
    Ok(None)
}

/// Is x an isolated point of ∂E?
///
/// * finite x: iff r(x) is a sink (an infinite emitter admits infinitely
///   many sibling continuations in every cylinder);
/// * eventually periodic x: iff its cycle has no exit — prefix branching is
///   irrelevant, only infinitely recurring branches accumulate;
/// * ray x: always — the tail's vertices have out-degree 1, so branching
///   occurs at finitely many positions.
///
/// ω out-degree counts as ≥ 2 everywhere.
pub fn is_isolated(g: &Graph, x: &BoundaryPoint) -> Result<bool> {
    match x {
        BoundaryPoint::Finite { path } => {
            let r = path.range(g)?;
            match r {
                Vertex::Core { name } => Ok(g.is_sink(&name)),
                _ => Ok(false),
            }
        }
        BoundaryPoint::Ep { cycle, .. } => Ok(!has_exit(g, cycle)?),
        BoundaryPoint::Ray { .. } => Ok(true),
    }
}

/// Default node cap for [`points_within`].
pub const DEFAULT_POINT_NODE_CAP: u64 = 1_000_000;

/// Largest size ≤ `want` whose [`points_within`] path-tree upper bound fits
/// in `node_cap`.
///
/// The bound multiplies the root count (core vertices plus one head/ray
/// root per depth level) by a geometric series in the maximum sampled
/// out-degree. It over-estimates, so an enumeration planned with it
/// normally succeeds on the first try — callers keep a shrinking retry as
/// the safety net rather than paying for full-budget failures size by size.
pub(crate) fn plan_size(g: &Graph, want: u64, node_cap: u64) -> u64 {
    let mut b: u64 = 1;
    for v in g.core_vertices() {
        if let Ok((outs, _)) = g.out_edges(&Vertex::core(v.clone())) {
            b = b.max(outs.len() as u64);
        }
    }
    let symbolic = (g.heads().count() + g.rays().count()) as u64;
    let mut best = 0;
    let mut tree: u64 = 1; // Σ_{l ≤ s} b^l
    let mut pow: u64 = 1; // b^s
    for s in 0..=want {
        if s > 0 {
            pow = pow.saturating_mul(b);
            tree = tree.saturating_add(pow);
        }
        let roots = (g.core_vertex_count() as u64).saturating_add(symbolic.saturating_mul(s));
        if roots.saturating_mul(tree) <= node_cap {
            best = s;
        } else {
            break;
        }
    }
    best
}

/// Enumerate every representable boundary point whose finite part (path /
/// prefix) has length ≤ `size`, starting from all core vertices and from
/// head/ray vertices of depth ≤ `size`.
///
/// The walk visits every path of length ≤ `size` from those roots (counted
/// against `node_cap`); each path contributes the boundary points readable
/// off it: a finite point when its range is singular, an Ep point for every
/// closed suffix (normalized via [`canonicalize_ep`]), and a Ray point when
/// it touches an out-ray. The result is a deduplicated, deterministically
/// ordered set.
pub fn points_within(g: &Graph, size: u64, node_cap: u64) -> Result<BTreeSet<BoundaryPoint>> {
    let mut roots: Vec<Vertex> = g.core_vertices().map(|v| Vertex::core(v.clone())).collect();
    for (id, _) in g.heads() {
        for depth in 1..=size {
            roots.push(Vertex::Head { ray: id.clone(), depth });
        }
    }
    for (id, _) in g.rays() {
        for depth in 1..=size {
            roots.push(Vertex::Ray { ray: id.clone(), depth });
        }
    }

    let mut points = BTreeSet::new();
    let mut nodes: u64 = 0;
    for root in roots {
        let mut level = vec![Path::at(root)];
        for _ in 0..=size {
            let mut next = Vec::new();
            for p in &level {
                nodes += 1;
                if nodes > node_cap {
                    return Err(Error::CapExceeded { what: "boundary enumeration nodes", cap: node_cap });
                }
                collect_points_of_path(g, p, &mut points)?;
                if (p.len() as u64) < size {
                    let r = p.range(g)?;
                    let (outs, _) = g.out_edges(&r)?;
                    for e in outs {
                        next.push(p.extended(g, e)?);
                    }
                }
            }
            level = next;
            if level.is_empty() {
                break;
            }
        }
    }
    Ok(points)
}

/// Read the boundary points visible on one finite path.
fn collect_points_of_path(
    g: &Graph,
    p: &Path,
    points: &mut BTreeSet<BoundaryPoint>,
) -> Result<()> {
    let seq = p.vertex_seq(g)?;
    let end = &seq[p.len()];

    // Finite point at a singular range.
    if g.is_singular(end) {
        points.insert(BoundaryPoint::Finite { path: p.clone() });
    }

    // A closed suffix yields an eventually periodic point.
    for i in 0..p.len() {
        if &seq[i] == end {
            let cycle = Cycle::from_edges(g, p.edges()[i..].to_vec())?;
            points.insert(canonicalize_ep(g, p.prefix(i), cycle)?);
        }
    }

    // Out-rays: either the path ends at a core anchor, or it ends inside a
    // ray (the constructor absorbs the trailing ray edges).
    match end {
        Vertex::Core { name } => {
            for ray in g.rays_at(name) {
                points.insert(BoundaryPoint::ray(g, p.clone(), ray.clone(), 0)?);
            }
        }
        Vertex::Ray { ray, depth } => {
            points.insert(BoundaryPoint::ray(g, p.clone(), ray.clone(), *depth)?);
        }
        Vertex::Head { .. } => {}
    }
    Ok(())
}
