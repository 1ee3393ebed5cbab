//! Independent depth-bounded oracle over the cylinder-set tree.
//!
//! This module certifies or refutes isolation of boundary points by direct
//! inspection of truncated path trees, deliberately sharing nothing with the
//! cycle-analysis or census machinery: it reads boundary points only through
//! their representation (prefix length, tail period, edge expansion) and
//! verifies every claim inside the tree itself. Disagreement between this
//! oracle and the analytic classifier is a hard failure, surfaced by
//! [`cross_check`].
//!
//! **How certification works.** `{x}` is open iff some basic cylinder
//! `Z(μ\F)` equals `{x}`. Since a longer base path can always stand in for a
//! finite excluded edge set, certificates here always use `F = ∅`: the
//! oracle looks for a prefix μ of x past which every continuation vertex has
//! out-degree exactly 1 and the tail provably closes (loop repetition seen
//! in the window, or the tail runs up an out-ray).
//!
//! **How refutation works.** A second boundary point in every neighborhood
//! of x is exhibited: a branch position on x's tail (which recurs every
//! period for an eventually periodic point, and can never be outrun), plus a
//! sibling edge extended to a concrete boundary point. The extension walk
//! always succeeds within `core vertex count + 1` steps: it either reaches a
//! sink, an infinite emitter, or an out-ray, or it revisits a core vertex
//! and may loop forever.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::boundary::{is_isolated, points_within, BoundaryPoint};
use crate::count::Count;
use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, Path, Vertex};

/// Default node cap for tree construction.
pub const DEFAULT_NODE_CAP: u64 = 1_000_000;

/// Node budget for the candidate enumeration inside [`cross_check`]; the
/// candidate length shrinks rather than failing when a dense graph would
/// exceed it (verdicts still run at the full requested depth).
const CANDIDATE_NODE_BUDGET: u64 = 20_000;

/// The default inspection depth for a graph: `4 · (core vertex count + 2)`,
/// a determinization horizon comfortably past every small graph's mixing
/// length.
pub fn default_depth(g: &Graph) -> u64 {
    4 * (g.core_vertex_count() as u64 + 2)
}

/// One node of a truncated path tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    /// The path from its root.
    pub path: Path,
    /// Out-degree of the path's range (ω collapses to the sampled edges in
    /// the tree's branching, but is reported exactly here).
    pub out_degree: Count,
    /// Whether the finite path itself is a boundary point (range singular).
    pub boundary_member: bool,
}

/// All paths of length ≤ `depth` from every core vertex and every head/ray
/// vertex within `depth`, annotated with out-degrees and ∂E-membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedTree {
    /// The inspection depth.
    pub depth: u64,
    /// The nodes, sorted by path.
    pub nodes: Vec<TreeNode>,
}

impl TruncatedTree {
    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Three-valued oracle verdict tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleTag {
    /// `{x}` is open; the certificate cylinder contains exactly x.
    IsolatedCertified,
    /// A second boundary point was exhibited in every neighborhood of x.
    NotIsolated,
    /// The depth was too small to decide either way.
    Unknown,
}

/// A basic cylinder `Z(base \ excluded)`.
///
/// Certificates produced here always have an empty `excluded` set: finitely
/// many first-step exclusions can always be replaced by a longer base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cylinder {
    /// The base path μ.
    pub base: Path,
    /// Excluded continuation edges at r(μ).
    pub excluded: Vec<EdgeRef>,
}

/// The oracle's answer for one point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    /// The three-valued verdict.
    pub tag: OracleTag,
    /// The isolating cylinder when certified.
    pub certificate: Option<Cylinder>,
}

impl OracleVerdict {
    fn certified(base: Path) -> OracleVerdict {
        OracleVerdict {
            tag: OracleTag::IsolatedCertified,
            certificate: Some(Cylinder { base, excluded: Vec::new() }),
        }
    }

    fn not_isolated() -> OracleVerdict {
        OracleVerdict { tag: OracleTag::NotIsolated, certificate: None }
    }

    fn unknown() -> OracleVerdict {
        OracleVerdict { tag: OracleTag::Unknown, certificate: None }
    }
}

/// Build the truncated tree to `depth` with the default node cap.
pub fn enumerate_boundary_truncated(g: &Graph, depth: u64) -> Result<TruncatedTree> {
    enumerate_boundary_truncated_capped(g, depth, crate::cycle::env_cap_or(DEFAULT_NODE_CAP))
}

/// [`enumerate_boundary_truncated`] with an explicit node cap.
pub fn enumerate_boundary_truncated_capped(
    g: &Graph,
    depth: u64,
    node_cap: u64,
) -> Result<TruncatedTree> {
    let mut roots: Vec<Vertex> = g.core_vertices().map(|v| Vertex::core(v.clone())).collect();
    for (id, _) in g.heads() {
        for d in 1..=depth {
            roots.push(Vertex::Head { ray: id.clone(), depth: d });
        }
    }
    for (id, _) in g.rays() {
        for d in 1..=depth {
            roots.push(Vertex::Ray { ray: id.clone(), depth: d });
        }
    }

    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut queue: VecDeque<Path> = roots.into_iter().map(Path::at).collect();
    let mut seen: u64 = 0;
    while let Some(path) = queue.pop_front() {
        seen += 1;
        if seen > node_cap {
            return Err(Error::CapExceeded { what: "oracle tree nodes", cap: node_cap });
        }
        let range = path.range(g)?;
        if (path.len() as u64) < depth {
            let (edges, _truncated) = g.out_edges(&range)?;
            for e in edges {
                queue.push_back(path.extended(g, e)?);
            }
        }
        nodes.push(TreeNode {
            out_degree: g.out_degree(&range)?,
            boundary_member: g.is_singular(&range),
            path,
        });
    }
    nodes.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(TruncatedTree { depth, nodes })
}

/// Walk forward from `base` for at most `budget` steps, looking for proof
/// that some boundary point extends `base`: a singular range, an out-ray
/// vertex, or a revisited core vertex (which closes a pumpable loop).
///
/// With `budget ≥ core vertex count + 1` the walk always succeeds, because a
/// core walk that long must revisit a vertex.
fn extends_to_boundary_point(g: &Graph, base: &Path, budget: u64) -> Result<bool> {
    let mut visited_core: Vec<Vertex> = base
        .vertex_seq(g)?
        .into_iter()
        .filter(Vertex::is_core)
        .collect();
    let mut cur = base.range(g)?;
    for _ in 0..=budget {
        if g.is_singular(&cur) || matches!(cur, Vertex::Ray { .. }) {
            return Ok(true);
        }
        if cur.is_core() && visited_core.iter().filter(|v| **v == cur).count() >= 2 {
            return Ok(true);
        }
        let (edges, _) = g.out_edges(&cur)?;
        let e = edges.into_iter().next().expect("non-singular vertices emit an edge");
        cur = g.edge_range(&e)?;
        if cur.is_core() {
            visited_core.push(cur.clone());
        }
    }
    Ok(false)
}

/// Decide isolation of `x` by inspecting its expansion inside the depth-
/// truncated tree.
///
/// Certified verdicts carry a cylinder `Z(μ)` whose determinism was checked
/// node by node; refutations exhibit a branch position that recurs in every
/// neighborhood of x plus a concrete second boundary point through it.
/// Verdicts are monotone in `depth`: `unknown` may sharpen to either decided
/// tag, decided tags never change.
pub fn oracle_isolated(g: &Graph, x: &BoundaryPoint, depth: u64) -> Result<OracleVerdict> {
    x.validate(g)?;
    // Budget for exhibiting a second boundary point past a branch.
    let witness_budget = g.core_vertex_count() as u64 + 1;

    match x {
        BoundaryPoint::Finite { path } => {
            if (path.len() as u64) + 1 > depth {
                return Ok(OracleVerdict::unknown());
            }
            let range = path.range(g)?;
            match g.out_degree(&range)? {
                Count::Finite(0) => Ok(OracleVerdict::certified(path.clone())),
                Count::Omega => {
                    // No finite excluded set can silence an ω emitter; any
                    // sampled continuation leads to a second point.
                    if (path.len() as u64) + 1 + witness_budget > depth {
                        return Ok(OracleVerdict::unknown());
                    }
                    let (edges, _) = g.out_edges(&range)?;
                    let e = edges.into_iter().next().expect("ω emitters emit sampled edges");
                    let sibling = path.extended(g, e)?;
                    if extends_to_boundary_point(g, &sibling, witness_budget)? {
                        Ok(OracleVerdict::not_isolated())
                    } else {
                        Ok(OracleVerdict::unknown())
                    }
                }
                Count::Finite(_) => {
                    unreachable!("validated finite points end at singular vertices")
                }
            }
        }
        BoundaryPoint::Ep { prefix, cycle } => {
            let mu = prefix.len();
            let lp = cycle.len();
            // Scan one period window of the tail for a branch; a branch at
            // position i recurs at i + t·lp for every t, so it refutes every
            // cylinder around x.
            let window_end = (mu + lp).min(depth as usize);
            let edges = x.expand(window_end + 1);
            for i in mu..window_end {
                let v = g.edge_source(&edges[i])?;
                if g.out_degree(&v)? >= Count::Finite(2) {
                    if (i as u64) + 1 + witness_budget > depth {
                        return Ok(OracleVerdict::unknown());
                    }
                    let (out, _) = g.out_edges(&v)?;
                    let sibling_edge = out
                        .into_iter()
                        .find(|e| *e != edges[i])
                        .expect("out-degree ≥ 2 leaves a sibling sample");
                    let base = if i == 0 {
                        Path::at(x.source().clone())
                    } else {
                        Path::from_edges(g, edges[..i].to_vec())?
                    };
                    let sibling = base.extended(g, sibling_edge)?;
                    if extends_to_boundary_point(g, &sibling, witness_budget)? {
                        return Ok(OracleVerdict::not_isolated());
                    }
                    return Ok(OracleVerdict::unknown());
                }
            }
            // No branch in the window. Certify only if the whole window plus
            // its closure was visible: out-degree exactly 1 on one period
            // and the period really returns to its starting vertex, which
            // pins the tail forever (certified from depth |prefix| + lp + 1,
            // within the documented |prefix| + 2·lp horizon).
            if (mu + lp) as u64 + 1 > depth {
                return Ok(OracleVerdict::unknown());
            }
            let seq = x.expand(mu + lp + 1);
            let first = g.edge_source(&seq[mu])?;
            let closing = g.edge_source(&seq[mu + lp])?;
            debug_assert_eq!(first, closing, "period window must close on its base vertex");
            if first == closing {
                Ok(OracleVerdict::certified(prefix.clone()))
            } else {
                Ok(OracleVerdict::unknown())
            }
        }
        BoundaryPoint::Ray { prefix, .. } => {
            // One step past the prefix the tail sits strictly on an out-ray,
            // where every vertex has out-degree exactly 1 forever.
            let need = prefix.len() + 1;
            if (need as u64) > depth {
                return Ok(OracleVerdict::unknown());
            }
            let edges = x.expand(need);
            let base = Path::from_edges(g, edges)?;
            debug_assert!(matches!(base.range(g)?, Vertex::Ray { .. }));
            Ok(OracleVerdict::certified(base))
        }
    }
}

/// One row of a cross-check report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckEntry {
    /// The point under test.
    pub point: BoundaryPoint,
    /// The analytic classifier's answer.
    pub classifier_isolated: bool,
    /// The oracle's verdict tag at the report's depth.
    pub oracle: OracleTag,
}

/// Classifier-versus-oracle comparison over every representable point of
/// the truncated tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    /// Oracle inspection depth.
    pub depth: u64,
    /// Finite-part length bound used for candidate enumeration.
    pub candidate_size: u64,
    /// Per-point verdict pairs.
    pub entries: Vec<CrossCheckEntry>,
    /// Entries where a decided oracle verdict contradicts the classifier.
    /// Must be empty.
    pub disagreements: Vec<CrossCheckEntry>,
    /// Number of entries the oracle could not decide at this depth.
    pub unknown_count: u64,
}

impl CrossCheckReport {
    /// True when no decided oracle verdict contradicts the classifier.
    pub fn clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compare the analytic classifier against the oracle on every representable
/// point with finite part ≤ `depth / 2` — half the depth, so decided
/// verdicts have inspection headroom past every candidate's finite part —
/// shrinking the candidate bound (never the verdict depth) if the
/// enumeration would exceed its node budget.
pub fn cross_check(g: &Graph, depth: u64) -> Result<CrossCheckReport> {
    let mut candidates = None;
    let mut candidate_size = 0;
    let start = crate::boundary::plan_size(g, depth / 2, CANDIDATE_NODE_BUDGET);
    for size in (0..=start).rev() {
        match points_within(g, size, CANDIDATE_NODE_BUDGET) {
            Ok(pts) => {
                candidates = Some(pts);
                candidate_size = size;
                break;
            }
            Err(Error::CapExceeded { .. }) if size > 0 => continue,
            Err(e) => return Err(e),
        }
    }
    let candidates = candidates.expect("size 0 enumeration is within any budget");

    let mut entries = Vec::new();
    let mut disagreements = Vec::new();
    let mut unknown_count = 0;
    for point in candidates {
        let classifier_isolated = is_isolated(g, &point)?;
        let verdict = oracle_isolated(g, &point, depth)?;
        let entry = CrossCheckEntry { point, classifier_isolated, oracle: verdict.tag };
        let disagree = match verdict.tag {
            OracleTag::IsolatedCertified => !classifier_isolated,
            OracleTag::NotIsolated => classifier_isolated,
            OracleTag::Unknown => {
                unknown_count += 1;
                false
            }
        };
        if disagree {
            disagreements.push(entry.clone());
        }
        entries.push(entry);
    }
    Ok(CrossCheckReport { depth, candidate_size, entries, disagreements, unknown_count })
}
