//! Isolated-point classification and the whole-space census.
//!
//! Every isolated point of ∂E is of exactly one of three kinds: **finite**
//! (its range is a sink), **eventually periodic** (its cycle has no exit),
//! or **wandering** (it visits every vertex finitely often — here: its tail
//! runs along an out-ray). [`census`] counts each kind in ℕ∪{ω} without
//! enumerating points, by analyzing the languages of generating paths:
//!
//! * isolated finite points ↔ paths into sinks;
//! * isolated eventually periodic points ↔ pairs (no-exit cycle C, path
//!   entering C that never rides an edge sourced on C — precisely the
//!   canonical prefixes);
//! * isolated wandering points ↔ out-ray tails (ω as soon as any out-ray
//!   exists: one point per entry depth).
//!
//! A count is ω exactly when the describing language is infinite — a cycle
//! can pump a generating path, an ω bundle lies on one, or a head feeds one.
//!
//! **Discreteness.** ∂E is discrete (every point isolated) iff the graph has
//! no ω bundle and no simple cycle with an exit: sinks are then the only
//! singular vertices, and every infinite path either enters an out-ray or
//! gets trapped on a no-exit cycle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::boundary::{is_isolated, points_within, BoundaryPoint};
use crate::count::Count;
use crate::cycle::{env_cap_or, has_exit, simple_cycles_with_cap, Cycle, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, Multiplicity, VertexName};

/// The trichotomy tag of an isolated point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsolatedType {
    /// A finite path; its range is necessarily a sink.
    Finite,
    /// An infinite path of the form μγγγ….
    EventuallyPeriodic,
    /// An infinite path visiting every vertex finitely often.
    Wandering,
}

/// Witness samples backing the census counts (at most
/// [`WITNESS_SAMPLE_SIZE`] per type, in canonical order).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusWitnesses {
    /// Sample isolated finite points.
    pub finite: Vec<BoundaryPoint>,
    /// Sample isolated eventually periodic points.
    pub eventually_periodic: Vec<BoundaryPoint>,
    /// Sample isolated wandering points.
    pub wandering: Vec<BoundaryPoint>,
}

/// Whole-space census of isolated boundary points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    /// Number of isolated finite points.
    pub isolated_finite: Count,
    /// Number of isolated eventually periodic points.
    pub isolated_ep: Count,
    /// Number of isolated wandering points.
    pub isolated_wandering: Count,
    /// Number of tail-equivalence classes of isolated ep points (= number
    /// of no-exit cycles).
    pub isolated_ep_orbits: Count,
    /// True iff every boundary point is isolated.
    pub discrete: bool,
    /// The no-exit simple cycles, canonical and sorted.
    pub no_exit_cycles: Vec<Cycle>,
    /// Finite samples of isolated points per type.
    pub witnesses: CensusWitnesses,
}

/// Maximum number of witness points sampled per type.
pub const WITNESS_SAMPLE_SIZE: usize = 16;

/// Node budget for the witness-sampling walk (the walk shrinks its depth
/// rather than failing when a dense graph would exceed it). Sampling needs
/// only [`WITNESS_SAMPLE_SIZE`] points per type, so the budget is sized for
/// responsiveness on dense graphs, not coverage — counts are computed
/// symbolically and are exact regardless.
const WITNESS_NODE_BUDGET: u64 = 4_000;

/// Classify an isolated point; errors on non-isolated input.
///
/// Wandering is only ever returned for ray points, whose expansions visit
/// each vertex at most once past the prefix — never for a point that visits
/// some vertex infinitely often (those are eventually periodic here).
pub fn classify_isolated(g: &Graph, x: &BoundaryPoint) -> Result<IsolatedType> {
    if !is_isolated(g, x)? {
        return Err(Error::NotIsolated);
    }
    Ok(match x {
        BoundaryPoint::Finite { .. } => IsolatedType::Finite,
        BoundaryPoint::Ep { .. } => IsolatedType::EventuallyPeriodic,
        BoundaryPoint::Ray { .. } => IsolatedType::Wandering,
    })
}

/// Count the paths of the derived graph that end at `target`, excluding
/// paths that traverse any edge sourced at a vertex in `blocked`
/// (the length-0 path at `target` always counts).
///
/// Returns ω exactly when the path language is infinite: an unblocked cycle
/// can pump a generating path, an ω bundle lies on one, or a head feeds one.
pub(crate) fn count_paths_into(
    g: &Graph,
    target: &VertexName,
    blocked: &BTreeSet<VertexName>,
) -> Result<Count> {
    if !g.has_vertex(target) {
        return Err(Error::UnknownVertex(target.clone()));
    }
    // Reverse reachability over allowed edges (source not blocked).
    let mut reach: BTreeSet<VertexName> = BTreeSet::new();
    reach.insert(target.clone());
    let mut frontier = vec![target.clone()];
    while let Some(w) = frontier.pop() {
        for b in g.in_bundles(&w) {
            if blocked.contains(&b.source) || reach.contains(&b.source) {
                continue;
            }
            reach.insert(b.source.clone());
            frontier.push(b.source.clone());
        }
    }

    // ω: an ω bundle or a head on a generating path.
    for b in g.bundles() {
        if b.multiplicity == Multiplicity::Omega
            && !blocked.contains(&b.source)
            && reach.contains(&b.range)
        {
            return Ok(Count::Omega);
        }
    }
    for (_, anchor) in g.heads() {
        if reach.contains(anchor) {
            return Ok(Count::Omega);
        }
    }

    // ω: a cycle inside the generating subgraph (three-color DFS over the
    // allowed edges between reachable vertices).
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let verts: Vec<&VertexName> = reach.iter().collect();
    let index: BTreeMap<&VertexName, usize> = verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut color = vec![Color::White; verts.len()];
    for start in 0..verts.len() {
        if color[start] != Color::White {
            continue;
        }
        // Stack of (vertex, next-child-cursor) pairs; children are the
        // allowed out-bundle targets inside `reach`.
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let children = |u: usize| -> Vec<usize> {
            if blocked.contains(verts[u]) {
                return Vec::new();
            }
            g.out_bundles(verts[u])
                .filter_map(|b| index.get(&b.range).copied())
                .collect()
        };
        color[start] = Color::Gray;
        stack.push((start, children(start), 0));
        while let Some((u, kids, cursor)) = stack.last_mut() {
            if *cursor < kids.len() {
                let w = kids[*cursor];
                *cursor += 1;
                match color[w] {
                    Color::Gray => return Ok(Count::Omega),
                    Color::White => {
                        color[w] = Color::Gray;
                        let kw = children(w);
                        stack.push((w, kw, 0));
                    }
                    Color::Black => {}
                }
            } else {
                color[*u] = Color::Black;
                stack.pop();
            }
        }
    }

    // Finite: DAG count with multiplicities, f(u) = [u = target] + Σ m·f(w).
    let mut memo: BTreeMap<&VertexName, u128> = BTreeMap::new();
    // Reverse topological evaluation via iterative post-order.
    fn eval<'g>(
        g: &'g Graph,
        u: &'g VertexName,
        target: &VertexName,
        blocked: &BTreeSet<VertexName>,
        reach: &BTreeSet<VertexName>,
        memo: &mut BTreeMap<&'g VertexName, u128>,
    ) -> u128 {
        if let Some(v) = memo.get(u) {
            return *v;
        }
        let mut total: u128 = u128::from(u == target);
        if !blocked.contains(u) {
            for b in g.out_bundles(u) {
                if !reach.contains(&b.range) {
                    continue;
                }
                let m = match b.multiplicity {
                    Multiplicity::Finite(m) => u128::from(m),
                    Multiplicity::Omega => unreachable!("ω bundles returned earlier"),
                };
                total += m * eval(g, &b.range, target, blocked, reach, memo);
            }
        }
        memo.insert(u, total);
        total
    }
    let mut total: u128 = 0;
    for u in &reach {
        let u_ref = g
            .core_vertices()
            .find(|v| *v == u)
            .expect("reach holds declared vertices");
        total += eval(g, u_ref, target, blocked, &reach, &mut memo);
    }
    Ok(u64::try_from(total).map(Count::Finite).unwrap_or(Count::Omega))
}

/// Count the isolated eventually periodic points over one no-exit cycle:
/// canonical prefixes are exactly the paths into each cycle vertex that
/// avoid edges sourced on the cycle.
pub(crate) fn count_ep_points_for_cycle(g: &Graph, cycle: &Cycle) -> Result<Count> {
    let mut blocked = BTreeSet::new();
    for v in cycle.vertex_seq(g)? {
        match v {
            crate::graph::Vertex::Core { name } => {
                blocked.insert(name);
            }
            other => return Err(Error::ForeignCycle(format!("cycle visits {other}"))),
        }
    }
    let mut total = Count::ZERO;
    for w in &blocked {
        total = total + count_paths_into(g, w, &blocked)?;
    }
    Ok(total)
}

/// Compute the census with the default enumeration cap.
pub fn census(g: &Graph) -> Result<Census> {
    census_with_cap(g, env_cap_or(DEFAULT_CYCLE_CAP))
}

/// [`census`] with an explicit cap for the cycle enumeration.
pub fn census_with_cap(g: &Graph, cap: u64) -> Result<Census> {
    let cycles = simple_cycles_with_cap(g, cap)?;
    let mut no_exit = Vec::new();
    for c in &cycles {
        if !has_exit(g, c)? {
            no_exit.push(c.clone());
        }
    }
    let discrete = !g.has_omega_bundle() && no_exit.len() == cycles.len();

    let mut isolated_finite = Count::ZERO;
    let empty = BTreeSet::new();
    for v in g.core_vertices() {
        if g.is_sink(v) {
            isolated_finite = isolated_finite + count_paths_into(g, v, &empty)?;
        }
    }

    let mut isolated_ep = Count::ZERO;
    for c in &no_exit {
        isolated_ep = isolated_ep + count_ep_points_for_cycle(g, c)?;
    }

    let isolated_wandering = if g.rays().next().is_some() { Count::Omega } else { Count::ZERO };

    let witnesses = sample_witnesses(g)?;

    Ok(Census {
        isolated_finite,
        isolated_ep,
        isolated_wandering,
        isolated_ep_orbits: Count::Finite(no_exit.len() as u64),
        discrete,
        no_exit_cycles: no_exit,
        witnesses,
    })
}

/// Sample isolated points per type by walking bounded-length paths; the
/// walk depth shrinks when a dense graph would exceed the node budget.
fn sample_witnesses(g: &Graph) -> Result<CensusWitnesses> {
    let full = g.core_vertex_count() as u64 + 4;
    let start = crate::boundary::plan_size(g, full, WITNESS_NODE_BUDGET);
    let mut found = BTreeSet::new();
    for size in (0..=start).rev() {
        match points_within(g, size, WITNESS_NODE_BUDGET) {
            Ok(pts) => {
                found = pts;
                break;
            }
            Err(Error::CapExceeded { .. }) if size > 0 => continue,
            Err(e) => return Err(e),
        }
    }
    let mut w = CensusWitnesses::default();
    for p in found {
        if w.finite.len() == WITNESS_SAMPLE_SIZE
            && w.eventually_periodic.len() == WITNESS_SAMPLE_SIZE
            && w.wandering.len() == WITNESS_SAMPLE_SIZE
        {
            break;
        }
        if !is_isolated(g, &p)? {
            continue;
        }
        let bucket = match classify_isolated(g, &p)? {
            IsolatedType::Finite => &mut w.finite,
            IsolatedType::EventuallyPeriodic => &mut w.eventually_periodic,
            IsolatedType::Wandering => &mut w.wandering,
        };
        if bucket.len() < WITNESS_SAMPLE_SIZE {
            bucket.push(p);
        }
    }
    Ok(w)
}

/// Is the boundary path space discrete (every point isolated)?
///
/// Equals `census(g).discrete`, computed without the counting work.
pub fn is_discrete_space(g: &Graph) -> Result<bool> {
    is_discrete_space_with_cap(g, env_cap_or(DEFAULT_CYCLE_CAP))
}

/// [`is_discrete_space`] with an explicit cycle-enumeration cap.
pub fn is_discrete_space_with_cap(g: &Graph, cap: u64) -> Result<bool> {
    if g.has_omega_bundle() {
        return Ok(false);
    }
    for c in simple_cycles_with_cap(g, cap)? {
        if has_exit(g, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
