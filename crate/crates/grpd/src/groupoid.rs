//! The graph groupoid, realized concretely on discrete boundary spaces.
//!
//! Elements are triples `(x, m−n, y)` with σᵐ(x) = σⁿ(y); the cocycle reads
//! off the middle integer. On a discrete space the tail-equivalence classes
//! (orbits) fall into three finitely presented families — all paths into one
//! sink, all eventually periodic points over one no-exit cycle, all points
//! running up one out-ray — and each family carries a cardinality in ℕ∪{ω}
//! and an isotropy group: trivial, or infinite cyclic exactly when the
//! family is eventually periodic.
//!
//! [`build_phi`] constructs the explicit isomorphism between two discrete
//! graph groupoids from an orbit-family matching: on non-ep orbits the
//! integer of an image element is forced (it is the unique element of
//! [`elements_between`] at the image points); on ep orbits it follows the
//! index formula
//!
//! ```text
//! φ((x,k,y)) = (h(x), j'_{h(x)} − j'_{h(y)} − n·lp_F, h(y)),
//!     where j_x − j_y − k = n·lp_E,
//! ```
//!
//! with j the distance to a chosen periodic representative of the orbit.
//! [`verify_phi`] checks well-definedness, injectivity, multiplicativity,
//! and inverse-compatibility exhaustively on a finite window, carrying a
//! counterexample element when any check fails.
//!
//! The witness builder deliberately exposes the non-uniqueness of φ in the
//! presence of isolated ep points: [`IsoWitness::with_base_twist`] re-gauges
//! one orbit's index function by a multiple of lp (a second, equally valid
//! isomorphism — no such freedom exists without ep points), while
//! [`IsoWitness::with_rule_offset`] shifts an orbit's integer rule by a raw
//! constant, which is *not* an isomorphism and exists so tests can watch
//! the verifier catch it.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boundary::{least_period, tail_equivalent, BoundaryPoint, ShiftWitness};
use crate::count::Count;
use crate::cycle::{no_exit_cycles, Cycle};
use crate::error::{Error, Result};
use crate::graph::{Graph, Path, RayId, Vertex, VertexName};
use crate::isolated::{count_ep_points_for_cycle, count_paths_into, is_discrete_space};

/// Isotropy group of an orbit family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Isotropy {
    /// Only the unit fixes each point: `elements_between(x, x) = {0}`.
    Trivial,
    /// `elements_between(x, x) = lp·ℤ ≅ ℤ` for every member.
    InfiniteCyclic {
        /// The least period of the family's members.
        lp: u64,
    },
}

impl Isotropy {
    /// True for the infinite cyclic case.
    pub fn is_cyclic(self) -> bool {
        matches!(self, Isotropy::InfiniteCyclic { .. })
    }
}

/// What generates an orbit family's points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// All finite paths ending at one sink.
    Sink {
        /// The sink vertex.
        vertex: VertexName,
    },
    /// All eventually periodic points over one no-exit cycle.
    Cycle {
        /// The cycle, in canonical rotation.
        cycle: Cycle,
    },
    /// All points whose tail runs up one out-ray.
    Ray {
        /// The ray identifier.
        ray: RayId,
    },
}

/// One tail-equivalence class of isolated boundary points, finitely
/// presented.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFamily {
    /// The generating structure.
    pub kind: FamilyKind,
    /// Distinguished member: the empty-prefix point (for ep families, the
    /// periodic point over the canonical rotation — the representative x_W).
    pub base: BoundaryPoint,
    /// Number of points in the family.
    pub cardinality: Count,
    /// Isotropy group; infinite cyclic iff the family is eventually
    /// periodic.
    pub isotropy: Isotropy,
}

impl OrbitFamily {
    /// True when the family consists of eventually periodic points.
    pub fn ep(&self) -> bool {
        self.isotropy.is_cyclic()
    }

    /// The least period for ep families.
    pub fn lp(&self) -> Option<u64> {
        match self.isotropy {
            Isotropy::InfiniteCyclic { lp } => Some(lp),
            Isotropy::Trivial => None,
        }
    }

    /// Cheap membership precheck on the representation (no enumeration).
    fn admits(&self, g: &Graph, x: &BoundaryPoint) -> Result<bool> {
        Ok(match (&self.kind, x) {
            (FamilyKind::Sink { vertex }, BoundaryPoint::Finite { path }) => {
                path.range(g)? == Vertex::core(vertex.clone())
            }
            (FamilyKind::Cycle { cycle }, BoundaryPoint::Ep { cycle: xc, .. }) => {
                cycle.rotation_eq(xc)
            }
            (FamilyKind::Ray { ray }, BoundaryPoint::Ray { ray: xr, .. }) => ray == xr,
            _ => false,
        })
    }
}

/// The isolated-part orbit families of any valid graph: one per sink, one
/// per no-exit cycle, one per out-ray. On a discrete space this is the full
/// orbit partition.
pub(crate) fn isolated_orbit_families(g: &Graph) -> Result<Vec<OrbitFamily>> {
    let mut fams = Vec::new();
    let empty = BTreeSet::new();
    for v in g.core_vertices() {
        if !g.is_sink(v) {
            continue;
        }
        fams.push(OrbitFamily {
            kind: FamilyKind::Sink { vertex: v.clone() },
            base: BoundaryPoint::finite(g, Path::at(Vertex::core(v.clone())))?,
            cardinality: count_paths_into(g, v, &empty)?,
            isotropy: Isotropy::Trivial,
        });
    }
    for c in no_exit_cycles(g)? {
        let c = c.canonical();
        let base_vertex = c.source(g)?;
        fams.push(OrbitFamily {
            base: BoundaryPoint::ep(g, Path::at(base_vertex), c.clone())?,
            cardinality: count_ep_points_for_cycle(g, &c)?,
            isotropy: Isotropy::InfiniteCyclic { lp: c.len() as u64 },
            kind: FamilyKind::Cycle { cycle: c },
        });
    }
    for (id, anchor) in g.rays() {
        fams.push(OrbitFamily {
            kind: FamilyKind::Ray { ray: id.clone() },
            base: BoundaryPoint::ray(g, Path::at(Vertex::core(anchor.clone())), id.clone(), 0)?,
            cardinality: Count::Omega,
            isotropy: Isotropy::Trivial,
        });
    }
    Ok(fams)
}

/// Partition the boundary points of a discrete space into orbit families.
///
/// Errors with [`Error::NotDiscrete`] when some point is not isolated (an ω
/// bundle or a cycle with an exit exists).
pub fn orbits(g: &Graph) -> Result<Vec<OrbitFamily>> {
    if !is_discrete_space(g)? {
        return Err(Error::NotDiscrete(
            "orbit families are only complete on discrete boundary spaces".into(),
        ));
    }
    isolated_orbit_families(g)
}

// ---------------------------------------------------------------------------
// Family enumeration
// ---------------------------------------------------------------------------

/// Lazily materialized enumeration of one family in (level, lex) order.
///
/// Levels measure the finite data of a point: path length into the sink,
/// prefix length over the cycle, and prefix length — or entry depth for the
/// prefix-free tail points — along the ray. Each level is finite and sorted;
/// the whole enumeration is a canonical ℕ-indexing of the family.
struct FamilyEnum<'g> {
    g: &'g Graph,
    fam: &'g OrbitFamily,
    levels: Vec<Vec<BoundaryPoint>>,
    /// Paths whose backward extensions build the next level's prefixes.
    carriers: Vec<Path>,
    exhausted: bool,
}

impl<'g> FamilyEnum<'g> {
    fn new(g: &'g Graph, fam: &'g OrbitFamily) -> Result<FamilyEnum<'g>> {
        let mut level0 = Vec::new();
        let mut carriers = Vec::new();
        match &fam.kind {
            FamilyKind::Sink { vertex } => {
                let p = Path::at(Vertex::core(vertex.clone()));
                level0.push(BoundaryPoint::finite(g, p.clone())?);
                carriers.push(p);
            }
            FamilyKind::Cycle { cycle } => {
                for i in 0..cycle.len() {
                    let rot = cycle.rotated(i);
                    let base = rot.source(g)?;
                    level0.push(BoundaryPoint::ep(g, Path::at(base.clone()), rot)?);
                    carriers.push(Path::at(base));
                }
            }
            FamilyKind::Ray { ray } => {
                let anchor = fam.base.source().clone();
                level0.push(BoundaryPoint::ray(g, Path::at(anchor.clone()), ray.clone(), 0)?);
                carriers.push(Path::at(anchor));
            }
        }
        level0.sort();
        Ok(FamilyEnum { g, fam, levels: vec![level0], carriers, exhausted: false })
    }

    /// Vertices a cycle family's prefixes must not ride through.
    fn blocked(&self) -> Result<BTreeSet<VertexName>> {
        let mut blocked = BTreeSet::new();
        if let FamilyKind::Cycle { cycle } = &self.fam.kind {
            for v in cycle.vertex_seq(self.g)? {
                if let Vertex::Core { name } = v {
                    blocked.insert(name);
                }
            }
        }
        Ok(blocked)
    }

    /// Build one more level; marks the enumeration exhausted when the new
    /// level is empty (ray families never exhaust).
    fn grow(&mut self) -> Result<()> {
        if self.exhausted {
            return Ok(());
        }
        let g = self.g;
        let blocked = self.blocked()?;
        let mut next_carriers = Vec::new();
        let mut level = Vec::new();
        for mu in &self.carriers {
            for e in g.in_edges(mu.source())? {
                let src = g.edge_source(&e)?;
                if let Vertex::Core { name } = &src {
                    if blocked.contains(name) {
                        continue;
                    }
                }
                let mut edges = vec![e];
                edges.extend_from_slice(mu.edges());
                let path = Path::from_edges(g, edges)?;
                let point = match &self.fam.kind {
                    FamilyKind::Sink { .. } => BoundaryPoint::finite(g, path.clone())?,
                    FamilyKind::Cycle { cycle } => {
                        let rot = rotation_based_at(g, cycle, &path.range(g)?)?;
                        BoundaryPoint::ep(g, path.clone(), rot)?
                    }
                    FamilyKind::Ray { ray } => {
                        BoundaryPoint::ray(g, path.clone(), ray.clone(), 0)?
                    }
                };
                level.push(point);
                next_carriers.push(path);
            }
        }
        if let FamilyKind::Ray { ray } = &self.fam.kind {
            let depth = self.levels.len() as u64;
            let start = Vertex::Ray { ray: ray.clone(), depth };
            level.push(BoundaryPoint::ray(g, Path::at(start), ray.clone(), depth)?);
        }
        if level.is_empty() {
            self.exhausted = true;
        }
        level.sort();
        self.levels.push(level);
        self.carriers = next_carriers;
        Ok(())
    }

    /// The family level a member representation sits on.
    fn level_of(x: &BoundaryPoint) -> u64 {
        match x {
            BoundaryPoint::Finite { path } => path.len() as u64,
            BoundaryPoint::Ep { prefix, .. } => prefix.len() as u64,
            BoundaryPoint::Ray { prefix, entry, .. } => {
                if prefix.is_empty() {
                    *entry
                } else {
                    prefix.len() as u64
                }
            }
        }
    }

    /// The point at enumeration index `i`, if the family has that many.
    fn point(&mut self, i: u64) -> Result<Option<BoundaryPoint>> {
        let mut before: u64 = 0;
        let mut l = 0;
        loop {
            while l >= self.levels.len() {
                if self.exhausted {
                    return Ok(None);
                }
                self.grow()?;
            }
            let here = self.levels[l].len() as u64;
            if i < before + here {
                return Ok(Some(self.levels[l][(i - before) as usize].clone()));
            }
            before += here;
            l += 1;
        }
    }

    /// The enumeration index of `x`, or `None` when `x` is not a member.
    fn index_of(&mut self, x: &BoundaryPoint) -> Result<Option<u64>> {
        if !self.fam.admits(self.g, x)? {
            return Ok(None);
        }
        let target = Self::level_of(x) as usize;
        while self.levels.len() <= target {
            if self.exhausted {
                return Ok(None);
            }
            self.grow()?;
        }
        let before: u64 = self.levels[..target].iter().map(|lv| lv.len() as u64).sum();
        match self.levels[target].binary_search(x) {
            Ok(pos) => Ok(Some(before + pos as u64)),
            Err(_) => Ok(None),
        }
    }
}

/// The rotation of `cycle` based at vertex `w`.
fn rotation_based_at(g: &Graph, cycle: &Cycle, w: &Vertex) -> Result<Cycle> {
    for i in 0..cycle.len() {
        if g.edge_source(&cycle.edges()[i])? == *w {
            return Ok(cycle.rotated(i));
        }
    }
    Err(Error::ForeignCycle(format!("vertex {w} is not on the cycle")))
}

/// The first `count` points of a family in its canonical (level, lex)
/// enumeration — fewer if the family is smaller.
pub fn family_points(g: &Graph, fam: &OrbitFamily, count: u64) -> Result<Vec<BoundaryPoint>> {
    let mut en = FamilyEnum::new(g, fam)?;
    let mut out = Vec::new();
    for i in 0..count {
        match en.point(i)? {
            Some(p) => out.push(p),
            None => break,
        }
    }
    Ok(out)
}

/// The canonical enumeration index of `x` within a family, or `None` when
/// `x` is not a member.
pub fn family_index_of(g: &Graph, fam: &OrbitFamily, x: &BoundaryPoint) -> Result<Option<u64>> {
    FamilyEnum::new(g, fam)?.index_of(x)
}

/// Distance to the family's periodic representative: the least j with
/// σʲ(x) = x_W, where x_W is the empty-prefix point over the canonical
/// rotation. Only defined on ep families.
pub fn j_index(g: &Graph, fam: &OrbitFamily, x: &BoundaryPoint) -> Result<u64> {
    let (fam_cycle, prefix, xc) = match (&fam.kind, x) {
        (FamilyKind::Cycle { cycle }, BoundaryPoint::Ep { prefix, cycle: xc }) => {
            (cycle, prefix, xc)
        }
        _ => return Err(Error::WrongPointKind { expected: "eventually periodic" }),
    };
    if !fam_cycle.rotation_eq(xc) {
        return Err(Error::NotInFamily(format!("{x} is over a different cycle")));
    }
    // σ^{|prefix|}(x) is the pure rotation based at r(prefix); d more shifts
    // slide that base to the canonical one.
    let w0 = fam_cycle.canonical().source(g)?;
    for d in 0..xc.len() {
        if g.edge_source(&xc.edges()[d])? == w0 {
            return Ok((prefix.len() + d) as u64);
        }
    }
    unreachable!("a cycle rotation contains its canonical base vertex")
}

// ---------------------------------------------------------------------------
// Elements
// ---------------------------------------------------------------------------

/// The set {k : (x, k, y) ∈ G} as a finite descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegerSet {
    /// x and y are not tail-equivalent.
    Empty,
    /// Exactly one integer (non-ep orbits — shift witnesses on wandering
    /// and finite points are unique).
    Single {
        /// The unique cocycle value.
        k: i64,
    },
    /// The full coset base + period·ℤ (ep orbits).
    Coset {
        /// Normalized base in [0, period).
        base: i64,
        /// The orbit's least period.
        period: u64,
    },
}

impl IntegerSet {
    /// Does the set contain k?
    pub fn contains(self, k: i64) -> bool {
        match self {
            IntegerSet::Empty => false,
            IntegerSet::Single { k: k0 } => k == k0,
            IntegerSet::Coset { base, period } => k.rem_euclid(period as i64) == base,
        }
    }

    /// The members within [−window, window], ascending.
    pub fn in_window(self, window: u64) -> Vec<i64> {
        let w = window as i64;
        match self {
            IntegerSet::Empty => Vec::new(),
            IntegerSet::Single { k } => {
                if k.abs() <= w {
                    vec![k]
                } else {
                    Vec::new()
                }
            }
            IntegerSet::Coset { base, period } => {
                let p = period as i64;
                let mut ks = Vec::new();
                let mut k = -w + (base - (-w)).rem_euclid(p);
                while k <= w {
                    ks.push(k);
                    k += p;
                }
                ks
            }
        }
    }
}

/// All cocycle values between two representable points: empty when they are
/// not tail-equivalent, a single integer on non-ep orbits, the coset
/// k₀ + lp·ℤ on ep orbits.
pub fn elements_between(g: &Graph, x: &BoundaryPoint, y: &BoundaryPoint) -> Result<IntegerSet> {
    match tail_equivalent(g, x, y)? {
        None => Ok(IntegerSet::Empty),
        Some(w) => {
            if let Ok(lp) = least_period(x) {
                Ok(IntegerSet::Coset { base: w.k().rem_euclid(lp as i64), period: lp })
            } else {
                Ok(IntegerSet::Single { k: w.k() })
            }
        }
    }
}

/// A groupoid element (x, k, y): σᵐ(x) = σⁿ(y) with k = m − n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidElement {
    /// The range point r(η).
    pub x: BoundaryPoint,
    /// The cocycle value c(η) = m − n.
    pub k: i64,
    /// The source point s(η).
    pub y: BoundaryPoint,
    /// A concrete (m, n) with σᵐ(x) = σⁿ(y) and m − n = k.
    pub witness: ShiftWitness,
}

impl GroupoidElement {
    /// Build (x, k, y), verifying that k is a legal cocycle value for the
    /// pair and deriving a shift witness for it.
    pub fn new(g: &Graph, x: BoundaryPoint, k: i64, y: BoundaryPoint) -> Result<GroupoidElement> {
        let Some(min) = tail_equivalent(g, &x, &y)? else {
            return Err(Error::NotElement(format!("{x} and {y} are not tail-equivalent")));
        };
        let delta = k - min.k();
        let witness = if delta == 0 {
            min
        } else {
            let lp = least_period(&x).map_err(|_| {
                Error::NotElement(format!("only k = {} joins {x} and {y}", min.k()))
            })?;
            if delta.rem_euclid(lp as i64) != 0 {
                return Err(Error::NotElement(format!(
                    "k = {k} is not congruent to {} modulo {lp}",
                    min.k()
                )));
            }
            // Pad both sides past the common point's remaining prefix —
            // only there does an extra lp-multiple of shifts fix the point —
            // then slide one side by |delta|.
            let pad = (x.finite_part().len() as u64).saturating_sub(min.m);
            ShiftWitness {
                m: min.m + pad + delta.max(0) as u64,
                n: min.n + pad + (-delta).max(0) as u64,
                minimal: false,
            }
        };
        Ok(GroupoidElement { x, k, y, witness })
    }

    /// The composite (x, k+l, z) of (x,k,y)(y,l,z); errors when the inner
    /// points disagree.
    pub fn compose(&self, g: &Graph, other: &GroupoidElement) -> Result<GroupoidElement> {
        if self.y != other.x {
            return Err(Error::NotComposable {
                position: 0,
                msg: format!("s(first) = {} but r(second) = {}", self.y, other.x),
            });
        }
        GroupoidElement::new(g, self.x.clone(), self.k + other.k, other.y.clone())
    }

    /// The inverse (y, −k, x).
    pub fn inverse(&self, g: &Graph) -> Result<GroupoidElement> {
        GroupoidElement::new(g, self.y.clone(), -self.k, self.x.clone())
    }
}

impl fmt::Display for GroupoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.k, self.y)
    }
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

/// One (cardinality, isotropy) row of a signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignatureEntry {
    /// Family cardinality.
    pub cardinality: Count,
    /// Family isotropy (lp recorded, compared only by kind).
    pub isotropy: Isotropy,
}

/// The multiset of (cardinality, isotropy) over all orbit families of a
/// discrete space — the complete isomorphism datum at this scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteGroupoidSignature {
    /// Entries sorted ascending (a canonical multiset presentation).
    pub entries: Vec<SignatureEntry>,
}

impl DiscreteGroupoidSignature {
    /// Multiset equality on (cardinality, isotropy *kind*): the isotropy
    /// group is ℤ whatever the period, so lp is recorded but not compared —
    /// [`verify_phi`] passes across distinct periods.
    pub fn matches(&self, other: &DiscreteGroupoidSignature) -> bool {
        let key = |s: &DiscreteGroupoidSignature| {
            let mut v: Vec<(Count, bool)> = s
                .entries
                .iter()
                .map(|e| (e.cardinality, e.isotropy.is_cyclic()))
                .collect();
            v.sort();
            v
        };
        key(self) == key(other)
    }
}

/// The signature of a discrete space's groupoid.
pub fn signature(g: &Graph) -> Result<DiscreteGroupoidSignature> {
    let mut entries: Vec<SignatureEntry> = orbits(g)?
        .into_iter()
        .map(|f| SignatureEntry { cardinality: f.cardinality, isotropy: f.isotropy })
        .collect();
    entries.sort();
    Ok(DiscreteGroupoidSignature { entries })
}

// ---------------------------------------------------------------------------
// φ construction and verification
// ---------------------------------------------------------------------------

/// A finitely presented isomorphism witness between two discrete graph
/// groupoids.
///
/// The point bijection h matches orbit families pairwise and preserves each
/// family's canonical enumeration index. Per matched pair, `base_twists`
/// re-gauges the target index function j by `twist · lp_F` at the family's
/// first point — a different but equally valid φ, the freedom of ep orbits —
/// while `rule_offsets` adds a raw constant to the integer rule, which
/// breaks the homomorphism property and is caught by [`verify_phi`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoWitness {
    /// The domain graph.
    pub graph_e: Graph,
    /// The codomain graph.
    pub graph_f: Graph,
    /// Domain orbit families.
    pub families_e: Vec<OrbitFamily>,
    /// Codomain orbit families.
    pub families_f: Vec<OrbitFamily>,
    /// Family matching: (index into families_e, index into families_f).
    pub pairs: Vec<(usize, usize)>,
    /// Per-pair index-gauge twists (valid alternative witnesses; ep pairs
    /// only, ignored elsewhere).
    pub base_twists: Vec<u64>,
    /// Per-pair raw integer-rule offsets (corruptions; 0 in any valid
    /// witness).
    pub rule_offsets: Vec<i64>,
}

/// Construct the isomorphism witness for a family matching.
///
/// The matching must be a bijection between the two family lists that
/// preserves cardinality and the ep flag; everything else about φ is then
/// determined (up to the ep-orbit gauge freedom).
pub fn build_phi(ge: &Graph, gf: &Graph, matching: &[(usize, usize)]) -> Result<IsoWitness> {
    let families_e = orbits(ge)?;
    let families_f = orbits(gf)?;
    if matching.len() != families_e.len() || families_e.len() != families_f.len() {
        return Err(Error::BadMatching(format!(
            "matching covers {} pairs but the spaces have {} and {} families",
            matching.len(),
            families_e.len(),
            families_f.len()
        )));
    }
    let mut seen_e = vec![false; families_e.len()];
    let mut seen_f = vec![false; families_f.len()];
    for &(ei, fi) in matching {
        if ei >= families_e.len() || fi >= families_f.len() {
            return Err(Error::BadMatching(format!("pair ({ei}, {fi}) is out of range")));
        }
        if std::mem::replace(&mut seen_e[ei], true) || std::mem::replace(&mut seen_f[fi], true) {
            return Err(Error::BadMatching(format!("pair ({ei}, {fi}) repeats a family")));
        }
        let fe = &families_e[ei];
        let ff = &families_f[fi];
        if fe.cardinality != ff.cardinality {
            return Err(Error::BadMatching(format!(
                "cardinality mismatch on pair ({ei}, {fi}): {} vs {}",
                fe.cardinality, ff.cardinality
            )));
        }
        if fe.ep() != ff.ep() {
            return Err(Error::BadMatching(format!(
                "eventually-periodic flag mismatch on pair ({ei}, {fi})"
            )));
        }
    }
    let n = matching.len();
    let mut pairs = matching.to_vec();
    pairs.sort();
    Ok(IsoWitness {
        graph_e: ge.clone(),
        graph_f: gf.clone(),
        families_e,
        families_f,
        pairs,
        base_twists: vec![0; n],
        rule_offsets: vec![0; n],
    })
}

impl IsoWitness {
    /// Re-gauge one ep pair's target index function by `twist·lp_F` at the
    /// family's first enumerated point. Produces a *different, still valid*
    /// isomorphism — the non-uniqueness that exists exactly when isolated ep
    /// points exist. A no-op on non-ep pairs.
    pub fn with_base_twist(mut self, pair: usize, twist: u64) -> IsoWitness {
        if self.pairs.get(pair).is_some_and(|&(ei, _)| self.families_e[ei].ep()) {
            self.base_twists[pair] = twist;
        }
        self
    }

    /// Shift one pair's integer rule by a raw constant. This is **not** an
    /// isomorphism for `offset ≠ 0`; [`verify_phi`] fails on it with a
    /// counterexample. Exists for mutation tests.
    pub fn with_rule_offset(mut self, pair: usize, offset: i64) -> IsoWitness {
        if pair < self.rule_offsets.len() {
            self.rule_offsets[pair] = offset;
        }
        self
    }

    /// Locate a point's family index and enumeration index on one side.
    fn locate(&self, domain: bool, x: &BoundaryPoint) -> Result<(usize, u64)> {
        let (g, fams) = if domain {
            (&self.graph_e, &self.families_e)
        } else {
            (&self.graph_f, &self.families_f)
        };
        for (fi, fam) in fams.iter().enumerate() {
            if let Some(idx) = family_index_of(g, fam, x)? {
                return Ok((fi, idx));
            }
        }
        Err(Error::NotInFamily(format!("{x} is in no orbit family of the space")))
    }

    /// The pair slot for a domain family index.
    fn pair_slot(&self, ei: usize) -> Result<usize> {
        self.pairs
            .iter()
            .position(|&(e, _)| e == ei)
            .ok_or_else(|| Error::BadMatching(format!("family {ei} is unmatched")))
    }

    /// The induced point bijection h: image of a domain boundary point.
    pub fn map_point(&self, x: &BoundaryPoint) -> Result<BoundaryPoint> {
        let (ei, idx) = self.locate(true, x)?;
        let slot = self.pair_slot(ei)?;
        let (_, fi) = self.pairs[slot];
        let fam_f = &self.families_f[fi];
        family_points(&self.graph_f, fam_f, idx + 1)?
            .get(idx as usize)
            .cloned()
            .ok_or_else(|| {
                Error::NotInFamily(format!("target family has no point at index {idx}"))
            })
    }

    /// Twisted target index function j'': j plus `twist·lp_F` at the
    /// family's first enumerated point.
    fn j_target(&self, slot: usize, fam_f: &OrbitFamily, p: &BoundaryPoint, idx: u64) -> Result<i64> {
        let lp_f = fam_f.lp().expect("only called on ep families") as i64;
        let mut j = j_index(&self.graph_f, fam_f, p)? as i64;
        if idx == 0 {
            j += self.base_twists[slot] as i64 * lp_f;
        }
        Ok(j)
    }

    /// φ of one element.
    ///
    /// Non-ep orbits: the image integer is the unique element of
    /// [`elements_between`] at the image points. Ep orbits: the index
    /// formula `j'_{h(x)} − j'_{h(y)} − n·lp_F` with `n` read off from
    /// `j_x − j_y − k = n·lp_E`.
    pub fn map_element(&self, eta: &GroupoidElement) -> Result<GroupoidElement> {
        let (ei, pi) = self.locate(true, &eta.x)?;
        let (ej, qi) = self.locate(true, &eta.y)?;
        if ei != ej {
            return Err(Error::NotElement(format!(
                "{} and {} lie in different orbit families",
                eta.x, eta.y
            )));
        }
        let slot = self.pair_slot(ei)?;
        let (_, fi) = self.pairs[slot];
        let fam_e = &self.families_e[ei];
        let fam_f = &self.families_f[fi];
        let pts_f = family_points(&self.graph_f, fam_f, pi.max(qi) + 1)?;
        let hx = pts_f
            .get(pi as usize)
            .cloned()
            .ok_or_else(|| Error::NotInFamily(format!("no target point at index {pi}")))?;
        let hy = pts_f
            .get(qi as usize)
            .cloned()
            .ok_or_else(|| Error::NotInFamily(format!("no target point at index {qi}")))?;
        let offset = self.rule_offsets[slot];
        let k_image = if fam_e.ep() {
            let lp_e = fam_e.lp().expect("ep family has a period") as i64;
            let lp_f = fam_f.lp().expect("matched family is ep too") as i64;
            let jx = j_index(&self.graph_e, fam_e, &eta.x)? as i64;
            let jy = j_index(&self.graph_e, fam_e, &eta.y)? as i64;
            let diff = jx - jy - eta.k;
            debug_assert_eq!(diff.rem_euclid(lp_e), 0, "cocycle values lie in the j-coset");
            let n = diff.div_euclid(lp_e);
            let jhx = self.j_target(slot, fam_f, &hx, pi)?;
            let jhy = self.j_target(slot, fam_f, &hy, qi)?;
            jhx - jhy - n * lp_f + offset
        } else {
            match elements_between(&self.graph_f, &hx, &hy)? {
                IntegerSet::Single { k } => k + offset,
                other => {
                    return Err(Error::NotElement(format!(
                        "expected a unique integer between {hx} and {hy}, found {other:?}"
                    )))
                }
            }
        };
        GroupoidElement::new(&self.graph_f, hx, k_image, hy)
    }
}

/// A failed verification, pinned to one element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiCounterexample {
    /// Which check failed.
    pub reason: String,
    /// r of the offending element.
    pub x: BoundaryPoint,
    /// Cocycle value of the offending element.
    pub k: i64,
    /// s of the offending element.
    pub y: BoundaryPoint,
}

/// Outcome of a window verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// All checks passed.
    pub ok: bool,
    /// Elements enumerated.
    pub elements_checked: u64,
    /// Composable pairs checked for multiplicativity.
    pub composition_checks: u64,
    /// The first failure, if any.
    pub counterexample: Option<PhiCounterexample>,
}

/// Exhaustively verify φ on the window: over all elements with point
/// indices ≤ `window` and |k| ≤ `window`, φ must be well-defined (images
/// satisfy the σ-witness condition in the target, checked against
/// independently computed cocycle sets), injective, multiplicative, and
/// inverse-compatible. A false report carries the first counterexample.
pub fn verify_phi(w: &IsoWitness, window: u64) -> Result<VerifyReport> {
    let mut elements_checked = 0u64;
    let mut composition_checks = 0u64;

    for (slot, &(ei, fi)) in w.pairs.iter().enumerate() {
        let fam_e = &w.families_e[ei];
        let fam_f = &w.families_f[fi];
        let pts_e = family_points(&w.graph_e, fam_e, window + 1)?;
        let pts_f = family_points(&w.graph_f, fam_f, window + 1)?;
        debug_assert_eq!(pts_e.len(), pts_f.len(), "matched families have equal cardinality");
        let m = pts_e.len();
        if m == 0 {
            continue;
        }

        // Per-pair cocycle sets on both sides, computed from shift
        // witnesses — the independent ground truth for well-definedness.
        let mut sets_e = vec![vec![IntegerSet::Empty; m]; m];
        let mut sets_f = vec![vec![IntegerSet::Empty; m]; m];
        for p in 0..m {
            for q in 0..m {
                sets_e[p][q] = elements_between(&w.graph_e, &pts_e[p], &pts_e[q])?;
                sets_f[p][q] = elements_between(&w.graph_f, &pts_f[p], &pts_f[q])?;
            }
        }

        // Memoized φ on cocycle values: k ↦ k' for each (p, q).
        let (j_e, j_f): (Vec<i64>, Vec<i64>) = if fam_e.ep() {
            (
                pts_e
                    .iter()
                    .map(|p| j_index(&w.graph_e, fam_e, p).map(|j| j as i64))
                    .collect::<Result<_>>()?,
                pts_f
                    .iter()
                    .enumerate()
                    .map(|(i, p)| w.j_target(slot, fam_f, p, i as u64))
                    .collect::<Result<_>>()?,
            )
        } else {
            (Vec::new(), Vec::new())
        };
        let lp_e = fam_e.lp().unwrap_or(0) as i64;
        let lp_f = fam_f.lp().unwrap_or(0) as i64;
        let offset = w.rule_offsets[slot];
        let phi_k = |p: usize, q: usize, k: i64| -> i64 {
            if fam_e.ep() {
                let n = (j_e[p] - j_e[q] - k).div_euclid(lp_e);
                j_f[p] - j_f[q] - n * lp_f + offset
            } else {
                match sets_f[p][q] {
                    IntegerSet::Single { k } => k + offset,
                    _ => unreachable!("non-ep family pairs carry unique cocycle values"),
                }
            }
        };
        let cex = |reason: String, p: usize, q: usize, k: i64| PhiCounterexample {
            reason,
            x: pts_e[p].clone(),
            k,
            y: pts_e[q].clone(),
        };
        macro_rules! fail {
            ($reason:expr, $p:expr, $q:expr, $k:expr) => {
                return Ok(VerifyReport {
                    ok: false,
                    elements_checked,
                    composition_checks,
                    counterexample: Some(cex($reason, $p, $q, $k)),
                })
            };
        }

        // Well-definedness and injectivity over the window.
        let mut images: BTreeSet<(usize, usize, i64)> = BTreeSet::new();
        for p in 0..m {
            for q in 0..m {
                for k in sets_e[p][q].in_window(window) {
                    elements_checked += 1;
                    let k_im = phi_k(p, q, k);
                    if !sets_f[p][q].contains(k_im) {
                        fail!(
                            format!(
                                "not well-defined: image integer {k_im} is not a cocycle value \
                                 between the image points"
                            ),
                            p,
                            q,
                            k
                        );
                    }
                    if !images.insert((p, q, k_im)) {
                        fail!(format!("not injective: image integer {k_im} repeats"), p, q, k);
                    }
                }
            }
        }

        // Multiplicativity (cocycle additivity included) and inverses.
        for p in 0..m {
            for q in 0..m {
                for k in sets_e[p][q].in_window(window) {
                    if phi_k(q, p, -k) != -phi_k(p, q, k) {
                        fail!("not inverse-compatible".into(), p, q, k);
                    }
                    for z in 0..m {
                        for l in sets_e[q][z].in_window(window) {
                            composition_checks += 1;
                            if phi_k(p, q, k) + phi_k(q, z, l) != phi_k(p, z, k + l) {
                                fail!(
                                    format!(
                                        "not multiplicative against ({}, {l}, {})",
                                        pts_e[q], pts_e[z]
                                    ),
                                    p,
                                    q,
                                    k
                                );
                            }
                        }
                    }
                }
            }
        }

        // Ground the memoized table against the real constructors on a
        // small corner of the window.
        let sample = m.min(3);
        for p in 0..sample {
            for q in 0..sample {
                for k in sets_e[p][q].in_window(window.min(3)) {
                    let eta =
                        GroupoidElement::new(&w.graph_e, pts_e[p].clone(), k, pts_e[q].clone())?;
                    match w.map_element(&eta) {
                        Ok(zeta) => {
                            if zeta.x != pts_f[p] || zeta.y != pts_f[q] || zeta.k != phi_k(p, q, k)
                            {
                                fail!("memoized rule disagrees with element mapping".into(), p, q, k);
                            }
                        }
                        Err(e) => {
                            fail!(format!("image is not a groupoid element: {e}"), p, q, k)
                        }
                    }
                }
            }
        }
    }

    Ok(VerifyReport {
        ok: true,
        elements_checked,
        composition_checks,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{points_within, shift_chain};
    use crate::graph::parse_graph;

    const HEAD_LOOP: &str = "vertex v\nhead H: v\nedge e: v -> v\n";
    const HEAD_SINK: &str = "vertex v\nhead H: v\n";
    const OUT_RAY: &str = "vertex v\nray R: v\n";

    #[test]
    fn showcase_spaces_have_the_expected_single_families() {
        let e = parse_graph(HEAD_LOOP).unwrap();
        let fams = orbits(&e).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].cardinality, Count::Omega);
        assert_eq!(fams[0].isotropy, Isotropy::InfiniteCyclic { lp: 1 });

        let f = parse_graph(HEAD_SINK).unwrap();
        let fams = orbits(&f).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].cardinality, Count::Omega);
        assert_eq!(fams[0].isotropy, Isotropy::Trivial);

        let g = parse_graph(OUT_RAY).unwrap();
        let fams = orbits(&g).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[0].cardinality, Count::Omega);
        assert_eq!(fams[0].isotropy, Isotropy::Trivial);
    }

    #[test]
    fn two_disjoint_sinks_give_two_singleton_families() {
        let g = parse_graph("vertex a\nvertex b\n").unwrap();
        let fams = orbits(&g).unwrap();
        assert_eq!(fams.len(), 2);
        for f in fams {
            assert_eq!(f.cardinality, Count::ONE);
            assert_eq!(f.isotropy, Isotropy::Trivial);
        }
    }

    #[test]
    fn orbits_reject_non_discrete_spaces() {
        let g = parse_graph("vertex v\nedge a: v -> v\nedge b: v -> v\n").unwrap();
        assert!(matches!(orbits(&g), Err(Error::NotDiscrete(_))));
    }

    #[test]
    fn family_enumeration_matches_cardinality_and_roundtrips() {
        // a →(×2) b → t: the sink family has exactly 4 points.
        let g = parse_graph("vertex a\nvertex b\nvertex t\nedge e: a -> b * 2\nedge f: b -> t\n")
            .unwrap();
        let fams = orbits(&g).unwrap();
        assert_eq!(fams.len(), 1);
        let pts = family_points(&g, &fams[0], 100).unwrap();
        assert_eq!(pts.len() as u64, fams[0].cardinality.finite().unwrap());
        assert_eq!(pts[0], fams[0].base, "the base is enumerated first");
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(family_index_of(&g, &fams[0], p).unwrap(), Some(i as u64));
        }
    }

    #[test]
    fn every_boundary_point_lands_in_exactly_one_family() {
        let graphs = [
            HEAD_LOOP,
            HEAD_SINK,
            OUT_RAY,
            "vertex a\nvertex b\nvertex t\nedge e: a -> b\nedge f: b -> t\nray R: a\nhead H: b\n",
            "vertex v\nvertex w\nedge e: v -> w\nedge f: w -> v\nhead H: v\n",
        ];
        for text in graphs {
            let g = parse_graph(text).unwrap();
            let fams = orbits(&g).unwrap();
            for p in points_within(&g, 4, 10_000).unwrap() {
                let hits: Vec<usize> = fams
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| {
                        family_index_of(&g, f, &p).unwrap().map(|_| i)
                    })
                    .collect();
                assert_eq!(hits.len(), 1, "{p} in {text:?} hit families {hits:?}");
            }
        }
    }

    #[test]
    fn j_index_is_the_least_distance_to_the_representative() {
        let g = parse_graph(
            "vertex p\nvertex v\nvertex w\nhead H: p\nedge a: p -> v\nedge e: v -> w\nedge f: w -> v\n",
        )
        .unwrap();
        let fams = orbits(&g).unwrap();
        let fam = fams.iter().find(|f| f.ep()).unwrap();
        for x in family_points(&g, fam, 12).unwrap() {
            let j = j_index(&g, fam, &x).unwrap();
            let chain = shift_chain(&g, &x, j + 3).unwrap();
            let first = chain.iter().position(|p| *p == fam.base).unwrap() as u64;
            assert_eq!(first, j, "σ^j lands on the representative, minimally, for {x}");
        }
    }

    #[test]
    fn elements_between_matches_the_three_descriptor_shapes() {
        // Non-ep self: {0}.
        let g = parse_graph("vertex a\nvertex t\nedge e: a -> t\n").unwrap();
        let x = BoundaryPoint::finite(&g, Path::at(Vertex::core("t"))).unwrap();
        assert_eq!(elements_between(&g, &x, &x).unwrap(), IntegerSet::Single { k: 0 });

        // Periodic self with lp 1: all of ℤ.
        let g = parse_graph("vertex v\nedge e: v -> v\n").unwrap();
        let loop_pt = points_within(&g, 2, 100).unwrap().pop_first().unwrap();
        let set = elements_between(&g, &loop_pt, &loop_pt).unwrap();
        assert_eq!(set, IntegerSet::Coset { base: 0, period: 1 });
        assert_eq!(set.in_window(2), vec![-2, -1, 0, 1, 2]);

        // Finite points (ef) vs (f): exactly {1}.
        let g = parse_graph("vertex a\nvertex b\nvertex t\nedge e: a -> b\nedge f: b -> t\n")
            .unwrap();
        let ef = BoundaryPoint::finite(
            &g,
            Path::from_edges(&g, vec![crate::graph::EdgeRef::core("e", 0), crate::graph::EdgeRef::core("f", 0)]).unwrap(),
        )
        .unwrap();
        let f = BoundaryPoint::finite(
            &g,
            Path::from_edges(&g, vec![crate::graph::EdgeRef::core("f", 0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(elements_between(&g, &ef, &f).unwrap(), IntegerSet::Single { k: 1 });
    }

    #[test]
    fn isotropy_dichotomy_on_enumerated_points() {
        let graphs = [HEAD_LOOP, HEAD_SINK, OUT_RAY];
        for text in graphs {
            let g = parse_graph(text).unwrap();
            for p in points_within(&g, 4, 10_000).unwrap() {
                let set = elements_between(&g, &p, &p).unwrap();
                match (least_period(&p).is_ok(), set) {
                    (false, IntegerSet::Single { k: 0 }) => {}
                    (true, IntegerSet::Coset { base: 0, period }) => {
                        assert_eq!(period, least_period(&p).unwrap());
                    }
                    (ep, set) => panic!("point {p} (ep = {ep}) got {set:?}"),
                }
            }
        }
    }

    #[test]
    fn groupoid_elements_validate_compose_and_invert() {
        let g = parse_graph(HEAD_LOOP).unwrap();
        let fams = orbits(&g).unwrap();
        let pts = family_points(&g, &fams[0], 3).unwrap();
        let a = GroupoidElement::new(&g, pts[0].clone(), 2, pts[1].clone()).unwrap();
        assert_eq!(a.witness.m as i64 - a.witness.n as i64, 2);
        // The stored witness is genuine: σᵐ(x) really equals σⁿ(y).
        let sx = shift_chain(&g, &a.x, a.witness.m).unwrap();
        let sy = shift_chain(&g, &a.y, a.witness.n).unwrap();
        assert_eq!(sx[a.witness.m as usize], sy[a.witness.n as usize]);
        let inv = a.inverse(&g).unwrap();
        let unit = a.compose(&g, &inv).unwrap();
        assert_eq!(unit.k, 0);
        assert_eq!(unit.x, unit.y);
        // Composing with a mismatched inner point fails.
        let b = GroupoidElement::new(&g, pts[2].clone(), 0, pts[2].clone()).unwrap();
        assert!(matches!(a.compose(&g, &b), Err(Error::NotComposable { .. })));
        // Illegal cocycle value on a non-ep pair.
        let g2 = parse_graph(HEAD_SINK).unwrap();
        let fams2 = orbits(&g2).unwrap();
        let pts2 = family_points(&g2, &fams2[0], 2).unwrap();
        assert!(matches!(
            GroupoidElement::new(&g2, pts2[0].clone(), 5, pts2[1].clone()),
            Err(Error::NotElement(_))
        ));
    }

    #[test]
    fn signatures_separate_the_showcase_spaces_exactly_as_expected() {
        let e = signature(&parse_graph(HEAD_LOOP).unwrap()).unwrap();
        let f = signature(&parse_graph(HEAD_SINK).unwrap()).unwrap();
        let g = signature(&parse_graph(OUT_RAY).unwrap()).unwrap();
        assert!(f.matches(&g), "sink-fed and ray spaces share {{(ω, trivial)}}");
        assert!(!e.matches(&f), "infinite isotropy separates the loop space");
        assert_eq!(
            e.entries,
            vec![SignatureEntry {
                cardinality: Count::Omega,
                isotropy: Isotropy::InfiniteCyclic { lp: 1 },
            }]
        );
    }

    #[test]
    fn empty_graph_has_an_empty_signature() {
        let g = parse_graph("").unwrap();
        assert_eq!(signature(&g).unwrap().entries, Vec::new());
    }

    #[test]
    fn phi_between_sink_and_ray_spaces_verifies() {
        let gf = parse_graph(HEAD_SINK).unwrap();
        let gg = parse_graph(OUT_RAY).unwrap();
        let w = build_phi(&gf, &gg, &[(0, 0)]).unwrap();
        let report = verify_phi(&w, 10).unwrap();
        assert!(report.ok, "{:?}", report.counterexample);
        assert!(report.elements_checked as usize <= 21 * 11 * 11);
        assert!(report.elements_checked > 0);
    }

    #[test]
    fn phi_identity_on_the_loop_space_fixes_cocycle_values() {
        let ge = parse_graph(HEAD_LOOP).unwrap();
        let w = build_phi(&ge, &ge, &[(0, 0)]).unwrap();
        assert!(verify_phi(&w, 8).unwrap().ok);
        let fams = orbits(&ge).unwrap();
        let pts = family_points(&ge, &fams[0], 4).unwrap();
        for p in &pts {
            assert_eq!(w.map_point(p).unwrap(), *p);
        }
        for k in -3..=3 {
            let eta = GroupoidElement::new(&ge, pts[1].clone(), k, pts[2].clone()).unwrap();
            let img = w.map_element(&eta).unwrap();
            assert_eq!((img.x, img.k, img.y), (eta.x, eta.k, eta.y));
        }
    }

    #[test]
    fn phi_rejects_an_ep_flag_mismatch() {
        let ge = parse_graph(HEAD_LOOP).unwrap();
        let gf = parse_graph(HEAD_SINK).unwrap();
        assert!(matches!(build_phi(&ge, &gf, &[(0, 0)]), Err(Error::BadMatching(_))));
    }

    #[test]
    fn corrupted_integer_rule_fails_with_a_counterexample() {
        let gf = parse_graph(HEAD_SINK).unwrap();
        let gg = parse_graph(OUT_RAY).unwrap();
        let w = build_phi(&gf, &gg, &[(0, 0)]).unwrap().with_rule_offset(0, 1);
        let report = verify_phi(&w, 6).unwrap();
        assert!(!report.ok);
        let cex = report.counterexample.unwrap();
        assert!(cex.reason.contains("well-defined"), "{}", cex.reason);

        // The same corruption on an ep space slips past well-definedness
        // (the coset absorbs any offset ≡ 0 mod lp — so use lp·1) but not
        // multiplicativity.
        let ge = parse_graph(HEAD_LOOP).unwrap();
        let w = build_phi(&ge, &ge, &[(0, 0)]).unwrap().with_rule_offset(0, 1);
        let report = verify_phi(&w, 6).unwrap();
        assert!(!report.ok);
        assert!(report.counterexample.is_some());
    }

    #[test]
    fn base_twist_gives_a_second_valid_witness_exactly_on_ep_spaces() {
        // With isolated ep points the isomorphism inducing h is not
        // unique — the twisted witness verifies and differs. Without ep
        // points the twist is inert.
        let ge = parse_graph(HEAD_LOOP).unwrap();
        let plain = build_phi(&ge, &ge, &[(0, 0)]).unwrap();
        let twisted = build_phi(&ge, &ge, &[(0, 0)]).unwrap().with_base_twist(0, 1);
        assert!(verify_phi(&plain, 8).unwrap().ok);
        assert!(verify_phi(&twisted, 8).unwrap().ok);
        let fams = orbits(&ge).unwrap();
        let pts = family_points(&ge, &fams[0], 2).unwrap();
        let eta = GroupoidElement::new(&ge, pts[0].clone(), 0, pts[1].clone()).unwrap();
        let a = plain.map_element(&eta).unwrap();
        let b = twisted.map_element(&eta).unwrap();
        assert_ne!(a.k, b.k, "the twisted witness is a genuinely different isomorphism");

        let gf = parse_graph(HEAD_SINK).unwrap();
        let gg = parse_graph(OUT_RAY).unwrap();
        let plain = build_phi(&gf, &gg, &[(0, 0)]).unwrap();
        let twisted = build_phi(&gf, &gg, &[(0, 0)]).unwrap().with_base_twist(0, 5);
        assert_eq!(twisted.base_twists[0], 0, "twists are inert without ep points");
        let fams = orbits(&gf).unwrap();
        for p in family_points(&gf, &fams[0], 4).unwrap() {
            assert_eq!(plain.map_point(&p).unwrap(), twisted.map_point(&p).unwrap());
        }
    }

    #[test]
    fn phi_verifies_across_different_least_periods() {
        // ω ep family with lp 1 versus lp 2: the isotropy group is ℤ either
        // way, and φ's index formula bridges the periods.
        let ge = parse_graph(HEAD_LOOP).unwrap();
        let gf = parse_graph(
            "vertex v\nvertex w\nhead H: v\nedge e: v -> w\nedge f: w -> v\n",
        )
        .unwrap();
        assert!(signature(&ge).unwrap().matches(&signature(&gf).unwrap()));
        let w = build_phi(&ge, &gf, &[(0, 0)]).unwrap();
        let report = verify_phi(&w, 10).unwrap();
        assert!(report.ok, "{:?}", report.counterexample);
        // And in the other direction.
        let w = build_phi(&gf, &ge, &[(0, 0)]).unwrap();
        assert!(verify_phi(&w, 10).unwrap().ok);
    }

    #[test]
    fn multi_family_phi_with_permuted_matching_verifies() {
        // Two sinks fed by heads on each side; swap the families in the
        // matching.
        let ge = parse_graph("vertex a\nvertex b\nhead H1: a\nhead H2: b\n").unwrap();
        let gf = parse_graph("vertex c\nvertex d\nhead K1: c\nhead K2: d\n").unwrap();
        let w = build_phi(&ge, &gf, &[(0, 1), (1, 0)]).unwrap();
        let report = verify_phi(&w, 6).unwrap();
        assert!(report.ok, "{:?}", report.counterexample);
    }

    #[test]
    fn witness_json_round_trips() {
        let gf = parse_graph(HEAD_SINK).unwrap();
        let gg = parse_graph(OUT_RAY).unwrap();
        let w = build_phi(&gf, &gg, &[(0, 0)]).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        let back: IsoWitness = serde_json::from_str(&text).unwrap();
        assert!(verify_phi(&back, 4).unwrap().ok);
    }
}
