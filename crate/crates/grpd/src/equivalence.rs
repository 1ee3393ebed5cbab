//! Decision procedures for orbit equivalence and groupoid isomorphism.
//!
//! On a **discrete** boundary space the orbit partition is a finite list of
//! families with cardinalities in ℕ∪{ω}, so equivalence questions reduce to
//! multiset comparisons:
//!
//! * orbit equivalence ⟺ the orbit-cardinality multisets agree (continuity
//!   of the shift exponents is automatic on a discrete space);
//! * orbit equivalence preserving isolated eventually periodic points ⟺
//!   the (cardinality, ep) multisets agree;
//! * groupoid isomorphism ⟺ the full signatures agree — and a yes verdict
//!   is backed by actually constructing φ and verifying it on a window.
//!
//! The last two agreeing on every input is the biconditional these deciders
//! mechanize; [`theorem_consistency_check`] asserts it pair by pair.
//!
//! For arbitrary (possibly non-discrete) graphs, [`invariant_refute`]
//! compares quantities any groupoid isomorphism must preserve — isolated-ep
//! point count, ep orbit count, the overall isolated-point count multiset,
//! and the isolated-part (cardinality, isotropy) multiset — and reports the
//! first mismatch as a named obstruction. It never claims equivalence.

use serde::{Deserialize, Serialize};

use crate::count::Count;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::groupoid::{
    build_phi, isolated_orbit_families, orbits, signature, verify_phi, IsoWitness, OrbitFamily,
    VerifyReport,
};
use crate::isolated::{census, is_discrete_space};

/// Verification window used by [`decide_groupoid_iso_discrete`].
pub const DEFAULT_VERIFY_WINDOW: u64 = 6;

/// The three possible answers of a decision procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    /// The spaces/groupoids are equivalent; a witness is attached.
    Yes,
    /// They are not; a preserved invariant separates them.
    No,
    /// The procedure does not apply (non-discrete input).
    Undecided,
}

/// Evidence attached to a yes verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A cardinality-preserving bijection of orbit families (an orbit
    /// equivalence of discrete spaces).
    OrbitMatching {
        /// Domain orbit families.
        families_e: Vec<OrbitFamily>,
        /// Codomain orbit families.
        families_f: Vec<OrbitFamily>,
        /// Matched (domain index, codomain index) pairs.
        pairs: Vec<(usize, usize)>,
    },
    /// A constructed groupoid isomorphism together with its window
    /// verification.
    Isomorphism {
        /// The finitely presented isomorphism.
        witness: Box<IsoWitness>,
        /// The verification outcome (always `ok` on a yes verdict).
        report: VerifyReport,
    },
}

/// Outcome of a decision procedure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    /// yes / no / undecided.
    pub answer: Answer,
    /// Present exactly on yes: checkable evidence of equivalence.
    pub witness: Option<Witness>,
    /// Present exactly on no: the named invariant that separates the
    /// inputs.
    pub obstruction: Option<String>,
    /// Present exactly on undecided: why the procedure does not apply.
    pub reason: Option<String>,
}

impl Verdict {
    fn yes(witness: Witness) -> Verdict {
        Verdict { answer: Answer::Yes, witness: Some(witness), obstruction: None, reason: None }
    }

    fn no(obstruction: String) -> Verdict {
        Verdict { answer: Answer::No, witness: None, obstruction: Some(obstruction), reason: None }
    }

    fn undecided(reason: String) -> Verdict {
        Verdict { answer: Answer::Undecided, witness: None, obstruction: None, reason: Some(reason) }
    }
}

/// Check discreteness of both inputs; `None` means proceed, `Some` is the
/// undecided verdict to return.
fn discreteness_gate(ge: &Graph, gf: &Graph) -> Result<Option<Verdict>> {
    for (side, g) in [("first", ge), ("second", gf)] {
        if !is_discrete_space(g)? {
            return Ok(Some(Verdict::undecided(format!(
                "the {side} graph's boundary space is not discrete \
                 (an ω bundle or a cycle with an exit exists)"
            ))));
        }
    }
    Ok(None)
}

/// Sort-and-zip matching of two family lists under a comparison key.
/// `None` when the keyed multisets differ.
fn match_families_by<K: Ord>(
    fe: &[OrbitFamily],
    ff: &[OrbitFamily],
    key: impl Fn(&OrbitFamily) -> K,
) -> Option<Vec<(usize, usize)>> {
    if fe.len() != ff.len() {
        return None;
    }
    let mut ie: Vec<usize> = (0..fe.len()).collect();
    let mut jf: Vec<usize> = (0..ff.len()).collect();
    ie.sort_by_key(|&i| key(&fe[i]));
    jf.sort_by_key(|&j| key(&ff[j]));
    if ie.iter().zip(&jf).any(|(&i, &j)| key(&fe[i]) != key(&ff[j])) {
        return None;
    }
    let mut pairs: Vec<(usize, usize)> = ie.into_iter().zip(jf).collect();
    pairs.sort();
    Some(pairs)
}

fn fmt_multiset<T, K: Ord, F: Fn(&T) -> K, D: Fn(&T) -> String>(
    items: &[T],
    sort_key: F,
    show: D,
) -> String {
    let mut ix: Vec<usize> = (0..items.len()).collect();
    ix.sort_by_key(|&i| sort_key(&items[i]));
    let body: Vec<String> = ix.iter().map(|&i| show(&items[i])).collect();
    format!("{{{}}}", body.join(", "))
}

fn fmt_cardinalities(fams: &[OrbitFamily]) -> String {
    fmt_multiset(fams, |f| f.cardinality, |f| f.cardinality.to_string())
}

fn fmt_signature_entries(fams: &[OrbitFamily]) -> String {
    fmt_multiset(
        fams,
        |f| (f.cardinality, f.ep()),
        |f| {
            format!(
                "{} ({})",
                f.cardinality,
                if f.ep() { "infinite cyclic isotropy" } else { "trivial isotropy" }
            )
        },
    )
}

/// Decide orbit equivalence of two discrete boundary spaces.
///
/// Yes iff the orbit-cardinality multisets agree; the witness is an orbit
/// matching. Non-discrete input yields an undecided verdict with a reason.
pub fn decide_oe_discrete(ge: &Graph, gf: &Graph) -> Result<Verdict> {
    if let Some(v) = discreteness_gate(ge, gf)? {
        return Ok(v);
    }
    let fe = orbits(ge)?;
    let ff = orbits(gf)?;
    Ok(match match_families_by(&fe, &ff, |f| f.cardinality) {
        Some(pairs) => Verdict::yes(Witness::OrbitMatching {
            families_e: fe,
            families_f: ff,
            pairs,
        }),
        None => Verdict::no(format!(
            "orbit cardinality multiset mismatch: {} vs {}",
            fmt_cardinalities(&fe),
            fmt_cardinalities(&ff)
        )),
    })
}

/// Decide orbit equivalence preserving isolated eventually periodic points.
///
/// Yes iff the (cardinality, ep flag) multisets agree.
pub fn decide_oe_preserving_ep_discrete(ge: &Graph, gf: &Graph) -> Result<Verdict> {
    if let Some(v) = discreteness_gate(ge, gf)? {
        return Ok(v);
    }
    let fe = orbits(ge)?;
    let ff = orbits(gf)?;
    Ok(match match_families_by(&fe, &ff, |f| (f.cardinality, f.ep())) {
        Some(pairs) => Verdict::yes(Witness::OrbitMatching {
            families_e: fe,
            families_f: ff,
            pairs,
        }),
        None => {
            if match_families_by(&fe, &ff, |f| f.cardinality).is_none() {
                Verdict::no(format!(
                    "orbit cardinality multiset mismatch: {} vs {}",
                    fmt_cardinalities(&fe),
                    fmt_cardinalities(&ff)
                ))
            } else {
                Verdict::no(format!(
                    "eventually periodic orbits not preserved: {} vs {}",
                    fmt_signature_entries(&fe),
                    fmt_signature_entries(&ff)
                ))
            }
        }
    })
}

/// Decide groupoid isomorphism of two discrete boundary spaces, verifying
/// a constructed isomorphism on a window of [`DEFAULT_VERIFY_WINDOW`].
pub fn decide_groupoid_iso_discrete(ge: &Graph, gf: &Graph) -> Result<Verdict> {
    decide_groupoid_iso_discrete_with_window(ge, gf, DEFAULT_VERIFY_WINDOW)
}

/// [`decide_groupoid_iso_discrete`] with an explicit verification window.
///
/// Yes iff the signatures agree; the yes verdict carries the constructed
/// [`IsoWitness`] together with its passing [`VerifyReport`]. A failed
/// verification of a signature-matched pair would contradict the decision
/// rule and surfaces as a hard error rather than a verdict.
pub fn decide_groupoid_iso_discrete_with_window(
    ge: &Graph,
    gf: &Graph,
    window: u64,
) -> Result<Verdict> {
    if let Some(v) = discreteness_gate(ge, gf)? {
        return Ok(v);
    }
    if !signature(ge)?.matches(&signature(gf)?) {
        let fe = orbits(ge)?;
        let ff = orbits(gf)?;
        return Ok(if match_families_by(&fe, &ff, |f| f.cardinality).is_none() {
            Verdict::no(format!(
                "orbit cardinality multiset mismatch: {} vs {}",
                fmt_cardinalities(&fe),
                fmt_cardinalities(&ff)
            ))
        } else {
            Verdict::no(format!(
                "isotropy mismatch: {} vs {}",
                fmt_signature_entries(&fe),
                fmt_signature_entries(&ff)
            ))
        });
    }
    let fe = orbits(ge)?;
    let ff = orbits(gf)?;
    let pairs = match_families_by(&fe, &ff, |f| (f.cardinality, f.ep()))
        .expect("matching signatures admit a (cardinality, ep) matching");
    let witness = build_phi(ge, gf, &pairs)?;
    let report = verify_phi(&witness, window)?;
    if !report.ok {
        return Err(Error::BadMatching(format!(
            "signatures match but the constructed isomorphism failed verification: {:?}",
            report.counterexample
        )));
    }
    Ok(Verdict::yes(Witness::Isomorphism { witness: Box::new(witness), report }))
}

/// Refute groupoid isomorphism of **arbitrary** graphs via preserved
/// invariants, or stay silent.
///
/// Compared, in order: isolated eventually periodic point count, isolated
/// ep orbit count, the multiset of the three isolated-point counts, and the
/// (cardinality, isotropy) multiset of the isolated-part orbit families.
/// `None` makes no claim of equivalence.
pub fn invariant_refute(ge: &Graph, gf: &Graph) -> Result<Option<String>> {
    let ce = census(ge)?;
    let cf = census(gf)?;
    if ce.isolated_ep != cf.isolated_ep {
        return Ok(Some(format!(
            "isolated eventually periodic point count mismatch: {} vs {}",
            ce.isolated_ep, cf.isolated_ep
        )));
    }
    if ce.isolated_ep_orbits != cf.isolated_ep_orbits {
        return Ok(Some(format!(
            "isolated eventually periodic orbit count mismatch: {} vs {}",
            ce.isolated_ep_orbits, cf.isolated_ep_orbits
        )));
    }
    let tri = |c: &crate::isolated::Census| -> Vec<Count> {
        let mut v = vec![c.isolated_finite, c.isolated_ep, c.isolated_wandering];
        v.sort();
        v
    };
    if tri(&ce) != tri(&cf) {
        return Ok(Some(format!(
            "isolated point count multiset mismatch: {:?} vs {:?}",
            tri(&ce)
                .iter()
                .map(Count::to_string)
                .collect::<Vec<_>>(),
            tri(&cf)
                .iter()
                .map(Count::to_string)
                .collect::<Vec<_>>()
        )));
    }
    let fe = isolated_orbit_families(ge)?;
    let ff = isolated_orbit_families(gf)?;
    if match_families_by(&fe, &ff, |f| (f.cardinality, f.ep())).is_none() {
        return Ok(Some(format!(
            "isolated orbit isotropy multiset mismatch: {} vs {}",
            fmt_signature_entries(&fe),
            fmt_signature_entries(&ff)
        )));
    }
    Ok(None)
}

/// Desk-scale instance of the biconditional: on discrete spaces, groupoid
/// isomorphism and ep-preserving orbit equivalence must answer alike.
pub fn theorem_consistency_check(ge: &Graph, gf: &Graph) -> Result<bool> {
    let iso = decide_groupoid_iso_discrete(ge, gf)?;
    let oe = decide_oe_preserving_ep_discrete(ge, gf)?;
    Ok(iso.answer == oe.answer)
}
