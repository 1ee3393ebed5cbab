//! Construct and verify an explicit groupoid isomorphism.
//!
//! For discrete boundary spaces the groupoid is determined by its orbit
//! signature — the multiset of (orbit cardinality, isotropy) pairs. This
//! example matches the orbit families of the head + sink graph against the
//! out-ray graph, builds the induced isomorphism φ, and verifies it
//! element-by-element on a finite window: well-definedness, injectivity,
//! compatibility with inverses, and multiplicativity.
//!
//! The isomorphism is not unique: re-basing the index rule on any orbit
//! with cyclic isotropy yields a genuinely different φ that still passes
//! verification, while perturbing the cocycle rule by a raw constant
//! breaks it — and the verifier says where.
//!
//! Run with `cargo run --example build_isomorphism`.

use grpd::groupoid::{build_phi, orbits, signature, verify_phi, GroupoidElement};
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    let f = parse_graph("vertex v\nhead H: v\n")?;
    let g = parse_graph("vertex v\nray R: v\n")?;

    let sig_f = signature(&f)?;
    let sig_g = signature(&g)?;
    println!("signatures match: {}", sig_f.matches(&sig_g));

    for fam in orbits(&f)? {
        println!("head+sink family: {} points, isotropy {:?}", fam.cardinality, fam.isotropy);
    }

    // One countable orbit on each side: match family 0 to family 0.
    let phi = build_phi(&f, &g, &[(0, 0)])?;
    let report = verify_phi(&phi, 8)?;
    println!(
        "verified: {} ({} elements, {} composition checks)",
        report.ok, report.elements_checked, report.composition_checks
    );
    assert!(report.ok);

    // Map a concrete element through φ. On an orbit with trivial isotropy
    // the cocycle value is forced: k = |x| − |y| here.
    let pts = grpd::groupoid::family_points(&f, &phi.families_e[0], 3)?;
    let eta = GroupoidElement::new(&f, pts[2].clone(), 1, pts[1].clone())?;
    println!("phi({eta}) = {}", phi.map_element(&eta)?);

    // A loop graph maps to itself in more than one valid way: twisting the
    // base point of the cyclic orbit shifts the cocycle rule by a multiple
    // of the least period and survives verification.
    let e = parse_graph("vertex v\nhead H: v\nedge e: v -> v\n")?;
    let identity = build_phi(&e, &e, &[(0, 0)])?;
    let twisted = identity.clone().with_base_twist(0, 1);
    let r1 = verify_phi(&identity, 8)?;
    let r2 = verify_phi(&twisted, 8)?;
    println!("identity verifies: {}, twisted verifies: {}", r1.ok, r2.ok);
    let pts = grpd::groupoid::family_points(&e, &identity.families_e[0], 2)?;
    let eta = GroupoidElement::new(&e, pts[1].clone(), 1, pts[0].clone())?;
    println!(
        "same element, different images: {} vs {}",
        identity.map_element(&eta)?,
        twisted.map_element(&eta)?
    );

    // A raw +1 on the integer rule is not an isomorphism, and verification
    // produces a concrete counterexample.
    let broken = identity.with_rule_offset(0, 1);
    let r3 = verify_phi(&broken, 8)?;
    println!("broken rule verifies: {}", r3.ok);
    if let Some(cex) = r3.counterexample {
        println!("counterexample: {}", cex.reason);
    }
    Ok(())
}
