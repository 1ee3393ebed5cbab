//! Decide orbit equivalence and groupoid isomorphism for discrete spaces.
//!
//! The three showcase graphs (head + loop, head + sink, out-ray) all have
//! discrete boundary spaces with a single countable orbit, so all three are
//! pairwise orbit equivalent. But the head + loop graph has infinite cyclic
//! isotropy — its groupoid is not isomorphic to the other two, and the
//! decision procedures separate the two notions. Invariant-based
//! refutation works on arbitrary graphs but never answers yes.
//!
//! Run with `cargo run --example compare_graphs`.

use grpd::equivalence::{
    decide_groupoid_iso_discrete, decide_oe_discrete, invariant_refute, Answer,
};
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    let e = parse_graph("vertex v\nhead H: v\nedge e: v -> v\n")?;
    let f = parse_graph("vertex v\nhead H: v\n")?;
    let g = parse_graph("vertex v\nray R: v\n")?;
    let named = [("head+loop", &e), ("head+sink", &f), ("out-ray", &g)];

    for (i, (na, a)) in named.iter().enumerate() {
        for (nb, b) in named.iter().skip(i + 1) {
            let oe = decide_oe_discrete(a, b)?;
            let iso = decide_groupoid_iso_discrete(a, b)?;
            println!("{na} vs {nb}:");
            println!("  orbit equivalent      {}", show(&oe.answer));
            println!("  groupoid isomorphic   {}", show(&iso.answer));
            if let Some(o) = &iso.obstruction {
                println!("  obstruction           {o}");
            }
        }
    }

    // Refutation by computable invariants alone, no discreteness needed.
    println!();
    match invariant_refute(&e, &f)? {
        Some(o) => println!("refuted: {o}"),
        None => println!("no invariant obstruction found"),
    }
    Ok(())
}

fn show(a: &Answer) -> &'static str {
    match a {
        Answer::Yes => "yes",
        Answer::No => "no",
        Answer::Undecided => "undecided",
    }
}
