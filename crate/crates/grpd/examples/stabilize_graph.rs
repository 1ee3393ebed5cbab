//! Stabilize a graph by attaching an infinite head to every vertex.
//!
//! Stabilization turns every finite count of isolated points into ω without
//! changing which types occur: each head pumps infinitely many finite
//! prefixes into its vertex. The stabilized graph serializes back into the
//! same text format it was parsed from.
//!
//! Run with `cargo run --example stabilize_graph`.

use grpd::graph::stabilize;
use grpd::isolated::census;
use grpd::{parse_graph, serialize_graph};

fn main() -> grpd::Result<()> {
    let g = parse_graph("vertex a\nvertex b\nedge e: a -> b\n")?;
    let before = census(&g)?;
    println!("before: {} isolated finite points", before.isolated_finite);

    let s = stabilize(&g);
    let after = census(&s)?;
    println!("after:  {} isolated finite points", after.isolated_finite);
    println!("still discrete: {}", after.discrete);
    println!();
    println!("stabilized graph:");
    print!("{}", serialize_graph(&s));

    // The serialization round-trips.
    let reparsed = parse_graph(&serialize_graph(&s))?;
    assert_eq!(reparsed, s);
    println!();
    println!("round-trip: ok");
    Ok(())
}
