//! Census the isolated points of three boundary path spaces.
//!
//! Three one-vertex graphs with an infinite head or an out-ray produce
//! discrete boundary spaces whose countably many isolated points are of
//! three different types: eventually periodic (head feeding a loop),
//! finite (head feeding a sink), and wandering (paths escaping along an
//! out-ray).
//!
//! Run with `cargo run --example analyze_census`.

use grpd::cycle::condition_l;
use grpd::isolated::census;
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    let graphs = [
        ("head + loop", "vertex v\nhead H: v\nedge e: v -> v\n"),
        ("head + sink", "vertex v\nhead H: v\n"),
        ("out-ray", "vertex v\nray R: v\n"),
    ];
    for (name, text) in graphs {
        let g = parse_graph(text)?;
        let c = census(&g)?;
        println!("{name}:");
        println!("  isolated finite     {}", c.isolated_finite);
        println!("  isolated ep         {}", c.isolated_ep);
        println!("  isolated wandering  {}", c.isolated_wandering);
        println!("  ep orbits           {}", c.isolated_ep_orbits);
        println!("  discrete            {}", c.discrete);
        println!("  condition (L)       {}", condition_l(&g)?);
        if let Some(x) = c.witnesses.eventually_periodic.first() {
            println!("  sample ep point     {x}");
        }
        if let Some(x) = c.witnesses.finite.first() {
            println!("  sample finite point {x}");
        }
        if let Some(x) = c.witnesses.wandering.first() {
            println!("  sample wandering    {x}");
        }
        println!();
    }
    Ok(())
}
