//! Cross-check the analytic isolation classifier against a brute-force
//! oracle.
//!
//! The oracle expands the truncated path tree to a fixed depth and decides
//! isolation by counting extensions — no cycle analysis involved. Running
//! both on every representable point of a graph and demanding zero
//! disagreements guards the classifier against wishful shortcuts.
//!
//! Run with `cargo run --example oracle_crosscheck`.

use grpd::oracle::{cross_check, default_depth};
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    let graphs = [
        ("lone loop", "vertex v\nedge e: v -> v\n"),
        ("two loops (Cantor space)", "vertex v\nedge a: v -> v\nedge b: v -> v\n"),
        (
            "mixed",
            "vertex u\nvertex v\nvertex w\nhead H: u\nray R: w\n\
             edge a: u -> v * 2\nedge b: v -> v\nedge c: v -> w * omega\n",
        ),
    ];
    for (name, text) in graphs {
        let g = parse_graph(text)?;
        let depth = default_depth(&g);
        let report = cross_check(&g, depth)?;
        println!("{name} (depth {depth}):");
        println!("  points checked  {}", report.entries.len());
        println!("  disagreements   {}", report.disagreements.len());
        println!("  oracle-unknown  {}", report.unknown_count);
        assert!(report.clean(), "classifier and oracle must agree");
    }
    Ok(())
}
