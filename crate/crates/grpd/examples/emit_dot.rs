//! Render a graph to DOT for Graphviz.
//!
//! Sinks become double circles, infinite emitters are striped, no-exit
//! cycles are highlighted, and the symbolic infinite head and out-ray are
//! unrolled to three sample vertices with an ellipsis node.
//!
//! Pipe into `dot -Tsvg` to render:
//! `cargo run --example emit_dot | dot -Tsvg > graph.svg`.

use grpd::dot::emit_dot;
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    let g = parse_graph(
        "vertex u\nvertex v\nvertex w\nvertex z\nhead H: u\nray R: w\n\
         edge a: u -> v * 2\nedge b: v -> v\nedge c: v -> w * omega\nedge d: z -> z\n",
    )?;
    print!("{}", emit_dot(&g)?);
    Ok(())
}
