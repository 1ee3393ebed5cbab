//! DOT rendering of a graph's core together with its symbolic infinite
//! attachments.
//!
//! The output is a plain `digraph`: core vertices as nodes (sinks drawn as
//! double circles, infinite emitters with diagonal corners), one edge per
//! bundle labeled with its multiplicity, and every head and out-ray drawn
//! as three sample chain vertices closed off by a dashed ellipsis node.
//! Bundles lying on a no-exit cycle — the carriers of isolated eventually
//! periodic points — are highlighted.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::cycle::{no_exit_cycles, no_exit_cycles_with_cap};
use crate::error::Result;
use crate::graph::{EdgeRef, Graph, Multiplicity};

/// How many chain vertices represent an infinite head or out-ray.
const CHAIN_SAMPLES: u64 = 3;

/// Render the graph as a DOT document, highlighting no-exit cycle bundles.
pub fn emit_dot(g: &Graph) -> Result<String> {
    render(g, no_exit_cycles(g)?)
}

/// [`emit_dot`] with an explicit cycle-enumeration cap.
pub fn emit_dot_with_cap(g: &Graph, cap: u64) -> Result<String> {
    render(g, no_exit_cycles_with_cap(g, cap)?)
}

fn render(g: &Graph, no_exit: Vec<crate::cycle::Cycle>) -> Result<String> {
    let mut highlighted: BTreeSet<&str> = BTreeSet::new();
    for c in &no_exit {
        for e in c.edges() {
            if let EdgeRef::Core { label, .. } = e {
                highlighted.insert(label);
            }
        }
    }

    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "digraph boundary {{").unwrap();
    writeln!(w, "  rankdir=LR;").unwrap();
    writeln!(w, "  node [shape=circle, fontname=\"Helvetica\"];").unwrap();

    for v in g.core_vertices() {
        let attrs = if g.is_sink(v) {
            " [shape=doublecircle]"
        } else if g.is_infinite_emitter(v) {
            " [style=diagonals]"
        } else {
            ""
        };
        writeln!(w, "  \"{v}\"{attrs};").unwrap();
    }

    for b in g.bundles() {
        let label = match b.multiplicity {
            Multiplicity::Finite(1) => b.label.clone(),
            Multiplicity::Finite(m) => format!("{} ×{m}", b.label),
            Multiplicity::Omega => format!("{} ×ω", b.label),
        };
        let highlight = if highlighted.contains(b.label.as_str()) {
            ", color=crimson, penwidth=2.0"
        } else {
            ""
        };
        writeln!(w, "  \"{}\" -> \"{}\" [label=\"{label}\"{highlight}];", b.source, b.range)
            .unwrap();
    }

    for (id, anchor) in g.heads() {
        ellipsis_node(w, id);
        for d in 1..=CHAIN_SAMPLES {
            writeln!(w, "  \"{id}.{d}\" [fontsize=10];").unwrap();
        }
        writeln!(w, "  \"{id}.ellipsis\" -> \"{id}.{CHAIN_SAMPLES}\" [style=dashed];").unwrap();
        for d in (2..=CHAIN_SAMPLES).rev() {
            writeln!(w, "  \"{id}.{d}\" -> \"{id}.{}\";", d - 1).unwrap();
        }
        writeln!(w, "  \"{id}.1\" -> \"{anchor}\" [label=\"{id}\"];").unwrap();
    }

    for (id, anchor) in g.rays() {
        ellipsis_node(w, id);
        for d in 1..=CHAIN_SAMPLES {
            writeln!(w, "  \"{id}.{d}\" [fontsize=10];").unwrap();
        }
        writeln!(w, "  \"{anchor}\" -> \"{id}.1\" [label=\"{id}\"];").unwrap();
        for d in 2..=CHAIN_SAMPLES {
            writeln!(w, "  \"{id}.{}\" -> \"{id}.{d}\";", d - 1).unwrap();
        }
        writeln!(w, "  \"{id}.{CHAIN_SAMPLES}\" -> \"{id}.ellipsis\" [style=dashed];").unwrap();
    }

    writeln!(w, "}}").unwrap();
    Ok(out)
}

fn ellipsis_node(w: &mut String, id: &str) {
    writeln!(w, "  \"{id}.ellipsis\" [label=\"⋯\", shape=none];").unwrap();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn lone_no_exit_loop_renders_highlighted() {
        let g = parse_graph("vertex v\nedge e: v -> v\n").unwrap();
        let dot = emit_dot(&g).unwrap();
        assert_eq!(
            dot,
            "digraph boundary {\n\
             \x20 rankdir=LR;\n\
             \x20 node [shape=circle, fontname=\"Helvetica\"];\n\
             \x20 \"v\";\n\
             \x20 \"v\" -> \"v\" [label=\"e\", color=crimson, penwidth=2.0];\n\
             }\n"
        );
    }

    #[test]
    fn cycles_with_exits_are_not_highlighted() {
        let g = parse_graph("vertex v\nedge a: v -> v\nedge b: v -> v\n").unwrap();
        let dot = emit_dot(&g).unwrap();
        assert!(!dot.contains("crimson"), "{dot}");
    }

    #[test]
    fn heads_draw_three_samples_and_a_dashed_ellipsis() {
        let g = parse_graph("vertex v\nhead H: v\n").unwrap();
        let dot = emit_dot(&g).unwrap();
        assert!(dot.contains("\"H.3\" -> \"H.2\""), "{dot}");
        assert!(dot.contains("\"H.2\" -> \"H.1\""), "{dot}");
        assert!(dot.contains("\"H.1\" -> \"v\" [label=\"H\"]"), "{dot}");
        assert!(dot.contains("\"H.ellipsis\" -> \"H.3\" [style=dashed]"), "{dot}");
        assert!(dot.contains("[label=\"⋯\", shape=none]"), "{dot}");
        assert!(dot.contains("\"v\" [shape=doublecircle]"), "{dot}");
    }

    #[test]
    fn rays_run_outward_into_the_ellipsis() {
        let g = parse_graph("vertex v\nray R: v\n").unwrap();
        let dot = emit_dot(&g).unwrap();
        assert!(dot.contains("\"v\" -> \"R.1\" [label=\"R\"]"), "{dot}");
        assert!(dot.contains("\"R.1\" -> \"R.2\""), "{dot}");
        assert!(dot.contains("\"R.3\" -> \"R.ellipsis\" [style=dashed]"), "{dot}");
    }

    #[test]
    fn multiplicities_annotate_edge_labels() {
        let g = parse_graph(
            "vertex a\nvertex b\nedge e: a -> b * 2\nedge f: a -> b * omega\n",
        )
        .unwrap();
        let dot = emit_dot(&g).unwrap();
        assert!(dot.contains("label=\"e ×2\""), "{dot}");
        assert!(dot.contains("label=\"f ×ω\""), "{dot}");
        assert!(dot.contains("\"a\" [style=diagonals]"), "{dot}");
    }

    #[test]
    fn output_is_deterministic() {
        let text = "vertex b\nvertex a\nedge z: a -> b\nedge y: b -> a\nhead H: a\nray R: b\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(emit_dot(&g).unwrap(), emit_dot(&g).unwrap());
    }
}
