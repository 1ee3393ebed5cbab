//! Classify individual boundary points and walk the shift map.
//!
//! Builds points of all three kinds on a small mixed graph — a finite path
//! into a sink, an eventually periodic path on a no-exit loop, and a
//! wandering path down an out-ray — then asks for isolation and type, and
//! follows each point a few steps under the shift σ.
//!
//! Run with `cargo run --example classify_points`.

use grpd::boundary::{is_isolated, shift_chain, BoundaryPoint};
use grpd::cycle::simple_cycles;
use grpd::graph::{EdgeRef, Path, Vertex};
use grpd::isolated::classify_isolated;
use grpd::parse_graph;

fn main() -> grpd::Result<()> {
    // a --f--> s (sink), a --e--> a (no-exit? no: f is an exit), plus an
    // isolated loop component w and an out-ray at r.
    let g = parse_graph(
        "vertex a\nvertex s\nvertex w\nvertex r\n\
         edge e: a -> a\nedge f: a -> s\nedge l: w -> w\nray R: r\n",
    )?;

    let finite = BoundaryPoint::Finite {
        path: Path::new(&g, Vertex::core("a"), vec![EdgeRef::core("f", 0)])?,
    };
    let loop_cycle = simple_cycles(&g)?
        .into_iter()
        .find(|c| c.to_string().contains('l'))
        .expect("the w-loop is a simple cycle");
    let ep = BoundaryPoint::Ep { prefix: Path::at(Vertex::core("w")), cycle: loop_cycle };
    let ray = BoundaryPoint::ray(&g, Path::at(Vertex::core("r")), "R".into(), 0)?;

    for x in [finite, ep, ray] {
        x.validate(&g)?;
        print!("{x}: ");
        if is_isolated(&g, &x)? {
            println!("isolated, {:?}", classify_isolated(&g, &x)?);
        } else {
            println!("not isolated");
        }
        let chain = shift_chain(&g, &x, 3)?;
        for (i, y) in chain.iter().enumerate() {
            println!("  sigma^{i} = {y}");
        }
    }
    Ok(())
}
