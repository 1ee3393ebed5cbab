//! Seeded random graph generators shared by the integration suites.
//!
//! All generators are deterministic in the supplied RNG, so failures
//! reproduce from the seed alone. Graphs are produced through the text
//! format and the public parser — the same path user input takes.

use grpd::graph::Graph;
use grpd::isolated::is_discrete_space;
use grpd::parse_graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random finite graph: ≤ 8 vertices, ≤ 16 edge bundles, occasional
/// multiplicities (including ω) and optional heads and rays.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let nv = rng.gen_range(1..=8);
    let ne = rng.gen_range(0..=16);
    let mut text = String::new();
    for i in 0..nv {
        text.push_str(&format!("vertex v{i}\n"));
    }
    for h in 0..rng.gen_range(0..=2u32) {
        text.push_str(&format!("head H{h}: v{}\n", rng.gen_range(0..nv)));
    }
    for r in 0..rng.gen_range(0..=2u32) {
        text.push_str(&format!("ray R{r}: v{}\n", rng.gen_range(0..nv)));
    }
    for j in 0..ne {
        let s = rng.gen_range(0..nv);
        let d = rng.gen_range(0..nv);
        let mult = match rng.gen_range(0..12u32) {
            0 => " * omega".to_owned(),
            1 => format!(" * {}", rng.gen_range(2..=3u32)),
            _ => String::new(),
        };
        text.push_str(&format!("edge e{j}: v{s} -> v{d}{mult}\n"));
    }
    parse_graph(&text).expect("generated text is grammatical")
}

/// A random finite graph in which every vertex emits at least one edge and
/// there are no heads or rays (hence no sinks and no symbolic infinities).
pub fn random_no_sink_graph(rng: &mut ChaCha8Rng) -> Graph {
    let nv = rng.gen_range(1..=8);
    let extra = rng.gen_range(0..=(16 - nv));
    let mut text = String::new();
    for i in 0..nv {
        text.push_str(&format!("vertex v{i}\n"));
    }
    // One guaranteed out-edge per vertex, then extras.
    for i in 0..nv {
        text.push_str(&format!("edge e{i}: v{i} -> v{}\n", rng.gen_range(0..nv)));
    }
    for j in 0..extra {
        let s = rng.gen_range(0..nv);
        let d = rng.gen_range(0..nv);
        let mult = if rng.gen_range(0..12u32) == 0 { " * omega" } else { "" };
        text.push_str(&format!("edge x{j}: v{s} -> v{d}{mult}\n"));
    }
    parse_graph(&text).expect("generated text is grammatical")
}

/// A random graph whose boundary space is discrete, by rejection sampling
/// from a generator biased toward sparse graphs with heads, rays, and few
/// cycles.
pub fn random_discrete_graph(rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let nv = rng.gen_range(1..=5);
        let ne = rng.gen_range(0..=nv);
        let mut text = String::new();
        for i in 0..nv {
            text.push_str(&format!("vertex v{i}\n"));
        }
        for h in 0..rng.gen_range(0..=2u32) {
            text.push_str(&format!("head H{h}: v{}\n", rng.gen_range(0..nv)));
        }
        for r in 0..rng.gen_range(0..=2u32) {
            text.push_str(&format!("ray R{r}: v{}\n", rng.gen_range(0..nv)));
        }
        for j in 0..ne {
            let s = rng.gen_range(0..nv);
            let d = rng.gen_range(0..nv);
            text.push_str(&format!("edge e{j}: v{s} -> v{d}\n"));
        }
        let g = parse_graph(&text).expect("generated text is grammatical");
        if is_discrete_space(&g).expect("census succeeds on small graphs") {
            return g;
        }
    }
}

/// The same graph under a random renaming of vertices, edge labels, heads,
/// and rays — isomorphic to the input by construction.
pub fn relabeled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let vertices: Vec<String> = g.core_vertices().map(|v| v.to_string()).collect();
    let mut fresh: Vec<usize> = (0..vertices.len()).collect();
    fresh.shuffle(rng);
    let rename = |v: &str| {
        format!("w{}", fresh[vertices.iter().position(|u| u.as_str() == v).expect("core vertex")])
    };

    let mut text = String::new();
    for v in &vertices {
        text.push_str(&format!("vertex {}\n", rename(v)));
    }
    for (id, anchor) in g.heads() {
        text.push_str(&format!("head P{id}: {}\n", rename(anchor.as_ref())));
    }
    for (id, anchor) in g.rays() {
        text.push_str(&format!("ray Q{id}: {}\n", rename(anchor.as_ref())));
    }
    for b in g.bundles() {
        text.push_str(&format!(
            "edge t{}: {} -> {} * {}\n",
            b.label,
            rename(b.source.as_ref()),
            rename(b.range.as_ref()),
            b.multiplicity
        ));
    }
    parse_graph(&text).expect("relabeled text is grammatical")
}
