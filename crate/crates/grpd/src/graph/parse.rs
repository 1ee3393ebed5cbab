//! Line-oriented text format for graphs.
//!
//! ```text
//! # comment
//! vertex <name>
//! edge <label>: <src> -> <dst> [* <mult|omega>]
//! head <rayid>: <anchor>
//! ray <rayid>: <anchor>
//! ```
//!
//! Declaration order is free (references are resolved after the whole
//! document is read). `parse_graph ∘ serialize_graph` is the identity up to
//! whitespace and ordering.

use super::{Bundle, Graph, HeadSpec, Multiplicity, RaySpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Colon,
    Arrow,
    Star,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Star => write!(f, "`*`"),
        }
    }
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

/// Tokenize one line into (token, 1-based column) pairs. `#` starts a
/// comment running to the end of the line.
fn lex_line(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = line.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            ':' => {
                toks.push((Tok::Colon, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push((Tok::Arrow, col));
                i += 2;
            }
            c if ident_char(c) => {
                let start = i;
                // '-' stays in the identifier unless it opens an arrow.
                while i < chars.len()
                    && ident_char(chars[i])
                    && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
                {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    col,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct LineParser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    lineno: usize,
    len: usize,
}

impl<'a> LineParser<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.lineno, col, msg: msg.into() }
    }

    fn end_col(&self) -> usize {
        self.toks.last().map(|(_, c)| *c + 1).unwrap_or(self.len + 1)
    }

    fn next(&mut self, what: &str) -> Result<&'a (Tok, usize)> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| self.err(self.end_col(), format!("expected {what}, found end of line")))?;
        self.pos += 1;
        Ok(t)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.next(what)? {
            (Tok::Ident(s), _) => Ok(s.clone()),
            (t, col) => Err(self.err(*col, format!("expected {what}, found {t}"))),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.next(what)? {
            (t, _) if *t == tok => Ok(()),
            (t, col) => Err(self.err(*col, format!("expected {what}, found {t}"))),
        }
    }

    fn finish(&self) -> Result<()> {
        if let Some((t, col)) = self.toks.get(self.pos) {
            return Err(self.err(*col, format!("unexpected trailing {t}")));
        }
        Ok(())
    }
}

/// Parse a graph-format document into a validated [`Graph`].
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut vertices = Vec::new();
    let mut bundles = Vec::new();
    let mut heads = Vec::new();
    let mut rays = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = lex_line(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser { toks: &toks, pos: 0, lineno, len: raw.chars().count() };
        let (kw, kw_col) = match p.next("a declaration keyword")? {
            (Tok::Ident(s), col) => (s.clone(), *col),
            (t, col) => return Err(p.err(*col, format!("expected a declaration keyword, found {t}"))),
        };
        match kw.as_str() {
            "vertex" => {
                vertices.push(p.ident("a vertex name")?);
                p.finish()?;
            }
            "edge" => {
                let label = p.ident("an edge label")?;
                p.expect(Tok::Colon, "`:`")?;
                let source = p.ident("a source vertex")?;
                p.expect(Tok::Arrow, "`->`")?;
                let range = p.ident("a destination vertex")?;
                let multiplicity = if p.toks.get(p.pos).is_some() {
                    p.expect(Tok::Star, "`*` or end of line")?;
                    let (m, col) = match p.next("a multiplicity")? {
                        (Tok::Ident(s), col) => (s.clone(), *col),
                        (t, col) => return Err(p.err(*col, format!("expected a multiplicity, found {t}"))),
                    };
                    if m == "omega" {
                        Multiplicity::Omega
                    } else {
                        let n: u64 = m
                            .parse()
                            .map_err(|_| p.err(col, format!("invalid multiplicity `{m}`")))?;
                        if n == 0 {
                            return Err(p.err(col, "multiplicity must be ≥ 1"));
                        }
                        Multiplicity::Finite(n)
                    }
                } else {
                    Multiplicity::Finite(1)
                };
                p.finish()?;
                bundles.push(Bundle { label, source, range, multiplicity });
            }
            "head" => {
                let ray = p.ident("a head id")?;
                p.expect(Tok::Colon, "`:`")?;
                let anchor = p.ident("an anchor vertex")?;
                p.finish()?;
                heads.push(HeadSpec { ray, anchor });
            }
            "ray" => {
                let ray = p.ident("a ray id")?;
                p.expect(Tok::Colon, "`:`")?;
                let anchor = p.ident("an anchor vertex")?;
                p.finish()?;
                rays.push(RaySpec { ray, anchor });
            }
            other => {
                return Err(p.err(
                    kw_col,
                    format!("unknown declaration `{other}` (expected vertex, edge, head, or ray)"),
                ));
            }
        }
    }

    Graph::from_parts(vertices, bundles, heads, rays)
}

/// Serialize a graph to the text format with sorted sections.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.core_vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for b in g.bundles() {
        match b.multiplicity {
            Multiplicity::Finite(1) => {
                out.push_str(&format!("edge {}: {} -> {}\n", b.label, b.source, b.range));
            }
            m => {
                out.push_str(&format!("edge {}: {} -> {} * {m}\n", b.label, b.source, b.range));
            }
        }
    }
    for (ray, anchor) in g.heads() {
        out.push_str(&format!("head {ray}: {anchor}\n"));
    }
    for (ray, anchor) in g.rays() {
        out.push_str(&format!("ray {ray}: {anchor}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_cycle_graph() {
        let g = parse_graph("vertex v\nedge e: v -> v").unwrap();
        assert_eq!(g.core_vertex_count(), 1);
        let b = g.bundle("e").unwrap();
        assert_eq!((b.source.as_str(), b.range.as_str()), ("v", "v"));
        assert_eq!(b.multiplicity, Multiplicity::Finite(1));
    }

    #[test]
    fn head_plus_loop_graph() {
        let g = parse_graph("vertex v\nhead H: v\nedge e: v -> v").unwrap();
        assert_eq!(g.heads().count(), 1);
        assert_eq!(g.head_anchor("H").map(String::as_str), Some("v"));
    }

    #[test]
    fn malformed_edge_is_a_syntax_error_with_position() {
        let err = parse_graph("vertex v\nedge e: v ->").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col > 10);
            }
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn comments_blank_lines_and_free_order() {
        let g = parse_graph(
            "# a loop fed by a head\n\nedge e: v -> v # the loop\nvertex v\nhead H: v\n",
        )
        .unwrap();
        assert_eq!(g.core_vertex_count(), 1);
        assert_eq!(g.heads().count(), 1);
    }

    #[test]
    fn multiplicities_parse_and_print() {
        let g = parse_graph("vertex v\nedge a: v -> v * 3\nedge b: v -> v * omega\n").unwrap();
        assert_eq!(g.bundle("a").unwrap().multiplicity, Multiplicity::Finite(3));
        assert_eq!(g.bundle("b").unwrap().multiplicity, Multiplicity::Omega);
        assert!(parse_graph("vertex v\nedge a: v -> v * 0\n").is_err());
        assert!(parse_graph("vertex v\nedge a: v -> v * few\n").is_err());
    }

    #[test]
    fn dangling_reference_and_duplicate_label_are_rejected() {
        assert!(matches!(
            parse_graph("edge e: v -> w\nvertex v\n"),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            parse_graph("vertex v\nedge e: v -> v\nedge e: v -> v\n"),
            Err(Error::DuplicateIdent(_))
        ));
    }

    #[test]
    fn arrows_need_no_surrounding_spaces_but_idents_may_contain_dashes() {
        let g = parse_graph("vertex a-1\nvertex b.2\nedge e_3: a-1->b.2\n").unwrap();
        let b = g.bundle("e_3").unwrap();
        assert_eq!(b.source, "a-1");
        assert_eq!(b.range, "b.2");
    }

    #[test]
    fn round_trip_is_identity() {
        let texts = [
            "vertex v\n",
            "vertex v\nedge e: v -> v\n",
            "vertex v\nhead H: v\n",
            "vertex v\nray R: v\n",
            "vertex a\nvertex b\nedge e: a -> b * 2\nedge f: b -> a * omega\nhead H: a\nray R: b\n",
        ];
        for t in texts {
            let g = parse_graph(t).unwrap();
            let s = serialize_graph(&g);
            let g2 = parse_graph(&s).unwrap();
            assert_eq!(g, g2, "round trip changed the graph for {t:?}");
        }
    }

    proptest::proptest! {
        /// serialize ∘ parse is the identity on arbitrary well-formed
        /// graphs: vertices, finite and ω multiplicities, heads, rays.
        #[test]
        fn round_trip_is_identity_on_arbitrary_graphs(
            nv in 1usize..=8,
            bundles in proptest::collection::vec((0usize..8, 0usize..8, 0u64..=3), 0..=12),
            heads in proptest::collection::vec(0usize..8, 0..=2),
            rays in proptest::collection::vec(0usize..8, 0..=2),
        ) {
            let mut text = String::new();
            for i in 0..nv {
                text.push_str(&format!("vertex v{i}\n"));
            }
            for (j, (s, d, m)) in bundles.iter().enumerate() {
                let mult = match m {
                    0 => " * omega".to_owned(),
                    1 => String::new(),
                    m => format!(" * {m}"),
                };
                text.push_str(&format!("edge e{j}: v{} -> v{}{mult}\n", s % nv, d % nv));
            }
            for (j, a) in heads.iter().enumerate() {
                text.push_str(&format!("head H{j}: v{}\n", a % nv));
            }
            for (j, a) in rays.iter().enumerate() {
                text.push_str(&format!("ray R{j}: v{}\n", a % nv));
            }
            let g = parse_graph(&text).unwrap();
            let round = parse_graph(&serialize_graph(&g)).unwrap();
            proptest::prop_assert_eq!(round, g);
        }
    }

    #[test]
    fn unknown_keyword_reports_its_column() {
        let err = parse_graph("vortex v\n").unwrap_err();
        match err {
            Error::Parse { line, col, msg } => {
                assert_eq!((line, col), (1, 1));
                assert!(msg.contains("vortex"));
            }
            other => panic!("expected a parse error, got {other}"),
        }
    }
}
