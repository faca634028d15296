//! Named graph constructions, the little spec language that describes them,
//! and the edge-list text format.
//!
//! Vertex numbering is deterministic so that list files can refer to vertices
//! by index:
//! - `cycle(n)`: vertices `0..n` in cycle order.
//! - `theta(a,b,c)` / `theta4(a,b,c,d)`: branch vertices 0 and 1, then the
//!   interior vertices of each path in order, path by path.
//! - `complete_bipartite(p,q)` (also written `K(p,q)`): first part `0..p`,
//!   second part `p..p+q`.
//! - `cube_minus_vertex`: the 3-cube on bit-vectors `0..7` with vertex 7
//!   removed.
//! - `k33_minus_edge`: `K(3,3)` on parts {0,1,2}, {3,4,5} minus the edge
//!   (2,5).
//! - `lollipop(c,t)`: `cycle(c)` plus a pendant path of `t` edges hanging off
//!   vertex 0; the free end is the highest id.
//! - `glued(s1,s2,len)`: the first graph keeps its ids, the second is shifted
//!   by the first's vertex count, and the anchors are joined by a path of
//!   `len` edges (`len = 0` identifies the anchors; the second anchor then
//!   takes the first anchor's id). Anchors default to vertex 0 and can be
//!   overridden with `@k`, e.g. `glued(cycle(4)@2, cycle(6), 1)`.
//! - `figure(id)`: a graph from the built-in catalogue.

use super::Graph;
use crate::error::Error;

/// Parsed named-graph description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedGraphSpec {
    Cycle(usize),
    Theta(usize, usize, usize),
    Theta4(usize, usize, usize, usize),
    CompleteBipartite(usize, usize),
    CubeMinusVertex,
    K33MinusEdge,
    Figure(String),
    Lollipop(usize, usize),
    Glued(Box<AnchoredSpec>, Box<AnchoredSpec>, usize),
}

/// A spec together with the vertex used when gluing it to another graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredSpec {
    pub spec: NamedGraphSpec,
    pub anchor: usize,
}

/// Build a graph from a spec string such as `"theta(2,2,4)"`.
pub fn by_name(input: &str) -> Result<Graph, Error> {
    build_named(&parse_spec(input)?.spec)
}

/// Parse a spec string without building the graph.
pub fn parse_spec(input: &str) -> Result<AnchoredSpec, Error> {
    let mut p = SpecParser {
        s: input.as_bytes(),
        pos: 0,
    };
    let spec = p.anchored()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(Error::Parse(format!(
            "trailing input at byte {} of graph spec '{}'",
            p.pos, input
        )));
    }
    Ok(spec)
}

/// Build the graph a spec describes.
pub fn build_named(spec: &NamedGraphSpec) -> Result<Graph, Error> {
    match spec {
        NamedGraphSpec::Cycle(n) => {
            if *n < 3 {
                return Err(Error::BadGraph(format!(
                    "cycle({}) is not simple; need length >= 3",
                    n
                )));
            }
            let mut g = Graph::empty(*n);
            for v in 0..*n {
                g.add_edge(v, (v + 1) % n)?;
            }
            Ok(g)
        }
        NamedGraphSpec::Theta(a, b, c) => build_theta(&[*a, *b, *c]),
        NamedGraphSpec::Theta4(a, b, c, d) => build_theta(&[*a, *b, *c, *d]),
        NamedGraphSpec::CompleteBipartite(p, q) => {
            if *p == 0 || *q == 0 {
                return Err(Error::BadGraph(
                    "complete bipartite parts must be nonempty".into(),
                ));
            }
            let mut g = Graph::empty(p + q);
            for i in 0..*p {
                for j in 0..*q {
                    g.add_edge(i, p + j)?;
                }
            }
            Ok(g)
        }
        NamedGraphSpec::CubeMinusVertex => {
            let mut g = Graph::empty(7);
            for u in 0..7usize {
                for bit in 0..3 {
                    let v = u ^ (1 << bit);
                    if v < 7 && u < v {
                        g.add_edge(u, v)?;
                    }
                }
            }
            Ok(g)
        }
        NamedGraphSpec::K33MinusEdge => {
            let mut g = Graph::empty(6);
            for i in 0..3usize {
                for j in 3..6usize {
                    if (i, j) != (2, 5) {
                        g.add_edge(i, j)?;
                    }
                }
            }
            Ok(g)
        }
        NamedGraphSpec::Figure(id) => crate::catalogue::figure_graph(id)
            .ok_or_else(|| Error::Parse(format!("unknown figure id '{}'", id))),
        NamedGraphSpec::Lollipop(c, t) => {
            let mut g = build_named(&NamedGraphSpec::Cycle(*c))?;
            let mut prev = 0;
            for _ in 0..*t {
                let v = g.add_vertex();
                g.add_edge(prev, v)?;
                prev = v;
            }
            Ok(g)
        }
        NamedGraphSpec::Glued(first, second, path_len) => {
            let g1 = build_named(&first.spec)?;
            let g2 = build_named(&second.spec)?;
            for (g, a) in [(&g1, first.anchor), (&g2, second.anchor)] {
                if a >= g.n() {
                    return Err(Error::BadGraph(format!(
                        "glue anchor {} out of range for {} vertices",
                        a,
                        g.n()
                    )));
                }
            }
            if *path_len == 0 {
                Ok(g1.glue(first.anchor, &g2, second.anchor).0)
            } else {
                let off = g1.n();
                let mut g = g1.disjoint_union(&g2);
                let mut prev = first.anchor;
                for _ in 0..path_len - 1 {
                    let v = g.add_vertex();
                    g.add_edge(prev, v)?;
                    prev = v;
                }
                g.add_edge(prev, off + second.anchor)?;
                Ok(g)
            }
        }
    }
}

fn build_theta(lens: &[usize]) -> Result<Graph, Error> {
    if lens.iter().any(|&l| l == 0) {
        return Err(Error::BadGraph("theta path lengths must be positive".into()));
    }
    if lens.iter().filter(|&&l| l == 1).count() >= 2 {
        return Err(Error::BadGraph(
            "theta with two length-1 paths forms a parallel edge".into(),
        ));
    }
    let mut g = Graph::empty(2);
    for &len in lens {
        let mut prev = 0;
        for _ in 0..len - 1 {
            let v = g.add_vertex();
            g.add_edge(prev, v)?;
            prev = v;
        }
        g.add_edge(prev, 1)?;
    }
    Ok(g)
}

struct SpecParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.pos < self.s.len() && self.s[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at byte {} of graph spec",
                c as char, self.pos
            )))
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let ok = c.is_ascii_alphanumeric() || c == b'_' || (c == b'-' && self.pos > start);
            if !ok {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!(
                "expected a name at byte {} of graph spec",
                start
            )));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn nat(&mut self) -> Result<usize, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!(
                "expected a number at byte {} of graph spec",
                start
            )));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse("number out of range in graph spec".into()))
    }

    fn anchored(&mut self) -> Result<AnchoredSpec, Error> {
        let spec = self.spec()?;
        self.skip_ws();
        let anchor = if self.pos < self.s.len() && self.s[self.pos] == b'@' {
            self.pos += 1;
            self.nat()?
        } else {
            0
        };
        Ok(AnchoredSpec { spec, anchor })
    }

    fn spec(&mut self) -> Result<NamedGraphSpec, Error> {
        let name = self.ident()?;
        match name.as_str() {
            "cycle" => {
                self.eat(b'(')?;
                let n = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Cycle(n))
            }
            "theta" => {
                self.eat(b'(')?;
                let a = self.nat()?;
                self.eat(b',')?;
                let b = self.nat()?;
                self.eat(b',')?;
                let c = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Theta(a, b, c))
            }
            "theta4" => {
                self.eat(b'(')?;
                let a = self.nat()?;
                self.eat(b',')?;
                let b = self.nat()?;
                self.eat(b',')?;
                let c = self.nat()?;
                self.eat(b',')?;
                let d = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Theta4(a, b, c, d))
            }
            "complete_bipartite" | "K" | "k" => {
                self.eat(b'(')?;
                let p = self.nat()?;
                self.eat(b',')?;
                let q = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::CompleteBipartite(p, q))
            }
            "cube_minus_vertex" => Ok(NamedGraphSpec::CubeMinusVertex),
            "k33_minus_edge" => Ok(NamedGraphSpec::K33MinusEdge),
            "figure" => {
                self.eat(b'(')?;
                let id = self.ident()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Figure(id))
            }
            "lollipop" => {
                self.eat(b'(')?;
                let c = self.nat()?;
                self.eat(b',')?;
                let t = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Lollipop(c, t))
            }
            "glued" => {
                self.eat(b'(')?;
                let first = self.anchored()?;
                self.eat(b',')?;
                let second = self.anchored()?;
                self.eat(b',')?;
                let len = self.nat()?;
                self.eat(b')')?;
                Ok(NamedGraphSpec::Glued(Box::new(first), Box::new(second), len))
            }
            other => Err(Error::Parse(format!("unknown graph spec '{}'", other))),
        }
    }
}

/// Graph read from edge-list text, remembering the vertex names.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    /// Names in vertex-id order; decimal strings when the input was numeric.
    pub names: Vec<String>,
}

impl ParsedGraph {
    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Parse edge-list text: lines `u v` for edges, `vertex u` for isolated
/// vertices, `#` starts a comment. If every name is a number the numbers are
/// used as vertex ids directly (ids up to the maximum mentioned all exist);
/// otherwise names are assigned ids in order of first appearance.
pub fn parse_graph(text: &str) -> Result<ParsedGraph, Error> {
    enum Item {
        Edge(String, String, usize),
        Vertex(String),
    }
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["vertex", name] => items.push(Item::Vertex(name.to_string())),
            [a, b] => items.push(Item::Edge(a.to_string(), b.to_string(), idx + 1)),
            _ => {
                return Err(Error::Parse(format!(
                    "line {}: expected 'u v' or 'vertex u', got '{}'",
                    idx + 1,
                    line
                )))
            }
        }
    }
    let mut all_names = Vec::new();
    for item in &items {
        match item {
            Item::Edge(a, b, _) => {
                all_names.push(a.clone());
                all_names.push(b.clone());
            }
            Item::Vertex(a) => all_names.push(a.clone()),
        }
    }
    let numeric = !all_names.is_empty() && all_names.iter().all(|s| s.parse::<usize>().is_ok());
    let names: Vec<String> = if numeric {
        let max = all_names
            .iter()
            .map(|s| s.parse::<usize>().unwrap())
            .max()
            .unwrap();
        (0..=max).map(|v| v.to_string()).collect()
    } else {
        let mut seen = Vec::new();
        for name in all_names {
            if !seen.contains(&name) {
                seen.push(name);
            }
        }
        seen
    };
    let id = |name: &str| names.iter().position(|n| n == name).unwrap();
    let mut graph = Graph::empty(names.len());
    for item in &items {
        if let Item::Edge(a, b, line) = item {
            graph
                .add_edge(id(a), id(b))
                .map_err(|e| Error::Parse(format!("line {}: {}", line, e)))?;
        }
    }
    Ok(ParsedGraph { graph, names })
}

#[cfg(test)]
mod tests {
    use super::super::is_isomorphic;
    use super::*;

    #[test]
    fn named_basics() {
        assert_eq!(by_name("cycle(6)").unwrap().as_cycle(), Some(6));
        assert!(by_name("cycle(2)").is_err());

        let th = by_name("theta(2,2,4)").unwrap();
        assert_eq!(th.n(), 7);
        assert_eq!(th.degree(0), 3);
        assert_eq!(th.degree(1), 3);
        assert!(by_name("theta(1,1,2)").is_err());
        assert!(by_name("theta(0,2,2)").is_err());

        let k24 = by_name("K(2,4)").unwrap();
        let t4 = by_name("theta4(2,2,2,2)").unwrap();
        assert!(is_isomorphic(&k24, &t4).is_some());
        assert!(is_isomorphic(&by_name("K(2,3)").unwrap(), &by_name("theta(2,2,2)").unwrap()).is_some());

        let q = by_name("cube_minus_vertex").unwrap();
        assert_eq!((q.n(), q.edge_count()), (7, 9));
        let side = q.bipartition().unwrap();
        let zeros = side.iter().filter(|&&s| s == 0).count();
        assert!(zeros == 3 || zeros == 4);

        let m = by_name("k33_minus_edge").unwrap();
        assert_eq!((m.n(), m.edge_count()), (6, 8));
        assert_eq!(m.vertices_of_degree(2), vec![2, 5]);
    }

    #[test]
    fn lollipop_and_glued() {
        let l = by_name("lollipop(4, 2)").unwrap();
        assert_eq!(l.n(), 6);
        assert_eq!(l.degree(0), 3);
        assert_eq!(l.degree(5), 1);

        let shared = by_name("glued(cycle(4), cycle(6), 0)").unwrap();
        assert_eq!(shared.n(), 9);
        assert_eq!(shared.blocks().cut_vertices, vec![0]);

        let barbell = by_name("glued(cycle(4)@2, cycle(4), 2)").unwrap();
        assert_eq!(barbell.n(), 9);
        assert_eq!(barbell.degree(2), 3);
        let d = barbell.blocks();
        assert_eq!(d.cyclic_blocks().len(), 2);

        // nested glue with an anchor into the composite
        let chain = by_name("glued(glued(cycle(4)@2, cycle(4), 0)@5, cycle(4), 0)").unwrap();
        assert_eq!(chain.blocks().cyclic_blocks().len(), 3);
    }

    #[test]
    fn parse_numeric_edge_list() {
        let p = parse_graph("0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!(p.graph.as_cycle(), Some(4));
        assert_eq!(p.names[3], "3");

        assert!(parse_graph("0 0").is_err());
        assert!(parse_graph("0 1\n1 0").is_err());
        assert!(parse_graph("0 1 2").is_err());
    }

    #[test]
    fn parse_symbolic_edge_list() {
        let text = "# a triangle with a spare vertex\nu v\nv w # back edge\nw u\nvertex z\n";
        let p = parse_graph(text).unwrap();
        assert_eq!(p.graph.n(), 4);
        assert_eq!(p.graph.edge_count(), 3);
        assert_eq!(p.id_of("z"), Some(3));
        assert_eq!(p.graph.degree(p.id_of("z").unwrap()), 0);
    }
}
