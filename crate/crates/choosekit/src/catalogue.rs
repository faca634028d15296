//! Built-in catalogue of the gadget graphs and list assignments the rest of
//! the crate leans on: uncolorable assignments on small obstruction graphs,
//! forcing assignments used when composing witnesses at cut vertices, and a
//! few named plain graphs.
//!
//! Each entry lives in its own embedded text file (sections `graph`, `lists`,
//! `claims`) so a transcription fix never touches code. Claims are data here;
//! checking them against the solver is the witness module's job.

use std::sync::OnceLock;

use crate::color::{parse_color_set, parse_lists_text, ColorSet, ListAssignment};
use crate::error::Error;
use crate::graph::{parse_graph, Graph};

/// What an entry's assignment is claimed to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    /// No `fold`-fold coloring of the assignment exists.
    Uncolorable { fold: u32 },
    /// Exactly `count` distinct `fold`-fold colorings exist.
    ColoringCount { fold: u32, count: u64 },
    /// The colorings of the graph give `vertex` exactly these color pairs.
    Forcing {
        vertex: usize,
        allowed: Vec<ColorSet>,
    },
}

#[derive(Clone, Debug)]
pub struct CatalogueEntry {
    /// Descriptive id, e.g. `c4-pair-cut-near-near`.
    pub id: &'static str,
    /// Optional short tag accepted as an alternate lookup key.
    pub alias: Option<&'static str>,
    pub graph: Graph,
    /// Absent for plain-graph entries.
    pub assignment: Option<ListAssignment>,
    pub claims: Vec<Claim>,
}

impl CatalogueEntry {
    /// True if some claim says the assignment has no 2-fold coloring.
    pub fn is_bad(&self) -> bool {
        self.claims
            .iter()
            .any(|c| matches!(c, Claim::Uncolorable { .. }))
    }

    /// True if the entry carries forcing claims.
    pub fn is_forcing(&self) -> bool {
        self.claims
            .iter()
            .any(|c| matches!(c, Claim::Forcing { .. }))
    }
}

macro_rules! entries {
    ($(($id:literal, $alias:expr, $file:literal),)*) => {
        [$(($id, $alias, include_str!(concat!("../data/catalogue/", $file))),)*]
    };
}

const RAW: [(&str, Option<&str>, &str); 24] = entries![
    // assignments with no 2-fold coloring
    ("c4-pair-cut-near-near", Some("figS"), "c4-pair-cut-near-near.txt"),
    ("c4-pair-cut-near-far", Some("figP"), "c4-pair-cut-near-far.txt"),
    ("c4-pair-cut-far-far", Some("figR"), "c4-pair-cut-far-far.txt"),
    ("c4-pair-links-adjacent", Some("figT"), "c4-pair-links-adjacent.txt"),
    ("c4-pair-links-opposite", Some("figU"), "c4-pair-links-opposite.txt"),
    ("k25", Some("figN"), "k25.txt"),
    ("k33", Some("figE"), "k33.txt"),
    ("q3-minus-v", Some("figQ"), "q3-minus-v.txt"),
    ("k33e-subdivided-side", Some("figY"), "k33e-subdivided-side.txt"),
    (
        "k33e-both-diagonals-subdivided",
        Some("figZ"),
        "k33e-both-diagonals-subdivided.txt"
    ),
    ("theta333", None, "theta333.txt"),
    ("theta2224", None, "theta2224.txt"),
    // forcing assignments
    ("k23-three-in", Some("figWW"), "k23-three-in.txt"),
    ("k23-three-out", Some("figXX"), "k23-three-out.txt"),
    ("k24-two-in", Some("figUU"), "k24-two-in.txt"),
    ("theta133-two-in", Some("figVV"), "theta133-two-in.txt"),
    ("theta224-two-in", Some("figAA"), "theta224-two-in.txt"),
    ("theta224-one", Some("figBB"), "theta224-one.txt"),
    ("c4-four-out", Some("c4lem"), "c4-four-out.txt"),
    // plain graphs
    ("theta222-c4-at-branch", Some("figGG1"), "theta222-c4-at-branch.txt"),
    ("k33e-diagonal-subdivided", Some("figGG2"), "k33e-diagonal-subdivided.txt"),
    ("theta222-c4-at-middle", Some("figGG3"), "theta222-c4-at-middle.txt"),
    ("c4-chain-3", Some("figGG4"), "c4-chain-3.txt"),
    ("c6-c4-c10-chain", Some("figFF"), "c6-c4-c10-chain.txt"),
];

/// All catalogue entries, in a fixed order.
pub fn catalogue() -> &'static [CatalogueEntry] {
    static CACHE: OnceLock<Vec<CatalogueEntry>> = OnceLock::new();
    CACHE.get_or_init(|| {
        RAW.iter()
            .map(|&(id, alias, text)| {
                parse_entry(id, alias, text)
                    .unwrap_or_else(|e| panic!("catalogue entry '{}' is malformed: {}", id, e))
            })
            .collect()
    })
}

/// Look an entry up by id or alias.
pub fn entry(key: &str) -> Option<&'static CatalogueEntry> {
    catalogue()
        .iter()
        .find(|e| e.id == key || e.alias == Some(key))
}

/// The graph of an entry, for `figure(id)` specs.
pub fn figure_graph(key: &str) -> Option<Graph> {
    entry(key).map(|e| e.graph.clone())
}

fn parse_entry(
    id: &'static str,
    alias: Option<&'static str>,
    text: &str,
) -> Result<CatalogueEntry, Error> {
    let mut graph_lines = String::new();
    let mut list_lines = String::new();
    let mut claim_lines = Vec::new();
    let mut section = "";
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        match line {
            "graph" | "lists" | "claims" => {
                section = match line {
                    "graph" => "graph",
                    "lists" => "lists",
                    _ => "claims",
                };
            }
            _ => match section {
                "graph" => {
                    graph_lines.push_str(line);
                    graph_lines.push('\n');
                }
                "lists" => {
                    list_lines.push_str(line);
                    list_lines.push('\n');
                }
                "claims" => claim_lines.push(line.to_string()),
                _ => {
                    return Err(Error::Parse(format!(
                        "content before any section header: '{}'",
                        line
                    )))
                }
            },
        }
    }
    let parsed = parse_graph(&graph_lines)?;
    let graph = parsed.graph;
    let assignment = if list_lines.is_empty() {
        None
    } else {
        Some(parse_lists_text(&list_lines, graph.n(), |name| {
            name.parse::<usize>().ok().filter(|&v| v < graph.n())
        })?)
    };
    let mut claims = Vec::new();
    for line in claim_lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let claim = match toks.as_slice() {
            ["uncolorable"] => Claim::Uncolorable { fold: 2 },
            ["colorings", n] => Claim::ColoringCount {
                fold: 2,
                count: n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad count in claim '{}'", line)))?,
            },
            ["forcing", v, "allowed", rest @ ..] if !rest.is_empty() => {
                let vertex: usize = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vertex in claim '{}'", line)))?;
                let allowed = rest
                    .iter()
                    .map(|s| parse_color_set(s))
                    .collect::<Result<Vec<_>, _>>()?;
                Claim::Forcing { vertex, allowed }
            }
            _ => return Err(Error::Parse(format!("unrecognized claim '{}'", line))),
        };
        claims.push(claim);
    }
    if assignment.is_none() && !claims.is_empty() {
        return Err(Error::Parse("claims require a list assignment".into()));
    }
    Ok(CatalogueEntry {
        id,
        alias,
        graph,
        assignment,
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_loads() {
        let all = catalogue();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|e| e.is_bad()).count(), 12);
        assert_eq!(all.iter().filter(|e| e.is_forcing()).count(), 7);
        assert_eq!(
            all.iter().filter(|e| e.assignment.is_none()).count(),
            5
        );
        for e in all {
            if let Some(l) = &e.assignment {
                assert_eq!(l.vertex_count(), e.graph.n(), "entry {}", e.id);
                assert_eq!(l.list_size(), 4, "entry {}", e.id);
            }
        }
    }

    #[test]
    fn lookup_by_alias() {
        let e = entry("figS").unwrap();
        assert_eq!(e.id, "c4-pair-cut-near-near");
        assert_eq!(e.graph.n(), 8);
        assert!(entry("c4-chain-3").unwrap().assignment.is_none());
        assert!(entry("nope").is_none());
    }

    #[test]
    fn structural_shapes() {
        // the chained-C4 entry: three cyclic blocks, middle cut vertices
        // non-adjacent
        let g = &entry("c4-chain-3").unwrap().graph;
        assert_eq!(g.n(), 10);
        let d = g.blocks();
        assert_eq!(d.cyclic_blocks().len(), 3);
        assert_eq!(d.cut_vertices.len(), 2);
        assert!(!g.has_edge(d.cut_vertices[0], d.cut_vertices[1]));

        let ff = &entry("c6-c4-c10-chain").unwrap().graph;
        assert_eq!(ff.n(), 21);
        assert_eq!(ff.blocks().cyclic_blocks().len(), 3);

        // forcing gadgets sit on the graphs their names promise
        let ww = entry("k23-three-in").unwrap();
        assert!(crate::graph::is_isomorphic(
            &ww.graph,
            &crate::graph::by_name("K(2,3)").unwrap()
        )
        .is_some());
        let uu = entry("k24-two-in").unwrap();
        assert!(crate::graph::is_isomorphic(
            &uu.graph,
            &crate::graph::by_name("K(2,4)").unwrap()
        )
        .is_some());
        let vv = entry("theta133-two-in").unwrap();
        assert!(crate::graph::is_isomorphic(
            &vv.graph,
            &crate::graph::by_name("theta(1,3,3)").unwrap()
        )
        .is_some());
        let aa = entry("theta224-two-in").unwrap();
        assert!(crate::graph::is_isomorphic(
            &aa.graph,
            &crate::graph::by_name("theta(2,2,4)").unwrap()
        )
        .is_some());
    }
}
