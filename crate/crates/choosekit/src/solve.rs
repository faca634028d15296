//! Exact b-fold list coloring.
//!
//! The centerpiece is a small backtracking solver ([`find_bfold_coloring`],
//! [`count_bfold_colorings`]) tuned for the graphs this crate cares about:
//! at most a dozen vertices, lists of four colors, fold two. On top of it sit
//! [`forcing_analysis`] (which b-subsets can a vertex receive over *all*
//! colorings, and what shape does that allowed set have), a local propagator
//! [`propagate_forced`] for scripting hand-style case analyses, the pot
//! reduction [`reduce_pot`], a linear-time DP [`path_dp_solve`] for graphs
//! with few branch vertices, and the odd-fold majority projection
//! [`majority_project`].

use std::collections::BTreeMap;
use std::fmt;

use crate::color::{ColorPerm, ColorSet, ListAssignment, MultiColoring};
use crate::error::Error;
use crate::graph::Graph;

/// Why a candidate coloring fails to be a proper b-fold list coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// The coloring covers a different number of vertices than the graph.
    VertexCount { got: usize, want: usize },
    /// `|phi(v)|` differs from the required fold.
    Fold { vertex: usize, got: usize, want: usize },
    /// `phi(v)` is not a subset of `L(v)`.
    NotInList { vertex: usize },
    /// Two adjacent vertices share a color.
    EdgeOverlap { u: usize, v: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::VertexCount { got, want } => {
                write!(f, "coloring has {} vertices, graph has {}", got, want)
            }
            Violation::Fold { vertex, got, want } => {
                write!(f, "vertex {} received {} colors, expected {}", vertex, got, want)
            }
            Violation::NotInList { vertex } => {
                write!(f, "vertex {} uses a color outside its list", vertex)
            }
            Violation::EdgeOverlap { u, v } => {
                write!(f, "adjacent vertices {} and {} share a color", u, v)
            }
        }
    }
}

/// Check that `phi` is a proper `b`-fold `l`-coloring of `g`.
pub fn validate(
    g: &Graph,
    l: &ListAssignment,
    b: usize,
    phi: &MultiColoring,
) -> Result<(), Violation> {
    if phi.sets.len() != g.n() || l.vertex_count() != g.n() {
        return Err(Violation::VertexCount {
            got: phi.sets.len(),
            want: g.n(),
        });
    }
    for v in 0..g.n() {
        if phi.get(v).len() != b {
            return Err(Violation::Fold {
                vertex: v,
                got: phi.get(v).len(),
                want: b,
            });
        }
        if !phi.get(v).is_subset_of(l.get(v)) {
            return Err(Violation::NotInList { vertex: v });
        }
    }
    for (u, v) in g.edges() {
        if !phi.get(u).is_disjoint(phi.get(v)) {
            return Err(Violation::EdgeOverlap { u, v });
        }
    }
    Ok(())
}

/// Pins and exclusions on individual vertices, used to script case analyses
/// of the form "suppose phi(x) = 12" or "phi(v) is not 24 or 34".
#[derive(Debug, Clone, Default)]
pub struct PartialConstraint {
    forced: Vec<(usize, ColorSet)>,
    forbidden: Vec<(usize, ColorSet)>,
}

impl PartialConstraint {
    pub fn new() -> Self {
        Self::default()
    }

    /// Require `phi(v) = set`.
    pub fn force(mut self, v: usize, set: ColorSet) -> Self {
        self.forced.push((v, set));
        self
    }

    /// Require `phi(v) != set`.
    pub fn forbid(mut self, v: usize, set: ColorSet) -> Self {
        self.forbidden.push((v, set));
        self
    }

    pub fn is_empty(&self) -> bool {
        self.forced.is_empty() && self.forbidden.is_empty()
    }

    /// Initial candidate domains for every vertex: the b-subsets of each list
    /// filtered through the pins and exclusions. A pin that is not a b-subset
    /// of the vertex's list leaves an empty domain (the constraint is simply
    /// unsatisfiable); naming a vertex outside the graph is an error.
    fn domains(&self, g: &Graph, l: &ListAssignment, b: usize) -> Result<Vec<Vec<ColorSet>>, Error> {
        let mut dom: Vec<Vec<ColorSet>> = (0..g.n()).map(|v| l.get(v).subsets(b)).collect();
        for &(v, s) in &self.forced {
            if v >= g.n() {
                return Err(Error::BadListAssignment(format!(
                    "constraint pins vertex {} but the graph has {} vertices",
                    v,
                    g.n()
                )));
            }
            dom[v].retain(|&t| t == s);
        }
        for &(v, s) in &self.forbidden {
            if v >= g.n() {
                return Err(Error::BadListAssignment(format!(
                    "constraint excludes a set at vertex {} but the graph has {} vertices",
                    v,
                    g.n()
                )));
            }
            dom[v].retain(|&t| t != s);
        }
        Ok(dom)
    }
}

/// Backtracking core. Chooses the unassigned vertex with the fewest
/// candidates compatible with its already-assigned neighbors; this subsumes
/// the forced-complement step along equal-list edges (such a vertex has
/// exactly one live candidate and is picked immediately).
struct Search<'a> {
    g: &'a Graph,
    domains: Vec<Vec<ColorSet>>,
    phi: Vec<ColorSet>,
    assigned: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, domains: Vec<Vec<ColorSet>>) -> Self {
        Search {
            g,
            domains,
            phi: vec![ColorSet::EMPTY; g.n()],
            assigned: vec![false; g.n()],
        }
    }

    /// Visit every full coloring; `visit` returns `false` to stop early.
    /// Returns `false` if stopped.
    fn run(&mut self, visit: &mut impl FnMut(&[ColorSet]) -> bool) -> bool {
        let mut best: Option<(usize, Vec<ColorSet>)> = None;
        for v in 0..self.g.n() {
            if self.assigned[v] {
                continue;
            }
            let live: Vec<ColorSet> = self.domains[v]
                .iter()
                .copied()
                .filter(|s| {
                    self.g
                        .neighbors(v)
                        .iter()
                        .all(|&u| !self.assigned[u] || s.is_disjoint(self.phi[u]))
                })
                .collect();
            let better = best.as_ref().map_or(true, |(_, b)| live.len() < b.len());
            if better {
                let empty = live.is_empty();
                best = Some((v, live));
                if empty {
                    break;
                }
            }
        }
        match best {
            None => visit(&self.phi),
            Some((v, live)) => {
                self.assigned[v] = true;
                for s in live {
                    self.phi[v] = s;
                    if !self.run(visit) {
                        self.assigned[v] = false;
                        return false;
                    }
                }
                self.assigned[v] = false;
                true
            }
        }
    }
}

fn check_instance(g: &Graph, l: &ListAssignment, b: usize) -> Result<(), Error> {
    if l.vertex_count() != g.n() {
        return Err(Error::BadListAssignment(format!(
            "assignment covers {} vertices, graph has {}",
            l.vertex_count(),
            g.n()
        )));
    }
    if b == 0 {
        return Err(Error::BadListAssignment("fold must be positive".into()));
    }
    Ok(())
}

/// Find one b-fold list coloring honoring the optional constraint, or `None`
/// after an exhaustive search.
pub fn find_bfold_coloring(
    g: &Graph,
    l: &ListAssignment,
    b: usize,
    constraint: Option<&PartialConstraint>,
) -> Result<Option<MultiColoring>, Error> {
    check_instance(g, l, b)?;
    let default = PartialConstraint::default();
    let domains = constraint.unwrap_or(&default).domains(g, l, b)?;
    let mut found: Option<Vec<ColorSet>> = None;
    Search::new(g, domains).run(&mut |phi| {
        found = Some(phi.to_vec());
        false
    });
    Ok(found.map(|sets| MultiColoring { sets, fold: b }))
}

/// Exact number of b-fold list colorings, by exhaustive backtracking.
/// Intended for small instances (roughly a dozen vertices).
pub fn count_bfold_colorings(g: &Graph, l: &ListAssignment, b: usize) -> u64 {
    assert_eq!(
        l.vertex_count(),
        g.n(),
        "assignment covers {} vertices, graph has {}",
        l.vertex_count(),
        g.n()
    );
    let domains: Vec<Vec<ColorSet>> = (0..g.n()).map(|v| l.get(v).subsets(b)).collect();
    let mut count = 0u64;
    Search::new(g, domains).run(&mut |_| {
        count += 1;
        true
    });
    count
}

/// Every b-fold coloring compatible with the constraint, in the search's
/// deterministic order. Only for small instances: the result can be
/// exponential in the vertex count.
pub fn enumerate_bfold_colorings(
    g: &Graph,
    l: &ListAssignment,
    b: usize,
    constraint: Option<&PartialConstraint>,
) -> Result<Vec<MultiColoring>, Error> {
    check_instance(g, l, b)?;
    let default = PartialConstraint::default();
    let domains = constraint.unwrap_or(&default).domains(g, l, b)?;
    let mut all = Vec::new();
    Search::new(g, domains).run(&mut |phi| {
        all.push(MultiColoring {
            sets: phi.to_vec(),
            fold: b,
        });
        true
    });
    Ok(all)
}

/// How strongly an assignment pins down one vertex: the size of the allowed
/// set, refined by its internal structure when lists have four colors and the
/// fold is two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ForcingShape {
    /// No coloring at all.
    Uncolorable,
    /// Exactly one allowed pair.
    One,
    /// Two allowed pairs sharing a color.
    TwoIn,
    /// Two complementary allowed pairs.
    TwoComp,
    /// Three allowed pairs with a common color.
    ThreeIn,
    /// Three allowed pairs all avoiding a common color.
    ThreeOut,
    /// Three allowed pairs, neither a common nor a commonly-avoided color.
    ThreeMixed,
    /// Four allowed pairs whose two excluded pairs share a color.
    FourOut,
    /// Four allowed pairs whose two excluded pairs are complementary.
    FourOther,
    /// Five allowed pairs.
    Five,
    /// All six pairs allowed (or a regime where no shape is claimed).
    SixUnforced,
}

impl ForcingShape {
    pub fn as_str(self) -> &'static str {
        match self {
            ForcingShape::Uncolorable => "uncolorable",
            ForcingShape::One => "1",
            ForcingShape::TwoIn => "2_in",
            ForcingShape::TwoComp => "2_comp",
            ForcingShape::ThreeIn => "3_in",
            ForcingShape::ThreeOut => "3_out",
            ForcingShape::ThreeMixed => "3_mixed",
            ForcingShape::FourOut => "4_out",
            ForcingShape::FourOther => "4_other",
            ForcingShape::Five => "5",
            ForcingShape::SixUnforced => "6_unforced",
        }
    }
}

impl fmt::Display for ForcingShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl serde::Serialize for ForcingShape {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(self.as_str())
    }
}

/// The exact set of b-subsets a vertex can receive over all colorings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingReport {
    pub vertex: usize,
    /// Sorted by bitmask.
    pub allowed: Vec<ColorSet>,
    pub shape: ForcingShape,
}

impl ForcingReport {
    /// The b-subsets of the vertex's list that occur in no coloring.
    pub fn excluded(&self, l: &ListAssignment, b: usize) -> Vec<ColorSet> {
        l.get(self.vertex)
            .subsets(b)
            .into_iter()
            .filter(|s| !self.allowed.contains(s))
            .collect()
    }
}

fn classify_shape(allowed: &[ColorSet], list: ColorSet, b: usize) -> ForcingShape {
    if allowed.is_empty() {
        return ForcingShape::Uncolorable;
    }
    if b != 2 || list.len() != 4 {
        // Outside the four-colors/fold-two regime only colorability is
        // classified; the report still carries the exact allowed set.
        return ForcingShape::SixUnforced;
    }
    match allowed.len() {
        1 => ForcingShape::One,
        2 => {
            if allowed[0].is_disjoint(allowed[1]) {
                ForcingShape::TwoComp
            } else {
                ForcingShape::TwoIn
            }
        }
        3 => {
            let common = allowed.iter().fold(list, |acc, &s| acc.intersect(s));
            let avoided = allowed
                .iter()
                .fold(list, |acc, &s| acc.intersect(list.minus(s)));
            if !common.is_empty() {
                ForcingShape::ThreeIn
            } else if !avoided.is_empty() {
                ForcingShape::ThreeOut
            } else {
                ForcingShape::ThreeMixed
            }
        }
        4 => {
            let excluded: Vec<ColorSet> = list
                .subsets(2)
                .into_iter()
                .filter(|s| !allowed.contains(s))
                .collect();
            if excluded[0].is_disjoint(excluded[1]) {
                ForcingShape::FourOther
            } else {
                ForcingShape::FourOut
            }
        }
        5 => ForcingShape::Five,
        _ => ForcingShape::SixUnforced,
    }
}

/// Compute the allowed set of `v`: exactly those b-subsets of `L(v)` that
/// occur in some full coloring, with the shape classification.
pub fn forcing_analysis(
    g: &Graph,
    l: &ListAssignment,
    v: usize,
    b: usize,
) -> Result<ForcingReport, Error> {
    check_instance(g, l, b)?;
    if v >= g.n() {
        return Err(Error::BadListAssignment(format!(
            "forcing analysis names vertex {} but the graph has {} vertices",
            v,
            g.n()
        )));
    }
    let mut allowed = Vec::new();
    for s in l.get(v).subsets(b) {
        let pin = PartialConstraint::new().force(v, s);
        if find_bfold_coloring(g, l, b, Some(&pin))?.is_some() {
            allowed.push(s);
        }
    }
    let shape = classify_shape(&allowed, l.get(v), b);
    Ok(ForcingReport { vertex: v, allowed, shape })
}

/// Result of local propagation from a partial constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    /// Vertices whose candidate set shrank to a single b-subset, in the
    /// order the propagator discovered them.
    pub forced: Vec<(usize, ColorSet)>,
    /// The first vertex whose candidate set became empty, if any.
    pub contradiction: Option<usize>,
}

/// Arc-consistency propagation over the disjointness constraints: a candidate
/// at `v` survives only if every neighbor still has a candidate disjoint from
/// it. This is the machine version of hand arguments like "if phi(x) = 12
/// then phi(w) = 34, so ... and y cannot be colored". Sound but incomplete:
/// a contradiction proves no coloring honors the constraint; quiescence
/// proves nothing.
pub fn propagate_forced(
    g: &Graph,
    l: &ListAssignment,
    b: usize,
    constraint: &PartialConstraint,
) -> Result<Propagation, Error> {
    check_instance(g, l, b)?;
    let mut dom = constraint.domains(g, l, b)?;
    let mut singleton: Vec<bool> = dom.iter().map(|d| d.len() == 1).collect();
    let mut forced = Vec::new();
    if let Some(v) = (0..g.n()).find(|&v| dom[v].is_empty()) {
        return Ok(Propagation { forced, contradiction: Some(v) });
    }
    loop {
        let mut changed = false;
        for v in 0..g.n() {
            let keep: Vec<ColorSet> = dom[v]
                .iter()
                .copied()
                .filter(|&s| {
                    g.neighbors(v)
                        .iter()
                        .all(|&u| dom[u].iter().any(|&t| s.is_disjoint(t)))
                })
                .collect();
            if keep.len() != dom[v].len() {
                changed = true;
                dom[v] = keep;
                if dom[v].is_empty() {
                    return Ok(Propagation { forced, contradiction: Some(v) });
                }
                if dom[v].len() == 1 && !singleton[v] {
                    singleton[v] = true;
                    forced.push((v, dom[v][0]));
                }
            }
        }
        if !changed {
            return Ok(Propagation { forced, contradiction: None });
        }
    }
}

/// Relabel every list through a color permutation (must be a bijection on
/// the pot). Allowed sets of `forcing_analysis` map by the same permutation.
pub fn relabel_colors(l: &ListAssignment, perm: &ColorPerm) -> Result<ListAssignment, Error> {
    l.relabeled(perm)
}

pub(crate) fn color_components(g: &Graph, lists: &[ColorSet], alpha: u8) -> Vec<Vec<usize>> {
    let member: Vec<bool> = (0..g.n()).map(|v| lists[v].contains(alpha)).collect();
    let mut seen = vec![false; g.n()];
    let mut comps = Vec::new();
    for start in 0..g.n() {
        if !member[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            for &u in g.neighbors(v) {
                if member[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    queue.push(u);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Shrink the pot of an assignment to at most `budget` colors, for graphs
/// where removing the small vertex set `x` leaves disjoint paths on at most
/// three vertices (any three-vertex path's middle vertex must have no
/// neighbor outside its path). The output assignment `L'` satisfies
/// `|pot(L')| <= budget`, and every `L'`-coloring maps back to an
/// `L`-coloring — so if the input admits no coloring, neither does the
/// output. The reverse direction is not claimed.
///
/// Three replacement rules run to quiescence with a deterministic scan
/// (lowest color first, then lowest component):
/// 1. a color whose occurrence subgraph has an isolated-vertex component
///    outside `x` is replaced there by a color from a neighbor's list;
/// 2. an out-of-budget color with a component on at most two vertices is
///    replaced on that component by a fresh in-budget color;
/// 3. the same for a three-vertex component (rule 1's quiescence guarantees
///    the replacement color exists).
pub fn reduce_pot(
    g: &Graph,
    l: &ListAssignment,
    x: &[usize],
    budget: usize,
) -> Result<ListAssignment, Error> {
    check_instance(g, l, 1)?;
    let xs = format!(
        "{{{}}}",
        x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    );
    let mut in_x = vec![false; g.n()];
    for &v in x {
        if v >= g.n() {
            return Err(Error::BadGraph(format!(
                "reduction set {} names vertex {} but the graph has {} vertices",
                xs,
                v,
                g.n()
            )));
        }
        if in_x[v] {
            return Err(Error::BadGraph(format!(
                "reduction set {} repeats vertex {}",
                xs, v
            )));
        }
        in_x[v] = true;
    }

    // G - x must be disjoint paths on <= 3 vertices, middles internal.
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !in_x[v]).collect();
    let (sub, sub_verts) = g.induced(&rest);
    for comp in sub.components() {
        if comp.len() > 3 {
            return Err(Error::BadGraph(format!(
                "removing {} leaves a component with {} vertices; paths of at most 3 required",
                xs,
                comp.len()
            )));
        }
        let (subg, comp_verts) = sub.induced(&comp);
        if subg.as_path().is_none() && subg.n() > 1 {
            return Err(Error::BadGraph(format!(
                "removing {} leaves a non-path component; paths of at most 3 required",
                xs
            )));
        }
        if comp.len() == 3 {
            let mid_local = (0..3).find(|&i| subg.degree(i) == 2).ok_or_else(|| {
                Error::BadGraph(format!("removing {} leaves a non-path component", xs))
            })?;
            let mid = sub_verts[comp_verts[mid_local]];
            let inside: Vec<usize> = comp_verts.iter().map(|&i| sub_verts[i]).collect();
            if g.neighbors(mid).iter().any(|u| !inside.contains(u)) {
                return Err(Error::BadGraph(format!(
                    "middle vertex {} of a three-vertex path has a neighbor outside it (removal set {})",
                    mid, xs
                )));
            }
        }
    }

    let x_union = x
        .iter()
        .fold(ColorSet::EMPTY, |acc, &v| acc.union(l.get(v)));
    if x_union.len() > budget {
        return Err(Error::BadListAssignment(format!(
            "lists of {} already use {} colors, over the budget of {}",
            xs,
            x_union.len(),
            budget
        )));
    }

    if l.pot().len() <= budget {
        return Ok(l.clone());
    }

    // Pad the target palette with the smallest pot colors.
    let mut palette = x_union;
    for c in l.pot().iter() {
        if palette.len() >= budget {
            break;
        }
        palette = palette.union(ColorSet::single(c));
    }

    let mut lists: Vec<ColorSet> = l.lists().to_vec();
    // Each iteration strictly decreases (total component count over all
    // colors, out-of-palette list entries) lexicographically, so this bound
    // is generous.
    let mut fuel = 80 * g.n() as u64 + 100;
    'outer: loop {
        if fuel == 0 {
            return Err(Error::Internal("pot reduction failed to terminate".into()));
        }
        fuel -= 1;

        let pot = lists.iter().fold(ColorSet::EMPTY, |a, &s| a.union(s));

        // Rule 1: isolated occurrence outside x.
        for alpha in pot.iter() {
            for comp in color_components(g, &lists, alpha) {
                let v = comp[0];
                if comp.len() != 1 || in_x[v] {
                    continue;
                }
                let fresh = g
                    .neighbors(v)
                    .iter()
                    .fold(ColorSet::EMPTY, |acc, &w| acc.union(lists[w]))
                    .minus(lists[v]);
                let beta = fresh.min_color().ok_or_else(|| {
                    Error::BadGraph(format!(
                        "vertex {} has no neighbor contributing a replacement color",
                        v
                    ))
                })?;
                lists[v] = lists[v].without(alpha).with(beta);
                continue 'outer;
            }
        }

        let out = pot.minus(palette);
        let alpha = match out.min_color() {
            None => break,
            Some(a) => a,
        };

        // Rules 2 and 3: out-of-palette color on a small component. Size <= 2
        // components go first, matching the replay order of the two rules.
        let comps = color_components(g, &lists, alpha);
        let comp = comps
            .iter()
            .find(|c| c.len() <= 2)
            .or_else(|| comps.iter().find(|c| c.len() == 3))
            .ok_or_else(|| {
                Error::Internal(format!(
                    "color {} has only components larger than 3; the path precondition should prevent this",
                    alpha
                ))
            })?;
        let used = comp
            .iter()
            .fold(ColorSet::EMPTY, |acc, &v| acc.union(lists[v]));
        let beta = palette.minus(used).min_color().ok_or_else(|| {
            Error::BadListAssignment(format!(
                "budget {} too small: component of color {} already sees every palette color",
                budget, alpha
            ))
        })?;
        for &v in comp {
            lists[v] = lists[v].without(alpha).with(beta);
        }
    }

    ListAssignment::new(lists, l.list_size())
}

/// Default cap on the number of branch vertices `path_dp_solve` accepts.
pub const MAX_BRANCH_VERTICES: usize = 8;

struct PathComponent {
    /// Vertices in path order.
    verts: Vec<usize>,
    /// Branch-vertex neighbors of the first and last path vertex.
    head_attach: Vec<usize>,
    tail_attach: Vec<usize>,
    /// For each admissible first set: per-layer live sets with a pointer to
    /// the predecessor entry in the previous layer.
    tables: BTreeMap<ColorSet, Vec<Vec<(ColorSet, usize)>>>,
}

fn build_path_table(
    l: &ListAssignment,
    verts: &[usize],
    m: usize,
    first: ColorSet,
) -> Option<Vec<Vec<(ColorSet, usize)>>> {
    let mut layers: Vec<Vec<(ColorSet, usize)>> = vec![vec![(first, usize::MAX)]];
    for (i, &v) in verts.iter().enumerate().skip(1) {
        let prev = &layers[i - 1];
        let mut layer = Vec::new();
        for s in l.get(v).subsets(m) {
            if let Some(j) = prev.iter().position(|&(t, _)| t.is_disjoint(s)) {
                layer.push((s, j));
            }
        }
        if layer.is_empty() {
            return None;
        }
        layers.push(layer);
    }
    Some(layers)
}

fn walk_back(layers: &[Vec<(ColorSet, usize)>], last_idx: usize, out: &mut [ColorSet], verts: &[usize]) {
    let mut idx = last_idx;
    for i in (0..layers.len()).rev() {
        let (s, parent) = layers[i][idx];
        out[verts[i]] = s;
        idx = parent;
    }
}

/// Solve an m-fold coloring instance with lists of `2m` colors in time linear
/// in the number of vertices, provided at most [`MAX_BRANCH_VERTICES`]
/// vertices have degree 3 or more. Removing the branch vertices leaves
/// disjoint paths and cycles; each path contributes a reachability table
/// from first-vertex set to last-vertex set, and the branch vertices are
/// colored by direct enumeration against those tables.
pub fn path_dp_solve(g: &Graph, l: &ListAssignment, m: usize) -> Result<Option<MultiColoring>, Error> {
    check_instance(g, l, m)?;
    if l.list_size() != 2 * m {
        return Err(Error::BadListAssignment(format!(
            "lists have {} colors, expected {} for fold {}",
            l.list_size(),
            2 * m,
            m
        )));
    }
    let branch: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) >= 3).collect();
    if branch.len() > MAX_BRANCH_VERTICES {
        return Err(Error::Unsupported(format!(
            "{} vertices of degree >= 3 (cap {}); use find_bfold_coloring instead",
            branch.len(),
            MAX_BRANCH_VERTICES
        )));
    }
    let is_branch: Vec<bool> = (0..g.n()).map(|v| g.degree(v) >= 3).collect();
    let mut phi = vec![ColorSet::EMPTY; g.n()];

    let rest: Vec<usize> = (0..g.n()).filter(|&v| !is_branch[v]).collect();
    let (sub, sub_verts) = g.induced(&rest);
    let mut paths: Vec<PathComponent> = Vec::new();
    for comp in sub.components() {
        let (cg, comp_verts) = sub.induced(&comp);
        let orig: Vec<usize> = comp_verts.iter().map(|&i| sub_verts[i]).collect();
        if cg.as_cycle().is_some() {
            // A cycle component of G - branch is a whole component of G:
            // every vertex already has both its neighbors inside. Solve it
            // now, anchoring the smallest vertex.
            let order = cycle_order(&cg);
            let verts: Vec<usize> = order.iter().map(|&i| orig[i]).collect();
            let anchor_list = l.get(verts[0]);
            let mut done = false;
            for first in anchor_list.subsets(m) {
                if let Some(layers) = build_path_table(l, &verts, m, first) {
                    if let Some(last_idx) = layers
                        .last()
                        .unwrap()
                        .iter()
                        .position(|&(s, _)| s.is_disjoint(first))
                    {
                        walk_back(&layers, last_idx, &mut phi, &verts);
                        done = true;
                        break;
                    }
                }
            }
            if !done {
                return Ok(None);
            }
            continue;
        }
        // Path component (possibly a single vertex).
        let verts: Vec<usize> = path_order(&cg).iter().map(|&i| orig[i]).collect();
        let head = *verts.first().unwrap();
        let tail = *verts.last().unwrap();
        let head_attach: Vec<usize> = g.neighbors(head).iter().copied().filter(|&u| is_branch[u]).collect();
        let tail_attach: Vec<usize> = if verts.len() == 1 {
            Vec::new()
        } else {
            g.neighbors(tail).iter().copied().filter(|&u| is_branch[u]).collect()
        };
        let mut tables = BTreeMap::new();
        for first in l.get(head).subsets(m) {
            if let Some(layers) = build_path_table(l, &verts, m, first) {
                tables.insert(first, layers);
            }
        }
        if tables.is_empty() {
            return Ok(None);
        }
        paths.push(PathComponent { verts, head_attach, tail_attach, tables });
    }

    // Enumerate colorings of the branch vertices; for each, check that every
    // path has a compatible (first, last) table entry.
    let mut order = branch.clone();
    order.sort_unstable();
    let mut chosen: BTreeMap<usize, ColorSet> = BTreeMap::new();
    if !assign_branches(g, l, m, &order, 0, &mut chosen, &paths) {
        return Ok(None);
    }
    for (&v, &s) in &chosen {
        phi[v] = s;
    }
    for p in &paths {
        let head_block = block_of(&chosen, &p.head_attach);
        let tail_block = block_of(&chosen, &p.tail_attach);
        let (first, layers) = p
            .tables
            .iter()
            .find(|(first, layers)| {
                first.is_disjoint(head_block)
                    && layers
                        .last()
                        .unwrap()
                        .iter()
                        .any(|&(s, _)| s.is_disjoint(tail_block))
            })
            .expect("assign_branches validated every path");
        let last_idx = layers
            .last()
            .unwrap()
            .iter()
            .position(|&(s, _)| s.is_disjoint(tail_block))
            .unwrap();
        debug_assert!(first.is_disjoint(head_block));
        walk_back(layers, last_idx, &mut phi, &p.verts);
    }

    let coloring = MultiColoring { sets: phi, fold: m };
    debug_assert!(validate(g, l, m, &coloring).is_ok());
    Ok(Some(coloring))
}

fn block_of(chosen: &BTreeMap<usize, ColorSet>, attach: &[usize]) -> ColorSet {
    attach
        .iter()
        .fold(ColorSet::EMPTY, |acc, v| acc.union(chosen[v]))
}

fn assign_branches(
    g: &Graph,
    l: &ListAssignment,
    m: usize,
    order: &[usize],
    i: usize,
    chosen: &mut BTreeMap<usize, ColorSet>,
    paths: &[PathComponent],
) -> bool {
    if i == order.len() {
        return paths.iter().all(|p| {
            let head_block = block_of(chosen, &p.head_attach);
            let tail_block = block_of(chosen, &p.tail_attach);
            p.tables.iter().any(|(first, layers)| {
                first.is_disjoint(head_block)
                    && layers
                        .last()
                        .unwrap()
                        .iter()
                        .any(|&(s, _)| s.is_disjoint(tail_block))
            })
        });
    }
    let v = order[i];
    for s in l.get(v).subsets(m) {
        let ok = g
            .neighbors(v)
            .iter()
            .all(|u| chosen.get(u).map_or(true, |t| t.is_disjoint(s)));
        if !ok {
            continue;
        }
        chosen.insert(v, s);
        if assign_branches(g, l, m, order, i + 1, chosen, paths) {
            return true;
        }
        chosen.remove(&v);
    }
    false
}

/// Vertex order 0..n around a graph known to be a cycle (local indices).
fn cycle_order(cg: &Graph) -> Vec<usize> {
    let n = cg.n();
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    while order.len() < n {
        let cur = *order.last().unwrap();
        let next = cg
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&u| u != prev)
            .expect("cycle vertex has two neighbors");
        order.push(next);
        prev = cur;
    }
    order
}

/// Vertex order along a graph known to be a path (local indices), starting
/// from the smaller endpoint.
fn path_order(cg: &Graph) -> Vec<usize> {
    let n = cg.n();
    if n == 1 {
        return vec![0];
    }
    let start = (0..n).find(|&v| cg.degree(v) == 1).expect("path has an endpoint");
    let mut order = vec![start];
    let mut prev = usize::MAX;
    while order.len() < n {
        let cur = *order.last().unwrap();
        let next = cg
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&u| u != prev)
            .expect("path continues");
        order.push(next);
        prev = cur;
    }
    order
}

/// Expand a 2-assignment into the m-duplicated 2m-assignment: color `c`
/// becomes the block `{(c-1)m+1, ..., cm}`.
pub fn duplicate_lists(l2: &ListAssignment, m: usize) -> Result<ListAssignment, Error> {
    if m == 0 {
        return Err(Error::BadListAssignment("duplication factor must be positive".into()));
    }
    let max = l2.pot().max_color().unwrap_or(0) as usize;
    if max * m > 32 {
        return Err(Error::Unsupported(format!(
            "duplicating colors up to {} by {} exceeds the 32-color universe",
            max, m
        )));
    }
    let lists = l2
        .lists()
        .iter()
        .map(|&s| {
            ColorSet::from_colors(s.iter().flat_map(|c| {
                let base = (c as usize - 1) * m;
                (1..=m).map(move |i| (base + i) as u8)
            }))
        })
        .collect();
    ListAssignment::new(lists, l2.list_size() * m)
}

/// Project an m-fold coloring of the m-duplicated lists back to a proper
/// 1-fold coloring of the original 2-assignment by majority vote inside each
/// vertex's two blocks. Requires odd `m` so no vote ties.
pub fn majority_project(
    g: &Graph,
    l2: &ListAssignment,
    m: usize,
    phi: &MultiColoring,
) -> Result<MultiColoring, Error> {
    if m % 2 == 0 {
        return Err(Error::Unsupported(format!(
            "majority projection needs odd duplication factor, got {}",
            m
        )));
    }
    if l2.list_size() != 2 {
        return Err(Error::BadListAssignment(format!(
            "majority projection expects 2-color lists, got {}",
            l2.list_size()
        )));
    }
    let duplicated = duplicate_lists(l2, m)?;
    if let Err(v) = validate(g, &duplicated, m, phi) {
        return Err(Error::BadWitness(format!(
            "input is not a proper {}-fold coloring of the duplicated lists: {}",
            m, v
        )));
    }
    let block = |c: u8| {
        ColorSet::from_colors((1..=m).map(|i| ((c as usize - 1) * m + i) as u8))
    };
    let mut sets = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let mut colors = l2.get(v).iter();
        let (a, b) = (colors.next().unwrap(), colors.next().unwrap());
        let votes_a = phi.get(v).intersect(block(a)).len();
        let votes_b = phi.get(v).intersect(block(b)).len();
        sets.push(ColorSet::single(if votes_a > votes_b { a } else { b }));
    }
    Ok(MultiColoring { sets, fold: 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue;
    use crate::color::parse_color_set;
    use crate::graph::by_name;

    fn sets(names: &[&str]) -> Vec<ColorSet> {
        let mut v: Vec<ColorSet> = names.iter().map(|s| parse_color_set(s).unwrap()).collect();
        v.sort();
        v
    }

    fn coloring(names: &[&str]) -> MultiColoring {
        let sets: Vec<ColorSet> = names.iter().map(|s| parse_color_set(s).unwrap()).collect();
        let fold = sets[0].len();
        MultiColoring { sets, fold }
    }

    #[test]
    fn validate_flags_each_violation() {
        let g = by_name("cycle(4)").unwrap();
        let l = ListAssignment::constant(4, 4);
        assert!(validate(&g, &l, 2, &coloring(&["12", "34", "12", "34"])).is_ok());
        assert_eq!(
            validate(&g, &l, 2, &coloring(&["12", "12", "34", "34"])),
            Err(Violation::EdgeOverlap { u: 0, v: 1 })
        );
        assert_eq!(
            validate(&g, &l, 2, &coloring(&["15", "34", "12", "34"])),
            Err(Violation::NotInList { vertex: 0 })
        );
        assert_eq!(
            validate(&g, &l, 2, &coloring(&["123", "4", "12", "34"])),
            Err(Violation::Fold { vertex: 0, got: 3, want: 2 })
        );
    }

    #[test]
    fn even_cycle_complement_count() {
        let g = by_name("cycle(4)").unwrap();
        let l = ListAssignment::constant(4, 4);
        assert_eq!(count_bfold_colorings(&g, &l, 2), 6);
        let phi = find_bfold_coloring(&g, &l, 2, None).unwrap().unwrap();
        assert!(validate(&g, &l, 2, &phi).is_ok());
        // Every coloring alternates a set with its complement.
        assert_eq!(phi.get(0), phi.get(2));
        assert_eq!(phi.get(1), l.get(1).minus(phi.get(0)));
    }

    #[test]
    fn c4_forcing_matches_catalogue_claim() {
        let e = catalogue::entry("c4-four-out").unwrap();
        let l = e.assignment.as_ref().unwrap();
        let pinned = PartialConstraint::new().force(0, parse_color_set("24").unwrap());
        assert!(find_bfold_coloring(&e.graph, l, 2, Some(&pinned)).unwrap().is_none());
        let report = forcing_analysis(&e.graph, l, 0, 2).unwrap();
        assert_eq!(report.allowed, sets(&["12", "13", "14", "23"]));
        assert_eq!(report.shape, ForcingShape::FourOut);
        assert_eq!(report.excluded(l, 2), sets(&["24", "34"]));
    }

    #[test]
    fn bad_figures_have_no_coloring() {
        for id in ["c4-pair-cut-near-near", "k25", "theta333"] {
            let e = catalogue::entry(id).unwrap();
            let l = e.assignment.as_ref().unwrap();
            assert!(
                find_bfold_coloring(&e.graph, l, 2, None).unwrap().is_none(),
                "{} should admit no coloring",
                id
            );
        }
    }

    #[test]
    fn k23_forcing_shapes() {
        let e = catalogue::entry("k23-three-in").unwrap();
        let l = e.assignment.as_ref().unwrap();
        assert_eq!(count_bfold_colorings(&e.graph, l, 2), 36);
        let inner = forcing_analysis(&e.graph, l, 3, 2).unwrap();
        assert_eq!(inner.allowed, sets(&["14", "24", "34"]));
        assert_eq!(inner.shape, ForcingShape::ThreeIn);
        let outer = forcing_analysis(&e.graph, l, 0, 2).unwrap();
        assert_eq!(outer.allowed, sets(&["12", "13", "23"]));
        assert_eq!(outer.shape, ForcingShape::ThreeOut);
    }

    #[test]
    fn shape_taxonomy_edges() {
        let list = parse_color_set("1234").unwrap();
        assert_eq!(classify_shape(&sets(&["12", "34", "13"]), list, 2), ForcingShape::ThreeMixed);
        assert_eq!(classify_shape(&sets(&["12", "34"]), list, 2), ForcingShape::TwoComp);
        assert_eq!(classify_shape(&sets(&["12", "13"]), list, 2), ForcingShape::TwoIn);
        assert_eq!(
            classify_shape(&sets(&["13", "14", "23", "24"]), list, 2),
            ForcingShape::FourOther
        );
        assert_eq!(classify_shape(&sets(&["36"]), parse_color_set("3456").unwrap(), 2), ForcingShape::One);
        assert_eq!(classify_shape(&[], list, 2), ForcingShape::Uncolorable);
    }

    #[test]
    fn propagation_forces_complements_around_c4() {
        let g = by_name("cycle(4)").unwrap();
        let l = ListAssignment::constant(4, 4);
        let pin = PartialConstraint::new().force(0, parse_color_set("12").unwrap());
        let prop = propagate_forced(&g, &l, 2, &pin).unwrap();
        assert_eq!(prop.contradiction, None);
        let forced: BTreeMap<usize, ColorSet> = prop.forced.iter().copied().collect();
        assert_eq!(forced[&1], parse_color_set("34").unwrap());
        assert_eq!(forced[&3], parse_color_set("34").unwrap());
        assert_eq!(forced[&2], parse_color_set("12").unwrap());
    }

    #[test]
    fn propagation_detects_contradiction() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let l = ListAssignment::constant(2, 4);
        let pin = PartialConstraint::new()
            .force(0, parse_color_set("12").unwrap())
            .force(1, parse_color_set("13").unwrap());
        let prop = propagate_forced(&g, &l, 2, &pin).unwrap();
        assert!(prop.contradiction.is_some());
    }

    #[test]
    fn constraint_rejects_unknown_vertex() {
        let g = by_name("cycle(4)").unwrap();
        let l = ListAssignment::constant(4, 4);
        let pin = PartialConstraint::new().force(9, parse_color_set("12").unwrap());
        assert!(find_bfold_coloring(&g, &l, 2, Some(&pin)).is_err());
    }

    #[test]
    fn reduce_pot_leaves_small_pots_alone() {
        let g = by_name("cycle(4)").unwrap();
        let l = ListAssignment::constant(4, 4);
        let out = reduce_pot(&g, &l, &[0, 1], 8).unwrap();
        assert_eq!(out, l);
    }

    #[test]
    fn reduce_pot_eliminates_isolated_color() {
        // Removing {0, 2} from this graph leaves the paths 3-1-4 and 5-7-6.
        let g = catalogue::figure_graph("k33e-diagonal-subdivided").unwrap();
        let mut l = ListAssignment::constant(8, 4);
        l.set(3, parse_color_set("2349").unwrap()).unwrap();
        assert_eq!(l.pot().len(), 5);
        // Shrink the budget to force a rewrite of color 9, which occurs only
        // at vertex 3 and is isolated there.
        let out = reduce_pot(&g, &l, &[0, 2], 4).unwrap();
        assert!(out.pot().len() <= 4);
        assert!(!out.pot().contains(9));
        // Colorability must survive the reduction in the mapped direction.
        let before = find_bfold_coloring(&g, &l, 2, None).unwrap().is_some();
        let after = find_bfold_coloring(&g, &out, 2, None).unwrap().is_some();
        assert!(!after || before);
    }

    #[test]
    fn reduce_pot_checks_structure() {
        let g = by_name("cycle(8)").unwrap();
        let l = ListAssignment::constant(8, 4);
        // Removing two antipodal vertices of C8 leaves two 3-vertex paths
        // whose middles have no outside neighbors, so this x is accepted.
        assert!(reduce_pot(&g, &l, &[0, 4], 8).is_ok());
        // A single removal vertex leaves a 7-vertex path: rejected.
        let err = reduce_pot(&g, &l, &[0], 8).unwrap_err();
        assert!(err.to_string().contains("{0}"));
    }

    #[test]
    fn path_dp_matches_backtracking_on_long_cycle() {
        let g = by_name("cycle(100)").unwrap();
        let l = ListAssignment::constant(100, 4);
        let phi = path_dp_solve(&g, &l, 2).unwrap().unwrap();
        assert!(validate(&g, &l, 2, &phi).is_ok());
    }

    #[test]
    fn path_dp_sees_unsolvable_block_through_long_tail() {
        // A K_{2,5} carrying an uncolorable assignment, joined by a 6-edge
        // path to a C4: still uncolorable no matter the remaining lists.
        let e = catalogue::entry("k25").unwrap();
        let g = by_name("glued(K(2,5)@2, cycle(4), 6)").unwrap();
        let mut lists = e.assignment.as_ref().unwrap().lists().to_vec();
        lists.extend(vec![ColorSet::first(4); g.n() - lists.len()]);
        let l = ListAssignment::new(lists, 4).unwrap();
        assert!(path_dp_solve(&g, &l, 2).unwrap().is_none());
        assert!(find_bfold_coloring(&g, &l, 2, None).unwrap().is_none());
    }

    #[test]
    fn path_dp_rejects_many_branch_vertices() {
        let k33 = by_name("K(3,3)").unwrap();
        let g = k33.disjoint_union(&k33);
        let l = ListAssignment::constant(g.n(), 4);
        let err = path_dp_solve(&g, &l, 2).unwrap_err();
        assert!(err.to_string().contains("find_bfold_coloring"));
    }

    #[test]
    fn majority_projection_roundtrip() {
        let g = by_name("cycle(4)").unwrap();
        let two = ListAssignment::new(
            vec![
                parse_color_set("12").unwrap(),
                parse_color_set("34").unwrap(),
                parse_color_set("12").unwrap(),
                parse_color_set("34").unwrap(),
            ],
            2,
        )
        .unwrap();
        // m = 1 projects a coloring to itself.
        let phi1 = find_bfold_coloring(&g, &two, 1, None).unwrap().unwrap();
        assert_eq!(majority_project(&g, &two, 1, &phi1).unwrap(), phi1);
        // m = 3: find any 3-fold coloring of the duplicated lists, project,
        // and check properness against the 2-assignment.
        let dup = duplicate_lists(&two, 3).unwrap();
        assert_eq!(dup.list_size(), 6);
        let phi3 = find_bfold_coloring(&g, &dup, 3, None).unwrap().unwrap();
        let down = majority_project(&g, &two, 3, &phi3).unwrap();
        assert!(validate(&g, &two, 1, &down).is_ok());
        assert!(majority_project(&g, &two, 2, &phi3).is_err());
    }

    #[test]
    fn relabeling_moves_allowed_sets() {
        let e = catalogue::entry("k23-three-in").unwrap();
        let l = e.assignment.as_ref().unwrap();
        let swap = ColorPerm::from_pairs([(1, 5), (5, 1)]).unwrap();
        let relabeled = relabel_colors(l, &swap).unwrap();
        let before = forcing_analysis(&e.graph, l, 3, 2).unwrap();
        let after = forcing_analysis(&e.graph, &relabeled, 3, 2).unwrap();
        let mut mapped: Vec<ColorSet> = before.allowed.iter().map(|s| s.permuted(&swap)).collect();
        mapped.sort();
        assert_eq!(after.allowed, mapped);
        // Composition law on a second permutation.
        let tau = ColorPerm::from_pairs([(2, 3), (3, 2)]).unwrap();
        let composed = relabel_colors(&relabeled, &tau).unwrap();
        for v in 0..5 {
            assert_eq!(composed.get(v), l.get(v).permuted(&swap).permuted(&tau));
        }
    }
}
