//! Flattening moves on list assignments, flatness testing, exhaustive
//! enumeration of flat assignments up to isomorphism, and the search-based
//! choosability verifier built on top of it.
//!
//! A *flattening move* replaces a color `alpha` by a color `beta` on one
//! connected component `C` of the subgraph spanned by the vertices whose
//! lists contain `alpha`; the move is legal when `beta` is in the pot but in
//! none of the lists on `C`. Moves never enlarge the pot and never increase
//! the total number of color-class components, so the pair
//! `(|pot|, total components)` only moves downward lexicographically, and
//! colorings transfer backward through moves (see [`lift_coloring`]).
//!
//! An assignment is *flat* when no sequence of flattening moves improves
//! that pair. Testing this exactly is impractical, so flatness is tested
//! operationally: no improving sequence of length at most `depth` (default
//! 2), and no two color classes on disjoint vertex sets (such classes always
//! merge eventually, but the merge can be longer than any fixed depth, so it
//! is checked directly). A single move improves the objective only if it
//! removes a color's last component or lands next to an existing component
//! of the replacement color, and no single move ever worsens it — which
//! makes the bounded search cheap.
//!
//! Flatness matters because it is a *covering* notion: every assignment
//! reduces by moves to one the filter accepts, and colorings pull back along
//! the reduction. [`verify_choosable`] therefore decides choosability over a
//! pot bound by solving one representative per flat class, and claim sweeps
//! over the census extend universally.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::color::{ColorSet, ListAssignment, MultiColoring};
use crate::error::Error;
use crate::graph::{automorphisms, Graph};
use crate::solve::{color_components, find_bfold_coloring, forcing_analysis, validate, ForcingShape};

/// Longest improving move sequence searched for by default when testing
/// flatness. Raising it makes the filter stricter (and slower); the known
/// enumerations are already exact at depth 2.
pub const DEFAULT_FLATTEN_DEPTH: usize = 2;

/// Replace `color` by `replacement` on `component`, which must be one whole
/// connected component of the subgraph spanned by the lists containing
/// `color`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatteningMove {
    pub color: u8,
    pub component: Vec<usize>,
    pub replacement: u8,
}

/// One color of an assignment, seen as a subgraph: the vertices whose lists
/// contain it and the connected components they form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorClassView {
    pub color: u8,
    pub vertices: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

/// Every color of the pot as a [`ColorClassView`], in ascending color order.
pub fn color_classes(g: &Graph, l: &ListAssignment) -> Result<Vec<ColorClassView>, Error> {
    check_counts(g, l)?;
    let lists = l.lists();
    Ok(pot_of(lists)
        .iter()
        .map(|c| {
            let components = color_components(g, lists, c);
            let mut vertices: Vec<usize> = components.iter().flatten().copied().collect();
            vertices.sort_unstable();
            ColorClassView {
                color: c,
                vertices,
                components,
            }
        })
        .collect())
}

fn check_counts(g: &Graph, l: &ListAssignment) -> Result<(), Error> {
    if l.vertex_count() != g.n() {
        return Err(Error::BadListAssignment(format!(
            "assignment covers {} vertices, graph has {}",
            l.vertex_count(),
            g.n()
        )));
    }
    Ok(())
}

fn pot_of(lists: &[ColorSet]) -> ColorSet {
    lists
        .iter()
        .fold(ColorSet::default(), |acc, &l| acc.union(l))
}

/// `(|pot|, total number of color-class components)` — the quantity that
/// flattening moves drive down.
fn objective(g: &Graph, lists: &[ColorSet]) -> (usize, usize) {
    let pot = pot_of(lists);
    let comps: usize = pot
        .iter()
        .map(|c| color_components(g, lists, c).len())
        .sum();
    (pot.len(), comps)
}

/// All legal moves, in a fixed order: color ascending, component by lowest
/// vertex, replacement ascending.
pub fn legal_moves(g: &Graph, l: &ListAssignment) -> Result<Vec<FlatteningMove>, Error> {
    check_counts(g, l)?;
    Ok(legal_moves_raw(g, l.lists()))
}

fn legal_moves_raw(g: &Graph, lists: &[ColorSet]) -> Vec<FlatteningMove> {
    let pot = pot_of(lists);
    let mut moves = Vec::new();
    for alpha in pot.iter() {
        for comp in color_components(g, lists, alpha) {
            let used = comp
                .iter()
                .fold(ColorSet::default(), |acc, &v| acc.union(lists[v]));
            for beta in pot.minus(used).iter() {
                moves.push(FlatteningMove {
                    color: alpha,
                    component: comp.clone(),
                    replacement: beta,
                });
            }
        }
    }
    moves
}

fn swap_on(lists: &[ColorSet], vertices: &[usize], from: u8, to: u8) -> Vec<ColorSet> {
    let mut next = lists.to_vec();
    for &v in vertices {
        next[v] = next[v].without(from).with(to);
    }
    next
}

fn apply_inplace(lists: &mut [ColorSet], mv: &FlatteningMove) {
    for &v in &mv.component {
        lists[v] = lists[v].without(mv.color).with(mv.replacement);
    }
}

/// Validate a flattening move against an assignment and apply it.
///
/// Errors if the component is not one whole connected component of the
/// subgraph spanned by `mv.color`, or if the replacement color is outside
/// the pot or already appears in a list on the component.
pub fn apply_move(g: &Graph, l: &ListAssignment, mv: &FlatteningMove) -> Result<ListAssignment, Error> {
    check_counts(g, l)?;
    let lists = l.lists();
    if mv.component.is_empty() {
        return Err(Error::BadWitness("flattening move has an empty component".into()));
    }
    let mut comp = mv.component.clone();
    comp.sort_unstable();
    comp.dedup();
    if comp.len() != mv.component.len() {
        return Err(Error::BadWitness("flattening move repeats a vertex".into()));
    }
    if let Some(&v) = comp.last() {
        if v >= g.n() {
            return Err(Error::BadWitness(format!(
                "flattening move names vertex {} but the graph has {} vertices",
                v,
                g.n()
            )));
        }
    }
    for &v in &comp {
        if !lists[v].contains(mv.color) {
            return Err(Error::BadWitness(format!(
                "vertex {} does not hold color {}",
                v, mv.color
            )));
        }
    }
    let whole = color_components(g, lists, mv.color)
        .into_iter()
        .find(|c| c.contains(&comp[0]));
    if whole.as_deref() != Some(comp.as_slice()) {
        return Err(Error::BadWitness(format!(
            "vertices {:?} are not a whole component of color {}",
            mv.component, mv.color
        )));
    }
    if !pot_of(lists).contains(mv.replacement) {
        return Err(Error::BadWitness(format!(
            "replacement color {} is not in the pot",
            mv.replacement
        )));
    }
    for &v in &comp {
        if lists[v].contains(mv.replacement) {
            return Err(Error::BadWitness(format!(
                "replacement color {} already appears at vertex {}",
                mv.replacement, v
            )));
        }
    }
    let next = swap_on(lists, &comp, mv.color, mv.replacement);
    Ok(ListAssignment::new(next, l.list_size()).expect("moves preserve list sizes"))
}

/// First move that strictly improves the objective, if any: either the
/// color's only component moves away (the pot shrinks), or the moved
/// component lands next to an existing component of the replacement color
/// (components merge).
fn improving_single(g: &Graph, lists: &[ColorSet]) -> Option<FlatteningMove> {
    let pot = pot_of(lists);
    for alpha in pot.iter() {
        let comps = color_components(g, lists, alpha);
        let lone = comps.len() == 1;
        for comp in comps {
            let used = comp
                .iter()
                .fold(ColorSet::default(), |acc, &v| acc.union(lists[v]));
            let valid = pot.minus(used);
            if valid.is_empty() {
                continue;
            }
            if lone {
                let beta = valid.min_color().unwrap();
                return Some(FlatteningMove {
                    color: alpha,
                    component: comp,
                    replacement: beta,
                });
            }
            let mut fringe = ColorSet::default();
            for &v in &comp {
                for &u in g.neighbors(v) {
                    if !comp.contains(&u) {
                        fringe = fringe.union(lists[u]);
                    }
                }
            }
            if let Some(beta) = valid.intersect(fringe).min_color() {
                return Some(FlatteningMove {
                    color: alpha,
                    component: comp,
                    replacement: beta,
                });
            }
        }
    }
    None
}

/// First move sequence of length at most `depth` whose net effect strictly
/// improves the objective. No single move can worsen the objective, so such
/// a sequence is a chain of neutral moves followed by one improving move.
fn improving_sequence(g: &Graph, lists: &[ColorSet], depth: usize) -> Option<Vec<FlatteningMove>> {
    if let Some(mv) = improving_single(g, lists) {
        return Some(vec![mv]);
    }
    if depth <= 1 {
        return None;
    }
    for mv in legal_moves_raw(g, lists) {
        let next = swap_on(lists, &mv.component, mv.color, mv.replacement);
        debug_assert_eq!(objective(g, &next), objective(g, lists));
        if let Some(mut rest) = improving_sequence(g, &next, depth - 1) {
            rest.insert(0, mv);
            return Some(rest);
        }
    }
    None
}

/// Two colors whose vertex sets do not intersect. Moving one class into the
/// other, component by component, eventually drops a pot color, so a flat
/// assignment has none — but the merge sequence can be longer than the
/// depth bound, so it is tested directly.
fn has_disjoint_class_pair(g: &Graph, lists: &[ColorSet]) -> bool {
    let cols = pot_of(lists).colors();
    for (i, &a) in cols.iter().enumerate() {
        for &b in &cols[i + 1..] {
            if !(0..g.n()).any(|v| lists[v].contains(a) && lists[v].contains(b)) {
                return true;
            }
        }
    }
    false
}

fn is_flat_raw(g: &Graph, lists: &[ColorSet], depth: usize) -> bool {
    !has_disjoint_class_pair(g, lists) && improving_sequence(g, lists, depth.max(1)).is_none()
}

/// Is the assignment flat, at the default search depth?
pub fn is_flat(g: &Graph, l: &ListAssignment) -> Result<bool, Error> {
    is_flat_with_depth(g, l, DEFAULT_FLATTEN_DEPTH)
}

/// Is the assignment flat, searching improving move sequences of length at
/// most `depth` (clamped to at least 1)?
pub fn is_flat_with_depth(g: &Graph, l: &ListAssignment, depth: usize) -> Result<bool, Error> {
    check_counts(g, l)?;
    Ok(is_flat_raw(g, l.lists(), depth))
}

/// Result of flattening: the final assignment and the moves that were
/// applied, in order.
#[derive(Debug, Clone)]
pub struct Flattening {
    pub assignment: ListAssignment,
    pub moves: Vec<FlatteningMove>,
}

/// Drive an assignment down to a flat one by repeatedly applying improving
/// move sequences (default depth).
pub fn flatten(g: &Graph, l: &ListAssignment) -> Result<Flattening, Error> {
    flatten_with_depth(g, l, DEFAULT_FLATTEN_DEPTH)
}

/// Drive an assignment down by improving move sequences of length at most
/// `depth`. Terminates because every applied sequence strictly lowers the
/// objective, which cannot decrease forever.
pub fn flatten_with_depth(g: &Graph, l: &ListAssignment, depth: usize) -> Result<Flattening, Error> {
    check_counts(g, l)?;
    let depth = depth.max(1);
    let mut lists = l.lists().to_vec();
    let mut moves = Vec::new();
    while let Some(seq) = improving_sequence(g, &lists, depth) {
        for mv in seq {
            apply_inplace(&mut lists, &mv);
            moves.push(mv);
        }
    }
    Ok(Flattening {
        assignment: ListAssignment::new(lists, l.list_size()).expect("moves preserve list sizes"),
        moves,
    })
}

/// Pull a coloring of the flattened assignment back to the original one.
///
/// `moves` is the sequence that turned `l` into the flattened assignment
/// (as produced by [`flatten`]); it is replayed forward to recover the flat
/// lists, `phi_flat` is validated against them, and then each move is undone
/// in reverse: wherever a component traded `alpha` for `beta`, a coloring
/// using `beta` there switches back to `alpha`. The map is injective, so
/// distinct flat colorings lift to distinct original colorings.
pub fn lift_coloring(
    g: &Graph,
    l: &ListAssignment,
    moves: &[FlatteningMove],
    phi_flat: &MultiColoring,
) -> Result<MultiColoring, Error> {
    let mut cur = l.clone();
    for mv in moves {
        cur = apply_move(g, &cur, mv)?;
    }
    validate(g, &cur, phi_flat.fold, phi_flat).map_err(|viol| {
        Error::BadWitness(format!(
            "coloring does not fit the flattened assignment: {viol}"
        ))
    })?;
    let mut sets = phi_flat.sets.clone();
    for mv in moves.iter().rev() {
        for &v in &mv.component {
            if sets[v].contains(mv.replacement) {
                sets[v] = sets[v].without(mv.replacement).with(mv.color);
            }
        }
    }
    let phi = MultiColoring {
        sets,
        fold: phi_flat.fold,
    };
    validate(g, l, phi.fold, &phi)
        .map_err(|viol| Error::Internal(format!("lifted coloring failed validation: {viol}")))?;
    Ok(phi)
}

/// Canonical key of an assignment under graph automorphisms and color
/// renaming: the color names are quotiented away by collecting the vertex
/// set of every color as a bitmask and sorting, and the vertex labels by
/// minimizing over all automorphisms. Two assignments get the same key iff
/// one is the other with vertices moved by an automorphism and colors
/// renamed by a bijection.
pub fn canonical_key(g: &Graph, l: &ListAssignment) -> Result<Vec<u64>, Error> {
    check_counts(g, l)?;
    if g.n() > 64 {
        return Err(Error::Unsupported(format!(
            "canonical keys support at most 64 vertices, got {}",
            g.n()
        )));
    }
    let auts = automorphisms(g);
    Ok(canonical_key_with(&auts, l.lists()))
}

fn canonical_key_with(auts: &[Vec<usize>], lists: &[ColorSet]) -> Vec<u64> {
    let pot = pot_of(lists);
    let mut best: Option<Vec<u64>> = None;
    let mut rows: Vec<u64> = Vec::with_capacity(pot.len());
    for aut in auts {
        rows.clear();
        for c in pot.iter() {
            let mut mask = 0u64;
            for (v, lv) in lists.iter().enumerate() {
                if lv.contains(c) {
                    mask |= 1u64 << aut[v];
                }
            }
            rows.push(mask);
        }
        rows.sort_unstable();
        if best.as_ref().map_or(true, |b| rows < *b) {
            best = Some(rows.clone());
        }
    }
    best.unwrap_or_default()
}

/// Flat `a`-assignments with pot at most `pot_bound`, one representative per
/// isomorphism class (graph automorphisms times color renamings).
#[derive(Debug, Clone)]
pub struct FlatCensus {
    pub a: usize,
    pub pot_bound: u8,
    /// Class counts keyed by pot size.
    pub counts: BTreeMap<usize, u64>,
    /// One representative per class: the lexicographically smallest member
    /// generated, sorted by pot size and then by lists.
    pub representatives: Vec<ListAssignment>,
    keys: BTreeSet<Vec<u64>>,
}

impl FlatCensus {
    pub fn class_count(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Does the census contain the class of `l`? (`g` must be the graph the
    /// census was built for.)
    pub fn contains_isomorphic(&self, g: &Graph, l: &ListAssignment) -> Result<bool, Error> {
        Ok(self.keys.contains(&canonical_key(g, l)?))
    }
}

/// Shared state of one enumeration run.
struct Enumerator {
    g: Graph,
    a: usize,
    depth: usize,
    vorder: Vec<usize>,
    pos_of: Vec<usize>,
    auts: Vec<Vec<usize>>,
    /// Candidate lists indexed by the number of colors already in use:
    /// `a`-subsets of the first `min(pot_bound, used + a)` colors whose new
    /// colors form a contiguous run starting right after the used ones.
    /// Every assignment has a color renaming of this shape (rename colors in
    /// order of first appearance along the vertex order), so restricting to
    /// these lists loses no isomorphism class.
    cands: Vec<Vec<ColorSet>>,
}

/// Mutable state while one work unit runs.
struct UnitRun {
    my_unit: usize,
    map: BTreeMap<Vec<u64>, Vec<ColorSet>>,
    ce: Option<Vec<ColorSet>>,
    pruned: u64,
    nodes: u64,
}

struct VerifyCtx {
    b: usize,
    /// Lowest unit index that has produced a counterexample so far; units
    /// above it stop early. Units at or below the final minimum always run
    /// to completion, which keeps the outcome independent of worker count.
    abort: AtomicUsize,
    /// Memo of solver verdicts per canonical key, so that classes straddling
    /// several units are solved once. Only timing depends on who fills it.
    cache: Mutex<HashMap<Vec<u64>, bool>>,
}

struct UnitOut {
    index: usize,
    map: BTreeMap<Vec<u64>, Vec<ColorSet>>,
    ce: Option<Vec<ColorSet>>,
    pruned: u64,
}

impl Enumerator {
    fn new(g: &Graph, a: usize, pot_bound: u8, depth: usize) -> Result<Self, Error> {
        if g.n() == 0 {
            return Err(Error::BadGraph("enumeration needs at least one vertex".into()));
        }
        if g.n() > 16 {
            return Err(Error::Unsupported(format!(
                "flat enumeration supports at most 16 vertices, got {}",
                g.n()
            )));
        }
        if a == 0 {
            return Err(Error::BadListAssignment("list size must be positive".into()));
        }
        if a > 8 {
            return Err(Error::Unsupported(format!(
                "flat enumeration supports list sizes up to 8, got {a}"
            )));
        }
        if (pot_bound as usize) < a {
            return Err(Error::BadListAssignment(format!(
                "pot bound {pot_bound} is below the list size {a}"
            )));
        }
        if pot_bound > 12 {
            return Err(Error::Unsupported(format!(
                "pot bounds above 12 are not supported, got {pot_bound}"
            )));
        }
        let vorder = vertex_order(g);
        let mut pos_of = vec![0usize; g.n()];
        for (i, &v) in vorder.iter().enumerate() {
            pos_of[v] = i;
        }
        let mut cands = Vec::with_capacity(pot_bound as usize + 1);
        for used in 0..=pot_bound {
            let limit = pot_bound.min(used.saturating_add(a as u8));
            let mut here: Vec<ColorSet> = ColorSet::first(limit)
                .subsets(a)
                .into_iter()
                .filter(|s| {
                    let fresh = s.minus(ColorSet::first(used));
                    fresh == ColorSet::first(used + fresh.len() as u8).minus(ColorSet::first(used))
                })
                .collect();
            here.sort_unstable();
            cands.push(here);
        }
        Ok(Enumerator {
            g: g.clone(),
            a,
            depth: depth.max(1),
            vorder,
            pos_of,
            auts: automorphisms(g),
            cands,
        })
    }

    /// Work units: the surviving prefixes over the first two positions of
    /// the vertex order (first position only when the graph is a single
    /// vertex).
    fn units(&self) -> Vec<Vec<ColorSet>> {
        let n = self.g.n();
        let plen = n.min(2);
        let mut lists = vec![ColorSet::default(); n];
        let mut out = Vec::new();
        for &c0 in &self.cands[0] {
            lists[self.vorder[0]] = c0;
            if !self.placement_ok(&lists, 0) {
                continue;
            }
            if plen == 1 {
                out.push(vec![c0]);
                continue;
            }
            let used = c0.max_color().unwrap_or(0);
            for &c1 in &self.cands[used as usize] {
                lists[self.vorder[1]] = c1;
                if self.placement_ok(&lists, 1) {
                    out.push(vec![c0, c1]);
                }
            }
            lists[self.vorder[1]] = ColorSet::default();
        }
        out
    }

    /// Sound pruning after placing the list at position `filled`: if some
    /// vertex `u` now has all of its neighborhood assigned, a color of `u`
    /// missing from every neighbor list spans the lone component `{u}`, and
    /// swapping it for any neighbor color absent from `u`'s own list is an
    /// improving move in every completion — so no completion is flat.
    fn placement_ok(&self, lists: &[ColorSet], filled: usize) -> bool {
        let v = self.vorder[filled];
        let assigned = |u: usize| self.pos_of[u] <= filled;
        for u in std::iter::once(v).chain(self.g.neighbors(v).iter().copied()) {
            if !assigned(u) {
                continue;
            }
            if !self.g.neighbors(u).iter().all(|&w| assigned(w)) {
                continue;
            }
            let fringe = self
                .g
                .neighbors(u)
                .iter()
                .fold(ColorSet::default(), |acc, &w| acc.union(lists[w]));
            if !lists[u].minus(fringe).is_empty() && !fringe.minus(lists[u]).is_empty() {
                return false;
            }
        }
        true
    }

    fn run_unit(&self, prefix: &[ColorSet], index: usize, verify: Option<&VerifyCtx>) -> UnitOut {
        let mut lists = vec![ColorSet::default(); self.g.n()];
        let mut used = 0u8;
        for (i, &c) in prefix.iter().enumerate() {
            lists[self.vorder[i]] = c;
            used = used.max(c.max_color().unwrap_or(0));
        }
        let mut run = UnitRun {
            my_unit: index,
            map: BTreeMap::new(),
            ce: None,
            pruned: 0,
            nodes: 0,
        };
        self.extend(&mut lists, prefix.len(), used, &mut run, verify);
        UnitOut {
            index,
            map: run.map,
            ce: run.ce,
            pruned: run.pruned,
        }
    }

    /// Depth-first extension; returns false when the unit should stop.
    fn extend(
        &self,
        lists: &mut Vec<ColorSet>,
        filled: usize,
        used: u8,
        run: &mut UnitRun,
        verify: Option<&VerifyCtx>,
    ) -> bool {
        run.nodes += 1;
        if let Some(ctx) = verify {
            if run.nodes % 4096 == 0 && ctx.abort.load(Ordering::Relaxed) < run.my_unit {
                return false;
            }
        }
        if filled == self.g.n() {
            return self.finish(lists, run, verify);
        }
        let v = self.vorder[filled];
        for &cand in &self.cands[used as usize] {
            lists[v] = cand;
            if self.placement_ok(lists, filled) {
                let next_used = used.max(cand.max_color().unwrap_or(0));
                if !self.extend(lists, filled + 1, next_used, run, verify) {
                    lists[v] = ColorSet::default();
                    return false;
                }
            } else {
                run.pruned += 1;
            }
        }
        lists[v] = ColorSet::default();
        true
    }

    fn finish(&self, lists: &[ColorSet], run: &mut UnitRun, verify: Option<&VerifyCtx>) -> bool {
        if !is_flat_raw(&self.g, lists, self.depth) {
            run.pruned += 1;
            return true;
        }
        let key = canonical_key_with(&self.auts, lists);
        if let Some(existing) = run.map.get_mut(&key) {
            run.pruned += 1;
            if lists < existing.as_slice() {
                *existing = lists.to_vec();
            }
            return true;
        }
        run.map.insert(key.clone(), lists.to_vec());
        if let Some(ctx) = verify {
            let la = ListAssignment::new(lists.to_vec(), self.a)
                .expect("enumerated lists have uniform size");
            let cached = ctx.cache.lock().unwrap().get(&key).copied();
            let colorable = match cached {
                Some(r) => r,
                None => {
                    let r = find_bfold_coloring(&self.g, &la, ctx.b, None)
                        .expect("enumerated assignments are valid instances")
                        .is_some();
                    ctx.cache.lock().unwrap().insert(key, r);
                    r
                }
            };
            if !colorable {
                run.ce = Some(lists.to_vec());
                ctx.abort.fetch_min(run.my_unit, Ordering::SeqCst);
                return false;
            }
        }
        true
    }
}

/// Degree-descending breadth-first vertex order (ties by id), covering every
/// component. Placing high-degree vertices early closes neighborhoods
/// sooner, which is what feeds the placement prune.
fn vertex_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    loop {
        let start = (0..n)
            .filter(|&v| !seen[v])
            .min_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let Some(start) = start else { break };
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| !seen[u]).collect();
            next.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));
            for u in next {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    order
}

fn run_units(
    en: &Enumerator,
    units: &[Vec<ColorSet>],
    workers: usize,
    verify: Option<&VerifyCtx>,
) -> Vec<UnitOut> {
    let workers = workers.max(1).min(units.len().max(1));
    let next = AtomicUsize::new(0);
    let mut outs: Vec<UnitOut> = if workers <= 1 {
        let mut outs = Vec::new();
        for (i, unit) in units.iter().enumerate() {
            if let Some(ctx) = verify {
                if ctx.abort.load(Ordering::SeqCst) < i {
                    continue;
                }
            }
            outs.push(en.run_unit(unit, i, verify));
        }
        outs
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    s.spawn(|| {
                        let mut mine = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::SeqCst);
                            if i >= units.len() {
                                break;
                            }
                            if let Some(ctx) = verify {
                                if ctx.abort.load(Ordering::SeqCst) < i {
                                    continue;
                                }
                            }
                            mine.push(en.run_unit(&units[i], i, verify));
                        }
                        mine
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        })
    };
    outs.sort_by_key(|o| o.index);
    outs
}

/// Enumerate the flat `a`-assignments of `g` with pot at most `pot_bound`,
/// one representative per isomorphism class.
pub fn enumerate_flat(g: &Graph, a: usize, pot_bound: u8) -> Result<FlatCensus, Error> {
    enumerate_flat_workers(g, a, pot_bound, 1, DEFAULT_FLATTEN_DEPTH)
}

/// [`enumerate_flat`] across `workers` threads with an explicit flatness
/// search depth. The result does not depend on the worker count.
pub fn enumerate_flat_workers(
    g: &Graph,
    a: usize,
    pot_bound: u8,
    workers: usize,
    depth: usize,
) -> Result<FlatCensus, Error> {
    let en = Enumerator::new(g, a, pot_bound, depth)?;
    let units = en.units();
    let outs = run_units(&en, &units, workers, None);
    let mut merged: BTreeMap<Vec<u64>, Vec<ColorSet>> = BTreeMap::new();
    for out in outs {
        for (key, lists) in out.map {
            match merged.get_mut(&key) {
                Some(existing) => {
                    if lists < *existing {
                        *existing = lists;
                    }
                }
                None => {
                    merged.insert(key, lists);
                }
            }
        }
    }
    let keys: BTreeSet<Vec<u64>> = merged.keys().cloned().collect();
    let mut reps: Vec<Vec<ColorSet>> = merged.into_values().collect();
    reps.sort_unstable_by(|x, y| {
        pot_of(x)
            .len()
            .cmp(&pot_of(y).len())
            .then_with(|| x.cmp(y))
    });
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for lists in &reps {
        *counts.entry(pot_of(lists).len()).or_insert(0) += 1;
    }
    let representatives = reps
        .into_iter()
        .map(|lists| ListAssignment::new(lists, a).expect("enumerated lists have uniform size"))
        .collect();
    Ok(FlatCensus {
        a,
        pot_bound,
        counts,
        representatives,
        keys,
    })
}

/// Outcome of [`verify_choosable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every assignment within the pot bound admits a coloring.
    CertifiedChoosable,
    /// A flat assignment with no coloring.
    Counterexample(ListAssignment),
}

impl Verdict {
    pub fn is_choosable(&self) -> bool {
        matches!(self, Verdict::CertifiedChoosable)
    }
}

/// Machine-checkable outcome of the exhaustive search: the instance, the
/// verdict, and enumeration statistics. `visited` counts the distinct flat
/// isomorphism classes examined; `pruned` counts rejected candidates
/// (placement prunes, non-flat completions, and duplicate classes).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChoosabilityCertificate {
    pub graph: Graph,
    pub a: usize,
    pub b: usize,
    pub pot_bound: u8,
    pub verdict: Verdict,
    pub visited: u64,
    pub pruned: u64,
}

/// Decide `(a, b)`-choosability restricted to assignments with pot at most
/// `pot_bound` by enumerating flat classes and solving each once.
///
/// Every assignment reduces by flattening moves to a flat one without
/// growing its pot, and colorings transfer backward along the reduction — so
/// when flat pots are known to stay within the bound (they stay within `2a`
/// for the graphs of interest), the verdict decides `(a, b)`-choosability
/// outright.
pub fn verify_choosable(g: &Graph, a: usize, b: usize, pot_bound: u8) -> Result<ChoosabilityCertificate, Error> {
    verify_choosable_workers(g, a, b, pot_bound, 1, DEFAULT_FLATTEN_DEPTH)
}

/// [`verify_choosable`] across `workers` threads with an explicit flatness
/// search depth. Certificates do not depend on the worker count: work is
/// split into units by the first two lists, a counterexample ends only its
/// own unit plus units of higher index, and the reported counterexample is
/// the first one found in the lowest such unit.
pub fn verify_choosable_workers(
    g: &Graph,
    a: usize,
    b: usize,
    pot_bound: u8,
    workers: usize,
    depth: usize,
) -> Result<ChoosabilityCertificate, Error> {
    if b == 0 || b > a {
        return Err(Error::BadListAssignment(format!(
            "fold {b} must be between 1 and the list size {a}"
        )));
    }
    let en = Enumerator::new(g, a, pot_bound, depth)?;
    let units = en.units();
    let ctx = VerifyCtx {
        b,
        abort: AtomicUsize::new(usize::MAX),
        cache: Mutex::new(HashMap::new()),
    };
    let outs = run_units(&en, &units, workers, Some(&ctx));
    let cut = outs
        .iter()
        .filter(|o| o.ce.is_some())
        .map(|o| o.index)
        .min();
    let mut keys: BTreeSet<&Vec<u64>> = BTreeSet::new();
    let mut pruned = 0u64;
    let mut counterexample = None;
    for out in &outs {
        if let Some(cut) = cut {
            if out.index > cut {
                continue;
            }
            if out.index == cut {
                counterexample = out.ce.clone();
            }
        }
        keys.extend(out.map.keys());
        pruned += out.pruned;
    }
    let verdict = match counterexample {
        Some(lists) => Verdict::Counterexample(
            ListAssignment::new(lists, a).expect("enumerated lists have uniform size"),
        ),
        None => Verdict::CertifiedChoosable,
    };
    Ok(ChoosabilityCertificate {
        graph: g.clone(),
        a,
        b,
        pot_bound,
        verdict,
        visited: keys.len() as u64,
        pruned,
    })
}

/// Result of sweeping a forcing claim over the flat census: how many checks
/// ran and a description of every violation (empty means the claim holds).
#[derive(Debug, Clone, Serialize)]
pub struct ClaimCheck {
    pub description: String,
    pub checks: u64,
    pub violations: Vec<String>,
}

impl ClaimCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that every `a`-assignment with pot at most `pot_bound` leaves at
/// least `min_allowed` b-fold sets available at `vertex` (or at every vertex
/// when `None`).
///
/// Sweeping the flat census suffices: reducing an assignment by a move maps
/// each vertex's allowed sets injectively, so a vertex never allows fewer
/// sets under the original assignment than under its reduction.
/// Representatives stand in for their whole class because the sweep covers
/// the full automorphism orbit of the target vertex.
pub fn verify_forcing_claims(
    g: &Graph,
    a: usize,
    b: usize,
    vertex: Option<usize>,
    pot_bound: u8,
    min_allowed: usize,
) -> Result<ClaimCheck, Error> {
    if let Some(v) = vertex {
        if v >= g.n() {
            return Err(Error::BadGraph(format!(
                "vertex {} out of range for a graph on {} vertices",
                v,
                g.n()
            )));
        }
    }
    let census = enumerate_flat(g, a, pot_bound)?;
    let targets: Vec<usize> = match vertex {
        None => (0..g.n()).collect(),
        Some(v) => {
            let auts = automorphisms(g);
            let orbit: BTreeSet<usize> = auts.iter().map(|aut| aut[v]).collect();
            orbit.into_iter().collect()
        }
    };
    let mut checks = 0u64;
    let mut violations = Vec::new();
    for rep in &census.representatives {
        for &v in &targets {
            checks += 1;
            let report = forcing_analysis(g, rep, v, b)?;
            if report.allowed.len() < min_allowed {
                violations.push(format!(
                    "assignment {:?} allows only {} set(s) at vertex {}",
                    rep,
                    report.allowed.len(),
                    v
                ));
            }
        }
    }
    Ok(ClaimCheck {
        description: format!(
            "every {a}-assignment with pot at most {pot_bound} allows at least \
             {min_allowed} {b}-fold set(s) at {}",
            match vertex {
                Some(v) => format!("vertex {v} (up to symmetry)"),
                None => "every vertex".to_string(),
            }
        ),
        checks,
        violations,
    })
}

/// The full battery of forcing facts about the 4-cycle with 4-lists and
/// 2-fold colorings, swept over the flat census:
///
/// - every vertex allows at least four of its six pairs;
/// - when exactly four are allowed, the two excluded pairs share a color;
/// - forbidding two intersecting pairs at a vertex still leaves colorings
///   whose restrictions to the opposite vertex take at least three values,
///   or exactly two values that are disjoint pairs.
pub fn verify_c4_strong_claims() -> Result<ClaimCheck, Error> {
    let g = crate::graph::by_name("cycle(4)")?;
    let census = enumerate_flat(&g, 4, 8)?;
    let mut checks = 0u64;
    let mut violations = Vec::new();
    for rep in &census.representatives {
        for v1 in 0..4 {
            checks += 1;
            let report = forcing_analysis(&g, rep, v1, 2)?;
            if report.allowed.len() < 4 {
                violations.push(format!(
                    "assignment {:?} allows only {} pair(s) at vertex {}",
                    rep,
                    report.allowed.len(),
                    v1
                ));
            } else if report.allowed.len() == 4 && report.shape != ForcingShape::FourOut {
                violations.push(format!(
                    "assignment {:?} allows four pairs at vertex {} but excludes {:?}",
                    rep,
                    v1,
                    report.excluded(rep, 2)
                ));
            }
            let v3 = (v1 + 2) % 4;
            let pairs = rep.get(v1).subsets(2);
            for (i, &s) in pairs.iter().enumerate() {
                for &t in &pairs[i + 1..] {
                    if s.intersect(t).is_empty() {
                        continue;
                    }
                    checks += 1;
                    let cons = crate::solve::PartialConstraint::new()
                        .forbid(v1, s)
                        .forbid(v1, t);
                    let survivors =
                        crate::solve::enumerate_bfold_colorings(&g, rep, 2, Some(&cons))?;
                    let seen: BTreeSet<ColorSet> =
                        survivors.iter().map(|phi| phi.get(v3)).collect();
                    let spread = seen.len() >= 3
                        || (seen.len() == 2 && {
                            let two: Vec<ColorSet> = seen.iter().copied().collect();
                            two[0].is_disjoint(two[1])
                        });
                    if !spread {
                        violations.push(format!(
                            "assignment {:?}: forbidding {} and {} at vertex {} pins the \
                             opposite vertex to {:?}",
                            rep, s, t, v1, seen
                        ));
                    }
                }
            }
        }
    }
    Ok(ClaimCheck {
        description: "4-assignments of the 4-cycle: at least four pairs allowed \
                      everywhere, four allowed only with sharing excluded pairs, and \
                      two forbidden intersecting pairs never pin the opposite vertex"
            .to_string(),
        checks,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::parse_color_set;
    use crate::graph::by_name;
    use crate::solve::enumerate_bfold_colorings;

    fn lists(spec: &[&str]) -> ListAssignment {
        let sets: Vec<ColorSet> = spec.iter().map(|s| parse_color_set(s).unwrap()).collect();
        let size = sets[0].len();
        ListAssignment::new(sets, size).unwrap()
    }

    #[test]
    fn apply_move_swaps_a_component() {
        let g = by_name("cycle(4)").unwrap();
        let l = lists(&["1234", "1234", "1256", "1256"]);
        let mv = FlatteningMove {
            color: 5,
            component: vec![2, 3],
            replacement: 3,
        };
        let next = apply_move(&g, &l, &mv).unwrap();
        assert_eq!(next, lists(&["1234", "1234", "1236", "1236"]));

        let bad_beta = FlatteningMove {
            color: 5,
            component: vec![2, 3],
            replacement: 1,
        };
        assert!(apply_move(&g, &l, &bad_beta).is_err());

        let partial = FlatteningMove {
            color: 5,
            component: vec![2],
            replacement: 3,
        };
        assert!(apply_move(&g, &l, &partial).is_err());

        let not_held = FlatteningMove {
            color: 5,
            component: vec![1, 2],
            replacement: 3,
        };
        assert!(apply_move(&g, &l, &not_held).is_err());

        let outside_pot = FlatteningMove {
            color: 5,
            component: vec![2, 3],
            replacement: 9,
        };
        assert!(apply_move(&g, &l, &outside_pot).is_err());
    }

    #[test]
    fn flatten_eliminates_a_spare_color() {
        let g = by_name("cycle(4)").unwrap();
        let l = lists(&["1234", "1234", "1234", "1235"]);
        let flat = flatten(&g, &l).unwrap();
        assert_eq!(flat.assignment.pot().len(), 4);
        assert_eq!(flat.moves.len(), 1);
        assert!(is_flat(&g, &flat.assignment).unwrap());
        assert!(!is_flat(&g, &l).unwrap());
        // The result is the constant assignment up to color renaming.
        assert_eq!(
            canonical_key(&g, &flat.assignment).unwrap(),
            canonical_key(&g, &lists(&["1234", "1234", "1234", "1234"])).unwrap()
        );
    }

    #[test]
    fn known_flat_assignments_admit_no_moves() {
        let g = by_name("cycle(4)").unwrap();
        let l = lists(&["1256", "1345", "3456", "2346"]);
        assert!(legal_moves(&g, &l).unwrap().is_empty());
        assert!(is_flat(&g, &l).unwrap());
        let flat = flatten(&g, &l).unwrap();
        assert!(flat.moves.is_empty());
        assert_eq!(flat.assignment, l);
    }

    #[test]
    fn lift_maps_flat_colorings_back_injectively() {
        let g = by_name("cycle(4)").unwrap();
        let l = lists(&["1234", "1234", "1234", "1235"]);
        let flat = flatten(&g, &l).unwrap();
        let colorings = enumerate_bfold_colorings(&g, &flat.assignment, 2, None).unwrap();
        assert!(!colorings.is_empty());
        let mut lifted = BTreeSet::new();
        for phi in &colorings {
            let up = lift_coloring(&g, &l, &flat.moves, phi).unwrap();
            validate(&g, &l, 2, &up).unwrap();
            lifted.insert(up.sets.clone());
        }
        assert_eq!(lifted.len(), colorings.len());
    }

    #[test]
    fn census_matches_known_counts_for_c4() {
        let g = by_name("cycle(4)").unwrap();
        let census = enumerate_flat(&g, 4, 8).unwrap();
        let expected: BTreeMap<usize, u64> = [(4, 1), (5, 2), (6, 2)].into_iter().collect();
        assert_eq!(census.counts, expected);
        assert_eq!(census.representatives.len(), 5);
        for rep in &census.representatives {
            assert!(is_flat(&g, rep).unwrap());
        }
    }

    #[test]
    fn census_matches_known_counts_for_k23() {
        let g = by_name("K(2,3)").unwrap();
        let census = enumerate_flat(&g, 4, 7).unwrap();
        let expected: BTreeMap<usize, u64> = [(4, 1), (5, 6), (6, 28), (7, 1)].into_iter().collect();
        assert_eq!(census.counts, expected);
        assert_eq!(census.class_count(), 36);
    }

    #[test]
    fn census_includes_the_degenerate_moveless_classes() {
        // Both graphs have one flat pot-6 class whose color classes pair up
        // on identical vertex sets (the lists are a doubled 2-assignment).
        // Each admits no legal move at all — every component's list union
        // exhausts the pot — so it sits in the census alongside the
        // better-known representative with the same pot size.
        let g = by_name("cycle(4)").unwrap();
        let doubled = lists(&["1234", "1234", "1256", "3456"]);
        assert!(legal_moves(&g, &doubled).unwrap().is_empty());
        assert!(is_flat(&g, &doubled).unwrap());
        let census = enumerate_flat(&g, 4, 8).unwrap();
        assert!(census.contains_isomorphic(&g, &doubled).unwrap());
        let other = lists(&["1256", "1345", "3456", "2346"]);
        assert_ne!(
            canonical_key(&g, &doubled).unwrap(),
            canonical_key(&g, &other).unwrap()
        );

        // Vertices 0 and 1 are the degree-three pair.
        let g = by_name("K(2,3)").unwrap();
        let doubled = lists(&["1234", "1256", "1234", "1234", "3456"]);
        assert!(legal_moves(&g, &doubled).unwrap().is_empty());
        assert!(is_flat(&g, &doubled).unwrap());
        let census = enumerate_flat(&g, 4, 7).unwrap();
        assert!(census.contains_isomorphic(&g, &doubled).unwrap());
    }

    #[test]
    fn census_covers_published_representatives() {
        let g = by_name("cycle(4)").unwrap();
        let census = enumerate_flat(&g, 4, 8).unwrap();
        // Pot sizes six, five, five, four — one known member of each class.
        let known = [
            lists(&["1256", "1345", "3456", "2346"]),
            lists(&["1235", "1245", "1345", "2345"]),
            lists(&["1245", "1345", "2345", "2345"]),
            lists(&["1234", "1234", "1234", "1234"]),
        ];
        let mut keys = BTreeSet::new();
        for l in &known {
            assert!(census.contains_isomorphic(&g, l).unwrap());
            keys.insert(canonical_key(&g, l).unwrap());
        }
        assert_eq!(keys.len(), 4);

        let g = by_name("K(2,3)").unwrap();
        let census = enumerate_flat(&g, 4, 7).unwrap();
        // Degree-three vertices first (0, 1), then the degree-two ones.
        let wide = lists(&["1567", "2347", "1234", "2356", "4567"]);
        assert!(census.contains_isomorphic(&g, &wide).unwrap());
        assert!(is_flat(&g, &wide).unwrap());
    }

    #[test]
    fn enumeration_is_worker_invariant() {
        let g = by_name("K(2,3)").unwrap();
        let solo = enumerate_flat_workers(&g, 4, 6, 1, DEFAULT_FLATTEN_DEPTH).unwrap();
        let team = enumerate_flat_workers(&g, 4, 6, 3, DEFAULT_FLATTEN_DEPTH).unwrap();
        assert_eq!(solo.counts, team.counts);
        assert_eq!(solo.representatives, team.representatives);
    }

    #[test]
    fn verifier_certifies_the_4_cycle() {
        let g = by_name("cycle(4)").unwrap();
        let cert = verify_choosable(&g, 4, 2, 6).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedChoosable);
        assert_eq!(cert.visited, 5);
        let team = verify_choosable_workers(&g, 4, 2, 6, 3, DEFAULT_FLATTEN_DEPTH).unwrap();
        assert_eq!(team.verdict, cert.verdict);
        assert_eq!(team.visited, cert.visited);
        assert_eq!(team.pruned, cert.pruned);
    }

    #[test]
    fn verifier_certifies_k23() {
        let g = by_name("K(2,3)").unwrap();
        let cert = verify_choosable(&g, 4, 2, 7).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedChoosable);
        assert_eq!(cert.visited, 36);
    }

    #[test]
    fn verifier_refutes_theta_333() {
        let g = by_name("theta(3,3,3)").unwrap();
        let cert = verify_choosable_workers(&g, 4, 2, 6, 2, DEFAULT_FLATTEN_DEPTH).unwrap();
        let Verdict::Counterexample(bad) = &cert.verdict else {
            panic!("expected a counterexample");
        };
        assert!(find_bfold_coloring(&g, bad, 2, None).unwrap().is_none());
        // Same counterexample regardless of worker count.
        let solo = verify_choosable_workers(&g, 4, 2, 6, 1, DEFAULT_FLATTEN_DEPTH).unwrap();
        assert_eq!(solo.verdict, cert.verdict);
        assert_eq!(solo.visited, cert.visited);
    }

    #[test]
    fn single_vertex_census_is_trivial() {
        let census = enumerate_flat(&Graph::empty(1), 4, 8).unwrap();
        let expected: BTreeMap<usize, u64> = [(4, 1)].into_iter().collect();
        assert_eq!(census.counts, expected);
    }

    #[test]
    fn forcing_floor_on_c4_and_k23() {
        let c4 = by_name("cycle(4)").unwrap();
        let check = verify_forcing_claims(&c4, 4, 2, None, 6, 4).unwrap();
        assert!(check.passed(), "{:?}", check.violations);
        // Five flat classes, four vertices each.
        assert_eq!(check.checks, 20);

        let k23 = by_name("K(2,3)").unwrap();
        let check = verify_forcing_claims(&k23, 4, 2, None, 7, 3).unwrap();
        assert!(check.passed(), "{:?}", check.violations);
        // Thirty-six flat classes, five vertices each.
        assert_eq!(check.checks, 180);
    }

    #[test]
    fn forcing_floor_survives_a_pendant_path() {
        // A 4-cycle with a pendant edge: the free end still allows at least
        // four pairs under every assignment.
        let g = by_name("lollipop(4,1)").unwrap();
        let tail = g.n() - 1;
        let check = verify_forcing_claims(&g, 4, 2, Some(tail), 7, 4).unwrap();
        assert!(check.passed(), "{:?}", check.violations);
    }

    #[test]
    fn strong_c4_claims_hold() {
        let check = verify_c4_strong_claims().unwrap();
        assert!(check.passed(), "{:?}", check.violations);
        // Five flat representatives, four vertices, one forcing check plus
        // twelve intersecting-pair checks each.
        assert_eq!(check.checks, 5 * 4 * 13);
    }
}
