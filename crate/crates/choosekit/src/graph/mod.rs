//! Simple undirected graphs on vertices `0..n`, plus the structural
//! decompositions the classifier needs: bipartition with odd-cycle witnesses,
//! iterated removal of degree-<=1 vertices, block/cut-vertex decomposition,
//! ear decompositions, and thread (subdivision) structure.

mod builders;
mod iso;

pub use builders::{
    build_named, by_name, parse_graph, parse_spec, AnchoredSpec, NamedGraphSpec, ParsedGraph,
};
pub use iso::{automorphisms, is_isomorphic};

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::BadGraph(format!(
                "edge ({}, {}) out of range for {} vertices",
                u, v, n
            )));
        }
        if u == v {
            return Err(Error::BadGraph(format!("loop at vertex {}", u)));
        }
        if self.has_edge(u, v) {
            return Err(Error::BadGraph(format!("duplicate edge ({}, {})", u, v)));
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Append an isolated vertex, returning its id.
    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn vertices_of_degree(&self, d: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) == d).collect()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Induced subgraph; returns the graph and the map new-index -> old-index
    /// (which is just `verts` sorted).
    pub fn induced(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        let mut vs: Vec<usize> = verts.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::empty(vs.len());
        for (i, &v) in vs.iter().enumerate() {
            for &w in &self.adj[v] {
                if w > v && pos[w] != usize::MAX {
                    g.add_edge(i, pos[w]).expect("induced edges are simple");
                }
            }
        }
        (g, vs)
    }

    /// Disjoint union; the second graph's vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = self.clone();
        g.adj.extend(
            other
                .adj
                .iter()
                .map(|ns| ns.iter().map(|&v| v + off).collect()),
        );
        g
    }

    /// Glue `other` onto `self` identifying `other`'s vertex `bv` with
    /// `self`'s vertex `av`. Returns the glued graph and the map from
    /// `other`'s vertices into it.
    pub fn glue(&self, av: usize, other: &Graph, bv: usize) -> (Graph, Vec<usize>) {
        let mut map = Vec::with_capacity(other.n());
        let mut next = self.n();
        for v in 0..other.n() {
            if v == bv {
                map.push(av);
            } else {
                map.push(next);
                next += 1;
            }
        }
        let mut g = self.clone();
        g.adj.resize(next, Vec::new());
        for (u, v) in other.edges() {
            // gluing may re-create an edge already present at the shared vertex
            let _ = g.add_edge(map[u], map[v]);
        }
        (g, map)
    }

    /// Two-color the vertices if possible. On success returns a side (0/1)
    /// per vertex, each component anchored so its smallest vertex is on side
    /// 0. On failure returns an odd cycle as a vertex sequence.
    pub fn bipartition(&self) -> Result<Vec<u8>, Vec<usize>> {
        let n = self.n();
        let mut side = vec![u8::MAX; n];
        let mut parent = vec![usize::MAX; n];
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        parent[v] = u;
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return Err(odd_cycle_from_clash(&parent, u, v));
                    }
                }
            }
        }
        Ok(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_ok()
    }

    /// Iteratively delete vertices of degree <= 1. Returns the resulting
    /// graph together with the map new-index -> old-index. If everything is
    /// deleted (the graph is a forest) the result is a single vertex.
    pub fn core(&self) -> (Graph, Vec<usize>) {
        let mut alive = vec![true; self.n()];
        let mut deg: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        let mut queue: VecDeque<usize> = (0..self.n()).filter(|&v| deg[v] <= 1).collect();
        let mut in_queue = vec![false; self.n()];
        for &v in &queue {
            in_queue[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            if !alive[v] || deg[v] > 1 {
                in_queue[v] = false;
                continue;
            }
            alive[v] = false;
            for &w in &self.adj[v] {
                if alive[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 && !in_queue[w] {
                        in_queue[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..self.n()).filter(|&v| alive[v]).collect();
        if kept.is_empty() {
            // forest: the core is a single vertex by convention
            let map = if self.n() == 0 { vec![] } else { vec![0] };
            return (Graph::empty(1), map);
        }
        self.induced(&kept)
    }

    /// `Some(n)` if the graph is a single cycle of length n.
    pub fn as_cycle(&self) -> Option<usize> {
        if self.n() >= 3
            && self.is_connected()
            && (0..self.n()).all(|v| self.degree(v) == 2)
        {
            Some(self.n())
        } else {
            None
        }
    }

    /// `Some(k)` if the graph is a path with k edges (k >= 0).
    pub fn as_path(&self) -> Option<usize> {
        if self.n() == 0 || !self.is_connected() {
            return None;
        }
        if self.n() == 1 {
            return Some(0);
        }
        let ones = self.vertices_of_degree(1).len();
        if ones == 2 && (0..self.n()).all(|v| self.degree(v) <= 2) {
            Some(self.n() - 1)
        } else {
            None
        }
    }

    /// Block / cut-vertex decomposition. Blocks are maximal subgraphs with no
    /// cut vertex: 2-connected pieces, bridge edges, and isolated vertices.
    pub fn blocks(&self) -> BlockDecomposition {
        let n = self.n();
        let mut dfn = vec![0usize; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        let mut is_cut = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut edge_stack: Vec<(usize, usize)> = Vec::new();

        // iterative DFS: (vertex, parent, next neighbor index)
        for root in 0..n {
            if dfn[root] != 0 {
                continue;
            }
            if self.degree(root) == 0 {
                blocks.push(vec![root]);
                timer += 1;
                dfn[root] = timer;
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = Vec::new();
            timer += 1;
            dfn[root] = timer;
            low[root] = timer;
            stack.push((root, usize::MAX, 0));
            let mut root_children = 0usize;
            while let Some(&mut (u, pu, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[u].len() {
                    let v = self.adj[u][*idx];
                    *idx += 1;
                    if dfn[v] == 0 {
                        edge_stack.push((u, v));
                        timer += 1;
                        dfn[v] = timer;
                        low[v] = timer;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else if v != pu && dfn[v] < dfn[u] {
                        edge_stack.push((u, v));
                        low[u] = low[u].min(dfn[v]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[u]);
                        if low[u] >= dfn[p] {
                            // p closes a block: pop edges up to and including (p, u)
                            let mut verts = Vec::new();
                            while let Some((a, b)) = edge_stack.pop() {
                                verts.push(a);
                                verts.push(b);
                                if (a, b) == (p, u) {
                                    break;
                                }
                            }
                            verts.sort_unstable();
                            verts.dedup();
                            blocks.push(verts);
                            if p != root {
                                is_cut[p] = true;
                            }
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        blocks.sort();
        let cut_vertices = (0..n).filter(|&v| is_cut[v]).collect();
        BlockDecomposition {
            blocks,
            cut_vertices,
        }
    }

    /// True if connected with no cut vertex and at least 3 vertices.
    pub fn is_two_connected(&self) -> bool {
        if self.n() < 3 || !self.is_connected() {
            return false;
        }
        let d = self.blocks();
        d.cut_vertices.is_empty() && d.blocks.len() == 1
    }

    /// Shortest path between `from` and any vertex satisfying `goal`, moving
    /// only through vertices allowed by `open` (endpoints are always allowed).
    /// Returns the vertex sequence from `from` to the goal.
    pub fn bfs_path(
        &self,
        from: usize,
        goal: impl Fn(usize) -> bool,
        open: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if goal(from) {
            return Some(vec![from]);
        }
        let mut parent = vec![usize::MAX; self.n()];
        let mut seen = vec![false; self.n()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if seen[v] {
                    continue;
                }
                if goal(v) {
                    let mut path = vec![v, u];
                    let mut x = u;
                    while parent[x] != usize::MAX {
                        x = parent[x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(path);
                }
                if open(v) {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// A shortest cycle through `v`, as a vertex sequence (without repeating
    /// the start at the end). None if `v` lies on no cycle.
    pub fn shortest_cycle_through(&self, v: usize) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        for (i, &x) in self.adj[v].iter().enumerate() {
            for &y in self.adj[v].iter().skip(i + 1) {
                if let Some(p) = self.bfs_path(x, |t| t == y, |t| t != v) {
                    let mut cyc = vec![v];
                    cyc.extend(p);
                    if best.as_ref().map_or(true, |b| cyc.len() < b.len()) {
                        best = Some(cyc);
                    }
                }
            }
        }
        best
    }

    /// A cut vertex of the graph, if one exists.
    pub fn cut_vertex(&self) -> Option<usize> {
        self.blocks().cut_vertices.first().copied()
    }

    /// Ear decomposition of a 2-connected graph: the first ear is a single
    /// edge, every later ear is a path whose two (distinct) endpoints already
    /// occur and whose interior vertices are new. The ears partition the edge
    /// set. If `start` is given it must be the edge set of a 2-connected
    /// subgraph; the decomposition then begins with ears covering exactly
    /// those edges.
    pub fn ear_decomposition(
        &self,
        start: Option<&[(usize, usize)]>,
    ) -> Result<EarDecomposition, Error> {
        if self.n() < 3 || !self.is_connected() || self.cut_vertex().is_some() {
            return Err(Error::NotTwoConnected {
                cut_vertex: self.cut_vertex(),
            });
        }
        let mut present = vec![false; self.n()];
        let mut covered = std::collections::HashSet::new();
        let key = |u: usize, v: usize| (u.min(v), u.max(v));
        let mut ears: Vec<Vec<usize>> = Vec::new();

        match start {
            Some(se) => {
                for &(u, v) in se {
                    if u >= self.n() || v >= self.n() || !self.has_edge(u, v) {
                        return Err(Error::BadGraph(format!(
                            "start edge ({}, {}) is not an edge of the graph",
                            u, v
                        )));
                    }
                }
                let verts: Vec<usize> = {
                    let mut vs: Vec<usize> = se.iter().flat_map(|&(u, v)| [u, v]).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    vs
                };
                let mut pos = vec![usize::MAX; self.n()];
                for (i, &v) in verts.iter().enumerate() {
                    pos[v] = i;
                }
                let mut sub = Graph::empty(verts.len());
                for &(u, v) in se {
                    if sub.add_edge(pos[u], pos[v]).is_err() {
                        return Err(Error::BadGraph(format!(
                            "start edge ({}, {}) listed twice",
                            u, v
                        )));
                    }
                }
                let inner = sub.ear_decomposition(None).map_err(|_| {
                    Error::BadGraph("start subgraph is not 2-connected".into())
                })?;
                for ear in inner.ears {
                    ears.push(ear.into_iter().map(|x| verts[x]).collect());
                }
                for &v in &verts {
                    present[v] = true;
                }
                for &(u, v) in se {
                    covered.insert(key(u, v));
                }
            }
            None => {
                let (u, v) = self.edges()[0];
                present[u] = true;
                present[v] = true;
                covered.insert(key(u, v));
                ears.push(vec![u, v]);
            }
        }

        while covered.len() < self.edge_count() {
            // chord ears: uncovered edges between present vertices
            let mut advanced = false;
            for (u, v) in self.edges() {
                if present[u] && present[v] && !covered.contains(&key(u, v)) {
                    covered.insert(key(u, v));
                    ears.push(vec![u, v]);
                    advanced = true;
                }
            }
            if covered.len() == self.edge_count() {
                break;
            }
            // path ear: grow from the first frontier edge
            let frontier = self
                .edges()
                .into_iter()
                .find(|&(u, v)| present[u] != present[v]);
            let Some((mut p, mut q)) = frontier else {
                if advanced {
                    continue;
                }
                return Err(Error::Internal(
                    "uncovered edges remain but no frontier edge exists".into(),
                ));
            };
            if !present[p] {
                std::mem::swap(&mut p, &mut q);
            }
            // In a 2-connected graph an outside vertex always reaches the
            // present part at a second vertex besides p.
            let path = self
                .bfs_path(q, |t| present[t] && t != p, |t| !present[t])
                .ok_or_else(|| {
                    Error::Internal("2-connected graph must close every ear openly".into())
                })?;
            let mut ear = vec![p];
            ear.extend(path);
            for w in &ear {
                present[*w] = true;
            }
            for pair in ear.windows(2) {
                covered.insert(key(pair[0], pair[1]));
            }
            ears.push(ear);
        }
        Ok(EarDecomposition { ears })
    }

    /// Thread structure: the maximal paths through degree-2 vertices between
    /// branch vertices (degree >= 3). Returns None if there is no branch
    /// vertex (the graph is a cycle, path or smaller). Each thread is listed
    /// once as the full vertex sequence from one branch vertex to another
    /// (possibly the same one, for an attached cycle).
    pub fn threads(&self) -> Option<Vec<Vec<usize>>> {
        let branch: Vec<usize> = (0..self.n()).filter(|&v| self.degree(v) >= 3).collect();
        if branch.is_empty() {
            return None;
        }
        let is_branch = {
            let mut b = vec![false; self.n()];
            for &v in &branch {
                b[v] = true;
            }
            b
        };
        let mut threads = Vec::new();
        let mut used = std::collections::HashSet::new();
        for &b in &branch {
            for &x in &self.adj[b] {
                if used.contains(&(b, x)) {
                    continue;
                }
                // walk from b through x until the next branch vertex
                let mut path = vec![b, x];
                used.insert((b, x));
                let (mut prev, mut cur) = (b, x);
                while !is_branch[cur] {
                    let &next = self.adj[cur]
                        .iter()
                        .find(|&&w| w != prev)
                        .expect("degree-2 interior vertex has a forward neighbor");
                    used.insert((cur, next));
                    path.push(next);
                    prev = cur;
                    cur = next;
                }
                used.insert((cur, prev));
                threads.push(path);
            }
        }
        Some(threads)
    }

    /// Delete vertex `v` and identify all of its neighbors into a single
    /// vertex. Returns the quotient graph and the map old-id -> new-id;
    /// `v` and its neighbors all map to the merged vertex (which gets the
    /// highest new id). Edges inside the merged class disappear; duplicate
    /// images collapse.
    pub fn delete_identify(&self, v: usize) -> (Graph, Vec<usize>) {
        let merged_class: Vec<usize> = self.adj[v].clone();
        let survivors: Vec<usize> = (0..self.n())
            .filter(|&x| x != v && !merged_class.contains(&x))
            .collect();
        let merged_id = survivors.len();
        let mut map = vec![merged_id; self.n()];
        for (i, &x) in survivors.iter().enumerate() {
            map[x] = i;
        }
        let mut g = Graph::empty(merged_id + 1);
        for (a, b) in self.edges() {
            if a == v || b == v {
                continue;
            }
            let (ma, mb) = (map[a], map[b]);
            if ma != mb && !g.has_edge(ma, mb) {
                g.add_edge(ma, mb).expect("quotient edges are simple");
            }
        }
        (g, map)
    }

    /// Contract an edge that lies in no cycle (a bridge). Returns the
    /// contracted graph and the map old-id -> new-id (both endpoints map to
    /// the merged vertex).
    pub fn contract_cut_edge(&self, u: usize, v: usize) -> Result<(Graph, Vec<usize>), Error> {
        if u >= self.n() || v >= self.n() || !self.has_edge(u, v) {
            return Err(Error::BadGraph(format!("({}, {}) is not an edge", u, v)));
        }
        if self.path_avoiding_edge(u, v).is_some() {
            return Err(Error::BadGraph(format!(
                "edge ({}, {}) lies in a cycle and cannot be contracted",
                u, v
            )));
        }
        let hi = u.max(v);
        let lo = u.min(v);
        let mut map = Vec::with_capacity(self.n());
        let mut next = 0usize;
        for x in 0..self.n() {
            if x == hi {
                map.push(usize::MAX); // patched below once lo's id is known
            } else {
                map.push(next);
                next += 1;
            }
        }
        map[hi] = map[lo];
        let mut g = Graph::empty(next);
        for (a, b) in self.edges() {
            let (ma, mb) = (map[a], map[b]);
            if ma != mb && !g.has_edge(ma, mb) {
                g.add_edge(ma, mb).expect("contracted edges are simple");
            }
        }
        Ok((g, map))
    }

    /// Contract two edges of a path of five degree-2 vertices: delete
    /// `center` and identify its two neighbors. All five path vertices must
    /// be distinct and have degree 2.
    pub fn contract_degree2_path(&self, center: usize) -> Result<(Graph, Vec<usize>), Error> {
        if center >= self.n() || self.degree(center) != 2 {
            return Err(Error::BadGraph(format!(
                "vertex {} does not have degree 2",
                center
            )));
        }
        let (x2, x4) = (self.adj[center][0], self.adj[center][1]);
        for &x in &[x2, x4] {
            if self.degree(x) != 2 {
                return Err(Error::BadGraph(format!(
                    "vertex {} does not have degree 2",
                    x
                )));
            }
        }
        let other = |x: usize| -> usize {
            *self.adj[x].iter().find(|&&w| w != center).expect("degree 2")
        };
        let (x1, x5) = (other(x2), other(x4));
        for &x in &[x1, x5] {
            if self.degree(x) != 2 {
                return Err(Error::BadGraph(format!(
                    "vertex {} does not have degree 2",
                    x
                )));
            }
        }
        let five = [x1, x2, center, x4, x5];
        for i in 0..5 {
            for j in i + 1..5 {
                if five[i] == five[j] {
                    return Err(Error::BadGraph(format!(
                        "vertex {} repeats among the five path vertices",
                        five[i]
                    )));
                }
            }
        }
        let (g, map) = self.delete_identify(center);
        Ok((g, map))
    }

    /// Shortest path from `u` to `v` that does not use the edge (u, v)
    /// itself. `Some` means the edge lies in a cycle.
    fn path_avoiding_edge(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n()];
        let mut seen = vec![false; self.n()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if seen[y] || (x == u && y == v) {
                    continue;
                }
                parent[y] = x;
                if y == v {
                    let mut path = vec![v];
                    let mut t = v;
                    while parent[t] != usize::MAX {
                        t = parent[t];
                        path.push(t);
                    }
                    path.reverse();
                    return Some(path);
                }
                seen[y] = true;
                queue.push_back(y);
            }
        }
        None
    }
}

fn odd_cycle_from_clash(parent: &[usize], u: usize, v: usize) -> Vec<usize> {
    // walk both ancestries to the root, then splice at the common ancestor
    let chain = |mut x: usize| {
        let mut c = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            c.push(x);
        }
        c
    };
    let cu = chain(u);
    let cv = chain(v);
    // find deepest common vertex
    let setu: std::collections::HashSet<usize> = cu.iter().copied().collect();
    let mut meet = *cv.last().unwrap();
    for &x in &cv {
        if setu.contains(&x) {
            meet = x;
            break;
        }
    }
    let mut cycle: Vec<usize> = cu.iter().copied().take_while(|&x| x != meet).collect();
    cycle.push(meet);
    let tail: Vec<usize> = cv.iter().copied().take_while(|&x| x != meet).collect();
    cycle.extend(tail.into_iter().rev());
    cycle
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, each sorted, sorted between blocks.
    pub blocks: Vec<Vec<usize>>,
    /// Sorted cut vertices.
    pub cut_vertices: Vec<usize>,
}

impl BlockDecomposition {
    /// Blocks that contain a cycle (>= 3 vertices).
    pub fn cyclic_blocks(&self) -> Vec<&Vec<usize>> {
        self.blocks.iter().filter(|b| b.len() >= 3).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarDecomposition {
    /// Vertex sequences: the first is a single edge, the rest are paths.
    pub ears: Vec<Vec<usize>>,
}

impl EarDecomposition {
    /// Independent validity check against `g`: the first ear is one edge,
    /// every later ear is a path with distinct vertices whose endpoints are
    /// already present and whose interior is new, and the ears partition the
    /// edge set. With `start_edges`, additionally checks that a prefix of the
    /// ears covers exactly those edges.
    pub fn check(&self, g: &Graph, start_edges: Option<&[(usize, usize)]>) -> Result<(), Error> {
        let fail = |msg: String| Err(Error::BadGraph(msg));
        let key = |u: usize, v: usize| (u.min(v), u.max(v));
        let Some(first) = self.ears.first() else {
            return fail("empty ear decomposition".into());
        };
        if first.len() != 2 {
            return fail("first ear is not a single edge".into());
        }
        let mut present = vec![false; g.n()];
        let mut covered = std::collections::HashSet::new();
        for (i, ear) in self.ears.iter().enumerate() {
            if ear.len() < 2 {
                return fail(format!("ear {} is too short", i));
            }
            let mut distinct = ear.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != ear.len() {
                return fail(format!("ear {} repeats a vertex", i));
            }
            for pair in ear.windows(2) {
                if !g.has_edge(pair[0], pair[1]) {
                    return fail(format!("ear {} uses a non-edge", i));
                }
                if !covered.insert(key(pair[0], pair[1])) {
                    return fail(format!("ear {} reuses a covered edge", i));
                }
            }
            if i > 0 {
                let (a, b) = (ear[0], *ear.last().unwrap());
                if !present[a] || !present[b] {
                    return fail(format!("ear {} endpoint not attached to earlier ears", i));
                }
                for &v in &ear[1..ear.len() - 1] {
                    if present[v] {
                        return fail(format!("ear {} interior vertex {} already present", i, v));
                    }
                }
            }
            for &v in ear {
                present[v] = true;
            }
        }
        if covered.len() != g.edge_count() {
            return fail("ears do not cover every edge".into());
        }
        if let Some(se) = start_edges {
            let want: std::collections::HashSet<_> =
                se.iter().map(|&(u, v)| key(u, v)).collect();
            let mut acc = std::collections::HashSet::new();
            for ear in &self.ears {
                if acc == want {
                    break;
                }
                for pair in ear.windows(2) {
                    let k = key(pair[0], pair[1]);
                    if !want.contains(&k) {
                        return fail("start edges are not a prefix of the ears".into());
                    }
                    acc.insert(k);
                }
            }
            if acc != want {
                return fail("start edges are not covered by a prefix of the ears".into());
            }
        }
        Ok(())
    }

    /// Total number of edges across all ears.
    pub fn edge_total(&self) -> usize {
        self.ears.iter().map(|e| e.len() - 1).sum()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphSer {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphSer {
            n: self.n(),
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = GraphSer::deserialize(d)?;
        Graph::from_edges(raw.n, &raw.edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.as_cycle(), Some(4));
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(3, 0));
        assert!(!g.has_edge(0, 2));
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn bipartition_sides_and_odd_cycle() {
        let even = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let side = even.bipartition().unwrap();
        assert_eq!(side[0], 0);
        assert_ne!(side[0], side[1]);
        assert_eq!(side[0], side[2]);

        let odd = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let cyc = odd.bipartition().unwrap_err();
        assert_eq!(cyc.len() % 2, 1);
        // the witness is a genuine cycle
        for i in 0..cyc.len() {
            assert!(odd.has_edge(cyc[i], cyc[(i + 1) % cyc.len()]));
        }
    }

    #[test]
    fn core_strips_trees_and_pendants() {
        // triangle with a pendant path
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]).unwrap();
        let (core, map) = g.core();
        assert_eq!(core.as_cycle(), Some(3));
        assert_eq!(map, vec![0, 1, 2]);

        let tree = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let (core, _) = tree.core();
        assert_eq!(core.n(), 1);
        assert_eq!(core.edge_count(), 0);
    }

    #[test]
    fn block_decomposition_two_triangles() {
        // two triangles sharing vertex 2
        let g =
            Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let d = g.blocks();
        assert_eq!(d.cut_vertices, vec![2]);
        assert_eq!(d.blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert!(!g.is_two_connected());
        assert!(Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])
            .unwrap()
            .is_two_connected());
    }

    #[test]
    fn bridge_blocks() {
        // two triangles joined by a bridge 2-5
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (2, 5), (5, 4), (4, 3), (3, 5)],
        )
        .unwrap();
        let d = g.blocks();
        assert_eq!(d.blocks.len(), 3);
        assert!(d.blocks.contains(&vec![2, 5]));
        assert_eq!(d.cut_vertices, vec![2, 5]);
        assert_eq!(d.cyclic_blocks().len(), 2);
    }

    #[test]
    fn ears_of_cycle_are_edge_plus_path() {
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let d = c6.ear_decomposition(None).unwrap();
        assert_eq!(d.ears.len(), 2);
        assert_eq!(d.ears[0].len(), 2);
        assert_eq!(d.edge_total(), 6);
        d.check(&c6, None).unwrap();
    }

    #[test]
    fn ears_cover_theta() {
        // theta graph: two vertices joined by three paths of lengths 2,2,3
        let g = Graph::from_edges(
            7,
            &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 5), (5, 6), (6, 1)],
        )
        .unwrap();
        let d = g.ear_decomposition(None).unwrap();
        assert_eq!(d.ears.len(), 3);
        assert_eq!(d.edge_total(), g.edge_count());
        d.check(&g, None).unwrap();
    }

    #[test]
    fn ears_honor_start_subgraph() {
        // theta(2,2,2): branch vertices 0,1; paths through 2, 3, 4
        let g =
            Graph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        let start = [(0, 2), (2, 1), (1, 3), (3, 0)];
        let d = g.ear_decomposition(Some(&start)).unwrap();
        assert_eq!(d.ears.len(), 3);
        d.check(&g, Some(&start)).unwrap();
        // a path is not a valid start
        assert!(g.ear_decomposition(Some(&[(0, 2), (2, 1)])).is_err());
    }

    #[test]
    fn ears_reject_cut_vertex() {
        // two C4's sharing vertex 0
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 0)],
        )
        .unwrap();
        match g.ear_decomposition(None) {
            Err(Error::NotTwoConnected { cut_vertex }) => assert_eq!(cut_vertex, Some(0)),
            other => panic!("expected NotTwoConnected, got {:?}", other.map(|d| d.ears)),
        }
    }

    #[test]
    fn contract_cut_edge_only_off_cycles() {
        // C4 with a pendant tail 3-4 (lollipop)
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]).unwrap();
        let (h, map) = g.contract_cut_edge(3, 4).unwrap();
        assert_eq!(h.as_cycle(), Some(4));
        assert_eq!(map[4], map[3]);
        assert!(g.contract_cut_edge(0, 1).is_err());
        assert!(g.contract_cut_edge(0, 2).is_err());
    }

    #[test]
    fn degree2_path_contraction() {
        let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let (h, _) = c6.contract_degree2_path(0).unwrap();
        assert_eq!(h.as_cycle(), Some(4));
        // C4 has no 5 distinct degree-2 path vertices
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(c4.contract_degree2_path(0).is_err());
    }

    #[test]
    fn delete_identify_shrinks_theta() {
        // delete a degree-2 vertex of theta(2,2,2) and merge its two branch
        // neighbors; the parallel 2-paths collapse to single edges
        let g =
            Graph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap();
        let (h, map) = g.delete_identify(2);
        assert_eq!(h.n(), 3);
        assert_eq!(map[0], map[1]);
        assert_eq!(map[0], map[2]);
        assert_eq!(h.as_path(), Some(2));
        assert_eq!(h.degree(map[0]), 2);

        // delete a branch vertex and merge the three middles
        let (h2, map2) = g.delete_identify(0);
        assert_eq!(h2.n(), 2);
        assert_eq!(h2.edge_count(), 1);
        assert_eq!(map2[2], map2[3]);
    }

    #[test]
    fn threads_of_subdivided_k4() {
        // K4 with one edge subdivided once
        let g = Graph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (4, 3)],
        )
        .unwrap();
        let threads = g.threads().unwrap();
        assert_eq!(threads.len(), 6);
        let lens: Vec<usize> = {
            let mut l: Vec<usize> = threads.iter().map(|t| t.len() - 1).collect();
            l.sort_unstable();
            l
        };
        assert_eq!(lens, vec![1, 1, 1, 1, 1, 2]);
        // a pure cycle has no threads
        assert!(Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])
            .unwrap()
            .threads()
            .is_none());
    }

    #[test]
    fn glue_shares_one_vertex() {
        let c3 = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let (g, map) = c3.glue(1, &c3, 0);
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(map[0], 1);
        assert_eq!(g.blocks().cut_vertices, vec![1]);
    }
}
