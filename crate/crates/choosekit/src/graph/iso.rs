//! Graph isomorphism and automorphisms by backtracking.
//!
//! Intended for the small graphs this crate works with (at most a few dozen
//! vertices); candidates are pruned by degree and by adjacency to already
//! mapped vertices, which is plenty at that scale.

use super::Graph;

/// An isomorphism `g -> h` as a vector `map[v_g] = v_h`, or None.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let mut out = None;
    search(g, h, &mut |m| {
        out = Some(m.to_vec());
        false
    });
    out
}

/// All automorphisms of `g`, each as a vector `map[v] = image`. The identity
/// is always first.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search(g, g, &mut |m| {
        out.push(m.to_vec());
        true
    });
    out.sort();
    debug_assert_eq!(out[0], (0..g.n()).collect::<Vec<_>>());
    out
}

/// Enumerate isomorphisms g -> h in lexicographic order of the map; the
/// callback returns false to stop early.
fn search(g: &Graph, h: &Graph, visit: &mut impl FnMut(&[usize]) -> bool) {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return;
    }
    let n = g.n();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // order g's vertices so each (after the first per component) touches a
    // previously placed vertex: keeps the adjacency pruning effective
    let order = placement_order(g);
    extend(g, h, &order, 0, &mut map, &mut used, visit);
}

fn placement_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    // highest degree first as component seeds
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for &seed in &seeds {
        if placed[seed] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([seed]);
        placed[seed] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.neighbors(u) {
                if !placed[v] {
                    placed[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

fn extend(
    g: &Graph,
    h: &Graph,
    order: &[usize],
    i: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if i == order.len() {
        return visit(map);
    }
    let v = order[i];
    'cand: for w in 0..h.n() {
        if used[w] || g.degree(v) != h.degree(w) {
            continue;
        }
        // adjacency to already mapped vertices must match exactly
        for &x in g.neighbors(v) {
            if map[x] != usize::MAX && !h.has_edge(w, map[x]) {
                continue 'cand;
            }
        }
        for &y in h.neighbors(w) {
            // reverse direction: any mapped g-vertex landing on a neighbor of
            // w must be a neighbor of v
            if let Some(x) = map.iter().position(|&m| m == y) {
                if !g.has_edge(v, x) {
                    continue 'cand;
                }
            }
        }
        map[v] = w;
        used[w] = true;
        if !extend(g, h, order, i + 1, map, used, visit) {
            return false;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn cycle_automorphisms_are_dihedral() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(automorphisms(&c5).len(), 10);
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(automorphisms(&c4).len(), 8);
    }

    #[test]
    fn complete_bipartite_automorphisms() {
        // K_{2,3}: 2! * 3! = 12
        let g = Graph::from_edges(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(automorphisms(&g).len(), 12);
    }

    #[test]
    fn isomorphic_relabelings_match() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let h = Graph::from_edges(5, &[(3, 4), (4, 0), (0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let m = is_isomorphic(&g, &h).expect("these are the same house graph");
        for (u, v) in g.edges() {
            assert!(h.has_edge(m[u], m[v]));
        }
        let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(is_isomorphic(&g, &path).is_none());
    }
}
