//! Isomorphism testing for small multigraphs.
//!
//! Backtracking over candidate maps, pruned by iterated neighbourhood-colour
//! refinement.  Intended for the graph sizes this crate works with (tens of
//! vertices); every positive answer comes with an explicit vertex map.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::Multigraph;
use crate::trigraph::VertexId;

/// Adjacency with multiplicities; loops are stored under the vertex itself.
fn adjacency(g: &Multigraph) -> BTreeMap<VertexId, BTreeMap<VertexId, usize>> {
    let mut adj: BTreeMap<VertexId, BTreeMap<VertexId, usize>> =
        g.vertices().map(|v| (v, BTreeMap::new())).collect();
    for (_, (a, b)) in g.edges() {
        *adj.get_mut(&a).unwrap().entry(b).or_insert(0) += 1;
        if a != b {
            *adj.get_mut(&b).unwrap().entry(a).or_insert(0) += 1;
        }
    }
    adj
}

/// Stable colouring by iterated refinement: a vertex colour is rehashed from
/// the multiset of (neighbour colour, multiplicity) pairs until fixpoint.
fn refine(adj: &BTreeMap<VertexId, BTreeMap<VertexId, usize>>) -> BTreeMap<VertexId, usize> {
    let mut color: BTreeMap<VertexId, usize> = adj
        .iter()
        .map(|(&v, nbh)| (v, nbh.values().sum::<usize>() + nbh.get(&v).copied().unwrap_or(0)))
        .collect();
    loop {
        let mut sig: BTreeMap<VertexId, (usize, Vec<(usize, usize)>)> = BTreeMap::new();
        for (&v, nbh) in adj {
            let mut s: Vec<(usize, usize)> =
                nbh.iter().map(|(w, &m)| (color[w], m)).collect();
            s.sort_unstable();
            sig.insert(v, (color[&v], s));
        }
        let classes: BTreeSet<&(usize, Vec<(usize, usize)>)> = sig.values().collect();
        let index: BTreeMap<&(usize, Vec<(usize, usize)>), usize> =
            classes.into_iter().zip(0..).collect();
        let next: BTreeMap<VertexId, usize> =
            sig.iter().map(|(&v, s)| (v, index[s])).collect();
        if next == color {
            return color;
        }
        color = next;
    }
}

fn class_sizes(color: &BTreeMap<VertexId, usize>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for c in color.values() {
        *out.entry(*c).or_insert(0) += 1;
    }
    out
}

/// An isomorphism from `a` to `b`, if one exists.
pub fn are_isomorphic(a: &Multigraph, b: &Multigraph) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let adj_a = adjacency(a);
    let adj_b = adjacency(b);
    let col_a = refine(&adj_a);
    let col_b = refine(&adj_b);
    if class_sizes(&col_a) != class_sizes(&col_b) {
        return None;
    }

    // map the most constrained (rarest-colour) vertices first
    let sizes = class_sizes(&col_a);
    let mut order: Vec<VertexId> = a.vertices().collect();
    order.sort_by_key(|v| (sizes[&col_a[v]], *v));

    let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut used: BTreeSet<VertexId> = BTreeSet::new();
    if extend(&order, 0, &adj_a, &adj_b, &col_a, &col_b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    order: &[VertexId],
    i: usize,
    adj_a: &BTreeMap<VertexId, BTreeMap<VertexId, usize>>,
    adj_b: &BTreeMap<VertexId, BTreeMap<VertexId, usize>>,
    col_a: &BTreeMap<VertexId, usize>,
    col_b: &BTreeMap<VertexId, usize>,
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    'cand: for (&w, &cw) in col_b {
        if cw != col_a[&v] || used.contains(&w) {
            continue;
        }
        // multiplicities to already-mapped vertices must agree exactly
        for (&x, &m) in &adj_a[&v] {
            if x == v {
                if adj_b[&w].get(&w).copied().unwrap_or(0) != m {
                    continue 'cand;
                }
            } else if let Some(&y) = map.get(&x) {
                if adj_b[&w].get(&y).copied().unwrap_or(0) != m {
                    continue 'cand;
                }
            }
        }
        for (&y, &m) in &adj_b[&w] {
            if y != w {
                if let Some((&x, _)) = map.iter().find(|&(_, &img)| img == y) {
                    if adj_a[&v].get(&x).copied().unwrap_or(0) != m {
                        continue 'cand;
                    }
                }
            }
        }
        map.insert(v, w);
        used.insert(w);
        if extend(order, i + 1, adj_a, adj_b, col_a, col_b, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

/// A bijection from the vertices of `pattern` onto the vertices of `host`
/// mapping every pattern edge onto a host edge (the host may have extra
/// edges), if one exists.
pub fn spanning_subgraph_embedding(
    pattern: &Multigraph,
    host: &Multigraph,
) -> Option<BTreeMap<VertexId, VertexId>> {
    if pattern.vertex_count() != host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return None;
    }
    let adj_p = adjacency(pattern);
    let adj_h = adjacency(host);
    let mut order: Vec<VertexId> = pattern.vertices().collect();
    // highest pattern degree first: most constraining
    order.sort_by_key(|&v| core::cmp::Reverse(adj_p[&v].values().sum::<usize>()));
    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    if embed(&order, 0, &adj_p, &adj_h, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn embed(
    order: &[VertexId],
    i: usize,
    adj_p: &BTreeMap<VertexId, BTreeMap<VertexId, usize>>,
    adj_h: &BTreeMap<VertexId, BTreeMap<VertexId, usize>>,
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut BTreeSet<VertexId>,
) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    let dv: usize = adj_p[&v].values().sum();
    'cand: for (&w, nbh_w) in adj_h {
        if used.contains(&w) || nbh_w.values().sum::<usize>() < dv {
            continue;
        }
        for (&x, &m) in &adj_p[&v] {
            let need_at = if x == v { w } else { match map.get(&x) { Some(&y) => y, None => continue } };
            if adj_h[&w].get(&need_at).copied().unwrap_or(0) < m {
                continue 'cand;
            }
        }
        map.insert(v, w);
        used.insert(w);
        if embed(order, i + 1, adj_p, adj_h, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, complete_bipartite, cycle, path};

    fn relabel(g: &Multigraph, shift: u32) -> Multigraph {
        let mut out = Multigraph::new();
        for v in g.vertices() {
            out.add_vertex(VertexId(v.0 + shift));
        }
        for (_, (a, b)) in g.edges() {
            out.add_edge(VertexId(a.0 + shift), VertexId(b.0 + shift));
        }
        out
    }

    fn check_map(a: &Multigraph, b: &Multigraph, map: &BTreeMap<VertexId, VertexId>) {
        assert_eq!(map.len(), a.vertex_count());
        for (_, (u, v)) in a.edges() {
            assert_eq!(
                a.edges_between(u, v).len(),
                b.edges_between(map[&u], map[&v]).len()
            );
        }
    }

    #[test]
    fn relabeled_graphs_are_isomorphic() {
        for g in [complete(5).unwrap(), cycle(7).unwrap(), complete_bipartite(2, 3).unwrap()] {
            let h = relabel(&g, 100);
            let map = are_isomorphic(&g, &h).expect("isomorphic");
            check_map(&g, &h, &map);
        }
    }

    #[test]
    fn non_isomorphic_same_degree_sequence() {
        // C6 vs two triangles: both 2-regular on 6 vertices
        let c6 = cycle(6).unwrap();
        let (two_triangles, _) =
            crate::graph::disjoint_union(&cycle(3).unwrap(), &cycle(3).unwrap());
        assert!(are_isomorphic(&c6, &two_triangles).is_none());
    }

    #[test]
    fn multiplicities_matter() {
        // path with a doubled edge vs path with the other edge doubled:
        // isomorphic; vs a triangle: not
        let mut a = path(3).unwrap();
        a.add_edge(VertexId(0), VertexId(1));
        let mut b = path(3).unwrap();
        b.add_edge(VertexId(1), VertexId(2));
        let map = are_isomorphic(&a, &b).expect("mirror image");
        check_map(&a, &b, &map);
        assert!(are_isomorphic(&a, &cycle(3).unwrap()).is_none());
    }

    #[test]
    fn loops_matter() {
        let mut a = cycle(4).unwrap();
        a.add_edge(VertexId(0), VertexId(0));
        let mut b = cycle(4).unwrap();
        b.add_edge(VertexId(2), VertexId(2));
        assert!(are_isomorphic(&a, &b).is_some());
        assert!(are_isomorphic(&a, &cycle(4).unwrap()).is_none());
    }

    #[test]
    fn spanning_embedding_finds_hamiltonian_structures() {
        // C5 spans K5 but K5 does not span C5
        let c5 = cycle(5).unwrap();
        let k5 = complete(5).unwrap();
        let map = spanning_subgraph_embedding(&c5, &k5).expect("C5 spans K5");
        for (_, (u, v)) in c5.edges() {
            assert!(!k5.edges_between(map[&u], map[&v]).is_empty());
        }
        assert!(spanning_subgraph_embedding(&k5, &c5).is_none());
        // the claw does not span P4
        let claw = complete_bipartite(1, 3).unwrap();
        assert!(spanning_subgraph_embedding(&claw, &path(4).unwrap()).is_none());
    }
}
