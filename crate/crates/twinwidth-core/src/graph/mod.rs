//! Multigraphs and graph constructors.
//!
//! A [`Multigraph`] is a vertex set plus an edge list; loops and parallel
//! edges are allowed, and every edge has a stable [`EdgeId`] that survives
//! deletions of other edges.  Degrees count loops twice.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::trigraph::{Color, Trigraph, VertexId};

mod gadget;
mod named;
mod subdivide;

pub use gadget::{psi, psi_star, theta, NablaSeparation, PsiGadget, PsiGraph, ThetaGraph};
pub use named::{
    by_name, elementary_wall, extremal_graph, f3_member, grid, k_class_member, line_wall, F3Name,
    KClassName, Labeled,
};
pub use subdivide::{subdivide, subdivide_simple, uniform_lengths, SubdividedGraph};

/// Stable edge identifier within one multigraph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphError {
    UnknownVertex(VertexId),
    UnknownEdge(EdgeId),
    BadParameter,
    NotSimple,
    NotAClique,
    BadLength(EdgeId),
    NonSimpleResult,
    UnknownName,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            GraphError::UnknownEdge(e) => write!(f, "unknown edge {e}"),
            GraphError::BadParameter => write!(f, "bad parameter"),
            GraphError::NotSimple => write!(f, "operation requires a simple graph"),
            GraphError::NotAClique => write!(f, "vertex set is not a clique"),
            GraphError::BadLength(e) => write!(f, "bad subdivision length for {e}"),
            GraphError::NonSimpleResult => write!(f, "subdivision result is not simple"),
            GraphError::UnknownName => write!(f, "unknown graph name"),
        }
    }
}

/// A multigraph: vertices plus an edge list keyed by stable ids.
/// Loops (both endpoints equal) and parallel edges are permitted.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Multigraph {
    verts: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_edge: u32,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with vertices `0..n-1` and no edges.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Multigraph::new();
        for i in 0..n {
            g.add_vertex(VertexId(i));
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.verts.insert(v);
    }

    /// Smallest id strictly above every existing vertex.
    pub fn fresh_vertex(&mut self) -> VertexId {
        let id = self
            .verts
            .iter()
            .next_back()
            .map(|v| v.0 + 1)
            .unwrap_or(0);
        let v = VertexId(id);
        self.verts.insert(v);
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        debug_assert!(self.verts.contains(&u) && self.verts.contains(&v));
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        self.edges.insert(id, (a, b));
        id
    }

    pub fn remove_edge(&mut self, e: EdgeId) {
        self.edges.remove(&e);
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        self.verts.remove(&v);
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.verts.contains(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.verts
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, (VertexId, VertexId))> + '_ {
        self.edges.iter().map(|(&e, &p)| (e, p))
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(&e), Some((a, b)) if a == b)
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        let p = if u <= v { (u, v) } else { (v, u) };
        self.edges
            .iter()
            .filter(|(_, &q)| q == p)
            .map(|(&e, _)| e)
            .collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        !self.edges_between(u, v).is_empty()
    }

    /// Degree; loops contribute 2.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Distinct neighbours of `v`, excluding `v` itself.
    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &(a, b) in self.edges.values() {
            if a == v && b != v {
                out.insert(b);
            } else if b == v && a != v {
                out.insert(a);
            }
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        for &(a, b) in self.edges.values() {
            if a == b || !seen.insert((a, b)) {
                return false;
            }
        }
        true
    }

    pub fn has_loop(&self) -> bool {
        self.edges.values().any(|&(a, b)| a == b)
    }

    pub fn is_clique(&self, xs: &BTreeSet<VertexId>) -> bool {
        let v: Vec<VertexId> = xs.iter().copied().collect();
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                if !self.has_edge(v[i], v[j]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.verts {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = alloc::vec![s];
            comp.insert(s);
            while let Some(v) = stack.pop() {
                for w in self.neighbors(v) {
                    if comp.insert(w) {
                        stack.push(w);
                    }
                }
            }
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn induced(&self, x: &BTreeSet<VertexId>) -> Multigraph {
        let mut g = Multigraph::new();
        g.verts = x.intersection(&self.verts).copied().collect();
        g.next_edge = self.next_edge;
        for (&e, &(a, b)) in &self.edges {
            if g.verts.contains(&a) && g.verts.contains(&b) {
                g.edges.insert(e, (a, b));
            }
        }
        g
    }

    pub fn without_vertices(&self, w: &BTreeSet<VertexId>) -> Multigraph {
        let keep: BTreeSet<VertexId> = self.verts.difference(w).copied().collect();
        self.induced(&keep)
    }

    /// Contract edge `e`: its endpoints merge into the smaller id.  Other
    /// edges keep their ids; parallel edges and loops arising from the merge
    /// are kept.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Multigraph, GraphError> {
        let (a, b) = self.endpoints(e).ok_or(GraphError::UnknownEdge(e))?;
        let (keep, gone) = if a <= b { (a, b) } else { (b, a) };
        let mut g = Multigraph::new();
        g.next_edge = self.next_edge;
        for &v in &self.verts {
            if v != gone {
                g.verts.insert(v);
            }
        }
        for (&f, &(x, y)) in &self.edges {
            if f == e {
                continue;
            }
            let nx = if x == gone { keep } else { x };
            let ny = if y == gone { keep } else { y };
            let p = if nx <= ny { (nx, ny) } else { (ny, nx) };
            g.edges.insert(f, p);
        }
        if a == b {
            // contracting a loop is deletion
        }
        Ok(g)
    }

    /// The simple graph on the same vertices: loops dropped, parallel classes
    /// merged into one edge.  Edge ids are re-assigned in sorted endpoint
    /// order starting from 0.
    pub fn simplification(&self) -> Multigraph {
        let mut pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for &(a, b) in self.edges.values() {
            if a != b {
                pairs.insert((a, b));
            }
        }
        let mut g = Multigraph::new();
        g.verts = self.verts.clone();
        for (a, b) in pairs {
            g.add_edge(a, b);
        }
        g
    }

    pub fn complement(&self) -> Result<Multigraph, GraphError> {
        if !self.is_simple() {
            return Err(GraphError::NotSimple);
        }
        let vs: Vec<VertexId> = self.verts.iter().copied().collect();
        let mut g = Multigraph::new();
        g.verts = self.verts.clone();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                if !self.has_edge(vs[i], vs[j]) {
                    g.add_edge(vs[i], vs[j]);
                }
            }
        }
        Ok(g)
    }

    /// Shortest cycle length; `None` for forests. Loops give 1, parallel
    /// edges 2.
    pub fn girth(&self) -> Option<usize> {
        if self.has_loop() {
            return Some(1);
        }
        // parallel pair?
        let mut seen = BTreeSet::new();
        for &(a, b) in self.edges.values() {
            if !seen.insert((a, b)) {
                return Some(2);
            }
        }
        // BFS from every vertex on the simplification
        let simple = self.simplification();
        let mut best: Option<usize> = None;
        for s in simple.vertices() {
            let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
            let mut par: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            dist.insert(s, 0);
            let mut queue: Vec<VertexId> = alloc::vec![s];
            let mut qi = 0;
            while qi < queue.len() {
                let v = queue[qi];
                qi += 1;
                let dv = dist[&v];
                for w in simple.neighbors(v) {
                    if !dist.contains_key(&w) {
                        dist.insert(w, dv + 1);
                        par.insert(w, v);
                        queue.push(w);
                    } else if par.get(&v) != Some(&w) && par.get(&w) != Some(&v) && w != v {
                        let cyc = dv + dist[&w] + 1;
                        if best.map_or(true, |b| cyc < b) {
                            best = Some(cyc);
                        }
                    }
                }
            }
        }
        best
    }

    /// All-black trigraph with the same vertices and simplified edges.
    pub fn to_trigraph(&self) -> Trigraph {
        let simple = self.simplification();
        let mut t = Trigraph::new();
        for v in simple.vertices() {
            t.add_vertex(v);
        }
        for (_, (a, b)) in simple.edges() {
            t.add_edge(a, b, Color::Black).expect("valid edge");
        }
        t
    }

    /// Enumerate all triangles (3-cliques of the simplification).
    pub fn triangles(&self) -> Vec<BTreeSet<VertexId>> {
        let s = self.simplification();
        let vs: Vec<VertexId> = s.vertices().collect();
        let mut out = Vec::new();
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                if !s.has_edge(vs[i], vs[j]) {
                    continue;
                }
                for k in (j + 1)..vs.len() {
                    if s.has_edge(vs[i], vs[k]) && s.has_edge(vs[j], vs[k]) {
                        out.push([vs[i], vs[j], vs[k]].into_iter().collect());
                    }
                }
            }
        }
        out
    }
}

/// Standard constructors with canonical vertex ids `0..n-1`.
pub fn complete(n: u32) -> Result<Multigraph, GraphError> {
    if n == 0 {
        return Err(GraphError::BadParameter);
    }
    let mut g = Multigraph::with_vertices(n);
    for i in 0..n {
        for j in (i + 1)..n {
            g.add_edge(VertexId(i), VertexId(j));
        }
    }
    Ok(g)
}

/// `cycle(1)` is the one-vertex multigraph with a loop; `cycle(2)` two
/// parallel edges.
pub fn cycle(n: u32) -> Result<Multigraph, GraphError> {
    if n == 0 {
        return Err(GraphError::BadParameter);
    }
    let mut g = Multigraph::with_vertices(n);
    if n == 1 {
        g.add_edge(VertexId(0), VertexId(0));
    } else {
        for i in 0..n {
            g.add_edge(VertexId(i), VertexId((i + 1) % n));
        }
    }
    Ok(g)
}

/// Path on `n` vertices.
pub fn path(n: u32) -> Result<Multigraph, GraphError> {
    if n == 0 {
        return Err(GraphError::BadParameter);
    }
    let mut g = Multigraph::with_vertices(n);
    for i in 0..n.saturating_sub(1) {
        g.add_edge(VertexId(i), VertexId(i + 1));
    }
    Ok(g)
}

pub fn complete_bipartite(m: u32, n: u32) -> Result<Multigraph, GraphError> {
    if m == 0 || n == 0 {
        return Err(GraphError::BadParameter);
    }
    let mut g = Multigraph::with_vertices(m + n);
    for i in 0..m {
        for j in 0..n {
            g.add_edge(VertexId(i), VertexId(m + j));
        }
    }
    Ok(g)
}

/// Disjoint union; the second graph's vertices are shifted above the first's.
/// Returns the union plus the shift applied to `b`'s vertex ids.
pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> (Multigraph, u32) {
    let shift = a.verts.iter().next_back().map(|v| v.0 + 1).unwrap_or(0);
    let mut g = a.clone();
    for v in b.vertices() {
        g.add_vertex(VertexId(v.0 + shift));
    }
    for (_, (x, y)) in b.edges() {
        g.add_edge(VertexId(x.0 + shift), VertexId(y.0 + shift));
    }
    (g, shift)
}

/// Join: disjoint union plus all edges between the two sides.
pub fn join(a: &Multigraph, b: &Multigraph) -> (Multigraph, u32) {
    let (mut g, shift) = disjoint_union(a, b);
    for u in a.vertices() {
        for v in b.vertices() {
            g.add_edge(u, VertexId(v.0 + shift));
        }
    }
    (g, shift)
}

/// Line graph: one vertex per edge of `G` (vertex id = edge id), adjacent
/// iff the edges share an endpoint.
pub fn line_graph(g: &Multigraph) -> Multigraph {
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let mut l = Multigraph::new();
    for &e in &ids {
        l.add_vertex(VertexId(e.0));
    }
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let (a1, b1) = g.endpoints(ids[i]).unwrap();
            let (a2, b2) = g.endpoints(ids[j]).unwrap();
            if a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2 {
                l.add_edge(VertexId(ids[i].0), VertexId(ids[j].0));
            }
        }
    }
    l
}

/// `Y(G, A)`: for each 3-clique in `A`, add a new degree-3 apex adjacent to
/// exactly that clique.
pub fn y_graph(
    g: &Multigraph,
    cliques: &[BTreeSet<VertexId>],
) -> Result<Multigraph, GraphError> {
    let mut out = g.clone();
    for c in cliques {
        if c.len() != 3 || !g.is_clique(c) {
            return Err(GraphError::NotAClique);
        }
        let apex = out.fresh_vertex();
        for &v in c {
            out.add_edge(apex, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_one_is_a_loop() {
        let c1 = cycle(1).unwrap();
        assert_eq!(c1.vertex_count(), 1);
        assert_eq!(c1.edge_count(), 1);
        assert!(c1.has_loop());
        assert_eq!(c1.degree(VertexId(0)), 2);
        assert_eq!(c1.girth(), Some(1));
    }

    #[test]
    fn basic_counts() {
        assert_eq!(complete(4).unwrap().edge_count(), 6);
        assert_eq!(complete_bipartite(3, 3).unwrap().edge_count(), 9);
        assert_eq!(cycle(2).unwrap().edge_count(), 2);
        assert_eq!(cycle(2).unwrap().girth(), Some(2));
        assert_eq!(path(4).unwrap().edge_count(), 3);
    }

    #[test]
    fn simplification_of_loop_graph() {
        let c1 = cycle(1).unwrap();
        let s = c1.simplification();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.edge_count(), 0);
    }

    #[test]
    fn line_graph_of_path() {
        let l = line_graph(&path(4).unwrap());
        assert_eq!(l.vertex_count(), 3);
        assert_eq!(l.edge_count(), 2); // P4 -> P3
    }

    #[test]
    fn line_graph_edge_count_formula() {
        // sum over v of C(deg v, 2) for simple graphs
        let g = complete(5).unwrap();
        let l = line_graph(&g);
        assert_eq!(l.edge_count(), 5 * (4 * 3 / 2));
    }

    #[test]
    fn join_c5_k2bar_shape() {
        let c5 = cycle(5).unwrap();
        let k2bar = Multigraph::with_vertices(2);
        let (g, _) = join(&c5, &k2bar);
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edge_count(), 5 + 10);
    }

    #[test]
    fn contract_edge_merges() {
        let mut g = Multigraph::with_vertices(3);
        let e = g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(0), VertexId(2));
        let h = g.contract_edge(e).unwrap();
        assert_eq!(h.vertex_count(), 2);
        // the two remaining edges become parallel 0-2 edges
        assert_eq!(h.edges_between(VertexId(0), VertexId(2)).len(), 2);
    }

    #[test]
    fn y_graph_on_triangle() {
        let k3 = complete(3).unwrap();
        let tri: BTreeSet<VertexId> = k3.vertices().collect();
        let y = y_graph(&k3, &[tri]).unwrap();
        assert_eq!(y.vertex_count(), 4);
        assert_eq!(y.edge_count(), 6); // K4
    }

    #[test]
    fn girth_of_cycles() {
        for n in 3..8 {
            assert_eq!(cycle(n).unwrap().girth(), Some(n as usize));
        }
        assert_eq!(path(5).unwrap().girth(), None);
        assert_eq!(complete(4).unwrap().girth(), Some(3));
        assert_eq!(complete_bipartite(2, 3).unwrap().girth(), Some(4));
    }
}
