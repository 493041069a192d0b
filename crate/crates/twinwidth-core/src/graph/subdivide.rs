//! Edge subdivision with per-edge path lengths.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{EdgeId, GraphError, Multigraph};
use crate::trigraph::VertexId;

/// A subdivision of a base multigraph, remembering which path replaced each
/// base edge.
#[derive(Clone, Debug)]
pub struct SubdividedGraph {
    pub graph: Multigraph,
    pub base: Multigraph,
    /// For each base edge, the vertices of its replacing path in order,
    /// starting at the smaller endpoint.  Length-1 entries are the unchanged
    /// edge.
    pub path_of: BTreeMap<EdgeId, Vec<VertexId>>,
    /// The vertices inherited from the base.
    pub branch_vertices: BTreeSet<VertexId>,
}

impl SubdividedGraph {
    /// Interior vertices of the path replacing `e` (may be empty).
    pub fn interior(&self, e: EdgeId) -> &[VertexId] {
        let p = &self.path_of[&e];
        &p[1..p.len() - 1]
    }

    /// Minimum path length over all base edges.
    pub fn min_length(&self) -> u32 {
        self.path_of
            .values()
            .map(|p| (p.len() - 1) as u32)
            .min()
            .unwrap_or(u32::MAX)
    }
}

/// Replace each base edge `e` by a path with `lengths[e]` edges.  A length of
/// 1 leaves the edge alone; every edge must be given a length `>= 1`.
/// Subdivision vertices get fresh ids above every base id.
pub fn subdivide(
    base: &Multigraph,
    lengths: &BTreeMap<EdgeId, u32>,
) -> Result<SubdividedGraph, GraphError> {
    for e in base.edge_ids() {
        match lengths.get(&e) {
            Some(l) if *l >= 1 => {}
            _ => return Err(GraphError::BadLength(e)),
        }
    }
    let mut graph = Multigraph::new();
    for v in base.vertices() {
        graph.add_vertex(v);
    }
    let mut path_of = BTreeMap::new();
    for (e, (u, v)) in base.edges() {
        let l = lengths[&e];
        let mut path = Vec::with_capacity(l as usize + 1);
        path.push(u);
        let mut prev = u;
        for _ in 1..l {
            let w = graph.fresh_vertex();
            graph.add_edge(prev, w);
            path.push(w);
            prev = w;
        }
        graph.add_edge(prev, v);
        path.push(v);
        path_of.insert(e, path);
    }
    Ok(SubdividedGraph {
        graph,
        base: base.clone(),
        path_of,
        branch_vertices: base.vertex_set().clone(),
    })
}

/// Same length for every edge.
pub fn uniform_lengths(base: &Multigraph, l: u32) -> BTreeMap<EdgeId, u32> {
    base.edge_ids().map(|e| (e, l)).collect()
}

/// Subdivide and require the result to be a simple graph (fails for loops
/// subdivided fewer than 3 times or parallel edges both kept short).
pub fn subdivide_simple(
    base: &Multigraph,
    lengths: &BTreeMap<EdgeId, u32>,
) -> Result<SubdividedGraph, GraphError> {
    let s = subdivide(base, lengths)?;
    if !s.graph.is_simple() {
        return Err(GraphError::NonSimpleResult);
    }
    Ok(s)
}
