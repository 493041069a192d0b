//! Gadget graphs used by the sequence synthesizer: the double subdivision
//! θ(G), separations whose first side is a cycle, and the ψ replacement
//! graphs that substitute an apex gadget for such a cycle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{EdgeId, GraphError, Multigraph};
use crate::trigraph::{Trigraph, VertexId};

/// The union of a 2-subdivision and a 3-subdivision of a simple graph,
/// sharing the branch vertices: every base edge is replaced by both a
/// length-3 and a length-4 path.
#[derive(Clone, Debug)]
pub struct ThetaGraph {
    pub graph: Multigraph,
    pub base: Multigraph,
    /// Length-3 path per base edge: `[a, x_ab, x_ba, b]` with `a < b`.
    pub path3: BTreeMap<EdgeId, Vec<VertexId>>,
    /// Length-4 path per base edge: `[a, y_ab, y_e, y_ba, b]` with `a < b`.
    pub path4: BTreeMap<EdgeId, Vec<VertexId>>,
}

impl ThetaGraph {
    fn path_role(
        &self,
        paths: &BTreeMap<EdgeId, Vec<VertexId>>,
        a: VertexId,
        b: VertexId,
        from_end: usize,
    ) -> Option<VertexId> {
        let e = *self.base.edges_between(a, b).first()?;
        let p = &paths[&e];
        Some(if p[0] == a {
            p[from_end]
        } else {
            p[p.len() - 1 - from_end]
        })
    }

    /// The internal vertex of the length-3 path between `a` and `b` that is
    /// adjacent to `a`.
    pub fn x(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        self.path_role(&self.path3, a, b, 1)
    }

    /// The internal vertex of the length-4 path between `a` and `b` that is
    /// adjacent to `a`.
    pub fn y(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        self.path_role(&self.path4, a, b, 1)
    }

    /// The middle vertex of the length-4 path between `a` and `b`.
    pub fn y_mid(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        self.path_role(&self.path4, a, b, 2)
    }

    /// The unique 9-cycle through a base triangle using only the length-3
    /// paths, as a vertex set.
    pub fn short_cycle(&self, s: &[VertexId; 3]) -> Result<BTreeSet<VertexId>, GraphError> {
        self.triangle_cycle(s, &self.path3)
    }

    /// The unique 12-cycle through a base triangle using only the length-4
    /// paths, as a vertex set.
    pub fn long_cycle(&self, s: &[VertexId; 3]) -> Result<BTreeSet<VertexId>, GraphError> {
        self.triangle_cycle(s, &self.path4)
    }

    fn triangle_cycle(
        &self,
        s: &[VertexId; 3],
        paths: &BTreeMap<EdgeId, Vec<VertexId>>,
    ) -> Result<BTreeSet<VertexId>, GraphError> {
        let mut out = BTreeSet::new();
        for (a, b) in [(s[0], s[1]), (s[1], s[2]), (s[0], s[2])] {
            let e = *self
                .base
                .edges_between(a, b)
                .first()
                .ok_or(GraphError::NotAClique)?;
            out.extend(paths[&e].iter().copied());
        }
        Ok(out)
    }

    /// The separation whose first side is the 9-cycle through the triangle
    /// `s` and whose second side is everything else plus `s` itself.
    pub fn sigma(&self, s: &[VertexId; 3]) -> Result<NablaSeparation, GraphError> {
        let u = self.short_cycle(s)?;
        let mut u_prime: BTreeSet<VertexId> = self
            .graph
            .vertices()
            .filter(|v| !u.contains(v))
            .collect();
        u_prime.extend(s.iter().copied());
        Ok(NablaSeparation { u, u_prime })
    }
}

/// The double subdivision of a simple graph.
pub fn theta(base: &Multigraph) -> Result<ThetaGraph, GraphError> {
    if !base.is_simple() {
        return Err(GraphError::NotSimple);
    }
    let mut graph = Multigraph::new();
    for v in base.vertices() {
        graph.add_vertex(v);
    }
    let mut path3 = BTreeMap::new();
    let mut path4 = BTreeMap::new();
    for (e, (a, b)) in base.edges() {
        for (l, out) in [(3u32, &mut path3), (4, &mut path4)] {
            let mut p = Vec::new();
            p.push(a);
            let mut prev = a;
            for _ in 1..l {
                let w = graph.fresh_vertex();
                graph.add_edge(prev, w);
                p.push(w);
                prev = w;
            }
            graph.add_edge(prev, b);
            p.push(b);
            out.insert(e, p);
        }
    }
    Ok(ThetaGraph {
        graph,
        base: base.clone(),
        path3,
        path4,
    })
}

/// A separation `(U, U')` of a trigraph where the first side induces a
/// cycle, the second side is connected, and the shared vertices are pairwise
/// at distance at least 3 along that cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaSeparation {
    pub u: BTreeSet<VertexId>,
    pub u_prime: BTreeSet<VertexId>,
}

impl NablaSeparation {
    /// The shared vertices `U ∩ U'`.
    pub fn attachments(&self) -> BTreeSet<VertexId> {
        self.u.intersection(&self.u_prime).copied().collect()
    }

    /// Check every defining condition against a concrete trigraph.
    pub fn is_valid_for(&self, h: &Trigraph) -> bool {
        let all: BTreeSet<VertexId> = self.u.union(&self.u_prime).copied().collect();
        if all != *h.vertex_set() {
            return false;
        }
        // no edge may cross between the private parts of the two sides
        for (a, b) in h.underlying_edges() {
            let a_private = self.u.contains(&a) && !self.u_prime.contains(&a);
            let b_private = self.u.contains(&b) && !self.u_prime.contains(&b);
            let a_other = self.u_prime.contains(&a) && !self.u.contains(&a);
            let b_other = self.u_prime.contains(&b) && !self.u.contains(&b);
            if (a_private && b_other) || (a_other && b_private) {
                return false;
            }
        }
        let shared = self.attachments();
        if shared.len() < 2 {
            return false;
        }
        let Ok(cyc) = h.induced(&self.u) else {
            return false;
        };
        if !cyc.is_connected() || cyc.vertices().any(|v| cyc.degree(v) != 2) {
            return false;
        }
        let Ok(side) = h.induced(&self.u_prime) else {
            return false;
        };
        if !side.is_connected() {
            return false;
        }
        // walk the cycle to get positions, then check pairwise distances
        let order = cycle_order(&cyc);
        let n = order.len();
        let pos: BTreeMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let shared: Vec<VertexId> = shared.into_iter().collect();
        for i in 0..shared.len() {
            for j in (i + 1)..shared.len() {
                let d = pos[&shared[i]].abs_diff(pos[&shared[j]]);
                if d.min(n - d) < 3 {
                    return false;
                }
            }
        }
        true
    }
}

/// Vertices of a trigraph that induces a cycle, in traversal order.
fn cycle_order(cyc: &Trigraph) -> Vec<VertexId> {
    let start = match cyc.vertices().next() {
        Some(v) => v,
        None => return Vec::new(),
    };
    let mut order = Vec::with_capacity(cyc.vertex_count());
    let mut prev = None;
    let mut cur = start;
    loop {
        order.push(cur);
        let next = cyc
            .neighbors(cur)
            .into_iter()
            .find(|&w| Some(w) != prev)
            .expect("cycle vertex has two neighbours");
        if next == start {
            return order;
        }
        prev = Some(cur);
        cur = next;
    }
}

/// One apex gadget of a ψ graph: the new apex plus, for each attachment
/// vertex `u`, the middle vertex of the new length-2 path from the apex
/// to `u`.
#[derive(Clone, Debug)]
pub struct PsiGadget {
    pub apex: VertexId,
    pub mid: BTreeMap<VertexId, VertexId>,
}

/// A graph built from a trigraph by attaching an apex gadget per separation.
#[derive(Clone, Debug)]
pub struct PsiGraph {
    pub graph: Multigraph,
    pub gadgets: Vec<PsiGadget>,
}

/// Attach one apex gadget, taking fresh ids from `next` upwards.
fn attach_gadget(graph: &mut Multigraph, shared: &BTreeSet<VertexId>, next: &mut u32) -> PsiGadget {
    let apex = VertexId(*next);
    *next += 1;
    graph.add_vertex(apex);
    let mut mid = BTreeMap::new();
    for &u in shared {
        let y = VertexId(*next);
        *next += 1;
        graph.add_vertex(y);
        graph.add_edge(u, y);
        graph.add_edge(apex, y);
        mid.insert(u, y);
    }
    PsiGadget { apex, mid }
}

/// First id strictly above every vertex of `h`.
fn above(h: &Trigraph) -> u32 {
    h.vertex_set().iter().next_back().map_or(0, |v| v.0 + 1)
}

/// The replacement graph for a single separation: the cycle side `U` of the
/// trigraph plus a new apex joined by length-2 paths to every attachment
/// vertex.  Gadget ids are allocated above every vertex of `h`, so they never
/// collide with the host trigraph.
pub fn psi_star(h: &Trigraph, s: &NablaSeparation) -> Result<PsiGraph, GraphError> {
    let mut graph = Multigraph::new();
    for &v in &s.u {
        graph.add_vertex(v);
    }
    for (a, b) in h.underlying_edges() {
        if s.u.contains(&a) && s.u.contains(&b) {
            graph.add_edge(a, b);
        }
    }
    let mut next = above(h);
    let gadget = attach_gadget(&mut graph, &s.attachments(), &mut next);
    Ok(PsiGraph {
        graph,
        gadgets: alloc::vec![gadget],
    })
}

/// The union of the underlying graph of `h` with one apex gadget per
/// separation.  Gadgets are returned in the order of `seps`.
pub fn psi(h: &Trigraph, seps: &[NablaSeparation]) -> Result<PsiGraph, GraphError> {
    let mut graph = Multigraph::new();
    for v in h.vertices() {
        graph.add_vertex(v);
    }
    for (a, b) in h.underlying_edges() {
        graph.add_edge(a, b);
    }
    let mut next = above(h);
    let mut gadgets = Vec::with_capacity(seps.len());
    for s in seps {
        gadgets.push(attach_gadget(&mut graph, &s.attachments(), &mut next));
    }
    Ok(PsiGraph { graph, gadgets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;

    fn theta_k3() -> ThetaGraph {
        theta(&complete(3).unwrap()).unwrap()
    }

    #[test]
    fn theta_counts() {
        let t = theta_k3();
        // 3 branch vertices + 3 edges x (2 + 3) subdivision vertices
        assert_eq!(t.graph.vertex_count(), 3 + 3 * 5);
        assert_eq!(t.graph.edge_count(), 3 * 7);
        for v in t.base.vertices() {
            assert_eq!(t.graph.degree(v), 4);
        }
    }

    #[test]
    fn theta_of_edge_is_c7() {
        let mut k2 = Multigraph::with_vertices(2);
        k2.add_edge(VertexId(0), VertexId(1));
        let t = theta(&k2).unwrap();
        assert_eq!(t.graph.vertex_count(), 7);
        assert_eq!(t.graph.girth(), Some(7));
        assert!(t.graph.vertices().all(|v| t.graph.degree(v) == 2));
    }

    #[test]
    fn roles_are_oriented() {
        let t = theta_k3();
        let (a, b) = (VertexId(0), VertexId(1));
        let xab = t.x(a, b).unwrap();
        let xba = t.x(b, a).unwrap();
        assert_ne!(xab, xba);
        assert!(!t.graph.edges_between(a, xab).is_empty());
        assert!(!t.graph.edges_between(b, xba).is_empty());
        assert!(!t.graph.edges_between(xab, xba).is_empty());
        let yab = t.y(a, b).unwrap();
        let mid = t.y_mid(a, b).unwrap();
        assert_eq!(mid, t.y_mid(b, a).unwrap());
        assert!(!t.graph.edges_between(yab, mid).is_empty());
    }

    #[test]
    fn sigma_is_a_valid_separation() {
        let t = theta_k3();
        let s = [VertexId(0), VertexId(1), VertexId(2)];
        let short = t.short_cycle(&s).unwrap();
        let long = t.long_cycle(&s).unwrap();
        assert_eq!(short.len(), 9);
        assert_eq!(long.len(), 12);
        let sep = t.sigma(&s).unwrap();
        let h = t.graph.to_trigraph();
        assert!(sep.is_valid_for(&h));
        assert_eq!(sep.attachments(), s.iter().copied().collect());
    }

    #[test]
    fn invalid_separations_rejected() {
        let t = theta_k3();
        let h = t.graph.to_trigraph();
        let s = [VertexId(0), VertexId(1), VertexId(2)];
        let mut sep = t.sigma(&s).unwrap();
        // drop an attachment from the second side: vertices no longer covered
        sep.u_prime.remove(&VertexId(0));
        let mut all_covered = sep.clone();
        all_covered.u_prime.insert(VertexId(0));
        assert!(all_covered.is_valid_for(&h));
        // move a private cycle vertex across: the cycle side breaks
        let private = *sep.u.iter().find(|v| !sep.u_prime.contains(v)).unwrap();
        let mut broken = all_covered.clone();
        broken.u.remove(&private);
        broken.u_prime.insert(private);
        assert!(!broken.is_valid_for(&h));
    }

    #[test]
    fn psi_adds_one_gadget_per_separation() {
        let t = theta_k3();
        let h = t.graph.to_trigraph();
        let sep = t.sigma(&[VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        let p = psi(&h, core::slice::from_ref(&sep)).unwrap();
        assert_eq!(p.gadgets.len(), 1);
        let g = &p.gadgets[0];
        assert_eq!(
            p.graph.vertex_count(),
            t.graph.vertex_count() + 1 + g.mid.len()
        );
        assert_eq!(p.graph.degree(g.apex), 3);
        for (&u, &y) in &g.mid {
            assert_eq!(p.graph.degree(y), 2);
            assert!(!p.graph.edges_between(u, y).is_empty());
            assert!(!p.graph.edges_between(g.apex, y).is_empty());
        }
        assert!(!h.vertex_set().contains(&g.apex));
    }

    #[test]
    fn psi_star_matches_induced_part_of_psi() {
        let t = theta_k3();
        let h = t.graph.to_trigraph();
        let sep = t.sigma(&[VertexId(0), VertexId(1), VertexId(2)]).unwrap();
        let p = psi_star(&h, &sep).unwrap();
        let g = &p.gadgets[0];
        // cycle side (9 vertices) plus apex and three path midpoints
        assert_eq!(p.graph.vertex_count(), 9 + 1 + 3);
        assert_eq!(p.graph.edge_count(), 9 + 6);
        assert_eq!(p.graph.degree(g.apex), 3);
        // the unique degree-3 vertex off the triangle is the apex
        let deg3: Vec<VertexId> = p
            .graph
            .vertices()
            .filter(|&v| p.graph.degree(v) == 3 && !sep.attachments().contains(&v))
            .collect();
        assert_eq!(deg3, alloc::vec![g.apex]);
    }
}
