//! Reduction of a trigraph over a ≥3-subdivision of a multigraph to a
//! trigraph whose underlying graph is an induced subgraph of the double
//! subdivision of the simplified base.
//!
//! The width bound is `d = max{Δ^R(H), 2+μ}` where `μ = 1` iff some branch
//! vertex carries a red edge.  The reduction works by case analysis on the
//! multiplicity structure of the base: parallel short paths are merged,
//! loops are folded into an incident edge's long path, parallel long paths
//! are merged after shrinking them to length 4, and finally every surviving
//! long path is shrunk to length 4.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::{EdgeId, Multigraph, SubdividedGraph};
use crate::trigraph::{ContractionSequence, Trigraph, VertexId};

use super::{demand_verified, SynthError};

/// Which pieces of the double-subdivision structure survive for one edge of
/// the simplified base.  `a < b` is the key order; `x` roles are the two
/// interiors of the length-3 path, `y` roles belong to the length-4 path.
/// A pendant (only one `y` end plus the middle) occurs when a loop was
/// folded against this edge but nothing supplied the other half.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeParts {
    pub x_ab: Option<VertexId>,
    pub x_ba: Option<VertexId>,
    pub y_ab: Option<VertexId>,
    pub y_mid: Option<VertexId>,
    pub y_ba: Option<VertexId>,
}

impl EdgeParts {
    fn expected_edges(&self, a: VertexId, b: VertexId, out: &mut BTreeSet<(VertexId, VertexId)>) {
        let mut put = |u: VertexId, v: VertexId| {
            out.insert(crate::trigraph::pair(u, v));
        };
        if let (Some(xa), Some(xb)) = (self.x_ab, self.x_ba) {
            put(a, xa);
            put(xa, xb);
            put(xb, b);
        }
        match (self.y_ab, self.y_mid, self.y_ba) {
            (Some(ya), Some(m), Some(yb)) => {
                put(a, ya);
                put(ya, m);
                put(m, yb);
                put(yb, b);
            }
            (Some(ya), Some(m), None) => {
                put(a, ya);
                put(ya, m);
            }
            (None, Some(m), Some(yb)) => {
                put(b, yb);
                put(yb, m);
            }
            _ => {}
        }
    }

    fn vertices(&self) -> impl Iterator<Item = VertexId> {
        [self.x_ab, self.x_ba, self.y_ab, self.y_mid, self.y_ba]
            .into_iter()
            .flatten()
    }
}

/// Result of the reduction: a verified partial sequence, the width it was
/// verified at, the final trigraph, the simplified base, and the role map
/// locating every surviving subdivision vertex.
#[derive(Clone, Debug)]
pub struct ThetaReduction {
    pub seq: ContractionSequence,
    pub d: usize,
    pub result: Trigraph,
    /// Simplification of the input base (no loops, no parallel edges).
    pub base: Multigraph,
    /// Surviving structure per base edge, keyed by the ordered vertex pair.
    pub parts: BTreeMap<(VertexId, VertexId), EdgeParts>,
}

struct Reducer {
    cur: Trigraph,
    seq: ContractionSequence,
    base: Multigraph,
    paths: BTreeMap<EdgeId, Vec<VertexId>>,
}

impl Reducer {
    fn contract(&mut self, u: VertexId, v: VertexId, target: VertexId) -> Result<(), SynthError> {
        self.cur = self.cur.contract(u, v, target)?;
        self.seq.push(u, v, target);
        Ok(())
    }

    fn ell(&self, e: EdgeId) -> usize {
        self.paths[&e].len() - 1
    }

    /// Interior vertex at distance `k` from endpoint `a` along edge `f`.
    /// `f` must not be a loop.
    fn entry(&self, f: EdgeId, a: VertexId, k: usize) -> VertexId {
        let p = &self.paths[&f];
        if p[0] == a {
            p[k]
        } else {
            p[p.len() - 1 - k]
        }
    }

    /// The companion edge a loop is folded against: an incident non-loop
    /// edge of maximal subdivision length, ties broken by edge id.
    fn eta(&self, e: EdgeId) -> Option<EdgeId> {
        let (a, _) = self.base.endpoints(e)?;
        self.base
            .edges()
            .filter(|&(f, (x, y))| f != e && x != y && (x == a || y == a))
            .max_by(|&(f, _), &(g, _)| {
                self.ell(f)
                    .cmp(&self.ell(g))
                    .then(g.cmp(&f)) // smaller id wins ties
            })
            .map(|(f, _)| f)
    }

    fn remove(&mut self, e: EdgeId) {
        self.base.remove_edge(e);
        self.paths.remove(&e);
    }

    /// Two distinct edges with equal endpoint pairs and subdivision lengths
    /// in the given class (`short`: length 3 exactly, else length ≥ 4),
    /// smallest ids first.
    fn parallel_pair(&self, short: bool) -> Option<(EdgeId, EdgeId)> {
        let mut by_pair: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for (e, p) in self.base.edges() {
            let l = self.ell(e);
            if (short && l == 3) || (!short && l >= 4) {
                by_pair.entry(p).or_default().push(e);
            }
        }
        by_pair
            .into_values()
            .filter(|v| v.len() >= 2)
            .map(|v| (v[0], v[1]))
            .next()
    }

    fn find_loop(&self, short: bool) -> Option<EdgeId> {
        self.base
            .edges()
            .filter(|&(e, (x, y))| {
                x == y && ((short && self.ell(e) == 3) || (!short && self.ell(e) >= 4))
            })
            .map(|(e, _)| e)
            .next()
    }

    /// Fold the interiors of `f` beyond the first two onto the second one,
    /// leaving a path of length 4 (or a loop remnant of the same shape).
    fn shrink_to_four(&mut self, f: EdgeId) -> Result<(), SynthError> {
        let p = self.paths[&f].clone();
        let l = p.len() - 1;
        for j in 3..=l.saturating_sub(2) {
            self.contract(p[2], p[j], p[2])?;
        }
        if l > 4 {
            let shrunk = alloc::vec![p[0], p[1], p[2], p[l - 1], p[l]];
            self.paths.insert(f, shrunk);
        }
        Ok(())
    }

    /// Parallel short paths: merge interiors of `e` into those of `e2`,
    /// drop `e`.
    fn case_parallel_short(&mut self, e2: EdgeId, e: EdgeId) -> Result<(), SynthError> {
        let p = self.paths[&e].clone();
        let q = self.paths[&e2].clone();
        self.contract(p[1], q[1], q[1])?;
        self.contract(p[2], q[2], q[2])?;
        self.remove(e);
        Ok(())
    }

    /// A short loop: fold its two interiors together, then onto the first
    /// interior of the companion edge at the loop vertex.
    fn case_short_loop(&mut self, e: EdgeId) -> Result<(), SynthError> {
        let f = self.eta(e).ok_or(SynthError::PreconditionViolated(
            "a loop needs an incident non-loop edge",
        ))?;
        let (a, _) = self.base.endpoints(e).expect("loop exists");
        let p = self.paths[&e].clone();
        let target = self.entry(f, a, 1);
        self.contract(p[1], p[2], p[1])?;
        self.contract(p[1], target, target)?;
        self.remove(e);
        Ok(())
    }

    /// Parallel long paths: shrink both to length 4, then merge end-by-end
    /// into `e2` and drop `e`.
    fn case_parallel_long(&mut self, e2: EdgeId, e: EdgeId) -> Result<(), SynthError> {
        self.shrink_to_four(e)?;
        self.shrink_to_four(e2)?;
        let p = self.paths[&e].clone();
        let q = self.paths[&e2].clone();
        self.contract(p[1], q[1], q[1])?;
        self.contract(p[3], q[3], q[3])?;
        self.contract(p[2], q[2], q[2])?;
        self.remove(e);
        Ok(())
    }

    /// A long loop whose companion edge is itself long: fold the loop to a
    /// pendant path of two vertices, then absorb it into the companion's
    /// first two interiors at the loop vertex.
    fn case_long_loop(&mut self, e: EdgeId, f: EdgeId) -> Result<(), SynthError> {
        let (a, _) = self.base.endpoints(e).expect("loop exists");
        let p = self.paths[&e].clone();
        let l = p.len() - 1;
        self.contract(p[1], p[l - 1], p[1])?;
        for j in 3..=l - 2 {
            self.contract(p[2], p[j], p[2])?;
        }
        let (t1, t2) = (self.entry(f, a, 1), self.entry(f, a, 2));
        self.contract(p[1], t1, t1)?;
        self.contract(p[2], t2, t2)?;
        self.remove(e);
        Ok(())
    }

    /// Terminal shaping: every remaining loop becomes a pendant prefix of
    /// its companion's length-4 path, every long edge is shrunk to length 4,
    /// and pendants of two loops sharing a companion are joined.
    fn case_terminal(&mut self) -> Result<BTreeMap<(VertexId, VertexId), EdgeParts>, SynthError> {
        // loop id -> (loop vertex, companion edge, pendant interiors)
        let mut pendants: Vec<(EdgeId, VertexId, EdgeId, VertexId, VertexId)> = Vec::new();
        let loops: Vec<(EdgeId, VertexId)> = self
            .base
            .edges()
            .filter(|&(_, (x, y))| x == y)
            .map(|(e, (x, _))| (e, x))
            .collect();
        for (e, a) in loops {
            let f = self.eta(e).ok_or(SynthError::PreconditionViolated(
                "a loop needs an incident non-loop edge",
            ))?;
            let p = self.paths[&e].clone();
            let l = p.len() - 1;
            self.contract(p[1], p[l - 1], p[1])?;
            for j in 3..=l - 2 {
                self.contract(p[2], p[j], p[2])?;
            }
            pendants.push((e, a, f, p[1], p[2]));
            self.remove(e);
        }
        let long_edges: Vec<EdgeId> = self
            .base
            .edge_ids()
            .filter(|&e| self.ell(e) >= 4)
            .collect();
        for f in long_edges {
            self.shrink_to_four(f)?;
        }
        // pendants sharing a companion edge pair up into a full long path
        let mut by_companion: BTreeMap<EdgeId, Vec<(VertexId, VertexId, VertexId)>> =
            BTreeMap::new();
        for (_, a, f, w1, w2) in pendants {
            by_companion.entry(f).or_default().push((a, w1, w2));
        }
        let mut parts: BTreeMap<(VertexId, VertexId), EdgeParts> = BTreeMap::new();
        for (f, ps) in &by_companion {
            let pair = self.base.endpoints(*f).expect("companion edge exists");
            let entry = parts.entry(pair).or_default();
            match ps.as_slice() {
                [(a, w1, w2)] => {
                    if *a == pair.0 {
                        entry.y_ab = Some(*w1);
                    } else {
                        entry.y_ba = Some(*w1);
                    }
                    entry.y_mid = Some(*w2);
                }
                [(a1, w1a, w2a), (_, w1b, w2b)] => {
                    self.contract(*w2a, *w2b, *w2a)?;
                    let (ya, yb) = if *a1 == pair.0 { (w1a, w1b) } else { (w1b, w1a) };
                    entry.y_ab = Some(*ya);
                    entry.y_ba = Some(*yb);
                    entry.y_mid = Some(*w2a);
                }
                _ => {
                    return Err(SynthError::StructureMismatch(
                        "more than two loops share a companion edge",
                    ))
                }
            }
        }
        for (e, pair) in self.base.edges() {
            let p = &self.paths[&e];
            let entry = parts.entry(pair).or_default();
            if p.len() == 4 {
                if entry.x_ab.is_some() {
                    return Err(SynthError::StructureMismatch("duplicate short path"));
                }
                entry.x_ab = Some(p[1]);
                entry.x_ba = Some(p[2]);
            } else {
                if entry.y_mid.is_some() {
                    return Err(SynthError::StructureMismatch("duplicate long path"));
                }
                entry.y_ab = Some(p[1]);
                entry.y_mid = Some(p[2]);
                entry.y_ba = Some(p[3]);
            }
        }
        Ok(parts)
    }

    /// Base with a single branch vertex: everything is a loop; contract down
    /// to one vertex.
    fn case_single_vertex(&mut self, w0: VertexId) -> Result<(), SynthError> {
        let long: Vec<EdgeId> = self
            .base
            .edge_ids()
            .filter(|&e| self.ell(e) >= 4)
            .collect();
        if long.is_empty() {
            // bouquet of triangles: fold each to a pendant, merge pendants,
            // absorb the last one
            let mut pendant: Option<VertexId> = None;
            let es: Vec<EdgeId> = self.base.edge_ids().collect();
            for e in es {
                let p = self.paths[&e].clone();
                self.contract(p[1], p[2], p[1])?;
                match pendant {
                    None => pendant = Some(p[1]),
                    Some(q) => self.contract(q, p[1], q)?,
                }
            }
            if let Some(q) = pendant {
                self.contract(w0, q, w0)?;
            }
            return Ok(());
        }
        let e = *long
            .iter()
            .max_by(|&&f, &&g| self.ell(f).cmp(&self.ell(g)).then(g.cmp(&f)))
            .expect("nonempty");
        let others: Vec<EdgeId> = self.base.edge_ids().filter(|&f| f != e).collect();
        let pe = self.paths[&e].clone();
        for e2 in others {
            let p = self.paths[&e2].clone();
            let l = p.len() - 1;
            self.contract(p[1], p[l - 1], p[1])?;
            for j in 3..=l.saturating_sub(2) {
                self.contract(p[2], p[j], p[2])?;
            }
            self.contract(pe[1], p[1], pe[1])?;
            if l >= 4 {
                self.contract(pe[2], p[2], pe[2])?;
            }
            self.remove(e2);
        }
        // peel the remaining cycle through the branch vertex
        while self.cur.vertex_count() > 1 {
            let x = *self
                .cur
                .neighbors(w0)
                .first()
                .ok_or(SynthError::StructureMismatch("disconnected remnant"))?;
            self.contract(w0, x, w0)?;
        }
        Ok(())
    }
}

/// Reduce `h`, a trigraph whose underlying graph is the given ≥3-subdivision,
/// to an induced subgraph of the double subdivision of the simplified base.
/// Branch-vertex red degrees never increase.
pub fn lemma_theta_reduce(
    h: &Trigraph,
    sub: &SubdividedGraph,
) -> Result<ThetaReduction, SynthError> {
    if sub.min_length() < 3 {
        return Err(SynthError::NotASubdivision);
    }
    if h.vertex_set() != sub.graph.vertex_set() {
        return Err(SynthError::NotASubdivision);
    }
    let host_pairs: BTreeSet<(VertexId, VertexId)> = sub
        .graph
        .edges()
        .map(|(_, (a, b))| crate::trigraph::pair(a, b))
        .collect();
    if h.underlying_edges() != host_pairs {
        return Err(SynthError::NotASubdivision);
    }

    let mu = sub
        .base
        .vertices()
        .any(|v| h.red_degree(v).unwrap_or(0) >= 1) as usize;
    let d = h.max_red_degree().max(2 + mu);

    let mut r = Reducer {
        cur: h.clone(),
        seq: ContractionSequence::new(),
        base: sub.base.clone(),
        paths: sub.path_of.clone(),
    };

    let parts;
    loop {
        if r.base.vertex_count() == 1 {
            let w0 = r.base.vertices().next().expect("one vertex");
            r.case_single_vertex(w0)?;
            parts = BTreeMap::new();
            break;
        }
        if let Some((e2, e)) = r.parallel_pair(true) {
            r.case_parallel_short(e2, e)?;
        } else if let Some(e) = r.find_loop(true) {
            r.case_short_loop(e)?;
        } else if let Some((e2, e)) = r.parallel_pair(false) {
            r.case_parallel_long(e2, e)?;
        } else if let Some((e, f)) = r.find_loop(false).and_then(|e| {
            let f = r.eta(e)?;
            (r.ell(f) >= 4).then_some((e, f))
        }) {
            r.case_long_loop(e, f)?;
        } else {
            parts = r.case_terminal()?;
            break;
        }
    }

    let base0 = r.base.simplification();
    let result = r.cur;

    // structural check: the survivor must be exactly the shape the role map
    // claims, an induced subgraph of the double subdivision of the base
    let mut expected_verts: BTreeSet<VertexId> = base0.vertices().collect();
    let mut expected_edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    if base0.vertex_count() == 1 {
        // fully contracted
        if result.vertex_count() != 1 {
            return Err(SynthError::StructureMismatch("expected a full contraction"));
        }
    } else {
        for (&(a, b), ep) in &parts {
            expected_verts.extend(ep.vertices());
            ep.expected_edges(a, b, &mut expected_edges);
        }
        if result.vertex_set() != &expected_verts
            || result.underlying_edges() != expected_edges
        {
            return Err(SynthError::StructureMismatch(
                "survivor is not the expected double-subdivision subgraph",
            ));
        }
        for v in base0.vertices() {
            if result.red_degree(v)? > h.red_degree(v)? {
                return Err(SynthError::StructureMismatch(
                    "branch-vertex red degree increased",
                ));
            }
        }
    }

    let partial = result.vertex_count() > 1;
    demand_verified(h, &r.seq, d, partial)?;

    Ok(ThetaReduction {
        seq: r.seq,
        d,
        result,
        base: base0,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, subdivide, uniform_lengths};
    use crate::trigraph::Color;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn uniform_five_subdivision_of_k3_reduces_at_two() {
        let k3 = complete(3).unwrap();
        let sub = subdivide(&k3, &uniform_lengths(&k3, 5)).unwrap();
        let h = sub.graph.to_trigraph();
        let red = lemma_theta_reduce(&h, &sub).unwrap();
        assert_eq!(red.d, 2);
        assert_eq!(red.base, k3.simplification());
        // every edge keeps only a length-4 path: 3 + 3*3 vertices remain
        assert_eq!(red.result.vertex_count(), 12);
        for ep in red.parts.values() {
            assert!(ep.x_ab.is_none());
            assert!(ep.y_ab.is_some() && ep.y_mid.is_some() && ep.y_ba.is_some());
        }
        // one fold per edge
        assert_eq!(red.seq.len(), 3);
    }

    #[test]
    fn loop_and_parallel_edges_reduce_through_all_loop_cases() {
        // two loops at vertex 0 (lengths 3 and 4) plus two parallel 0-1
        // edges of length 4, and a plain 0-1 edge of length 3
        let mut base = Multigraph::new();
        base.add_vertex(v(0));
        base.add_vertex(v(1));
        let l3 = base.add_edge(v(0), v(0));
        let l4 = base.add_edge(v(0), v(0));
        let p1 = base.add_edge(v(0), v(1));
        let p2 = base.add_edge(v(0), v(1));
        let s = base.add_edge(v(0), v(1));
        let lengths: BTreeMap<EdgeId, u32> =
            [(l3, 3), (l4, 4), (p1, 4), (p2, 4), (s, 3)].into_iter().collect();
        let sub = subdivide(&base, &lengths).unwrap();
        let h = sub.graph.to_trigraph();
        let red = lemma_theta_reduce(&h, &sub).unwrap();
        assert_eq!(red.d, 2);
        assert_eq!(red.base.edge_count(), 1);
        let ep = red.parts[&(v(0), v(1))];
        assert!(ep.x_ab.is_some() && ep.x_ba.is_some());
        assert!(ep.y_ab.is_some() && ep.y_mid.is_some() && ep.y_ba.is_some());
        // survivor is the full double subdivision of a single edge: 7 vertices
        assert_eq!(red.result.vertex_count(), 7);
    }

    #[test]
    fn double_subdivision_shape_is_left_alone() {
        // base multigraph realizing the double subdivision: each K3 edge
        // doubled, one copy length 3 and one length 4
        let mut base = Multigraph::with_vertices(3);
        let mut lengths = BTreeMap::new();
        for (a, b) in [(0u32, 1u32), (0, 2), (1, 2)] {
            lengths.insert(base.add_edge(v(a), v(b)), 3);
            lengths.insert(base.add_edge(v(a), v(b)), 4);
        }
        let sub = subdivide(&base, &lengths).unwrap();
        let h = sub.graph.to_trigraph();
        let red = lemma_theta_reduce(&h, &sub).unwrap();
        assert!(red.seq.is_empty());
        assert_eq!(red.result, h);
        for ep in red.parts.values() {
            assert_eq!(ep.vertices().count(), 5);
        }
    }

    #[test]
    fn bouquet_of_loops_contracts_fully() {
        let mut base = Multigraph::new();
        base.add_vertex(v(0));
        let a = base.add_edge(v(0), v(0));
        let b = base.add_edge(v(0), v(0));
        let c = base.add_edge(v(0), v(0));
        let lengths: BTreeMap<EdgeId, u32> = [(a, 3), (b, 4), (c, 5)].into_iter().collect();
        let sub = subdivide(&base, &lengths).unwrap();
        let h = sub.graph.to_trigraph();
        let red = lemma_theta_reduce(&h, &sub).unwrap();
        assert_eq!(red.result.vertex_count(), 1);
        assert_eq!(red.d, 2);
    }

    #[test]
    fn branch_red_degree_is_not_increased_and_mu_raises_bound() {
        let k3 = complete(3).unwrap();
        let sub = subdivide(&k3, &uniform_lengths(&k3, 4)).unwrap();
        let mut h = sub.graph.to_trigraph();
        // make one branch-vertex edge red
        let w = *h.neighbors(v(0)).first().unwrap();
        h.add_edge(v(0), w, Color::Red).unwrap();
        let red = lemma_theta_reduce(&h, &sub).unwrap();
        assert_eq!(red.d, 3);
        assert!(red.result.red_degree(v(0)).unwrap() <= 1);
    }

    #[test]
    fn short_subdivision_is_rejected() {
        let k3 = complete(3).unwrap();
        let sub = subdivide(&k3, &uniform_lengths(&k3, 2)).unwrap();
        let h = sub.graph.to_trigraph();
        assert!(matches!(
            lemma_theta_reduce(&h, &sub),
            Err(SynthError::NotASubdivision)
        ));
    }
}
