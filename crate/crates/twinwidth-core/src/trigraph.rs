//! Trigraphs and contraction sequences.
//!
//! A trigraph is a graph whose edge set is partitioned into *black* edges
//! (definite adjacencies) and *red* edges (error edges produced by
//! contractions).  Contracting a pair `{u, v}` keeps shared black neighbours
//! black and turns every other surviving adjacency red.  The twin-width of a
//! trigraph is the least `d` such that some sequence of contractions down to a
//! single vertex keeps every intermediate maximum red degree at most `d`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

/// Vertex identifier. Totally ordered; the ordering is stable across all
/// operations and is used for deterministic tie-breaking.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Edge colour in a trigraph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Color {
    Black,
    Red,
}

/// Normalise an unordered pair so the smaller vertex comes first.
#[inline]
pub fn pair(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A trigraph: vertices plus colored edges. No loops; an unordered pair holds
/// at most one edge, which is either black or red.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Trigraph {
    verts: BTreeSet<VertexId>,
    edges: BTreeMap<(VertexId, VertexId), Color>,
}

/// Errors from trigraph operations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrigraphError {
    UnknownVertex(VertexId),
    /// Contraction target is neither of the contracted vertices.
    BadTarget(VertexId),
    SelfContraction(VertexId),
    LoopEdge(VertexId),
    /// A step of a sequence referenced a vertex missing at replay time.
    InvalidStep { index: usize, vertex: VertexId },
}

impl fmt::Display for TrigraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigraphError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            TrigraphError::BadTarget(v) => write!(f, "target {v} is not one of the contracted pair"),
            TrigraphError::SelfContraction(v) => write!(f, "cannot contract {v} with itself"),
            TrigraphError::LoopEdge(v) => write!(f, "loop edge at {v} not allowed in a trigraph"),
            TrigraphError::InvalidStep { index, vertex } => {
                write!(f, "step {index}: vertex {vertex} missing at replay time")
            }
        }
    }
}

impl Trigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from explicit vertex and edge lists.
    pub fn from_edges<I, J>(verts: I, black: J, red: J) -> Result<Self, TrigraphError>
    where
        I: IntoIterator<Item = VertexId>,
        J: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Trigraph::new();
        for v in verts {
            g.add_vertex(v);
        }
        for (u, v) in black {
            g.add_edge(u, v, Color::Black)?;
        }
        for (u, v) in red {
            g.add_edge(u, v, Color::Red)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.verts.insert(v);
    }

    /// Insert or recolor an edge. Both endpoints must already exist.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, c: Color) -> Result<(), TrigraphError> {
        if u == v {
            return Err(TrigraphError::LoopEdge(u));
        }
        for w in [u, v] {
            if !self.verts.contains(&w) {
                return Err(TrigraphError::UnknownVertex(w));
            }
        }
        self.edges.insert(pair(u, v), c);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.edges.remove(&pair(u, v));
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        self.verts.remove(&v);
        self.edges.retain(|&(a, b), _| a != v && b != v);
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.verts.contains(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.verts
    }

    pub fn edge_color(&self, u: VertexId, v: VertexId) -> Option<Color> {
        self.edges.get(&pair(u, v)).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = ((VertexId, VertexId), Color)> + '_ {
        self.edges.iter().map(|(&p, &c)| (p, c))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn black_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .filter(|(_, &c)| c == Color::Black)
            .map(|(&p, _)| p)
    }

    pub fn red_edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges
            .iter()
            .filter(|(_, &c)| c == Color::Red)
            .map(|(&p, _)| p)
    }

    /// All neighbours of `v` (black or red), in increasing order.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn red_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.edges
            .iter()
            .filter(|(_, &c)| c == Color::Red)
            .filter_map(|(&(a, b), _)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Number of red edges incident to `v`.
    pub fn red_degree(&self, v: VertexId) -> Result<usize, TrigraphError> {
        if !self.verts.contains(&v) {
            return Err(TrigraphError::UnknownVertex(v));
        }
        Ok(self.red_neighbors(v).len())
    }

    /// Maximum red degree over all vertices; 0 for the empty trigraph.
    pub fn max_red_degree(&self) -> usize {
        let mut count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (&(a, b), &c) in &self.edges {
            if c == Color::Red {
                *count.entry(a).or_insert(0) += 1;
                *count.entry(b).or_insert(0) += 1;
            }
        }
        count.values().copied().max().unwrap_or(0)
    }

    /// Contract `{u, v}` to `target` (which must be `u` or `v`).
    ///
    /// For every other vertex `y`: the edge `target–y` is black iff both
    /// `u–y` and `v–y` were black, absent iff neither existed, and red
    /// otherwise.  Edges not incident to `u` or `v` are unchanged.
    pub fn contract(
        &self,
        u: VertexId,
        v: VertexId,
        target: VertexId,
    ) -> Result<Trigraph, TrigraphError> {
        if u == v {
            return Err(TrigraphError::SelfContraction(u));
        }
        for w in [u, v] {
            if !self.verts.contains(&w) {
                return Err(TrigraphError::UnknownVertex(w));
            }
        }
        if target != u && target != v {
            return Err(TrigraphError::BadTarget(target));
        }
        let mut out = Trigraph::new();
        for &w in &self.verts {
            if w != u && w != v {
                out.verts.insert(w);
            }
        }
        out.verts.insert(target);
        for (&(a, b), &c) in &self.edges {
            if a != u && a != v && b != u && b != v {
                out.edges.insert((a, b), c);
            }
        }
        for &y in &self.verts {
            if y == u || y == v {
                continue;
            }
            let cu = self.edge_color(u, y);
            let cv = self.edge_color(v, y);
            let merged = match (cu, cv) {
                (None, None) => None,
                (Some(Color::Black), Some(Color::Black)) => Some(Color::Black),
                _ => Some(Color::Red),
            };
            if let Some(c) = merged {
                out.edges.insert(pair(target, y), c);
            }
        }
        Ok(out)
    }

    /// The induced subtrigraph on `X`, which must be a subset of the vertices.
    pub fn induced(&self, x: &BTreeSet<VertexId>) -> Result<Trigraph, TrigraphError> {
        for &v in x {
            if !self.verts.contains(&v) {
                return Err(TrigraphError::UnknownVertex(v));
            }
        }
        let mut out = Trigraph::new();
        out.verts = x.clone();
        for (&(a, b), &c) in &self.edges {
            if x.contains(&a) && x.contains(&b) {
                out.edges.insert((a, b), c);
            }
        }
        Ok(out)
    }

    /// Delete a vertex set.
    pub fn without(&self, w: &BTreeSet<VertexId>) -> Trigraph {
        let keep: BTreeSet<VertexId> = self.verts.difference(w).copied().collect();
        self.induced(&keep).expect("keep is a subset of the vertices")
    }

    /// Is `self` a refinement of `other`?  Requires the same vertex set,
    /// every black edge of `other` black in `self`, every edge of `self`
    /// an edge of `other`, and every red edge of `self` red in `other`.
    /// (So a refinement may delete red edges or recolor them black.)
    pub fn is_refinement_of(&self, other: &Trigraph) -> bool {
        if self.verts != other.verts {
            return false;
        }
        for (p, c) in &other.edges {
            if *c == Color::Black && self.edges.get(p) != Some(&Color::Black) {
                return false;
            }
        }
        for (p, c) in &self.edges {
            match other.edges.get(p) {
                None => return false,
                Some(Color::Black) => {
                    if *c == Color::Red {
                        // other's black edges must stay black
                        return false;
                    }
                }
                Some(Color::Red) => {}
            }
        }
        true
    }

    /// Forget colors: the underlying simple graph as vertex + edge sets.
    pub fn underlying_edges(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.edges.keys().copied().collect()
    }

    /// Is the underlying graph connected (true for empty and 1-vertex graphs)?
    pub fn is_connected(&self) -> bool {
        let mut it = self.verts.iter();
        let start = match it.next() {
            Some(&v) => v,
            None => return true,
        };
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.verts.len()
    }
}

/// One contraction: merge `{u, v}` into `target` (one of the two).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ContractionStep {
    pub u: VertexId,
    pub v: VertexId,
    pub target: VertexId,
}

impl ContractionStep {
    pub fn new(u: VertexId, v: VertexId, target: VertexId) -> Self {
        ContractionStep { u, v, target }
    }
}

/// An ordered list of contraction steps.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ContractionSequence {
    pub steps: Vec<ContractionStep>,
}

impl ContractionSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, u: VertexId, v: VertexId, target: VertexId) {
        self.steps.push(ContractionStep::new(u, v, target));
    }

    pub fn extend(&mut self, other: &ContractionSequence) {
        self.steps.extend_from_slice(&other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Result of replaying a sequence against a red-degree bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerificationReport {
    pub ok: bool,
    /// Maximum red degree of each trigraph along the replay; entry 0 is the
    /// input trigraph, entry i ≥ 1 the trigraph after step i.
    pub per_step_max_red_degree: Vec<usize>,
    /// Index into `per_step_max_red_degree` of the first violation.
    pub failing_step: Option<usize>,
    /// A vertex realizing the violating red degree.
    pub witness_vertex: Option<VertexId>,
}

/// Replay `seq` from `start`, checking that every intermediate trigraph has
/// maximum red degree at most `d`.  When `partial` is false the final
/// trigraph must have exactly one vertex.
pub fn verify_sequence(
    start: &Trigraph,
    seq: &ContractionSequence,
    d: usize,
    partial: bool,
) -> Result<VerificationReport, TrigraphError> {
    let mut cur = start.clone();
    let mut per_step = Vec::with_capacity(seq.len() + 1);
    let mut failing = None;
    let mut witness = None;

    let record = |h: &Trigraph, idx: usize, failing: &mut Option<usize>, witness: &mut Option<VertexId>| {
        let m = h.max_red_degree();
        if m > d && failing.is_none() {
            *failing = Some(idx);
            *witness = h
                .vertices()
                .find(|&v| h.red_degree(v).unwrap_or(0) == m);
        }
        m
    };

    per_step.push(record(&cur, 0, &mut failing, &mut witness));
    for (i, st) in seq.steps.iter().enumerate() {
        for w in [st.u, st.v] {
            if !cur.has_vertex(w) {
                return Err(TrigraphError::InvalidStep { index: i, vertex: w });
            }
        }
        if st.target != st.u && st.target != st.v {
            return Err(TrigraphError::BadTarget(st.target));
        }
        cur = cur.contract(st.u, st.v, st.target)?;
        per_step.push(record(&cur, i + 1, &mut failing, &mut witness));
    }
    let complete_ok = partial || cur.vertex_count() == 1;
    Ok(VerificationReport {
        ok: failing.is_none() && complete_ok,
        per_step_max_red_degree: per_step,
        failing_step: failing,
        witness_vertex: witness,
    })
}

/// Stability constraints for partial sequences: `fixed` vertices are never
/// contracted; `stable` vertices are additionally not allowed to exceed
/// their initial red degree at any point.
#[derive(Clone, Debug, Default)]
pub struct StableConstraint {
    pub fixed: BTreeSet<VertexId>,
    pub stable: BTreeSet<VertexId>,
}

impl StableConstraint {
    pub fn fixing<I: IntoIterator<Item = VertexId>>(fixed: I) -> Self {
        StableConstraint {
            fixed: fixed.into_iter().collect(),
            stable: BTreeSet::new(),
        }
    }

    pub fn stable_on<I: IntoIterator<Item = VertexId>>(stable: I) -> Self {
        let s: BTreeSet<VertexId> = stable.into_iter().collect();
        StableConstraint {
            fixed: s.clone(),
            stable: s,
        }
    }
}

/// Replay a partial sequence under a red-degree bound plus stability
/// constraints.  Returns the final trigraph on success.
pub fn verify_partial_with_constraints(
    start: &Trigraph,
    seq: &ContractionSequence,
    d: usize,
    cons: &StableConstraint,
) -> Result<Result<Trigraph, VerificationReport>, TrigraphError> {
    let mut cur = start.clone();
    let mut init_red: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &v in &cons.stable {
        init_red.insert(v, cur.red_degree(v)?);
    }
    let mut per_step = Vec::with_capacity(seq.len() + 1);
    let fail = |per_step: Vec<usize>, idx: usize, w: Option<VertexId>| VerificationReport {
        ok: false,
        per_step_max_red_degree: per_step,
        failing_step: Some(idx),
        witness_vertex: w,
    };

    let check = |h: &Trigraph| -> Option<VertexId> {
        if h.max_red_degree() > d {
            let m = h.max_red_degree();
            return h.vertices().find(|&v| h.red_degree(v).unwrap_or(0) == m);
        }
        for (&v, &r0) in &init_red {
            if h.has_vertex(v) && h.red_degree(v).unwrap_or(0) > r0 {
                return Some(v);
            }
        }
        None
    };

    per_step.push(cur.max_red_degree());
    if let Some(w) = check(&cur) {
        return Ok(Err(fail(per_step, 0, Some(w))));
    }
    for (i, st) in seq.steps.iter().enumerate() {
        for w in [st.u, st.v] {
            if !cur.has_vertex(w) {
                return Err(TrigraphError::InvalidStep { index: i, vertex: w });
            }
            if cons.fixed.contains(&w) {
                return Ok(Err(fail(per_step, i + 1, Some(w))));
            }
        }
        cur = cur.contract(st.u, st.v, st.target)?;
        per_step.push(cur.max_red_degree());
        if let Some(w) = check(&cur) {
            return Ok(Err(fail(per_step, i + 1, Some(w))));
        }
    }
    Ok(Ok(cur))
}

/// Project a contraction sequence onto an induced subtrigraph: steps whose
/// pair has a vertex outside the (tracked) subset are dropped, and merged
/// vertices follow the surviving side.  The projected sequence replayed on
/// `H[X]` yields trigraphs that are refined subgraphs of the originals, so a
/// verified d-sequence projects to a verified d-sequence.
pub fn project_sequence(
    seq: &ContractionSequence,
    present: &BTreeSet<VertexId>,
) -> ContractionSequence {
    // Each live vertex of the full replay maps to the subgraph vertex it
    // represents (if any). A merged vertex can end up carrying the id of an
    // absent vertex, so the map is essential, not just a membership test.
    let mut repr: BTreeMap<VertexId, Option<VertexId>> = BTreeMap::new();
    let mut out = ContractionSequence::new();
    let get = |m: &BTreeMap<VertexId, Option<VertexId>>, x: VertexId| -> Option<VertexId> {
        match m.get(&x) {
            Some(&r) => r,
            None => {
                if present.contains(&x) {
                    Some(x)
                } else {
                    None
                }
            }
        }
    };
    for st in &seq.steps {
        let ru = get(&repr, st.u);
        let rv = get(&repr, st.v);
        let merged = match (ru, rv) {
            (Some(a), Some(b)) => {
                let small_target = if st.target == st.u { a } else { b };
                out.push(a, b, small_target);
                Some(small_target)
            }
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        };
        repr.insert(st.target, merged);
        let gone = if st.target == st.u { st.v } else { st.u };
        repr.insert(gone, None);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn cycle_trigraph(n: u32) -> Trigraph {
        let verts: Vec<VertexId> = (0..n).map(v).collect();
        let black: Vec<(VertexId, VertexId)> =
            (0..n).map(|i| (v(i), v((i + 1) % n))).collect();
        Trigraph::from_edges(verts, black, vec![]).unwrap()
    }

    #[test]
    fn contract_twins_in_triangle_gives_black_edge() {
        let k3 = Trigraph::from_edges(
            [v(0), v(1), v(2)],
            vec![(v(0), v(1)), (v(0), v(2)), (v(1), v(2))],
            vec![],
        )
        .unwrap();
        let h = k3.contract(v(0), v(1), v(0)).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_color(v(0), v(2)), Some(Color::Black));
        assert_eq!(h.max_red_degree(), 0);
    }

    #[test]
    fn contract_c5_adjacent_pair() {
        // contracting v1,v2 of an all-black C5 leaves a C4 with two red edges
        // at the merged vertex (red degree 2).
        let c5 = cycle_trigraph(5);
        let h = c5.contract(v(0), v(1), v(0)).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.edge_color(v(0), v(4)), Some(Color::Red));
        assert_eq!(h.edge_color(v(0), v(2)), Some(Color::Red));
        assert_eq!(h.edge_color(v(2), v(3)), Some(Color::Black));
        assert_eq!(h.edge_color(v(3), v(4)), Some(Color::Black));
        assert_eq!(h.red_degree(v(0)).unwrap(), 2);
        assert_eq!(h.max_red_degree(), 2);
    }

    #[test]
    fn mixed_colors_turn_red() {
        let mut g = Trigraph::new();
        for i in 0..3 {
            g.add_vertex(v(i));
        }
        g.add_edge(v(0), v(2), Color::Red).unwrap();
        g.add_edge(v(1), v(2), Color::Black).unwrap();
        let h = g.contract(v(0), v(1), v(0)).unwrap();
        assert_eq!(h.edge_color(v(0), v(2)), Some(Color::Red));
    }

    #[test]
    fn c4_has_zero_twin_width() {
        let c4 = cycle_trigraph(4);
        let mut seq = ContractionSequence::new();
        seq.push(v(0), v(2), v(0)); // twins
        seq.push(v(1), v(3), v(1)); // twins
        seq.push(v(0), v(1), v(0));
        let rep = verify_sequence(&c4, &seq, 0, false).unwrap();
        assert!(rep.ok, "{rep:?}");
    }

    #[test]
    fn c5_fails_at_d1() {
        let c5 = cycle_trigraph(5);
        // any first contraction produces red degree >= 2 somewhere
        for a in 0..5u32 {
            for b in (a + 1)..5 {
                let mut seq = ContractionSequence::new();
                seq.push(v(a), v(b), v(a));
                let rep = verify_sequence(&c5, &seq, 1, true).unwrap();
                assert!(!rep.ok);
                assert_eq!(rep.failing_step, Some(1));
            }
        }
    }

    #[test]
    fn empty_sequence_on_single_vertex() {
        let mut g = Trigraph::new();
        g.add_vertex(v(7));
        let rep = verify_sequence(&g, &ContractionSequence::new(), 0, false).unwrap();
        assert!(rep.ok);
    }

    #[test]
    fn induced_of_contracted_c5() {
        let c5 = cycle_trigraph(5);
        let h = c5.contract(v(0), v(1), v(0)).unwrap();
        let x: BTreeSet<VertexId> = [v(0), v(2), v(3)].into_iter().collect();
        let sub = h.induced(&x).unwrap();
        assert_eq!(sub.edge_color(v(0), v(2)), Some(Color::Red));
        assert_eq!(sub.edge_color(v(2), v(3)), Some(Color::Black));
        assert_eq!(sub.edge_count(), 2);
    }

    #[test]
    fn refinement_rules() {
        let mut g = Trigraph::new();
        for i in 0..2 {
            g.add_vertex(v(i));
        }
        g.add_edge(v(0), v(1), Color::Red).unwrap();
        let mut h = g.clone();
        h.add_edge(v(0), v(1), Color::Black).unwrap();
        assert!(g.is_refinement_of(&g));
        assert!(h.is_refinement_of(&g)); // red -> black allowed
        assert!(!g.is_refinement_of(&h)); // black must persist
        let mut e = g.clone();
        e.remove_edge(v(0), v(1));
        assert!(e.is_refinement_of(&g)); // red edges may be deleted
        assert!(!e.is_refinement_of(&h));
    }

    #[test]
    fn contraction_commutes_with_restriction() {
        // For X disjoint from {u,v}: contract then restrict == restrict then nothing.
        let c5 = cycle_trigraph(5);
        let h = c5.contract(v(0), v(1), v(0)).unwrap();
        let x: BTreeSet<VertexId> = [v(2), v(3), v(4)].into_iter().collect();
        assert_eq!(h.induced(&x).unwrap(), c5.induced(&x).unwrap());
    }

    #[test]
    fn projection_of_full_sequence_verifies() {
        // verified 2-sequence on C5; project away one vertex and re-verify.
        let c5 = cycle_trigraph(5);
        let mut seq = ContractionSequence::new();
        seq.push(v(0), v(1), v(0));
        seq.push(v(0), v(2), v(0));
        seq.push(v(3), v(4), v(3));
        seq.push(v(0), v(3), v(0));
        assert!(verify_sequence(&c5, &seq, 2, false).unwrap().ok);
        let present: BTreeSet<VertexId> = [v(0), v(1), v(3), v(4)].into_iter().collect();
        let sub = c5.induced(&present).unwrap();
        let proj = project_sequence(&seq, &present);
        let rep = verify_sequence(&sub, &proj, 2, true).unwrap();
        assert!(rep.ok, "{rep:?}");
    }

    #[test]
    fn constraint_replay_rejects_fixed_contraction() {
        let c4 = cycle_trigraph(4);
        let mut seq = ContractionSequence::new();
        seq.push(v(0), v(2), v(0));
        let cons = StableConstraint::fixing([v(0)]);
        let res = verify_partial_with_constraints(&c4, &seq, 3, &cons).unwrap();
        assert!(res.is_err());
    }

    #[test]
    fn constraint_replay_tracks_stability() {
        // contracting v0,v1 in C5 raises the red degree of v2 — not v3.
        let c5 = cycle_trigraph(5);
        let mut seq = ContractionSequence::new();
        seq.push(v(0), v(1), v(0));
        let stable_v3 = StableConstraint::stable_on([v(3)]);
        assert!(verify_partial_with_constraints(&c5, &seq, 2, &stable_v3)
            .unwrap()
            .is_ok());
        let stable_v2 = StableConstraint::stable_on([v(2)]);
        assert!(verify_partial_with_constraints(&c5, &seq, 2, &stable_v2)
            .unwrap()
            .is_err());
    }
}
