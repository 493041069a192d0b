//! Width-2 synthesis: 2-tree completion of a `K₄`-minor-free base, the
//! recursive elimination of a double-subdivision shaped like θ(2-tree) down
//! to a 7-cycle, and the full width-2 driver.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{ThetaGraph, Multigraph, SubdividedGraph};
use crate::minor::has_k4_minor;
use crate::trigraph::{
    pair, project_sequence, verify_partial_with_constraints, Color, ContractionSequence,
    StableConstraint, Trigraph, VertexId,
};

use super::small::fold_remaining;
use super::theta::lemma_theta_reduce;
use super::{demand_verified, ObstructionKind, SynthError, SynthesisResult};

/// Perfect-elimination certificate: repeatedly remove a degree-2 vertex
/// whose neighbors are adjacent until a single edge remains.
pub fn is_2tree(g: &Multigraph) -> bool {
    if !g.is_simple() {
        return false;
    }
    let mut work = g.clone();
    while work.vertex_count() > 2 {
        let z = work.vertices().find(|&v| {
            let n: Vec<VertexId> = work.neighbors(v).into_iter().collect();
            n.len() == 2 && work.has_edge(n[0], n[1])
        });
        match z {
            Some(z) => work.remove_vertex(z),
            None => return false,
        }
    }
    work.vertex_count() == 2 && work.edge_count() == 1
}

/// Embed a simple `K₄`-minor-free graph on at least two vertices into a
/// 2-tree on the same vertices.  Works by 2-degenerate elimination with
/// fill-in, then reattaches every vertex onto an edge of the partial
/// result.
pub fn complete_to_2tree(g: &Multigraph) -> Result<Multigraph, SynthError> {
    if !g.is_simple() || g.vertex_count() < 2 {
        return Err(SynthError::PreconditionViolated(
            "2-tree completion needs a simple graph on at least two vertices",
        ));
    }
    if let Some(model) = has_k4_minor(g) {
        return Err(SynthError::HasK4Minor(model));
    }
    let mut work = g.clone();
    let mut order: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
    while work.vertex_count() > 2 {
        let z = work
            .vertices()
            .find(|&v| work.neighbors(v).len() <= 2)
            .expect("a K4-minor-free graph is 2-degenerate");
        let n: Vec<VertexId> = work.neighbors(z).into_iter().collect();
        if n.len() == 2 && !work.has_edge(n[0], n[1]) {
            work.add_edge(n[0], n[1]);
        }
        order.push((z, n));
        work.remove_vertex(z);
    }
    let mut out = Multigraph::new();
    let rest: Vec<VertexId> = work.vertices().collect();
    for &v in &rest {
        out.add_vertex(v);
    }
    out.add_edge(rest[0], rest[1]);
    for (z, n) in order.into_iter().rev() {
        out.add_vertex(z);
        let (a, b) = match n.len() {
            2 => (n[0], n[1]),
            1 => {
                let partner = out
                    .neighbors(n[0])
                    .into_iter()
                    .next()
                    .expect("the partial 2-tree has no isolated vertices");
                (n[0], partner)
            }
            _ => {
                let (_, (a, b)) = out.edges().next().expect("the partial 2-tree has an edge");
                (a, b)
            }
        };
        out.add_edge(z, a);
        out.add_edge(z, b);
    }
    if !is_2tree(&out) || g.edges().any(|(_, (a, b))| !out.has_edge(a, b)) {
        return Err(SynthError::StructureMismatch(
            "2-tree completion failed its own certificate",
        ));
    }
    Ok(out)
}

/// The eleven contractions eliminating the apex `w` of one triangle
/// `{u,v,w}` of the θ-shape, leaving the `uv` gadget (with its original
/// ids) carrying the merged material.
fn triangle_steps(
    tg: &ThetaGraph,
    u: VertexId,
    v: VertexId,
    w: VertexId,
    seq: &mut ContractionSequence,
) -> Result<(), SynthError> {
    let x = |a, b| {
        tg.x(a, b)
            .ok_or(SynthError::StructureMismatch("missing short-path role"))
    };
    let y = |a, b| {
        tg.y(a, b)
            .ok_or(SynthError::StructureMismatch("missing long-path role"))
    };
    let ym = |a, b| {
        tg.y_mid(a, b)
            .ok_or(SynthError::StructureMismatch("missing long-path middle"))
    };
    for t in [u, v] {
        seq.push(x(t, w)?, y(t, w)?, x(t, w)?);
        seq.push(ym(t, w)?, y(w, t)?, y(w, t)?);
        seq.push(x(w, t)?, y(w, t)?, x(w, t)?);
    }
    seq.push(w, x(w, u)?, w);
    seq.push(x(u, w)?, y(u, v)?, y(u, v)?);
    seq.push(w, x(w, v)?, w);
    seq.push(x(v, w)?, y(v, u)?, y(v, u)?);
    seq.push(w, ym(u, v)?, ym(u, v)?);
    Ok(())
}

/// Eliminate the 2-tree base of a θ-shaped trigraph down to the gadget of
/// one edge `x` (a 7-cycle), never touching `x`'s endpoints and never
/// raising their red degree.  Requires red degree 0 on all branch vertices.
/// Returns the verified sequence and the final trigraph.
pub fn two_tree_sequence(
    h: &Trigraph,
    tg: &ThetaGraph,
    x: (VertexId, VertexId),
) -> Result<(ContractionSequence, Trigraph), SynthError> {
    if !is_2tree(&tg.base) {
        return Err(SynthError::NotA2Tree);
    }
    if !tg.base.has_edge(x.0, x.1) || x.0 == x.1 {
        return Err(SynthError::BadX);
    }
    if h.vertex_set() != tg.graph.vertex_set()
        || h.underlying_edges()
            != tg.graph
                .edges()
                .map(|(_, (a, b))| pair(a, b))
                .collect::<BTreeSet<_>>()
    {
        return Err(SynthError::StructureMismatch(
            "trigraph does not match the θ-shape",
        ));
    }
    for v in tg.base.vertices() {
        if h.red_degree(v)? != 0 {
            return Err(SynthError::PreconditionViolated(
                "red degree 0 on branch vertices",
            ));
        }
    }

    let mut work = tg.base.clone();
    let mut seq = ContractionSequence::new();
    while work.vertex_count() > 2 {
        let z = work
            .vertices()
            .find(|&v| {
                if v == x.0 || v == x.1 {
                    return false;
                }
                let n: Vec<VertexId> = work.neighbors(v).into_iter().collect();
                n.len() == 2 && work.has_edge(n[0], n[1])
            })
            .ok_or(SynthError::NotA2Tree)?;
        let n: Vec<VertexId> = work.neighbors(z).into_iter().collect();
        let (u, v) = (n[0].min(n[1]), n[0].max(n[1]));
        triangle_steps(tg, u, v, z, &mut seq)?;
        work.remove_vertex(z);
    }

    let cons = StableConstraint::stable_on([x.0, x.1]);
    let fin = match verify_partial_with_constraints(h, &seq, 2, &cons)? {
        Ok(fin) => fin,
        Err(report) => return Err(SynthError::VerificationFailed(report)),
    };
    // the survivors must be exactly the gadget of x
    let (a, b) = (x.0.min(x.1), x.0.max(x.1));
    let roles = [
        tg.x(a, b),
        tg.x(b, a),
        tg.y(a, b),
        tg.y_mid(a, b),
        tg.y(b, a),
    ];
    let mut expect: BTreeSet<VertexId> = [a, b].into_iter().collect();
    expect.extend(roles.iter().flatten());
    let cycle_ok = fin.vertex_set() == &expect
        && fin.is_connected()
        && fin.vertices().all(|v| fin.neighbors(v).len() == 2);
    if !cycle_ok {
        return Err(SynthError::StructureMismatch(
            "elimination did not end on the 7-cycle of X",
        ));
    }
    Ok((seq, fin))
}

/// Full width-2 synthesis: the base must be `K₄`-minor-free, the start all
/// black on branch vertices with overall red degree at most 2.  Route: shape
/// the subdivision towards θ of the simplified base, embed that base into a
/// 2-tree, synthesize on the completed all-black θ-supergraph, and project
/// the resulting collapse back.
pub(crate) fn synthesize_d2(
    h: &Trigraph,
    sub: &SubdividedGraph,
) -> Result<SynthesisResult, SynthError> {
    if h.max_red_degree() > 2 {
        return Err(SynthError::PreconditionViolated(
            "maximum red degree at most 2",
        ));
    }
    for &v in &sub.branch_vertices {
        if h.red_degree(v)? != 0 {
            return Err(SynthError::PreconditionViolated(
                "red degree 0 on branch vertices",
            ));
        }
    }
    if let Some(model) = has_k4_minor(&sub.base) {
        return Ok(SynthesisResult::Obstruction {
            kind: ObstructionKind::K4,
            model,
        });
    }
    let tr = lemma_theta_reduce(h, sub)?;
    debug_assert!(tr.d <= 2);
    let mut seq = tr.seq.clone();

    if tr.base.vertex_count() <= 2 {
        // the survivor embeds in a single θ-gadget: a cycle or less
        fold_remaining(&tr.result, &mut seq)?;
        let report = demand_verified(h, &seq, 2, false)?;
        return Ok(SynthesisResult::Sequence { seq, report });
    }

    let gp = complete_to_2tree(&tr.base)?;
    let (h2, tg2) = extend_to_theta(&tr.result, &tr.parts, &gp);

    let (ex, (xa, xb)) = gp.edges().next().expect("a 2-tree has an edge");
    let _ = ex;
    let (mut seq2, fin2) = two_tree_sequence(&h2, &tg2, (xa, xb))?;
    fold_remaining(&fin2, &mut seq2)?;
    seq.extend(&project_sequence(&seq2, tr.result.vertex_set()));

    let report = demand_verified(h, &seq, 2, false)?;
    Ok(SynthesisResult::Sequence { seq, report })
}

/// Grow the reduced trigraph into an all-black-completed θ-shape over the
/// 2-tree `gp`, reusing every surviving role id and inventing fresh ids for
/// the rest.  The input stays an induced subtrigraph of the output.
fn extend_to_theta(
    reduced: &Trigraph,
    parts: &BTreeMap<(VertexId, VertexId), super::EdgeParts>,
    gp: &Multigraph,
) -> (Trigraph, ThetaGraph) {
    let mut next = reduced
        .vertex_set()
        .iter()
        .next_back()
        .map(|v| v.0 + 1)
        .unwrap_or(0);
    let mut fresh = || {
        let v = VertexId(next);
        next += 1;
        v
    };
    let mut graph = Multigraph::new();
    for v in gp.vertices() {
        graph.add_vertex(v);
    }
    let mut path3 = BTreeMap::new();
    let mut path4 = BTreeMap::new();
    for (e, (a, b)) in gp.edges() {
        let p = parts.get(&(a, b)).copied().unwrap_or_default();
        let mut pick = |r: Option<VertexId>| r.unwrap_or_else(&mut fresh);
        let p3 = vec![a, pick(p.x_ab), pick(p.x_ba), b];
        let p4 = vec![a, pick(p.y_ab), pick(p.y_mid), pick(p.y_ba), b];
        for path in [&p3, &p4] {
            for w in &path[1..path.len() - 1] {
                graph.add_vertex(*w);
            }
            for pr in path.windows(2) {
                graph.add_edge(pr[0], pr[1]);
            }
        }
        path3.insert(e, p3);
        path4.insert(e, p4);
    }
    let mut h2 = Trigraph::new();
    for v in graph.vertices() {
        h2.add_vertex(v);
    }
    for (_, (u, w)) in graph.edges() {
        let c = reduced.edge_color(u, w).unwrap_or(Color::Black);
        h2.add_edge(u, w, c).expect("θ-shape edges are simple");
    }
    let tg = ThetaGraph {
        graph,
        base: gp.clone(),
        path3,
        path4,
    };
    (h2, tg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        complete, cycle, path, subdivide, theta, uniform_lengths, complete_bipartite,
    };
    use crate::minor::verify_minor_model;

    fn fan(n: u32) -> Multigraph {
        // path on n-1 vertices plus an apex adjacent to all of them
        let mut g = path(n - 1).unwrap();
        let apex = g.fresh_vertex();
        for v in g.vertices().filter(|&v| v != apex).collect::<Vec<_>>() {
            g.add_edge(v, apex);
        }
        g
    }

    #[test]
    fn triangle_base_case_reaches_the_seven_cycle() {
        let k3 = complete(3).unwrap();
        let tg = theta(&k3).unwrap();
        let h = tg.graph.to_trigraph();
        let x = (VertexId(0), VertexId(1));
        let (seq, fin) = two_tree_sequence(&h, &tg, x).unwrap();
        assert_eq!(seq.len(), 11);
        assert_eq!(fin.vertex_count(), 7);
        assert_eq!(h.vertex_count() - seq.len(), 7);
    }

    #[test]
    fn one_recursive_layer_on_a_four_vertex_two_tree() {
        let mut g = complete(3).unwrap();
        let z = g.fresh_vertex();
        g.add_edge(z, VertexId(1));
        g.add_edge(z, VertexId(2));
        assert!(is_2tree(&g));
        let tg = theta(&g).unwrap();
        let h = tg.graph.to_trigraph();
        let (seq, fin) = two_tree_sequence(&h, &tg, (VertexId(0), VertexId(1))).unwrap();
        assert_eq!(seq.len(), 22);
        assert_eq!(fin.vertex_count(), 7);
    }

    #[test]
    fn a_fan_folds_layer_by_layer() {
        let g = fan(6);
        assert!(is_2tree(&g));
        let tg = theta(&g).unwrap();
        let h = tg.graph.to_trigraph();
        let apex = VertexId(5);
        let (seq, _) = two_tree_sequence(&h, &tg, (VertexId(0), apex)).unwrap();
        assert_eq!(seq.len(), (6 - 2) * 11);
    }

    #[test]
    fn non_two_trees_and_non_edges_are_rejected() {
        let c5 = cycle(5).unwrap();
        let tg = theta(&c5).unwrap();
        let h = tg.graph.to_trigraph();
        assert!(matches!(
            two_tree_sequence(&h, &tg, (VertexId(0), VertexId(1))),
            Err(SynthError::NotA2Tree)
        ));
        let k3 = complete(3).unwrap();
        let tg = theta(&k3).unwrap();
        let h = tg.graph.to_trigraph();
        assert!(matches!(
            two_tree_sequence(&h, &tg, (VertexId(0), VertexId(0))),
            Err(SynthError::BadX)
        ));
    }

    #[test]
    fn completion_of_a_cycle_and_of_a_star() {
        for g in [cycle(5).unwrap(), complete_bipartite(1, 4).unwrap()] {
            let t = complete_to_2tree(&g).unwrap();
            let n = g.vertex_count();
            assert_eq!(t.edge_count(), 2 * n - 3);
            assert!(is_2tree(&t));
            assert!(g.edges().all(|(_, (a, b))| t.has_edge(a, b)));
        }
    }

    #[test]
    fn a_triangle_completes_to_itself() {
        let k3 = complete(3).unwrap();
        let t = complete_to_2tree(&k3).unwrap();
        assert_eq!(t.edge_count(), 3);
    }

    #[test]
    fn completion_rejects_k4() {
        assert!(matches!(
            complete_to_2tree(&complete(4).unwrap()),
            Err(SynthError::HasK4Minor(_))
        ));
    }

    #[test]
    fn double_subdivision_of_k4_is_obstructed_at_two() {
        let k4 = complete(4).unwrap();
        let sub = subdivide(&k4, &uniform_lengths(&k4, 3)).unwrap();
        let h = sub.graph.to_trigraph();
        let r = synthesize_d2(&h, &sub).unwrap();
        assert_eq!(r.obstruction(), Some(ObstructionKind::K4));
        match r {
            SynthesisResult::Obstruction { model, .. } => {
                assert_eq!(verify_minor_model(&sub.base, &k4, &model), Ok(()));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn subdivided_cycle_folds_at_two() {
        let c5 = cycle(5).unwrap();
        let sub = subdivide(&c5, &uniform_lengths(&c5, 3)).unwrap();
        let h = sub.graph.to_trigraph();
        let r = synthesize_d2(&h, &sub).unwrap();
        let seq = r.sequence().expect("C5 has no K4 minor");
        assert_eq!(seq.len(), h.vertex_count() - 1);
    }

    #[test]
    fn loops_and_parallel_edges_stay_within_two() {
        let mut base = Multigraph::new();
        let a = base.fresh_vertex();
        let b = base.fresh_vertex();
        base.add_edge(a, b);
        base.add_edge(a, b);
        base.add_edge(a, a);
        let sub = subdivide(&base, &uniform_lengths(&base, 4)).unwrap();
        let h = sub.graph.to_trigraph();
        let r = synthesize_d2(&h, &sub).unwrap();
        let seq = r.sequence().expect("theta shapes fold at 2");
        assert_eq!(seq.len(), h.vertex_count() - 1);
    }

    #[test]
    fn red_decorated_subdivision_still_folds() {
        // C6 with every third subdivision edge red, keeping branch vertices
        // clean and red degree at most 1
        let c6 = cycle(6).unwrap();
        let sub = subdivide(&c6, &uniform_lengths(&c6, 3)).unwrap();
        let mut h = Trigraph::new();
        for v in sub.graph.vertices() {
            h.add_vertex(v);
        }
        for (_, (a, b)) in sub.graph.edges() {
            let interiorish =
                !sub.branch_vertices.contains(&a) && !sub.branch_vertices.contains(&b);
            let c = if interiorish { Color::Red } else { Color::Black };
            h.add_edge(a, b, c).unwrap();
        }
        assert!(h.max_red_degree() >= 1);
        let r = synthesize_d2(&h, &sub).unwrap();
        let seq = r.sequence().expect("C6 has no K4 minor");
        assert_eq!(seq.len(), h.vertex_count() - 1);
    }

    #[test]
    fn disconnected_bases_are_completed_and_folded() {
        let mut base = cycle(4).unwrap();
        let extra = base.fresh_vertex();
        let extra2 = base.fresh_vertex();
        base.add_edge(extra, extra2);
        let sub = subdivide(&base, &uniform_lengths(&base, 3)).unwrap();
        let h = sub.graph.to_trigraph();
        let r = synthesize_d2(&h, &sub).unwrap();
        let seq = r.sequence().expect("disconnected K4-free base");
        assert_eq!(seq.len(), h.vertex_count() - 1);
    }

    #[test]
    fn red_on_a_branch_vertex_is_rejected() {
        let c5 = cycle(5).unwrap();
        let sub = subdivide(&c5, &uniform_lengths(&c5, 3)).unwrap();
        let mut h = Trigraph::new();
        for v in sub.graph.vertices() {
            h.add_vertex(v);
        }
        let mut first = true;
        for (_, (a, b)) in sub.graph.edges() {
            let hot = first && (sub.branch_vertices.contains(&a) || sub.branch_vertices.contains(&b));
            let c = if hot {
                first = false;
                Color::Red
            } else {
                Color::Black
            };
            h.add_edge(a, b, c).unwrap();
        }
        assert!(matches!(
            synthesize_d2(&h, &sub),
            Err(SynthError::PreconditionViolated(_))
        ));
    }
}
