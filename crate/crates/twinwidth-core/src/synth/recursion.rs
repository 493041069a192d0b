//! Leaf-by-leaf assembly of a full width-3 sequence over a contractible
//! tree decomposition.
//!
//! The host is the gadgeted double subdivision of a graph `G` that comes
//! with a tree decomposition into catalogue bags and an addable triangle
//! family containing every size-3 adhesion.  Each round picks a leaf bag,
//! collapses its slice of the host onto the adhesion with [`base_sequence`],
//! splices the local steps into the global sequence, and shrinks the base
//! graph, the role table and the decomposition accordingly.  The last bag is
//! collapsed onto one of its edges and the remaining 7-cycle folded away.
//!
//! Collapsing a leaf onto a size-3 adhesion leaves the adhesion's
//! replacement gadget without the long paths of its three edges; those are
//! restored as all-black phantom paths on fresh vertices so the invariant
//! "the working trigraph is the gadgeted double subdivision of the working
//! base" survives into the next round.  The final sequence is projected onto
//! the original vertex set, which drops the phantom steps, and verified
//! end-to-end on the original host.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::decomp::{verify_td, ContractibleTd};
use crate::graph::Multigraph;
use crate::trigraph::{
    pair, project_sequence, Color, ContractionSequence, Trigraph, VerificationReport, VertexId,
};

use super::base::{base_sequence, BaseTarget};
use super::ops::{tri_key, GadgetRoles};
use super::theta::EdgeParts;
use super::{demand_verified, SynthError};

/// Collapse the whole host to a single vertex at width 3, processing the
/// tree decomposition leaf by leaf.  `h` must be the double subdivision of
/// `roles.base` with exactly the gadgets of `family` attached (red
/// decorations with degree at most 3 allowed); `ctd` must be a valid tree
/// decomposition of `roles.base` into catalogue bags; `family` must contain
/// every size-3 adhesion and restrict to an addable family on every bag.
pub fn stronger_recursion(
    h: &Trigraph,
    roles: &GadgetRoles,
    ctd: &ContractibleTd,
    family: &[[VertexId; 3]],
) -> Result<(ContractionSequence, VerificationReport), SynthError> {
    if h.max_red_degree() > 3 {
        return Err(SynthError::PreconditionViolated(
            "host has red degree above three",
        ));
    }
    let mut g = roles.base.clone();
    if !g.is_simple() {
        return Err(SynthError::PreconditionViolated("base graph is not simple"));
    }
    if verify_td(&g, &ctd.td).is_err() {
        return Err(SynthError::PreconditionViolated(
            "not a tree decomposition of the base graph",
        ));
    }

    let mut fam: BTreeSet<[VertexId; 3]> = family.iter().map(tri_key).collect();
    for t in &fam {
        if !g.is_clique(&t.iter().copied().collect()) {
            return Err(SynthError::PreconditionViolated(
                "family member is not a triangle of the base graph",
            ));
        }
    }
    if roles.gadgets.keys().copied().collect::<BTreeSet<_>>() != fam {
        return Err(SynthError::StructureMismatch(
            "gadget table disagrees with the family",
        ));
    }
    check_host_shape(h, &g, roles)?;
    for (a, b) in ctd.td.tree_edges() {
        let x = ctd.td.adhesion(a, b);
        if x.len() == 3 {
            let xs: Vec<VertexId> = x.iter().copied().collect();
            if !fam.contains(&tri_key(&[xs[0], xs[1], xs[2]])) {
                return Err(SynthError::PreconditionViolated(
                    "size-3 adhesion is not in the family",
                ));
            }
        }
    }

    let mut bags = ctd.td.bags.clone();
    let mut links: BTreeSet<(VertexId, VertexId)> =
        ctd.td.tree_edges().into_iter().collect();
    let mut rl = roles.clone();
    let mut cur = h.clone();
    let mut seq = ContractionSequence::new();

    loop {
        prune_bags(&mut bags, &mut links);
        if bags.len() <= 1 {
            break;
        }
        let (p, _q, x) = pick_leaf(&bags, &links)?;
        let bag = bags[&p].clone();
        let removed: BTreeSet<VertexId> = bag.difference(&x).copied().collect();
        process_leaf(&mut cur, &mut seq, &mut rl, &mut fam, &mut g, &bag, &x, &removed)?;
        bags.remove(&p);
        links.retain(|&(a, b)| a != p && b != p);
    }

    finish_last_bag(&mut cur, &mut seq, &rl, &fam, &g)?;

    let seq = project_sequence(&seq, h.vertex_set());
    let report = demand_verified(h, &seq, 3, false)?;
    Ok((seq, report))
}

/// The host's vertex set must be exactly the base vertices, the five path
/// interiors of every base edge, and the gadget vertices.
fn check_host_shape(
    h: &Trigraph,
    g: &Multigraph,
    roles: &GadgetRoles,
) -> Result<(), SynthError> {
    let mut expected: BTreeSet<VertexId> = g.vertex_set().clone();
    for (_, (a, b)) in g.edges() {
        let p = roles
            .parts
            .get(&pair(a, b))
            .ok_or(SynthError::StructureMismatch("base edge without path roles"))?;
        let vs: Vec<VertexId> = part_vertices(p).collect();
        if vs.len() != 5 {
            return Err(SynthError::StructureMismatch(
                "base edge with incomplete path roles",
            ));
        }
        expected.extend(vs);
    }
    for ps in roles.gadgets.values() {
        expected.insert(ps.apex);
        expected.extend(ps.mid.values().copied());
    }
    if &expected != h.vertex_set() {
        return Err(SynthError::StructureMismatch(
            "host vertex set disagrees with the role table",
        ));
    }
    Ok(())
}

fn part_vertices(p: &EdgeParts) -> impl Iterator<Item = VertexId> {
    [p.x_ab, p.x_ba, p.y_ab, p.y_mid, p.y_ba].into_iter().flatten()
}

/// Contract tree edges whose bags are nested until no bag is a subset of a
/// neighbouring bag.
fn prune_bags(
    bags: &mut BTreeMap<VertexId, BTreeSet<VertexId>>,
    links: &mut BTreeSet<(VertexId, VertexId)>,
) {
    loop {
        let Some((gone, keep)) = links.iter().find_map(|&(a, b)| {
            if bags[&a].is_subset(&bags[&b]) {
                Some((a, b))
            } else if bags[&b].is_subset(&bags[&a]) {
                Some((b, a))
            } else {
                None
            }
        }) else {
            return;
        };
        bags.remove(&gone);
        let old: Vec<(VertexId, VertexId)> = links.iter().copied().collect();
        links.clear();
        for (a, b) in old {
            let a = if a == gone { keep } else { a };
            let b = if b == gone { keep } else { b };
            if a != b {
                links.insert((a.min(b), a.max(b)));
            }
        }
    }
}

/// The smallest leaf node, its neighbour, and their adhesion.
fn pick_leaf(
    bags: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    links: &BTreeSet<(VertexId, VertexId)>,
) -> Result<(VertexId, VertexId, BTreeSet<VertexId>), SynthError> {
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &(a, b) in links {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    for &node in bags.keys() {
        match adj.get(&node).map(Vec::as_slice) {
            Some(&[q]) => {
                let x: BTreeSet<VertexId> =
                    bags[&node].intersection(&bags[&q]).copied().collect();
                if x.is_empty() {
                    return Err(SynthError::PreconditionViolated(
                        "leaf bag shares no vertex with its neighbour",
                    ));
                }
                return Ok((node, q, x));
            }
            _ => continue,
        }
    }
    Err(SynthError::PreconditionViolated(
        "decomposition tree has no leaf",
    ))
}

/// Restrict the role table to one bag: the induced base graph, the paths of
/// its internal edges, and the gadgets of the family triangles inside it.
fn slice_roles(
    g: &Multigraph,
    rl: &GadgetRoles,
    bag: &BTreeSet<VertexId>,
    fam: &BTreeSet<[VertexId; 3]>,
) -> (GadgetRoles, Vec<[VertexId; 3]>, BTreeSet<VertexId>) {
    let base = g.induced(bag);
    let mut parts = BTreeMap::new();
    let mut verts: BTreeSet<VertexId> = bag.clone();
    for (&(a, b), p) in &rl.parts {
        if bag.contains(&a) && bag.contains(&b) {
            parts.insert((a, b), *p);
            verts.extend(part_vertices(p));
        }
    }
    let fam_p: Vec<[VertexId; 3]> = fam
        .iter()
        .filter(|t| t.iter().all(|v| bag.contains(v)))
        .copied()
        .collect();
    let mut gadgets = BTreeMap::new();
    for t in &fam_p {
        let ps = rl.gadgets[t].clone();
        verts.insert(ps.apex);
        verts.extend(ps.mid.values().copied());
        gadgets.insert(*t, ps);
    }
    (
        GadgetRoles {
            base,
            parts,
            gadgets,
        },
        fam_p,
        verts,
    )
}

fn splice(
    cur: &mut Trigraph,
    seq: &mut ContractionSequence,
    steps: &ContractionSequence,
) -> Result<(), SynthError> {
    for st in &steps.steps {
        *cur = cur.contract(st.u, st.v, st.target)?;
        seq.push(st.u, st.v, st.target);
    }
    Ok(())
}

/// Collapse the slice of one leaf bag onto its adhesion and update every
/// piece of working state.
#[allow(clippy::too_many_arguments)]
fn process_leaf(
    cur: &mut Trigraph,
    seq: &mut ContractionSequence,
    rl: &mut GadgetRoles,
    fam: &mut BTreeSet<[VertexId; 3]>,
    g: &mut Multigraph,
    bag: &BTreeSet<VertexId>,
    x: &BTreeSet<VertexId>,
    removed: &BTreeSet<VertexId>,
) -> Result<(), SynthError> {
    let (sub, fam_p, verts) = slice_roles(g, rl, bag, fam);
    let hp = cur.induced(&verts)?;
    let xs: Vec<VertexId> = x.iter().copied().collect();

    match xs.len() {
        3 => {
            let xt = tri_key(&[xs[0], xs[1], xs[2]]);
            if !fam.contains(&xt) {
                return Err(SynthError::PreconditionViolated(
                    "size-3 adhesion is not in the family",
                ));
            }
            let bs = base_sequence(&hp, &sub, &fam_p, BaseTarget::Triangle(xt))?;
            splice(cur, seq, &bs.seq)?;
            // The replacement gadget of the adhesion survives but the long
            // paths of its three edges are gone; restore them as all-black
            // phantoms so the next round again sees a double subdivision.
            let mut next = cur.vertex_set().iter().next_back().map_or(0, |v| v.0 + 1);
            for (a, b) in [(xt[0], xt[1]), (xt[0], xt[2]), (xt[1], xt[2])] {
                let ids: Vec<VertexId> = (0..3).map(|i| VertexId(next + i)).collect();
                next += 3;
                for &v in &ids {
                    cur.add_vertex(v);
                }
                for (u, w) in [(a, ids[0]), (ids[0], ids[1]), (ids[1], ids[2]), (ids[2], b)] {
                    cur.add_edge(u, w, Color::Black)?;
                }
                let p = rl
                    .parts
                    .get_mut(&pair(a, b))
                    .expect("adhesion edge has path roles");
                p.y_ab = Some(ids[0]);
                p.y_mid = Some(ids[1]);
                p.y_ba = Some(ids[2]);
            }
        }
        2 => {
            let (a, b) = (xs[0], xs[1]);
            if !g.has_edge(a, b) {
                return Err(SynthError::PreconditionViolated(
                    "size-2 adhesion is not an edge",
                ));
            }
            let bs = base_sequence(&hp, &sub, &fam_p, BaseTarget::Edge(a, b))?;
            splice(cur, seq, &bs.seq)?;
            let parts = bs
                .cycle_parts
                .expect("edge target always reports cycle roles");
            rl.parts.insert(pair(a, b), parts);
        }
        1 => {
            let u = xs[0];
            let up = g
                .neighbors(u)
                .into_iter()
                .find(|w| removed.contains(w))
                .ok_or(SynthError::PreconditionViolated(
                    "cut vertex has no neighbour inside the leaf bag",
                ))?;
            let v = g
                .neighbors(u)
                .into_iter()
                .find(|w| !bag.contains(w))
                .ok_or(SynthError::PreconditionViolated(
                    "cut vertex has no neighbour outside the leaf bag",
                ))?;
            let bs = base_sequence(&hp, &sub, &fam_p, BaseTarget::Edge(u, up))?;
            splice(cur, seq, &bs.seq)?;
            // Walk the remaining 7-cycle from the cut vertex and fold it
            // into the long path towards the outside neighbour.
            let around = walk_cycle(&bs.result, u)?;
            let (v1, v2) = (rl.y_end(u, v)?, rl.y_mid(u, v)?);
            let folds = [
                (around[0], around[5], around[0]),
                (around[1], around[2], around[1]),
                (around[1], around[3], around[1]),
                (around[1], around[4], around[1]),
                (around[0], v1, v1),
                (around[1], v2, v2),
            ];
            for (p, q, t) in folds {
                *cur = cur.contract(p, q, t)?;
                seq.push(p, q, t);
            }
        }
        _ => {
            return Err(SynthError::PreconditionViolated(
                "adhesion has more than three vertices",
            ))
        }
    }

    fam.retain(|t| t.iter().all(|v| !removed.contains(v)));
    rl.parts
        .retain(|&(a, b), _| !removed.contains(&a) && !removed.contains(&b));
    rl.gadgets
        .retain(|t, _| t.iter().all(|v| !removed.contains(v)));
    *g = g.without_vertices(removed);
    rl.base = g.clone();
    Ok(())
}

/// The six non-`u` vertices of a 7-cycle through `u`, in walk order starting
/// at a neighbour of `u`.
fn walk_cycle(c7: &Trigraph, u: VertexId) -> Result<[VertexId; 6], SynthError> {
    let bad = || SynthError::StructureMismatch("leaf did not collapse to a 7-cycle");
    if c7.vertex_count() != 7 {
        return Err(bad());
    }
    let mut out = [VertexId(0); 6];
    let (mut prev, mut at) = (u, *c7.neighbors(u).first().ok_or_else(bad)?);
    for slot in out.iter_mut() {
        *slot = at;
        let next = c7
            .neighbors(at)
            .into_iter()
            .find(|&w| w != prev)
            .ok_or_else(bad)?;
        prev = at;
        at = next;
    }
    if at != u {
        return Err(bad());
    }
    Ok(out)
}

/// Collapse the final bag: tiny bases directly, anything else through a
/// collapse onto one bag edge followed by folding the 7-cycle.
fn finish_last_bag(
    cur: &mut Trigraph,
    seq: &mut ContractionSequence,
    rl: &GadgetRoles,
    fam: &BTreeSet<[VertexId; 3]>,
    g: &Multigraph,
) -> Result<(), SynthError> {
    if g.vertex_count() >= 3 {
        let (a, b) = g
            .edges()
            .map(|(_, (a, b))| pair(a, b))
            .min()
            .ok_or(SynthError::PreconditionViolated("final bag has no edge"))?;
        let fam_list: Vec<[VertexId; 3]> = fam.iter().copied().collect();
        let bs = base_sequence(cur, rl, &fam_list, BaseTarget::Edge(a, b))?;
        splice(cur, seq, &bs.seq)?;
    }
    while cur.vertex_count() > 1 {
        let a = *cur.vertex_set().iter().next().expect("nonempty trigraph");
        let b = cur
            .neighbors(a)
            .into_iter()
            .min()
            .unwrap_or_else(|| *cur.vertex_set().iter().nth(1).expect("two vertices"));
        *cur = cur.contract(a, b, a)?;
        seq.push(a, b, a);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{classify_bag, TreeDecomposition};
    use crate::graph::complete;
    use crate::synth::ops::gadget_host;
    use alloc::vec;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn tri(a: u32, b: u32, c: u32) -> [VertexId; 3] {
        [v(a), v(b), v(c)]
    }

    fn ctd_of(g: &Multigraph, bags: Vec<Vec<u32>>, links: Vec<(usize, usize)>) -> ContractibleTd {
        let mut tree = Multigraph::new();
        let mut bag_map = BTreeMap::new();
        let mut bag_class = BTreeMap::new();
        for (i, bag) in bags.iter().enumerate() {
            let node = v(i as u32);
            tree.add_vertex(node);
            let set: BTreeSet<VertexId> = bag.iter().map(|&x| v(x)).collect();
            bag_class.insert(node, classify_bag(&g.induced(&set)).expect("catalogue bag"));
            bag_map.insert(node, set);
        }
        for (a, b) in links {
            tree.add_edge(v(a as u32), v(b as u32));
        }
        let td = TreeDecomposition {
            tree,
            bags: bag_map,
        };
        let adhesions = td
            .tree_edges()
            .into_iter()
            .map(|(a, b)| ((a, b), td.adhesion(a, b)))
            .collect();
        ContractibleTd {
            td,
            bag_class,
            adhesions,
        }
    }

    fn run(g: &Multigraph, fam: &[[VertexId; 3]], ctd: &ContractibleTd) -> ContractionSequence {
        let (h, roles) = gadget_host(g, fam).unwrap();
        let (seq, report) = stronger_recursion(&h, &roles, ctd, fam).unwrap();
        assert!(report.ok);
        assert_eq!(seq.len(), h.vertex_count() - 1);
        assert!(report.per_step_max_red_degree.iter().all(|&m| m <= 3));
        seq
    }

    #[test]
    fn single_bag_k5() {
        let g = complete(5).unwrap();
        let fam = [tri(0, 1, 2), tri(0, 1, 3), tri(0, 1, 4), tri(2, 3, 4)];
        let ctd = ctd_of(&g, vec![vec![0, 1, 2, 3, 4]], vec![]);
        run(&g, &fam, &ctd);
    }

    #[test]
    fn single_bag_triangle_no_family() {
        let g = complete(3).unwrap();
        let ctd = ctd_of(&g, vec![vec![0, 1, 2]], vec![]);
        run(&g, &[], &ctd);
    }

    #[test]
    fn two_k5_bags_on_a_triangle_adhesion() {
        let mut g = Multigraph::new();
        for i in 0..7 {
            g.add_vertex(v(i));
        }
        for part in [[0u32, 1, 2, 3, 4], [2, 3, 4, 5, 6]] {
            for (i, &a) in part.iter().enumerate() {
                for &b in &part[i + 1..] {
                    if !g.has_edge(v(a), v(b)) {
                        g.add_edge(v(a), v(b));
                    }
                }
            }
        }
        let fam = [tri(2, 3, 4)];
        let ctd = ctd_of(
            &g,
            vec![vec![0, 1, 2, 3, 4], vec![2, 3, 4, 5, 6]],
            vec![(0, 1)],
        );
        run(&g, &fam, &ctd);
    }

    #[test]
    fn path_of_three_k4_bags_on_edges() {
        let mut g = Multigraph::new();
        for i in 0..8 {
            g.add_vertex(v(i));
        }
        for part in [[0u32, 1, 2, 3], [2, 3, 4, 5], [4, 5, 6, 7]] {
            for (i, &a) in part.iter().enumerate() {
                for &b in &part[i + 1..] {
                    if !g.has_edge(v(a), v(b)) {
                        g.add_edge(v(a), v(b));
                    }
                }
            }
        }
        let ctd = ctd_of(
            &g,
            vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![4, 5, 6, 7]],
            vec![(0, 1), (1, 2)],
        );
        run(&g, &[], &ctd);
    }

    #[test]
    fn two_triangles_sharing_a_cut_vertex() {
        let mut g = Multigraph::new();
        for i in 0..5 {
            g.add_vertex(v(i));
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)] {
            g.add_edge(v(a), v(b));
        }
        let ctd = ctd_of(&g, vec![vec![0, 1, 2], vec![2, 3, 4]], vec![(0, 1)]);
        run(&g, &[], &ctd);
    }

    #[test]
    fn nested_bag_is_pruned() {
        let g = complete(4).unwrap();
        let ctd = ctd_of(&g, vec![vec![0, 1, 2, 3], vec![1, 2]], vec![(0, 1)]);
        run(&g, &[], &ctd);
    }

    #[test]
    fn missing_size3_adhesion_rejected() {
        let mut g = Multigraph::new();
        for i in 0..7 {
            g.add_vertex(v(i));
        }
        for part in [[0u32, 1, 2, 3, 4], [2, 3, 4, 5, 6]] {
            for (i, &a) in part.iter().enumerate() {
                for &b in &part[i + 1..] {
                    if !g.has_edge(v(a), v(b)) {
                        g.add_edge(v(a), v(b));
                    }
                }
            }
        }
        let ctd = ctd_of(
            &g,
            vec![vec![0, 1, 2, 3, 4], vec![2, 3, 4, 5, 6]],
            vec![(0, 1)],
        );
        let (h, roles) = gadget_host(&g, &[]).unwrap();
        let err = stronger_recursion(&h, &roles, &ctd, &[]).unwrap_err();
        assert!(matches!(err, SynthError::PreconditionViolated(_)));
    }
}
