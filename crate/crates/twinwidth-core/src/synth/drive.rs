//! Top-level synthesis: given an all-but-decorated ≥2-subdivision and a
//! target width, either produce a full verified sequence or a minor witness
//! in the base graph certifying that no such sequence exists.
//!
//! The width-3 route: shrink the subdivision to (an induced piece of) the
//! double subdivision of the simplified base, build a contractible tree
//! decomposition of a minor-free supergraph of that base, extend the shrunk
//! trigraph with the missing all-black paths and apex gadgets of the
//! decomposition's adhesion triangles, run the leaf-by-leaf recursion on the
//! extended host, and project its steps back before the final end-to-end
//! verification on the original input.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::decomp::{build_3_contractible, BuildError};
use crate::graph::{Multigraph, SubdividedGraph};
use crate::minor::is_f3_minor_free;
use crate::trigraph::{project_sequence, Color, Trigraph, VertexId};

use super::ops::{tri_key, GadgetRoles, PsiRoles};
use super::recursion::stronger_recursion;
use super::small::{fold_remaining, synthesize_low};
use super::theta::{lemma_theta_reduce, EdgeParts};
use super::twotree::synthesize_d2;
use super::{demand_verified, ObstructionKind, SynthError, SynthesisResult};

/// Synthesize a full width-`d` sequence for `h`, a trigraph over `sub`, or
/// return the minor obstruction ruling width `d` out.  `budget` bounds the
/// minor searches.  Preconditions per width: `d = 3` allows red decorations
/// of degree at most 3; `d = 2` needs red degree 0 on branch vertices;
/// `d ≤ 1` needs underlying girth at least 5.
pub fn synthesize(
    h: &Trigraph,
    sub: &SubdividedGraph,
    d: usize,
    budget: u64,
) -> Result<SynthesisResult, SynthError> {
    match d {
        0 | 1 => synthesize_low(h, sub, d),
        2 => synthesize_d2(h, sub),
        3 => synthesize_d3(h, sub, budget),
        _ => Err(SynthError::BadParameter),
    }
}

fn from_build(e: BuildError) -> SynthError {
    match e {
        BuildError::EmptyGraph => SynthError::PreconditionViolated("empty base graph"),
        // ruled out by the caller's own minor check; reaching it is a bug
        BuildError::NotMinorFree(_) => {
            SynthError::StructureMismatch("clique completion created a forbidden minor")
        }
        BuildError::UnclassifiableBag(_) => {
            SynthError::StructureMismatch("decomposition produced a bag outside the catalogue")
        }
        BuildError::Minor(e) => SynthError::Minor(e),
    }
}

fn synthesize_d3(
    h: &Trigraph,
    sub: &SubdividedGraph,
    budget: u64,
) -> Result<SynthesisResult, SynthError> {
    if h.max_red_degree() > 3 {
        return Err(SynthError::PreconditionViolated(
            "maximum red degree at most 3",
        ));
    }
    if let Some((name, model)) = is_f3_minor_free(&sub.base, budget)? {
        return Ok(SynthesisResult::Obstruction {
            kind: ObstructionKind::F3(name),
            model,
        });
    }

    let tr = lemma_theta_reduce(h, sub)?;
    let mut seq = tr.seq.clone();

    if tr.base.vertex_count() <= 2 {
        // what survives embeds into the gadget of a single edge: a cycle or
        // smaller, which folds directly
        fold_remaining(&tr.result, &mut seq)?;
        let report = demand_verified(h, &seq, 3, false)?;
        return Ok(SynthesisResult::Sequence { seq, report });
    }

    let (gp, ctd) = build_3_contractible(&tr.base, budget).map_err(from_build)?;
    let mut fam: BTreeSet<[VertexId; 3]> = BTreeSet::new();
    for x in ctd.adhesions.values() {
        if x.len() == 3 {
            let v: Vec<VertexId> = x.iter().copied().collect();
            fam.insert(tri_key(&[v[0], v[1], v[2]]));
        }
    }
    let (hh, roles) = extend_to_psi_host(&tr.result, &tr.parts, &gp, &fam)?;
    let fam_list: Vec<[VertexId; 3]> = fam.iter().copied().collect();
    let (seq2, _) = stronger_recursion(&hh, &roles, &ctd, &fam_list)?;
    seq.extend(&project_sequence(&seq2, tr.result.vertex_set()));

    let report = demand_verified(h, &seq, 3, false)?;
    Ok(SynthesisResult::Sequence { seq, report })
}

/// Grow the reduced trigraph into the full gadgeted double subdivision of
/// `gp`: reuse every surviving path role, invent fresh all-black vertices
/// for missing path pieces and for the apex gadgets of `fam`.  The reduced
/// trigraph stays an induced subtrigraph of the result.
fn extend_to_psi_host(
    reduced: &Trigraph,
    parts: &BTreeMap<(VertexId, VertexId), EdgeParts>,
    gp: &Multigraph,
    fam: &BTreeSet<[VertexId; 3]>,
) -> Result<(Trigraph, GadgetRoles), SynthError> {
    let mut next = reduced
        .vertex_set()
        .iter()
        .next_back()
        .map_or(0, |v| v.0 + 1);
    let mut hh = Trigraph::new();
    for v in gp.vertices() {
        hh.add_vertex(v);
    }
    let mut fresh = |hh: &mut Trigraph| {
        let v = VertexId(next);
        next += 1;
        hh.add_vertex(v);
        v
    };
    let keep = |hh: &mut Trigraph, v: VertexId| {
        hh.add_vertex(v);
        v
    };

    let mut new_parts = BTreeMap::new();
    for (_, (a, b)) in gp.edges() {
        let (a, b) = (a.min(b), a.max(b));
        let p = parts.get(&(a, b)).copied().unwrap_or_default();
        let mut pick = |hh: &mut Trigraph, r: Option<VertexId>| match r {
            Some(v) => keep(hh, v),
            None => fresh(hh),
        };
        let xa = pick(&mut hh, p.x_ab);
        let xb = pick(&mut hh, p.x_ba);
        let ya = pick(&mut hh, p.y_ab);
        let ym = pick(&mut hh, p.y_mid);
        let yb = pick(&mut hh, p.y_ba);
        for (u, w) in [(a, xa), (xa, xb), (xb, b), (a, ya), (ya, ym), (ym, yb), (yb, b)] {
            let c = reduced.edge_color(u, w).unwrap_or(Color::Black);
            hh.add_edge(u, w, c)?;
        }
        new_parts.insert(
            (a, b),
            EdgeParts {
                x_ab: Some(xa),
                x_ba: Some(xb),
                y_ab: Some(ya),
                y_mid: Some(ym),
                y_ba: Some(yb),
            },
        );
    }

    let mut gadgets = BTreeMap::new();
    for t in fam {
        let apex = fresh(&mut hh);
        let mut mid = BTreeMap::new();
        for &u in t {
            let m = fresh(&mut hh);
            hh.add_edge(u, m, Color::Black)?;
            hh.add_edge(apex, m, Color::Black)?;
            mid.insert(u, m);
        }
        gadgets.insert(*t, PsiRoles { apex, mid });
    }

    // the extension must not have disturbed what survived the reduction
    let ind = hh.induced(reduced.vertex_set())?;
    let same = ind.edges().collect::<BTreeMap<_, _>>()
        == reduced.edges().collect::<BTreeMap<_, _>>();
    if !same {
        return Err(SynthError::StructureMismatch(
            "reduced trigraph is not induced in the extended host",
        ));
    }

    Ok((
        hh,
        GadgetRoles {
            base: gp.clone(),
            parts: new_parts,
            gadgets,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        complete, cycle, disjoint_union, f3_member, path, subdivide, uniform_lengths, F3Name,
    };
    use crate::minor::verify_minor_model;

    const BUDGET: u64 = 10_000_000;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn all_black(base: &Multigraph, l: u32) -> (Trigraph, SubdividedGraph) {
        let sub = subdivide(base, &uniform_lengths(base, l)).unwrap();
        (sub.graph.to_trigraph(), sub)
    }

    fn expect_full(h: &Trigraph, r: &SynthesisResult) {
        match r {
            SynthesisResult::Sequence { seq, report } => {
                assert!(report.ok);
                assert_eq!(seq.len(), h.vertex_count() - 1);
            }
            SynthesisResult::Obstruction { kind, .. } => {
                panic!("expected a sequence, got obstruction {kind}")
            }
        }
    }

    #[test]
    fn double_subdivided_k4_folds_at_three() {
        let (h, sub) = all_black(&complete(4).unwrap(), 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn double_subdivided_k4_is_obstructed_at_two() {
        let (h, sub) = all_black(&complete(4).unwrap(), 3);
        let r = synthesize(&h, &sub, 2, BUDGET).unwrap();
        assert_eq!(r.obstruction(), Some(ObstructionKind::K4));
    }

    #[test]
    fn double_subdivided_k5_folds_at_three() {
        let (h, sub) = all_black(&complete(5).unwrap(), 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn two_glued_k5_bags_run_the_whole_pipeline() {
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
        let (h, sub) = all_black(&g, 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn subdivided_cycle_folds_at_three() {
        let (h, sub) = all_black(&cycle(5).unwrap(), 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn loops_and_parallel_edges_fold_at_three() {
        let mut base = Multigraph::new();
        let a = base.fresh_vertex();
        let b = base.fresh_vertex();
        base.add_edge(a, b);
        base.add_edge(a, b);
        base.add_edge(a, a);
        let (h, sub) = all_black(&base, 4);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn k6_is_returned_as_an_f3_obstruction() {
        let base = complete(6).unwrap();
        let (h, sub) = all_black(&base, 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        match r {
            SynthesisResult::Obstruction {
                kind: ObstructionKind::F3(name),
                model,
            } => {
                let pattern = f3_member(name);
                assert_eq!(verify_minor_model(&base, &pattern.graph, &model), Ok(()));
            }
            other => panic!("expected an obstruction, got {other:?}"),
        }
    }

    #[test]
    fn the_cube_obstructs_itself() {
        let base = f3_member(F3Name::Q3).graph.clone();
        let (h, sub) = all_black(&base, 3);
        let r = synthesize(&h, &sub, 3, BUDGET).unwrap();
        assert!(matches!(r.obstruction(), Some(ObstructionKind::F3(_))));
    }

    #[test]
    fn low_width_dispatch_still_works() {
        let (base, _) = disjoint_union(&path(3).unwrap(), &path(1).unwrap());
        let (h, sub) = all_black(&base, 4);
        let r = synthesize(&h, &sub, 1, BUDGET).unwrap();
        expect_full(&h, &r);
    }

    #[test]
    fn width_four_is_a_bad_parameter() {
        let (h, sub) = all_black(&complete(4).unwrap(), 3);
        assert!(matches!(
            synthesize(&h, &sub, 4, BUDGET),
            Err(SynthError::BadParameter)
        ));
    }

    #[test]
    fn single_subdivision_is_rejected_at_three() {
        let (h, sub) = all_black(&complete(4).unwrap(), 2);
        assert!(synthesize(&h, &sub, 3, BUDGET).is_err());
    }
}
