//! Mid-level contraction routines shared by the bag scripts: removal of the
//! long-path interiors around gadget triangles, the two "protection"
//! routines that withdraw a gadget while shielding chosen branch vertices,
//! and the endgame routine for hosts shaped like a subdivision of K₃,₃.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::graph::Multigraph;
use crate::trigraph::{
    verify_partial_with_constraints, Color, ContractionSequence, ContractionStep,
    StableConstraint, Trigraph, VertexId,
};

use super::theta::EdgeParts;
use super::SynthError;

/// The apex gadget attached to one triangle: the apex plus the middle vertex
/// of the length-2 path towards each triangle vertex.
#[derive(Clone, Debug)]
pub struct PsiRoles {
    pub apex: VertexId,
    pub mid: BTreeMap<VertexId, VertexId>,
}

/// Role table for a trigraph shaped like the double subdivision of a simple
/// base graph with apex gadgets on some triangles.  All synthesis scripts
/// address vertices through this table; contraction targets are chosen so
/// the table stays valid without rewrites unless a script explicitly updates
/// it.
#[derive(Clone, Debug)]
pub struct GadgetRoles {
    /// The simple base graph.
    pub base: Multigraph,
    /// Subdivision roles per base edge, keyed by the ordered vertex pair.
    pub parts: BTreeMap<(VertexId, VertexId), EdgeParts>,
    /// Apex gadgets keyed by the sorted triangle.
    pub gadgets: BTreeMap<[VertexId; 3], PsiRoles>,
}

pub(crate) fn tri_key(t: &[VertexId; 3]) -> [VertexId; 3] {
    let mut k = *t;
    k.sort();
    k
}

impl GadgetRoles {
    fn ep(&self, a: VertexId, b: VertexId) -> Result<(&EdgeParts, bool), SynthError> {
        let flipped = a > b;
        let key = if flipped { (b, a) } else { (a, b) };
        self.parts
            .get(&key)
            .map(|p| (p, flipped))
            .ok_or(SynthError::StructureMismatch("no such base edge"))
    }

    /// Interior of the length-3 path between `a` and `b` adjacent to `a`.
    pub fn x(&self, a: VertexId, b: VertexId) -> Result<VertexId, SynthError> {
        let (p, f) = self.ep(a, b)?;
        (if f { p.x_ba } else { p.x_ab })
            .ok_or(SynthError::StructureMismatch("missing short-path interior"))
    }

    /// Interior of the length-4 path between `a` and `b` adjacent to `a`.
    pub fn y_end(&self, a: VertexId, b: VertexId) -> Result<VertexId, SynthError> {
        let (p, f) = self.ep(a, b)?;
        (if f { p.y_ba } else { p.y_ab })
            .ok_or(SynthError::StructureMismatch("missing long-path end"))
    }

    /// Middle vertex of the length-4 path between `a` and `b`.
    pub fn y_mid(&self, a: VertexId, b: VertexId) -> Result<VertexId, SynthError> {
        let (p, _) = self.ep(a, b)?;
        p.y_mid
            .ok_or(SynthError::StructureMismatch("missing long-path middle"))
    }

    pub fn gadget(&self, t: &[VertexId; 3]) -> Result<&PsiRoles, SynthError> {
        self.gadgets
            .get(&tri_key(t))
            .ok_or(SynthError::StructureMismatch("no gadget on this triangle"))
    }

    pub fn apex(&self, t: &[VertexId; 3]) -> Result<VertexId, SynthError> {
        Ok(self.gadget(t)?.apex)
    }

    /// The middle vertex of the length-2 path from the apex of triangle `t`
    /// to the triangle vertex `u`.
    pub fn mid(&self, t: &[VertexId; 3], u: VertexId) -> Result<VertexId, SynthError> {
        self.gadget(t)?
            .mid
            .get(&u)
            .copied()
            .ok_or(SynthError::StructureMismatch("no gadget path to this vertex"))
    }

    /// All long-path interiors of the edges inside triangle `t`.
    pub fn long_interiors(&self, t: &[VertexId; 3]) -> Result<BTreeSet<VertexId>, SynthError> {
        let mut out = BTreeSet::new();
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            out.insert(self.y_end(a, b)?);
            out.insert(self.y_mid(a, b)?);
            out.insert(self.y_end(b, a)?);
        }
        Ok(out)
    }

    /// All short-path interiors of the edges inside triangle `t`.
    pub fn short_interiors(&self, t: &[VertexId; 3]) -> Result<BTreeSet<VertexId>, SynthError> {
        let mut out = BTreeSet::new();
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            out.insert(self.x(a, b)?);
            out.insert(self.x(b, a)?);
        }
        Ok(out)
    }

    /// Vertex and edge sets of the gadget replacement graph for triangle
    /// `t`: the 9-cycle through the short paths plus the apex gadget.
    pub fn expected_psi_star(
        &self,
        t: &[VertexId; 3],
    ) -> Result<(BTreeSet<VertexId>, BTreeSet<(VertexId, VertexId)>), SynthError> {
        let mut verts: BTreeSet<VertexId> = t.iter().copied().collect();
        let mut edges = BTreeSet::new();
        let mut put = |u: VertexId, v: VertexId| {
            edges.insert(crate::trigraph::pair(u, v));
        };
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            let (xa, xb) = (self.x(a, b)?, self.x(b, a)?);
            verts.insert(xa);
            verts.insert(xb);
            put(a, xa);
            put(xa, xb);
            put(xb, b);
        }
        let g = self.gadget(t)?;
        verts.insert(g.apex);
        for &u in t.iter() {
            let m = *g
                .mid
                .get(&u)
                .ok_or(SynthError::StructureMismatch("gadget misses a triangle vertex"))?;
            verts.insert(m);
            put(g.apex, m);
            put(m, u);
        }
        Ok((verts, edges))
    }
}

/// All-black gadget host over a simple base graph: the double subdivision
/// plus one apex gadget per listed base triangle, together with the role
/// table the synthesis scripts address it through.
pub fn gadget_host(
    base: &Multigraph,
    tris: &[[VertexId; 3]],
) -> Result<(Trigraph, GadgetRoles), SynthError> {
    let tg = crate::graph::theta(base)?;
    let h = tg.graph.to_trigraph();
    let mut seps = Vec::with_capacity(tris.len());
    for t in tris {
        seps.push(tg.sigma(t)?);
    }
    let pg = crate::graph::psi(&h, &seps)?;
    let host = pg.graph.to_trigraph();
    let mut parts = BTreeMap::new();
    for (e, (a, b)) in tg.base.edges() {
        let p3 = &tg.path3[&e];
        let p4 = &tg.path4[&e];
        debug_assert_eq!(p3[0], a.min(b));
        parts.insert(
            (a, b),
            EdgeParts {
                x_ab: Some(p3[1]),
                x_ba: Some(p3[2]),
                y_ab: Some(p4[1]),
                y_mid: Some(p4[2]),
                y_ba: Some(p4[3]),
            },
        );
    }
    let mut gadgets = BTreeMap::new();
    for (t, g) in tris.iter().zip(&pg.gadgets) {
        gadgets.insert(
            tri_key(t),
            PsiRoles {
                apex: g.apex,
                mid: g.mid.clone(),
            },
        );
    }
    Ok((
        host,
        GadgetRoles {
            base: base.clone(),
            parts,
            gadgets,
        },
    ))
}

/// Remove the interiors of the length-4 paths around every triangle of the
/// family by folding them into the corresponding apex gadget.  The sequence
/// is stable on everything outside those interiors and the gadgets.
pub fn y_operation_reduce(
    h: &Trigraph,
    roles: &GadgetRoles,
    family: &[[VertexId; 3]],
) -> Result<(ContractionSequence, Trigraph), SynthError> {
    let mut seq = ContractionSequence::new();
    let mut removed: BTreeSet<VertexId> = BTreeSet::new();
    // per covered base edge, the first family triangle containing it
    let mut component_owner: BTreeMap<(VertexId, VertexId), [VertexId; 3]> = BTreeMap::new();
    for t in family {
        for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            component_owner
                .entry(crate::trigraph::pair(a, b))
                .or_insert(*t);
        }
    }
    for (&(a, b), s) in &component_owner {
        let (pa, pm, pb) = (roles.y_end(a, b)?, roles.y_mid(a, b)?, roles.y_end(b, a)?);
        for (p, u) in [(pa, a), (pb, b)] {
            let m = roles.mid(s, u)?;
            seq.push(p, m, m);
        }
        let apex = roles.apex(s)?;
        seq.push(apex, pm, apex);
        removed.extend([pa, pm, pb]);
    }
    let d = h.max_red_degree().max(3);
    let stable: BTreeSet<VertexId> = h
        .vertices()
        .filter(|v| {
            !removed.contains(v)
                && !roles.gadgets.values().any(|g| {
                    g.apex == *v || g.mid.values().any(|&m| m == *v)
                })
        })
        .collect();
    let cons = StableConstraint::stable_on(stable);
    let fin = verify_partial_with_constraints(h, &seq, d, &cons)?
        .map_err(SynthError::VerificationFailed)?;
    let expected: BTreeSet<VertexId> = h
        .vertices()
        .filter(|v| !removed.contains(v))
        .collect();
    if fin.vertex_set() != &expected {
        return Err(SynthError::StructureMismatch(
            "long-path interiors not fully removed",
        ));
    }
    Ok((seq, fin))
}

/// The contraction plan of the eight-step gadget withdrawal.  Scripts that
/// interleave it with other work take a prefix now and the rest later; the
/// split point is theirs to choose, the step list is fixed once computed.
#[derive(Clone, Debug)]
pub struct Protection1Plan {
    pub steps: Vec<ContractionStep>,
}

impl Protection1Plan {
    pub fn prefix(&self, n: usize) -> &[ContractionStep] {
        &self.steps[..n]
    }

    pub fn rest(&self, n: usize) -> &[ContractionStep] {
        &self.steps[n..]
    }
}

/// Withdraw the apex gadget of triangle `{t₁,t₂,t₃}` while fixing `t₁,t₂`
/// and keeping `t₃` stable.  Requires the color side-condition
/// `t₁t₁,₃ red or t₂t₂,₃ black`; the final underlying graph keeps
/// `t₁,t₂,t₃`, the apex, and the gadget path vertex towards `t₃`, with the
/// apex adjacent to `t₁` and `t₂`.
pub fn protection1(
    h: &Trigraph,
    roles: &GadgetRoles,
    t: [VertexId; 3],
) -> Result<Protection1Plan, SynthError> {
    let [t1, t2, t3] = t;
    let t13 = roles.x(t1, t3)?;
    let t23 = roles.x(t2, t3)?;
    let c13 = h.edge_color(t1, t13);
    let c23 = h.edge_color(t2, t23);
    if c13 != Some(Color::Red) && c23 != Some(Color::Black) {
        return Err(SynthError::ColorPreconditionFailed);
    }
    let t12 = roles.x(t1, t2)?;
    let t21 = roles.x(t2, t1)?;
    let t31 = roles.x(t3, t1)?;
    let t32 = roles.x(t3, t2)?;
    let t4 = roles.apex(&t)?;
    let y1 = roles.mid(&t, t1)?;
    let y2 = roles.mid(&t, t2)?;
    let y3 = roles.mid(&t, t3)?;
    let t1p = if c13 == Some(Color::Black) { t12 } else { t13 };
    let mut steps = alloc::vec![
        ContractionStep::new(t1p, y1, y1),
        ContractionStep::new(t21, y2, y2),
        ContractionStep::new(t31, y3, y3),
        ContractionStep::new(t4, y1, t4),
    ];
    if t1p == t13 {
        steps.extend([
            ContractionStep::new(t12, t4, t4),
            ContractionStep::new(t32, y3, y3),
            ContractionStep::new(t23, y2, y2),
            ContractionStep::new(t4, y2, t4),
        ]);
    } else {
        steps.extend([
            ContractionStep::new(t13, t4, t4),
            ContractionStep::new(t4, y2, t4),
            ContractionStep::new(t32, y3, y3),
            ContractionStep::new(t23, t4, t4),
        ]);
    }
    Ok(Protection1Plan { steps })
}

/// Precondition-free version: if `t₁t₁,₃` is black the side-condition is
/// achieved by swapping the roles of `t₁` and `t₂`.
pub fn cor_protection1(
    h: &Trigraph,
    roles: &GadgetRoles,
    t: [VertexId; 3],
) -> Result<Protection1Plan, SynthError> {
    let t13 = roles.x(t[0], t[2])?;
    if h.edge_color(t[0], t13) == Some(Color::Red) {
        protection1(h, roles, t)
    } else {
        protection1(h, roles, [t[1], t[0], t[2]])
    }
}

/// Withdraw the gadget of triangle `{t₁,t₂,t₃}` the other way around: `t₁`
/// and `t₂` stay stable, `t₃` is fixed and ends up adjacent to the apex.
/// Removes the four short-path interiors towards `t₃` and the gadget path
/// vertex of `t₃`.  The orientation condition is achieved internally by
/// swapping `t₁` and `t₂` when needed.
pub fn protection2(
    h: &Trigraph,
    roles: &GadgetRoles,
    t: [VertexId; 3],
) -> Result<Vec<ContractionStep>, SynthError> {
    let [mut t1, mut t2, t3] = t;
    let ok = |a: VertexId, b: VertexId| -> Result<bool, SynthError> {
        Ok(h.edge_color(t3, roles.x(t3, a)?) == Some(Color::Red)
            || h.edge_color(t3, roles.x(t3, b)?) == Some(Color::Black))
    };
    if !ok(t1, t2)? {
        core::mem::swap(&mut t1, &mut t2);
        if !ok(t1, t2)? {
            return Err(SynthError::ColorPreconditionFailed);
        }
    }
    let key = [t1, t2, t3];
    let t4 = roles.apex(&key)?;
    let y1 = roles.mid(&key, t1)?;
    let y2 = roles.mid(&key, t2)?;
    let y3 = roles.mid(&key, t3)?;
    Ok(alloc::vec![
        ContractionStep::new(roles.x(t1, t3)?, y1, y1),
        ContractionStep::new(roles.x(t3, t1)?, y3, y3),
        ContractionStep::new(y3, t4, t4),
        ContractionStep::new(roles.x(t2, t3)?, y2, y2),
        ContractionStep::new(roles.x(t3, t2)?, t4, t4),
    ])
}

/// Endgame for hosts shaped like a subdivision of K₃,₃ (after the earlier
/// scripts cleared everything else): contract down to `H₀`, the induced
/// 1-subdivision of K₁,₃ around `center`, without ever contracting a leaf
/// and without raising any leaf's red degree.  `excluded` vertices are
/// treated as absent; the emitted steps never touch them or their
/// neighbourhood colors.
pub fn routine_k33(
    h: &Trigraph,
    center: VertexId,
    excluded: &BTreeSet<VertexId>,
) -> Result<ContractionSequence, SynthError> {
    let mut g = h.without(excluded);
    let mut seq = ContractionSequence::new();

    // H₀ = the closed second neighbourhood of the center
    let mids: BTreeSet<VertexId> = g.neighbors(center).into_iter().collect();
    if mids.len() != 3 {
        return Err(SynthError::StructureMismatch("center must have degree 3"));
    }
    let mut leaves: BTreeSet<VertexId> = BTreeSet::new();
    for &m in &mids {
        let others: Vec<VertexId> = g
            .neighbors(m)
            .into_iter()
            .filter(|&w| w != center)
            .collect();
        if others.len() != 1 {
            return Err(SynthError::StructureMismatch(
                "gadget path vertices must have degree 2",
            ));
        }
        leaves.insert(others[0]);
    }
    if leaves.len() != 3 {
        return Err(SynthError::StructureMismatch("expected three leaves"));
    }
    let h0: BTreeSet<VertexId> = [center]
        .into_iter()
        .chain(mids.iter().copied())
        .chain(leaves.iter().copied())
        .collect();
    let leaf_red: BTreeMap<VertexId, usize> = leaves
        .iter()
        .map(|&l| (l, g.red_degree(l).unwrap_or(0)))
        .collect();

    let contract =
        |g: &mut Trigraph, seq: &mut ContractionSequence, u: VertexId, v: VertexId, tgt: VertexId|
         -> Result<(), SynthError> {
            *g = g.contract(u, v, tgt)?;
            seq.push(u, v, tgt);
            Ok(())
        };

    // fold everything outside the closed neighbourhood of the leaves
    loop {
        let closed_n_l: BTreeSet<VertexId> = leaves
            .iter()
            .flat_map(|&l| {
                g.neighbors(l).into_iter().chain(core::iter::once(l))
            })
            .collect();
        let mut found = None;
        'outer: for u in g.vertices() {
            if g.degree(u) != 2 || closed_n_l.contains(&u) {
                continue;
            }
            for w in g.neighbors(u) {
                if !closed_n_l.contains(&w) && !h0.contains(&w) && !h0.contains(&u) {
                    found = Some((u, w));
                    break 'outer;
                }
            }
        }
        match found {
            Some((u, w)) => contract(&mut g, &mut seq, u, w, u.min(w))?,
            None => break,
        }
    }

    // merge the two outward neighbours of every degree-3 leaf
    for &l in &leaves {
        let out: Vec<VertexId> = g
            .neighbors(l)
            .into_iter()
            .filter(|w| !h0.contains(w))
            .collect();
        if out.len() == 2 {
            contract(&mut g, &mut seq, out[0], out[1], out[0].min(out[1]))?;
        } else if out.len() > 2 {
            return Err(SynthError::StructureMismatch("leaf with too many branches"));
        }
    }

    // the rest minus the degree-2 fringe of the leaves must now be the
    // 2+3-biclique; merge its two high-degree vertices
    let fringe: BTreeSet<VertexId> = leaves
        .iter()
        .flat_map(|&l| g.neighbors(l))
        .filter(|&w| !h0.contains(&w) && g.degree(w) == 2)
        .collect();
    let core_set: BTreeSet<VertexId> = g
        .vertices()
        .filter(|v| !h0.contains(v) && !fringe.contains(v))
        .collect();
    let d3: Vec<VertexId> = core_set
        .iter()
        .copied()
        .filter(|&v| {
            g.neighbors(v)
                .into_iter()
                .filter(|w| core_set.contains(w))
                .count()
                == 3
        })
        .collect();
    if core_set.len() != 5 || d3.len() != 2 {
        return Err(SynthError::StructureMismatch(
            "reserve is not a 2+3-biclique",
        ));
    }
    let y = d3[0].min(d3[1]);
    contract(&mut g, &mut seq, d3[0], d3[1], y)?;

    // shorten any remaining length-3 connection from y to a leaf
    for &l in &leaves {
        let m: Vec<VertexId> = g
            .neighbors(l)
            .into_iter()
            .filter(|w| !h0.contains(w))
            .collect();
        if m.len() != 1 {
            return Err(SynthError::StructureMismatch("leaf fringe not unique"));
        }
        let m = m[0];
        if g.edge_color(m, y).is_none() {
            let q: Vec<VertexId> = g
                .neighbors(m)
                .into_iter()
                .filter(|&w| w != l)
                .collect();
            if q.len() != 1 || g.edge_color(q[0], y).is_none() {
                return Err(SynthError::StructureMismatch("leaf too far from the hub"));
            }
            contract(&mut g, &mut seq, y, q[0], y)?;
        }
    }

    // absorb the fringe into the gadget paths, then the hub into the center
    for &l in &leaves {
        let m_h0: Vec<VertexId> = g
            .neighbors(l)
            .into_iter()
            .filter(|w| h0.contains(w))
            .collect();
        let m_out: Vec<VertexId> = g
            .neighbors(l)
            .into_iter()
            .filter(|w| !h0.contains(w))
            .collect();
        if m_h0.len() != 1 || m_out.len() != 1 {
            return Err(SynthError::StructureMismatch("leaf neighbourhood malformed"));
        }
        contract(&mut g, &mut seq, m_h0[0], m_out[0], m_h0[0])?;
    }
    contract(&mut g, &mut seq, center, y, center)?;

    // the survivor must be exactly H₀, with leaves untouched
    if g.vertex_set() != &h0 {
        return Err(SynthError::StructureMismatch("residue differs from H0"));
    }
    for (&l, &r0) in &leaf_red {
        if g.red_degree(l).unwrap_or(0) > r0.max(0) {
            return Err(SynthError::StructureMismatch("leaf red degree increased"));
        }
    }
    let base = h.without(excluded);
    let cons = StableConstraint::stable_on(leaves.iter().copied());
    verify_partial_with_constraints(&base, &seq, 3, &cons)?
        .map_err(SynthError::VerificationFailed)?;
    Ok(seq)
}
