//! Collapse a gadget host onto a chosen target: for a host shaped like the
//! double subdivision of a catalogue bag with apex gadgets on an addable
//! triangle family, produce a verified width-3 sequence that contracts
//! everything except the replacement graph of one family triangle, or except
//! the double-subdivision cycle of one bag edge.  The sequence never touches
//! the target vertices and never raises their red degree, so a caller can
//! splice it into a larger host.
//!
//! Each bag class has a fixed contraction script addressed through a
//! canonical labelling; the engine enumerates labellings of the actual bag
//! that place the maximal triangle family and the target correctly, and runs
//! the script under the first labelling whose color side-conditions work
//! out.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::decomp::{classify_bag, is_addable};
use crate::graph::{k_class_member, KClassName, Multigraph};
use crate::trigraph::{
    project_sequence, verify_partial_with_constraints, Color, ContractionSequence,
    ContractionStep, StableConstraint, Trigraph, VertexId,
};

use super::ops::{
    cor_protection1, protection1, protection2, routine_k33, tri_key, y_operation_reduce,
    GadgetRoles, Protection1Plan, PsiRoles,
};
use super::theta::EdgeParts;
use super::SynthError;

/// What the host should be collapsed onto.
#[derive(Clone, Copy, Debug)]
pub enum BaseTarget {
    /// Keep the replacement graph of this family triangle.
    Triangle([VertexId; 3]),
    /// Keep the double-subdivision cycle of this bag edge.
    Edge(VertexId, VertexId),
}

/// A verified collapse of a gadget host.
#[derive(Clone, Debug)]
pub struct BaseSynthesis {
    /// The verified width-3 sequence on the input host.
    pub seq: ContractionSequence,
    /// The final trigraph after replaying `seq`.
    pub result: Trigraph,
    /// For an edge target, the roles of the five interior vertices of the
    /// remaining 7-cycle, read off the final trigraph.
    pub cycle_parts: Option<EdgeParts>,
}

/// Collapse `h` onto `target`.  `h` must be the double subdivision of
/// `roles.base` (red decorations allowed, max red degree ≤ 3) with exactly
/// the gadgets of `family` attached; `family` must be addable; a triangle
/// target must be a family member, an edge target a bag edge.  The returned
/// sequence never contracts a target vertex and never raises a target
/// vertex's red degree.
pub fn base_sequence(
    h: &Trigraph,
    roles: &GadgetRoles,
    family: &[[VertexId; 3]],
    target: BaseTarget,
) -> Result<BaseSynthesis, SynthError> {
    if h.max_red_degree() > 3 {
        return Err(SynthError::PreconditionViolated(
            "host has red degree above three",
        ));
    }
    let base = &roles.base;
    let class = classify_bag(base)
        .ok_or(SynthError::StructureMismatch("bag is not in the catalogue"))?;
    if base.vertex_count() < 2 {
        return Err(SynthError::PreconditionViolated(
            "single-vertex bag has no collapse target",
        ));
    }

    let fam: BTreeSet<[VertexId; 3]> = family.iter().map(tri_key).collect();
    for t in &fam {
        roles.gadget(t)?;
    }
    if roles.gadgets.len() != fam.len() {
        return Err(SynthError::StructureMismatch(
            "role table lists gadgets outside the family",
        ));
    }
    let fam_sets: BTreeSet<BTreeSet<VertexId>> = fam
        .iter()
        .map(|t| t.iter().copied().collect())
        .collect();
    if !is_addable(base, class.name, &fam_sets)? {
        return Err(SynthError::NotAddable);
    }

    let (x_set, tri_target) = match target {
        BaseTarget::Triangle(t) => {
            let k = tri_key(&t);
            if !fam.contains(&k) {
                return Err(SynthError::BadX);
            }
            (k.iter().copied().collect::<BTreeSet<_>>(), Some(k))
        }
        BaseTarget::Edge(u, v) => {
            if u == v || base.edges_between(u, v).is_empty() {
                return Err(SynthError::BadX);
            }
            ([u, v].into_iter().collect(), None)
        }
    };

    // A two-vertex bag is already its own target cycle.
    if base.vertex_count() == 2 {
        let mut xs = x_set.iter().copied();
        let (a, b) = (xs.next().unwrap(), xs.next().unwrap());
        let parts = check_c7(h, a, b)?;
        return Ok(BaseSynthesis {
            seq: ContractionSequence::new(),
            result: h.clone(),
            cycle_parts: Some(parts),
        });
    }

    let s_max = maximal_family(base, class.name, &fam_sets)?;
    let s_max_set: BTreeSet<[VertexId; 3]> = s_max.iter().copied().collect();

    // A triple-matching-deficient K6 bag borrows the structure of the
    // double-matching-deficient one: restore one missing edge, with its two
    // subdivision paths, as all-black phantoms on fresh vertices.
    let phantom = if class.name == KClassName::K6TripleMinus {
        Some((class.map[&VertexId(1)], class.map[&VertexId(4)]))
    } else {
        None
    };
    let (hs, rs) = extend_host(h, roles, &s_max, phantom)?;

    let canon_name = if class.name == KClassName::K6TripleMinus {
        KClassName::K6DoubleMinus
    } else {
        class.name
    };
    let canon = k_class_member(canon_name)?.graph;
    let s_c = canonical_family(canon_name);
    if s_c.is_empty() {
        return Err(SynthError::StructureMismatch(
            "bag class has no collapse script",
        ));
    }

    let (seq0, h1) = y_operation_reduce(&hs, &rs, &s_max)?;

    let (mut seq, _cur) = match tri_target {
        Some(x) => {
            let xa: BTreeSet<VertexId> = x.iter().copied().collect();
            run_script_variants(
                &hs,
                &rs,
                &canon,
                s_c,
                &s_max_set,
                &xa,
                triangle_variants(canon_name),
                &seq0,
                &h1,
            )?
        }
        None => {
            let uv: Vec<VertexId> = x_set.iter().copied().collect();
            if let Some(&xp) = s_max.iter().find(|t| x_set.iter().all(|v| t.contains(v))) {
                // Collapse onto the covering triangle first, then withdraw
                // its gadget around the spare vertex and absorb both into
                // the apex; the 7-cycle of the edge remains.
                let xa: BTreeSet<VertexId> = xp.iter().copied().collect();
                let (mut s, mut c) = run_script_variants(
                    &hs,
                    &rs,
                    &canon,
                    s_c,
                    &s_max_set,
                    &xa,
                    triangle_variants(canon_name),
                    &seq0,
                    &h1,
                )?;
                let third = xp
                    .iter()
                    .copied()
                    .find(|v| !x_set.contains(v))
                    .expect("covering triangle has a third vertex");
                for st in protection2(&c, &rs, [uv[0], uv[1], third])? {
                    c = c.contract(st.u, st.v, st.target)?;
                    s.push(st.u, st.v, st.target);
                }
                let ax = rs.apex(&xp)?;
                c = c.contract(third, ax, ax)?;
                s.push(third, ax, ax);
                (s, c)
            } else if class.name == KClassName::K6DoubleMinus {
                // The one edge outside every maximal family member joins the
                // two degree-5 vertices; it has a script of its own.
                run_script_variants(
                    &hs,
                    &rs,
                    &canon,
                    s_c,
                    &s_max_set,
                    &x_set,
                    K6_EDGE_VARIANTS,
                    &seq0,
                    &h1,
                )?
            } else {
                return Err(SynthError::StructureMismatch(
                    "edge is not covered by the maximal family",
                ));
            }
        }
    };

    // Verify on the extended host, check the final shape there, then project
    // away the phantoms and verify again on the real host.
    let cons = StableConstraint::stable_on(x_set.iter().copied());
    let fin_ext = verify_partial_with_constraints(&hs, &seq, 3, &cons)?
        .map_err(SynthError::VerificationFailed)?;
    match tri_target {
        Some(x) => check_psi_star(&fin_ext, &rs, &x)?,
        None => {
            let uv: Vec<VertexId> = x_set.iter().copied().collect();
            check_c7(&fin_ext, uv[0], uv[1])?;
        }
    }

    seq = project_sequence(&seq, h.vertex_set());
    let fin = verify_partial_with_constraints(h, &seq, 3, &cons)?
        .map_err(SynthError::VerificationFailed)?;
    let cycle_parts = match tri_target {
        Some(x) => {
            check_psi_star(&fin, roles, &x)?;
            None
        }
        None => {
            let uv: Vec<VertexId> = x_set.iter().copied().collect();
            Some(check_c7(&fin, uv[0], uv[1])?)
        }
    };
    Ok(BaseSynthesis {
        seq,
        result: fin,
        cycle_parts,
    })
}

/// Grow the family to a maximal addable one, greedily over the bag's
/// triangles.
fn maximal_family(
    base: &Multigraph,
    name: KClassName,
    fam: &BTreeSet<BTreeSet<VertexId>>,
) -> Result<Vec<[VertexId; 3]>, SynthError> {
    let mut cur = fam.clone();
    for t in base.triangles() {
        if cur.contains(&t) {
            continue;
        }
        let mut cand = cur.clone();
        cand.insert(t.clone());
        if is_addable(base, name, &cand)? {
            cur = cand;
        }
    }
    Ok(cur
        .iter()
        .map(|t| {
            let v: Vec<VertexId> = t.iter().copied().collect();
            tri_key(&[v[0], v[1], v[2]])
        })
        .collect())
}

/// Clone the host and attach, all black and on fresh ids: the optional
/// phantom subdivided edge, and one apex gadget per maximal-family triangle
/// that does not already have one.
fn extend_host(
    h: &Trigraph,
    roles: &GadgetRoles,
    s_max: &[[VertexId; 3]],
    phantom: Option<(VertexId, VertexId)>,
) -> Result<(Trigraph, GadgetRoles), SynthError> {
    let mut hs = h.clone();
    let mut rs = roles.clone();
    let mut next = hs.vertex_set().iter().next_back().map_or(0, |v| v.0 + 1);
    let mut fresh = |hs: &mut Trigraph| {
        let v = VertexId(next);
        next += 1;
        hs.add_vertex(v);
        v
    };
    if let Some((u, w)) = phantom {
        let (a, b) = (u.min(w), u.max(w));
        let xa = fresh(&mut hs);
        let xb = fresh(&mut hs);
        let ya = fresh(&mut hs);
        let ym = fresh(&mut hs);
        let yb = fresh(&mut hs);
        for (p, q) in [(a, xa), (xa, xb), (xb, b), (a, ya), (ya, ym), (ym, yb), (yb, b)] {
            hs.add_edge(p, q, Color::Black)?;
        }
        rs.base.add_edge(a, b);
        rs.parts.insert(
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
    for t in s_max {
        if rs.gadgets.contains_key(t) {
            continue;
        }
        let apex = fresh(&mut hs);
        let mut mid = BTreeMap::new();
        for &u in t {
            let m = fresh(&mut hs);
            hs.add_edge(u, m, Color::Black)?;
            hs.add_edge(apex, m, Color::Black)?;
            mid.insert(u, m);
        }
        rs.gadgets.insert(*t, PsiRoles { apex, mid });
    }
    Ok((hs, rs))
}

/// The maximal triangle family of each bag class under its canonical
/// labelling (labels are 1-based).
fn canonical_family(name: KClassName) -> &'static [[usize; 3]] {
    match name {
        KClassName::Complete(3) => &[[1, 2, 3]],
        KClassName::Complete(4) => &[[2, 3, 4], [1, 3, 4], [1, 2, 4]],
        KClassName::Complete(5) => &[[1, 2, 3], [1, 2, 4], [1, 2, 5], [3, 4, 5]],
        KClassName::K6DoubleMinus => &[[1, 2, 3], [2, 4, 6], [3, 5, 6], [1, 4, 5]],
        KClassName::C6BarK1 => &[[1, 2, 3], [4, 5, 6], [1, 4, 7], [2, 5, 7], [3, 6, 7]],
        KClassName::LK33 => &[
            [1, 2, 3],
            [4, 5, 6],
            [7, 8, 9],
            [1, 4, 7],
            [2, 5, 8],
            [3, 6, 9],
        ],
        _ => &[],
    }
}

/// Canonical position of the target a script collapses onto.
enum CanonTarget {
    Tri([usize; 3]),
    Pair([usize; 2]),
}

type Script = for<'a> fn(&mut Cx<'a>) -> Result<(), SynthError>;

static K3_VARIANTS: &[(CanonTarget, Script)] = &[(CanonTarget::Tri([1, 2, 3]), k3_script)];
static K4_VARIANTS: &[(CanonTarget, Script)] = &[(CanonTarget::Tri([2, 3, 4]), k4_script)];
static K5_VARIANTS: &[(CanonTarget, Script)] = &[
    (CanonTarget::Tri([3, 4, 5]), k5_away_from_pair),
    (CanonTarget::Tri([1, 2, 3]), k5_through_pair),
];
static K6_VARIANTS: &[(CanonTarget, Script)] = &[(CanonTarget::Tri([1, 2, 3]), k6_script)];
static K6_EDGE_VARIANTS: &[(CanonTarget, Script)] =
    &[(CanonTarget::Pair([2, 5]), k6_degree5_edge_script)];
static SPINNER_VARIANTS: &[(CanonTarget, Script)] = &[
    (CanonTarget::Tri([1, 2, 3]), spinner_prism_triangle),
    (CanonTarget::Tri([1, 4, 7]), spinner_spoke_triangle),
];
static LK33_VARIANTS: &[(CanonTarget, Script)] = &[(CanonTarget::Tri([1, 2, 3]), lk33_script)];

fn triangle_variants(name: KClassName) -> &'static [(CanonTarget, Script)] {
    match name {
        KClassName::Complete(3) => K3_VARIANTS,
        KClassName::Complete(4) => K4_VARIANTS,
        KClassName::Complete(5) => K5_VARIANTS,
        KClassName::K6DoubleMinus => K6_VARIANTS,
        KClassName::C6BarK1 => SPINNER_VARIANTS,
        KClassName::LK33 => LK33_VARIANTS,
        _ => &[],
    }
}

/// Does `phi` (canonical label i ↦ `phi[i-1]`) place the canonical family
/// onto the actual maximal family and the canonical target onto `x_actual`?
fn layout_matches(
    phi: &[VertexId],
    s_c: &[[usize; 3]],
    s_max: &BTreeSet<[VertexId; 3]>,
    pat: &CanonTarget,
    x_actual: &BTreeSet<VertexId>,
) -> bool {
    let img = |t: &[usize; 3]| tri_key(&[phi[t[0] - 1], phi[t[1] - 1], phi[t[2] - 1]]);
    if s_c.len() != s_max.len() || !s_c.iter().all(|t| s_max.contains(&img(t))) {
        return false;
    }
    match pat {
        CanonTarget::Tri(t) => img(t).iter().copied().collect::<BTreeSet<_>>() == *x_actual,
        CanonTarget::Pair([a, b]) => {
            [phi[a - 1], phi[b - 1]]
                .into_iter()
                .collect::<BTreeSet<_>>()
                == *x_actual
        }
    }
}

/// Try every admissible labelling with every variant whose canonical target
/// matches; a failing color side-condition moves on to the next labelling,
/// anything else aborts.
#[allow(clippy::too_many_arguments)]
fn run_script_variants(
    hs: &Trigraph,
    rs: &GadgetRoles,
    canon: &Multigraph,
    s_c: &[[usize; 3]],
    s_max: &BTreeSet<[VertexId; 3]>,
    x_actual: &BTreeSet<VertexId>,
    variants: &[(CanonTarget, Script)],
    seq0: &ContractionSequence,
    h1: &Trigraph,
) -> Result<(ContractionSequence, Trigraph), SynthError> {
    let isos = all_isomorphisms(canon, &rs.base);
    let mut last = SynthError::StructureMismatch("no labelling matches the bag layout");
    for (pat, script) in variants {
        for phi in &isos {
            if !layout_matches(phi, s_c, s_max, pat, x_actual) {
                continue;
            }
            let mut cx = Cx {
                cur: h1.clone(),
                seq: seq0.clone(),
                roles: rs,
                host: hs,
                phi: phi.clone(),
            };
            match script(&mut cx) {
                Ok(()) => return Ok((cx.seq, cx.cur)),
                Err(SynthError::ColorPreconditionFailed) => {
                    last = SynthError::ColorPreconditionFailed;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Err(last)
}

/// All isomorphisms from `pat` onto `host` (as sequences indexed by `pat`'s
/// sorted vertex order), by backtracking with degree pruning.  Both graphs
/// are simple and small here.
fn all_isomorphisms(pat: &Multigraph, host: &Multigraph) -> Vec<Vec<VertexId>> {
    let pv: Vec<VertexId> = pat.vertices().collect();
    let hv: Vec<VertexId> = host.vertices().collect();
    let mut out = Vec::new();
    if pv.len() != hv.len() || pat.edge_count() != host.edge_count() {
        return out;
    }
    let mut assign: Vec<VertexId> = Vec::with_capacity(pv.len());
    let mut used = alloc::vec![false; hv.len()];
    extend_iso(pat, host, &pv, &hv, &mut assign, &mut used, &mut out);
    out
}

fn extend_iso(
    pat: &Multigraph,
    host: &Multigraph,
    pv: &[VertexId],
    hv: &[VertexId],
    assign: &mut Vec<VertexId>,
    used: &mut [bool],
    out: &mut Vec<Vec<VertexId>>,
) {
    let k = assign.len();
    if k == pv.len() {
        out.push(assign.clone());
        return;
    }
    for idx in 0..hv.len() {
        let cand = hv[idx];
        if used[idx] || host.degree(cand) != pat.degree(pv[k]) {
            continue;
        }
        if (0..k).all(|j| pat.has_edge(pv[k], pv[j]) == host.has_edge(cand, assign[j])) {
            used[idx] = true;
            assign.push(cand);
            extend_iso(pat, host, pv, hv, assign, used, out);
            assign.pop();
            used[idx] = false;
        }
    }
}

/// Demand that `fin` is exactly the replacement graph of triangle `x`.
fn check_psi_star(fin: &Trigraph, roles: &GadgetRoles, x: &[VertexId; 3]) -> Result<(), SynthError> {
    let (ev, ee) = roles.expected_psi_star(x)?;
    if fin.vertex_set() != &ev || fin.underlying_edges() != ee {
        return Err(SynthError::StructureMismatch(
            "script did not reach the replacement graph",
        ));
    }
    Ok(())
}

/// Demand that `fin` is a 7-cycle through `a` and `b` with a two-vertex arc
/// and a three-vertex arc between them, and read the arc roles off it.
fn check_c7(fin: &Trigraph, a: VertexId, b: VertexId) -> Result<EdgeParts, SynthError> {
    fn bad() -> SynthError {
        SynthError::StructureMismatch("result is not the double-subdivision cycle")
    }
    if fin.vertex_count() != 7 || !fin.is_connected() {
        return Err(bad());
    }
    for v in fin.vertices() {
        if fin.degree(v) != 2 {
            return Err(bad());
        }
    }
    let (a, b) = (a.min(b), a.max(b));
    let mut sides: Vec<Vec<VertexId>> = Vec::new();
    for start in fin.neighbors(a) {
        let mut path = Vec::new();
        let (mut prev, mut cur) = (a, start);
        while cur != b {
            path.push(cur);
            let next = fin
                .neighbors(cur)
                .into_iter()
                .find(|&w| w != prev)
                .ok_or_else(bad)?;
            prev = cur;
            cur = next;
        }
        sides.push(path);
    }
    sides.sort_by_key(Vec::len);
    if sides.len() != 2 || sides[0].len() != 2 || sides[1].len() != 3 {
        return Err(bad());
    }
    Ok(EdgeParts {
        x_ab: Some(sides[0][0]),
        x_ba: Some(sides[0][1]),
        y_ab: Some(sides[1][0]),
        y_mid: Some(sides[1][1]),
        y_ba: Some(sides[1][2]),
    })
}

/// Script execution context: the working trigraph, the sequence so far, the
/// extended role table, the extended host before any contraction (red-count
/// statistics are read off it), and the current canonical labelling.
struct Cx<'a> {
    cur: Trigraph,
    seq: ContractionSequence,
    roles: &'a GadgetRoles,
    host: &'a Trigraph,
    phi: Vec<VertexId>,
}

impl Cx<'_> {
    fn v(&self, i: usize) -> VertexId {
        self.phi[i - 1]
    }

    fn tri(&self, t: [usize; 3]) -> [VertexId; 3] {
        [self.v(t[0]), self.v(t[1]), self.v(t[2])]
    }

    /// Short-path interior between labels `i` and `j`, adjacent to `i`.
    fn w(&self, i: usize, j: usize) -> Result<VertexId, SynthError> {
        self.roles.x(self.v(i), self.v(j))
    }

    fn apex(&self, t: [usize; 3]) -> Result<VertexId, SynthError> {
        self.roles.apex(&self.tri(t))
    }

    /// Gadget path vertex of triangle `t` towards label `j`.
    fn mid(&self, t: [usize; 3], j: usize) -> Result<VertexId, SynthError> {
        self.roles.mid(&self.tri(t), self.v(j))
    }

    fn red(&self, u: VertexId, w: VertexId) -> bool {
        self.cur.edge_color(u, w) == Some(Color::Red)
    }

    fn black(&self, u: VertexId, w: VertexId) -> bool {
        self.cur.edge_color(u, w) == Some(Color::Black)
    }

    fn host_red(&self, u: VertexId, w: VertexId) -> bool {
        self.host.edge_color(u, w) == Some(Color::Red)
    }

    fn swap(&mut self, pairs: &[(usize, usize)]) {
        for &(i, j) in pairs {
            self.phi.swap(i - 1, j - 1);
        }
    }

    /// Contract `{u, tgt}` onto `tgt`.
    fn fold(&mut self, u: VertexId, tgt: VertexId) -> Result<(), SynthError> {
        self.cur = self.cur.contract(u, tgt, tgt)?;
        self.seq.push(u, tgt, tgt);
        Ok(())
    }

    fn apply(&mut self, steps: &[ContractionStep]) -> Result<(), SynthError> {
        for st in steps {
            self.cur = self.cur.contract(st.u, st.v, st.target)?;
            self.seq.push(st.u, st.v, st.target);
        }
        Ok(())
    }

    fn plan1(&self, t: [usize; 3]) -> Result<Protection1Plan, SynthError> {
        protection1(&self.cur, self.roles, self.tri(t))
    }

    /// Compute and fully apply the precondition-free gadget withdrawal.
    fn cor1(&mut self, t: [usize; 3]) -> Result<(), SynthError> {
        let plan = cor_protection1(&self.cur, self.roles, self.tri(t))?;
        self.apply(&plan.steps)
    }

    /// Endgame: fold everything outside the replacement graph of `x`,
    /// treating the short-path interiors inside `x` as absent.
    fn finish_routine(&mut self, x: [usize; 3]) -> Result<(), SynthError> {
        let center = self.apex(x)?;
        let excluded = self.roles.short_interiors(&self.tri(x))?;
        let seq = routine_k33(&self.cur, center, &excluded)?;
        self.apply(&seq.steps)
    }

    /// Red count of the branch vertex `i` towards the gadget of triangle
    /// `t`, read off the untouched extended host: its two short-path
    /// interiors inside `t` plus its gadget path vertex.
    fn host_gadget_red(&self, t: [usize; 3], i: usize) -> Result<usize, SynthError> {
        let others: Vec<usize> = t.iter().copied().filter(|&j| j != i).collect();
        let vi = self.v(i);
        let mut n = 0;
        for &j in &others {
            if self.host_red(vi, self.w(i, j)?) {
                n += 1;
            }
        }
        if self.host_red(vi, self.mid(t, i)?) {
            n += 1;
        }
        Ok(n)
    }
}

/// A triangle bag is its replacement graph as soon as the long-path
/// interiors are gone.
fn k3_script(_cx: &mut Cx) -> Result<(), SynthError> {
    Ok(())
}

/// Collapse a K4 host onto the triangle `{2,3,4}`: withdraw the gadget of
/// `{1,2,4}` around vertex 1, then fold the two remaining spare gadgets and
/// vertex 1 into the kept one.
fn k4_script(cx: &mut Cx) -> Result<(), SynthError> {
    let s1 = [2, 3, 4];
    let s2 = [1, 3, 4];
    let s3 = [1, 2, 4];
    let p = protection2(&cx.cur, cx.roles, [cx.v(3), cx.v(4), cx.v(1)])?;
    cx.apply(&p)?;
    cx.fold(cx.w(1, 2)?, cx.mid(s3, 1)?)?;
    cx.fold(cx.w(2, 1)?, cx.mid(s3, 2)?)?;
    cx.fold(cx.mid(s3, 1)?, cx.apex(s3)?)?;
    cx.fold(cx.mid(s3, 4)?, cx.mid(s2, 4)?)?;
    cx.fold(cx.apex(s2)?, cx.v(1))?;
    cx.fold(cx.apex(s3)?, cx.v(1))?;
    cx.fold(cx.mid(s3, 2)?, cx.mid(s1, 2)?)?;
    cx.fold(cx.mid(s2, 3)?, cx.mid(s1, 3)?)?;
    cx.fold(cx.mid(s2, 4)?, cx.mid(s1, 4)?)?;
    cx.fold(cx.v(1), cx.apex(s1)?)?;
    Ok(())
}

/// Collapse a K5 host onto `{3,4,5}`, the family member avoiding the evenly
/// met pair `{1,2}`.  First relabel within the pair and within the target so
/// that at most one red is charged to vertex 1 towards each of the gadgets
/// on `{1,2,4}` and `{1,2,5}`, and to vertex 2 towards the one on
/// `{1,2,5}`; then dismantle the three pair gadgets and run the endgame.
fn k5_away_from_pair(cx: &mut Cx) -> Result<(), SynthError> {
    let mut placed = None;
    'search: for swap_pair in [false, true] {
        for perm in [
            [3, 4, 5],
            [3, 5, 4],
            [4, 3, 5],
            [4, 5, 3],
            [5, 3, 4],
            [5, 4, 3],
        ] {
            let mut phi = cx.phi.clone();
            if swap_pair {
                phi.swap(0, 1);
            }
            for (slot, &from) in perm.iter().enumerate() {
                phi[2 + slot] = cx.phi[from - 1];
            }
            let q = |i: usize, j: usize| -> Result<usize, SynthError> {
                let (vi, vj) = (phi[i - 1], phi[j - 1]);
                let wij = cx.roles.x(vi, vj)?;
                let yji = cx.roles.mid(&tri_key(&[phi[0], phi[1], vj]), vi)?;
                Ok(usize::from(cx.red(vi, wij)) + usize::from(cx.red(vi, yji)))
            };
            if q(1, 4)? <= 1 && q(1, 5)? <= 1 && q(2, 5)? <= 1 {
                placed = Some(phi);
                break 'search;
            }
        }
    }
    cx.phi = placed.ok_or(SynthError::ColorPreconditionFailed)?;

    let s3 = [1, 2, 3];
    let s4 = [1, 2, 4];
    let s5 = [1, 2, 5];
    cx.fold(cx.w(2, 4)?, cx.mid(s4, 2)?)?;
    cx.cor1(s3)?;
    cx.fold(cx.w(4, 2)?, cx.mid(s4, 4)?)?;
    cx.fold(cx.mid(s4, 2)?, cx.apex(s4)?)?;
    cx.fold(cx.w(1, 4)?, cx.mid(s4, 1)?)?;
    cx.fold(cx.w(4, 1)?, cx.mid(s4, 4)?)?;
    cx.fold(cx.mid(s4, 1)?, cx.apex(s4)?)?;
    for i in [1, 2] {
        cx.fold(cx.w(i, 5)?, cx.mid(s5, i)?)?;
        cx.fold(cx.w(5, i)?, cx.mid(s5, 5)?)?;
        cx.fold(cx.mid(s5, i)?, cx.apex(s5)?)?;
    }
    cx.finish_routine([3, 4, 5])
}

/// Collapse a K5 host onto `{1,2,3}`, a family member through the evenly
/// met pair.
fn k5_through_pair(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(4), cx.w(4, 3)?) || cx.black(cx.v(5), cx.w(5, 3)?)) {
        cx.swap(&[(4, 5)]);
    }
    let plan0 = cx.plan1([4, 5, 3])?;
    cx.apply(plan0.prefix(2))?;
    for i in [4, 5] {
        let p = protection2(&cx.cur, cx.roles, [cx.v(1), cx.v(2), cx.v(i)])?;
        cx.apply(&p)?;
    }
    cx.apply(plan0.rest(2))?;
    cx.finish_routine([1, 2, 3])
}

/// Collapse a matching-deficient K6 host onto `{1,2,3}`, the family member
/// with one vertex of each complementary pair.  Vertex 5's gadget reds pick
/// which of the two side gadgets is dismantled first; the spare branch
/// vertices are then absorbed along the subdivided edge between the two
/// degree-5 vertices.
fn k6_script(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(4), cx.w(4, 2)?) || cx.black(cx.v(6), cx.w(6, 2)?)) {
        cx.swap(&[(1, 3), (4, 6)]);
    }
    let plan2 = cx.plan1([4, 6, 2])?;
    cx.apply(plan2.prefix(2))?;

    let s0 = [1, 2, 3];
    let s1 = [1, 4, 5];
    let s2 = [2, 4, 6];
    let s3 = [3, 5, 6];
    let l1 = if cx.host_gadget_red(s1, 5)? >= cx.host_gadget_red(s3, 5)? {
        1
    } else {
        3
    };
    for l in [l1, 4 - l1] {
        cx.cor1([l + 3, 5, l])?;
    }
    cx.apply(plan2.rest(2))?;

    let (v2, v5) = (cx.v(2), cx.v(5));
    let z1 = cx.roles.y_end(v2, v5)?;
    let z2 = cx.roles.y_mid(v2, v5)?;
    let z3 = cx.roles.y_end(v5, v2)?;
    cx.fold(cx.v(4), cx.apex(s2)?)?;
    cx.fold(cx.v(6), cx.apex(s2)?)?;
    cx.fold(z1, cx.w(2, 5)?)?;
    cx.fold(z3, cx.w(5, 2)?)?;
    cx.fold(z2, cx.w(5, 2)?)?;
    cx.fold(cx.w(5, 2)?, v5)?;
    cx.fold(cx.w(2, 5)?, cx.mid(s2, 2)?)?;
    cx.fold(cx.apex(s2)?, v5)?;
    cx.fold(cx.apex(s1)?, v5)?;
    cx.fold(cx.apex(s3)?, v5)?;
    cx.fold(cx.mid(s1, 1)?, cx.mid(s0, 1)?)?;
    cx.fold(cx.mid(s2, 2)?, cx.mid(s0, 2)?)?;
    cx.fold(cx.mid(s3, 3)?, cx.mid(s0, 3)?)?;
    cx.fold(v5, cx.apex(s0)?)?;
    Ok(())
}

/// Collapse a matching-deficient K6 host onto the subdivided edge between
/// the two degree-5 vertices, the one bag edge no maximal family member
/// covers.
fn k6_degree5_edge_script(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(4), cx.w(4, 2)?) || cx.black(cx.v(6), cx.w(6, 2)?)) {
        cx.swap(&[(1, 3), (4, 6)]);
    }
    let plan2 = cx.plan1([4, 6, 2])?;
    cx.apply(plan2.prefix(2))?;
    let k = if cx.red(cx.v(1), cx.w(1, 2)?) { 1 } else { 3 };
    let plan0 = cx.plan1([k, 4 - k, 2])?;
    cx.apply(plan0.prefix(2))?;
    cx.cor1([1, 4, 5])?;
    cx.cor1([3, 6, 5])?;
    cx.apply(plan2.rest(2))?;
    cx.apply(plan0.rest(2))?;

    let s0 = [1, 2, 3];
    let s1 = [1, 4, 5];
    let s2 = [2, 4, 6];
    let s3 = [3, 5, 6];
    let (v2, v5) = (cx.v(2), cx.v(5));
    let z1 = cx.roles.y_end(v2, v5)?;
    let z2 = cx.roles.y_mid(v2, v5)?;
    let z3 = cx.roles.y_end(v5, v2)?;
    cx.fold(cx.v(1), cx.apex(s0)?)?;
    cx.fold(cx.v(3), cx.apex(s0)?)?;
    cx.fold(cx.v(4), cx.apex(s2)?)?;
    cx.fold(cx.v(6), cx.apex(s2)?)?;
    cx.fold(cx.mid(s2, 2)?, cx.mid(s0, 2)?)?;
    cx.fold(cx.mid(s3, 5)?, cx.mid(s1, 5)?)?;
    cx.fold(cx.apex(s2)?, cx.apex(s0)?)?;
    cx.fold(cx.apex(s3)?, cx.apex(s1)?)?;
    cx.fold(cx.apex(s1)?, cx.apex(s0)?)?;
    cx.fold(cx.mid(s0, 2)?, z1)?;
    cx.fold(cx.mid(s1, 5)?, z3)?;
    cx.fold(cx.apex(s0)?, z2)?;
    Ok(())
}

/// Collapse a spinner host (triangular prism plus dominating apex) onto one
/// of the two prism triangles.  The spoke gadgets are dismantled in
/// decreasing order of the hub's red charge towards them.
fn spinner_prism_triangle(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(5), cx.w(5, 4)?) || cx.black(cx.v(6), cx.w(6, 4)?)) {
        cx.swap(&[(2, 3), (5, 6)]);
    }
    let plan5 = cx.plan1([5, 6, 4])?;
    cx.apply(plan5.prefix(3))?;

    let mut order = [1usize, 2, 3];
    let mut qs = [0usize; 3];
    for l in 1..=3 {
        qs[l - 1] = cx.host_gadget_red([l, l + 3, 7], 7)?;
    }
    order.sort_by_key(|&l| core::cmp::Reverse(qs[l - 1]));
    for l in order {
        cx.cor1([l + 3, 7, l])?;
    }
    cx.apply(plan5.rest(3))?;
    cx.finish_routine([1, 2, 3])
}

/// Collapse a spinner host onto one of the spoke triangles through the hub.
fn spinner_spoke_triangle(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(5), cx.w(5, 4)?) || cx.black(cx.v(6), cx.w(6, 4)?)) {
        cx.swap(&[(2, 3), (5, 6)]);
    }
    let plan5 = cx.plan1([5, 6, 4])?;
    cx.apply(plan5.prefix(3))?;
    let k = if cx.red(cx.v(2), cx.w(2, 1)?) { 2 } else { 3 };
    let plan4 = cx.plan1([k, 5 - k, 1])?;
    cx.apply(plan4.prefix(2))?;
    for i in [2, 3] {
        cx.cor1([i, i + 3, 7])?;
    }
    cx.apply(plan4.rest(2))?;
    cx.apply(plan5.rest(3))?;
    cx.finish_routine([1, 4, 7])
}

/// Collapse a rook's-graph host onto the first row triangle.  Labels are
/// `3·row + column + 1`; rows and columns are the family.
fn lk33_script(cx: &mut Cx) -> Result<(), SynthError> {
    if !(cx.red(cx.v(4), cx.w(4, 6)?) || cx.black(cx.v(5), cx.w(5, 6)?)) {
        cx.swap(&[(1, 2), (4, 5), (7, 8)]);
    }
    let plan5 = cx.plan1([4, 5, 6])?;
    cx.apply(plan5.prefix(3))?;
    let l1 = if cx.red(cx.v(7), cx.w(7, 9)?) { 7 } else { 8 };
    let plan6 = cx.plan1([l1, 15 - l1, 9])?;
    cx.apply(plan6.prefix(3))?;
    for i in 1..=3 {
        cx.cor1([i + 3, i + 6, i])?;
    }
    cx.apply(plan5.rest(3))?;
    cx.apply(plan6.rest(3))?;
    cx.finish_routine([1, 2, 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;
    use crate::synth::ops::gadget_host;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn t3(a: u32, b: u32, c: u32) -> [VertexId; 3] {
        tri_key(&[v(a), v(b), v(c)])
    }

    fn collapse_triangle(
        base: &Multigraph,
        fam: &[[VertexId; 3]],
        x: [VertexId; 3],
    ) -> BaseSynthesis {
        let (h, roles) = gadget_host(base, fam).unwrap();
        base_sequence(&h, &roles, fam, BaseTarget::Triangle(x)).unwrap()
    }

    fn collapse_edge(base: &Multigraph, fam: &[[VertexId; 3]], a: u32, b: u32) -> BaseSynthesis {
        let (h, roles) = gadget_host(base, fam).unwrap();
        base_sequence(&h, &roles, fam, BaseTarget::Edge(v(a), v(b))).unwrap()
    }

    fn assert_edge_cycle(out: &BaseSynthesis, a: u32, b: u32) {
        assert_eq!(out.result.vertex_count(), 7);
        assert!(out.result.has_vertex(v(a)) && out.result.has_vertex(v(b)));
        assert!(out.cycle_parts.is_some());
        for st in &out.seq.steps {
            assert!(st.u != v(a) && st.u != v(b) && st.v != v(a) && st.v != v(b));
        }
    }

    #[test]
    fn k2_edge_target_is_the_identity() {
        let base = complete(2).unwrap();
        let (h, roles) = gadget_host(&base, &[]).unwrap();
        let out = base_sequence(&h, &roles, &[], BaseTarget::Edge(v(0), v(1))).unwrap();
        assert!(out.seq.is_empty());
        assert_edge_cycle(&out, 0, 1);
    }

    #[test]
    fn k3_triangle_target_removes_only_the_long_interiors() {
        let fam = [t3(0, 1, 2)];
        let out = collapse_triangle(&complete(3).unwrap(), &fam, t3(0, 1, 2));
        assert_eq!(out.seq.len(), 9);
        assert_eq!(out.result.vertex_count(), 13);
        assert!(out.cycle_parts.is_none());
    }

    #[test]
    fn k3_edge_target_reaches_the_seven_cycle() {
        let out = collapse_edge(&complete(3).unwrap(), &[], 0, 1);
        assert_edge_cycle(&out, 0, 1);
    }

    #[test]
    fn k4_every_family_triangle_is_reachable() {
        let base = complete(4).unwrap();
        let fam = [t3(1, 2, 3), t3(0, 2, 3), t3(0, 1, 3)];
        for x in fam {
            let out = collapse_triangle(&base, &fam, x);
            assert_eq!(out.result.vertex_count(), 13);
        }
    }

    #[test]
    fn k4_single_triangle_family() {
        let base = complete(4).unwrap();
        let fam = [t3(0, 1, 2)];
        let out = collapse_triangle(&base, &fam, t3(0, 1, 2));
        assert_eq!(out.result.vertex_count(), 13);
    }

    #[test]
    fn k4_with_four_triangles_is_not_addable() {
        let base = complete(4).unwrap();
        let fam = [t3(0, 1, 2), t3(0, 1, 3), t3(0, 2, 3), t3(1, 2, 3)];
        let (h, roles) = gadget_host(&base, &fam).unwrap();
        assert!(matches!(
            base_sequence(&h, &roles, &fam, BaseTarget::Triangle(t3(0, 1, 2))),
            Err(SynthError::NotAddable)
        ));
    }

    #[test]
    fn k4_triangle_outside_the_family_is_rejected() {
        let base = complete(4).unwrap();
        let fam = [t3(1, 2, 3), t3(0, 2, 3), t3(0, 1, 3)];
        let (h, roles) = gadget_host(&base, &fam).unwrap();
        assert!(matches!(
            base_sequence(&h, &roles, &fam, BaseTarget::Triangle(t3(0, 1, 2))),
            Err(SynthError::BadX)
        ));
    }

    #[test]
    fn k4_edge_target_reaches_the_seven_cycle() {
        let base = complete(4).unwrap();
        let fam = [t3(1, 2, 3), t3(0, 2, 3), t3(0, 1, 3)];
        let out = collapse_edge(&base, &fam, 0, 1);
        assert_edge_cycle(&out, 0, 1);
    }

    fn k5_family() -> [[VertexId; 3]; 4] {
        [t3(0, 1, 2), t3(0, 1, 3), t3(0, 1, 4), t3(2, 3, 4)]
    }

    #[test]
    fn k5_triangle_avoiding_the_pair_ends_in_the_routine() {
        let out = collapse_triangle(&complete(5).unwrap(), &k5_family(), t3(2, 3, 4));
        assert_eq!(out.result.vertex_count(), 13);
    }

    #[test]
    fn k5_triangle_through_the_pair() {
        let out = collapse_triangle(&complete(5).unwrap(), &k5_family(), t3(0, 1, 2));
        assert_eq!(out.result.vertex_count(), 13);
    }

    #[test]
    fn k5_edge_inside_a_family_triangle() {
        let out = collapse_edge(&complete(5).unwrap(), &k5_family(), 2, 3);
        assert_edge_cycle(&out, 2, 3);
    }

    #[test]
    fn k5_with_red_decorations() {
        let base = complete(5).unwrap();
        let fam = k5_family();
        let (mut h, roles) = gadget_host(&base, &fam).unwrap();
        // a few red decorations of the kind a neighbouring collapse leaves
        let reds = [
            (v(3), roles.x(v(3), v(4)).unwrap()),
            (v(4), roles.x(v(4), v(3)).unwrap()),
            (v(0), roles.x(v(0), v(1)).unwrap()),
            (v(2), roles.y_end(v(2), v(0)).unwrap()),
        ];
        for (a, b) in reds {
            h.remove_edge(a, b);
            h.add_edge(a, b, Color::Red).unwrap();
        }
        for x in [t3(2, 3, 4), t3(0, 1, 2)] {
            let out = base_sequence(&h, &roles, &fam, BaseTarget::Triangle(x)).unwrap();
            assert_eq!(out.result.vertex_count(), 13);
        }
    }

    fn k6_minus_graph(triple: bool) -> Multigraph {
        let name = if triple {
            KClassName::K6TripleMinus
        } else {
            KClassName::K6DoubleMinus
        };
        k_class_member(name).unwrap().graph
    }

    fn k6_family() -> [[VertexId; 3]; 4] {
        [t3(0, 1, 2), t3(1, 3, 5), t3(2, 4, 5), t3(0, 3, 4)]
    }

    #[test]
    fn k6_double_minus_triangle_targets() {
        let base = k6_minus_graph(false);
        for x in [t3(0, 1, 2), t3(1, 3, 5)] {
            let out = collapse_triangle(&base, &k6_family(), x);
            assert_eq!(out.result.vertex_count(), 13);
        }
    }

    #[test]
    fn k6_triple_minus_triangle_target() {
        let base = k6_minus_graph(true);
        let out = collapse_triangle(&base, &k6_family(), t3(0, 1, 2));
        assert_eq!(out.result.vertex_count(), 13);
    }

    #[test]
    fn k6_double_minus_edge_between_the_degree_five_vertices() {
        // the one bag edge outside every maximal family member
        let base = k6_minus_graph(false);
        let out = collapse_edge(&base, &k6_family(), 1, 4);
        assert_edge_cycle(&out, 1, 4);
    }

    #[test]
    fn k6_double_minus_edge_with_empty_family() {
        let base = k6_minus_graph(false);
        let out = collapse_edge(&base, &[], 1, 4);
        assert_edge_cycle(&out, 1, 4);
    }

    #[test]
    fn k6_double_minus_covered_edge() {
        let base = k6_minus_graph(false);
        let out = collapse_edge(&base, &k6_family(), 0, 1);
        assert_edge_cycle(&out, 0, 1);
    }

    fn spinner_family() -> [[VertexId; 3]; 5] {
        [
            t3(0, 1, 2),
            t3(3, 4, 5),
            t3(0, 3, 6),
            t3(1, 4, 6),
            t3(2, 5, 6),
        ]
    }

    #[test]
    fn spinner_prism_and_spoke_triangles() {
        let base = k_class_member(KClassName::C6BarK1).unwrap().graph;
        for x in [t3(0, 1, 2), t3(0, 3, 6)] {
            let out = collapse_triangle(&base, &spinner_family(), x);
            assert_eq!(out.result.vertex_count(), 13);
        }
    }

    #[test]
    fn spinner_partial_family() {
        let base = k_class_member(KClassName::C6BarK1).unwrap().graph;
        let fam = [t3(0, 1, 2)];
        let out = collapse_triangle(&base, &fam, t3(0, 1, 2));
        assert_eq!(out.result.vertex_count(), 13);
    }

    #[test]
    fn rook_graph_row_and_column_triangles() {
        let base = k_class_member(KClassName::LK33).unwrap().graph;
        let fam = [
            t3(0, 1, 2),
            t3(3, 4, 5),
            t3(6, 7, 8),
            t3(0, 3, 6),
            t3(1, 4, 7),
            t3(2, 5, 8),
        ];
        for x in [t3(0, 1, 2), t3(0, 3, 6)] {
            let out = collapse_triangle(&base, &fam, x);
            assert_eq!(out.result.vertex_count(), 13);
        }
    }

    #[test]
    fn target_vertices_are_never_touched_and_stay_stable() {
        let out = collapse_triangle(&complete(5).unwrap(), &k5_family(), t3(2, 3, 4));
        for st in &out.seq.steps {
            for w in [st.u, st.v] {
                assert!(w != v(2) && w != v(3) && w != v(4));
            }
        }
    }
}
