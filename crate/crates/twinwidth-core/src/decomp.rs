//! Tree decompositions with small clique adhesions.
//!
//! The central object is a *3-contractible* tree decomposition: every
//! adhesion is a minimal separator that forms a clique of at most three
//! vertices, every bag induces (up to simplification) one of the nine
//! graphs in the base catalogue `K`, and the size-3 adhesions at each bag
//! form an addable family.  Graphs admitting such a decomposition are
//! exactly the spanning subgraphs of obstruction-free graphs, and the
//! synthesizer walks the decomposition leaf by leaf.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{k_class_member, y_graph, GraphError, KClassName, Multigraph};
use crate::iso::are_isomorphic;
use crate::graph::F3Name;
use crate::minor::{is_f3_minor_free, MinorError};
use crate::trigraph::VertexId;

/// A tree decomposition: a tree whose nodes carry vertex bags.
///
/// Tree nodes are `VertexId`s of `tree`; `bags` maps each node to its bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Multigraph,
    pub bags: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl TreeDecomposition {
    /// The decomposition with a single bag containing every vertex of `g`.
    pub fn single_bag(g: &Multigraph) -> Self {
        let mut tree = Multigraph::new();
        tree.add_vertex(VertexId(0));
        let mut bags = BTreeMap::new();
        bags.insert(VertexId(0), g.vertex_set().clone());
        TreeDecomposition { tree, bags }
    }

    /// Tree edges as ordered node pairs (smaller id first), deduplicated.
    pub fn tree_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<(VertexId, VertexId)> = self
            .tree
            .edges()
            .map(|(_, (a, b))| if a <= b { (a, b) } else { (b, a) })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// The adhesion of a tree edge: the intersection of the two bags.
    pub fn adhesion(&self, a: VertexId, b: VertexId) -> BTreeSet<VertexId> {
        match (self.bags.get(&a), self.bags.get(&b)) {
            (Some(x), Some(y)) => x.intersection(y).copied().collect(),
            _ => BTreeSet::new(),
        }
    }
}

/// Which tree-decomposition axiom failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    /// The node graph is not a tree, or bags are missing for some nodes.
    MalformedTree,
    /// A bag mentions a vertex that the graph does not have.
    ForeignVertex(VertexId),
    /// A graph vertex is in no bag.
    UncoveredVertex(VertexId),
    /// An edge has no bag containing both endpoints.
    UncoveredEdge(VertexId, VertexId),
    /// The set of nodes whose bags contain this vertex is not connected.
    BrokenTrace(VertexId),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::MalformedTree => write!(f, "node graph is not a tree with matching bags"),
            TdViolation::ForeignVertex(v) => write!(f, "bag contains unknown vertex {}", v.0),
            TdViolation::UncoveredVertex(v) => write!(f, "vertex {} is in no bag", v.0),
            TdViolation::UncoveredEdge(u, v) => {
                write!(f, "edge {}-{} is inside no bag", u.0, v.0)
            }
            TdViolation::BrokenTrace(v) => {
                write!(f, "bags containing vertex {} do not induce a subtree", v.0)
            }
        }
    }
}

/// Checks the three tree-decomposition axioms one by one.
pub fn verify_td(g: &Multigraph, td: &TreeDecomposition) -> Result<(), TdViolation> {
    let t = &td.tree;
    let n = t.vertex_count();
    if n == 0
        || !t.is_simple()
        || t.has_loop()
        || t.edge_count() != n - 1
        || !t.is_connected()
        || td.bags.keys().copied().collect::<BTreeSet<_>>() != *t.vertex_set()
    {
        return Err(TdViolation::MalformedTree);
    }
    for bag in td.bags.values() {
        if let Some(&v) = bag.iter().find(|v| !g.vertex_set().contains(v)) {
            return Err(TdViolation::ForeignVertex(v));
        }
    }
    // Vertex coverage.
    let covered: BTreeSet<VertexId> = td.bags.values().flatten().copied().collect();
    if let Some(&v) = g.vertex_set().iter().find(|v| !covered.contains(v)) {
        return Err(TdViolation::UncoveredVertex(v));
    }
    // Edge coverage.
    for (_, (u, v)) in g.edges() {
        if !td.bags.values().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(TdViolation::UncoveredEdge(u, v));
        }
    }
    // Connected traces.
    for &v in g.vertex_set() {
        let nodes: BTreeSet<VertexId> = td
            .bags
            .iter()
            .filter(|(_, b)| b.contains(&v))
            .map(|(&t, _)| t)
            .collect();
        if !t.induced(&nodes).is_connected() {
            return Err(TdViolation::BrokenTrace(v));
        }
    }
    Ok(())
}

/// A bag identified as a member of the base catalogue, together with the
/// isomorphism from the canonical labelling onto the bag's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagClass {
    pub name: KClassName,
    /// Canonical vertex of `k_class_member(name)` to bag vertex.
    pub map: BTreeMap<VertexId, VertexId>,
}

/// Matches the simplification of `g` against the nine catalogue graphs.
pub fn classify_bag(g: &Multigraph) -> Option<BagClass> {
    let s = g.simplification();
    for name in KClassName::ALL {
        let canon = k_class_member(name).expect("catalogue graphs are constructible");
        if canon.graph.vertex_count() != s.vertex_count()
            || canon.graph.edge_count() != s.edge_count()
        {
            continue;
        }
        if let Some(map) = are_isomorphic(&canon.graph, &s) {
            return Some(BagClass { name, map });
        }
    }
    None
}

/// A tree decomposition annotated with the data that makes it 3-contractible:
/// the class of every bag and the clique adhesions of every tree edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractibleTd {
    pub td: TreeDecomposition,
    pub bag_class: BTreeMap<VertexId, BagClass>,
    pub adhesions: BTreeMap<(VertexId, VertexId), BTreeSet<VertexId>>,
}

/// Which 3-contractibility condition failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtdViolation {
    Td(TdViolation),
    /// A recorded adhesion disagrees with the bag intersection, or a tree
    /// edge has no recorded adhesion.
    AdhesionMismatch(VertexId, VertexId),
    /// An adhesion has more than three vertices.
    AdhesionTooLarge(VertexId, VertexId),
    /// An adhesion is not a clique of the graph.
    AdhesionNotClique(VertexId, VertexId),
    /// An adhesion does not separate the graph.
    AdhesionNotSeparator(VertexId, VertexId),
    /// A proper subset of the adhesion already separates the graph.
    AdhesionNotMinimal(VertexId, VertexId),
    /// The recorded class of a bag is missing or wrong.
    BagNotInCatalogue(VertexId),
    /// The size-3 adhesions at a bag are not addable to it.
    FamilyNotAddable(VertexId),
}

impl fmt::Display for CtdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CtdViolation::Td(v) => write!(f, "{v}"),
            CtdViolation::AdhesionMismatch(a, b) => {
                write!(f, "adhesion of tree edge {}-{} is inconsistent", a.0, b.0)
            }
            CtdViolation::AdhesionTooLarge(a, b) => {
                write!(f, "adhesion of tree edge {}-{} has more than 3 vertices", a.0, b.0)
            }
            CtdViolation::AdhesionNotClique(a, b) => {
                write!(f, "adhesion of tree edge {}-{} is not a clique", a.0, b.0)
            }
            CtdViolation::AdhesionNotSeparator(a, b) => {
                write!(f, "adhesion of tree edge {}-{} does not separate", a.0, b.0)
            }
            CtdViolation::AdhesionNotMinimal(a, b) => {
                write!(f, "adhesion of tree edge {}-{} is not a minimal separator", a.0, b.0)
            }
            CtdViolation::BagNotInCatalogue(t) => {
                write!(f, "bag {} is not classified by a catalogue graph", t.0)
            }
            CtdViolation::FamilyNotAddable(t) => {
                write!(f, "size-3 adhesion family at bag {} is not addable", t.0)
            }
        }
    }
}

fn component_within(
    g: &Multigraph,
    scope: &BTreeSet<VertexId>,
    start: VertexId,
) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    seen.insert(start);
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if scope.contains(&w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen
}

fn components_within(g: &Multigraph, scope: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
    let mut rest = scope.clone();
    let mut out = Vec::new();
    while let Some(&start) = rest.iter().next() {
        let comp = component_within(g, &rest, start);
        for v in &comp {
            rest.remove(v);
        }
        out.push(comp);
    }
    out
}

/// Does removing `s` disconnect `g[scope]`?
fn separates(g: &Multigraph, scope: &BTreeSet<VertexId>, s: &BTreeSet<VertexId>) -> bool {
    let remaining: BTreeSet<VertexId> = scope.difference(s).copied().collect();
    components_within(g, &remaining).len() > 1
}

/// Is `s` an inclusion-minimal separator of connected `g`: it separates, and
/// no proper subset does?
pub fn is_minimal_separator(g: &Multigraph, s: &BTreeSet<VertexId>) -> bool {
    let scope = g.vertex_set();
    if !separates(g, scope, s) {
        return false;
    }
    proper_subsets(s).iter().all(|sub| !separates(g, scope, sub))
}

fn proper_subsets(s: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
    let items: Vec<VertexId> = s.iter().copied().collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << items.len()) - 1 {
        out.push(
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    out
}

/// The addability oracle: restrict the family to cliques inside `x`, attach a
/// degree-3 apex for each, and test the result for forbidden minors.
pub fn is_addable_generic(
    g: &Multigraph,
    x: &BTreeSet<VertexId>,
    family: &BTreeSet<BTreeSet<VertexId>>,
    budget: u64,
) -> Result<bool, MinorError> {
    let inside: Vec<BTreeSet<VertexId>> = family
        .iter()
        .filter(|a| a.is_subset(x))
        .cloned()
        .collect();
    let y = y_graph(&g.induced(x), &inside)?;
    Ok(is_f3_minor_free(&y, budget)?.is_none())
}

/// Fast addability criteria, one per catalogue class.
///
/// `bag` is the bag's induced graph and `class` its catalogue class; the
/// family must consist of triangles of `bag`.  Each criterion is an
/// isomorphism-invariant statement, so no canonical labelling is needed:
///
/// * complete graphs up to `K3` — always addable;
/// * `K4` — at most three triangles;
/// * `K5` — some vertex pair meets every family member evenly;
/// * `K6` minus a 2- or 3-matching — the vertex set splits into two
///   triangles such that every member meets one side evenly, and no member
///   contains two degree-5 vertices;
/// * the triangular prism plus a dominating apex — every member meets every
///   induced 4-cycle evenly;
/// * the 3x3 rook's graph — always addable.
pub fn is_addable(
    bag: &Multigraph,
    class: KClassName,
    family: &BTreeSet<BTreeSet<VertexId>>,
) -> Result<bool, GraphError> {
    for q in family {
        if q.len() != 3 || !bag.is_clique(q) {
            return Err(GraphError::NotAClique);
        }
    }
    let s = bag.simplification();
    let verts: Vec<VertexId> = s.vertex_set().iter().copied().collect();
    let even_against = |b: &BTreeSet<VertexId>| {
        family
            .iter()
            .all(|q| q.intersection(b).count() % 2 == 0)
    };
    let ok = match class {
        KClassName::Complete(n) if n <= 3 => true,
        KClassName::Complete(4) => family.len() <= 3,
        KClassName::Complete(_) => {
            // K5: a two-vertex set met evenly by every member.
            pairs(&verts).iter().any(|(a, b)| {
                let pair: BTreeSet<VertexId> = [*a, *b].into_iter().collect();
                even_against(&pair)
            })
        }
        KClassName::K6TripleMinus | KClassName::K6DoubleMinus => {
            let deg5: BTreeSet<VertexId> =
                verts.iter().copied().filter(|&v| s.degree(v) == 5).collect();
            family.iter().all(|q| q.intersection(&deg5).count() <= 1)
                && triples(&verts).iter().any(|b| {
                    let rest: BTreeSet<VertexId> =
                        s.vertex_set().difference(b).copied().collect();
                    s.is_clique(b) && s.is_clique(&rest) && even_against(b)
                })
        }
        KClassName::C6BarK1 => quadruples(&verts)
            .iter()
            .filter(|b| induces_four_cycle(&s, b))
            .all(|b| even_against(b)),
        KClassName::LK33 => true,
    };
    Ok(ok)
}

fn pairs(verts: &[VertexId]) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for (i, &a) in verts.iter().enumerate() {
        for &b in &verts[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

fn triples(verts: &[VertexId]) -> Vec<BTreeSet<VertexId>> {
    let mut out = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            for k in j + 1..verts.len() {
                out.push([verts[i], verts[j], verts[k]].into_iter().collect());
            }
        }
    }
    out
}

fn quadruples(verts: &[VertexId]) -> Vec<BTreeSet<VertexId>> {
    let mut out = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            for k in j + 1..verts.len() {
                for l in k + 1..verts.len() {
                    out.push([verts[i], verts[j], verts[k], verts[l]].into_iter().collect());
                }
            }
        }
    }
    out
}

fn induces_four_cycle(g: &Multigraph, b: &BTreeSet<VertexId>) -> bool {
    let sub = g.induced(b);
    sub.edge_count() == 4 && b.iter().all(|&v| sub.degree(v) == 2)
}

/// Checks the two 3-contractibility conditions on top of the tree-decomposition
/// axioms.  The outer error reports an exhausted minor-search budget; the
/// inner result carries the verdict.
pub fn verify_3_contractible(
    g: &Multigraph,
    ctd: &ContractibleTd,
    budget: u64,
) -> Result<Result<(), CtdViolation>, MinorError> {
    if let Err(v) = verify_td(g, &ctd.td) {
        return Ok(Err(CtdViolation::Td(v)));
    }
    let edges = ctd.td.tree_edges();
    if ctd.adhesions.len() != edges.len() {
        if let Some(&(a, b)) = ctd
            .adhesions
            .keys()
            .find(|e| !edges.contains(e))
            .or_else(|| edges.iter().find(|e| !ctd.adhesions.contains_key(e)))
        {
            return Ok(Err(CtdViolation::AdhesionMismatch(a, b)));
        }
    }
    for &(a, b) in &edges {
        let s = ctd.td.adhesion(a, b);
        if ctd.adhesions.get(&(a, b)) != Some(&s) {
            return Ok(Err(CtdViolation::AdhesionMismatch(a, b)));
        }
        if s.len() > 3 {
            return Ok(Err(CtdViolation::AdhesionTooLarge(a, b)));
        }
        if !g.is_clique(&s) {
            return Ok(Err(CtdViolation::AdhesionNotClique(a, b)));
        }
        if !separates(g, g.vertex_set(), &s) {
            return Ok(Err(CtdViolation::AdhesionNotSeparator(a, b)));
        }
        if !is_minimal_separator(g, &s) {
            return Ok(Err(CtdViolation::AdhesionNotMinimal(a, b)));
        }
    }
    for (&t, bag) in &ctd.td.bags {
        let induced = g.induced(bag);
        match ctd.bag_class.get(&t) {
            None => return Ok(Err(CtdViolation::BagNotInCatalogue(t))),
            Some(class) => {
                let canon = k_class_member(class.name).expect("catalogue graph");
                if !embeds_exactly(&canon.graph, &induced.simplification(), &class.map) {
                    return Ok(Err(CtdViolation::BagNotInCatalogue(t)));
                }
            }
        }
        let family: BTreeSet<BTreeSet<VertexId>> = ctd
            .td
            .tree
            .neighbors(t)
            .into_iter()
            .map(|u| ctd.td.adhesion(t, u))
            .filter(|s| s.len() == 3)
            .collect();
        if !is_addable_generic(g, bag, &family, budget)? {
            return Ok(Err(CtdViolation::FamilyNotAddable(t)));
        }
    }
    Ok(Ok(()))
}

/// Does `map` describe an isomorphism from `canon` onto `target`?
fn embeds_exactly(
    canon: &Multigraph,
    target: &Multigraph,
    map: &BTreeMap<VertexId, VertexId>,
) -> bool {
    if map.len() != canon.vertex_count()
        || canon.vertex_count() != target.vertex_count()
        || canon.edge_count() != target.edge_count()
    {
        return false;
    }
    let image: BTreeSet<VertexId> = map.values().copied().collect();
    if image != *target.vertex_set() {
        return false;
    }
    canon.edges().all(|(_, (a, b))| {
        match (map.get(&a), map.get(&b)) {
            (Some(&x), Some(&y)) => !target.edges_between(x, y).is_empty(),
            _ => false,
        }
    })
}

/// Why a 3-contractible decomposition could not be built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// The input graph has a forbidden minor.
    NotMinorFree(F3Name),
    /// The input graph has no vertices.
    EmptyGraph,
    /// A finished bag matched no catalogue graph; this indicates an internal
    /// invariant violation.
    UnclassifiableBag(BTreeSet<VertexId>),
    Minor(MinorError),
}

impl From<MinorError> for BuildError {
    fn from(e: MinorError) -> Self {
        BuildError::Minor(e)
    }
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::NotMinorFree(n) => {
                write!(f, "input graph has a {} minor", n.as_str())
            }
            BuildError::EmptyGraph => write!(f, "input graph has no vertices"),
            BuildError::UnclassifiableBag(b) => {
                write!(f, "bag of {} vertices matches no catalogue graph", b.len())
            }
            BuildError::Minor(e) => write!(f, "{e}"),
        }
    }
}

/// A partial decomposition: bags with tree edges given by indices.
struct Piece {
    bags: Vec<BTreeSet<VertexId>>,
    links: Vec<(usize, usize)>,
}

impl Piece {
    /// Appends `other`, returning the index offset of its bags.
    fn absorb(&mut self, other: Piece) -> usize {
        let off = self.bags.len();
        self.bags.extend(other.bags);
        self.links
            .extend(other.links.into_iter().map(|(a, b)| (a + off, b + off)));
        off
    }
}

/// Completes `s` to a clique in `g`, then re-checks that no forbidden minor
/// appeared inside `scope`.  Safe for minimal separators; the check guards
/// the invariant.
fn first_containing(bags: &[BTreeSet<VertexId>], s: &BTreeSet<VertexId>) -> usize {
    bags.iter()
        .position(|b| s.is_subset(b))
        .expect("edge coverage guarantees a bag containing the adhesion")
}

fn complete_clique(
    g: &mut Multigraph,
    scope: &BTreeSet<VertexId>,
    s: &BTreeSet<VertexId>,
    budget: u64,
) -> Result<(), BuildError> {
    let mut added = false;
    let items: Vec<VertexId> = s.iter().copied().collect();
    for (i, &a) in items.iter().enumerate() {
        for &b in &items[i + 1..] {
            if g.edges_between(a, b).is_empty() {
                g.add_edge(a, b);
                added = true;
            }
        }
    }
    if added {
        if let Some((name, _)) = is_f3_minor_free(&g.induced(scope), budget)? {
            return Err(BuildError::NotMinorFree(name));
        }
    }
    Ok(())
}

/// The smallest separator of `g[scope]` with at most three vertices, if any:
/// smallest cardinality first, then lexicographic.  A smallest-cardinality
/// separator is automatically inclusion-minimal.
fn small_separator(g: &Multigraph, scope: &BTreeSet<VertexId>) -> Option<BTreeSet<VertexId>> {
    let verts: Vec<VertexId> = scope.iter().copied().collect();
    for k in 1..=3usize.min(verts.len().saturating_sub(2)) {
        let mut found = None;
        let mut visit = |s: BTreeSet<VertexId>| {
            if found.is_none() && separates(g, scope, &s) {
                found = Some(s);
            }
        };
        match k {
            1 => {
                for &a in &verts {
                    visit([a].into_iter().collect());
                }
            }
            2 => {
                for (a, b) in pairs(&verts) {
                    visit([a, b].into_iter().collect());
                }
            }
            _ => {
                for t in triples(&verts) {
                    visit(t);
                }
            }
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// The component of `g[scope] - s` chosen for a split: smallest by size,
/// ties by smallest contained vertex id.
fn chosen_component(
    g: &Multigraph,
    scope: &BTreeSet<VertexId>,
    s: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let remaining: BTreeSet<VertexId> = scope.difference(s).copied().collect();
    components_within(g, &remaining)
        .into_iter()
        .min_by_key(|c| (c.len(), c.iter().next().copied()))
        .expect("separator leaves at least one component")
}

fn decompose(
    g: &mut Multigraph,
    scope: BTreeSet<VertexId>,
    budget: u64,
) -> Result<Piece, BuildError> {
    // Disconnected scope: decompose one component and the rest, then join
    // them with a fresh edge covered by a two-vertex bag.
    let comps = components_within(g, &scope);
    if comps.len() > 1 {
        let c1 = comps.into_iter().next().expect("nonempty scope");
        let rest: BTreeSet<VertexId> = scope.difference(&c1).copied().collect();
        let mut piece = decompose(g, c1.clone(), budget)?;
        let other = decompose(g, rest.clone(), budget)?;
        let off = piece.absorb(other);
        let v1 = *c1.iter().next().expect("component is nonempty");
        let v2 = *rest.iter().next().expect("remainder is nonempty");
        g.add_edge(v1, v2);
        let joint: BTreeSet<VertexId> = [v1, v2].into_iter().collect();
        let a = first_containing(&piece.bags[..off], &[v1].into_iter().collect());
        let b = off + first_containing(&piece.bags[off..], &[v2].into_iter().collect());
        let joint_idx = piece.bags.len();
        piece.bags.push(joint);
        piece.links.push((joint_idx, a));
        piece.links.push((joint_idx, b));
        return Ok(piece);
    }

    // Cut vertices and 2-separators: split the scope along the separator,
    // completing a 2-separator into an edge first.
    if let Some(s) = small_separator(g, &scope) {
        if s.len() <= 2 {
            if s.len() == 2 {
                complete_clique(g, &scope, &s, budget)?;
            }
            let c = chosen_component(g, &scope, &s);
            let near: BTreeSet<VertexId> = c.union(&s).copied().collect();
            let far: BTreeSet<VertexId> = scope.difference(&c).copied().collect();
            let mut piece = decompose(g, near, budget)?;
            let other = decompose(g, far, budget)?;
            let off = piece.absorb(other);
            let a = first_containing(&piece.bags[..off], &s);
            let b = off + first_containing(&piece.bags[off..], &s);
            piece.links.push((a, b));
            return Ok(piece);
        }
    }

    // No separator of size at most 2 remains.  Complete every 3-vertex
    // separator of the scope graph into a clique, in lexicographic order.
    let verts: Vec<VertexId> = scope.iter().copied().collect();
    for s in triples(&verts) {
        if !g.is_clique(&s) && separates(g, &scope, &s) {
            complete_clique(g, &scope, &s, budget)?;
        }
    }

    // Split bags along minimal small separators until none remain.
    let mut bags: Vec<BTreeSet<VertexId>> = vec![scope];
    let mut links: Vec<(usize, usize)> = Vec::new();
    loop {
        let Some((x, s)) = bags
            .iter()
            .enumerate()
            .find_map(|(i, b)| small_separator(g, b).map(|s| (i, s)))
        else {
            break;
        };
        // The separator is also a separator of the whole graph, hence was
        // completed above; completing again is a no-op safety net.
        complete_clique(g, &bags[x], &s, budget)?;
        let c = chosen_component(g, &bags[x], &s);
        let near: BTreeSet<VertexId> = c.union(&s).copied().collect();
        let far: BTreeSet<VertexId> = bags[x].difference(&c).copied().collect();
        let fresh = bags.len();
        bags.push(far);
        // Reattach neighbours of x: keep those meeting the near side on x,
        // move the rest to the new node.
        let near_ref = near.clone();
        for (a, b) in links.iter_mut() {
            let (node, other) = if *a == x {
                (a, *b)
            } else if *b == x {
                (b, *a)
            } else {
                continue;
            };
            // The shared vertices of an adjacent bag lie entirely on one side
            // of the separator (otherwise the shared set, being a clique,
            // would carry an edge across it).  Keep the neighbour on x unless
            // it shares a vertex with the outside of the near part.
            let shares_far = bags[other]
                .intersection(&bags[x])
                .any(|v| !near_ref.contains(v));
            debug_assert!(
                !(shares_far
                    && bags[other]
                        .intersection(&bags[x])
                        .any(|v| near_ref.contains(v) && !s.contains(v))),
                "adjacent bag straddles the separator"
            );
            if shares_far {
                *node = fresh;
            }
        }
        bags[x] = near;
        links.push((x, fresh));
    }
    Ok(Piece { bags, links })
}

/// Removes bags that are subsets of an adjacent bag, contracting the tree
/// edge between them.
fn prune(piece: &mut Piece) {
    loop {
        let Some((pos, keep)) = piece.links.iter().find_map(|&(a, b)| {
            if piece.bags[a].is_subset(&piece.bags[b]) {
                Some((a, b))
            } else if piece.bags[b].is_subset(&piece.bags[a]) {
                Some((b, a))
            } else {
                None
            }
        }) else {
            break;
        };
        let mut links: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &piece.links {
            let a = if a == pos { keep } else { a };
            let b = if b == pos { keep } else { b };
            if a != b {
                links.push((a, b));
            }
        }
        piece.bags.remove(pos);
        let shift = |i: usize| if i > pos { i - 1 } else { i };
        piece.links = links
            .into_iter()
            .map(|(a, b)| (shift(a), shift(b)))
            .collect();
        piece.links.sort();
        piece.links.dedup();
    }
}

/// Builds a 3-contractible tree decomposition of a supergraph of `g`.
///
/// The construction only ever adds edges: separators of size at most three
/// are completed into cliques, and fresh bridging edges connect separate
/// components.  The returned graph contains `g` as a spanning subgraph and
/// is still free of forbidden minors.
pub fn build_3_contractible(
    g: &Multigraph,
    budget: u64,
) -> Result<(Multigraph, ContractibleTd), BuildError> {
    if g.vertex_count() == 0 {
        return Err(BuildError::EmptyGraph);
    }
    if let Some((name, _)) = is_f3_minor_free(g, budget)? {
        return Err(BuildError::NotMinorFree(name));
    }
    let mut gp = g.clone();
    let scope = gp.vertex_set().clone();
    let mut piece = decompose(&mut gp, scope, budget)?;
    prune(&mut piece);

    // Small bags with no remaining separator are cliques in the completed
    // graph only if the construction made them so; bags of at most five
    // vertices without separators can still miss edges (for example a path
    // on two bags).  They are classified as-is; the catalogue covers them.
    let mut tree = Multigraph::new();
    let mut bags = BTreeMap::new();
    let mut bag_class = BTreeMap::new();
    for (i, bag) in piece.bags.iter().enumerate() {
        let node = VertexId(i as u32);
        tree.add_vertex(node);
        bags.insert(node, bag.clone());
        match classify_bag(&gp.induced(bag)) {
            Some(class) => {
                bag_class.insert(node, class);
            }
            None => return Err(BuildError::UnclassifiableBag(bag.clone())),
        }
    }
    for &(a, b) in &piece.links {
        tree.add_edge(VertexId(a as u32), VertexId(b as u32));
    }
    let td = TreeDecomposition { tree, bags };
    let adhesions = td
        .tree_edges()
        .into_iter()
        .map(|(a, b)| ((a, b), td.adhesion(a, b)))
        .collect();
    Ok((
        gp,
        ContractibleTd {
            td,
            bag_class,
            adhesions,
        },
    ))
}

/// The largest edge count of an `n`-vertex graph whose 1-subdivision has
/// twin-width at most 3: `(7n - 15) / 2`, rounded down.
pub fn edge_bound(n: usize) -> Result<usize, GraphError> {
    if n < 3 {
        return Err(GraphError::BadParameter);
    }
    Ok((7 * n - 15) / 2)
}

/// A decomposition is *tight* when it consists of a single size-3 bag, or
/// when every adhesion has exactly three vertices, at most one bag induces
/// `K4` or `K6` minus a 2-matching, and every other bag has exactly five
/// vertices.  Tight decompositions are exactly those of graphs meeting
/// [`edge_bound`] with equality.
pub fn is_tight(ctd: &ContractibleTd) -> bool {
    let bags = &ctd.td.bags;
    if bags.len() == 1 && bags.values().next().map(BTreeSet::len) == Some(3) {
        return true;
    }
    let edges = ctd.td.tree_edges();
    if edges.iter().any(|&(a, b)| ctd.td.adhesion(a, b).len() != 3) {
        return false;
    }
    let special: Vec<VertexId> = ctd
        .bag_class
        .iter()
        .filter(|(_, c)| matches!(c.name, KClassName::Complete(4) | KClassName::K6DoubleMinus))
        .map(|(&t, _)| t)
        .collect();
    special.len() <= 1
        && bags
            .iter()
            .filter(|(t, _)| !special.contains(t))
            .all(|(_, b)| b.len() == 5)
}
