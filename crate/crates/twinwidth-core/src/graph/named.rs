//! Named graph families with fixed labelings.
//!
//! The obstruction family F3, the bag family K, grids, walls, their line
//! graphs, and the extremal family.  Labelings match the reference figures so
//! that synthesized contraction lists can address vertices by name.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{complete, line_graph, GraphError, Multigraph};
use crate::trigraph::VertexId;

/// A multigraph together with a name and a label → vertex map.
#[derive(Clone, Debug)]
pub struct Labeled {
    pub graph: Multigraph,
    pub name: String,
    pub labels: BTreeMap<String, VertexId>,
}

impl Labeled {
    pub fn vertex(&self, label: &str) -> VertexId {
        *self
            .labels
            .get(label)
            .unwrap_or_else(|| panic!("no vertex labeled {label} in {}", self.name))
    }

    fn from_edges(name: &str, n: u32, edges: &[(u32, u32)]) -> Labeled {
        let mut graph = Multigraph::with_vertices(n);
        for &(a, b) in edges {
            graph.add_edge(VertexId(a - 1), VertexId(b - 1));
        }
        let labels = (1..=n)
            .map(|i| (format!("v{i}"), VertexId(i - 1)))
            .collect();
        Labeled {
            graph,
            name: name.to_string(),
            labels,
        }
    }
}

/// The six minor-minimal obstructions for twin-width 3 of long subdivisions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum F3Name {
    /// K6 minus one edge.
    K6Minus,
    /// Complement of the 7-cycle.
    C7Bar,
    /// Join of C5 and the complement of K2.
    C5K2Bar,
    /// Complete tripartite K{3,1,3} with one edge from the middle vertex to
    /// each side removed.
    K3Hat3,
    /// The cube.
    Q3,
    /// The Wagner graph.
    V8,
}

impl F3Name {
    pub const ALL: [F3Name; 6] = [
        F3Name::K6Minus,
        F3Name::C7Bar,
        F3Name::C5K2Bar,
        F3Name::K3Hat3,
        F3Name::Q3,
        F3Name::V8,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            F3Name::K6Minus => "K6-",
            F3Name::C7Bar => "C7bar",
            F3Name::C5K2Bar => "C5+K2bar",
            F3Name::K3Hat3 => "K3h3",
            F3Name::Q3 => "Q3",
            F3Name::V8 => "V8",
        }
    }

    pub fn parse(s: &str) -> Option<F3Name> {
        F3Name::ALL.into_iter().find(|n| n.as_str() == s)
    }
}

/// Obstruction-family member with its figure labeling.
pub fn f3_member(name: F3Name) -> Labeled {
    match name {
        F3Name::K6Minus => {
            // K6 on v1..v6 minus the edge v1v6
            let mut edges = Vec::new();
            for i in 1..=6u32 {
                for j in (i + 1)..=6 {
                    if (i, j) != (1, 6) {
                        edges.push((i, j));
                    }
                }
            }
            Labeled::from_edges("K6-", 6, &edges)
        }
        F3Name::C7Bar => {
            let mut edges: Vec<(u32, u32)> = (1..=7).map(|i| (i, i % 7 + 1)).collect();
            // distance-2 chords around the drawn 7-cycle
            edges.extend([(1, 3), (3, 5), (5, 7), (2, 7), (2, 4), (4, 6), (1, 6)]);
            Labeled::from_edges("C7bar", 7, &edges)
        }
        F3Name::C5K2Bar => {
            let mut edges: Vec<(u32, u32)> =
                alloc::vec![(1, 2), (2, 3), (3, 6), (6, 7), (7, 1)];
            for apex in [4u32, 5] {
                for c in [1u32, 2, 3, 6, 7] {
                    edges.push((apex.min(c), apex.max(c)));
                }
            }
            Labeled::from_edges("C5+K2bar", 7, &edges)
        }
        F3Name::K3Hat3 => {
            let mut edges = Vec::new();
            for a in [2u32, 3, 4] {
                for b in [5u32, 6, 7] {
                    edges.push((a, b));
                }
            }
            edges.extend([(1, 3), (1, 4), (1, 5), (1, 6)]);
            Labeled::from_edges("K3h3", 7, &edges)
        }
        F3Name::Q3 => Labeled::from_edges(
            "Q3",
            8,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
                (5, 6),
                (6, 7),
                (7, 8),
                (5, 8),
                (4, 8),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        ),
        F3Name::V8 => Labeled::from_edges(
            "V8",
            8,
            &[
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
                (5, 6),
                (6, 7),
                (7, 8),
                (5, 8),
                (4, 8),
                (1, 5),
                (3, 6),
                (2, 7),
            ],
        ),
    }
}

/// The bag family: complete graphs up to K5 and the four sporadic members.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum KClassName {
    /// Kn for n in 1..=5.
    Complete(u8),
    /// K6 minus a perfect matching.
    K6TripleMinus,
    /// K6 minus a 2-matching.
    K6DoubleMinus,
    /// Complement of C6 (the triangular prism) plus a dominating apex.
    C6BarK1,
    /// Line graph of K33 (the 3x3 rook's graph).
    LK33,
}

impl KClassName {
    pub const ALL: [KClassName; 9] = [
        KClassName::Complete(1),
        KClassName::Complete(2),
        KClassName::Complete(3),
        KClassName::Complete(4),
        KClassName::Complete(5),
        KClassName::K6TripleMinus,
        KClassName::K6DoubleMinus,
        KClassName::C6BarK1,
        KClassName::LK33,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KClassName::Complete(1) => "K1",
            KClassName::Complete(2) => "K2",
            KClassName::Complete(3) => "K3",
            KClassName::Complete(4) => "K4",
            KClassName::Complete(5) => "K5",
            KClassName::Complete(_) => "K?",
            KClassName::K6TripleMinus => "K6-3m",
            KClassName::K6DoubleMinus => "K6-2m",
            KClassName::C6BarK1 => "C6bar+K1",
            KClassName::LK33 => "L(K33)",
        }
    }

    pub fn parse(s: &str) -> Option<KClassName> {
        KClassName::ALL.into_iter().find(|n| n.as_str() == s)
    }
}

/// Bag-family member with its figure labeling.
pub fn k_class_member(name: KClassName) -> Result<Labeled, GraphError> {
    let complete_edges = |n: u32, missing: &[(u32, u32)]| -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                if !missing.contains(&(i, j)) {
                    edges.push((i, j));
                }
            }
        }
        edges
    };
    Ok(match name {
        KClassName::Complete(n @ 1..=5) => {
            Labeled::from_edges(name.as_str(), n as u32, &complete_edges(n as u32, &[]))
        }
        KClassName::Complete(_) => return Err(GraphError::UnknownName),
        KClassName::K6TripleMinus => Labeled::from_edges(
            name.as_str(),
            6,
            &complete_edges(6, &[(1, 6), (2, 5), (3, 4)]),
        ),
        KClassName::K6DoubleMinus => {
            Labeled::from_edges(name.as_str(), 6, &complete_edges(6, &[(1, 6), (3, 4)]))
        }
        KClassName::C6BarK1 => Labeled::from_edges(
            name.as_str(),
            7,
            &[
                (1, 2),
                (2, 3),
                (1, 3),
                (4, 5),
                (5, 6),
                (4, 6),
                (1, 4),
                (2, 5),
                (3, 6),
                (1, 7),
                (2, 7),
                (3, 7),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
        ),
        KClassName::LK33 => {
            // 3x3 rook's graph, rows {v1,v2,v3}, {v4,v5,v6}, {v7,v8,v9}
            let mut edges = Vec::new();
            for r in 0..3u32 {
                for c1 in 0..3u32 {
                    for c2 in (c1 + 1)..3 {
                        edges.push((3 * r + c1 + 1, 3 * r + c2 + 1)); // row
                        edges.push((3 * c1 + r + 1, 3 * c2 + r + 1)); // column
                    }
                }
            }
            Labeled::from_edges(name.as_str(), 9, &edges)
        }
    })
}

/// The m x n grid; vertex `(i,j)` (1-based) is labeled `"i,j"` and has id
/// `(i-1)*n + (j-1)`.
pub fn grid(m: u32, n: u32) -> Result<Labeled, GraphError> {
    if m == 0 || n == 0 {
        return Err(GraphError::BadParameter);
    }
    let mut graph = Multigraph::with_vertices(m * n);
    let id = |i: u32, j: u32| VertexId((i - 1) * n + (j - 1));
    let mut labels = BTreeMap::new();
    for i in 1..=m {
        for j in 1..=n {
            labels.insert(format!("{i},{j}"), id(i, j));
            if i < m {
                graph.add_edge(id(i, j), id(i + 1, j));
            }
            if j < n {
                graph.add_edge(id(i, j), id(i, j + 1));
            }
        }
    }
    Ok(Labeled {
        graph,
        name: format!("grid-{m}x{n}"),
        labels,
    })
}

/// The elementary m x n wall: the grid minus the edges between `(i,j)` and
/// `(i,j+1)` with `i ≡ j (mod 2)`, then minus the degree-1 vertices.
pub fn elementary_wall(m: u32, n: u32) -> Result<Labeled, GraphError> {
    let g = grid(m, n)?;
    let mut graph = g.graph.clone();
    for i in 1..=m {
        for j in 1..n {
            if i % 2 == j % 2 {
                let a = g.vertex(&format!("{i},{j}"));
                let b = g.vertex(&format!("{i},{}", j + 1));
                for e in graph.edges_between(a, b) {
                    graph.remove_edge(e);
                }
            }
        }
    }
    let drop: Vec<VertexId> = graph
        .vertices()
        .filter(|&v| graph.degree(v) <= 1)
        .collect();
    for v in drop {
        graph.remove_vertex(v);
    }
    let labels = g
        .labels
        .into_iter()
        .filter(|(_, v)| graph.has_vertex(*v))
        .collect();
    Ok(Labeled {
        graph,
        name: format!("wall-{m}x{n}"),
        labels,
    })
}

/// Line graph of the elementary m x n wall, labeled by edge midpoints: the
/// vertex for the wall edge between `(a,b)` and `(a',b')` is labeled
/// `"(a+a')/2,(b+b')/2"` with halves written as `.5`.
pub fn line_wall(m: u32, n: u32) -> Result<Labeled, GraphError> {
    let wall = elementary_wall(m, n)?;
    let lg = line_graph(&wall.graph);
    let coord_of: BTreeMap<VertexId, (u32, u32)> = wall
        .labels
        .iter()
        .map(|(s, &v)| {
            let (i, j) = s.split_once(',').expect("label is i,j");
            (v, (i.parse().unwrap(), j.parse().unwrap()))
        })
        .collect();
    let half = |x: u32, y: u32| -> String {
        let s = x + y; // doubled coordinate
        if s % 2 == 0 {
            format!("{}", s / 2)
        } else {
            format!("{}.5", s / 2)
        }
    };
    let mut labels = BTreeMap::new();
    for (e, (u, v)) in wall.graph.edges() {
        let (a, b) = coord_of[&u];
        let (a2, b2) = coord_of[&v];
        labels.insert(format!("{},{}", half(a, a2), half(b, b2)), VertexId(e.0));
    }
    Ok(Labeled {
        graph: lg,
        name: format!("line-wall-{m}x{n}"),
        labels,
    })
}

/// The edge-extremal family: for odd n, the join of a triangle `v1 v2 v3`
/// with (n-3)/2 disjoint edges `si si'`; for even n, the odd graph one
/// larger minus its last `si`.
pub fn extremal_graph(n: u32) -> Result<Labeled, GraphError> {
    if n < 3 {
        return Err(GraphError::BadParameter);
    }
    if n % 2 == 0 {
        let mut l = extremal_graph(n + 1)?;
        let k = (n - 1) / 2; // index of the removed pendant-pair vertex
        let gone = l.vertex(&format!("s{k}"));
        l.graph.remove_vertex(gone);
        l.labels.retain(|_, v| *v != gone);
        l.name = format!("extremal-{n}");
        return Ok(l);
    }
    let pairs = (n - 3) / 2;
    let mut graph = Multigraph::with_vertices(3);
    let mut labels = BTreeMap::new();
    for i in 0..3u32 {
        labels.insert(format!("v{}", i + 1), VertexId(i));
    }
    graph.add_edge(VertexId(0), VertexId(1));
    graph.add_edge(VertexId(1), VertexId(2));
    graph.add_edge(VertexId(0), VertexId(2));
    for i in 1..=pairs {
        let s = graph.fresh_vertex();
        let sp = graph.fresh_vertex();
        labels.insert(format!("s{i}"), s);
        labels.insert(format!("s{i}'"), sp);
        graph.add_edge(s, sp);
        for t in 0..3u32 {
            graph.add_edge(s, VertexId(t));
            graph.add_edge(sp, VertexId(t));
        }
    }
    Ok(Labeled {
        graph,
        name: format!("extremal-{n}"),
        labels,
    })
}

/// Registry used by the command line: every named graph addressable by
/// string.
pub fn by_name(name: &str, args: &[u32]) -> Result<Labeled, GraphError> {
    if let Some(f) = F3Name::parse(name) {
        return Ok(f3_member(f));
    }
    if let Some(k) = KClassName::parse(name) {
        return k_class_member(k);
    }
    let single = |g: Result<Multigraph, GraphError>, nm: &str| -> Result<Labeled, GraphError> {
        Ok(Labeled {
            graph: g?,
            name: nm.to_string(),
            labels: BTreeMap::new(),
        })
    };
    match (name, args) {
        ("complete", [n]) => single(complete(*n), &format!("K{n}")),
        ("cycle", [n]) => single(super::cycle(*n), &format!("C{n}")),
        ("path", [n]) => single(super::path(*n), &format!("P{n}")),
        ("biclique", [m, n]) => single(super::complete_bipartite(*m, *n), &format!("K{m},{n}")),
        ("grid", [m, n]) => grid(*m, *n),
        ("wall", [m, n]) => elementary_wall(*m, *n),
        ("linewall", [m, n]) => line_wall(*m, *n),
        ("extremal", [n]) => extremal_graph(*n),
        _ => Err(GraphError::UnknownName),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;
    use crate::iso::are_isomorphic;

    #[test]
    fn f3_member_counts() {
        let expect = [
            (F3Name::K6Minus, 6, 14),
            (F3Name::C7Bar, 7, 14),
            (F3Name::C5K2Bar, 7, 15),
            (F3Name::K3Hat3, 7, 13),
            (F3Name::Q3, 8, 12),
            (F3Name::V8, 8, 12),
        ];
        for (name, nv, ne) in expect {
            let g = f3_member(name);
            assert_eq!(g.graph.vertex_count(), nv, "{name:?}");
            assert_eq!(g.graph.edge_count(), ne, "{name:?}");
            assert!(g.graph.is_simple());
        }
    }

    #[test]
    fn c7bar_is_complement_of_c7() {
        let c7 = cycle(7).unwrap();
        let cc = c7.complement().unwrap();
        assert!(are_isomorphic(&cc, &f3_member(F3Name::C7Bar).graph).is_some());
    }

    #[test]
    fn c5k2bar_is_the_join() {
        let c5 = cycle(5).unwrap();
        let k2bar = Multigraph::with_vertices(2);
        let (g, _) = super::super::join(&c5, &k2bar);
        assert!(are_isomorphic(&g, &f3_member(F3Name::C5K2Bar).graph).is_some());
    }

    #[test]
    fn q3_girth_and_regularity() {
        let q3 = f3_member(F3Name::Q3);
        assert_eq!(q3.graph.girth(), Some(4));
        for v in q3.graph.vertices() {
            assert_eq!(q3.graph.degree(v), 3);
        }
        // bipartite cube vs Wagner graph: V8 contains odd cycles
        let v8 = f3_member(F3Name::V8);
        assert_eq!(v8.graph.girth(), Some(4));
        assert!(are_isomorphic(&q3.graph, &v8.graph).is_none());
    }

    #[test]
    fn v8_is_the_wagner_graph() {
        // Wagner graph = 8-cycle plus the 4 diagonals
        let mut w = Multigraph::with_vertices(8);
        for i in 0..8u32 {
            w.add_edge(VertexId(i), VertexId((i + 1) % 8));
        }
        for i in 0..4u32 {
            w.add_edge(VertexId(i), VertexId(i + 4));
        }
        assert!(are_isomorphic(&w, &f3_member(F3Name::V8).graph).is_some());
    }

    #[test]
    fn k_class_counts() {
        let expect = [
            (KClassName::K6TripleMinus, 6, 12),
            (KClassName::K6DoubleMinus, 6, 13),
            (KClassName::C6BarK1, 7, 15),
            (KClassName::LK33, 9, 18),
        ];
        for (name, nv, ne) in expect {
            let g = k_class_member(name).unwrap();
            assert_eq!(g.graph.vertex_count(), nv, "{name:?}");
            assert_eq!(g.graph.edge_count(), ne, "{name:?}");
        }
    }

    #[test]
    fn k6_double_minus_degree5_vertices() {
        let g = k_class_member(KClassName::K6DoubleMinus).unwrap();
        let deg5: Vec<&str> = ["v1", "v2", "v3", "v4", "v5", "v6"]
            .into_iter()
            .filter(|l| g.graph.degree(g.vertex(l)) == 5)
            .collect();
        assert_eq!(deg5, ["v2", "v5"]);
    }

    #[test]
    fn lk33_is_line_graph_of_k33() {
        let k33 = super::super::complete_bipartite(3, 3).unwrap();
        let l = line_graph(&k33);
        assert!(are_isomorphic(&l, &k_class_member(KClassName::LK33).unwrap().graph).is_some());
    }

    #[test]
    fn c6bar_k1_is_complement_plus_apex() {
        let c6 = cycle(6).unwrap();
        let cc = c6.complement().unwrap();
        let k1 = Multigraph::with_vertices(1);
        let (g, _) = super::super::join(&cc, &k1);
        assert!(are_isomorphic(&g, &k_class_member(KClassName::C6BarK1).unwrap().graph).is_some());
    }

    #[test]
    fn grid_and_wall_shapes() {
        let g = grid(2, 3).unwrap();
        assert_eq!(g.graph.vertex_count(), 6);
        assert_eq!(g.graph.edge_count(), 7);
        let w = elementary_wall(11, 7).unwrap();
        assert!(w.graph.is_simple());
        assert!(w.graph.vertices().all(|v| w.graph.degree(v) >= 2));
        assert!(w.graph.vertices().all(|v| w.graph.degree(v) <= 3));
        assert!(w.graph.is_connected());
    }

    #[test]
    fn extremal_counts_match_bound() {
        for n in 3..=20u32 {
            let g = extremal_graph(n).unwrap();
            assert_eq!(g.graph.vertex_count(), n as usize);
            assert_eq!(
                g.graph.edge_count(),
                ((7 * n as usize).saturating_sub(15)) / 2,
                "n={n}"
            );
        }
    }
}
