//! Graphs as `{E:2}`-structures and the graphs derived from structures.

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt::Write as _;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::labels::{LabelTable, Tag};
use crate::structure::{Signature, Structure};

/// A structure over the signature `{E:2}`.
///
/// Loops and symmetric pairs are allowed; undirectedness and directedness
/// are checked properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph(Structure);

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph(Structure::new(Signature::graph(), n))
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.0.insert("E", vec![u, v])?;
        }
        Ok(g)
    }

    /// Adds both orientations of every pair.
    pub fn from_undirected_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges(n, edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]))
    }

    pub fn try_from_structure(s: Structure) -> Result<Self> {
        if s.signature() != &Signature::graph() {
            return Err(Error::NotAGraph);
        }
        Ok(Graph(s))
    }

    /// The complete undirected graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("in range")
    }

    /// `0 → 1 → … → n-1`.
    pub fn directed_path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("in range")
    }

    pub fn directed_cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("in range")
    }

    pub fn undirected_cycle(n: usize) -> Self {
        Self::from_undirected_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("in range")
    }

    pub fn as_structure(&self) -> &Structure {
        &self.0
    }

    pub fn into_structure(self) -> Structure {
        self.0
    }

    /// Directed edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.tuples("E").iter().map(|t| (t[0], t[1]))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.0.tuples("E").len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.contains("E", &[u, v])
    }

    pub fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.size()];
        for (u, v) in self.edges() {
            out[u].push(v);
        }
        out
    }

    /// Neighbours ignoring direction, loops dropped.
    pub fn neighbors(&self) -> Vec<BTreeSet<usize>> {
        let mut out = vec![BTreeSet::new(); self.size()];
        for (u, v) in self.edges() {
            if u != v {
                out[u].insert(v);
                out[v].insert(u);
            }
        }
        out
    }

    /// Non-reflexive and symmetric.
    pub fn is_undirected(&self) -> bool {
        self.edges().all(|(u, v)| u != v && self.has_edge(v, u))
    }

    /// Irreflexive and anti-symmetric.
    pub fn is_directed(&self) -> bool {
        self.edges().all(|(u, v)| u != v && !self.has_edge(v, u))
    }

    /// Unordered edges `{u, v}` with `u < v`, each once.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Weak connectivity; the empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.size();
        if n == 0 {
            return true;
        }
        let nb = self.neighbors();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &nb[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// DOT text; undirected graphs emit each unordered edge once.
    pub fn to_dot(&self, tags: Option<&LabelTable>) -> String {
        let name = |x: usize| match tags {
            Some(t) => t.tag(x).to_string(),
            None => self.label(x),
        };
        let undirected = self.edge_count() > 0 && self.is_undirected();
        let (kind, arrow) = if undirected { ("graph", "--") } else { ("digraph", "->") };
        let mut out = format!("{kind} G {{\n");
        for x in 0..self.size() {
            let _ = writeln!(out, "  \"{}\";", name(x));
        }
        let edges = if undirected { self.undirected_edges() } else { self.edge_list() };
        for (u, v) in edges {
            let _ = writeln!(out, "  \"{}\" {arrow} \"{}\";", name(u), name(v));
        }
        out.push_str("}\n");
        out
    }
}

impl Deref for Graph {
    type Target = Structure;

    fn deref(&self) -> &Structure {
        &self.0
    }
}

impl From<Graph> for Structure {
    fn from(g: Graph) -> Structure {
        g.0
    }
}

/// Gaifman graph: `{x, y}` is an edge iff `x ≠ y` occur together in a tuple.
/// Repeated entries never produce a loop.
pub fn gaifman(m: &Structure) -> Graph {
    let mut g = Graph::empty(m.size());
    for (_, t) in m.iter_tuples() {
        for (i, &x) in t.iter().enumerate() {
            for &y in &t[i + 1..] {
                if x != y {
                    g.0.insert("E", vec![x, y]).expect("in range");
                    g.0.insert("E", vec![y, x]).expect("in range");
                }
            }
        }
    }
    g
}

/// Elements occurring in no tuple.
pub fn isolated_points(m: &Structure) -> BTreeSet<usize> {
    let mut used = vec![false; m.size()];
    for (_, t) in m.iter_tuples() {
        for &x in t {
            used[x] = true;
        }
    }
    (0..m.size()).filter(|&x| !used[x]).collect()
}

/// Elements appearing in one of the first two coordinates of some tuple.
/// Unary tuples contribute their single entry.
pub fn arc_vertices(m: &Structure) -> BTreeSet<usize> {
    m.iter_tuples().flat_map(|(_, t)| t.iter().take(2).copied()).collect()
}

/// At most one tuple, over all symbols, has `(u, v)` or `(v, u)` as its
/// first two coordinates, and no tuple starts with a repeated element.
pub fn is_directed(m: &Structure) -> bool {
    let mut seen = BTreeSet::new();
    for (_, t) in m.iter_tuples() {
        if t.len() < 2 {
            continue;
        }
        let (u, v) = (t[0], t[1]);
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return false;
        }
    }
    true
}

/// The arc graph together with the element of `M` behind each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcGraph {
    pub graph: Graph,
    /// `vertices[i]` is the element of the source structure at vertex `i`,
    /// ascending.
    pub vertices: Vec<usize>,
}

pub fn arc_graph(m: &Structure) -> Result<ArcGraph> {
    if !is_directed(m) {
        return Err(Error::NotDirected);
    }
    let vertices: Vec<usize> = arc_vertices(m).into_iter().collect();
    let mut index = vec![usize::MAX; m.size()];
    for (i, &x) in vertices.iter().enumerate() {
        index[x] = i;
    }
    let edges = m
        .iter_tuples()
        .filter(|(_, t)| t.len() >= 2)
        .map(|(_, t)| (index[t[0]], index[t[1]]));
    let graph = Graph::from_edges(vertices.len(), edges)?;
    Ok(ArcGraph { graph, vertices })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdivisionMode {
    Undirected,
    Directed,
}

/// A graph with one provenance tag per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedGraph {
    pub graph: Graph,
    pub tags: LabelTable,
}

/// Replaces every edge by a path of length `r + 1`.
///
/// Natives keep their indices; the points of edge `(u, v)` follow in
/// lexicographic edge order, tagged `Inner(u, v, k)` along the path from `u`.
/// In undirected mode each unordered edge is subdivided once with `u < v`.
pub fn subdivide(g: &Graph, r: usize, mode: SubdivisionMode) -> Result<TaggedGraph> {
    let edges = match mode {
        SubdivisionMode::Undirected if g.is_undirected() => g.undirected_edges(),
        SubdivisionMode::Directed if g.is_directed() => g.edge_list(),
        _ => return Err(Error::ModeMismatch),
    };
    let mut tags: LabelTable = (0..g.size()).map(Tag::Native).collect();
    let mut arcs = Vec::new();
    for &(u, v) in &edges {
        let mut prev = u;
        for k in 0..r {
            let x = tags.push(Tag::Inner(u, v, k));
            arcs.push((prev, x));
            prev = x;
        }
        arcs.push((prev, v));
    }
    let graph = match mode {
        SubdivisionMode::Undirected => Graph::from_undirected_edges(tags.len(), arcs)?,
        SubdivisionMode::Directed => Graph::from_edges(tags.len(), arcs)?,
    };
    Ok(TaggedGraph { graph, tags })
}

/// `K_n^r`: natives `0..n`, then `r` points per pair `i < j`.
pub fn subdivided_clique(n: usize, r: usize) -> TaggedGraph {
    subdivide(&Graph::complete(n), r, SubdivisionMode::Undirected).expect("K_n is undirected")
}

/// Acyclic, loops included.
pub fn is_well_founded(g: &Graph) -> bool {
    ordinal_embedding(g).is_ok()
}

/// Rank of every vertex in the lexicographically least topological order.
pub fn ordinal_embedding(g: &Graph) -> Result<Vec<usize>> {
    let n = g.size();
    let out = g.out_neighbors();
    let mut indeg = vec![0usize; n];
    for (_, v) in g.edges() {
        indeg[v] += 1;
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut rank = vec![usize::MAX; n];
    let mut next = 0;
    while let Some(Reverse(u)) = ready.pop() {
        rank[u] = next;
        next += 1;
        for &v in &out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse(v));
            }
        }
    }
    if next == n {
        Ok(rank)
    } else {
        Err(Error::NotWellFounded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;
    use proptest::prelude::*;

    fn ternary() -> Signature {
        Signature::new_unchecked([("R", 3)])
    }

    #[test]
    fn gaifman_of_ternary_tuple_is_triangle() {
        let m = Structure::from_tuples(ternary(), 3, [("R", vec![0, 1, 2])]).unwrap();
        let g = gaifman(&m);
        assert_eq!(g.undirected_edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.is_undirected());
    }

    #[test]
    fn gaifman_drops_loops() {
        let m = Structure::from_tuples(Signature::graph(), 1, [("E", vec![0, 0])]).unwrap();
        assert_eq!(gaifman(&m).edge_count(), 0);
        assert_eq!(gaifman(&Structure::new(ternary(), 4)).edge_count(), 0);
    }

    #[test]
    fn isolated_points_scan_all_tuples() {
        let m = Structure::from_tuples(Signature::graph(), 3, [("E", vec![0, 1])]).unwrap();
        assert_eq!(isolated_points(&m), BTreeSet::from([2]));
        let u = Structure::from_tuples(Signature::new_unchecked([("U", 1)]), 1, [("U", vec![0])]).unwrap();
        assert!(isolated_points(&u).is_empty());
        assert_eq!(gaifman(&u).edge_count(), 0);
        assert_eq!(isolated_points(&Graph::empty(3)), BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn directedness_follows_first_two_coordinates() {
        let m = Structure::from_tuples(ternary(), 2, [("R", vec![0, 1, 1])]).unwrap();
        assert!(is_directed(&m));
        let sym = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(!is_directed(&sym));
        let sig = Signature::new_unchecked([("R", 3), ("S", 2)]);
        let two = Structure::from_tuples(sig, 3, [("R", vec![0, 1, 2]), ("S", vec![0, 1])]).unwrap();
        assert!(!is_directed(&two));
    }

    #[test]
    fn arc_graph_of_ternary_tuple_is_single_edge() {
        let m = Structure::from_tuples(ternary(), 3, [("R", vec![0, 1, 2])]).unwrap();
        let arc = arc_graph(&m).unwrap();
        assert_eq!(arc.vertices, vec![0, 1]);
        assert_eq!(arc.graph.edge_list(), vec![(0, 1)]);
        assert_eq!(arc_graph(&Structure::new(ternary(), 3)).unwrap().graph.size(), 0);
        let sym = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(arc_graph(&sym), Err(Error::NotDirected));
    }

    #[test]
    fn subdividing_directed_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let s = subdivide(&g, 2, SubdivisionMode::Directed).unwrap();
        assert_eq!(s.graph.edge_list(), vec![(0, 2), (2, 3), (3, 1)]);
        assert_eq!(s.tags.tag(2), Tag::Inner(0, 1, 0));
        assert_eq!(subdivide(&g, 0, SubdivisionMode::Directed).unwrap().graph, g);
        assert_eq!(subdivide(&g, 1, SubdivisionMode::Undirected), Err(Error::ModeMismatch));
    }

    #[test]
    fn subdivided_clique_counts() {
        let k = subdivided_clique(4, 1);
        assert_eq!(k.graph.size(), 10);
        let nb = k.graph.neighbors();
        assert!((0..4).all(|v| nb[v].len() == 3));
        assert_eq!(subdivided_clique(4, 0).graph, Graph::complete(4));
        let c6 = subdivided_clique(3, 1).graph;
        assert!(c6.neighbors().iter().all(|n| n.len() == 2) && c6.is_connected());
    }

    #[test]
    fn well_foundedness_examples() {
        let h = Graph::from_edges(5, [(0, 1), (1, 2), (4, 2), (3, 0), (3, 2), (3, 4)]).unwrap();
        assert!(is_well_founded(&h));
        assert!(!is_well_founded(&Graph::directed_cycle(2)));
        assert!(!is_well_founded(&Graph::from_edges(1, [(0, 0)]).unwrap()));
        assert_eq!(ordinal_embedding(&Graph::empty(3)).unwrap(), vec![0, 1, 2]);
        assert_eq!(ordinal_embedding(&Graph::directed_path(3)).unwrap(), vec![0, 1, 2]);
        assert_eq!(ordinal_embedding(&Graph::directed_cycle(2)), Err(Error::NotWellFounded));
    }

    #[test]
    fn dot_output_emits_undirected_edges_once() {
        let dot = Graph::undirected_cycle(3).to_dot(None);
        assert!(dot.starts_with("graph"));
        assert_eq!(dot.matches("--").count(), 3);
        assert!(Graph::directed_path(2).to_dot(None).starts_with("digraph"));
    }

    fn arb_structure() -> impl Strategy<Value = Structure> {
        (1usize..=6).prop_flat_map(|n| {
            let bin = proptest::collection::vec((0..n, 0..n), 0..8);
            let ter = proptest::collection::vec((0..n, 0..n, 0..n), 0..5);
            (Just(n), bin, ter).prop_map(|(n, bin, ter)| {
                let sig = Signature::new_unchecked([("E", 2), ("R", 3)]);
                let mut m = Structure::new(sig, n);
                for (a, b) in bin {
                    m.insert("E", vec![a, b]).unwrap();
                }
                for (a, b, c) in ter {
                    m.insert("R", vec![a, b, c]).unwrap();
                }
                m
            })
        })
    }

    fn arb_digraph() -> impl Strategy<Value = Graph> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..12)
                .prop_map(move |e| Graph::from_edges(n, e).unwrap())
        })
    }

    fn arb_oriented() -> impl Strategy<Value = Graph> {
        (2usize..=6).prop_flat_map(|n| {
            proptest::collection::btree_map((0..n, 0..n), any::<bool>(), 0..12).prop_map(move |e| {
                let arcs = e.into_iter().filter(|((u, v), _)| u < v).map(|((u, v), flip)| if flip { (v, u) } else { (u, v) });
                Graph::from_edges(n, arcs).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn gaifman_is_symmetric_and_loop_free(m in arb_structure()) {
            let g = gaifman(&m);
            prop_assert!(g.edges().all(|(u, v)| u != v && g.has_edge(v, u)));
        }

        #[test]
        fn arc_graph_of_directed_graph_without_isolated_points_is_itself(g in arb_oriented()) {
            let keep: Vec<usize> = (0..g.size()).filter(|x| !isolated_points(&g).contains(x)).collect();
            let core = Graph::try_from_structure(g.induced(&keep)).unwrap();
            let arc = arc_graph(&core).unwrap();
            prop_assert_eq!(&arc.vertices, &keep.iter().enumerate().map(|(i, _)| i).collect::<Vec<_>>());
            prop_assert_eq!(arc.graph, core);
        }

        #[test]
        fn subdivision_size_formula(g in arb_digraph(), r in 0usize..4) {
            if g.is_directed() {
                let s = subdivide(&g, r, SubdivisionMode::Directed).unwrap();
                prop_assert_eq!(s.graph.size(), g.size() + r * g.edge_count());
            }
            let loopless: Vec<_> = g.edges().filter(|(u, v)| u != v).collect();
            let u = Graph::from_undirected_edges(g.size(), loopless).unwrap();
            let s = subdivide(&u, r, SubdivisionMode::Undirected).unwrap();
            prop_assert_eq!(s.graph.size(), u.size() + r * u.undirected_edges().len());
        }

        #[test]
        fn ordinal_embedding_respects_edges(g in arb_digraph()) {
            if let Ok(f) = ordinal_embedding(&g) {
                prop_assert!(g.edges().all(|(u, v)| f[u] < f[v]));
                let mut sorted = f.clone();
                sorted.sort_unstable();
                prop_assert_eq!(sorted, (0..g.size()).collect::<Vec<_>>());
            }
        }
    }
}
