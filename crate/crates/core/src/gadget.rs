//! Gadgets, the star product with its actions on both arguments, the
//! gadget product `⊛`, the fixed gadget `ℋ` and the full-embedding check.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::thread;

use crate::error::{Error, Result};
use crate::graph::{arc_graph, isolated_points, ArcGraph, Graph};
use crate::hom::{find_isomorphism, homomorphisms, is_homomorphism, HomQuery, Hom};
use crate::labels::{LabelTable, Tag};
use crate::structure::Structure;

/// A structure with two distinguished points and three disjoint marked sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    carrier: Structure,
    alpha: usize,
    beta: usize,
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
    p: BTreeSet<usize>,
}

/// The part of a gadget an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Alpha,
    Beta,
    A,
    B,
    P,
    Inner,
}

pub fn make_gadget(
    carrier: Structure,
    alpha: usize,
    beta: usize,
    a: impl IntoIterator<Item = usize>,
    b: impl IntoIterator<Item = usize>,
    p: impl IntoIterator<Item = usize>,
) -> Result<Gadget> {
    let a: BTreeSet<usize> = a.into_iter().collect();
    let b: BTreeSet<usize> = b.into_iter().collect();
    let p: BTreeSet<usize> = p.into_iter().collect();
    let n = carrier.size();
    if let Some(&x) = [alpha, beta].iter().chain(&a).chain(&b).chain(&p).find(|&&x| x >= n) {
        return Err(Error::MarkOutOfRange(x));
    }
    if alpha == beta {
        return Err(Error::AlphaEqualsBeta);
    }
    let total = a.len() + b.len() + p.len();
    let union: BTreeSet<usize> = a.iter().chain(&b).chain(&p).copied().collect();
    if union.len() != total || union.contains(&alpha) || union.contains(&beta) {
        return Err(Error::OverlappingMarks);
    }
    Ok(Gadget { carrier, alpha, beta, a, b, p })
}

impl Gadget {
    /// The gadget `(M, α, β, ∅, ∅, ∅)`.
    pub fn simple(carrier: Structure, alpha: usize, beta: usize) -> Result<Self> {
        make_gadget(carrier, alpha, beta, [], [], [])
    }

    pub fn carrier(&self) -> &Structure {
        &self.carrier
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    pub fn a(&self) -> &BTreeSet<usize> {
        &self.a
    }

    pub fn b(&self) -> &BTreeSet<usize> {
        &self.b
    }

    pub fn p(&self) -> &BTreeSet<usize> {
        &self.p
    }

    pub fn is_simple(&self) -> bool {
        self.a.is_empty() && self.b.is_empty() && self.p.is_empty()
    }

    pub fn role(&self, x: usize) -> Role {
        if x == self.alpha {
            Role::Alpha
        } else if x == self.beta {
            Role::Beta
        } else if self.a.contains(&x) {
            Role::A
        } else if self.b.contains(&x) {
            Role::B
        } else if self.p.contains(&x) {
            Role::P
        } else {
            Role::Inner
        }
    }

    /// Unmarked elements, ascending.
    pub fn inner(&self) -> Vec<usize> {
        (0..self.carrier.size()).filter(|&x| self.role(x) == Role::Inner).collect()
    }

    /// The carrier as a graph, when the signature is `{E:2}`.
    pub fn graph(&self) -> Result<Graph> {
        Graph::try_from_structure(self.carrier.clone())
    }
}

/// `G ⋆ M` with the provenance of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarProduct {
    pub structure: Structure,
    pub tags: LabelTable,
    /// Edges of `G`, lexicographic.
    pub edges: Vec<(usize, usize)>,
}

impl StarProduct {
    /// Image of `c ∈ M` under `φ_(u,v)`; `(u, v)` must be an edge.
    pub fn phi_at(&self, m: &Gadget, u: usize, v: usize, c: usize) -> usize {
        let tag = match m.role(c) {
            Role::Alpha => Tag::Native(u),
            Role::Beta => Tag::Native(v),
            Role::A => Tag::APoint(u, c),
            Role::B => Tag::BPoint(v, c),
            Role::P => Tag::Shared(c),
            Role::Inner => Tag::Inner(u, v, c),
        };
        self.tags.get(&tag).expect("phi is defined on edges")
    }

    /// `φ_(u,v)` as a mapping.
    pub fn phi(&self, m: &Gadget, u: usize, v: usize) -> Result<Vec<usize>> {
        if self.edges.binary_search(&(u, v)).is_err() {
            return Err(Error::EdgeAbsent(u, v));
        }
        Ok((0..m.carrier.size()).map(|c| self.phi_at(m, u, v, c)).collect())
    }

    pub fn natives(&self) -> usize {
        self.tags.tags().iter().take_while(|t| matches!(t, Tag::Native(_))).count()
    }
}

pub fn star(g: &Graph, m: &Gadget) -> StarProduct {
    let edges = g.edge_list();
    let sources: BTreeSet<usize> = edges.iter().map(|e| e.0).collect();
    let targets: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
    let mut tags: LabelTable = (0..g.size()).map(Tag::Native).collect();
    for &p in &m.p {
        tags.push(Tag::Shared(p));
    }
    for &u in &sources {
        for &a in &m.a {
            tags.push(Tag::APoint(u, a));
        }
    }
    for &v in &targets {
        for &b in &m.b {
            tags.push(Tag::BPoint(v, b));
        }
    }
    let inner = m.inner();
    for &(u, v) in &edges {
        for &c in &inner {
            tags.push(Tag::Inner(u, v, c));
        }
    }
    let structure = Structure::new(m.carrier.signature().clone(), tags.len());
    let mut out = StarProduct { structure, tags, edges };
    let mut structure = out.structure.clone();
    for &(u, v) in &out.edges {
        let f: Vec<usize> = (0..m.carrier.size()).map(|c| out.phi_at(m, u, v, c)).collect();
        for (name, t) in m.carrier.iter_tuples() {
            structure.insert(name, t.iter().map(|&x| f[x]).collect()).expect("images stay in range");
        }
    }
    out.structure = structure.with_labels(out.tags.display_names());
    out
}

/// `φ_(u,v)` as a homomorphism into a freshly built `G ⋆ M`.
pub fn phi(g: &Graph, m: &Gadget, edge: (usize, usize)) -> Result<Hom> {
    let s = star(g, m);
    let f = s.phi(m, edge.0, edge.1)?;
    Hom::new(Arc::new(m.carrier.clone()), Arc::new(s.structure), f)
}

/// Gadget homomorphism check: a carrier hom fixing the distinguished points
/// and mapping each marked set into its counterpart.
pub fn is_gadget_hom(rho: &[usize], m: &Gadget, n: &Gadget) -> bool {
    is_homomorphism(rho, &m.carrier, &n.carrier, false)
        && rho[m.alpha] == n.alpha
        && rho[m.beta] == n.beta
        && m.a.iter().all(|x| n.a.contains(&rho[*x]))
        && m.b.iter().all(|x| n.b.contains(&rho[*x]))
        && m.p.iter().all(|x| n.p.contains(&rho[*x]))
}

/// All gadget homomorphisms `M → N`, lexicographically.
pub fn gadget_homs(m: &Gadget, n: &Gadget) -> Result<Vec<Vec<usize>>> {
    let mut q = HomQuery::new(&m.carrier, &n.carrier).pin(m.alpha, n.alpha).pin(m.beta, n.beta);
    for (src, dst) in [(&m.a, &n.a), (&m.b, &n.b), (&m.p, &n.p)] {
        for &x in src {
            q = q.restrict(x, dst.iter().copied());
        }
    }
    q.maps()
}

/// `f ⋆ ρ : G ⋆ M → H ⋆ N` on already built products.
///
/// Inner points go through `φ^H_(f u, f v) ∘ ρ`, which covers gadget
/// homomorphisms sending unmarked points onto marked ones.
pub fn star_bi_on(
    sg: &StarProduct,
    sh: &StarProduct,
    f: &[usize],
    rho: &[usize],
    n: &Gadget,
) -> Vec<usize> {
    sg.tags
        .tags()
        .iter()
        .map(|&tag| {
            let image = match tag {
                Tag::Native(g) => Tag::Native(f[g]),
                Tag::Shared(p) => Tag::Shared(rho[p]),
                Tag::APoint(u, a) => Tag::APoint(f[u], rho[a]),
                Tag::BPoint(v, b) => Tag::BPoint(f[v], rho[b]),
                Tag::Inner(u, v, c) => return sh.phi_at(n, f[u], f[v], rho[c]),
                Tag::Plain(_) => unreachable!("star products carry no plain tags"),
            };
            sh.tags.get(&image).expect("image tag exists in the target product")
        })
        .collect()
}

fn check_graph_hom(f: &[usize], g: &Graph, h: &Graph) -> Result<()> {
    if is_homomorphism(f, g, h, false) {
        Ok(())
    } else {
        Err(Error::NotAHom)
    }
}

/// `f ⋆ ρ` from `G ⋆ M` to `H ⋆ N`.
pub fn star_bi(f: &[usize], g: &Graph, h: &Graph, rho: &[usize], m: &Gadget, n: &Gadget) -> Result<Vec<usize>> {
    check_graph_hom(f, g, h)?;
    if rho.len() != m.carrier.size() || !is_gadget_hom(rho, m, n) {
        return Err(Error::NotAGadgetHom);
    }
    Ok(star_bi_on(&star(g, m), &star(h, n), f, rho, n))
}

/// `f ⋆ M`.
pub fn star_graph_hom(f: &[usize], g: &Graph, h: &Graph, m: &Gadget) -> Result<Vec<usize>> {
    check_graph_hom(f, g, h)?;
    let id: Vec<usize> = (0..m.carrier.size()).collect();
    Ok(star_bi_on(&star(g, m), &star(h, m), f, &id, m))
}

/// `G ⋆ ρ`.
pub fn star_gadget_hom(g: &Graph, rho: &[usize], m: &Gadget, n: &Gadget) -> Result<Vec<usize>> {
    let id: Vec<usize> = (0..g.size()).collect();
    star_bi(&id, g, g, rho, m, n)
}

fn simple_graph_gadget(h: &Gadget) -> Result<Graph> {
    let graph = h.graph()?;
    if !h.is_simple() {
        return Err(Error::NotSimple);
    }
    Ok(graph)
}

/// `H ⊛ M` for a simple graph gadget `(H, s, t)`.
///
/// `A′` is empty when `s` starts no edge of `H`; likewise `B′` when `t` ends
/// none.
pub fn ostar(h: &Gadget, m: &Gadget) -> Result<Gadget> {
    let graph = simple_graph_gadget(h)?;
    let s = star(&graph, m);
    let (src, dst) = (h.alpha, h.beta);
    let a = m.a.iter().filter_map(|&x| s.tags.get(&Tag::APoint(src, x)));
    let b = m.b.iter().filter_map(|&x| s.tags.get(&Tag::BPoint(dst, x)));
    let p = m.p.iter().map(|&x| s.tags.get(&Tag::Shared(x)).expect("shared points exist"));
    let (a, b, p): (Vec<_>, Vec<_>, Vec<_>) = (a.collect(), b.collect(), p.collect());
    make_gadget(s.structure, src, dst, a, b, p)
}

/// An isomorphism `(G ⋆ H) ⋆ M ≅ G ⋆ (H ⊛ M)`, found by search.
///
/// Requires `s` to start and `t` to end an edge of `H`. When `A` is marked,
/// `t` must start no edge, and when `B` is marked, `s` must end none:
/// otherwise the two sides carry different numbers of `A`- or `B`-copies.
pub fn assoc_check(g: &Graph, h: &Gadget, m: &Gadget) -> Result<Vec<usize>> {
    let hg = simple_graph_gadget(h)?;
    if !hg.edges().any(|(u, _)| u == h.alpha) {
        return Err(Error::HypothesisFailed("s starts no edge".into()));
    }
    if !hg.edges().any(|(_, v)| v == h.beta) {
        return Err(Error::HypothesisFailed("t ends no edge".into()));
    }
    if !m.a.is_empty() && hg.edges().any(|(u, _)| u == h.beta) {
        return Err(Error::HypothesisFailed("A is marked and t starts an edge".into()));
    }
    if !m.b.is_empty() && hg.edges().any(|(_, v)| v == h.alpha) {
        return Err(Error::HypothesisFailed("B is marked and s ends an edge".into()));
    }
    let gh = Graph::try_from_structure(star(g, h).structure)?;
    let left = star(&gh, m).structure;
    let right = star(g, &ostar(h, m)?).structure;
    find_isomorphism(&left, &right)?.ok_or(Error::NoIsoFound)
}

/// `(ℋ, s, t)`: vertices `s, v0, v1, v2, t` at indices `0..5`.
pub fn h_gadget() -> Gadget {
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (4, 2), (3, 0), (3, 2), (3, 4)]).expect("fixed graph");
    let carrier = g.into_structure().with_labels(["s", "v0", "v1", "v2", "t"].map(String::from).to_vec());
    Gadget::simple(carrier, 0, 4).expect("s differs from t")
}

/// The directed path `0 → … → r+1` with `α = 0`, `β = r + 1`.
pub fn path_gadget(r: usize) -> Gadget {
    Gadget::simple(Graph::directed_path(r + 2).into_structure(), 0, r + 1).expect("path has two ends")
}

/// A gadget whose carrier is directed and whose distinguished points are
/// arc-graph vertices disjoint from the marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    gadget: Gadget,
    arc: ArcGraph,
}

impl System {
    pub fn new(gadget: Gadget) -> Result<Self> {
        let arc = arc_graph(&gadget.carrier).map_err(|_| Error::NotASystem("carrier is not directed".into()))?;
        let v = &arc.vertices;
        if v.binary_search(&gadget.alpha).is_err() || v.binary_search(&gadget.beta).is_err() {
            return Err(Error::NotASystem("alpha and beta must be arc-graph vertices".into()));
        }
        if gadget.a.iter().chain(&gadget.b).chain(&gadget.p).any(|x| v.binary_search(x).is_ok()) {
            return Err(Error::NotASystem("marked points meet the arc graph".into()));
        }
        Ok(System { gadget, arc })
    }

    pub fn gadget(&self) -> &Gadget {
        &self.gadget
    }

    pub fn arc(&self) -> &ArcGraph {
        &self.arc
    }

    /// Length of the arc graph when it is a directed path from `α` to `β`.
    pub fn arc_path_length(&self) -> Option<usize> {
        let g = &self.arc.graph;
        let index = |x: usize| self.arc.vertices.binary_search(&x).ok();
        let (start, end) = (index(self.gadget.alpha)?, index(self.gadget.beta)?);
        let out = g.out_neighbors();
        let mut seen = vec![false; g.size()];
        let mut cur = start;
        seen[cur] = true;
        let mut len = 0;
        while cur != end {
            let [next] = out[cur][..] else { return None };
            if seen[next] {
                return None;
            }
            seen[next] = true;
            cur = next;
            len += 1;
        }
        (out[end].is_empty() && seen.iter().all(|&s| s) && g.edge_count() == len).then_some(len)
    }
}

/// `G ⋆ (ℋ ⊛ M)` and the subdivision depth `r` of the arc path.
#[derive(Debug, Clone)]
pub struct UniversalImage {
    pub product: StarProduct,
    pub r: usize,
}

pub fn universal_apply(g: &Graph, m: &System) -> Result<UniversalImage> {
    let len = m.arc_path_length().ok_or(Error::ArcNotAPath)?;
    let inner = ostar(&h_gadget(), &m.gadget)?;
    Ok(UniversalImage { product: star(g, &inner), r: len - 1 })
}

/// Counts for one ordered pair of graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub source: usize,
    pub target: usize,
    pub graph_homs: usize,
    pub star_homs: usize,
    pub injective: bool,
    pub surjective: bool,
}

/// Whether the only homomorphisms from the carrier into `G ⋆ M` are the `φ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphReport {
    pub graph: usize,
    pub carrier_homs: usize,
    pub edges: usize,
    pub only_phi: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub pairs: Vec<PairReport>,
    pub graphs: Vec<GraphReport>,
}

impl EmbeddingReport {
    pub fn is_faithful(&self) -> bool {
        self.pairs.iter().all(|p| p.injective)
    }

    pub fn is_full(&self) -> bool {
        self.pairs.iter().all(|p| p.surjective)
    }

    pub fn phi_only(&self) -> bool {
        self.graphs.iter().all(|g| g.only_phi)
    }

    pub fn first_failure(&self) -> Option<String> {
        if let Some(p) = self.pairs.iter().find(|p| !p.injective || !p.surjective) {
            return Some(format!(
                "pair ({}, {}): {} graph homs, {} star homs, injective={}, surjective={}",
                p.source, p.target, p.graph_homs, p.star_homs, p.injective, p.surjective
            ));
        }
        self.graphs.iter().find(|g| !g.only_phi).map(|g| {
            format!("graph {}: {} carrier homs for {} edges", g.graph, g.carrier_homs, g.edges)
        })
    }
}

fn pair_report(i: usize, j: usize, graphs: &[Graph], stars: &[StarProduct], m: &Gadget) -> Result<PairReport> {
    let id: Vec<usize> = (0..m.carrier.size()).collect();
    let homs = homomorphisms(&graphs[i], &graphs[j])?;
    let star_homs: BTreeSet<Vec<usize>> = HomQuery::new(&stars[i].structure, &stars[j].structure).maps()?.into_iter().collect();
    let images: BTreeSet<Vec<usize>> = homs.iter().map(|f| star_bi_on(&stars[i], &stars[j], f, &id, m)).collect();
    Ok(PairReport {
        source: i,
        target: j,
        graph_homs: homs.len(),
        star_homs: star_homs.len(),
        injective: images.len() == homs.len(),
        surjective: images == star_homs,
    })
}

fn graph_report(i: usize, star: &StarProduct, m: &Gadget) -> Result<GraphReport> {
    let homs = HomQuery::new(&m.carrier, &star.structure).maps()?;
    let phis: BTreeSet<Vec<usize>> = star.edges.iter().map(|&(u, v)| star.phi(m, u, v)).collect::<Result<_>>()?;
    let found: BTreeSet<Vec<usize>> = homs.iter().cloned().collect();
    Ok(GraphReport { graph: i, carrier_homs: homs.len(), edges: star.edges.len(), only_phi: found == phis })
}

/// Checks that `G ↦ G ⋆ M` is a full embedding on `graphs`, pair by pair.
pub fn verify_full_embedding(m: &Gadget, graphs: &[Graph]) -> Result<EmbeddingReport> {
    if let Some(i) = graphs.iter().position(|g| !isolated_points(g).is_empty()) {
        return Err(Error::IsolatedPoint(i));
    }
    let stars: Vec<StarProduct> = graphs.iter().map(|g| star(g, m)).collect();
    let n = graphs.len();
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let workers = thread::available_parallelism().map_or(1, |w| w.get()).min(jobs.len().max(1));
    let pairs = parallel_map(&jobs, workers, |&(i, j)| pair_report(i, j, graphs, &stars, m))?;
    let idx: Vec<usize> = (0..n).collect();
    let graph_reports = parallel_map(&idx, workers, |&i| graph_report(i, &stars[i], m))?;
    Ok(EmbeddingReport { pairs, graphs: graph_reports })
}

/// Maps `f` over `items` on `workers` threads, keeping input order.
pub(crate) fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    workers: usize,
    f: impl Fn(&T) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    let workers = workers.max(1);
    let mut slots: BTreeMap<usize, Result<R>> = BTreeMap::new();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    (w..items.len()).step_by(workers).map(|k| (k, f(&items[k]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            slots.extend(h.join().expect("worker panicked"));
        }
    });
    slots.into_values().collect()
}
