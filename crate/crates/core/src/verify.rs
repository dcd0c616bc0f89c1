//! Finite verification suites; each prints one line per checked instance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::density::{classify_canonical, detect_subdivided_clique, mine_gadget, Canonical};
use crate::fixtures;
use crate::gadget::{assoc_check, gadget_homs, h_gadget, ostar, parallel_map, path_gadget, star, star_bi_on, verify_full_embedding, Gadget, StarProduct};
use crate::gen::{all_graphs_labeled, digraphs, digraphs_up_to, has_no_isolated_points, permutations, random_digraph, rng};
use crate::graph::{arc_graph, is_directed, is_well_founded, subdivided_clique, Graph};
use crate::hom::{homomorphisms, is_homomorphism, is_injective, is_isomorphic, HomQuery};
use crate::labels::Tag;
use crate::logic::{gra_spec, lemma_ppcomponents_check, orient_lpath, reconstruct, PPFormula};
use crate::perm::permutation_equivalent;
use crate::structure::{Signature, Structure};

/// The suites in acceptance order.
pub const SUITES: [&str; 14] = [
    "hom",
    "phi",
    "bifunctor",
    "assoc",
    "arcstar",
    "hcal",
    "fullembed",
    "reconstruct",
    "ppcomp",
    "classify",
    "detect",
    "wellfounded",
    "mine-roundtrip",
    "orient",
];

/// Overrides for the default search bounds of a suite.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub max_vertices: Option<usize>,
    pub max_r: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub instance: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} | expected {} | got {} | {verdict}", self.instance, self.expected, self.got)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub lines: Vec<Line>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Line> {
        self.lines.iter().filter(|l| !l.pass)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}/{l}", self.name)?;
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {} instances, {:.2?}, {verdict}", self.name, self.lines.len(), self.elapsed)
    }
}

#[derive(Default)]
struct Lines(Vec<Line>);

impl Lines {
    fn check(&mut self, instance: impl Into<String>, expected: impl fmt::Display, got: impl fmt::Display) {
        let (expected, got) = (expected.to_string(), got.to_string());
        let pass = expected == got;
        self.0.push(Line { instance: instance.into(), expected, got, pass });
    }

    /// A count of agreeing cases; on disagreement `got` names the first one.
    fn tally(&mut self, instance: impl Into<String>, total: usize, failures: &[String]) {
        let got = match failures.first() {
            None => format!("{total} agree"),
            Some(first) => format!("{} of {total} disagree, first: {first}", failures.len()),
        };
        self.check(instance, format!("{total} agree"), got);
    }
}

/// Runs one suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, params: &Params) -> Option<SuiteReport> {
    let start = Instant::now();
    let mut lines = Lines::default();
    match name {
        "hom" => hom_suite(&mut lines, params),
        "phi" => phi_suite(&mut lines, params),
        "bifunctor" => bifunctor_suite(&mut lines, params),
        "assoc" => assoc_suite(&mut lines),
        "arcstar" => arcstar_suite(&mut lines, params),
        "hcal" => hcal_suite(&mut lines, params),
        "fullembed" => fullembed_suite(&mut lines, params),
        "reconstruct" => reconstruct_suite(&mut lines, params),
        "ppcomp" => ppcomp_suite(&mut lines, params),
        "classify" => classify_suite(&mut lines),
        "detect" => detect_suite(&mut lines, params),
        "wellfounded" => wellfounded_suite(&mut lines, params),
        "mine-roundtrip" => mine_suite(&mut lines, params),
        "orient" => orient_suite(&mut lines),
        _ => return None,
    }
    Some(SuiteReport { name: name.to_string(), lines: lines.0, elapsed: start.elapsed() })
}

pub fn run_all(params: &Params) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, params).expect("listed suites exist")).collect()
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |w| w.get())
}

fn edges_str(g: &Graph) -> String {
    let e: Vec<String> = g.edges().map(|(u, v)| format!("{u}{v}")).collect();
    format!("n{}[{}]", g.size(), e.join(","))
}

/// Every map `M → N` in lexicographic order, filtered by the flags.
pub fn naive_maps(m: &Structure, n: &Structure, strong: bool, injective: bool, pins: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let (k, t) = (m.size(), n.size());
    if k > 0 && t == 0 {
        return Vec::new();
    }
    let mut f = vec![0; k];
    let mut out = Vec::new();
    loop {
        if pins.iter().all(|&(x, y)| f[x] == y)
            && (!injective || is_injective(&f))
            && is_homomorphism(&f, m, n, strong)
        {
            out.push(f.clone());
        }
        let Some(i) = (0..k).rev().find(|&i| f[i] + 1 < t) else { return out };
        f[i] += 1;
        f[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
}

fn hom_suite(lines: &mut Lines, params: &Params) {
    let max = params.max_vertices.unwrap_or(3);
    let mut graphs = vec![Graph::empty(0)];
    graphs.extend(digraphs_up_to(max, true));
    let pairs: Vec<(usize, usize)> = (0..graphs.len()).flat_map(|i| (0..graphs.len()).map(move |j| (i, j))).collect();
    for flags in 0..8u8 {
        let (strong, injective, pin) = (flags & 1 != 0, flags & 2 != 0, flags & 4 != 0);
        let failures: Vec<String> = parallel_map(&pairs, workers(), |&(i, j)| {
            let (m, n) = (graphs[i].as_structure(), graphs[j].as_structure());
            let pins: Vec<(usize, usize)> = if pin && m.size() > 0 && n.size() > 0 { vec![(0, n.size() - 1)] } else { vec![] };
            let want = naive_maps(m, n, strong, injective, &pins);
            let q = HomQuery::new(m, n).strong(strong).injective(injective).pinned(pins.iter().copied());
            let ok = q.maps()? == want
                && q.count()? == want.len()
                && q.exists()? == !want.is_empty()
                && q.first()? == want.first().cloned()
                && q.clone().limit(2).maps()? == want[..want.len().min(2)]
                && q.find_any()?.map_or(want.is_empty(), |f| want.contains(&f));
            Ok((!ok).then(|| format!("{} -> {}", edges_str(&graphs[i]), edges_str(&graphs[j]))))
        })
        .expect("pins are in range")
        .into_iter()
        .flatten()
        .collect();
        lines.tally(format!("strong={strong},injective={injective},pinned={pin}"), pairs.len(), &failures);
    }
}

/// Elements shared by the images of `φ_e` and `φ_e'` for distinct edges.
fn expected_overlap(s: &StarProduct, m: &Gadget, (u, v): (usize, usize), (u2, v2): (usize, usize)) -> BTreeSet<usize> {
    let mut tags: Vec<Tag> = [u, v].into_iter().filter(|x| [u2, v2].contains(x)).map(Tag::Native).collect();
    if u == u2 {
        tags.extend(m.a().iter().map(|&a| Tag::APoint(u, a)));
    }
    if v == v2 {
        tags.extend(m.b().iter().map(|&b| Tag::BPoint(v, b)));
    }
    tags.extend(m.p().iter().map(|&p| Tag::Shared(p)));
    tags.iter().map(|t| s.tags.get(t).expect("tag present")).collect()
}

fn phi_suite(lines: &mut Lines, params: &Params) {
    let graphs = fixtures::graphs(params.max_vertices.unwrap_or(5));
    for (name, m) in fixtures::gadgets() {
        let failures: Vec<String> = parallel_map(&graphs, workers(), |g| {
            let s = star(g, &m);
            let images: Vec<Vec<usize>> = s.edges.iter().map(|&(u, v)| s.phi(&m, u, v)).collect::<crate::Result<_>>()?;
            for (k, f) in images.iter().enumerate() {
                if !is_injective(f) || !is_homomorphism(f, m.carrier(), &s.structure, true) {
                    return Ok(Some(format!("{} edge {:?} not injective strong", edges_str(g), s.edges[k])));
                }
            }
            for a in 0..images.len() {
                let sa: BTreeSet<usize> = images[a].iter().copied().collect();
                for (b, img) in images.iter().enumerate().skip(a + 1) {
                    let got: BTreeSet<usize> = img.iter().copied().filter(|x| sa.contains(x)).collect();
                    if got != expected_overlap(&s, &m, s.edges[a], s.edges[b]) {
                        return Ok(Some(format!("{} edges {:?},{:?} overlap", edges_str(g), s.edges[a], s.edges[b])));
                    }
                }
            }
            Ok(None)
        })
        .unwrap_or_else(|e| vec![Some(e.to_string())])
        .into_iter()
        .flatten()
        .collect();
        lines.tally(name, graphs.len(), &failures);
    }
}

fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

fn bifunctor_suite(lines: &mut Lines, params: &Params) {
    let max = params.max_vertices.unwrap_or(3);
    let graphs: Vec<Graph> = digraphs_up_to(max, false).into_iter().filter(|g| g.edge_count() > 0).collect();
    let (m, n) = (path_gadget(1), fixtures::diamond());
    let rhos = gadget_homs(&m, &n).expect("fixture homs");
    let endos = gadget_homs(&n, &n).expect("fixture homs");
    let sm: Vec<StarProduct> = graphs.iter().map(|g| star(g, &m)).collect();
    let sn: Vec<StarProduct> = graphs.iter().map(|g| star(g, &n)).collect();
    let homs: Vec<Vec<Vec<Vec<usize>>>> =
        graphs.iter().map(|g| graphs.iter().map(|h| homomorphisms(g, h).expect("graphs")).collect()).collect();

    let mut id_fail = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let id: Vec<usize> = (0..g.size()).collect();
        for (s, gadget) in [(&sm[i], &m), (&sn[i], &n)] {
            let rid: Vec<usize> = (0..gadget.carrier().size()).collect();
            let image = star_bi_on(s, s, &id, &rid, gadget);
            if image != (0..s.structure.size()).collect::<Vec<_>>() {
                id_fail.push(edges_str(g));
            }
        }
    }
    lines.tally("identity", 2 * graphs.len(), &id_fail);

    // f ⋆ ρ for every pair, every f and ρ: M → N, and for ρ' ∈ End(N)
    let idx: Vec<usize> = (0..graphs.len()).collect();
    let first: Vec<Vec<Vec<Vec<usize>>>> = parallel_map(&idx, workers(), |&i| {
        Ok((0..graphs.len())
            .map(|j| homs[i][j].iter().flat_map(|f| rhos.iter().map(|r| star_bi_on(&sm[i], &sn[j], f, r, &n))).collect())
            .collect())
    })
    .expect("no errors");
    let second: Vec<Vec<Vec<Vec<usize>>>> = parallel_map(&idx, workers(), |&j| {
        Ok((0..graphs.len())
            .map(|k| homs[j][k].iter().flat_map(|f| endos.iter().map(|r| star_bi_on(&sn[j], &sn[k], f, r, &n))).collect())
            .collect())
    })
    .expect("no errors");

    let mut hom_fail = Vec::new();
    let mut faithful_fail = Vec::new();
    for i in 0..graphs.len() {
        for j in 0..graphs.len() {
            for (imgs, src, domain) in [(&first[i][j], &sm[i], rhos.len()), (&second[i][j], &sn[i], endos.len())] {
                let distinct: BTreeSet<&Vec<usize>> = imgs.iter().collect();
                if distinct.len() != homs[i][j].len() * domain {
                    faithful_fail.push(format!("{} -> {}", edges_str(&graphs[i]), edges_str(&graphs[j])));
                }
                if imgs.iter().any(|h| !is_homomorphism(h, &src.structure, &sn[j].structure, false)) {
                    hom_fail.push(format!("{} -> {}", edges_str(&graphs[i]), edges_str(&graphs[j])));
                }
            }
        }
    }
    let pairs = graphs.len() * graphs.len();
    lines.tally("images are homomorphisms", 2 * pairs, &hom_fail);
    lines.tally("faithful", 2 * pairs, &faithful_fail);

    let triples: Vec<(usize, usize)> = idx.iter().flat_map(|&i| idx.iter().map(move |&j| (i, j))).collect();
    let comp: Vec<(usize, Option<String>)> = parallel_map(&triples, workers(), |&(i, j)| {
        let mut checked = 0;
        for k in 0..graphs.len() {
            for (fi, f) in homs[i][j].iter().enumerate() {
                for (gi, g) in homs[j][k].iter().enumerate() {
                    let fg = compose(f, g);
                    for (ri, r) in rhos.iter().enumerate() {
                        let a = &first[i][j][fi * rhos.len() + ri];
                        for (si, s) in endos.iter().enumerate() {
                            let b = &second[j][k][gi * endos.len() + si];
                            let direct = star_bi_on(&sm[i], &sn[k], &fg, &compose(r, s), &n);
                            checked += 1;
                            if direct != compose(a, b) {
                                return Ok((checked, Some(format!("{} -> {} -> {}", edges_str(&graphs[i]), edges_str(&graphs[j]), edges_str(&graphs[k])))));
                            }
                        }
                    }
                }
            }
        }
        Ok((checked, None))
    })
    .expect("no errors");
    let total = comp.iter().map(|c| c.0).sum();
    let failures: Vec<String> = comp.into_iter().filter_map(|c| c.1).collect();
    lines.tally("composition", total, &failures);
}

fn assoc_suite(lines: &mut Lines) {
    let gs = [("edge", Graph::directed_path(2)), ("P2", Graph::directed_path(3)), ("C3", Graph::directed_cycle(3))];
    let hs = [("H", h_gadget()), ("edge", path_gadget(0))];
    let ms = [("path1", path_gadget(1)), ("ternary-shared", fixtures::ternary_shared())];
    for (gn, g) in &gs {
        for (hn, h) in &hs {
            for (mn, m) in &ms {
                let got = match assoc_check(g, h, m) {
                    Ok(iso) => {
                        let left = star(&Graph::try_from_structure(star(g, h).structure).expect("graph"), m).structure;
                        let right = star(g, &ostar(h, m).expect("simple")).structure;
                        let ok = left.size() == right.size()
                            && is_injective(&iso)
                            && is_homomorphism(&iso, &left, &right, true);
                        if ok { "isomorphism".to_string() } else { "invalid isomorphism".to_string() }
                    }
                    Err(e) => e.to_string(),
                };
                lines.check(format!("{gn}*{hn}*{mn}"), "isomorphism", got);
            }
        }
    }
}

/// `Arc(G ⋆ M)` against `G ⋆ Arc(M)` through the tag bijection.
pub fn arcstar_holds(g: &Graph, m: &Gadget) -> crate::Result<bool> {
    let left_star = star(g, m);
    let left = arc_graph(&left_star.structure)?;
    let arc_m = arc_graph(m.carrier())?;
    let index = |x: usize| arc_m.vertices.binary_search(&x).ok();
    let (alpha, beta) = (index(m.alpha()), index(m.beta()));
    let (Some(alpha), Some(beta)) = (alpha, beta) else { return Ok(false) };
    let am = Gadget::simple(arc_m.graph.clone().into_structure(), alpha, beta)?;
    let right = star(g, &am);
    let mut bij = Vec::with_capacity(left.vertices.len());
    for &x in &left.vertices {
        let tag = match left_star.tags.tag(x) {
            Tag::Native(u) => Tag::Native(u),
            Tag::Inner(u, v, c) => match index(c) {
                Some(i) => Tag::Inner(u, v, i),
                None => return Ok(false),
            },
            _ => return Ok(false),
        };
        match right.tags.get(&tag) {
            Some(y) => bij.push(y),
            None => return Ok(false),
        }
    }
    let mapped: BTreeSet<(usize, usize)> = left.graph.edges().map(|(a, b)| (bij[a], bij[b])).collect();
    let target: BTreeSet<(usize, usize)> = Graph::try_from_structure(right.structure)?.edges().collect();
    Ok(is_injective(&bij) && bij.len() == right.tags.len() && mapped == target)
}

fn arcstar_suite(lines: &mut Lines, params: &Params) {
    let graphs = fixtures::graphs(params.max_vertices.unwrap_or(5));
    for (name, sys) in fixtures::systems() {
        let failures: Vec<String> = parallel_map(&graphs, workers(), |g| {
            Ok((!arcstar_holds(g, sys.gadget())?).then(|| edges_str(g)))
        })
        .unwrap_or_else(|e| vec![Some(e.to_string())])
        .into_iter()
        .flatten()
        .collect();
        lines.tally(name, graphs.len(), &failures);
    }
}

fn hcal_suite(lines: &mut Lines, params: &Params) {
    let max = params.max_vertices.unwrap_or(4);
    let graphs: Vec<Graph> = digraphs_up_to(max, false)
        .into_iter()
        .filter(|g| has_no_isolated_points(g) && is_well_founded(g))
        .collect();
    for r in 0..=params.max_r.unwrap_or(1) {
        let m = ostar(&h_gadget(), &path_gadget(r)).expect("H is simple");
        let rows = parallel_map(&graphs, workers(), |g| {
            let s = star(g, &m);
            let found: BTreeSet<Vec<usize>> = HomQuery::new(m.carrier(), &s.structure).maps()?.into_iter().collect();
            let phis: BTreeSet<Vec<usize>> = s.edges.iter().map(|&(u, v)| s.phi(&m, u, v)).collect::<crate::Result<_>>()?;
            Ok((found.len(), found == phis))
        })
        .expect("edges exist");
        for (g, (count, only_phi)) in graphs.iter().zip(rows) {
            let got = if only_phi { count.to_string() } else { format!("{count} (not all phi)") };
            lines.check(format!("r={r}/{}", edges_str(g)), g.edge_count(), got);
        }
    }
}

fn fullembed_suite(lines: &mut Lines, params: &Params) {
    let max = params.max_vertices.unwrap_or(4);
    let graphs: Vec<Graph> = (2..=max).flat_map(|n| digraphs(n, false)).filter(|g| g.is_connected()).collect();
    match verify_full_embedding(&h_gadget(), &graphs) {
        Ok(report) => {
            let pair_fail = |bad: &dyn Fn(&crate::gadget::PairReport) -> bool| -> Vec<String> {
                report
                    .pairs
                    .iter()
                    .filter(|p| bad(p))
                    .map(|p| format!("{} -> {}: {} vs {}", edges_str(&graphs[p.source]), edges_str(&graphs[p.target]), p.graph_homs, p.star_homs))
                    .collect()
            };
            lines.tally("faithful", report.pairs.len(), &pair_fail(&|p| !p.injective));
            lines.tally("full", report.pairs.len(), &pair_fail(&|p| !p.surjective));
            let counts: Vec<String> = report
                .pairs
                .iter()
                .filter(|p| p.graph_homs != p.star_homs)
                .map(|p| format!("{} -> {}", edges_str(&graphs[p.source]), edges_str(&graphs[p.target])))
                .collect();
            lines.tally("hom counts equal", report.pairs.len(), &counts);
        }
        Err(e) => lines.check("embedding", "report", e),
    }
}

fn reconstruct_suite(lines: &mut Lines, params: &Params) {
    let graphs = digraphs_up_to(params.max_vertices.unwrap_or(4), true);
    let spec = gra_spec();
    let failures: Vec<String> = parallel_map(&graphs, workers(), |g| {
        let back = reconstruct(&spec, g)?;
        Ok((!is_isomorphic(&back, g)?).then(|| edges_str(g)))
    })
    .unwrap_or_else(|e| vec![Some(e.to_string())])
    .into_iter()
    .flatten()
    .collect();
    lines.tally("gra", graphs.len(), &failures);
}

/// Edge sets on `n` variables with at most `max_edges` edges, one per
/// isomorphism class preserving the set of the first `k` variables.
/// Reordering free variables is covered by taking every tuple `ā`.
fn formulas(n: usize, k: usize, max_edges: u32) -> Vec<PPFormula> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| (0..k).all(|i| p[i] < k)).collect();
    let image = |mask: u64, p: &[usize]| -> u64 {
        slots.iter().enumerate().filter(|&(s, _)| mask >> s & 1 == 1).map(|(_, &(u, v))| 1u64 << (p[u] * n + p[v])).sum()
    };
    (0..1u64 << slots.len())
        .filter(|m| m.count_ones() <= max_edges)
        .filter(|&m| perms.iter().all(|p| image(m, p) >= m))
        .map(|m| {
            let edges = slots.iter().enumerate().filter(|&(s, _)| m >> s & 1 == 1).map(|(_, &e)| e);
            let g = Graph::from_edges(n, edges).expect("in range");
            PPFormula::new(g.into_structure(), (0..k).collect()).expect("free prefix")
        })
        .collect()
}

fn tuples(size: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| (0..size).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    out
}

fn ppcomp_suite(lines: &mut Lines, params: &Params) {
    let structures = digraphs_up_to(params.max_vertices.unwrap_or(3), true);
    let phis: Vec<PPFormula> = (1..=4).flat_map(|n| (0..=n).flat_map(move |k| formulas(n, k, 3))).collect();
    let results: Vec<(usize, Vec<String>)> = parallel_map(&phis, workers(), |phi| {
        let mut count = 0;
        let mut bad = Vec::new();
        for a in &structures {
            for abar in tuples(a.size(), phi.free().len()) {
                count += 1;
                if !lemma_ppcomponents_check(a, &abar, phi)? {
                    bad.push(format!("{} at {abar:?} in {}", edges_str(&Graph::try_from_structure(phi.canonical().clone())?), edges_str(a)));
                }
            }
        }
        Ok((count, bad))
    })
    .expect("arities match");
    let total = results.iter().map(|r| r.0).sum();
    let failures: Vec<String> = results.into_iter().flat_map(|r| r.1).collect();
    lines.tally(format!("exhaustive ({} formulas)", phis.len()), total, &failures);

    let mut rng = rng(params.seed);
    let mut failures = Vec::new();
    let sig = Signature::graph();
    for i in 0..500 {
        let size = rng.gen_range(4..=6);
        let a = random_digraph(&mut rng, size, 0.35, true);
        let vars = rng.gen_range(5..=7);
        let conjuncts = rng.gen_range(3..=6);
        let mut body = Structure::new(sig.clone(), vars);
        for _ in 0..conjuncts {
            let t = vec![rng.gen_range(0..vars), rng.gen_range(0..vars)];
            body.insert("E", t).expect("in range");
        }
        let mut order: Vec<usize> = (0..vars).collect();
        order.shuffle(&mut rng);
        let free = order[..rng.gen_range(0..=3)].to_vec();
        let abar: Vec<usize> = free.iter().map(|_| rng.gen_range(0..a.size())).collect();
        let phi = PPFormula::new(body, free).expect("distinct free variables");
        if !lemma_ppcomponents_check(&a, &abar, &phi).expect("arities match") {
            failures.push(format!("random #{i}"));
        }
    }
    lines.tally(format!("random (seed {})", params.seed), 500, &failures);
}

fn classify_suite(lines: &mut Lines) {
    let show = |s: BTreeSet<Canonical>| format!("{:?}", s.iter().map(|c| c.number()).collect::<Vec<_>>());
    let n = 5;
    type Colouring = Box<dyn Fn(usize, usize) -> (usize, usize)>;
    let cases: [(&str, Colouring, Vec<u8>); 5] = [
        ("constant", Box::new(|_, _| (0, 0)), vec![1]),
        ("first", Box::new(|i, _| (i, 0)), vec![2]),
        ("second", Box::new(|_, j| (0, j)), vec![3]),
        ("injective", Box::new(|i, j| (i, j)), vec![4]),
        ("engineered", Box::new(|i, j| if (i, j) == (2, 3) { (0, 1) } else { (i, j) }), vec![]),
    ];
    for (name, chi, want) in cases {
        let got = classify_canonical(n, chi).map_or_else(|e| e.to_string(), show);
        lines.check(name, format!("{want:?}"), got);
    }
}

/// Whether some injective map sends every edge of `p` onto an edge of `g`.
pub fn naive_injective_embeds(p: &Graph, g: &Graph) -> bool {
    fn go(p: &Graph, g: &Graph, f: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if f.len() == p.size() {
            return p.edges().all(|(u, v)| g.has_edge(f[u], f[v]));
        }
        for y in 0..g.size() {
            if !used[y] {
                used[y] = true;
                f.push(y);
                let found = go(p, g, f, used);
                f.pop();
                used[y] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    p.size() <= g.size() && go(p, g, &mut Vec::new(), &mut vec![false; g.size()])
}

fn random_undirected(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::from_undirected_edges(n, edges).expect("in range")
}

fn detect_suite(lines: &mut Lines, params: &Params) {
    let max_r = params.max_r.unwrap_or(2);
    for n in 1..=4 {
        for r in 0..=max_r {
            let host = subdivided_clique(n, r).graph;
            let got = detect_subdivided_clique(&host, n, r).map_or_else(|e| e.to_string(), |w| w.is_some().to_string());
            lines.check(format!("K_{n}^{r}"), true, got);
        }
    }
    for (len, want) in [(6, true), (5, false)] {
        let got = detect_subdivided_clique(&Graph::undirected_cycle(len), 3, 1).map_or_else(|e| e.to_string(), |w| w.is_some().to_string());
        lines.check(format!("C_{len} n=3 r=1"), want, got);
    }

    let max = params.max_vertices.unwrap_or(7);
    let mut rng = rng(params.seed);
    let mut hosts: Vec<Graph> = (3..=max).map(Graph::undirected_cycle).collect();
    hosts.extend((1..=max).map(Graph::complete));
    for _ in 0..60 {
        let n = rng.gen_range(1..=max);
        let p = rng.gen_range(0.2..0.9);
        hosts.push(random_undirected(&mut rng, n, p));
    }
    let patterns: Vec<(usize, usize)> = (1..=4).flat_map(|n| (0..=max_r).map(move |r| (n, r))).collect();
    let mut total = 0;
    let mut failures = Vec::new();
    for g in &hosts {
        for &(n, r) in &patterns {
            let p = subdivided_clique(n, r).graph;
            if p.size() > g.size() {
                continue;
            }
            total += 1;
            let want = naive_injective_embeds(&p, g);
            let got = detect_subdivided_clique(g, n, r).expect("undirected host");
            let valid = got.as_ref().is_none_or(|w| {
                let distinct: BTreeSet<usize> = w.natives.iter().chain(w.paths.values().flatten()).copied().collect();
                distinct.len() == p.size() && w.paths.values().all(|path| path.windows(2).all(|e| g.has_edge(e[0], e[1])))
            });
            if got.is_some() != want || !valid {
                failures.push(format!("K_{n}^{r} in {}", edges_str(g)));
            }
        }
    }
    lines.tally(format!("oracle (seed {})", params.seed), total, &failures);
}

/// Acyclicity by depth-first search with three colours.
pub fn dfs_acyclic(g: &Graph) -> bool {
    fn visit(u: usize, out: &[Vec<usize>], colour: &mut [u8]) -> bool {
        colour[u] = 1;
        for &v in &out[u] {
            if colour[v] == 1 || (colour[v] == 0 && !visit(v, out, colour)) {
                return false;
            }
        }
        colour[u] = 2;
        true
    }
    let out = g.out_neighbors();
    let mut colour = vec![0u8; g.size()];
    (0..g.size()).all(|u| colour[u] != 0 || visit(u, &out, &mut colour))
}

fn wellfounded_suite(lines: &mut Lines, params: &Params) {
    let max = params.max_vertices.unwrap_or(4);
    let all: Vec<Graph> = (0..=max).flat_map(all_graphs_labeled).collect();
    let failures: Vec<String> = all.iter().filter(|g| is_well_founded(g) != dfs_acyclic(g)).map(edges_str).collect();
    lines.tally(format!("all labeled digraphs up to {max} vertices"), all.len(), &failures);

    let mut rng = rng(params.seed);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.05..0.4);
        let g = random_digraph(&mut rng, n, p, true);
        if is_well_founded(&g) != dfs_acyclic(&g) {
            failures.push(edges_str(&g));
        }
    }
    lines.tally(format!("random (seed {})", params.seed), 1000, &failures);
}

fn mine_suite(lines: &mut Lines, params: &Params) {
    let max_m = params.max_vertices.unwrap_or(4);
    for (name, seed, r) in fixtures::miner_seeds() {
        for m in 3..=max_m {
            let host = star(&Graph::complete(m), &seed).structure;
            let out = mine_gadget(&host, m, r);
            let got = match out.mined {
                None => format!("no gadget ({})", out.stages.last().map_or("", String::as_str)),
                Some(mined) => {
                    let s = star(&Graph::complete(m), &mined.gadget).structure;
                    match HomQuery::new(&s, &host).injective(true).exists() {
                        Ok(true) if mined.verified_m >= m => "embeds".to_string(),
                        Ok(true) => format!("embeds but verified_m = {}", mined.verified_m),
                        Ok(false) => "no injective hom".to_string(),
                        Err(e) => e.to_string(),
                    }
                }
            };
            lines.check(format!("{name} m={m} r={r}"), "embeds", got);
        }
    }
}

fn orient_suite(lines: &mut Lines) {
    for (name, path) in fixtures::lpaths() {
        let o = orient_lpath(&path);
        let mut problems = Vec::new();
        if !is_directed(&o.structure) {
            problems.push("not directed");
        }
        if !o.witness.verify(path.carrier(), &o.structure) {
            problems.push("witness rejected");
        }
        match permutation_equivalent(path.carrier(), &o.structure) {
            Ok(Some(w)) if w.verify(path.carrier(), &o.structure) => {}
            _ => problems.push("not permutation equivalent"),
        }
        match arc_graph(&o.structure) {
            Ok(arc) => {
                let p = path.p();
                let on_p: BTreeSet<usize> = p.iter().copied().collect();
                let index: BTreeMap<usize, usize> = arc.vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
                let want: BTreeSet<(usize, usize)> = p.windows(2).map(|e| (index.get(&e[0]).copied().unwrap_or(usize::MAX), index.get(&e[1]).copied().unwrap_or(usize::MAX))).collect();
                let got: BTreeSet<(usize, usize)> = arc.graph.edges().collect();
                if arc.vertices.iter().copied().collect::<BTreeSet<_>>() != on_p || got != want {
                    problems.push("arc graph is not the path");
                }
            }
            Err(_) => problems.push("no arc graph"),
        }
        let got = if problems.is_empty() { "oriented".to_string() } else { problems.join(", ") };
        lines.check(name, "oriented", got);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_maps_are_lexicographic() {
        let e = Graph::directed_path(2);
        let maps = naive_maps(&e, &Graph::complete(3), false, false, &[]);
        assert_eq!(maps.len(), 6);
        assert!(maps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(naive_maps(&Graph::empty(0), &Graph::empty(0), true, true, &[]), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn dfs_oracle_on_small_cases() {
        assert!(dfs_acyclic(&Graph::directed_path(4)));
        assert!(!dfs_acyclic(&Graph::directed_cycle(3)));
        assert!(!dfs_acyclic(&Graph::from_edges(1, [(0, 0)]).unwrap()));
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(run_suite("nope", &Params::default()).is_none());
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["classify", "orient", "assoc"] {
            let report = run_suite(name, &Params::default()).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn failing_lines_are_reported() {
        let mut l = Lines::default();
        l.tally("x", 3, &["bad".to_string()]);
        let report = SuiteReport { name: "t".into(), lines: l.0, elapsed: Duration::ZERO };
        assert!(!report.passed());
        assert!(report.to_string().contains("FAIL"));
    }
}
