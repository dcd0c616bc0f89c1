//! All acceptance criteria, run in sequence against their time budgets.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starcalc::density::detect_subdivided_clique;
use starcalc::graph::{is_well_founded, subdivided_clique};
use starcalc::verify::{run_suite, Params, SUITES};
use starcalc::{Graph, HomQuery, Signature, Structure};

const BUDGETS: [u64; 14] = [10, 30, 60, 60, 30, 60, 120, 60, 60, 1, 30, 10, 120, 5];

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Structure {
    let mut s = Structure::new(Signature::graph(), n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                s.insert("E", vec![u, v]).unwrap();
            }
        }
    }
    s
}

fn edge_set(s: &Structure) -> BTreeSet<(usize, usize)> {
    s.tuples("E").iter().map(|t| (t[0], t[1])).collect()
}

/// Brute force over all `|N|^|M|` maps.
fn oracle_maps(m: &Structure, n: &Structure, strong: bool, injective: bool, pin: Option<(usize, usize)>) -> Vec<Vec<usize>> {
    let (em, en) = (edge_set(m), edge_set(n));
    let mut all: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..m.size() {
        all = all.into_iter().flat_map(|f| (0..n.size()).map(move |y| [f.clone(), vec![y]].concat())).collect();
    }
    all.retain(|f| {
        let preserves = em.iter().all(|&(u, v)| en.contains(&(f[u], f[v])));
        let reflects = !strong
            || (0..m.size()).all(|u| (0..m.size()).all(|v| !en.contains(&(f[u], f[v])) || em.contains(&(u, v))));
        let distinct = !injective || f.iter().collect::<BTreeSet<_>>().len() == f.len();
        let pinned = pin.is_none_or(|(x, y)| f[x] == y);
        preserves && reflects && distinct && pinned
    });
    all
}

fn hom_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..300 {
        let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
        let m = random_graph(&mut rng, a, 0.4);
        let n = random_graph(&mut rng, b, 0.5);
        for flags in 0..8 {
            let (strong, injective) = (flags & 1 != 0, flags & 2 != 0);
            let pin = (flags & 4 != 0 && m.size() > 0 && n.size() > 0).then(|| (m.size() - 1, 0));
            let mut q = HomQuery::new(&m, &n).strong(strong).injective(injective);
            if let Some((x, y)) = pin {
                q = q.pin(x, y);
            }
            if q.maps().unwrap() != oracle_maps(&m, &n, strong, injective, pin) {
                return Err(format!("pair {i}, flags {flags}"));
            }
        }
    }
    Ok(())
}

fn injective_copy(p: &Graph, g: &Graph) -> bool {
    let pe: Vec<(usize, usize)> = p.edges().collect();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(f) = stack.pop() {
        if f.len() == p.size() {
            if pe.iter().all(|&(u, v)| g.has_edge(f[u], f[v])) {
                return true;
            }
            continue;
        }
        for y in (0..g.size()).filter(|y| !f.contains(y)) {
            stack.push([f.clone(), vec![y]].concat());
        }
    }
    false
}

fn detect_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..80 {
        let n = rng.gen_range(2..=7);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect();
        let g = Graph::from_undirected_edges(n, edges).unwrap();
        for (cn, r) in [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1), (4, 0)] {
            let p = subdivided_clique(cn, r).graph;
            if p.size() > g.size() {
                continue;
            }
            let got = detect_subdivided_clique(&g, cn, r).unwrap().is_some();
            if got != injective_copy(&p, &g) {
                return Err(format!("host {k}: K_{cn}^{r}"));
            }
        }
    }
    let named = [
        (Graph::undirected_cycle(6), 3, 1, true),
        (Graph::undirected_cycle(5), 3, 1, false),
        (subdivided_clique(4, 2).graph, 4, 2, true),
    ];
    for (g, n, r, want) in named {
        if detect_subdivided_clique(&g, n, r).unwrap().is_some() != want {
            return Err(format!("K_{n}^{r} expected {want}"));
        }
    }
    Ok(())
}

fn has_cycle(g: &Graph) -> bool {
    fn dfs(u: usize, g: &Graph, on_stack: &mut Vec<bool>, done: &mut Vec<bool>) -> bool {
        on_stack[u] = true;
        for v in 0..g.size() {
            if g.has_edge(u, v) && (on_stack[v] || (!done[v] && dfs(v, g, on_stack, done))) {
                return true;
            }
        }
        on_stack[u] = false;
        done[u] = true;
        false
    }
    let n = g.size();
    let (mut on_stack, mut done) = (vec![false; n], vec![false; n]);
    (0..n).any(|u| !done[u] && dfs(u, g, &mut on_stack, &mut done))
}

fn wellfounded_oracle() -> Result<(), String> {
    for n in 0..=4usize {
        for mask in 0u32..1 << (n * n) {
            let edges = (0..n * n).filter(|b| mask >> b & 1 == 1).map(|b| (b / n, b % n));
            let g = Graph::from_edges(n, edges).unwrap();
            if is_well_founded(&g) == has_cycle(&g) {
                return Err(format!("n={n} mask={mask}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..1000 {
        let n = rng.gen_range(1..=8);
        let g = Graph::try_from_structure(random_graph(&mut rng, n, 0.15)).unwrap();
        if is_well_founded(&g) == has_cycle(&g) {
            return Err(format!("random {i}"));
        }
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (k, name) in SUITES.iter().enumerate() {
        let start = Instant::now();
        let report = run_suite(name, &Params::default()).expect("suite exists");
        let oracle = match *name {
            "hom" => hom_oracle(),
            "detect" => detect_oracle(),
            "wellfounded" => wellfounded_oracle(),
            _ => Ok(()),
        };
        let elapsed = start.elapsed();
        let budget = Duration::from_secs(BUDGETS[k]);
        let mut notes = Vec::new();
        if !report.passed() {
            notes.extend(report.failures().take(3).map(|l| l.to_string()));
        }
        if let Err(e) = &oracle {
            notes.push(format!("oracle: {e}"));
        }
        if elapsed >= budget {
            notes.push(format!("over budget {budget:?}"));
        }
        let pass = notes.is_empty();
        // bypasses the test harness capture so the table is always shown
        let _ = writeln!(
            std::io::stderr(),
            "{:<15} {} ({:.2?} of {:?}, {} instances){}",
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            report.lines.len(),
            if pass { String::new() } else { format!(": {}", notes.join("; ")) }
        );
        if !pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failing: {failed:?}");
}
