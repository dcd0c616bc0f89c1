use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{subdivided_clique, Graph};
use crate::hom::HomQuery;
use crate::labels::Tag;

/// Natives `a_0, …, a_{n-1}` and, for each `i < j`, the path of length
/// `r + 1` from `a_i` to `a_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub natives: Vec<usize>,
    pub paths: BTreeMap<(usize, usize), Vec<usize>>,
}

/// The lexicographically least injective copy of `K_n^r` in `g`.
///
/// Natives are restricted to vertices of degree at least `n − 1`.
pub fn detect_subdivided_clique(g: &Graph, n: usize, r: usize) -> Result<Option<CliqueWitness>> {
    if !g.is_undirected() {
        return Err(Error::NotUndirected);
    }
    let pattern = subdivided_clique(n, r);
    let degree: Vec<usize> = g.neighbors().iter().map(|s| s.len()).collect();
    let hubs: Vec<usize> = (0..g.size()).filter(|&v| degree[v] + 1 >= n).collect();
    let mut q = HomQuery::new(&pattern.graph, g).injective(true);
    for i in 0..n {
        q = q.restrict(i, hubs.iter().copied());
    }
    let Some(f) = q.first()? else { return Ok(None) };
    let mut paths = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut path = vec![f[i]];
            for k in 0..r {
                path.push(f[pattern.tags.get(&Tag::Inner(i, j, k)).expect("subdivision point")]);
            }
            path.push(f[j]);
            paths.insert((i, j), path);
        }
    }
    Ok(Some(CliqueWitness { natives: f[..n].to_vec(), paths }))
}

/// For each `r ≤ max_r`, the largest `n ≤ max_n` with `K_n^r` in `g`.
///
/// Each row stops at the first `n` that fails.
pub fn density_profile(g: &Graph, max_n: usize, max_r: usize) -> Result<Vec<(usize, usize)>> {
    let mut rows = Vec::new();
    for r in 0..=max_r {
        let mut best = 0;
        for n in 1..=max_n {
            if detect_subdivided_clique(g, n, r)?.is_none() {
                break;
            }
            best = n;
        }
        rows.push((r, best));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_injective;

    #[test]
    fn subdivided_cliques_are_found_in_themselves() {
        for n in 1..=4 {
            for r in 0..=2 {
                let k = subdivided_clique(n, r).graph;
                let w = detect_subdivided_clique(&k, n, r).unwrap().unwrap();
                assert_eq!(w.natives.len(), n);
                assert_eq!(w.paths.len(), n * (n - 1) / 2);
                assert!(w.paths.values().all(|p| p.len() == r + 2));
            }
        }
    }

    #[test]
    fn cycles() {
        let c6 = Graph::undirected_cycle(6);
        let w = detect_subdivided_clique(&c6, 3, 1).unwrap().unwrap();
        let all: Vec<usize> = w.natives.iter().copied().chain(w.paths.values().map(|p| p[1])).collect();
        assert!(is_injective(&all));
        for (&(i, j), p) in &w.paths {
            assert_eq!((p[0], p[2]), (w.natives[i], w.natives[j]));
            assert!(c6.has_edge(p[0], p[1]) && c6.has_edge(p[1], p[2]));
        }
        assert_eq!(detect_subdivided_clique(&Graph::undirected_cycle(5), 3, 1).unwrap(), None);
        assert_eq!(detect_subdivided_clique(&Graph::directed_path(2), 2, 0), Err(Error::NotUndirected));
    }

    #[test]
    fn profiles() {
        assert_eq!(density_profile(&Graph::complete(5), 6, 0).unwrap(), vec![(0, 5)]);
        assert_eq!(density_profile(&Graph::undirected_cycle(6), 4, 1).unwrap(), vec![(0, 2), (1, 3)]);
        assert_eq!(density_profile(&Graph::empty(3), 3, 2).unwrap(), vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn detection_is_monotone_under_adding_edges() {
        let c6 = Graph::undirected_cycle(6);
        let mut edges = c6.undirected_edges();
        edges.push((0, 3));
        let h = Graph::from_undirected_edges(6, edges).unwrap();
        assert!(detect_subdivided_clique(&h, 3, 1).unwrap().is_some());
    }
}
