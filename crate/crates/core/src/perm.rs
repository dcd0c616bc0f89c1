//! Permutation equivalence: structures that agree up to reordering each tuple.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::structure::{Structure, Tuple};

/// `permuted[i] = tuple[sigma[i]]`.
pub fn apply_permutation(sigma: &[usize], tuple: &[usize]) -> Tuple {
    sigma.iter().map(|&i| tuple[i]).collect()
}

/// One step of a witness: the tuple of `M` and the permutation sending its
/// image into `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutedTuple {
    pub symbol: String,
    pub tuple: Tuple,
    pub sigma: Vec<usize>,
}

/// A bijection `f` together with one permutation per tuple of `M` such that
/// `m̄ ↦ σ(f(m̄))` is a bijection `R^M → R^N` for every symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermWitness {
    pub bijection: Vec<usize>,
    pub tuples: Vec<PermutedTuple>,
}

impl PermWitness {
    pub fn identity(m: &Structure) -> Self {
        let tuples = m
            .iter_tuples()
            .map(|(s, t)| PermutedTuple { symbol: s.to_string(), tuple: t.clone(), sigma: (0..t.len()).collect() })
            .collect();
        PermWitness { bijection: (0..m.size()).collect(), tuples }
    }

    /// Checks the witness against both structures.
    pub fn verify(&self, m: &Structure, n: &Structure) -> bool {
        if m.signature() != n.signature() || m.size() != n.size() || self.bijection.len() != m.size() {
            return false;
        }
        let mut hit = vec![false; n.size()];
        for &y in &self.bijection {
            if y >= n.size() || std::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        let mut images: BTreeMap<&str, Vec<Tuple>> = BTreeMap::new();
        for step in &self.tuples {
            if !m.contains(&step.symbol, &step.tuple) || !is_permutation(&step.sigma, step.tuple.len()) {
                return false;
            }
            let mapped: Tuple = step.tuple.iter().map(|&x| self.bijection[x]).collect();
            images.entry(step.symbol.as_str()).or_default().push(apply_permutation(&step.sigma, &mapped));
        }
        m.signature().symbols().iter().all(|s| {
            let mut img = images.remove(s.name.as_str()).unwrap_or_default();
            img.sort();
            let before = img.len();
            img.dedup();
            before == m.tuples(&s.name).len() && img.len() == before && img.iter().eq(n.tuples(&s.name).iter())
        })
    }

    /// The witness for `N` against `M`.
    pub fn inverse(&self) -> PermWitness {
        let mut inv = vec![0; self.bijection.len()];
        for (x, &y) in self.bijection.iter().enumerate() {
            inv[y] = x;
        }
        let tuples = self
            .tuples
            .iter()
            .map(|step| {
                let mapped: Tuple = step.tuple.iter().map(|&x| self.bijection[x]).collect();
                let image = apply_permutation(&step.sigma, &mapped);
                let mut back = vec![0; step.sigma.len()];
                for (i, &s) in step.sigma.iter().enumerate() {
                    back[s] = i;
                }
                PermutedTuple { symbol: step.symbol.clone(), tuple: image, sigma: back }
            })
            .collect();
        PermWitness { bijection: inv, tuples }
    }
}

fn is_permutation(sigma: &[usize], k: usize) -> bool {
    let mut seen = vec![false; k];
    sigma.len() == k && sigma.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true))
}

fn sorted(t: &[usize]) -> Tuple {
    let mut s = t.to_vec();
    s.sort_unstable();
    s
}

/// Per symbol and element: number of tuples containing it.
fn degree_profile(m: &Structure) -> Vec<Vec<usize>> {
    let mut deg = vec![vec![0; m.signature().len()]; m.size()];
    for (k, sym) in m.signature().symbols().iter().enumerate() {
        for t in m.tuples(&sym.name) {
            let mut seen = t.clone();
            seen.sort_unstable();
            seen.dedup();
            for x in seen {
                deg[x][k] += 1;
            }
        }
    }
    deg
}

struct Search<'a> {
    m: &'a Structure,
    deg_m: Vec<Vec<usize>>,
    deg_n: Vec<Vec<usize>>,
    /// Sorted contents of the tuples of `N`, per symbol, with multiplicity.
    contents: Vec<BTreeMap<Tuple, usize>>,
    /// Tuples of `M` indexed by their largest entry.
    by_last: Vec<Vec<(usize, Tuple)>>,
    f: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, x: usize) -> bool {
        if x == self.m.size() {
            return self.complete();
        }
        for y in 0..self.used.len() {
            if self.used[y] || self.deg_m[x] != self.deg_n[y] {
                continue;
            }
            self.f[x] = y;
            self.used[y] = true;
            let ok = self.by_last[x].iter().all(|(k, t)| {
                let img: Vec<usize> = t.iter().map(|&z| self.f[z]).collect();
                self.contents[*k].contains_key(&sorted(&img))
            });
            if ok && self.run(x + 1) {
                return true;
            }
            self.used[y] = false;
        }
        false
    }

    fn complete(&self) -> bool {
        self.m.signature().symbols().iter().enumerate().all(|(k, s)| {
            let mut counts: BTreeMap<Tuple, usize> = BTreeMap::new();
            for t in self.m.tuples(&s.name) {
                let img: Vec<usize> = t.iter().map(|&z| self.f[z]).collect();
                *counts.entry(sorted(&img)).or_default() += 1;
            }
            counts == self.contents[k]
        })
    }
}

/// First witness in lexicographic order of bijections, if any.
pub fn permutation_equivalent(m: &Structure, n: &Structure) -> Result<Option<PermWitness>> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch);
    }
    if m.size() != n.size() {
        return Ok(None);
    }
    let sig = m.signature();
    if sig.symbols().iter().any(|s| m.tuples(&s.name).len() != n.tuples(&s.name).len()) {
        return Ok(None);
    }
    let contents = sig
        .symbols()
        .iter()
        .map(|s| {
            let mut c: BTreeMap<Tuple, usize> = BTreeMap::new();
            for t in n.tuples(&s.name) {
                *c.entry(sorted(t)).or_default() += 1;
            }
            c
        })
        .collect();
    let mut by_last = vec![Vec::new(); m.size()];
    for (k, s) in sig.symbols().iter().enumerate() {
        for t in m.tuples(&s.name) {
            if let Some(&last) = t.iter().max() {
                by_last[last].push((k, t.clone()));
            }
        }
    }
    let mut search = Search {
        m,
        deg_m: degree_profile(m),
        deg_n: degree_profile(n),
        contents,
        by_last,
        f: vec![0; m.size()],
        used: vec![false; n.size()],
    };
    if !search.run(0) {
        return Ok(None);
    }
    let f = search.f;
    let mut tuples = Vec::new();
    for s in sig.symbols() {
        let mut pool: BTreeMap<Tuple, Vec<Tuple>> = BTreeMap::new();
        for t in n.tuples(&s.name) {
            pool.entry(sorted(t)).or_default().push(t.clone());
        }
        for t in m.tuples(&s.name) {
            let img: Tuple = t.iter().map(|&z| f[z]).collect();
            let target = pool.get_mut(&sorted(&img)).and_then(|v| (!v.is_empty()).then(|| v.remove(0)));
            let target = target.expect("counts agree");
            tuples.push(PermutedTuple { symbol: s.name.clone(), tuple: t.clone(), sigma: matching_permutation(&img, &target) });
        }
    }
    Ok(Some(PermWitness { bijection: f, tuples }))
}

/// Least `σ` in one-line order with `apply_permutation(σ, from) == to`.
fn matching_permutation(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut used = vec![false; from.len()];
    to.iter()
        .map(|y| {
            let i = (0..from.len()).find(|&i| !used[i] && from[i] == *y).expect("same multiset");
            used[i] = true;
            i
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::structure::Signature;
    use proptest::prelude::*;

    #[test]
    fn identical_structures_have_identity_witness() {
        let m = Graph::directed_cycle(3);
        let w = permutation_equivalent(&m, &m).unwrap().unwrap();
        assert_eq!(w.bijection, vec![0, 1, 2]);
        assert!(w.tuples.iter().all(|t| t.sigma == vec![0, 1]));
        assert!(w.verify(&m, &m));
    }

    #[test]
    fn reversed_edge_needs_a_swap() {
        let m = Graph::from_edges(2, [(0, 1)]).unwrap();
        let n = Graph::from_edges(2, [(1, 0)]).unwrap();
        let w = permutation_equivalent(&m, &n).unwrap().unwrap();
        assert_eq!(w.bijection, vec![0, 1]);
        assert_eq!(w.tuples[0].sigma, vec![1, 0]);
        assert!(w.verify(&m, &n));
    }

    #[test]
    fn edge_and_edgeless_are_not_equivalent() {
        let m = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(permutation_equivalent(&m, &Graph::empty(2)).unwrap(), None);
        let other = Structure::new(Signature::new_unchecked([("R", 3)]), 2);
        assert_eq!(permutation_equivalent(&m, &other), Err(Error::SignatureMismatch));
    }

    #[test]
    fn symmetric_pair_is_not_equivalent_to_single_edge_with_loop() {
        let m = Graph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let n = Graph::from_edges(2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(permutation_equivalent(&m, &n).unwrap(), None);
    }

    fn arb_ternary() -> impl Strategy<Value = (Structure, Vec<usize>, Vec<Vec<usize>>)> {
        (1usize..=5).prop_flat_map(|n| {
            let tuples = proptest::collection::btree_set(proptest::collection::vec(0..n, 3), 0..5);
            let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let sigmas = proptest::collection::vec(Just(vec![0usize, 1, 2]).prop_shuffle(), 5);
            (Just(n), tuples, perm, sigmas).prop_map(|(n, tuples, perm, sigmas)| {
                let m = Structure::from_tuples(Signature::new_unchecked([("R", 3)]), n, tuples.into_iter().map(|t| ("R", t)))
                    .unwrap();
                (m, perm, sigmas)
            })
        })
    }

    proptest! {
        #[test]
        fn equivalence_is_reflexive_and_symmetric((m, perm, sigmas) in arb_ternary()) {
            let refl = permutation_equivalent(&m, &m).unwrap().unwrap();
            prop_assert!(refl.verify(&m, &m));
            let mut n = Structure::new(m.signature().clone(), m.size());
            for (i, t) in m.tuples("R").iter().enumerate() {
                let mapped: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
                n.insert("R", apply_permutation(&sigmas[i], &mapped)).unwrap();
            }
            prop_assume!(n.tuple_count() == m.tuple_count());
            let w = permutation_equivalent(&m, &n).unwrap().unwrap();
            prop_assert!(w.verify(&m, &n));
            prop_assert!(w.inverse().verify(&n, &m));
            let back = permutation_equivalent(&n, &m).unwrap().unwrap();
            prop_assert!(back.verify(&n, &m));
        }
    }
}
