use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::gaifman;
use crate::perm::{apply_permutation, PermWitness, PermutedTuple};
use crate::structure::{Structure, Tuple};

/// One related tuple of a path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Step {
    pub rel: String,
    pub tuple: Tuple,
}

/// A structure whose related tuples form a chain of steps through the
/// joints `p(0), …, p(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPath {
    carrier: Structure,
    p: Vec<usize>,
    steps: Vec<Step>,
}

impl LPath {
    /// Checks the path conditions for the given steps.
    pub fn new(carrier: Structure, p: Vec<usize>, steps: Vec<Step>) -> Option<Self> {
        valid(&carrier, &p, &steps).then_some(LPath { carrier, p, steps })
    }

    pub fn carrier(&self) -> &Structure {
        &self.carrier
    }

    pub fn p(&self) -> &[usize] {
        &self.p
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Elements that are not joints, ascending.
    pub fn non_joints(&self) -> Vec<usize> {
        (0..self.carrier.size()).filter(|x| !self.p.contains(x)).collect()
    }
}

fn injective_in(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

fn valid(m: &Structure, p: &[usize], steps: &[Step]) -> bool {
    let n = steps.len();
    if n == 0 || p.len() != n + 1 || !injective_in(p, m.size()) {
        return false;
    }
    if m.tuple_count() != n || steps.iter().any(|s| !m.contains(&s.rel, &s.tuple)) {
        return false;
    }
    let distinct: BTreeSet<&Tuple> = steps.iter().map(|s| &s.tuple).collect();
    if distinct.len() != n {
        return false;
    }
    let holds = |i: usize, x: usize| steps[i].tuple.contains(&x);
    if !holds(0, p[0]) || !holds(n - 1, p[n]) {
        return false;
    }
    if n >= 2 && (holds(1, p[0]) || holds(n - 2, p[n])) {
        return false;
    }
    if (1..n).any(|i| !holds(i - 1, p[i]) || !holds(i, p[i])) {
        return false;
    }
    let mut covered = vec![false; m.size()];
    for s in steps {
        for &x in &s.tuple {
            covered[x] = true;
        }
    }
    covered.iter().all(|&c| c)
}

/// The step decomposition of `(M, p)`, if it is a path.
///
/// Step `i` must contain `p(i-1)` and `p(i)`; candidates are tried by symbol
/// name, then tuple, and the first valid decomposition is returned.
pub fn is_lpath(m: &Structure, p: &[usize]) -> Option<LPath> {
    if p.len() < 2 || !injective_in(p, m.size()) || m.tuple_count() != p.len() - 1 {
        return None;
    }
    let mut all: Vec<Step> = m.iter_tuples().map(|(r, t)| Step { rel: r.to_string(), tuple: t.clone() }).collect();
    all.sort();
    let mut chosen = Vec::new();
    let mut used = vec![false; all.len()];
    fn go(m: &Structure, p: &[usize], all: &[Step], used: &mut [bool], chosen: &mut Vec<Step>) -> bool {
        let i = chosen.len();
        if i + 1 == p.len() {
            return valid(m, p, chosen);
        }
        for k in 0..all.len() {
            let s = &all[k];
            if used[k] || !s.tuple.contains(&p[i]) || !s.tuple.contains(&p[i + 1]) {
                continue;
            }
            used[k] = true;
            chosen.push(s.clone());
            if go(m, p, all, used, chosen) {
                return true;
            }
            chosen.pop();
            used[k] = false;
        }
        false
    }
    go(m, p, &all, &mut used, &mut chosen).then(|| LPath { carrier: m.clone(), p: p.to_vec(), steps: chosen })
}

/// A path type together with its inclusion into the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathType {
    pub path: LPath,
    /// `inclusion[x]` is the host element behind `x`, ascending.
    pub inclusion: Vec<usize>,
}

/// All path types for a graph path, in the order of the per-step choices.
pub fn path_types(n: &Structure, gpath: &[usize]) -> Result<Vec<PathType>> {
    path_types_limited(n, gpath, None)
}

/// As [`path_types`], stopping after `limit` types.
///
/// Each step picks a symbol (signature order) and a tuple of it (ascending)
/// containing both consecutive vertices. Choices that are not paths are
/// skipped. Reorderings of a chosen tuple give the same type and are not
/// enumerated.
pub fn path_types_limited(n: &Structure, gpath: &[usize], limit: Option<usize>) -> Result<Vec<PathType>> {
    if gpath.len() < 2 || !injective_in(gpath, n.size()) {
        return Err(Error::NotAGaifmanPath);
    }
    let g = gaifman(n);
    if gpath.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::NotAGaifmanPath);
    }
    let candidates: Vec<Vec<Step>> = gpath
        .windows(2)
        .map(|w| {
            n.signature()
                .symbols()
                .iter()
                .flat_map(|s| {
                    n.tuples(&s.name)
                        .iter()
                        .filter(|t| t.contains(&w[0]) && t.contains(&w[1]))
                        .map(|t| Step { rel: s.name.clone(), tuple: t.clone() })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<&Step> = Vec::new();
    enumerate(n, gpath, &candidates, &mut chosen, &mut out, limit);
    Ok(out)
}

fn enumerate<'a>(
    n: &Structure,
    gpath: &[usize],
    candidates: &'a [Vec<Step>],
    chosen: &mut Vec<&'a Step>,
    out: &mut Vec<PathType>,
    limit: Option<usize>,
) -> bool {
    if limit.is_some_and(|l| out.len() >= l) {
        return false;
    }
    let i = chosen.len();
    if i == candidates.len() {
        if let Some(t) = build_type(n, gpath, chosen) {
            out.push(t);
        }
        return limit.is_none_or(|l| out.len() < l);
    }
    for s in &candidates[i] {
        if chosen.iter().any(|c| c.tuple == s.tuple) {
            continue;
        }
        chosen.push(s);
        let go_on = enumerate(n, gpath, candidates, chosen, out, limit);
        chosen.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn build_type(n: &Structure, gpath: &[usize], chosen: &[&Step]) -> Option<PathType> {
    let inclusion: Vec<usize> = chosen.iter().flat_map(|s| s.tuple.iter().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let index: BTreeMap<usize, usize> = inclusion.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let steps: Vec<Step> = chosen
        .iter()
        .map(|s| Step { rel: s.rel.clone(), tuple: s.tuple.iter().map(|x| index[x]).collect() })
        .collect();
    let mut carrier = Structure::new(n.signature().clone(), inclusion.len());
    for s in &steps {
        carrier.insert(&s.rel, s.tuple.clone()).ok()?;
    }
    let p = gpath.iter().map(|x| index.get(x).copied()).collect::<Option<Vec<_>>>()?;
    LPath::new(carrier, p, steps).map(|path| PathType { path, inclusion })
}

/// A directed structure permutation equivalent to a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Oriented {
    pub structure: Structure,
    pub witness: PermWitness,
}

/// Reorders each step so that its two joints come first, in path order,
/// keeping the remaining entries in place order.
pub fn orient_lpath(path: &LPath) -> Oriented {
    let mut structure = Structure::new(path.carrier.signature().clone(), path.carrier.size());
    let mut tuples = Vec::new();
    for (i, s) in path.steps.iter().enumerate() {
        let (from, to) = (path.p[i], path.p[i + 1]);
        let a = s.tuple.iter().position(|&x| x == from).expect("step holds its joints");
        let b = s.tuple.iter().position(|&x| x == to).expect("step holds its joints");
        let sigma: Vec<usize> = [a, b].into_iter().chain((0..s.tuple.len()).filter(|&k| k != a && k != b)).collect();
        structure.insert(&s.rel, apply_permutation(&sigma, &s.tuple)).expect("same symbols and domain");
        tuples.push(PermutedTuple { symbol: s.rel.clone(), tuple: s.tuple.clone(), sigma });
    }
    let witness = PermWitness { bijection: (0..path.carrier.size()).collect(), tuples };
    Oriented { structure, witness }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{arc_graph, is_directed, Graph};
    use crate::hom::{is_homomorphism, is_injective};
    use crate::structure::Signature;

    fn ternary_chain() -> Structure {
        let sig = Signature::new_unchecked([("R", 3), ("S", 3)]);
        Structure::from_tuples(sig, 5, [("R", vec![0, 1, 3]), ("S", vec![1, 2, 4])]).unwrap()
    }

    #[test]
    fn graph_paths_are_lpaths() {
        let g = Graph::directed_path(3);
        let l = is_lpath(&g, &[0, 1, 2]).unwrap();
        let tuples: Vec<_> = l.steps().iter().map(|s| s.tuple.clone()).collect();
        assert_eq!(tuples, vec![vec![0, 1], vec![1, 2]]);
        assert!(is_lpath(&Graph::directed_cycle(2), &[0, 1]).is_none());
        assert!(is_lpath(&g, &[0, 2]).is_none());
    }

    #[test]
    fn ternary_chain_is_an_lpath() {
        let m = ternary_chain();
        let l = is_lpath(&m, &[0, 1, 2]).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.non_joints(), vec![3, 4]);
        let bad = Structure::from_tuples(m.signature().clone(), 5, [("R", vec![0, 1, 2]), ("S", vec![1, 2, 4])]).unwrap();
        assert!(is_lpath(&bad, &[0, 1, 3]).is_none());
    }

    #[test]
    fn path_types_follow_the_host() {
        let g = Graph::directed_path(4);
        let types = path_types(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(types.len(), 1);
        assert_eq!(types[0].path.carrier(), g.as_structure());
        let sig = Signature::new_unchecked([("R", 2), ("S", 2)]);
        let n = Structure::from_tuples(sig, 2, [("R", vec![0, 1]), ("S", vec![0, 1])]).unwrap();
        let types = path_types(&n, &[0, 1]).unwrap();
        assert_eq!(types.len(), 2);
        assert_eq!(types[0].path.steps()[0].rel, "R");
        assert_eq!(path_types_limited(&n, &[0, 1], Some(1)).unwrap().len(), 1);
        assert_eq!(path_types(&g, &[0, 2]).unwrap_err(), Error::NotAGaifmanPath);
    }

    #[test]
    fn path_types_of_a_ternary_host() {
        let m = ternary_chain();
        let types = path_types(&m, &[0, 1, 2]).unwrap();
        assert_eq!(types.len(), 1);
        let t = &types[0];
        assert!(is_lpath(t.path.carrier(), t.path.p()).is_some());
        assert!(is_injective(&t.inclusion));
        assert!(is_homomorphism(&t.inclusion, t.path.carrier(), &m, false));
    }

    #[test]
    fn orientation_moves_joints_forward() {
        let sig = Signature::new_unchecked([("Q", 4)]);
        let m = Structure::from_tuples(sig, 4, [("Q", vec![2, 1, 0, 3])]).unwrap();
        let l = is_lpath(&m, &[0, 1]).unwrap();
        let o = orient_lpath(&l);
        assert!(o.structure.contains("Q", &[0, 1, 2, 3]));
        assert!(is_directed(&o.structure));
        assert!(o.witness.verify(&m, &o.structure));
        let g = Graph::directed_path(3);
        let o = orient_lpath(&is_lpath(&g, &[0, 1, 2]).unwrap());
        assert_eq!(&o.structure, g.as_structure());
        assert!(o.witness.tuples.iter().all(|t| t.sigma == vec![0, 1]));
    }

    #[test]
    fn oriented_chain_has_the_joint_path_as_arc_graph() {
        let m = ternary_chain();
        let sig = m.signature().clone();
        let m = Structure::from_tuples(sig, 5, [("R", vec![3, 1, 0]), ("S", vec![1, 4, 2])]).unwrap();
        let l = is_lpath(&m, &[0, 1, 2]).unwrap();
        let o = orient_lpath(&l);
        let arc = arc_graph(&o.structure).unwrap();
        assert_eq!(arc.vertices, vec![0, 1, 2]);
        assert_eq!(arc.graph.edge_list(), vec![(0, 1), (1, 2)]);
    }
}
