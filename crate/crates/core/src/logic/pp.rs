use crate::error::{Error, Result};
use crate::graph::gaifman;
use crate::hom::HomQuery;
use crate::structure::Structure;

/// A pp formula as its canonical structure with the free variables marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPFormula {
    canonical: Structure,
    free: Vec<usize>,
}

impl PPFormula {
    /// Free entries must be distinct elements of the canonical structure.
    pub fn new(canonical: Structure, free: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; canonical.size()];
        for &x in &free {
            if x >= canonical.size() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidFreeTuple);
            }
        }
        Ok(PPFormula { canonical, free })
    }

    pub fn canonical(&self) -> &Structure {
        &self.canonical
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }
}

/// `A ⊨ φ(ā)`: a homomorphism of the canonical structure sending `x̄` to `ā`.
pub fn pp_satisfies(a: &Structure, abar: &[usize], phi: &PPFormula) -> Result<bool> {
    if abar.len() != phi.free.len() {
        return Err(Error::ArityMismatch { expected: phi.free.len(), got: abar.len() });
    }
    HomQuery::new(&phi.canonical, a).pinned(phi.free.iter().copied().zip(abar.iter().copied())).exists()
}

/// One pointed substructure per connected component of the Gaifman graph
/// with the free points removed. Each keeps the free points first, so its
/// free tuple is `0..k`; tuples inside `x̄` appear in every component.
pub fn pp_components(phi: &PPFormula) -> Vec<PPFormula> {
    let m = &phi.canonical;
    let k = phi.free.len();
    let mut is_free = vec![false; m.size()];
    for &x in &phi.free {
        is_free[x] = true;
    }
    let adj = gaifman(m).neighbors();
    let mut comp = vec![usize::MAX; m.size()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in (0..m.size()).filter(|&x| !is_free[x]) {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        comp[start] = id;
        let mut i = 0;
        while i < members.len() {
            for &y in &adj[members[i]] {
                if !is_free[y] && comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        groups.push(members);
    }
    if groups.is_empty() {
        groups.push(Vec::new());
    }
    groups
        .into_iter()
        .map(|g| {
            let elements: Vec<usize> = phi.free.iter().copied().chain(g).collect();
            PPFormula { canonical: m.induced(&elements), free: (0..k).collect() }
        })
        .collect()
}

/// Direct satisfaction agrees with satisfaction of every component.
pub fn lemma_ppcomponents_check(a: &Structure, abar: &[usize], phi: &PPFormula) -> Result<bool> {
    let direct = pp_satisfies(a, abar, phi)?;
    let mut split = true;
    for c in pp_components(phi) {
        split &= pp_satisfies(a, abar, &c)?;
    }
    Ok(direct == split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::structure::Signature;
    use proptest::prelude::*;

    fn exists_edge() -> PPFormula {
        PPFormula::new(Graph::directed_path(2).into_structure(), vec![0]).unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        let phi = exists_edge();
        assert!(pp_satisfies(&Graph::directed_cycle(2), &[0], &phi).unwrap());
        assert!(!pp_satisfies(&Graph::empty(2), &[0], &phi).unwrap());
        let trivial = PPFormula::new(Graph::empty(2).into_structure(), vec![0, 1]).unwrap();
        assert!(pp_satisfies(&Graph::empty(1), &[0, 0], &trivial).unwrap());
        assert_eq!(
            pp_satisfies(&Graph::empty(1), &[0], &trivial),
            Err(Error::ArityMismatch { expected: 2, got: 1 })
        );
        assert_eq!(PPFormula::new(Graph::empty(2).into_structure(), vec![1, 1]), Err(Error::InvalidFreeTuple));
    }

    #[test]
    fn components_split_at_free_points() {
        let fork = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap().into_structure();
        let phi = PPFormula::new(fork, vec![0]).unwrap();
        let comps = pp_components(&phi);
        assert_eq!(comps.len(), 2);
        for c in &comps {
            assert_eq!(c.canonical().size(), 2);
            assert_eq!(c.free(), &[0]);
        }
        let qf = PPFormula::new(Graph::from_edges(2, [(0, 1)]).unwrap().into_structure(), vec![0, 1]).unwrap();
        let comps = pp_components(&qf);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].canonical(), qf.canonical());
        let chain = PPFormula::new(Graph::directed_path(3).into_structure(), vec![0]).unwrap();
        assert_eq!(pp_components(&chain).len(), 1);
    }

    #[test]
    fn free_tuples_attach_to_every_component() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 3)]).unwrap().into_structure();
        let phi = PPFormula::new(g, vec![0, 1]).unwrap();
        let comps = pp_components(&phi);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.canonical().contains("E", &[0, 1])));
    }

    fn arb_triple() -> impl Strategy<Value = (Structure, Vec<usize>, PPFormula)> {
        let sig = Signature::graph();
        (1usize..=4, 1usize..=6, 0usize..=2).prop_flat_map(move |(na, nv, k)| {
            let k = k.min(nv);
            let sig = sig.clone();
            (
                proptest::collection::btree_set((0..na, 0..na), 0..8),
                proptest::collection::btree_set((0..nv, 0..nv), 0..5),
                proptest::collection::vec(0..na, k),
                Just((0..nv).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(move |(ea, ev, abar, order)| {
                    let a = Structure::from_tuples(sig.clone(), na, ea.into_iter().map(|(x, y)| ("E", vec![x, y]))).unwrap();
                    let m = Structure::from_tuples(sig.clone(), nv, ev.into_iter().map(|(x, y)| ("E", vec![x, y]))).unwrap();
                    let free = order[..abar.len()].to_vec();
                    (a, abar, PPFormula::new(m, free).unwrap())
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn component_satisfaction_agrees((a, abar, phi) in arb_triple()) {
            prop_assert!(lemma_ppcomponents_check(&a, &abar, &phi).unwrap());
        }
    }
}
