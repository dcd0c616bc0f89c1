//! Exhaustive and seeded generators of small graphs and structures.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::structure::{Signature, Structure, Tuple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

fn edges_of(n: usize, mask: u64, slots: &[(usize, usize)]) -> Graph {
    let edges = slots.iter().enumerate().filter(|&(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
    Graph::from_edges(n, edges).expect("slots are in range")
}

/// Keeps `mask` iff no vertex permutation yields a smaller mask.
fn is_canonical(mask: u64, slot_index: &[Vec<Option<usize>>], slots: &[(usize, usize)], perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|pi| {
        let mut image = 0u64;
        for (k, &(u, v)) in slots.iter().enumerate() {
            if mask >> k & 1 == 1 {
                image |= 1 << slot_index[pi[u]][pi[v]].expect("slot set is permutation closed");
            }
        }
        image >= mask
    })
}

fn enumerate(n: usize, slots: Vec<(usize, usize)>, admissible: impl Fn(u64) -> bool) -> Vec<Graph> {
    let mut slot_index = vec![vec![None; n]; n];
    for (k, &(u, v)) in slots.iter().enumerate() {
        slot_index[u][v] = Some(k);
    }
    let perms = permutations(n);
    (0..1u64 << slots.len())
        .filter(|&m| admissible(m) && is_canonical(m, &slot_index, &slots, &perms))
        .map(|m| edges_of(n, m, &slots))
        .collect()
}

/// Digraphs on exactly `n` vertices, one per isomorphism class.
pub fn digraphs(n: usize, loops: bool) -> Vec<Graph> {
    assert!(n <= 4, "exhaustive digraph enumeration is limited to 4 vertices");
    let slots: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| loops || u != v).collect();
    enumerate(n, slots, |_| true)
}

/// Digraphs on at most `max_n` vertices (and at least one), up to isomorphism.
pub fn digraphs_up_to(max_n: usize, loops: bool) -> Vec<Graph> {
    (1..=max_n).flat_map(|n| digraphs(n, loops)).collect()
}

/// Loopless digraphs without 2-cycles on exactly `n` vertices, up to isomorphism.
pub fn oriented_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 5, "exhaustive oriented enumeration is limited to 5 vertices");
    let slots: Vec<_> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|&(u, v)| u != v).collect();
    let pairs: Vec<(u64, u64)> = slots
        .iter()
        .enumerate()
        .filter(|&(_, &(u, v))| u < v)
        .map(|(k, &(u, v))| (1 << k, 1 << slots.iter().position(|&e| e == (v, u)).expect("reverse slot")))
        .collect();
    let mut slot_index = vec![vec![None; n]; n];
    for (k, &(u, v)) in slots.iter().enumerate() {
        slot_index[u][v] = Some(k);
    }
    let perms = permutations(n);
    let mut out = Vec::new();
    // each unordered pair is absent, forward or backward
    let total = 3usize.pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut mask = 0u64;
        for &(fwd, bwd) in &pairs {
            match code % 3 {
                1 => mask |= fwd,
                2 => mask |= bwd,
                _ => {}
            }
            code /= 3;
        }
        if is_canonical(mask, &slot_index, &slots, &perms) {
            out.push(edges_of(n, mask, &slots));
        }
    }
    out.sort_by_key(|g| (g.edge_count(), g.edge_list()));
    out
}

pub fn has_no_isolated_points(g: &Graph) -> bool {
    crate::graph::isolated_points(g).is_empty()
}

/// Digraph on `n` vertices with each ordered pair present with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64, loops: bool) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| loops || u != v)
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, edges).expect("entries are in range")
}

/// Random structure with `tuples` draws per symbol; duplicates collapse.
pub fn random_structure(rng: &mut impl Rng, signature: &Signature, size: usize, tuples: usize) -> Structure {
    let mut s = Structure::new(signature.clone(), size);
    if size == 0 {
        return s;
    }
    for sym in signature.symbols() {
        let drawn: BTreeSet<Tuple> = (0..tuples).map(|_| (0..sym.arity).map(|_| rng.gen_range(0..size)).collect()).collect();
        for t in drawn {
            s.insert(&sym.name, t).expect("entries are in range");
        }
    }
    s
}

/// Every `{E:2}` structure on `size` elements, not reduced by isomorphism.
pub fn all_graphs_labeled(size: usize) -> Vec<Graph> {
    let slots: Vec<_> = (0..size).flat_map(|u| (0..size).map(move |v| (u, v))).collect();
    (0..1u64 << slots.len()).map(|m| edges_of(size, m, &slots)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_isomorphic;

    #[test]
    fn class_counts_match_known_sequences() {
        // digraphs up to iso, with and without loops
        assert_eq!([1, 2, 3, 4].map(|n| digraphs(n, false).len()), [1, 3, 16, 218]);
        assert_eq!([1, 2, 3].map(|n| digraphs(n, true).len()), [2, 10, 104]);
        assert_eq!([1, 2, 3, 4, 5].map(|n| oriented_graphs(n).len()), [1, 2, 7, 42, 582]);
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        let gs = digraphs(3, true);
        for (i, a) in gs.iter().enumerate() {
            for b in &gs[i + 1..] {
                assert!(!is_isomorphic(a, b).unwrap());
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_digraph(&mut rng(7), 6, 0.3, true);
        let b = random_digraph(&mut rng(7), 6, 0.3, true);
        assert_eq!(a, b);
        let sig = Signature::new([("R", 3)]).unwrap();
        let s = random_structure(&mut rng(1), &sig, 4, 5);
        assert!(s.is_valid() && s.tuple_count() <= 5);
    }
}
