//! Named gadgets, systems, paths and graphs shared by tests, suites and the CLI.

use crate::gadget::{h_gadget, make_gadget, path_gadget, Gadget, System};
use crate::gen::{has_no_isolated_points, oriented_graphs};
use crate::graph::Graph;
use crate::logic::{is_lpath, LPath};
use crate::structure::{Signature, Structure};

fn ternary(symbols: &[&str], size: usize, tuples: &[(&str, [usize; 3])]) -> Structure {
    let sig = Signature::new_unchecked(symbols.iter().map(|&s| (s, 3)));
    Structure::from_tuples(sig, size, tuples.iter().map(|&(s, t)| (s, t.to_vec()))).expect("fixture is well formed")
}

/// `R(α, c, a)`, `S(c, β, b)` with `A = {a}`, `B = {b}`.
pub fn ternary_marked() -> Gadget {
    let m = ternary(&["R", "S"], 5, &[("R", [0, 2, 3]), ("S", [2, 1, 4])]);
    make_gadget(m, 0, 1, [3], [4], []).expect("fixture marks are valid")
}

/// `R(α, c, p)`, `R(c, β, p)` with `P = {p}`.
pub fn ternary_shared() -> Gadget {
    let m = ternary(&["R"], 4, &[("R", [0, 2, 3]), ("R", [2, 1, 3])]);
    make_gadget(m, 0, 1, [], [], [3]).expect("fixture marks are valid")
}

/// `R(α, β, p)` with `P = {p}`.
pub fn ternary_edge_shared() -> Gadget {
    let m = ternary(&["R"], 3, &[("R", [0, 1, 2])]);
    make_gadget(m, 0, 1, [], [], [2]).expect("fixture marks are valid")
}

/// `R(α, β, a, b, p)` carrying one point of every mark.
pub fn quinary_all_marks() -> Gadget {
    let sig = Signature::new_unchecked([("R", 5)]);
    let m = Structure::from_tuples(sig, 5, [("R", vec![0, 1, 2, 3, 4])]).expect("fixture is well formed");
    make_gadget(m, 0, 1, [2], [3], [4]).expect("fixture marks are valid")
}

/// `α → c → β` twice over, with `c ∈ {2, 3}`.
pub fn diamond() -> Gadget {
    let g = Graph::from_edges(4, [(0, 2), (2, 1), (0, 3), (3, 1)]).expect("fixed graph");
    Gadget::simple(g.into_structure(), 0, 1).expect("alpha differs from beta")
}

pub fn gadgets() -> Vec<(&'static str, Gadget)> {
    vec![
        ("H", h_gadget()),
        ("path0", path_gadget(0)),
        ("path1", path_gadget(1)),
        ("path2", path_gadget(2)),
        ("diamond", diamond()),
        ("ternary-marked", ternary_marked()),
        ("ternary-shared", ternary_shared()),
        ("ternary-edge-shared", ternary_edge_shared()),
        ("quinary-all-marks", quinary_all_marks()),
    ]
}

pub fn gadget(name: &str) -> Option<Gadget> {
    gadgets().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}

/// Gadgets whose carrier is directed with `α, β` on the arc graph; all but
/// `diamond` have a path as arc graph.
pub fn systems() -> Vec<(&'static str, System)> {
    gadgets()
        .into_iter()
        .filter(|(n, _)| *n != "H")
        .map(|(n, g)| (n, System::new(g).expect("fixture is a system")))
        .collect()
}

/// Named paths; several are not yet oriented.
pub fn lpaths() -> Vec<(&'static str, LPath)> {
    let binary = Signature::graph();
    let mk = |m: Structure, p: &[usize]| is_lpath(&m, p).expect("fixture is a path");
    vec![
        ("edge", mk(Graph::directed_path(2).into_structure(), &[0, 1])),
        ("dipath3", mk(Graph::directed_path(3).into_structure(), &[0, 1, 2])),
        (
            "zigzag",
            mk(Structure::from_tuples(binary.clone(), 4, [("E", vec![1, 0]), ("E", vec![1, 2]), ("E", vec![3, 2])]).unwrap(), &[0, 1, 2, 3]),
        ),
        ("ternary-chain", mk(ternary(&["R", "S"], 5, &[("R", [0, 1, 3]), ("S", [1, 2, 4])]), &[0, 1, 2])),
        ("ternary-marked", mk(ternary_marked().carrier().clone(), &[0, 2, 1])),
        ("ternary-scrambled", mk(ternary(&["R", "S"], 5, &[("R", [3, 1, 0]), ("S", [4, 1, 2])]), &[0, 1, 2])),
        ("ternary-reversed", mk(ternary(&["R"], 4, &[("R", [3, 1, 0]), ("R", [2, 1, 3])]), &[0, 1, 2])),
        ("ternary-long", mk(ternary(&["R", "S"], 7, &[("R", [4, 0, 1]), ("S", [2, 5, 1]), ("R", [3, 2, 6])]), &[0, 1, 2, 3])),
    ]
}

/// Seed gadgets for the miner round trip with the subdivision depth of their path.
pub fn miner_seeds() -> Vec<(&'static str, Gadget, usize)> {
    vec![
        ("path0", path_gadget(0), 0),
        ("path1", path_gadget(1), 1),
        ("ternary-marked", ternary_marked(), 1),
        ("ternary-edge-shared", ternary_edge_shared(), 0),
    ]
}

/// Oriented graphs on `1..=max_n` vertices without isolated points, up to isomorphism.
pub fn graphs(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(oriented_graphs).filter(has_no_isolated_points).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::orient_lpath;

    #[test]
    fn systems_have_path_arc_graphs() {
        for (name, s) in systems() {
            assert_eq!(s.arc_path_length().is_some(), name != "diamond", "{name}");
        }
    }

    #[test]
    fn every_named_gadget_is_found() {
        for (name, g) in gadgets() {
            assert_eq!(gadget(name), Some(g));
        }
        assert_eq!(gadget("nope"), None);
    }

    #[test]
    fn most_paths_need_reordering() {
        let moved = lpaths().iter().filter(|(_, l)| orient_lpath(l).structure != *l.carrier()).count();
        assert!(moved >= 4);
    }

    #[test]
    fn graph_fixture_counts() {
        // one edge; then three two-edge graphs and two tournaments on three vertices
        assert_eq!(graphs(3).len(), 6);
        assert!(graphs(5).iter().all(has_no_isolated_points));
    }
}
