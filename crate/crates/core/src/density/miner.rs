use std::collections::{BTreeMap, BTreeSet};

use super::canonical::{classify_canonical, compatible_subset, greedy_compatible, Canonical};
use super::detect::{detect_subdivided_clique, CliqueWitness};
use crate::gadget::{make_gadget, Gadget, Role, System};
use crate::graph::gaifman;
use crate::hom::{find_pointed_isomorphism, is_injective, HomQuery};
use crate::labels::Tag;
use crate::logic::{orient_lpath, path_types_limited, LPath, Oriented, PathType};
use crate::structure::Structure;

type Pair = (usize, usize);

/// A gadget recovered from a dense host, with the embeddings it was read from.
#[derive(Debug, Clone)]
pub struct MinedGadget {
    /// The common path type with its marks; `α = p(0)`, `β = p(r)`.
    pub gadget: Gadget,
    pub path: LPath,
    pub oriented: Oriented,
    /// The gadget on the oriented carrier.
    pub system: System,
    /// Retained witness indices.
    pub indices: Vec<usize>,
    /// `f_{i,j}: M → N` for every retained pair.
    pub maps: BTreeMap<Pair, Vec<usize>>,
    pub verified_m: usize,
}

#[derive(Debug, Clone)]
pub struct MineOutcome {
    pub mined: Option<MinedGadget>,
    /// One line per stage, ending at the stage that failed if any.
    pub stages: Vec<String>,
}

/// Where `φ_(i,j)` sends `x` in the product with the tournament on indices.
fn symbolic(g: &Gadget, (i, j): Pair, x: usize) -> Tag {
    match g.role(x) {
        Role::Alpha => Tag::Native(i),
        Role::Beta => Tag::Native(j),
        Role::A => Tag::APoint(i, x),
        Role::B => Tag::BPoint(j, x),
        Role::P => Tag::Shared(x),
        Role::Inner => Tag::Inner(i, j, x),
    }
}

fn pair_glue_ok(g: &Gadget, e: Pair, e2: Pair, maps: &BTreeMap<Pair, Vec<usize>>) -> bool {
    let (Some(f), Some(h)) = (maps.get(&e), maps.get(&e2)) else { return false };
    let n = g.carrier().size();
    if f.len() != n || h.len() != n {
        return false;
    }
    (0..n).all(|x| (0..n).all(|y| (f[x] == h[y]) == (symbolic(g, e, x) == symbolic(g, e2, y))))
}

/// For all retained pairs `e, e′` and all `x, y`:
/// `f_e(x) = f_e′(y)` iff `φ_e(x) = φ_e′(y)` in the product with the
/// tournament `i < j`. Each map is also checked to be injective.
pub fn injective_glue_check(g: &Gadget, indices: &[usize], maps: &BTreeMap<Pair, Vec<usize>>) -> bool {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let pairs: Vec<Pair> = idx.iter().flat_map(|&i| idx.iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect();
    pairs.iter().all(|e| maps.get(e).is_some_and(|f| is_injective(f)))
        && pairs.iter().all(|&e| pairs.iter().all(|&e2| pair_glue_ok(g, e, e2, maps)))
}

/// Reads a gadget off a copy of `K_n^r` in the Gaifman graph of `host`.
pub fn mine_gadget(host: &Structure, n: usize, r: usize) -> MineOutcome {
    let mut stages = Vec::new();
    let mined = mine(host, n, r, &mut stages);
    MineOutcome { mined, stages }
}

fn pairs_over(idx: &[usize]) -> Vec<Pair> {
    idx.iter().flat_map(|&i| idx.iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect()
}

fn mine(host: &Structure, n: usize, r: usize, stages: &mut Vec<String>) -> Option<MinedGadget> {
    let witness = match detect_subdivided_clique(&gaifman(host), n, r) {
        Ok(Some(w)) => w,
        _ => {
            stages.push(format!("detect: no K_{n}^{r} in the Gaifman graph"));
            return None;
        }
    };
    stages.push(format!("detect: natives {:?}", witness.natives));
    if n < 3 {
        stages.push(format!("detect: {n} indices, need at least 3"));
        return None;
    }

    let mut types: BTreeMap<Pair, PathType> = BTreeMap::new();
    for (&e, path) in &witness.paths {
        if let Some(t) = path_types_limited(host, path, Some(1)).ok().and_then(|mut v| v.pop()) {
            types.insert(e, t);
        }
    }
    stages.push(format!("path types: {} of {} pairs", types.len(), witness.paths.len()));
    if types.is_empty() {
        return None;
    }

    let mut classes: Vec<Vec<Pair>> = Vec::new();
    for (&e, t) in &types {
        let joins = classes.iter().position(|c| pointed_iso(&types[&c[0]].path, &t.path).is_some());
        match joins {
            Some(k) => classes[k].push(e),
            None => classes.push(vec![e]),
        }
    }
    let largest = classes.iter().map(Vec::len).max().unwrap_or(0);
    let class = classes.iter().find(|c| c.len() == largest).expect("at least one class").clone();
    let rep = types[&class[0]].path.clone();
    let mut maps: BTreeMap<Pair, Vec<usize>> = BTreeMap::new();
    for e in &class {
        let t = &types[e];
        let sigma = pointed_iso(&rep, &t.path).expect("same class");
        maps.insert(*e, sigma.iter().map(|&y| t.inclusion[y]).collect());
    }
    stages.push(format!("group: {} classes, largest has {} pairs", classes.len(), class.len()));

    let failed = repair(host, &witness, &rep, &mut maps);
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let bad: Vec<Pair> = pairs_over(&idx).into_iter().filter(|e| failed.contains(e)).collect();
        if bad.is_empty() {
            break;
        }
        let worst = *idx
            .iter()
            .max_by_key(|&&i| (bad.iter().filter(|e| e.0 == i || e.1 == i).count(), i))
            .expect("nonempty");
        idx.retain(|&i| i != worst);
    }
    stages.push(format!("repair: {} pairs unrepaired, indices {:?}", failed.len(), idx));
    if idx.len() < 3 {
        return None;
    }

    let joints: BTreeSet<usize> = rep.p().iter().copied().collect();
    let (mut a, mut b, mut p, mut h) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for x in rep.non_joints() {
        let chi = |s: usize, t: usize| maps[&(idx[s], idx[t])][x];
        let found = classify_canonical(idx.len(), chi).expect("at least 3 indices");
        match found.first() {
            Some(Canonical::Constant) => p.push(x),
            Some(Canonical::First) => a.push(x),
            Some(Canonical::Second) => b.push(x),
            _ => h.push(x),
        }
    }
    stages.push(format!("classify: P {p:?}, A {a:?}, B {b:?}, H' {h:?}"));

    let last = *rep.p().last().expect("paths have joints");
    let interior: Vec<usize> = joints.iter().copied().filter(|&x| x != rep.p()[0] && x != last).collect();
    let checked: Vec<usize> = h.iter().copied().chain(interior).collect();
    let fs: BTreeMap<Pair, Vec<usize>> = pairs_over(&(0..idx.len()).collect::<Vec<_>>())
        .into_iter()
        .map(|(s, t)| ((s, t), checked.iter().map(|&x| maps[&(idx[s], idx[t])][x]).collect()))
        .collect();
    match compatible_subset(idx.len(), &fs) {
        Ok(keep) => {
            idx = keep.into_iter().map(|s| idx[s]).collect();
            stages.push(format!("compatible: indices {idx:?}"));
        }
        Err(e) => stages.push(format!("compatible: {e}; keeping {idx:?}")),
    }

    let gadget = match make_gadget(rep.carrier().clone(), rep.p()[0], last, a.clone(), b.clone(), p.clone()) {
        Ok(g) => g,
        Err(e) => {
            stages.push(format!("gadget: {e}"));
            return None;
        }
    };
    let pos: Vec<usize> = idx.clone();
    let greedy = greedy_compatible(pos.len(), |(s, t), (u, v)| {
        pair_glue_ok(&gadget, (pos[s], pos[t]), (pos[u], pos[v]), &maps)
    });
    let mut chosen: Vec<usize> = greedy.into_iter().map(|s| pos[s]).collect();
    if chosen.len() < 3 || !injective_glue_check(&gadget, &chosen, &maps) {
        chosen = best_subset(&gadget, &pos, &maps).unwrap_or_default();
    }
    if chosen.len() < 3 {
        stages.push("glue: no 3 indices pass the gluing check".into());
        return None;
    }
    stages.push(format!("glue: verified on indices {chosen:?}"));

    let oriented = orient_lpath(&rep);
    let sys = make_gadget(oriented.structure.clone(), rep.p()[0], last, a, b, p).and_then(System::new);
    let system = match sys {
        Ok(s) => s,
        Err(e) => {
            stages.push(format!("orient: {e}"));
            return None;
        }
    };
    stages.push("orient: system built".into());
    let retained: BTreeMap<Pair, Vec<usize>> =
        pairs_over(&chosen).into_iter().map(|e| (e, maps[&e].clone())).collect();
    Some(MinedGadget {
        gadget,
        path: rep,
        oriented,
        system,
        verified_m: chosen.len(),
        indices: chosen,
        maps: retained,
    })
}

fn pointed_iso(m: &LPath, n: &LPath) -> Option<Vec<usize>> {
    if m.p().len() != n.p().len() {
        return None;
    }
    let pins: Vec<Pair> = m.p().iter().copied().zip(n.p().iter().copied()).collect();
    find_pointed_isomorphism(m.carrier(), n.carrier(), &pins).ok().flatten()
}

/// Embeds the representative along each pair it did not match, keeping the
/// non-endpoint elements off natives and off other pairs' paths. Returns
/// the pairs that could not be embedded.
fn repair(host: &Structure, w: &CliqueWitness, rep: &LPath, maps: &mut BTreeMap<Pair, Vec<usize>>) -> BTreeSet<Pair> {
    let mut failed = BTreeSet::new();
    let (first, last) = (rep.p()[0], *rep.p().last().expect("joints"));
    for (&e, path) in &w.paths {
        if maps.contains_key(&e) {
            continue;
        }
        let mut avoid: BTreeSet<usize> = w.natives.iter().copied().collect();
        for (&e2, other) in &w.paths {
            if e2 != e {
                avoid.extend(&other[1..other.len() - 1]);
            }
        }
        let allowed: Vec<usize> = (0..host.size()).filter(|y| !avoid.contains(y)).collect();
        let mut q = HomQuery::new(rep.carrier(), host).injective(true).pin(first, path[0]).pin(last, path[path.len() - 1]);
        for x in (0..rep.carrier().size()).filter(|&x| x != first && x != last) {
            q = q.restrict(x, allowed.iter().copied());
        }
        match q.first() {
            Ok(Some(f)) => {
                maps.insert(e, f);
            }
            _ => {
                failed.insert(e);
            }
        }
    }
    failed
}

/// The largest subset of at least 3 indices passing the gluing check, first
/// in lexicographic order among those of that size.
fn best_subset(g: &Gadget, idx: &[usize], maps: &BTreeMap<Pair, Vec<usize>>) -> Option<Vec<usize>> {
    let k = idx.len();
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << k)
        .filter(|m| m.count_ones() >= 3)
        .map(|m| (0..k).filter(|&i| m >> i & 1 == 1).map(|i| idx[i]).collect())
        .collect();
    subsets.sort_by(|x: &Vec<usize>, y| y.len().cmp(&x.len()).then_with(|| x.cmp(y)));
    subsets.into_iter().find(|s| injective_glue_check(g, s, maps))
}
