//! Homomorphism search between finite structures.
//!
//! The engine is a backtracking search over bitset domains with forward
//! checking on every constraint touching the variable just assigned.
//! Strong (reflecting) homomorphisms are checked on tuples once all their
//! entries are assigned. Results are always reported in lexicographic order
//! of the mapping.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structure::{Structure, Tuple};

/// A homomorphism together with its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hom {
    source: Arc<Structure>,
    target: Arc<Structure>,
    mapping: Vec<usize>,
}

impl Hom {
    /// Checks that `mapping` is a homomorphism.
    pub fn new(source: Arc<Structure>, target: Arc<Structure>, mapping: Vec<usize>) -> Result<Self> {
        if !is_homomorphism(&mapping, &source, &target, false) {
            return Err(Error::NotAHom);
        }
        Ok(Hom { source, target, mapping })
    }

    pub fn identity(m: Arc<Structure>) -> Self {
        let mapping = (0..m.size()).collect();
        Hom { source: m.clone(), target: m, mapping }
    }

    pub fn source(&self) -> &Arc<Structure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Structure> {
        &self.target
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn into_mapping(self) -> Vec<usize> {
        self.mapping
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.mapping)
    }
}

/// `g ∘ f`.
pub fn compose(f: &Hom, g: &Hom) -> Result<Hom> {
    if !Arc::ptr_eq(&f.target, &g.source) && f.target != g.source {
        return Err(Error::ObjectMismatch);
    }
    let mapping = f.mapping.iter().map(|&x| g.mapping[x]).collect();
    Ok(Hom { source: f.source.clone(), target: g.target.clone(), mapping })
}

pub fn is_injective(f: &[usize]) -> bool {
    let mut seen = HashSet::with_capacity(f.len());
    f.iter().all(|y| seen.insert(*y))
}

/// Tuple-wise check of `m̄ ∈ R^M ⟹ f(m̄) ∈ R^N`, and of the converse when
/// `strong` is set.
pub fn is_homomorphism(f: &[usize], m: &Structure, n: &Structure, strong: bool) -> bool {
    if f.len() != m.size() || f.iter().any(|&y| y >= n.size()) || m.signature() != n.signature() {
        return false;
    }
    for (name, t) in m.iter_tuples() {
        let img: Vec<usize> = t.iter().map(|&x| f[x]).collect();
        if !n.contains(name, &img) {
            return false;
        }
    }
    if !strong {
        return true;
    }
    let mut pre = vec![Vec::new(); n.size()];
    for (x, &y) in f.iter().enumerate() {
        pre[y].push(x);
    }
    for (name, t) in n.iter_tuples() {
        let mut ok = true;
        for_each_preimage(t, &pre, |cand| {
            ok = m.contains(name, cand);
            ok
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Calls `visit` on every tuple whose pointwise image is `t`, stopping when
/// it returns false.
fn for_each_preimage(t: &[usize], pre: &[Vec<usize>], mut visit: impl FnMut(&[usize]) -> bool) {
    if t.iter().any(|&y| pre[y].is_empty()) {
        return;
    }
    let mut idx = vec![0; t.len()];
    let mut cand: Vec<usize> = t.iter().map(|&y| pre[y][0]).collect();
    loop {
        if !visit(&cand) {
            return;
        }
        let mut k = t.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < pre[t[k]].len() {
                cand[k] = pre[t[k]][idx[k]];
                break;
            }
            idx[k] = 0;
            cand[k] = pre[t[k]][0];
        }
    }
}

/// A homomorphism query with mode flags.
#[derive(Debug, Clone)]
pub struct HomQuery<'a> {
    source: &'a Structure,
    target: &'a Structure,
    strong: bool,
    injective: bool,
    pinned: BTreeMap<usize, usize>,
    restrict: BTreeMap<usize, Vec<usize>>,
    limit: Option<usize>,
}

impl<'a> HomQuery<'a> {
    pub fn new(source: &'a Structure, target: &'a Structure) -> Self {
        HomQuery {
            source,
            target,
            strong: false,
            injective: false,
            pinned: BTreeMap::new(),
            restrict: BTreeMap::new(),
            limit: None,
        }
    }

    pub fn strong(mut self, yes: bool) -> Self {
        self.strong = yes;
        self
    }

    pub fn injective(mut self, yes: bool) -> Self {
        self.injective = yes;
        self
    }

    pub fn pin(mut self, x: usize, y: usize) -> Self {
        self.pinned.insert(x, y);
        self
    }

    pub fn pinned(mut self, pins: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.pinned.extend(pins);
        self
    }

    /// Restricts the image of `x` to `values`; repeated calls intersect.
    pub fn restrict(mut self, x: usize, values: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(prev) = self.restrict.get(&x) {
            v.retain(|y| prev.binary_search(y).is_ok());
        }
        self.restrict.insert(x, v);
        self
    }

    pub fn limit(mut self, n: usize) -> Self {
        self.limit = Some(n);
        self
    }

    pub fn source(&self) -> &Structure {
        self.source
    }

    pub fn target(&self) -> &Structure {
        self.target
    }

    /// All solutions as bare mappings, lexicographically ordered.
    pub fn maps(&self) -> Result<Vec<Vec<usize>>> {
        let engine = Engine::new(self)?;
        let mut out = Vec::new();
        match self.limit {
            Some(0) => {}
            Some(k) => engine.run(Order::Index, |f| {
                out.push(f.to_vec());
                out.len() < k
            }),
            None => {
                engine.run(Order::Fewest, |f| {
                    out.push(f.to_vec());
                    true
                });
                out.sort_unstable();
            }
        }
        Ok(out)
    }

    pub fn solve(&self) -> Result<Vec<Hom>> {
        let source = Arc::new(self.source.clone());
        let target = Arc::new(self.target.clone());
        Ok(self
            .maps()?
            .into_iter()
            .map(|mapping| Hom { source: source.clone(), target: target.clone(), mapping })
            .collect())
    }

    pub fn count(&self) -> Result<usize> {
        if self.limit.is_some() {
            return Ok(self.maps()?.len());
        }
        let engine = Engine::new(self)?;
        let mut n = 0;
        engine.run(Order::Fewest, |_| {
            n += 1;
            true
        });
        Ok(n)
    }

    /// Counts up to `cap` solutions and stops.
    pub fn count_up_to(&self, cap: usize) -> Result<usize> {
        let engine = Engine::new(self)?;
        let mut n = 0;
        if cap > 0 {
            engine.run(Order::Fewest, |_| {
                n += 1;
                n < cap
            });
        }
        Ok(n)
    }

    pub fn exists(&self) -> Result<bool> {
        Ok(self.find_any()?.is_some())
    }

    /// Some solution, found by the fastest search order.
    pub fn find_any(&self) -> Result<Option<Vec<usize>>> {
        if self.limit == Some(0) {
            return Ok(None);
        }
        let engine = Engine::new(self)?;
        let mut found = None;
        engine.run(Order::Fewest, |f| {
            found = Some(f.to_vec());
            false
        });
        Ok(found)
    }

    /// The lexicographically least solution.
    pub fn first(&self) -> Result<Option<Vec<usize>>> {
        let engine = Engine::new(self)?;
        let mut found = None;
        engine.run(Order::Index, |f| {
            found = Some(f.to_vec());
            false
        });
        Ok(found)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    /// Variables in domain order: solutions appear lexicographically.
    Index,
    /// Smallest remaining domain first, ties by index.
    Fewest,
}

struct Constraint {
    rel: usize,
    vars: Vec<usize>,
    /// Position pairs holding the same variable.
    repeats: Vec<(usize, usize)>,
}

struct Engine {
    n: usize,
    words: usize,
    strong: bool,
    injective: bool,
    constraints: Vec<Constraint>,
    /// For each variable, the constraints containing it with the first
    /// position it occupies.
    by_var: Vec<Vec<(usize, usize)>>,
    target_tuples: Vec<Vec<Tuple>>,
    /// `target_at[rel][pos][value]`: tuples of the relation with `value` at `pos`.
    target_at: Vec<Vec<Vec<Vec<u32>>>>,
    /// `containing[rel][value]`: tuples of the relation containing `value`.
    containing: Vec<Vec<Vec<u32>>>,
    source_sets: Vec<HashSet<Tuple>>,
    initial: Option<Vec<u64>>,
}

struct State {
    doms: Vec<u64>,
    assign: Vec<usize>,
    pre: Vec<Vec<usize>>,
}

const UNSET: usize = usize::MAX;

impl Engine {
    fn new(q: &HomQuery<'_>) -> Result<Self> {
        let (m, t) = (q.source, q.target);
        if m.signature() != t.signature() {
            return Err(Error::SignatureMismatch);
        }
        let n = m.size();
        let tn = t.size();
        let words = tn.div_ceil(64).max(1);
        for (&x, &y) in &q.pinned {
            if x >= n || y >= tn {
                return Err(Error::InvalidStructure(vec![format!("pinned pair ({x}, {y}) is out of range")]));
            }
        }
        let sig = m.signature();
        let mut constraints = Vec::new();
        let mut by_var = vec![Vec::new(); n];
        let mut target_tuples = Vec::new();
        let mut target_at = Vec::new();
        let mut containing = Vec::new();
        let mut source_sets = Vec::new();
        for (rel, sym) in sig.symbols().iter().enumerate() {
            for vars in m.tuples(&sym.name) {
                let c = constraints.len();
                let mut repeats = Vec::new();
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        if vars[i] == vars[j] {
                            repeats.push((i, j));
                        }
                    }
                }
                for (pos, &x) in vars.iter().enumerate() {
                    if vars[..pos].contains(&x) {
                        continue;
                    }
                    by_var[x].push((c, pos));
                }
                constraints.push(Constraint { rel, vars: vars.clone(), repeats });
            }
            let tuples: Vec<Tuple> = t.tuples(&sym.name).iter().cloned().collect();
            let mut at = vec![vec![Vec::new(); tn]; sym.arity];
            let mut cont = vec![Vec::new(); tn];
            for (k, tt) in tuples.iter().enumerate() {
                for (pos, &y) in tt.iter().enumerate() {
                    at[pos][y].push(k as u32);
                    if !tt[..pos].contains(&y) {
                        cont[y].push(k as u32);
                    }
                }
            }
            target_tuples.push(tuples);
            target_at.push(at);
            containing.push(cont);
            source_sets.push(if q.strong { m.tuples(&sym.name).iter().cloned().collect() } else { HashSet::new() });
        }
        let mut engine = Engine {
            n,
            words,
            strong: q.strong,
            injective: q.injective,
            constraints,
            by_var,
            target_tuples,
            target_at,
            containing,
            source_sets,
            initial: None,
        };
        if q.injective && n > tn {
            return Ok(engine);
        }
        let mut doms = vec![0u64; n * words];
        for x in 0..n {
            let d = &mut doms[x * words..(x + 1) * words];
            match (q.pinned.get(&x), q.restrict.get(&x)) {
                (Some(&y), r) => {
                    if r.is_none_or(|r| r.binary_search(&y).is_ok()) {
                        d[y / 64] |= 1 << (y % 64);
                    }
                }
                (None, Some(r)) => {
                    for &y in r.iter().filter(|&&y| y < tn) {
                        d[y / 64] |= 1 << (y % 64);
                    }
                }
                (None, None) => {
                    for y in 0..tn {
                        d[y / 64] |= 1 << (y % 64);
                    }
                }
            }
        }
        let assign = vec![UNSET; n];
        let mut changed = true;
        let mut alive = true;
        while changed && alive {
            changed = false;
            for c in 0..engine.constraints.len() {
                let before: u32 = engine.constraints[c].vars.iter().map(|&x| engine.popcount(&doms, x)).sum();
                if !engine.filter(c, None, &mut doms, &assign) {
                    alive = false;
                    break;
                }
                let after: u32 = engine.constraints[c].vars.iter().map(|&x| engine.popcount(&doms, x)).sum();
                changed |= after != before;
            }
        }
        if alive && (0..n).all(|x| engine.popcount(&doms, x) > 0) {
            engine.initial = Some(doms);
        }
        Ok(engine)
    }

    fn popcount(&self, doms: &[u64], x: usize) -> u32 {
        doms[x * self.words..(x + 1) * self.words].iter().map(|w| w.count_ones()).sum()
    }

    fn has(&self, doms: &[u64], x: usize, y: usize) -> bool {
        doms[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// Narrows the unassigned variables of constraint `c` to values supported
    /// by some target tuple. `anchor` names a position whose variable was just
    /// assigned, to scan only the matching tuples. Returns false on a wipe-out.
    fn filter(&self, c: usize, anchor: Option<usize>, doms: &mut [u64], assign: &[usize]) -> bool {
        let con = &self.constraints[c];
        let words = self.words;
        let k = con.vars.len();
        let mut acc = vec![0u64; k * words];
        let mut any = false;
        let mut check = |tt: &Tuple, doms: &[u64]| {
            for (i, &x) in con.vars.iter().enumerate() {
                let y = tt[i];
                let ok = if assign[x] != UNSET { assign[x] == y } else { self.has(doms, x, y) };
                if !ok {
                    return;
                }
            }
            if con.repeats.iter().any(|&(i, j)| tt[i] != tt[j]) {
                return;
            }
            any = true;
            for (i, &y) in tt.iter().enumerate() {
                acc[i * words + y / 64] |= 1 << (y % 64);
            }
        };
        let tuples = &self.target_tuples[con.rel];
        match anchor {
            Some(pos) => {
                let y = assign[con.vars[pos]];
                for &ti in &self.target_at[con.rel][pos][y] {
                    check(&tuples[ti as usize], doms);
                }
            }
            None => {
                for tt in tuples {
                    check(tt, doms);
                }
            }
        }
        if !any {
            return false;
        }
        for (i, &x) in con.vars.iter().enumerate() {
            if assign[x] != UNSET {
                continue;
            }
            let mut empty = true;
            for w in 0..words {
                doms[x * words + w] &= acc[i * words + w];
                empty &= doms[x * words + w] == 0;
            }
            if empty {
                return false;
            }
        }
        true
    }

    /// Every fully assigned source tuple through `x` must lie in the source
    /// whenever its image is a target tuple. `pre[y]` already contains `x`.
    fn strong_ok(&self, x: usize, y: usize, pre: &[Vec<usize>]) -> bool {
        for (rel, cont) in self.containing.iter().enumerate() {
            for &ti in &cont[y] {
                let tt = &self.target_tuples[rel][ti as usize];
                for pos in (0..tt.len()).filter(|&p| tt[p] == y) {
                    let mut lists: Vec<&[usize]> = tt.iter().map(|&z| pre[z].as_slice()).collect();
                    let single = [x];
                    lists[pos] = &single;
                    if !for_each_product(&lists, |cand| self.source_sets[rel].contains(cand)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn run(&self, order: Order, mut visit: impl FnMut(&[usize]) -> bool) {
        let Some(doms) = &self.initial else { return };
        if self.n == 0 {
            visit(&[]);
            return;
        }
        let mut st = State { doms: doms.clone(), assign: vec![UNSET; self.n], pre: vec![Vec::new(); self.words * 64] };
        self.search(&mut st, 0, order, &mut visit);
    }

    fn pick(&self, st: &State, depth: usize, order: Order) -> usize {
        match order {
            Order::Index => depth,
            Order::Fewest => (0..self.n)
                .filter(|&x| st.assign[x] == UNSET)
                .min_by_key(|&x| (self.popcount(&st.doms, x), x))
                .expect("an unassigned variable remains"),
        }
    }

    /// Returns false once `visit` asks to stop.
    fn search(&self, st: &mut State, depth: usize, order: Order, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.n {
            return visit(&st.assign);
        }
        let x = self.pick(st, depth, order);
        let w = self.words;
        let values: Vec<usize> = (0..w * 64).filter(|&y| self.has(&st.doms, x, y)).collect();
        for y in values {
            if self.injective && !st.pre[y].is_empty() {
                continue;
            }
            st.assign[x] = y;
            st.pre[y].push(x);
            if !self.strong || self.strong_ok(x, y, &st.pre) {
                let saved = st.doms.clone();
                if self.propagate(st, x, y) && !self.search(st, depth + 1, order, visit) {
                    st.pre[y].pop();
                    st.assign[x] = UNSET;
                    return false;
                }
                st.doms = saved;
            }
            st.pre[y].pop();
            st.assign[x] = UNSET;
        }
        true
    }

    fn propagate(&self, st: &mut State, x: usize, y: usize) -> bool {
        let w = self.words;
        for k in 0..w {
            st.doms[x * w + k] = 0;
        }
        st.doms[x * w + y / 64] = 1 << (y % 64);
        if self.injective {
            for z in 0..self.n {
                if st.assign[z] == UNSET {
                    st.doms[z * w + y / 64] &= !(1 << (y % 64));
                    if self.popcount(&st.doms, z) == 0 {
                        return false;
                    }
                }
            }
        }
        self.by_var[x].iter().all(|&(c, pos)| self.filter(c, Some(pos), &mut st.doms, &st.assign))
    }
}

/// Calls `visit` on every tuple of the product of `lists`; returns false as
/// soon as `visit` does.
fn for_each_product(lists: &[&[usize]], mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    if lists.iter().any(|l| l.is_empty()) {
        return true;
    }
    let mut idx = vec![0; lists.len()];
    let mut cand: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        if !visit(&cand) {
            return false;
        }
        let mut k = lists.len();
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                cand[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cand[k] = lists[k][0];
        }
    }
}

/// All homomorphisms, lexicographically.
pub fn homomorphisms(m: &Structure, n: &Structure) -> Result<Vec<Vec<usize>>> {
    HomQuery::new(m, n).maps()
}

pub fn count_homomorphisms(m: &Structure, n: &Structure) -> Result<usize> {
    HomQuery::new(m, n).count()
}

/// Per element and (symbol, position): number of tuples with the element there.
fn position_profile(m: &Structure) -> Vec<Vec<usize>> {
    let sig = m.signature();
    let width: usize = sig.symbols().iter().map(|s| s.arity).sum();
    let mut prof = vec![vec![0; width]; m.size()];
    let mut base = 0;
    for s in sig.symbols() {
        for t in m.tuples(&s.name) {
            for (i, &x) in t.iter().enumerate() {
                prof[x][base + i] += 1;
            }
        }
        base += s.arity;
    }
    prof
}

fn iso_query<'a>(m: &'a Structure, n: &'a Structure) -> Option<HomQuery<'a>> {
    if m.size() != n.size() || m.signature() != n.signature() {
        return None;
    }
    if m.signature().symbols().iter().any(|s| m.tuples(&s.name).len() != n.tuples(&s.name).len()) {
        return None;
    }
    let pm = position_profile(m);
    let pn = position_profile(n);
    let mut q = HomQuery::new(m, n).injective(true).strong(true);
    for (x, p) in pm.iter().enumerate() {
        q = q.restrict(x, (0..n.size()).filter(|&y| pn[y] == *p));
    }
    Some(q)
}

/// All isomorphisms `M → N`, lexicographically.
pub fn isomorphisms(m: &Structure, n: &Structure) -> Result<Vec<Vec<usize>>> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch);
    }
    match iso_query(m, n) {
        Some(q) => q.maps(),
        None => Ok(Vec::new()),
    }
}

/// The lexicographically least isomorphism sending each `x` to `y` for the
/// given pairs.
pub fn find_pointed_isomorphism(m: &Structure, n: &Structure, pins: &[(usize, usize)]) -> Result<Option<Vec<usize>>> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch);
    }
    if pins.iter().any(|&(x, y)| x >= m.size() || y >= n.size()) {
        return Ok(None);
    }
    match iso_query(m, n) {
        Some(q) => q.pinned(pins.iter().copied()).first(),
        None => Ok(None),
    }
}

/// The lexicographically least isomorphism.
pub fn find_isomorphism(m: &Structure, n: &Structure) -> Result<Option<Vec<usize>>> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch);
    }
    match iso_query(m, n) {
        Some(q) => q.first(),
        None => Ok(None),
    }
}

pub fn is_isomorphic(m: &Structure, n: &Structure) -> Result<bool> {
    if m.signature() != n.signature() {
        return Err(Error::SignatureMismatch);
    }
    match iso_query(m, n) {
        Some(q) => q.exists(),
        None => Ok(false),
    }
}

pub fn endomorphisms(m: &Structure) -> Vec<Vec<usize>> {
    HomQuery::new(m, m).maps().expect("same signature")
}

/// True iff the identity is the only endomorphism.
pub fn is_rigid(m: &Structure) -> bool {
    HomQuery::new(m, m).count_up_to(2).expect("same signature") == 1
}
