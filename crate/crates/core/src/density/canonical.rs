use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// The four canonical ways a colouring of pairs `i < j` can depend on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Canonical {
    /// Depends on neither index.
    Constant = 1,
    /// Depends exactly on the first index.
    First = 2,
    /// Depends exactly on the second index.
    Second = 3,
    /// Depends on the pair.
    Injective = 4,
}

impl Canonical {
    pub const ALL: [Canonical; 4] = [Canonical::Constant, Canonical::First, Canonical::Second, Canonical::Injective];

    pub fn number(self) -> u8 {
        self as u8
    }

    /// Whether two pairs should receive the same colour.
    fn equal(self, (i, j): (usize, usize), (k, l): (usize, usize)) -> bool {
        match self {
            Canonical::Constant => true,
            Canonical::First => i == k,
            Canonical::Second => j == l,
            Canonical::Injective => (i, j) == (k, l),
        }
    }
}

/// The canonical types whose biconditional holds for `chi` on `n` indices.
pub fn classify_canonical<C: PartialEq>(n: usize, chi: impl Fn(usize, usize) -> C) -> Result<BTreeSet<Canonical>> {
    if n < 3 {
        return Err(Error::TooSmall(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let colours: Vec<C> = pairs.iter().map(|&(i, j)| chi(i, j)).collect();
    Ok(Canonical::ALL
        .into_iter()
        .filter(|t| {
            pairs.iter().enumerate().all(|(a, &e)| {
                pairs.iter().enumerate().all(|(b, &e2)| (colours[a] == colours[b]) == t.equal(e, e2))
            })
        })
        .collect())
}

/// Greedy from `{0, 1}`: each later index joins when every new pair stays
/// compatible with every pair already inside, as decided by `ok`.
pub fn greedy_compatible(lambda: usize, ok: impl Fn((usize, usize), (usize, usize)) -> bool) -> Vec<usize> {
    let mut x: Vec<usize> = (0..lambda.min(2)).collect();
    for t in 2..lambda {
        let old: Vec<(usize, usize)> = x.iter().flat_map(|&i| x.iter().filter(move |&&j| i < j).map(move |&j| (i, j))).collect();
        let new: Vec<(usize, usize)> = x.iter().map(|&i| (i, t)).collect();
        let fits = new.iter().enumerate().all(|(a, &e)| {
            old.iter().all(|&o| ok(e, o) && ok(o, e)) && new[..a].iter().all(|&o| ok(e, o) && ok(o, e))
        });
        if fits {
            x.push(t);
        }
    }
    x
}

/// Indices over which distinct pairs never share a value.
///
/// Requires `f_{i,j}(x) ≠ f_{k,l}(x)` for distinct pairs and every `x`.
pub fn compatible_subset<V: PartialEq>(lambda: usize, fs: &BTreeMap<(usize, usize), Vec<V>>) -> Result<Vec<usize>> {
    let pairs: Vec<&(usize, usize)> = fs.keys().collect();
    for (a, e) in pairs.iter().enumerate() {
        for e2 in &pairs[a + 1..] {
            if fs[e].iter().zip(&fs[e2]).any(|(x, y)| x == y) {
                return Err(Error::HypothesisFailed(format!("pairs {e:?} and {e2:?} agree pointwise")));
            }
        }
    }
    let missing = (0..lambda).flat_map(|i| (i + 1..lambda).map(move |j| (i, j))).find(|e| !fs.contains_key(e));
    if let Some(e) = missing {
        return Err(Error::HypothesisFailed(format!("no map for pair {e:?}")));
    }
    Ok(greedy_compatible(lambda, |e, e2| fs[&e].iter().all(|x| !fs[&e2].contains(x))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(types: &[Canonical]) -> BTreeSet<Canonical> {
        types.iter().copied().collect()
    }

    #[test]
    fn the_four_constructed_colourings() {
        use Canonical::*;
        assert_eq!(classify_canonical(4, |_, _| 0).unwrap(), set(&[Constant]));
        assert_eq!(classify_canonical(4, |i, _| i).unwrap(), set(&[First]));
        assert_eq!(classify_canonical(4, |_, j| j).unwrap(), set(&[Second]));
        assert_eq!(classify_canonical(4, |i, j| (i, j)).unwrap(), set(&[Injective]));
        assert_eq!(classify_canonical(2, |_, _| 0), Err(Error::TooSmall(2)));
    }

    #[test]
    fn engineered_colouring_fits_no_type() {
        let chi = |i: usize, j: usize| if (i, j) == (2, 3) { 1 } else { 10 * i + j };
        assert_eq!(classify_canonical(4, chi).unwrap(), BTreeSet::new());
    }

    #[test]
    fn greedy_skips_a_clash() {
        let mut fs = BTreeMap::new();
        let mut next = 0;
        for i in 0..6 {
            for j in i + 1..6 {
                fs.insert((i, j), vec![next, next + 1]);
                next += 2;
            }
        }
        let clash = fs[&(0, 1)][0];
        fs.get_mut(&(2, 3)).unwrap()[1] = clash;
        assert_eq!(compatible_subset(6, &fs).unwrap(), vec![0, 1, 2, 4, 5]);
        let mut distinct = fs.clone();
        distinct.get_mut(&(2, 3)).unwrap()[1] = 1000;
        assert_eq!(compatible_subset(6, &distinct).unwrap(), (0..6).collect::<Vec<_>>());
        let two: BTreeMap<_, _> = [((0, 1), vec![0])].into();
        assert_eq!(compatible_subset(2, &two).unwrap(), vec![0, 1]);
        fs.get_mut(&(2, 3)).unwrap()[0] = fs[&(0, 1)][0];
        assert!(matches!(compatible_subset(6, &fs), Err(Error::HypothesisFailed(_))));
    }
}
