//! Provenance tags for the elements produced by constructions.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Where an element of a constructed structure came from.
///
/// In a product `G ⋆ M`, natives are the vertices of `G`, shared points are
/// the elements of `P`, `APoint(u, a)` is the copy of `a ∈ A` attached to the
/// source vertex `u`, `BPoint(v, b)` the copy of `b ∈ B` at the target `v`,
/// and `Inner(u, v, c)` the copy of an unmarked `c` on the edge `(u, v)`.
/// Subdivisions reuse `Inner(u, v, k)` for the `k`-th point along `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Native(usize),
    #[serde(rename = "apoint")]
    APoint(usize, usize),
    #[serde(rename = "bpoint")]
    BPoint(usize, usize),
    Inner(usize, usize, usize),
    Shared(usize),
    Plain(usize),
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Tag::Native(g) => write!(f, "{g}"),
            Tag::APoint(u, a) => write!(f, "A({u},{a})"),
            Tag::BPoint(v, b) => write!(f, "B({v},{b})"),
            Tag::Inner(u, v, c) => write!(f, "({u},{v},{c})"),
            Tag::Shared(p) => write!(f, "P{p}"),
            Tag::Plain(i) => write!(f, "x{i}"),
        }
    }
}

/// One tag per domain element, with the reverse lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    tags: Vec<Tag>,
    index: HashMap<Tag, usize>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every element tagged `Plain(i)`.
    pub fn plain(n: usize) -> Self {
        (0..n).map(Tag::Plain).collect()
    }

    /// Appends `tag` and returns its element index.
    ///
    /// Panics if the tag is already present; every construction emits each
    /// tag once.
    pub fn push(&mut self, tag: Tag) -> usize {
        let i = self.tags.len();
        let prev = self.index.insert(tag, i);
        assert!(prev.is_none(), "duplicate tag {tag:?}");
        self.tags.push(tag);
        i
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tag(&self, x: usize) -> Tag {
        self.tags[x]
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn get(&self, tag: &Tag) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn display_names(&self) -> Vec<String> {
        self.tags.iter().map(Tag::to_string).collect()
    }
}

impl FromIterator<Tag> for LabelTable {
    fn from_iter<I: IntoIterator<Item = Tag>>(iter: I) -> Self {
        let mut t = LabelTable::new();
        for tag in iter {
            t.push(tag);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_serialize_lowercase() {
        let s = serde_json::to_string(&Tag::Inner(0, 1, 2)).unwrap();
        assert_eq!(s, r#"{"inner":[0,1,2]}"#);
        let s = serde_json::to_string(&Tag::APoint(3, 4)).unwrap();
        assert_eq!(s, r#"{"apoint":[3,4]}"#);
        assert_eq!(serde_json::to_string(&Tag::Native(7)).unwrap(), r#"{"native":7}"#);
        let back: Tag = serde_json::from_str(r#"{"bpoint":[1,2]}"#).unwrap();
        assert_eq!(back, Tag::BPoint(1, 2));
    }

    #[test]
    fn lookup_is_inverse_of_push() {
        let t: LabelTable = [Tag::Native(0), Tag::Shared(3), Tag::Inner(0, 1, 2)].into_iter().collect();
        for (i, tag) in t.tags().iter().enumerate() {
            assert_eq!(t.get(tag), Some(i));
        }
        assert_eq!(t.get(&Tag::Native(1)), None);
    }

    #[test]
    #[should_panic]
    fn duplicate_tags_are_rejected() {
        let _: LabelTable = [Tag::Native(0), Tag::Native(0)].into_iter().collect();
    }
}
