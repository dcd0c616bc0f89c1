//! Signatures and finite relational structures.
//!
//! A [`Structure`] has domain `0..size` and one tuple set per relation
//! symbol of its [`Signature`]. Display labels are optional and never take
//! part in equality.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Tuple = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let sig = Self::new_unchecked(symbols);
        let violations = sig.violations();
        if violations.is_empty() {
            Ok(sig)
        } else {
            Err(Error::InvalidStructure(violations))
        }
    }

    pub fn new_unchecked<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Self {
        Self {
            symbols: symbols
                .into_iter()
                .map(|(name, arity)| Symbol { name: name.into(), arity })
                .collect(),
        }
    }

    /// The signature `{E:2}` of graphs.
    pub fn graph() -> Self {
        Self::new_unchecked([("E", 2)])
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.iter().find(|s| s.name == name).map(|s| s.arity)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for s in &self.symbols {
            if !seen.insert(s.name.as_str()) {
                out.push(format!("duplicate symbol name `{}`", s.name));
            }
            if s.arity == 0 {
                out.push(format!("symbol `{}` has arity 0", s.name));
            }
        }
        out
    }
}

/// A finite relational structure on the domain `0..size`.
#[derive(Debug, Clone)]
pub struct Structure {
    signature: Signature,
    size: usize,
    relations: BTreeMap<String, BTreeSet<Tuple>>,
    labels: Option<Vec<String>>,
}

static EMPTY: BTreeSet<Tuple> = BTreeSet::new();

impl Structure {
    /// The structure with no tuples.
    pub fn new(signature: Signature, size: usize) -> Self {
        let relations = signature
            .symbols()
            .iter()
            .map(|s| (s.name.clone(), BTreeSet::new()))
            .collect();
        Self { signature, size, relations, labels: None }
    }

    pub fn from_tuples<S: AsRef<str>>(
        signature: Signature,
        size: usize,
        tuples: impl IntoIterator<Item = (S, Tuple)>,
    ) -> Result<Self> {
        let mut s = Self::new(signature, size);
        for (name, t) in tuples {
            s.insert(name.as_ref(), t)?;
        }
        Ok(s)
    }

    /// Assembles a structure without checking any invariant; see [`Structure::validate`].
    pub fn from_parts_unchecked(
        signature: Signature,
        size: usize,
        relations: BTreeMap<String, BTreeSet<Tuple>>,
        labels: Option<Vec<String>>,
    ) -> Self {
        Self { signature, size, relations, labels }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Option<Vec<String>>) {
        self.labels = labels;
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    /// Display name of an element: its label if present, else its index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) if x < l.len() => l[x].clone(),
            _ => x.to_string(),
        }
    }

    pub fn insert(&mut self, name: &str, tuple: Tuple) -> Result<bool> {
        let arity = self
            .signature
            .arity(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if tuple.len() != arity {
            return Err(Error::ArityMismatch { expected: arity, got: tuple.len() });
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.size) {
            return Err(Error::InvalidStructure(vec![format!(
                "tuple entry out of range: {x} >= {}",
                self.size
            )]));
        }
        Ok(self.relations.entry(name.to_string()).or_default().insert(tuple))
    }

    pub fn tuples(&self, name: &str) -> &BTreeSet<Tuple> {
        self.relations.get(name).unwrap_or(&EMPTY)
    }

    pub fn contains(&self, name: &str, tuple: &[usize]) -> bool {
        self.relations.get(name).is_some_and(|t| t.contains(tuple))
    }

    /// All tuples, symbol by symbol in signature order.
    pub fn iter_tuples(&self) -> impl Iterator<Item = (&str, &Tuple)> + '_ {
        self.signature
            .symbols()
            .iter()
            .flat_map(move |s| self.tuples(&s.name).iter().map(move |t| (s.name.as_str(), t)))
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.values().map(BTreeSet::len).sum()
    }

    /// Lists every violated invariant; empty iff the structure is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut out = self.signature.violations();
        for (name, tuples) in &self.relations {
            let Some(arity) = self.signature.arity(name) else {
                out.push(format!("relation `{name}` is not in the signature"));
                continue;
            };
            for t in tuples {
                if t.len() != arity {
                    out.push(format!("arity mismatch: `{name}` tuple {t:?} has length {}", t.len()));
                }
                if t.iter().any(|&x| x >= self.size) {
                    out.push(format!("tuple entry out of range: `{name}` tuple {t:?}"));
                }
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != self.size {
                out.push(format!("label count {} differs from size {}", l.len(), self.size));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Substructure induced on `elements`, renumbered in the given order.
    /// Tuples with an entry outside `elements` are dropped.
    pub fn induced(&self, elements: &[usize]) -> Structure {
        let mut index = vec![usize::MAX; self.size];
        for (i, &x) in elements.iter().enumerate() {
            index[x] = i;
        }
        let mut out = Structure::new(self.signature.clone(), elements.len());
        for (name, t) in self.iter_tuples() {
            if t.iter().all(|&x| index[x] != usize::MAX) {
                let mapped = t.iter().map(|&x| index[x]).collect();
                out.relations.get_mut(name).unwrap().insert(mapped);
            }
        }
        if self.labels.is_some() {
            out.labels = Some(elements.iter().map(|&x| self.label(x)).collect());
        }
        out
    }

    /// Image of the structure under an injective renaming into `0..size`.
    pub fn relabel(&self, f: &[usize], size: usize) -> Structure {
        let mut out = Structure::new(self.signature.clone(), size);
        for (name, t) in self.iter_tuples() {
            let mapped = t.iter().map(|&x| f[x]).collect();
            out.relations.get_mut(name).unwrap().insert(mapped);
        }
        out
    }
}

/// Exact equality: same signature, size and tuple sets. Labels are ignored.
pub fn structures_equal(m: &Structure, n: &Structure) -> bool {
    if m.signature != n.signature || m.size != n.size {
        return false;
    }
    let keys: BTreeSet<&String> = m.relations.keys().chain(n.relations.keys()).collect();
    keys.into_iter().all(|k| m.tuples(k) == n.tuples(k))
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        structures_equal(self, other)
    }
}

impl Eq for Structure {}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "structure on {} points", self.size)?;
        for (name, t) in self.iter_tuples() {
            write!(f, " {name}{t:?}")?;
        }
        Ok(())
    }
}
