use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{homomorphisms, is_homomorphism};
use crate::structure::{Signature, Structure};

/// The data `A_R, h_0, …, h_{k-1}` defining one relation of the
/// reconstructed structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolPart {
    pub name: String,
    pub gadget: Structure,
    pub homs: Vec<Vec<usize>>,
}

/// A base object `•` and one part per output symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretableSpec {
    bullet: Structure,
    parts: Vec<SymbolPart>,
}

impl InterpretableSpec {
    /// Every `h_i` must be a homomorphism `• → A_R`.
    pub fn new(bullet: Structure, parts: Vec<SymbolPart>) -> Result<Self> {
        for part in &parts {
            if part.gadget.signature() != bullet.signature() {
                return Err(Error::SignatureMismatch);
            }
            if part.homs.is_empty() || part.homs.iter().any(|h| !is_homomorphism(h, &bullet, &part.gadget, false)) {
                return Err(Error::NotAHom);
            }
        }
        Signature::new(parts.iter().map(|p| (p.name.clone(), p.homs.len())))?;
        Ok(InterpretableSpec { bullet, parts })
    }

    pub fn bullet(&self) -> &Structure {
        &self.bullet
    }

    pub fn parts(&self) -> &[SymbolPart] {
        &self.parts
    }

    /// The signature of reconstructed structures.
    pub fn output_signature(&self) -> Signature {
        Signature::new_unchecked(self.parts.iter().map(|p| (p.name.clone(), p.homs.len())))
    }
}

/// `M_•`: the homomorphisms `• → M` in lexicographic order, with
/// `(f_0, …, f_{k-1}) ∈ R` iff some `g: A_R → M` has `f_i = g ∘ h_i`.
pub fn reconstruct(spec: &InterpretableSpec, m: &Structure) -> Result<Structure> {
    if m.signature() != spec.bullet.signature() {
        return Err(Error::SpecMismatch);
    }
    let domain = homomorphisms(&spec.bullet, m)?;
    let index: HashMap<&[usize], usize> = domain.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut out = Structure::new(spec.output_signature(), domain.len());
    for part in &spec.parts {
        for g in homomorphisms(&part.gadget, m)? {
            let tuple = part
                .homs
                .iter()
                .map(|h| {
                    let f: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                    index[f.as_slice()]
                })
                .collect();
            out.insert(&part.name, tuple)?;
        }
    }
    Ok(out)
}

/// Graphs from themselves: `•` a single point, `A_E` a directed edge and
/// `h_0, h_1` its endpoints.
pub fn gra_spec() -> InterpretableSpec {
    let part = SymbolPart {
        name: "E".into(),
        gadget: Graph::directed_path(2).into_structure(),
        homs: vec![vec![0], vec![1]],
    };
    InterpretableSpec::new(Graph::empty(1).into_structure(), vec![part]).expect("fixed spec is valid")
}
