//! Finite relational structures, homomorphism search, gadget star products
//! and the logical and density tools built on them.

pub mod density;
pub mod error;
pub mod fixtures;
pub mod gadget;
pub mod gen;
pub mod graph;
pub mod hom;
pub mod json;
pub mod labels;
pub mod logic;
pub mod perm;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use graph::Graph;
pub use hom::{Hom, HomQuery};
pub use labels::{LabelTable, Tag};
pub use structure::{Signature, Structure, Symbol, Tuple};
