//! Primitive positive formulas, interpretable reconstruction, and paths of
//! relational steps with their orientation.

mod interpret;
mod path;
mod pp;

pub use interpret::{gra_spec, reconstruct, InterpretableSpec, SymbolPart};
pub use path::{is_lpath, orient_lpath, path_types, path_types_limited, LPath, Oriented, PathType, Step};
pub use pp::{lemma_ppcomponents_check, pp_components, pp_satisfies, PPFormula};
