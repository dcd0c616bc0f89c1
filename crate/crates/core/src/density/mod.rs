//! Subdivided-clique witnesses, canonical pair colourings, and the gadget
//! miner that turns a dense witness into a gadget.

mod canonical;
mod detect;
mod miner;

pub use canonical::{classify_canonical, compatible_subset, greedy_compatible, Canonical};
pub use detect::{density_profile, detect_subdivided_clique, CliqueWitness};
pub use miner::{injective_glue_check, mine_gadget, MineOutcome, MinedGadget};
