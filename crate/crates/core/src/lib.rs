//! Exact graph-of-groups algebra, Bass–Serre trees, model CAT(0) spaces and
//! compressing homeomorphisms, with harnesses that check the nullity and
//! boundary-extension conditions for translates of a compact domain.

pub mod graph_of_groups;
pub mod bass_serre;
pub mod compression;
pub mod metric_models;
pub mod nullity_lab;
pub mod obstructions;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
