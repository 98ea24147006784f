//! Finite witnesses for noncompressibility: complementary components of
//! balls in the 4-valent tree, growth of right-angled Coxeter groups, and
//! the index at which a compression would contradict ball growth.

mod davis;
mod racg;
mod t4;

pub use davis::{davis_index, DavisIndex};
pub use racg::{racg_growth, GenRef, GrowthTable, Racg, DEFAULT_MAX_STATES};
pub use t4::{t4_components, t4_contradiction_index, t4_sandwich, SandwichReport, T4Components, T4Index};

use thiserror::Error;

use crate::compression::CompressionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObstructionError {
    #[error(transparent)]
    Certification(#[from] CompressionError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no index found below {0}")]
    ScanLimit(u64),
}
