//! Proper bounds, sublinear targets, the one-dimensional compression `ĥ`,
//! radial compressions of ℝⁿ and H², and linear-control defects.

mod control;
mod family;
mod hhat;
mod radial;
mod sublinear;

pub use control::{conjugate_affine, conjugate_scaling, linear_control_defect, Defect};
pub use family::{envelope, parse_rational, rational_at_least, ProperFunctionPair};
pub use hhat::{ContractModuli, HHat};
pub use radial::{
    compression_contract_check, radial_profile_map, CompressionDomain, CompressionMap,
    ContractPair, ContractReport, ContractViolation,
};
pub use sublinear::{
    certify_sublinear, SublinearCertificate, SublinearFn, DEFAULT_HORIZON,
    DEFAULT_RATIO_THRESHOLD,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompressionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid proper function: {0}")]
    InvalidFamily(String),
    #[error("cannot majorize samples: {0}")]
    Fit(String),
    #[error("not sublinear: {0}")]
    NotSublinear(String),
    #[error("not certified: {0}")]
    NotCertified(String),
    #[error("metric error: {0}")]
    Metric(String),
}
