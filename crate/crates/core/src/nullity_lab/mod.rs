//! End-to-end checks on `T × ℝⁿ`: a compact fundamental domain, statistics
//! of its translates with and without compression, the fitted proper bound,
//! the nullity certificate and boundary slope limits.

mod certify;
mod domain;
mod pipeline;
mod slope;
mod sweep;

pub use certify::{fit_psi, nullity_certify, BoundViolation, FitReport, NullityCertificate};
pub use domain::{build_domain, default_cube_side, FundamentalDomain};
pub use pipeline::{nullity_pipeline, CompressChoice, PipelineConfig, PipelineReport};
pub use slope::{slope_limit, SlopeLimit, SlopeSample};
pub use sweep::{
    product_space, translate_sweep, visual_diameter_trend, SweepConfig, TranslateStats, TrendRow,
};

use thiserror::Error;

use crate::compression::CompressionError;
use crate::graph_of_groups::GroupError;
use crate::metric_models::MetricError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NullityError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Compression(#[from] CompressionError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain covers only {covered} of {probes} probe points; try a cube side of at least {suggested}")]
    DomainTooSmall {
        covered: usize,
        probes: usize,
        suggested: String,
    },
    #[error("no exponential majorant on the grid: {0}")]
    Fit(String),
    #[error("ray of depth {depth} is too short: the image of the basepoint projects to depth {needed}")]
    RayDepth { depth: usize, needed: usize },
}
