use num_rational::BigRational;
use serde::Serialize;

use super::{
    build_domain, fit_psi, nullity_certify, product_space, translate_sweep,
    visual_diameter_trend, FitReport, NullityCertificate, NullityError, SweepConfig,
    TranslateStats, TrendRow,
};
use crate::compression::{CompressionMap, HHat, SublinearFn};
use crate::graph_of_groups::GraphOfGroups;
use crate::metric_models::{boundary_net, cover_constants, standard_cover, CoverConstants};

#[derive(Clone, Debug, PartialEq)]
pub enum CompressChoice {
    None,
    Phi(SublinearFn),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub wordlen: usize,
    pub cube_side: Option<BigRational>,
    pub probe_radius: f64,
    pub compress: CompressChoice,
    pub r0: f64,
    pub net_resolution: usize,
    /// radius of the cover centres
    pub cover_radius: f64,
    pub margin: f64,
    pub max_elements: usize,
}

impl PipelineConfig {
    pub fn new(wordlen: usize, compress: CompressChoice) -> Self {
        Self {
            wordlen,
            cube_side: None,
            probe_radius: 3.0,
            compress,
            r0: 5.0,
            net_resolution: 4,
            cover_radius: 2.0,
            margin: 1.0,
            max_elements: crate::graph_of_groups::DEFAULT_MAX_ELEMENTS,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub wordlen: usize,
    pub cube_side: String,
    pub coverage: f64,
    pub probes: usize,
    pub fit: FitReport,
    pub compression: String,
    pub phi_star: String,
    pub kappa: f64,
    pub cover: CoverConstants,
    pub certificate: NullityCertificate,
    pub trend: Vec<TrendRow>,
    #[serde(skip)]
    pub stats: Vec<TranslateStats>,
}

/// Domain, raw sweep, fitted `ψ`, optional compressed sweep, cover
/// constants on the boundary net of `T × ℝⁿ`, and the certificate. Without
/// compression the certificate is still evaluated against the `φ*` of the
/// log construction, which the raw translates violate.
pub fn nullity_pipeline(
    g: &GraphOfGroups,
    cfg: &PipelineConfig,
) -> Result<PipelineReport, NullityError> {
    let k = build_domain(g, cfg.cube_side.clone(), cfg.probe_radius)?;
    let sweep = SweepConfig {
        wordlen: cfg.wordlen,
        r0: cfg.r0,
        max_elements: cfg.max_elements,
    };
    let raw = translate_sweep(g, &k, &sweep, None)?;
    let fit = fit_psi(&raw)?;
    let phi = match &cfg.compress {
        CompressChoice::None => SublinearFn::Log,
        CompressChoice::Phi(p) => p.clone(),
    };
    phi.certify()?;
    let map = CompressionMap::euclidean(HHat::new(fit.pair.clone(), phi), g.rank());
    let (stats, label) = match &cfg.compress {
        CompressChoice::None => (raw, "none".to_string()),
        CompressChoice::Phi(p) => (translate_sweep(g, &k, &sweep, Some(&map))?, p.to_string()),
    };
    let space = product_space(g);
    let net = boundary_net(&space, cfg.net_resolution);
    let cover = standard_cover(&space, &net, cfg.cover_radius)?;
    let consts = cover_constants(&space, &cover, &net, cfg.margin)?;
    let phi_star = map.phi_star();
    let certificate = nullity_certify(&stats, &consts, &phi_star, cfg.wordlen)?;
    Ok(PipelineReport {
        wordlen: cfg.wordlen,
        cube_side: k.cube_side.to_string(),
        coverage: k.coverage(),
        probes: k.probes,
        fit,
        compression: label,
        phi_star: phi_star.to_string(),
        kappa: map.hhat().kappa(),
        cover: consts,
        certificate,
        trend: visual_diameter_trend(&stats),
        stats,
    })
}
