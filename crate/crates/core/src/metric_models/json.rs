use serde::{Deserialize, Serialize};

use super::{hyperbolic, MetricError, Space};

/// JSON description of a model space; reals are decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpaceSpec {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valence: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base: Vec<String>,
}

fn real(s: &str) -> Result<f64, MetricError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| MetricError::InvalidInput(format!("not a real number: {s:?}")))
}

impl SpaceSpec {
    pub fn to_space(&self) -> Result<Space, MetricError> {
        let base: Vec<f64> = self.base.iter().map(|s| real(s)).collect::<Result<_, _>>()?;
        match self.space.as_str() {
            "euclidean" => {
                let n = self.dim.unwrap_or(base.len().max(1));
                if n == 0 {
                    return Err(MetricError::InvalidInput("dimension must be positive".into()));
                }
                let base = if base.is_empty() { vec![0.0; n] } else { base };
                if base.len() != n {
                    return Err(MetricError::InvalidInput("base has wrong length".into()));
                }
                Ok(Space::Euclidean { base })
            }
            "hyperbolic" => {
                if let Some(d) = self.dim.filter(|&d| d != 2) {
                    return Err(MetricError::InvalidInput(format!("hyperbolic dimension {d} unsupported")));
                }
                let base = match base.len() {
                    0 => hyperbolic::ORIGIN,
                    2 => hyperbolic::lift(base[0], base[1]),
                    3 => hyperbolic::normalize(&[base[0], base[1], base[2]]),
                    _ => return Err(MetricError::InvalidInput("hyperbolic base needs 2 or 3 coordinates".into())),
                };
                Ok(Space::Hyperbolic { base })
            }
            "tree" => Ok(Space::Tree {
                valence: self.valence.unwrap_or(3),
            }),
            "product" => match self.children.as_slice() {
                [a, b] => Ok(Space::product(a.to_space()?, b.to_space()?)),
                _ => Err(MetricError::InvalidInput("product needs exactly two children".into())),
            },
            other => Err(MetricError::InvalidInput(format!("unknown space {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Space, MetricError> {
        let spec: SpaceSpec = serde_json::from_str(text).map_err(|e| {
            MetricError::InvalidInput(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        spec.to_space()
    }
}
