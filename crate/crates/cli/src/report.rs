use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use zstructure::compression::CompressionError;
use zstructure::graph_of_groups::GroupError;
use zstructure::metric_models::MetricError;
use zstructure::nullity_lab::NullityError;
use zstructure::obstructions::ObstructionError;

use crate::Output;

pub const CAVEAT: &str =
    "bounded verification at desk scale: every check covers only the enumerated ball, net and sample range";

#[derive(Debug)]
pub enum Failure {
    /// bad arguments or unreadable input
    Usage(String),
    Certification { message: String, counterexample: PathBuf },
    Resource(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Certification { .. } => 2,
            Self::Resource(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Certification { message, counterexample } => {
                write!(f, "certification failed: {message} (counterexample in {})", counterexample.display())
            }
            Self::Resource(m) => write!(f, "resource guard: {m}"),
        }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BallTooLarge { .. } => Self::Resource(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<CompressionError> for Failure {
    fn from(e: CompressionError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl From<NullityError> for Failure {
    fn from(e: NullityError) -> Self {
        match e {
            NullityError::Group(g) => g.into(),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<ObstructionError> for Failure {
    fn from(e: ObstructionError) -> Self {
        Self::Usage(e.to_string())
    }
}

/// Parameters that bound what a run has actually checked.
#[derive(Serialize, Default)]
pub struct Scale {
    pub wordlen: Option<usize>,
    pub net_resolution: Option<usize>,
    pub t_max: Option<f64>,
}

#[derive(Serialize)]
struct Versions {
    zstructure: &'static str,
    zstruct: &'static str,
}

#[derive(Serialize)]
struct Provenance {
    config_sha256: String,
    versions: Versions,
    seed: Option<u64>,
    caveat: &'static str,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    pass: bool,
    certified_at_scale: Scale,
    result: &'a T,
    provenance: Provenance,
}

/// Hash of the semantic configuration: arguments and input contents, not
/// output paths.
pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("JSON values serialize");
    hex::encode(Sha256::digest(&bytes))
}

pub fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn counterexample_path(output: &Output) -> PathBuf {
    if let Some(p) = &output.counterexample {
        return p.clone();
    }
    match &output.out {
        Some(out) => out.with_extension("counterexample.json"),
        None => PathBuf::from("counterexample.json"),
    }
}

pub struct Run<'a> {
    pub command: &'a str,
    pub config: Value,
    pub scale: Scale,
    pub seed: Option<u64>,
}

/// Writes the report; on failure also writes the counterexample and returns
/// the matching exit status.
pub fn emit<T: Serialize, C: Serialize>(
    run: Run<'_>,
    output: &Output,
    pass: bool,
    result: &T,
    counterexample: impl FnOnce() -> C,
    message: &str,
) -> Result<(), Failure> {
    let mut config = run.config;
    config["command"] = Value::from(run.command);
    let report = Report {
        command: run.command,
        pass,
        certified_at_scale: run.scale,
        result,
        provenance: Provenance {
            config_sha256: config_hash(&config),
            versions: Versions {
                zstructure: zstructure::VERSION,
                zstruct: env!("CARGO_PKG_VERSION"),
            },
            seed: run.seed,
            caveat: CAVEAT,
        },
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    match &output.out {
        Some(p) => write_file(p, text.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Usage(format!("cannot write report: {e}")))?;
        }
    }
    if pass {
        return Ok(());
    }
    let path = counterexample_path(output);
    let mut ce = serde_json::to_string_pretty(&counterexample()).expect("counterexamples serialize");
    ce.push('\n');
    write_file(&path, ce.as_bytes())?;
    Err(Failure::Certification {
        message: message.to_string(),
        counterexample: path,
    })
}

pub fn env_limit(var: &str, default: usize) -> Result<usize, Failure> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{var} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(default),
    }
}
