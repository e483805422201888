//! Reading and validating JSON input files.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use thiserror::Error;

use activeres::channels::ActivityBreakingChannel;
use activeres::io::MatrixJson;
use activeres::{
    ActivityError, ComplexMatrix, CorrelationMatrix, DensityMatrix, EpcprChannel, HamiltonianSpectrum,
    PassiveDistribution, ToleranceConfig,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{field}: {source}")]
    Activity {
        field: &'static str,
        #[source]
        source: ActivityError,
    },
    #[error("{field}: cannot read {}: {source}", path.display())]
    Io {
        field: &'static str,
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{field}: malformed JSON in {}: {source}", path.display())]
    Json {
        field: &'static str,
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{message}")]
    Usage { field: Option<&'static str>, message: String },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Activity { source, .. } => source.code(),
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "malformed_json",
            CliError::Usage { .. } => "usage",
        }
    }

    pub fn field(&self) -> Option<&'static str> {
        match self {
            CliError::Activity { field, .. } | CliError::Io { field, .. } | CliError::Json { field, .. } => {
                Some(field)
            }
            CliError::Usage { field, .. } => *field,
        }
    }

    pub fn is_solver_failure(&self) -> bool {
        matches!(self, CliError::Activity { source, .. } if source.is_solver_failure())
    }
}

pub trait Field<T> {
    fn field(self, field: &'static str) -> Result<T, CliError>;
}

impl<T> Field<T> for activeres::Result<T> {
    fn field(self, field: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Activity { field, source })
    }
}

fn read_json<T: DeserializeOwned>(path: &Path, field: &'static str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        field,
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        field,
        path: path.to_owned(),
        source,
    })
}

pub fn matrix(path: &Path, field: &'static str) -> Result<ComplexMatrix, CliError> {
    ComplexMatrix::try_from(read_json::<MatrixJson>(path, field)?).field(field)
}

pub fn state(path: &Path, field: &'static str) -> Result<DensityMatrix, CliError> {
    DensityMatrix::new(matrix(path, field)?).field(field)
}

#[derive(Deserialize)]
struct HamiltonianFile {
    energies: Vec<f64>,
}

pub fn hamiltonian(path: &Path) -> Result<HamiltonianSpectrum, CliError> {
    let h: HamiltonianFile = read_json(path, "hamiltonian")?;
    HamiltonianSpectrum::new(h.energies).field("hamiltonian")
}

#[derive(Deserialize)]
struct EpcprFile {
    p: f64,
    xi: MatrixJson,
    tau: Vec<f64>,
}

pub fn epcpr(path: &Path) -> Result<EpcprChannel, CliError> {
    let raw: EpcprFile = read_json(path, "channel")?;
    let tol = ToleranceConfig::default();
    let xi = ComplexMatrix::try_from(raw.xi).field("channel.xi")?;
    let xi = CorrelationMatrix::new(xi, &tol).field("channel.xi")?;
    let tau = PassiveDistribution::new(raw.tau).field("channel.tau")?;
    EpcprChannel::new(raw.p, xi, tau).field("channel")
}

pub fn povm(path: &Path) -> Result<ActivityBreakingChannel, CliError> {
    let raw: Vec<MatrixJson> = read_json(path, "channel")?;
    let effects = raw
        .into_iter()
        .map(ComplexMatrix::try_from)
        .collect::<activeres::Result<Vec<_>>>()
        .field("channel")?;
    ActivityBreakingChannel::new(effects, &ToleranceConfig::default()).field("channel")
}
