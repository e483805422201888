use thiserror::Error;

use crate::solver::LpError;

/// Errors raised by validation, channel application and the convex solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActivityError {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max |A_ij - conj(A_ji)| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("Hamiltonian spectrum is degenerate: E[{index}] = E[{next}]", next = index + 1)]
    DegenerateSpectrum { index: usize },

    #[error("Hamiltonian energies must be listed in increasing order (E[{index}] > E[{next}])", next = index + 1)]
    UnsortedSpectrum { index: usize },

    #[error("invalid probability {value} for {field}")]
    InvalidProbability { field: &'static str, value: f64 },

    #[error("distribution is not passive: {reason}")]
    NotPassive { reason: String },

    #[error("not a correlation matrix: {reason}")]
    NotCorrelation { reason: String },

    #[error("not a sub-correlation matrix: {reason}")]
    NotSubCorrelation { reason: String },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },

    #[error("index {index} out of range [{min}, {max}]")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("ratio matrix is only partially determined: rho[{row}][{col}] = 0")]
    PartialRatioMatrix { row: usize, col: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid certificate component `{component}`: {reason}")]
    InvalidCertificate { component: &'static str, reason: String },

    #[error("linear map is inconsistent: {0}")]
    InvalidLinearMap(String),

    #[error("advantage denominator {denominator:e} is below tolerance")]
    ZeroDenominator { denominator: f64 },

    #[error("invalid option {name} = {value}")]
    InvalidOption { name: &'static str, value: f64 },

    #[error(
        "cutting-plane solver did not converge after {cuts} cuts (bounds [{lower}, {upper}], gap {gap:e})"
    )]
    NonConvergence {
        cuts: usize,
        lower: f64,
        upper: f64,
        gap: f64,
    },

    #[error("linear program failed: {0}")]
    Lp(#[from] LpError),
}

impl ActivityError {
    /// Stable machine-readable identifier, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Self::NotSquare { .. } => "not_square",
            Self::EmptyDimension => "empty_dimension",
            Self::DimensionMismatch { .. } => "dimension_mismatch",
            Self::NonFinite { .. } => "non_finite",
            Self::NotHermitian { .. } => "not_hermitian",
            Self::NotPsd { .. } => "not_psd",
            Self::TraceNotOne { .. } => "trace_not_one",
            Self::DegenerateSpectrum { .. } => "degenerate_spectrum",
            Self::UnsortedSpectrum { .. } => "unsorted_spectrum",
            Self::InvalidProbability { .. } => "invalid_probability",
            Self::NotPassive { .. } => "not_passive",
            Self::NotCorrelation { .. } => "not_correlation",
            Self::NotSubCorrelation { .. } => "not_subcorrelation",
            Self::InvalidPovm { .. } => "invalid_povm",
            Self::IndexOutOfRange { .. } => "index_out_of_range",
            Self::PartialRatioMatrix { .. } => "partial_ratio_matrix",
            Self::Precondition(_) => "precondition",
            Self::InvalidCertificate { .. } => "invalid_certificate",
            Self::InvalidLinearMap(_) => "invalid_linear_map",
            Self::ZeroDenominator { .. } => "zero_denominator",
            Self::InvalidOption { .. } => "invalid_option",
            Self::NonConvergence { .. } => "non_convergence",
            Self::Lp(_) => "lp_failure",
        }
    }

    /// True for errors produced by the numerical solver rather than by input validation.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self, Self::NonConvergence { .. } | Self::Lp(_))
    }
}

pub type Result<T> = std::result::Result<T, ActivityError>;
