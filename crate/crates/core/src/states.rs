//! States, Hamiltonians, the passive simplex and ergotropy.

use serde::{Deserialize, Serialize};

use crate::error::{ActivityError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::tolerance::ToleranceConfig;

/// Non-degenerate Hamiltonian spectrum `E_1 < E_2 < .. < E_d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HamiltonianJson", into = "HamiltonianJson")]
pub struct HamiltonianSpectrum {
    energies: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianJson {
    energies: Vec<f64>,
}

impl TryFrom<HamiltonianJson> for HamiltonianSpectrum {
    type Error = ActivityError;
    fn try_from(h: HamiltonianJson) -> Result<Self> {
        Self::new(h.energies)
    }
}

impl From<HamiltonianSpectrum> for HamiltonianJson {
    fn from(h: HamiltonianSpectrum) -> Self {
        Self {
            energies: h.energies,
        }
    }
}

impl HamiltonianSpectrum {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(ActivityError::EmptyDimension);
        }
        if let Some(k) = energies.iter().position(|e| !e.is_finite()) {
            return Err(ActivityError::NonFinite { row: k, col: 0 });
        }
        for (index, w) in energies.windows(2).enumerate() {
            if w[1] == w[0] {
                return Err(ActivityError::DegenerateSpectrum { index });
            }
            if w[1] < w[0] {
                return Err(ActivityError::UnsortedSpectrum { index });
            }
        }
        Ok(Self { energies })
    }

    /// Equally spaced levels `0, 1, .., d-1`.
    pub fn ladder(d: usize) -> Self {
        Self {
            energies: (0..d).map(|i| i as f64).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `E_i - E_j` with 0-based indices.
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        self.energies[i] - self.energies[j]
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(ActivityError::DimensionMismatch {
                expected: self.dim(),
                found: d,
            });
        }
        Ok(())
    }
}

/// Hermitian, PSD, unit-trace matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = ActivityError;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(rho: DensityMatrix) -> Self {
        rho.matrix.into_matrix()
    }
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, &ToleranceConfig::default())
    }

    pub fn with_tolerance(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let matrix = HermitianMatrix::new(m, tol.eps_herm)?;
        let trace = matrix.matrix().trace().re;
        if (trace - 1.0).abs() > tol.eps_trace {
            return Err(ActivityError::TraceNotOne { trace });
        }
        let min_eigenvalue = matrix.min_eigenvalue();
        if min_eigenvalue < -tol.eps_psd {
            return Err(ActivityError::NotPsd { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// For outputs that are states by construction (channel images, samplers).
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self {
            matrix: HermitianMatrix::symmetrized(m),
        }
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs))
    }

    /// `|i><i|` with 0-based `i`.
    pub fn basis(i: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(ActivityError::EmptyDimension);
        }
        if i >= d {
            return Err(ActivityError::IndexOutOfRange {
                index: i,
                min: 0,
                max: d - 1,
            });
        }
        Ok(Self::from_trusted(ComplexMatrix::unit(d, i, i)))
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() {
            return Err(ActivityError::EmptyDimension);
        }
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(ActivityError::Precondition(
                "pure state vector must be nonzero and finite".into(),
            ));
        }
        Ok(Self::from_trusted(
            ComplexMatrix::outer(psi, psi).scale(1.0 / norm2),
        ))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.matrix.matrix()
    }

    /// `<i|rho|i>` for 0-based `i`.
    pub fn population(&self, i: usize) -> f64 {
        self.matrix.matrix().get(i, i).re
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.matrix().diagonal_real()
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix.matrix().get(i, j)
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eig().values
    }

    /// `p * self + (1 - p) * other`.
    pub fn mix(&self, p: f64, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        if !(0.0..=1.0).contains(&p) {
            return Err(ActivityError::InvalidProbability {
                field: "p",
                value: p,
            });
        }
        Ok(Self::from_trusted(
            &self.matrix().scale(p) + &other.matrix().scale(1.0 - p),
        ))
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.matrix().is_diagonal(tol)
    }

    /// Frobenius distance to another state.
    pub fn distance(&self, other: &Self) -> f64 {
        (self.matrix() - other.matrix()).frobenius_norm()
    }
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(ActivityError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Nonincreasing probability vector: the populations of a passive state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PassiveDistribution {
    probs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PassiveDistribution {
    type Error = ActivityError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PassiveDistribution> for Vec<f64> {
    fn from(p: PassiveDistribution) -> Self {
        p.probs
    }
}

impl PassiveDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(probs, ToleranceConfig::default().eps_cert)
    }

    pub fn with_tolerance(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(ActivityError::EmptyDimension);
        }
        if let Some(&value) = probs.iter().find(|p| !p.is_finite() || **p < -tol) {
            return Err(ActivityError::InvalidProbability {
                field: "tau",
                value,
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(ActivityError::NotPassive {
                reason: format!("probabilities sum to {total}"),
            });
        }
        if let Some(k) = probs.windows(2).position(|w| w[1] > w[0] + tol) {
            return Err(ActivityError::NotPassive {
                reason: format!("p[{}] = {} < p[{}] = {}", k, probs[k], k + 1, probs[k + 1]),
            });
        }
        Ok(Self { probs })
    }

    /// Populations of the extreme passive state `tau_j` (1-based `j`).
    pub fn extreme(j: usize, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(ActivityError::EmptyDimension);
        }
        if j == 0 || j > d {
            return Err(ActivityError::IndexOutOfRange {
                index: j,
                min: 1,
                max: d,
            });
        }
        let w = 1.0 / j as f64;
        Ok(Self {
            probs: (0..d).map(|i| if i < j { w } else { 0.0 }).collect(),
        })
    }

    pub(crate) fn from_trusted(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(&self.probs))
    }
}

/// Passive iff diagonal in the energy basis with nonincreasing populations.
///
/// `tol` bounds every off-diagonal modulus and every adjacent increase
/// `rho_{i+1,i+1} - rho_{ii}`.
pub fn is_passive(rho: &DensityMatrix, h: &HamiltonianSpectrum, tol: f64) -> Result<bool> {
    h.check_dim(rho.dim())?;
    Ok(is_passive_populations(rho, tol))
}

pub(crate) fn is_passive_populations(rho: &DensityMatrix, tol: f64) -> bool {
    if !rho.is_diagonal(tol) {
        return false;
    }
    rho.populations().windows(2).all(|w| w[1] <= w[0] + tol)
}

/// The extreme passive state `tau_j = (sum_{i<=j} |i><i|) / j`, 1-based `j`.
pub fn extreme_passive(j: usize, d: usize) -> Result<DensityMatrix> {
    Ok(PassiveDistribution::extreme(j, d)?.to_density())
}

/// `Tr[H rho] = sum_i E_i rho_ii`.
pub fn average_energy(rho: &DensityMatrix, h: &HamiltonianSpectrum) -> Result<f64> {
    h.check_dim(rho.dim())?;
    Ok(rho
        .populations()
        .iter()
        .zip(h.energies())
        .map(|(p, e)| p * e)
        .sum())
}

/// Maximum energy extractable by a unitary.
///
/// Closed form: `<H>_rho - sum_i lambda_i^down E_i^up`, pairing the
/// eigenvalues of `rho` in decreasing order with increasing energies.
pub fn ergotropy(rho: &DensityMatrix, h: &HamiltonianSpectrum) -> Result<f64> {
    let mean = average_energy(rho, h)?;
    let passive: f64 = rho
        .eigenvalues()
        .iter()
        .rev()
        .zip(h.energies())
        .map(|(l, e)| l * e)
        .sum();
    Ok(mean - passive)
}

/// The minimum-energy unitary orbit point: eigenvalues sorted descending on
/// ascending energies.
pub fn passive_rearrangement(rho: &DensityMatrix, h: &HamiltonianSpectrum) -> Result<DensityMatrix> {
    h.check_dim(rho.dim())?;
    let mut lam = rho.eigenvalues();
    lam.reverse();
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(
        &lam,
    )))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| l * l.log2())
        .sum::<f64>()
}

/// `|phi_+><phi_+|` with `|phi_+> = sum_i |i> / sqrt(d)`.
pub fn maximally_coherent(d: usize) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(ActivityError::EmptyDimension);
    }
    Ok(DensityMatrix::from_trusted(
        ComplexMatrix::ones(d).scale(1.0 / d as f64),
    ))
}
