//! Activity witnesses: PSD observables with expectation at most 1 on every
//! passive state. A PSD `W` is a witness iff `sum_{i<=j} W_ii <= j` for every
//! `j`, since `Tr[W tau_j]` is the running mean of its diagonal.

use serde::{Deserialize, Serialize};

use crate::channels::SubCorrelationMatrix;
use crate::error::{ActivityError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::monotones::robustness_of_activity;
use crate::solver::SolverOptions;
use crate::states::{check_same_dim, DensityMatrix};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct ActivityWitness(HermitianMatrix);

impl ActivityWitness {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let h = HermitianMatrix::new(m, tol.eps_herm)?;
        let lam = h.min_eigenvalue();
        if lam < -tol.eps_psd {
            return Err(ActivityError::NotPsd { min_eigenvalue: lam });
        }
        if let Some((j, excess)) = worst_partial_sum(&h) {
            if excess > tol.eps_cert {
                return Err(ActivityError::Precondition(format!(
                    "partial diagonal sum up to level {} exceeds {} by {excess:e}",
                    j + 1,
                    j + 1
                )));
            }
        }
        Ok(Self(h))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }

    /// `Tr[W rho]`.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        check_same_dim(self.dim(), rho.dim())?;
        Ok(self.0.matrix().trace_product(rho.matrix()).re)
    }

    /// `W / d`, a sub-correlation matrix because `W_jj <= j <= d`.
    pub fn to_subcorrelation(&self) -> SubCorrelationMatrix {
        let d = self.dim() as f64;
        SubCorrelationMatrix::from_trusted(self.0.scale(1.0 / d))
    }
}

impl TryFrom<ComplexMatrix> for ActivityWitness {
    type Error = ActivityError;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m, &ToleranceConfig::default())
    }
}

impl From<ActivityWitness> for ComplexMatrix {
    fn from(w: ActivityWitness) -> Self {
        w.0.into_matrix()
    }
}

/// Level `j` (0-based) and amount of the largest `sum_{i<=j} W_ii - (j + 1)`.
fn worst_partial_sum(w: &HermitianMatrix) -> Option<(usize, f64)> {
    let mut acc = 0.0;
    (0..w.dim())
        .map(|j| {
            acc += w.matrix().get(j, j).re;
            (j, acc - (j + 1) as f64)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

/// PSD within `tol` and every partial diagonal sum within `tol` of its bound.
pub fn is_activity_witness(w: &ComplexMatrix, tol: f64) -> Result<bool> {
    let h = HermitianMatrix::new(w.clone(), ToleranceConfig::default().eps_herm)?;
    if h.min_eigenvalue() < -tol {
        return Ok(false);
    }
    Ok(worst_partial_sum(&h).is_none_or(|(_, excess)| excess <= tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    /// `W_k = k |k><k|`, levels numbered from 1.
    Level(usize),
    /// `d |phi+><phi+|`, the all-ones matrix.
    Coherent,
}

pub fn canonical_witness(kind: WitnessKind, d: usize) -> Result<ActivityWitness> {
    if d == 0 {
        return Err(ActivityError::EmptyDimension);
    }
    let m = match kind {
        WitnessKind::Level(k) => {
            if !(2..=d).contains(&k) {
                return Err(ActivityError::IndexOutOfRange { index: k, min: 2, max: d });
            }
            let mut m = ComplexMatrix::zeros(d);
            m.set(k - 1, k - 1, C64::new(k as f64, 0.0));
            m
        }
        WitnessKind::Coherent => ComplexMatrix::ones(d),
    };
    Ok(ActivityWitness(HermitianMatrix::symmetrized(m)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalWitness {
    pub witness: ActivityWitness,
    /// `Tr[W rho]`, equal to `2^{R_max^act(rho)} = A_r + 1` up to `gap`.
    pub value: f64,
    pub gap: f64,
}

/// The robustness dual: `max{Tr[W rho] : W >= 0, Tr[W tau_j] <= 1 for all j}`.
///
/// The solver's witness is rescaled onto the exact constraint set, so the
/// returned `W` always validates.
pub fn optimal_witness(rho: &DensityMatrix, opts: &SolverOptions) -> Result<OptimalWitness> {
    let r = robustness_of_activity(rho, opts)?;
    let y = r
        .certificate
        .and_then(|c| c.witness)
        .expect("robustness always carries a witness");
    let mut acc = 0.0;
    let mut shrink = 1.0f64;
    for j in 0..y.dim() {
        acc += y.matrix().get(j, j).re;
        if acc > (j + 1) as f64 {
            shrink = shrink.min((j + 1) as f64 / acc);
        }
    }
    let w = y.scale(shrink);
    let value = w.matrix().trace_product(rho.matrix()).re;
    Ok(OptimalWitness {
        witness: ActivityWitness(w),
        value,
        gap: r.gap,
    })
}

/// `Tr[xi rho] / max_j Tr[xi tau_j]`: how much better `rho` scores than the
/// best passive state on the energy-preserving operation encoded by `xi`.
///
/// The maximum over passive states sits at an extreme point `tau_j`.
pub fn ep_advantage(rho: &DensityMatrix, xi: &SubCorrelationMatrix) -> Result<f64> {
    check_same_dim(xi.dim(), rho.dim())?;
    let num = xi.matrix().matrix().trace_product(rho.matrix()).re;
    let den = best_passive_score(xi.matrix());
    if den <= 1e-15 {
        return Err(ActivityError::ZeroDenominator { denominator: den });
    }
    Ok(num / den)
}

/// `max_j Tr[xi tau_j]`, the running means of the diagonal.
pub fn best_passive_score(xi: &HermitianMatrix) -> f64 {
    let mut acc = 0.0;
    (0..xi.dim())
        .map(|j| {
            acc += xi.matrix().get(j, j).re;
            acc / (j + 1) as f64
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
