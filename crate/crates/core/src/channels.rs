//! Channel classes: energy-preserving channels and operations (Schur products
//! with correlation / sub-correlation matrices), EPCPR channels, activity
//! breaking measure-and-prepare channels, the canonical passivization, and
//! explicit linear maps for covariance checks.

use serde::{Deserialize, Serialize};

use crate::error::{ActivityError, Result};
use crate::linalg::{schur_product, ComplexMatrix, HermitianMatrix, C64};
use crate::states::{check_same_dim, DensityMatrix, PassiveDistribution};
use crate::tolerance::ToleranceConfig;

/// PSD matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct CorrelationMatrix(HermitianMatrix);

impl TryFrom<ComplexMatrix> for CorrelationMatrix {
    type Error = ActivityError;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m, &ToleranceConfig::default())
    }
}

impl From<CorrelationMatrix> for ComplexMatrix {
    fn from(xi: CorrelationMatrix) -> Self {
        xi.0.into_matrix()
    }
}

impl CorrelationMatrix {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let h = HermitianMatrix::new(m, tol.eps_herm)?;
        if let Some((i, v)) = h
            .matrix()
            .diagonal_real()
            .into_iter()
            .enumerate()
            .find(|(_, v)| (v - 1.0).abs() > tol.eps_cert)
        {
            return Err(ActivityError::NotCorrelation {
                reason: format!("diagonal entry {i} is {v}"),
            });
        }
        let min = h.min_eigenvalue();
        if min < -tol.eps_psd {
            return Err(ActivityError::NotCorrelation {
                reason: format!("min eigenvalue {min:e}"),
            });
        }
        Ok(Self(h))
    }

    pub(crate) fn from_trusted(h: HermitianMatrix) -> Self {
        Self(h)
    }

    /// `J`, the identity channel.
    pub fn all_ones(d: usize) -> Self {
        Self(HermitianMatrix::symmetrized(ComplexMatrix::ones(d)))
    }

    /// `I`, complete dephasing.
    pub fn identity(d: usize) -> Self {
        Self(HermitianMatrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// PSD matrix with diagonal at most 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct SubCorrelationMatrix(HermitianMatrix);

impl TryFrom<ComplexMatrix> for SubCorrelationMatrix {
    type Error = ActivityError;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m, &ToleranceConfig::default())
    }
}

impl From<SubCorrelationMatrix> for ComplexMatrix {
    fn from(xi: SubCorrelationMatrix) -> Self {
        xi.0.into_matrix()
    }
}

impl From<CorrelationMatrix> for SubCorrelationMatrix {
    fn from(xi: CorrelationMatrix) -> Self {
        Self(xi.0)
    }
}

impl SubCorrelationMatrix {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let h = HermitianMatrix::new(m, tol.eps_herm)?;
        if let Some((i, v)) = h
            .matrix()
            .diagonal_real()
            .into_iter()
            .enumerate()
            .find(|(_, v)| *v > 1.0 + tol.eps_cert)
        {
            return Err(ActivityError::NotSubCorrelation {
                reason: format!("diagonal entry {i} is {v}"),
            });
        }
        let min = h.min_eigenvalue();
        if min < -tol.eps_psd {
            return Err(ActivityError::NotSubCorrelation {
                reason: format!("min eigenvalue {min:e}"),
            });
        }
        Ok(Self(h))
    }

    pub(crate) fn from_trusted(h: HermitianMatrix) -> Self {
        Self(h)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.0
    }
}

/// `rho -> p (xi . rho) + (1 - p) tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EpcprJson", into = "EpcprJson")]
pub struct EpcprChannel {
    p: f64,
    xi: CorrelationMatrix,
    tau: PassiveDistribution,
}

#[derive(Serialize, Deserialize)]
struct EpcprJson {
    p: f64,
    xi: CorrelationMatrix,
    tau: PassiveDistribution,
}

impl TryFrom<EpcprJson> for EpcprChannel {
    type Error = ActivityError;
    fn try_from(c: EpcprJson) -> Result<Self> {
        Self::new(c.p, c.xi, c.tau)
    }
}

impl From<EpcprChannel> for EpcprJson {
    fn from(c: EpcprChannel) -> Self {
        Self {
            p: c.p,
            xi: c.xi,
            tau: c.tau,
        }
    }
}

impl EpcprChannel {
    pub fn new(p: f64, xi: CorrelationMatrix, tau: PassiveDistribution) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ActivityError::InvalidProbability {
                field: "p",
                value: p,
            });
        }
        check_same_dim(xi.dim(), tau.dim())?;
        Ok(Self { p, xi, tau })
    }

    pub(crate) fn from_parts_trusted(p: f64, xi: CorrelationMatrix, tau: PassiveDistribution) -> Self {
        Self { p, xi, tau }
    }

    pub fn identity(d: usize) -> Self {
        Self {
            p: 1.0,
            xi: CorrelationMatrix::all_ones(d),
            tau: PassiveDistribution::from_trusted(PassiveDistribution::extreme(1, d).unwrap().probs().to_vec()),
        }
    }

    pub fn reset(tau: PassiveDistribution) -> Self {
        let d = tau.dim();
        Self {
            p: 0.0,
            xi: CorrelationMatrix::all_ones(d),
            tau,
        }
    }

    pub fn dim(&self) -> usize {
        self.xi.dim()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn xi(&self) -> &CorrelationMatrix {
        &self.xi
    }

    pub fn tau(&self) -> &PassiveDistribution {
        &self.tau
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_epcpr(self, rho)
    }

    pub fn to_linear_map(&self) -> LinearMap {
        let d = self.dim();
        let reset = ComplexMatrix::from_real_diagonal(self.tau.probs()).scale(1.0 - self.p);
        LinearMap::from_fn(d, |x| {
            let ep = schur_product(self.xi.matrix().matrix(), x).expect("same dim").scale(self.p);
            &ep + &reset.scale(x.trace().re)
        })
    }
}

/// Measure-and-prepare channel `rho -> sum_j Tr[P_j rho] tau_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexMatrix>", into = "Vec<ComplexMatrix>")]
pub struct ActivityBreakingChannel {
    povm: Vec<HermitianMatrix>,
}

impl TryFrom<Vec<ComplexMatrix>> for ActivityBreakingChannel {
    type Error = ActivityError;
    fn try_from(v: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(v, &ToleranceConfig::default())
    }
}

impl From<ActivityBreakingChannel> for Vec<ComplexMatrix> {
    fn from(c: ActivityBreakingChannel) -> Self {
        c.povm.into_iter().map(HermitianMatrix::into_matrix).collect()
    }
}

impl ActivityBreakingChannel {
    pub fn new(effects: Vec<ComplexMatrix>, tol: &ToleranceConfig) -> Result<Self> {
        let d = effects.len();
        if d == 0 {
            return Err(ActivityError::InvalidPovm {
                reason: "empty POVM".into(),
            });
        }
        let mut povm = Vec::with_capacity(d);
        let mut total = ComplexMatrix::zeros(d);
        for (k, e) in effects.into_iter().enumerate() {
            if e.dim() != d {
                return Err(ActivityError::InvalidPovm {
                    reason: format!("effect {k} has dimension {}, expected {d} effects of dimension {d}", e.dim()),
                });
            }
            let h = HermitianMatrix::new(e, tol.eps_herm)?;
            let min = h.min_eigenvalue();
            if min < -tol.eps_psd {
                return Err(ActivityError::InvalidPovm {
                    reason: format!("effect {k} has min eigenvalue {min:e}"),
                });
            }
            total = &total + h.matrix();
            povm.push(h);
        }
        let defect = total.max_abs_diff(&ComplexMatrix::identity(d));
        if defect > tol.eps_cert {
            return Err(ActivityError::InvalidPovm {
                reason: format!("effects sum to identity only within {defect:e}"),
            });
        }
        Ok(Self { povm })
    }

    /// Projective measurement in the energy basis; this is the canonical passivization.
    pub fn energy_basis(d: usize) -> Self {
        Self {
            povm: (0..d)
                .map(|i| HermitianMatrix::symmetrized(ComplexMatrix::unit(d, i, i)))
                .collect(),
        }
    }

    /// `{I, 0, .., 0}`: always prepares `tau_1`.
    pub fn trivial(d: usize) -> Self {
        let mut povm = vec![HermitianMatrix::identity(d)];
        povm.extend((1..d).map(|_| HermitianMatrix::symmetrized(ComplexMatrix::zeros(d))));
        Self { povm }
    }

    /// `P_j = |psi_j><psi_j|` for an orthonormal basis.
    pub fn from_orthonormal_basis(basis: &[Vec<C64>]) -> Self {
        Self {
            povm: basis
                .iter()
                .map(|v| HermitianMatrix::symmetrized(ComplexMatrix::outer(v, v)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.povm.len()
    }

    pub fn effects(&self) -> &[HermitianMatrix] {
        &self.povm
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_activity_breaking(self, rho)
    }
}

/// Linear map on `d x d` matrices, given by its images of the matrix units:
/// `images[i * d + j] = Q(|i><j|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    dim: usize,
    images: Vec<ComplexMatrix>,
}

impl LinearMap {
    pub fn from_images(dim: usize, images: Vec<ComplexMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(ActivityError::EmptyDimension);
        }
        if images.len() != dim * dim {
            return Err(ActivityError::InvalidLinearMap(format!(
                "expected {} basis images, got {}",
                dim * dim,
                images.len()
            )));
        }
        if let Some(k) = images.iter().position(|m| m.dim() != dim) {
            return Err(ActivityError::InvalidLinearMap(format!(
                "image {k} has dimension {}, expected {dim}",
                images[k].dim()
            )));
        }
        Ok(Self { dim, images })
    }

    /// Tabulates `f` on the matrix units; `f` is assumed linear.
    pub fn from_fn(dim: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        let images = (0..dim * dim)
            .map(|k| f(&ComplexMatrix::unit(dim, k / dim, k % dim)))
            .collect();
        Self { dim, images }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.images[i * self.dim + j]
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_same_dim(self.dim, x.dim())?;
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let c = x.get(i, j);
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let img = self.image(i, j);
                for r in 0..d {
                    for s in 0..d {
                        let z = out.get(r, s) + c * img.get(r, s);
                        out.set(r, s, z);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Adjoint w.r.t. `Tr[A Q(B)] = Tr[Q^dagger(A) B]`.
    pub fn adjoint_apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        check_same_dim(self.dim, a.dim())?;
        let d = self.dim;
        Ok(ComplexMatrix::from_fn(d, |j, i| {
            a.trace_product(self.image(i, j))
        }))
    }

    /// `self . other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim, other.dim)?;
        let images = other
            .images
            .iter()
            .map(|m| self.apply(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: self.dim,
            images,
        })
    }
}

/// `xi . rho` for a correlation matrix; populations are unchanged.
pub fn apply_energy_preserving(xi: &CorrelationMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let out = schur_product(xi.matrix().matrix(), rho.matrix())?;
    Ok(DensityMatrix::from_trusted(out))
}

/// `xi . rho` for a sub-correlation matrix, unnormalized, with its success
/// probability `sum_i xi_ii rho_ii`.
pub fn apply_ep_operation(
    xi: &SubCorrelationMatrix,
    rho: &DensityMatrix,
) -> Result<(ComplexMatrix, f64)> {
    let out = schur_product(xi.matrix().matrix(), rho.matrix())?;
    let prob = out.trace().re;
    Ok((out, prob))
}

pub fn apply_epcpr(chan: &EpcprChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let ep = schur_product(chan.xi.matrix().matrix(), rho.matrix())?;
    let reset = ComplexMatrix::from_real_diagonal(chan.tau.probs());
    Ok(DensityMatrix::from_trusted(
        &ep.scale(chan.p) + &reset.scale(1.0 - chan.p),
    ))
}

/// Output populations `gamma_k` of the d = 4 passivity-preserving channel
/// that can raise ergotropy.
pub const COUNTEREXAMPLE_GAMMAS: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [2.0 / 3.0, 1.0 / 3.0, 0.0, 0.0],
    [1.0 / 3.0, 2.0 / 3.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
];

/// `rho -> sum_k <k|rho|k> gamma_k` on a four-level system.
pub fn counterexample_channel(rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_same_dim(4, rho.dim())?;
    let pops = rho.populations();
    let mut out = [0.0; 4];
    for (p, gamma) in pops.iter().zip(COUNTEREXAMPLE_GAMMAS.iter()) {
        for (o, g) in out.iter_mut().zip(gamma) {
            *o += p * g;
        }
    }
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(
        &out,
    )))
}

pub fn counterexample_map() -> LinearMap {
    LinearMap::from_fn(4, |x| {
        let mut out = [0.0; 4];
        let mut imag = [0.0; 4];
        for (k, gamma) in COUNTEREXAMPLE_GAMMAS.iter().enumerate() {
            let c = x.get(k, k);
            for i in 0..4 {
                out[i] += c.re * gamma[i];
                imag[i] += c.im * gamma[i];
            }
        }
        ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                C64::new(out[i], imag[i])
            } else {
                C64::new(0.0, 0.0)
            }
        })
    })
}

/// Canonical passivization `rho -> sum_i <i|rho|i> tau_i`.
pub fn passivization(rho: &DensityMatrix) -> DensityMatrix {
    let pops = rho.populations();
    DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(&passivized_populations(&pops)))
}

/// Populations of `sum_i w_i tau_i`: entry `k` is `sum_{i >= k} w_i / (i + 1)`.
pub(crate) fn passivized_populations(weights: &[f64]) -> Vec<f64> {
    let d = weights.len();
    let mut out = vec![0.0; d];
    let mut acc = 0.0;
    for k in (0..d).rev() {
        acc += weights[k] / (k + 1) as f64;
        out[k] = acc;
    }
    out
}

pub fn passivization_map(d: usize) -> LinearMap {
    LinearMap::from_fn(d, |x| {
        let w: Vec<C64> = (0..d).map(|i| x.get(i, i)).collect();
        let re = passivized_populations(&w.iter().map(|z| z.re).collect::<Vec<_>>());
        let im = passivized_populations(&w.iter().map(|z| z.im).collect::<Vec<_>>());
        ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                C64::new(re[i], im[i])
            } else {
                C64::new(0.0, 0.0)
            }
        })
    })
}

pub fn energy_preserving_map(xi: &ComplexMatrix) -> LinearMap {
    LinearMap::from_fn(xi.dim(), |x| schur_product(xi, x).expect("same dim"))
}

pub fn apply_activity_breaking(
    chan: &ActivityBreakingChannel,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_same_dim(chan.dim(), rho.dim())?;
    let weights: Vec<f64> = chan
        .povm
        .iter()
        .map(|p| p.matrix().trace_product(rho.matrix()).re)
        .collect();
    Ok(DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(
        &passivized_populations(&weights),
    )))
}

/// `max_k ||(Q . Pi - Pi . Q)(B_k)||_F` over the matrix units `B_k`.
pub fn covariance_defect(map: &LinearMap) -> Result<f64> {
    let pi = passivization_map(map.dim());
    let lhs = map.compose(&pi)?;
    let rhs = pi.compose(map)?;
    Ok(lhs
        .images
        .iter()
        .zip(&rhs.images)
        .map(|(a, b)| (a - b).frobenius_norm())
        .fold(0.0, f64::max))
}

/// `Q . Pi = Pi . Q` within `tol` on every matrix unit.
pub fn is_passivization_covariant(map: &LinearMap, tol: f64) -> Result<bool> {
    Ok(covariance_defect(map)? <= tol)
}
