//! Activity and coherence quantifiers. Logarithms are base 2 throughout.

use serde::{Deserialize, Serialize};

use crate::channels::CorrelationMatrix;
use crate::error::Result;
use crate::io::extended_f64;
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::parallel::{map_slice, Execution};
use crate::solver::{max_gain_dominated, min_cost_dominating, ConeSolution, SolverOptions};
use crate::states::{check_same_dim, von_neumann_entropy, DensityMatrix, HamiltonianSpectrum, PassiveDistribution};

/// Weight or population below which a quantity counts as zero.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotone {
    Weight,
    Robustness,
    RmaxAct,
    InvRmaxAct,
    RelentAct,
    RmaxCoh,
}

impl Monotone {
    pub const ALL: [Monotone; 6] = [
        Monotone::Weight,
        Monotone::Robustness,
        Monotone::RmaxAct,
        Monotone::InvRmaxAct,
        Monotone::RelentAct,
        Monotone::RmaxCoh,
    ];

    /// The five activity monotones, which are non-increasing under EPCPR
    /// channels.
    pub const ACTIVITY: [Monotone; 5] = [
        Monotone::Weight,
        Monotone::Robustness,
        Monotone::RmaxAct,
        Monotone::InvRmaxAct,
        Monotone::RelentAct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Monotone::Weight => "weight",
            Monotone::Robustness => "robustness",
            Monotone::RmaxAct => "rmax-act",
            Monotone::InvRmaxAct => "inv-rmax-act",
            Monotone::RelentAct => "relent-act",
            Monotone::RmaxCoh => "rmax-coh",
        }
    }
}

impl std::str::FromStr for Monotone {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Monotone::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown monotone `{s}`"))
    }
}

/// Optimizers backing a monotone value. Which fields are present depends on
/// the monotone.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MonotoneCertificate {
    /// Passive-cone weights `u` of the optimal `g = sum_j u_j P_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cone_weights: Option<Vec<f64>>,
    /// Optimal diagonal `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
    /// Normalized passive component `g / sum(g)` of the activity weight.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passive_component: Option<PassiveDistribution>,
    /// Dual witness of the underlying program.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<HermitianMatrix>,
    /// Correlation matrix attaining the coherence bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation: Option<CorrelationMatrix>,
    /// Minimizing passive distribution of the relative entropy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimizer: Option<PassiveDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneResult {
    #[serde(with = "extended_f64")]
    pub value: f64,
    pub certificate: Option<MonotoneCertificate>,
    /// Primal-dual gap of the solve behind the value, 0 for closed forms.
    pub gap: f64,
}

fn cone_certificate(sol: &ConeSolution) -> MonotoneCertificate {
    MonotoneCertificate {
        cone_weights: sol.u.as_ref().map(|u| u.weights().to_vec()),
        diagonal: Some(sol.g.clone()),
        witness: Some(sol.witness.clone()),
        ..Default::default()
    }
}

/// `A_w = 1 - max{sum_j j u_j : sum_j u_j P_j <= rho, u >= 0}`, in `[0, 1]`.
pub fn activity_weight(rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    let d = rho.dim();
    let sol = max_gain_dominated(&vec![1.0; d], rho, opts)?;
    let mut cert = cone_certificate(&sol);
    let total: f64 = sol.g.iter().sum();
    if total > ZERO_TOL {
        cert.passive_component = Some(PassiveDistribution::from_trusted(
            sol.g.iter().map(|g| g / total).collect(),
        ));
    }
    Ok(MonotoneResult {
        value: (1.0 - sol.value).clamp(0.0, 1.0),
        certificate: Some(cert),
        gap: sol.gap,
    })
}

/// `A_r = min{sum_j j u_j : sum_j u_j P_j >= rho, u >= 0} - 1`, in `[0, d - 1]`.
/// The witness satisfies `Tr[W rho] = A_r + 1` up to the gap.
pub fn robustness_of_activity(rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    let d = rho.dim();
    let sol = min_cost_dominating(&vec![1.0; d], rho, true, opts)?;
    Ok(MonotoneResult {
        value: (sol.value - 1.0).clamp(0.0, (d - 1) as f64),
        certificate: Some(cone_certificate(&sol)),
        gap: sol.gap,
    })
}

/// `R_max^act = log2(A_r + 1)`.
pub fn max_relent_activity(rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    let r = robustness_of_activity(rho, opts)?;
    Ok(MonotoneResult {
        value: (r.value + 1.0).log2(),
        ..r
    })
}

/// `-log2(1 - A_w)`, `+inf` once no passive weight remains.
pub fn inverse_max_relent_activity(rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    let w = activity_weight(rho, opts)?;
    let passive_weight = 1.0 - w.value;
    let value = if passive_weight <= ZERO_TOL {
        f64::INFINITY
    } else {
        -passive_weight.log2()
    };
    Ok(MonotoneResult { value, ..w })
}

/// Nonincreasing least-squares fit by pooling adjacent violators. The fit
/// keeps the total of `a`.
pub fn pav_nonincreasing(a: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(a.len());
    for &x in a {
        let mut cur = (x, 1usize);
        while let Some(&(prev, n)) = blocks.last() {
            if prev >= cur.0 {
                break;
            }
            blocks.pop();
            let m = n + cur.1;
            cur = ((prev * n as f64 + cur.0 * cur.1 as f64) / m as f64, m);
        }
        blocks.push(cur);
    }
    blocks
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat_n(v, n))
        .collect()
}

/// `min_tau D(rho || tau)` over passive `tau`, in bits.
///
/// Only the populations enter the cross term, and the optimal `tau` is the
/// monotone regression of the populations.
pub fn relent_activity(rho: &DensityMatrix) -> MonotoneResult {
    let a = rho.populations();
    let q = pav_nonincreasing(&a);
    let mut cross = 0.0;
    for (ai, qi) in a.iter().zip(&q) {
        if *ai <= 0.0 {
            continue;
        }
        if *qi <= 0.0 {
            cross = f64::INFINITY;
            break;
        }
        cross -= ai * qi.log2();
    }
    let value = (cross - von_neumann_entropy(rho)).max(0.0);
    let total: f64 = q.iter().sum();
    MonotoneResult {
        value,
        certificate: Some(MonotoneCertificate {
            minimizer: Some(PassiveDistribution::from_trusted(
                q.iter().map(|x| x.max(0.0) / total).collect(),
            )),
            ..Default::default()
        }),
        gap: 0.0,
    }
}

/// `log2 min{sum_i g_i : diag(g) >= rho, g >= 0}`.
///
/// The certificate carries a correlation matrix `xi` with `Tr[xi rho]` at
/// least the dual bound, built by raising the witness diagonal to 1.
pub fn max_relent_coherence(rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    let d = rho.dim();
    let sol = min_cost_dominating(&vec![1.0; d], rho, false, opts)?;
    let mut xi = sol.witness.matrix().clone();
    for i in 0..d {
        let yii = xi.get(i, i).re;
        xi.set(i, i, C64::new(yii.max(1.0), 0.0));
    }
    // diag(Y) <= 1 up to solver tolerance, so renormalize any overshoot
    let scale: Vec<f64> = (0..d).map(|i| xi.get(i, i).re.sqrt()).collect();
    let xi = ComplexMatrix::from_fn(d, |i, j| xi.get(i, j) / (scale[i] * scale[j]));
    let mut cert = cone_certificate(&sol);
    cert.cone_weights = None;
    cert.correlation = Some(CorrelationMatrix::from_trusted(HermitianMatrix::symmetrized(xi)));
    Ok(MonotoneResult {
        value: sol.value.max(1.0).log2(),
        certificate: Some(cert),
        gap: sol.gap,
    })
}

pub fn evaluate(which: Monotone, rho: &DensityMatrix, opts: &SolverOptions) -> Result<MonotoneResult> {
    match which {
        Monotone::Weight => activity_weight(rho, opts),
        Monotone::Robustness => robustness_of_activity(rho, opts),
        Monotone::RmaxAct => max_relent_activity(rho, opts),
        Monotone::InvRmaxAct => inverse_max_relent_activity(rho, opts),
        Monotone::RelentAct => Ok(relent_activity(rho)),
        Monotone::RmaxCoh => max_relent_coherence(rho, opts),
    }
}

/// Evaluates one monotone over many states; output order follows input order.
pub fn evaluate_batch(
    which: Monotone,
    states: &[DensityMatrix],
    opts: &SolverOptions,
    exec: Execution,
) -> Vec<Result<MonotoneResult>> {
    map_slice(exec, states, |rho| evaluate(which, rho, opts))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErgotropyBounds {
    /// `A_w * max{Erg(sigma) : supp sigma in supp rho}`.
    pub weight_bound: f64,
    /// `min(A_r, 1) * (E_imax - E_1)`, `i_max` the highest populated level.
    pub robustness_bound: f64,
}

/// Largest ergotropy of a state supported in `supp rho`. Ergotropy is
/// convex, so a pure state attains it: the top eigenvalue of `H` compressed
/// to the range, minus `E_1`.
pub fn max_support_ergotropy(rho: &DensityMatrix, h: &HamiltonianSpectrum) -> Result<f64> {
    check_same_dim(h.dim(), rho.dim())?;
    let eig = rho.hermitian().eig();
    let vs: Vec<Vec<C64>> = (0..rho.dim())
        .filter(|&k| eig.values[k] > ZERO_TOL)
        .map(|k| eig.vector(k))
        .collect();
    let e = h.energies();
    let m = ComplexMatrix::from_fn(vs.len(), |a, b| {
        vs[a]
            .iter()
            .zip(&vs[b])
            .zip(e)
            .map(|((x, y), ei)| x.conj() * y * *ei)
            .sum()
    });
    let top = HermitianMatrix::symmetrized(m).max_eigenvalue();
    Ok((top - e[0]).max(0.0))
}

pub fn ergotropy_upper_bounds(
    rho: &DensityMatrix,
    h: &HamiltonianSpectrum,
    opts: &SolverOptions,
) -> Result<ErgotropyBounds> {
    check_same_dim(h.dim(), rho.dim())?;
    let aw = activity_weight(rho, opts)?.value;
    let ar = robustness_of_activity(rho, opts)?.value;
    let e = h.energies();
    let i_max = (0..rho.dim())
        .rev()
        .find(|&i| rho.population(i) > ZERO_TOL)
        .unwrap_or(0);
    Ok(ErgotropyBounds {
        weight_bound: aw * max_support_ergotropy(rho, h)?,
        robustness_bound: ar.min(1.0) * (e[i_max] - e[0]),
    })
}
