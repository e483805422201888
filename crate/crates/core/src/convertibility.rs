//! Deciding `rho -> rho'` under EPCPR channels, with explicit certificates.
//!
//! A channel `p xi . rho + (1 - p) tau` maps `rho` to `rho'` iff
//! `rho'_mn = p xi_mn rho_mn` off the diagonal and
//! `tau = (diag rho' - p diag rho) / (1 - p)` is a passive distribution. The
//! second condition is the gap-ratio window `p_- <= p <= p_+` together with
//! `tau_d >= 0`, i.e. `p <= rho'_dd / rho_dd`. The first is `R + p I >= 0` for
//! the ratio matrix `R_mn = rho'_mn / rho_mn`.

use serde::{Deserialize, Serialize};

use crate::channels::{apply_epcpr, CorrelationMatrix, EpcprChannel};
use crate::error::{ActivityError, Result};
use crate::io::{extended_f64, extended_interval};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::parallel::{find_first_indexed, Execution};
use crate::sampling::{derive_seed, Sampler};
use crate::states::{check_same_dim, DensityMatrix, PassiveDistribution};
use crate::tolerance::ToleranceConfig;

/// Default threshold below which an off-diagonal entry counts as zero.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Frobenius reconstruction tolerance for emitted certificates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Adjacent population gaps `rho_mm - rho_{m+1,m+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapVector {
    pub deltas: Vec<f64>,
}

impl GapVector {
    pub fn of(rho: &DensityMatrix) -> Self {
        Self::from_populations(&rho.populations())
    }

    pub fn from_populations(p: &[f64]) -> Self {
        Self {
            deltas: p.windows(2).map(|w| w[0] - w[1]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PBounds {
    #[serde(with = "extended_f64")]
    pub p_minus: f64,
    #[serde(with = "extended_f64")]
    pub p_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Convertible,
    NotConvertible,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Diagonal,
    FullCoherence,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvertibilityReport {
    pub verdict: Verdict,
    pub regime: Regime,
    /// Feasible mixing weights `[lo, hi]` for the ratio matrix used.
    #[serde(with = "extended_interval")]
    pub feasible_p_interval: Option<(f64, f64)>,
    /// The mixing weight of the certificate.
    pub p: Option<f64>,
    pub certificate: Option<EpcprChannel>,
    /// Completion trials evaluated, in the general regime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConvertibilityReport {
    fn negative(regime: Regime, notes: Vec<String>) -> Self {
        Self {
            verdict: Verdict::NotConvertible,
            regime,
            feasible_p_interval: None,
            p: None,
            certificate: None,
            trials_used: None,
            notes,
        }
    }
}

fn gap_ratio_bounds(pops: &[f64], pops_prime: &[f64], tol: f64) -> PBounds {
    let snap = |x: f64| if x.abs() <= tol { 0.0 } else { x };
    let mut p_plus = f64::INFINITY;
    let mut p_minus = f64::NEG_INFINITY;
    for m in 0..pops.len().saturating_sub(1) {
        let delta = snap(pops[m] - pops[m + 1]);
        let delta_prime = snap(pops_prime[m] - pops_prime[m + 1]);
        if delta > 0.0 {
            p_plus = p_plus.min(delta_prime / delta);
        } else if delta < 0.0 {
            p_minus = p_minus.max(delta_prime / delta);
        } else if delta_prime < 0.0 {
            // sign(delta') * inf with delta = 0 in S_+; 0/0 imposes nothing
            p_plus = f64::NEG_INFINITY;
        }
    }
    PBounds { p_minus, p_plus }
}

/// `p_+` and `p_-` from the adjacent population gaps.
///
/// A zero gap `Delta` with nonzero `Delta'` contributes `sign(Delta') * inf`
/// to `p_+`; the pair `Delta = Delta' = 0` imposes nothing.
pub fn p_bounds(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<PBounds> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    Ok(gap_ratio_bounds(&rho.populations(), &rho_prime.populations(), 0.0))
}

/// `tau_d >= 0` requires `p <= rho'_dd / rho_dd`.
fn positivity_cap(pops: &[f64], pops_prime: &[f64], tol: f64) -> f64 {
    let d = pops.len();
    if pops[d - 1] > tol {
        (pops_prime[d - 1].max(0.0)) / pops[d - 1]
    } else {
        f64::INFINITY
    }
}

/// `R_mn = rho'_mn / rho_mn` off the diagonal, zero on it.
pub fn ratio_matrix(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<HermitianMatrix> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    let d = rho.dim();
    for m in 0..d {
        for n in 0..d {
            if m != n && rho.entry(m, n).norm_sqr() == 0.0 {
                return Err(ActivityError::PartialRatioMatrix { row: m, col: n });
            }
        }
    }
    Ok(ratio_with(rho, rho_prime, |_, _| C64::new(0.0, 0.0), 0.0))
}

fn ratio_with(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    mut fill: impl FnMut(usize, usize) -> C64,
    tol: f64,
) -> HermitianMatrix {
    let d = rho.dim();
    let mut m = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in i + 1..d {
            let r = rho.entry(i, j);
            let z = if r.norm() > tol { rho_prime.entry(i, j) / r } else { fill(i, j) };
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    HermitianMatrix::symmetrized(m)
}

fn is_diagonal_within(rho: &DensityMatrix, tol: f64) -> bool {
    rho.matrix().max_off_diagonal() <= tol
}

fn all_coherent(rho: &DensityMatrix, tol: f64) -> bool {
    let d = rho.dim();
    (0..d).all(|i| (0..d).all(|j| i == j || rho.entry(i, j).norm() > tol))
}

/// Nonincreasing least-squares fit (pool adjacent violators), then clipped
/// to the simplex.
fn project_passive(raw: &[f64]) -> Vec<f64> {
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(raw.len());
    for &x in raw {
        blocks.push((x, 1));
        while blocks.len() > 1 {
            let (b, nb) = blocks[blocks.len() - 1];
            let (a, na) = blocks[blocks.len() - 2];
            if a >= b {
                break;
            }
            blocks.pop();
            let last = blocks.last_mut().expect("len > 1");
            *last = ((a * na as f64 + b * nb as f64) / (na + nb) as f64, na + nb);
        }
    }
    let mut out: Vec<f64> = blocks
        .into_iter()
        .flat_map(|(v, n)| std::iter::repeat_n(v.max(0.0), n))
        .collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= total);
    out
}

struct Window {
    lo: f64,
    hi: f64,
}

fn window(bounds: PBounds, cap: f64, lambda_min: f64) -> Window {
    Window {
        lo: bounds.p_minus.max(-lambda_min).max(0.0),
        hi: bounds.p_plus.min(1.0).min(cap),
    }
}

/// The reading that joins the gap window and `[0, 1]` by a union and does
/// not couple `p >= -lambda_min(R)` to `p_-`.
fn union_reading(bounds: PBounds, lambda_min: f64) -> bool {
    bounds.p_minus <= bounds.p_plus && lambda_min >= -bounds.p_plus.min(1.0)
}

fn build_certificate(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    r: &HermitianMatrix,
    p: f64,
) -> EpcprChannel {
    let d = rho.dim();
    let xi = if p > 0.0 {
        let mut m = r.matrix().scale(1.0 / p);
        for i in 0..d {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        let h = HermitianMatrix::symmetrized(m);
        let lam = h.min_eigenvalue();
        if lam < 0.0 {
            // Pull a marginally indefinite xi back into the correlation set.
            let delta = -lam;
            HermitianMatrix::symmetrized(h.add_scaled_identity(delta).matrix().scale(1.0 / (1.0 + delta)))
        } else {
            h
        }
    } else {
        HermitianMatrix::symmetrized(ComplexMatrix::ones(d))
    };
    let tau = if p >= 1.0 {
        PassiveDistribution::extreme(1, d).expect("d >= 1").probs().to_vec()
    } else {
        let raw: Vec<f64> = rho
            .populations()
            .iter()
            .zip(rho_prime.populations())
            .map(|(a, b)| (b - p * a) / (1.0 - p))
            .collect();
        project_passive(&raw)
    };
    EpcprChannel::from_parts_trusted(
        p,
        CorrelationMatrix::from_trusted(xi),
        PassiveDistribution::from_trusted(tau),
    )
}

/// Feasibility test and certificate for a fully specified ratio matrix.
fn decide_with_ratio(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    r: &HermitianMatrix,
    regime: Regime,
    tol: f64,
) -> ConvertibilityReport {
    let pops = rho.populations();
    let pops_prime = rho_prime.populations();
    let bounds = gap_ratio_bounds(&pops, &pops_prime, tol);
    let cap = positivity_cap(&pops, &pops_prime, tol);
    let lambda_min = r.min_eigenvalue();
    let w = window(bounds, cap, lambda_min);
    let feasible = w.lo <= w.hi + tol;

    let mut notes = Vec::new();
    if regime == Regime::FullCoherence && union_reading(bounds, lambda_min) != feasible {
        notes.push(format!(
            "union reading of the window gives {}, interval reading gives {} (p_- = {}, p_+ = {}, lambda_min(R) = {}, positivity cap = {})",
            union_reading(bounds, lambda_min),
            feasible,
            bounds.p_minus,
            bounds.p_plus,
            lambda_min,
            cap
        ));
    }
    if !feasible {
        return ConvertibilityReport::negative(regime, notes);
    }
    let (lo, hi) = if w.lo <= w.hi { (w.lo, w.hi) } else { (w.hi, w.hi) };
    let p = (0.5 * (lo + hi)).clamp(0.0, 1.0);
    let chan = build_certificate(rho, rho_prime, r, p);
    let err = apply_epcpr(&chan, rho)
        .map(|out| (out.matrix() - rho_prime.matrix()).frobenius_norm())
        .unwrap_or(f64::INFINITY);
    if err > CERTIFICATE_TOL {
        notes.push(format!("certificate reconstruction error {err:e} exceeds {CERTIFICATE_TOL:e}"));
        return ConvertibilityReport {
            verdict: Verdict::Unknown,
            regime,
            feasible_p_interval: Some((lo, hi)),
            p: None,
            certificate: None,
            trials_used: None,
            notes,
        };
    }
    ConvertibilityReport {
        verdict: Verdict::Convertible,
        regime,
        feasible_p_interval: Some((lo, hi)),
        p: Some(p),
        certificate: Some(chan),
        trials_used: None,
        notes,
    }
}

/// Exact decision for `rho` diagonal within `tol`.
pub fn decide_diagonal(rho: &DensityMatrix, rho_prime: &DensityMatrix, tol: f64) -> Result<ConvertibilityReport> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    if !is_diagonal_within(rho, tol) {
        return Err(ActivityError::Precondition(
            "input state is not diagonal in the energy basis".into(),
        ));
    }
    if !is_diagonal_within(rho_prime, tol) {
        return Ok(ConvertibilityReport::negative(
            Regime::Diagonal,
            vec!["target has coherence but the input has none".into()],
        ));
    }
    let zero = HermitianMatrix::symmetrized(ComplexMatrix::zeros(rho.dim()));
    Ok(decide_with_ratio(rho, rho_prime, &zero, Regime::Diagonal, tol))
}

/// Exact decision for `rho` with every off-diagonal entry above `tol`.
pub fn decide_full_coherence(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    tol: f64,
) -> Result<ConvertibilityReport> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    if !all_coherent(rho, tol) {
        return Err(ActivityError::Precondition(
            "input state has a vanishing coherence".into(),
        ));
    }
    let r = ratio_with(rho, rho_prime, |_, _| C64::new(0.0, 0.0), tol);
    Ok(decide_with_ratio(rho, rho_prime, &r, Regime::FullCoherence, tol))
}

/// Dispatches to the exact deciders when they apply. Otherwise samples
/// completions of the undetermined ratio entries; trial 0 uses the zero
/// completion.
///
/// Returns `NotConvertible` only for completion-independent obstructions:
/// a coherence created where the input has none, or an empty population
/// window. Otherwise a failed search is `Unknown`.
pub fn decide_general(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<ConvertibilityReport> {
    decide_general_with(rho, rho_prime, trials, seed, tol, Execution::default())
}

pub fn decide_general_with(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Execution,
) -> Result<ConvertibilityReport> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    if is_diagonal_within(rho, tol) {
        return decide_diagonal(rho, rho_prime, tol);
    }
    if all_coherent(rho, tol) {
        return decide_full_coherence(rho, rho_prime, tol);
    }
    let d = rho.dim();
    for i in 0..d {
        for j in 0..d {
            if i != j && rho.entry(i, j).norm() <= tol && rho_prime.entry(i, j).norm() > tol {
                return Ok(ConvertibilityReport::negative(
                    Regime::General,
                    vec![format!("target coherence ({i}, {j}) is nonzero where the input has none")],
                ));
            }
        }
    }
    let pops = rho.populations();
    let pops_prime = rho_prime.populations();
    let bounds = gap_ratio_bounds(&pops, &pops_prime, tol);
    let cap = positivity_cap(&pops, &pops_prime, tol);
    let base = window(bounds, cap, 0.0);
    if base.lo > base.hi + tol {
        return Ok(ConvertibilityReport::negative(
            Regime::General,
            vec!["population window is empty for every completion".into()],
        ));
    }

    let found = find_first_indexed(exec, trials, |t| {
        let mut sampler = Sampler::new(derive_seed(seed, t as u64));
        let r = ratio_with(
            rho,
            rho_prime,
            |_, _| {
                if t == 0 {
                    C64::new(0.0, 0.0)
                } else {
                    let modulus = sampler.uniform();
                    let phase = std::f64::consts::TAU * sampler.uniform();
                    C64::from_polar(modulus, phase)
                }
            },
            tol,
        );
        let report = decide_with_ratio(rho, rho_prime, &r, Regime::General, tol);
        (report.verdict == Verdict::Convertible).then_some(report)
    });
    Ok(match found {
        Some((t, mut report)) => {
            report.trials_used = Some(t + 1);
            report
        }
        None => ConvertibilityReport {
            verdict: Verdict::Unknown,
            regime: Regime::General,
            feasible_p_interval: None,
            p: None,
            certificate: None,
            trials_used: Some(trials),
            notes: vec![format!("no feasible completion in {trials} trials")],
        },
    })
}

/// Checks `||C(rho) - rho'||_F <= tol` for a channel whose components are
/// already validated.
pub fn verify_certificate(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    chan: &EpcprChannel,
    tol: f64,
) -> Result<bool> {
    check_same_dim(rho.dim(), rho_prime.dim())?;
    check_same_dim(rho.dim(), chan.dim())?;
    let out = apply_epcpr(chan, rho)?;
    Ok((out.matrix() - rho_prime.matrix()).frobenius_norm() <= tol)
}

/// Validates raw certificate components, reporting which one is invalid,
/// then checks the reconstruction.
pub fn verify_certificate_parts(
    rho: &DensityMatrix,
    rho_prime: &DensityMatrix,
    p: f64,
    xi: ComplexMatrix,
    tau: Vec<f64>,
    tol: f64,
) -> Result<bool> {
    let cfg = ToleranceConfig::default();
    if !(0.0..=1.0).contains(&p) {
        return Err(ActivityError::InvalidCertificate {
            component: "p",
            reason: format!("{p} is not in [0, 1]"),
        });
    }
    let xi = CorrelationMatrix::new(xi, &cfg).map_err(|e| ActivityError::InvalidCertificate {
        component: "xi",
        reason: e.to_string(),
    })?;
    let tau = PassiveDistribution::with_tolerance(tau, cfg.eps_cert).map_err(|e| {
        ActivityError::InvalidCertificate {
            component: "tau",
            reason: e.to_string(),
        }
    })?;
    let chan = EpcprChannel::new(p, xi, tau).map_err(|e| ActivityError::InvalidCertificate {
        component: "dimensions",
        reason: e.to_string(),
    })?;
    verify_certificate(rho, rho_prime, &chan, tol)
}
