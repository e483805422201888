//! Brute-force reference values, independent of the cutting-plane solver.

use serde::{Deserialize, Serialize};

use crate::channels::passivized_populations;
use crate::error::{ActivityError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::parallel::{map_indexed, Execution};
use crate::sampling::{derive_seed, Sampler};
use crate::states::{average_energy, von_neumann_entropy, DensityMatrix, HamiltonianSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridObjective {
    /// `min_tau D_max(rho || tau)`, in bits.
    Dmax,
    /// `max_tau max{w : w tau <= rho}`, i.e. `1 - A_w`.
    DominatedWeight,
    /// `min_tau D(rho || tau)`, in bits.
    Relent,
}

/// Weight outside a support below which it is treated as zero.
const SUPPORT_TOL: f64 = 1e-12;

/// All compositions of `n` into `parts` nonnegative integers.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            rec(n - k, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// `D_max(rho || tau)` for diagonal passive `tau`, in bits; `+inf` if `rho`
/// has weight outside `supp tau`.
pub fn dmax_to_diagonal(rho: &DensityMatrix, tau: &[f64]) -> f64 {
    let d = tau.len();
    let k = tau.iter().take_while(|&&t| t > 0.0).count();
    let outside: f64 = (k..d).map(|i| rho.population(i)).sum();
    if k == 0 || outside > SUPPORT_TOL {
        return f64::INFINITY;
    }
    let m = ComplexMatrix::from_fn(k, |i, j| rho.entry(i, j) / (tau[i] * tau[j]).sqrt());
    HermitianMatrix::symmetrized(m).max_eigenvalue().log2()
}

/// Largest `w` with `w diag(tau) <= rho`.
pub fn dominated_weight(rho: &DensityMatrix, tau: &[f64]) -> f64 {
    let eig = rho.hermitian().eig();
    let d = tau.len();
    let dot = |k: usize| -> f64 {
        let v = eig.vector(k);
        v.iter().zip(tau).map(|(z, t)| z.norm_sqr() * t).sum()
    };
    let range: Vec<usize> = (0..d).filter(|&k| eig.values[k] > SUPPORT_TOL).collect();
    // tau must live in supp rho: no weight along any kernel vector
    if (0..d).filter(|k| !range.contains(k)).any(|k| dot(k) > SUPPORT_TOL) {
        return 0.0;
    }
    let vs: Vec<_> = range.iter().map(|&k| eig.vector(k)).collect();
    let lam: Vec<f64> = range.iter().map(|&k| eig.values[k]).collect();
    let r = range.len();
    let m = ComplexMatrix::from_fn(r, |a, b| {
        let s: crate::linalg::C64 = vs[a]
            .iter()
            .zip(&vs[b])
            .zip(tau)
            .map(|((x, y), t)| x.conj() * y * *t)
            .sum();
        s / (lam[a] * lam[b]).sqrt()
    });
    let top = HermitianMatrix::symmetrized(m).max_eigenvalue();
    if top <= 0.0 {
        0.0
    } else {
        (1.0 / top).min(1.0)
    }
}

/// `D(rho || diag(tau))` in bits; `+inf` on support mismatch.
pub fn relent_to_diagonal(rho: &DensityMatrix, tau: &[f64], entropy: f64) -> f64 {
    let mut cross = 0.0;
    for (i, &t) in tau.iter().enumerate() {
        let p = rho.population(i);
        if p <= 0.0 {
            continue;
        }
        if t <= 0.0 {
            return f64::INFINITY;
        }
        cross -= p * t.log2();
    }
    cross - entropy
}

/// Scans `tau = sum_j w_j tau_j` over a simplex grid of spacing `step` and
/// returns the best objective value.
pub fn oracle_passive_grid(rho: &DensityMatrix, objective: GridObjective, step: f64) -> Result<f64> {
    oracle_passive_grid_with(rho, objective, step, Execution::default())
}

pub fn oracle_passive_grid_with(
    rho: &DensityMatrix,
    objective: GridObjective,
    step: f64,
    exec: Execution,
) -> Result<f64> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(ActivityError::InvalidOption {
            name: "step",
            value: step,
        });
    }
    let d = rho.dim();
    let n = (1.0 / step - 1e-9).ceil() as usize;
    let grid = compositions(n, d);
    let entropy = von_neumann_entropy(rho);
    let values = map_indexed(exec, grid.len(), |k| {
        let w: Vec<f64> = grid[k].iter().map(|&c| c as f64 / n as f64).collect();
        let tau = passivized_populations(&w);
        match objective {
            GridObjective::Dmax => dmax_to_diagonal(rho, &tau),
            GridObjective::DominatedWeight => dominated_weight(rho, &tau),
            GridObjective::Relent => relent_to_diagonal(rho, &tau, entropy),
        }
    });
    Ok(match objective {
        GridObjective::DominatedWeight => values.into_iter().fold(0.0, f64::max),
        _ => values.into_iter().fold(f64::INFINITY, f64::min),
    })
}

/// Best energy drop `<H>_rho - <H>_{U rho U^dagger}` over `n` Haar unitaries.
pub fn oracle_haar_ergotropy(rho: &DensityMatrix, h: &HamiltonianSpectrum, n: usize, seed: u64) -> Result<f64> {
    oracle_haar_ergotropy_with(rho, h, n, seed, Execution::default())
}

pub fn oracle_haar_ergotropy_with(
    rho: &DensityMatrix,
    h: &HamiltonianSpectrum,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<f64> {
    if n == 0 {
        return Err(ActivityError::InvalidOption {
            name: "n",
            value: 0.0,
        });
    }
    let mean = average_energy(rho, h)?;
    let d = rho.dim();
    let drops = map_indexed(exec, n, |i| {
        let u = Sampler::new(derive_seed(seed, i as u64)).unitary(d);
        let rotated = &(&u * rho.matrix()) * &u.adjoint();
        let e: f64 = (0..d).map(|k| rotated.get(k, k).re * h.energies()[k]).sum();
        mean - e
    });
    Ok(drops.into_iter().fold(f64::NEG_INFINITY, f64::max))
}
