//! Eigenvector cutting planes for linear objectives over diagonal matrices
//! constrained by one-sided PSD domination.
//!
//! The PSD constraint `diag(g) >= rho` is the intersection of the scalar
//! constraints `sum_i |v_i|^2 g_i >= <v|rho|v>` over all vectors `v`. Each round
//! solves a small LP over the cuts collected so far, then adds the eigenvectors
//! of `diag(g) - rho` with negative eigenvalues. The LP is solved in its dual
//! form (one row per coordinate, one column per cut), and its multipliers
//! assemble the dual SDP witness `Y = sum_k y_k v_k v_k^dagger`.

use serde::{Deserialize, Serialize};

use crate::error::{ActivityError, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::solver::lp::{dense_lp, LpProblem, LpRow, Sense};
use crate::states::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_cuts: usize,
    pub lp_tol: f64,
    pub psd_tol: f64,
    /// Stop once `upper - lower <= gap_tol * max(1, |value|)`.
    pub gap_tol: f64,
    /// Grid step for the brute-force oracle; `None` picks by dimension.
    pub oracle_grid_step: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_cuts: 500,
            lp_tol: 1e-10,
            psd_tol: 1e-9,
            gap_tol: 1e-8,
            oracle_grid_step: None,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_cuts == 0 {
            return Err(ActivityError::InvalidOption {
                name: "max_cuts",
                value: 0.0,
            });
        }
        for (name, v) in [
            ("lp_tol", self.lp_tol),
            ("psd_tol", self.psd_tol),
            ("gap_tol", self.gap_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ActivityError::InvalidOption { name, value: v });
            }
        }
        if let Some(s) = self.oracle_grid_step {
            if !(s.is_finite() && s > 0.0) {
                return Err(ActivityError::InvalidOption {
                    name: "oracle_grid_step",
                    value: s,
                });
            }
        }
        Ok(())
    }

    /// The configured oracle step, or 1e-2 up to d = 3 and 5e-2 above.
    pub fn grid_step_for(&self, d: usize) -> f64 {
        self.oracle_grid_step
            .unwrap_or(if d <= 3 { 1e-2 } else { 5e-2 })
    }
}

/// A point `g_i = sum_{j >= i} u_j` of the passive cone, `u >= 0`.
///
/// The extreme rays are `j tau_j`, so `sum_i g_i = sum_j j u_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassiveConeVector {
    u: Vec<f64>,
}

impl PassiveConeVector {
    pub fn new(u: Vec<f64>) -> Result<Self> {
        if let Some((j, &v)) = u.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(ActivityError::Precondition(format!(
                "passive-cone weight u[{j}] = {v} must be finite and nonnegative"
            )));
        }
        Ok(Self { u })
    }

    pub fn weights(&self) -> &[f64] {
        &self.u
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut g = vec![0.0; self.u.len()];
        let mut acc = 0.0;
        for i in (0..self.u.len()).rev() {
            acc += self.u[i];
            g[i] = acc;
        }
        g
    }

    pub fn total(&self) -> f64 {
        self.u.iter().enumerate().map(|(j, u)| (j + 1) as f64 * u).sum()
    }

    /// `u_j = g_j - g_{j+1}` for a nonincreasing nonnegative `g`.
    pub fn from_diagonal(g: &[f64]) -> Result<Self> {
        let d = g.len();
        let u = (0..d)
            .map(|j| g[j] - if j + 1 < d { g[j + 1] } else { 0.0 })
            .collect();
        Self::new(u)
    }
}

/// Result of a cutting-plane solve.
#[derive(Debug, Clone)]
pub struct ConeSolution {
    /// Feasible primal diagonal.
    pub g: Vec<f64>,
    /// Passive-cone coordinates of `g`, when the cone was monotone.
    pub u: Option<PassiveConeVector>,
    /// Objective at the feasible `g`.
    pub value: f64,
    /// The other side of the bracket, attained by `witness`.
    pub bound: f64,
    pub gap: f64,
    /// Dual witness `sum_k y_k v_k v_k^dagger`; `Tr[witness rho] = bound`.
    pub witness: HermitianMatrix,
    pub cuts: usize,
}

struct Cut {
    v: Vec<C64>,
    /// Coefficients of the cut in the LP variables.
    a: Vec<f64>,
    b: f64,
}

/// Maps LP variables to the diagonal `g` and cut weights back to LP rows.
#[derive(Clone, Copy)]
struct Cone {
    monotone: bool,
}

impl Cone {
    fn to_g(self, x: &[f64]) -> Vec<f64> {
        if self.monotone {
            PassiveConeVector { u: x.to_vec() }.diagonal()
        } else {
            x.to_vec()
        }
    }

    /// Coefficients of `sum_i w_i g_i` in the LP variables.
    fn pull_back(self, w: &[f64]) -> Vec<f64> {
        if self.monotone {
            w.iter()
                .scan(0.0, |acc, wi| {
                    *acc += wi;
                    Some(*acc)
                })
                .collect()
        } else {
            w.to_vec()
        }
    }
}

fn cut_from(v: Vec<C64>, rho: &DensityMatrix, cone: Cone) -> Cut {
    let w: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    let b = rho.hermitian().expectation(&v).max(0.0);
    Cut {
        a: cone.pull_back(&w),
        v,
        b,
    }
}

fn coordinate_cut(i: usize, rho: &DensityMatrix, cone: Cone) -> Cut {
    let d = rho.dim();
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[i] = C64::new(1.0, 0.0);
    cut_from(v, rho, cone)
}

fn witness_from(cuts: &[Cut], y: &[f64], d: usize) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(d);
    for (c, &yk) in cuts.iter().zip(y) {
        if yk > 0.0 {
            m = &m + &ComplexMatrix::outer(&c.v, &c.v).scale(yk);
        }
    }
    HermitianMatrix::symmetrized(m)
}

fn check_objective(name: &'static str, c: &[f64], d: usize) -> Result<()> {
    if c.len() != d {
        return Err(ActivityError::DimensionMismatch {
            expected: d,
            found: c.len(),
        });
    }
    if let Some(&v) = c.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(ActivityError::InvalidOption { name, value: v });
    }
    Ok(())
}

fn diag_minus(g: &[f64], rho: &DensityMatrix, sign: f64) -> HermitianMatrix {
    // sign = +1: diag(g) - rho; sign = -1: rho - diag(g)
    let d = g.len();
    let m = ComplexMatrix::from_fn(d, |i, j| {
        let r = rho.entry(i, j);
        let dg = if i == j { g[i] } else { 0.0 };
        (C64::new(dg, 0.0) - r) * sign
    });
    HermitianMatrix::symmetrized(m)
}

/// Minimizes `sum_i cost_i g_i` subject to `diag(g) >= rho`, over the passive
/// cone when `monotone` is set and over `g >= 0` otherwise.
///
/// The returned witness `Y` is PSD with `Tr[Y rho] = bound` and satisfies the
/// dual constraints: `diag(Y) <= cost`, or for the monotone cone the partial
/// sums `sum_{i<=j} Y_ii <= sum_{i<=j} cost_i`.
pub fn min_cost_dominating(
    cost: &[f64],
    rho: &DensityMatrix,
    monotone: bool,
    opts: &SolverOptions,
) -> Result<ConeSolution> {
    opts.validate()?;
    let d = rho.dim();
    check_objective("cost", cost, d)?;
    let cone = Cone { monotone };
    let cx = cone.pull_back(cost);
    let mut cuts: Vec<Cut> = (0..d).map(|i| coordinate_cut(i, rho, cone)).collect();
    let objective = |x: &[f64]| cx.iter().zip(x).map(|(c, v)| c * v).sum::<f64>();
    // Shifting every g_i (u_d in the monotone cone) by |lambda_min| restores
    // feasibility; the eigenvectors with negative eigenvalues are the cuts.
    let probe = |x: &[f64], cuts: &mut Vec<Cut>| -> (f64, Vec<f64>) {
        let eig = diag_minus(&cone.to_g(x), rho, 1.0).eig();
        let shift = (-eig.values[0]).max(0.0);
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam < -opts.psd_tol || k == 0 && lam < 0.0 {
                cuts.push(cut_from(eig.vector(k), rho, cone));
            }
        }
        let mut xf = x.to_vec();
        if monotone {
            xf[d - 1] += shift;
        } else {
            xf.iter_mut().for_each(|v| *v += shift);
        }
        (objective(&xf), xf)
    };
    // Best feasible primal point so far, in LP coordinates.
    let mut incumbent: Option<(f64, Vec<f64>)> = None;

    loop {
        // dual master: max b.y  s.t.  sum_k a_k y_k <= cx, y >= 0
        let lp = LpProblem {
            sense: Sense::Maximize,
            objective: cuts.iter().map(|c| c.b).collect(),
            rows: (0..d)
                .map(|j| LpRow::le(cuts.iter().map(|c| c.a[j]).collect(), cx[j]))
                .collect(),
            upper: None,
        };
        let sol = dense_lp(&lp, opts.lp_tol)?;
        let x: Vec<f64> = sol.duals.iter().map(|v| v.max(0.0)).collect();
        let lower = sol.value;
        let n_before = cuts.len();
        let mut candidates = vec![probe(&x, &mut cuts)];
        // In-out step: also separate halfway towards the incumbent.
        if let Some((_, xi)) = &incumbent {
            let mid: Vec<f64> = x.iter().zip(xi).map(|(a, b)| 0.5 * (a + b)).collect();
            candidates.push(probe(&mid, &mut cuts));
        }
        for (val, xf) in candidates {
            if incumbent.as_ref().is_none_or(|(best, _)| val < *best) {
                incumbent = Some((val, xf));
            }
        }
        let best = incumbent.as_ref().expect("set above").0;
        let gap = (best - lower).max(0.0);

        if gap <= opts.gap_tol * best.abs().max(1.0) || cuts.len() == n_before {
            let (value, xf) = incumbent.expect("set above");
            let g = cone.to_g(&xf);
            return Ok(ConeSolution {
                value,
                bound: lower,
                gap,
                witness: witness_from(&cuts, &sol.x, d),
                cuts: cuts.len(),
                g,
                u: monotone.then_some(PassiveConeVector { u: xf }),
            });
        }
        if cuts.len() >= opts.max_cuts {
            return Err(ActivityError::NonConvergence {
                cuts: cuts.len(),
                lower,
                upper: best,
                gap,
            });
        }
    }
}

/// Maximizes `sum_i gain_i g_i` over the passive cone subject to
/// `diag(g) <= rho`.
///
/// The returned witness `Y` is PSD with `Tr[Y rho] = bound` and partial sums
/// `sum_{i<=j} Y_ii >= sum_{i<=j} gain_i`.
pub fn max_gain_dominated(gain: &[f64], rho: &DensityMatrix, opts: &SolverOptions) -> Result<ConeSolution> {
    opts.validate()?;
    let d = rho.dim();
    check_objective("gain", gain, d)?;
    let cone = Cone { monotone: true };
    let gx = cone.pull_back(gain);

    let rho_eig = rho.hermitian().eig();
    let kernel_tol = opts.psd_tol * 1e-3;
    let range: Vec<usize> = (0..d).filter(|&k| rho_eig.values[k] > kernel_tol).collect();

    let mut cuts: Vec<Cut> = (0..d).map(|i| coordinate_cut(i, rho, cone)).collect();
    // Directions in the kernel of rho admit no dominated weight at all.
    for k in (0..d).filter(|k| !range.contains(k)) {
        let v: Vec<C64> = rho_eig
            .vector(k)
            .into_iter()
            .map(|z| if z.norm_sqr() < 1e-14 { C64::new(0.0, 0.0) } else { z })
            .collect();
        let mut cut = cut_from(v, rho, cone);
        cut.b = 0.0;
        cuts.push(cut);
    }
    let objective = |x: &[f64]| gx.iter().zip(x).map(|(c, v)| c * v).sum::<f64>();
    // Scaling towards 0 restores feasibility; cuts come from the point itself
    // and from the boundary point it scales to.
    let probe = |x: &[f64], cuts: &mut Vec<Cut>| -> (f64, Vec<f64>) {
        let g = cone.to_g(x);
        let eig = diag_minus(&g, rho, -1.0).eig();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam < -opts.psd_tol || k == 0 && lam < 0.0 {
                cuts.push(cut_from(eig.vector(k), rho, cone));
            }
        }
        let s = feasible_scale(&g, &rho_eig, &range);
        if s < 1.0 && s > 0.0 {
            let scaled: Vec<f64> = g.iter().map(|v| v * s).collect();
            cuts.push(cut_from(diag_minus(&scaled, rho, -1.0).eig().vector(0), rho, cone));
        }
        let xf: Vec<f64> = x.iter().map(|v| v * s).collect();
        (objective(&xf), xf)
    };
    // Best feasible primal point so far, in LP coordinates.
    let mut incumbent: Option<(f64, Vec<f64>)> = None;

    loop {
        // dual master: min b.y  s.t.  sum_k a_k y_k >= gx, y >= 0
        let lp = LpProblem {
            sense: Sense::Minimize,
            objective: cuts.iter().map(|c| c.b).collect(),
            rows: (0..d)
                .map(|j| LpRow::ge(cuts.iter().map(|c| c.a[j]).collect(), gx[j]))
                .collect(),
            upper: None,
        };
        let sol = dense_lp(&lp, opts.lp_tol)?;
        let x: Vec<f64> = sol.duals.iter().map(|v| v.max(0.0)).collect();
        let upper = sol.value;
        let n_before = cuts.len();
        let mut candidates = vec![probe(&x, &mut cuts)];
        if let Some((_, xi)) = &incumbent {
            let mid: Vec<f64> = x.iter().zip(xi).map(|(a, b)| 0.5 * (a + b)).collect();
            candidates.push(probe(&mid, &mut cuts));
        }
        for (val, xf) in candidates {
            if incumbent.as_ref().is_none_or(|(best, _)| val > *best) {
                incumbent = Some((val, xf));
            }
        }
        let best = incumbent.as_ref().expect("set above").0;
        let gap = (upper - best).max(0.0);

        if gap <= opts.gap_tol * best.abs().max(1.0) || cuts.len() == n_before {
            let (value, xf) = incumbent.expect("set above");
            let u = PassiveConeVector { u: xf };
            return Ok(ConeSolution {
                g: u.diagonal(),
                u: Some(u),
                value,
                bound: upper,
                gap,
                witness: witness_from(&cuts, &sol.x, d),
                cuts: cuts.len(),
            });
        }
        if cuts.len() >= opts.max_cuts {
            return Err(ActivityError::NonConvergence {
                cuts: cuts.len(),
                lower: best,
                upper,
                gap,
            });
        }
    }
}

/// Largest `s` in `[0, 1]` with `rho - s diag(g) >= 0`, evaluated on the
/// range of `rho`.
fn feasible_scale(
    g: &[f64],
    rho_eig: &crate::linalg::EigenDecomposition,
    range: &[usize],
) -> f64 {
    let r = range.len();
    if g.iter().all(|&v| v == 0.0) {
        return 1.0;
    }
    let basis: Vec<Vec<C64>> = range.iter().map(|&k| rho_eig.vector(k)).collect();
    let lam: Vec<f64> = range.iter().map(|&k| rho_eig.values[k]).collect();
    let dg = ComplexMatrix::from_fn(r, |a, b| {
        basis[a]
            .iter()
            .zip(&basis[b])
            .zip(g)
            .map(|((x, y), gi)| x.conj() * y * *gi)
            .sum()
    });
    let f = |s: f64| -> (f64, f64) {
        let m = ComplexMatrix::from_fn(r, |a, b| {
            let base = if a == b { C64::new(lam[a], 0.0) } else { C64::new(0.0, 0.0) };
            base - dg.get(a, b) * s
        });
        let e = HermitianMatrix::symmetrized(m).eig();
        let v = e.vector(0);
        let slope = -HermitianMatrix::symmetrized(dg.clone()).expectation(&v);
        (e.values[0], slope)
    };

    let (f1, _) = f(1.0);
    if f1 >= 0.0 {
        return 1.0;
    }
    // Newton from the infeasible side; concavity keeps iterates at or above the root.
    let mut hi = 1.0;
    let mut fh = f1;
    for _ in 0..60 {
        let (_, slope) = f(hi);
        if slope >= 0.0 {
            break;
        }
        let next = hi - fh / slope;
        if !(next < hi && next > 0.0) {
            break;
        }
        let step = hi - next;
        hi = next;
        fh = f(hi).0;
        if fh >= 0.0 || step <= 1e-16 * hi {
            break;
        }
    }
    if fh >= 0.0 {
        return hi;
    }
    let mut delta = 1e-15 * hi.max(1e-300);
    while delta < hi {
        let s = hi - delta;
        if f(s).0 >= 0.0 {
            return s;
        }
        delta *= 10.0;
    }
    // Fallback bisection on [0, hi].
    let (mut lo, mut up) = (0.0, hi);
    for _ in 0..100 {
        let mid = 0.5 * (lo + up);
        if f(mid).0 >= 0.0 {
            lo = mid;
        } else {
            up = mid;
        }
    }
    lo
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Sampler;
    use crate::states::maximally_coherent;
    use approx::assert_abs_diff_eq;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn maximally_mixed_is_its_own_dominator() {
        for d in 1..=5 {
            let sol = min_cost_dominating(&vec![1.0; d], &DensityMatrix::maximally_mixed(d), true, &opts()).unwrap();
            assert_abs_diff_eq!(sol.value, 1.0, epsilon = 1e-9);
            for gi in &sol.g {
                assert_abs_diff_eq!(*gi, 1.0 / d as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn excited_qubit_needs_full_cone() {
        let rho = DensityMatrix::basis(1, 2).unwrap();
        let sol = min_cost_dominating(&[1.0, 1.0], &rho, true, &opts()).unwrap();
        assert_abs_diff_eq!(sol.value, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.g[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.g[1], 1.0, epsilon = 1e-9);
        let sol = max_gain_dominated(&[1.0, 1.0], &rho, &opts()).unwrap();
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn coherent_qubit_orthant() {
        let rho = DensityMatrix::new(
            ComplexMatrix::from_real_rows(&[vec![0.5, 0.25], vec![0.25, 0.5]]).unwrap(),
        )
        .unwrap();
        let sol = min_cost_dominating(&[1.0, 1.0], &rho, false, &opts()).unwrap();
        assert_abs_diff_eq!(sol.value, 1.5, epsilon = 1e-8);
        assert_abs_diff_eq!(sol.g[0], 0.75, epsilon = 1e-4);
        assert_abs_diff_eq!(sol.g[1], 0.75, epsilon = 1e-4);
        assert!(sol.gap <= 1e-8);
    }

    #[test]
    fn dominated_examples() {
        let passive = DensityMatrix::from_diagonal(&[0.6, 0.3, 0.1]).unwrap();
        let sol = max_gain_dominated(&[1.0; 3], &passive, &opts()).unwrap();
        assert_abs_diff_eq!(sol.value, 1.0, epsilon = 1e-9);

        let rho = DensityMatrix::from_diagonal(&[0.3, 0.7]).unwrap();
        let sol = max_gain_dominated(&[1.0; 2], &rho, &opts()).unwrap();
        assert_abs_diff_eq!(sol.value, 0.6, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.g[0], 0.3, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.g[1], 0.3, epsilon = 1e-9);
    }

    #[test]
    fn phi_plus_needs_trace_d() {
        for d in 2..=6 {
            let rho = maximally_coherent(d).unwrap();
            let sol = min_cost_dominating(&vec![1.0; d], &rho, true, &opts()).unwrap();
            assert_abs_diff_eq!(sol.value, d as f64, epsilon = 1e-8);
            let sol = min_cost_dominating(&vec![1.0; d], &rho, false, &opts()).unwrap();
            assert_abs_diff_eq!(sol.value, d as f64, epsilon = 1e-8);
        }
    }

    #[test]
    fn witnesses_satisfy_dual_constraints() {
        let mut s = Sampler::new(21);
        for k in 0..200 {
            let d = 1 + k % 6;
            let rho = s.density(d);
            let ones = vec![1.0; d];
            for monotone in [true, false] {
                let sol = min_cost_dominating(&ones, &rho, monotone, &opts()).unwrap();
                assert!(sol.gap <= 1e-7, "gap {} at d={d}", sol.gap);
                assert!(sol.witness.min_eigenvalue() >= -1e-9);
                let tr = sol.witness.matrix().trace_product(rho.matrix()).re;
                assert_abs_diff_eq!(tr, sol.bound, epsilon = 1e-9);
                let diag = sol.witness.matrix().diagonal_real();
                let mut acc = 0.0;
                for (j, y) in diag.iter().enumerate() {
                    if monotone {
                        acc += y;
                        assert!(acc <= (j + 1) as f64 + 1e-9);
                    } else {
                        assert!(*y <= 1.0 + 1e-9);
                    }
                }
                // primal feasibility of g
                let slack = diag_minus(&sol.g, &rho, 1.0).min_eigenvalue();
                assert!(slack >= -1e-12, "{slack}");
                if monotone {
                    assert!(sol.g.windows(2).all(|w| w[0] >= w[1]));
                }
            }
            let sol = max_gain_dominated(&ones, &rho, &opts()).unwrap();
            assert!(sol.gap <= 1e-7, "gap {} at d={d}", sol.gap);
            assert!(diag_minus(&sol.g, &rho, -1.0).min_eigenvalue() >= -1e-12);
            let tr = sol.witness.matrix().trace_product(rho.matrix()).re;
            assert_abs_diff_eq!(tr, sol.bound, epsilon = 1e-9);
        }
    }

    #[test]
    fn rank_deficient_states_converge() {
        let mut s = Sampler::new(5);
        for k in 0..100 {
            let d = 2 + k % 5;
            let rho = s.density_with_rank(d, 1 + k % (d - 1));
            let ones = vec![1.0; d];
            let sol = max_gain_dominated(&ones, &rho, &opts()).unwrap();
            assert!(sol.gap <= 1e-7);
            let sol = min_cost_dominating(&ones, &rho, true, &opts()).unwrap();
            assert!(sol.gap <= 1e-7);
        }
    }

    #[test]
    fn rejects_bad_objective() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(min_cost_dominating(&[1.0], &rho, true, &opts()).is_err());
        assert!(min_cost_dominating(&[1.0, -1.0], &rho, true, &opts()).is_err());
        let bad = SolverOptions {
            max_cuts: 0,
            ..opts()
        };
        assert!(max_gain_dominated(&[1.0, 1.0], &rho, &bad).is_err());
    }

    #[test]
    fn cut_budget_reports_bounds() {
        let rho = maximally_coherent(4).unwrap();
        let tight = SolverOptions {
            max_cuts: 4,
            ..opts()
        };
        match min_cost_dominating(&[1.0; 4], &rho, false, &tight) {
            Err(ActivityError::NonConvergence { lower, upper, .. }) => assert!(lower <= upper),
            Ok(sol) => assert!(sol.gap <= 1e-9),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn passive_cone_vector_roundtrip() {
        let v = PassiveConeVector::new(vec![0.5, 0.0, 0.25]).unwrap();
        assert_eq!(v.diagonal(), vec![0.75, 0.25, 0.25]);
        assert_abs_diff_eq!(v.total(), 0.5 + 0.75);
        let back = PassiveConeVector::from_diagonal(&v.diagonal()).unwrap();
        assert_eq!(back.weights(), v.weights());
        assert!(PassiveConeVector::new(vec![-1.0]).is_err());
    }
}
