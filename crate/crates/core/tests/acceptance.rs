//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::{Duration, Instant};

use activeres::channels::{
    counterexample_channel, counterexample_map, energy_preserving_map, CorrelationMatrix, EpcprChannel,
};
use activeres::checks::sample_pco;
use activeres::convertibility::{decide_diagonal, decide_full_coherence, Verdict, DEFAULT_TOL};
use activeres::monotones::{
    activity_weight, ergotropy_upper_bounds, inverse_max_relent_activity, max_relent_activity,
    max_relent_coherence, relent_activity, robustness_of_activity,
};
use activeres::parallel::{map_indexed, Execution};
use activeres::sampling::{derive_seed, Sampler};
use activeres::solver::{oracle_passive_grid, GridObjective, SolverOptions};
use activeres::states::{ergotropy, maximally_coherent};
use activeres::witnesses::{ep_advantage, optimal_witness};
use activeres::{ComplexMatrix, DensityMatrix, HamiltonianSpectrum, ToleranceConfig, C64};

const SEED: u64 = 0x5eed_ac71;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- test-side reference computations ----

fn frobenius(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            s += (a.get(i, j) - b.get(i, j)).norm_sqr();
        }
    }
    s.sqrt()
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Ergotropy of a diagonal state by brute force over level permutations.
fn diagonal_ergotropy_brute(pops: &[f64], energies: &[f64]) -> f64 {
    let mean: f64 = pops.iter().zip(energies).map(|(p, e)| p * e).sum();
    let best = all_permutations(pops.len())
        .into_iter()
        .map(|perm| perm.iter().enumerate().map(|(i, &k)| pops[k] * energies[i]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    mean - best
}

fn is_passive_ref(m: &ComplexMatrix, tol: f64) -> bool {
    let d = m.dim();
    for i in 0..d {
        for j in 0..d {
            if i != j && m.get(i, j).norm() > tol {
                return false;
            }
        }
    }
    (0..d - 1).all(|i| m.get(i, i).re >= m.get(i + 1, i + 1).re - tol) && m.get(d - 1, d - 1).re >= -tol
}

fn apply_epcpr_ref(chan: &EpcprChannel, rho: &DensityMatrix) -> ComplexMatrix {
    let d = rho.dim();
    let xi = chan.xi().matrix().matrix();
    let tau = chan.tau().probs();
    let p = chan.p();
    let mut re = vec![vec![0.0; d]; d];
    let mut im = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut z = xi.get(i, j) * rho.entry(i, j) * p;
            if i == j {
                z += C64::new((1.0 - p) * tau[i], 0.0);
            }
            re[i][j] = z.re;
            im[i][j] = z.im;
        }
    }
    ComplexMatrix::from_parts(&re, &im).unwrap()
}

fn min_eig(m: &ComplexMatrix) -> f64 {
    let h = nalgebra::DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j));
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

fn advantage_ref(rho: &DensityMatrix, xi: &ComplexMatrix) -> f64 {
    let d = rho.dim();
    let mut num = 0.0;
    for i in 0..d {
        for j in 0..d {
            num += (xi.get(i, j) * rho.entry(j, i)).re;
        }
    }
    let mut acc = 0.0;
    let mut den = f64::NEG_INFINITY;
    for j in 0..d {
        acc += xi.get(j, j).re;
        den = den.max(acc / (j + 1) as f64);
    }
    num / den
}

// ---- criteria ----

fn criterion_1() -> Outcome {
    let rho = DensityMatrix::from_diagonal(&[1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0]).unwrap();
    let h = HamiltonianSpectrum::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let out = counterexample_channel(&rho).unwrap();
    let e_in = ergotropy(&rho, &h).unwrap();
    let e_out = ergotropy(&out, &h).unwrap();
    let brute_in = diagonal_ergotropy_brute(&rho.populations(), h.energies());
    let brute_out = diagonal_ergotropy_brute(&out.populations(), h.energies());
    let err = [
        (e_in - 2.0 / 3.0).abs(),
        (e_out - 1.0 / 9.0).abs(),
        (brute_in - 2.0 / 3.0).abs(),
        (brute_out - 1.0 / 9.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let map = counterexample_map();
    let mut s = Sampler::new(SEED);
    let mut all_passive = true;
    for _ in 0..2000 {
        let tau = s.passive(4).to_density();
        let img = map.apply(tau.matrix()).unwrap();
        all_passive &= is_passive_ref(&img, 1e-12);
    }
    // the extreme points themselves
    for j in 1..=4 {
        let tau = activeres::states::extreme_passive(j, 4).unwrap();
        all_passive &= is_passive_ref(&map.apply(tau.matrix()).unwrap(), 1e-12);
    }
    outcome(
        err <= 1e-12 && all_passive,
        format!("Erg(rho) = {e_in:.15}, Erg(C(rho)) = {e_out:.15}, max error {err:.1e}, passive images: {all_passive}"),
    )
}

fn criterion_2() -> Outcome {
    let opts = SolverOptions::default();
    let mut worst_r: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    for d in 2..=6 {
        let top = DensityMatrix::basis(d - 1, d).unwrap();
        let ar = robustness_of_activity(&top, &opts).unwrap().value;
        let aw = activity_weight(&top, &opts).unwrap().value;
        worst_r = worst_r.max((ar - (d - 1) as f64).abs());
        worst_w = worst_w.max((aw - 1.0).abs());
    }
    outcome(
        worst_r <= 1e-6 && worst_w <= 1e-6,
        format!("max |A_r - (d-1)| = {worst_r:.1e}, max |A_w - 1| = {worst_w:.1e}, d = 2..6"),
    )
}

fn criterion_3() -> Outcome {
    let opts = SolverOptions::default();
    let n_states = 1000;
    let n_xi = 1000;
    let results = map_indexed(Execution::Parallel, n_states, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 3, i as u64));
        let d = s.range(2, 4);
        let rho = s.density(d);
        let bound = max_relent_activity(&rho, &opts)?.value.exp2();
        let opt = optimal_witness(&rho, &opts)?;
        let w = opt.witness.matrix().matrix();
        // the witness must be valid before its advantage means anything
        let mut acc = 0.0;
        let mut valid = min_eig(w) >= -1e-9;
        for j in 0..d {
            acc += w.get(j, j).re;
            valid &= acc <= (j + 1) as f64 + 1e-9;
        }
        let xi_opt = w.scale(1.0 / d as f64);
        let attained = advantage_ref(&rho, &xi_opt);
        let lib_attained = ep_advantage(&rho, &opt.witness.to_subcorrelation())?;
        let mut excess = f64::NEG_INFINITY;
        for _ in 0..n_xi {
            let xi = s.subcorrelation(d);
            excess = excess.max(advantage_ref(&rho, xi.matrix().matrix()) - bound);
        }
        Ok::<_, activeres::ActivityError>((
            excess,
            (attained - bound).abs().max((lib_attained - attained).abs()),
            valid,
        ))
    });
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_attain: f64 = 0.0;
    let mut errors = 0;
    let mut invalid = 0;
    for r in results {
        match r {
            Ok((e, a, v)) => {
                worst_excess = worst_excess.max(e);
                worst_attain = worst_attain.max(a);
                invalid += usize::from(!v);
            }
            Err(_) => errors += 1,
        }
    }
    outcome(
        errors == 0 && invalid == 0 && worst_excess <= 1e-6 && worst_attain <= 1e-6,
        format!(
            "{n_states} states x {n_xi} xi: max(adv - 2^Rmax) = {worst_excess:.2e}, max |adv_opt - 2^Rmax| = {worst_attain:.1e}, invalid witnesses {invalid}, solver errors {errors}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let opts = SolverOptions::default();
    let tol = ToleranceConfig::default();
    let n_states = 100;
    let results = map_indexed(Execution::Parallel, n_states, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 4, i as u64));
        let d = s.range(2, 6);
        let rho = s.density(d);
        let r = max_relent_coherence(&rho, &opts)?;
        let bound = r.value.exp2();
        let cert = r.certificate.and_then(|c| c.correlation).expect("coherence certificate");
        let cert_ok = CorrelationMatrix::new(cert.matrix().matrix().clone(), &tol).is_ok();
        let attained = advantage_ref(&rho, cert.matrix().matrix());
        let mut excess = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let xi = s.correlation(d);
            excess = excess.max(advantage_ref(&rho, xi.matrix().matrix()) - bound);
        }
        Ok::<_, activeres::ActivityError>((excess, (attained - bound).abs(), cert_ok))
    });
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_attain: f64 = 0.0;
    let mut bad = 0;
    for r in results {
        match r {
            Ok((e, a, ok)) => {
                worst_excess = worst_excess.max(e);
                worst_attain = worst_attain.max(a);
                bad += usize::from(!ok);
            }
            Err(_) => bad += 1,
        }
    }
    let mut worst_phi: f64 = 0.0;
    for d in 2..=6 {
        let v = max_relent_coherence(&maximally_coherent(d).unwrap(), &opts).unwrap().value;
        worst_phi = worst_phi.max((v.exp2() - d as f64).abs());
    }
    outcome(
        bad == 0 && worst_excess <= 1e-6 && worst_attain <= 1e-6 && worst_phi <= 1e-9,
        format!(
            "max(Tr[xi rho] - 2^Rcoh) = {worst_excess:.2e}, certificate gap {worst_attain:.1e}, max |2^Rcoh(phi+) - d| = {worst_phi:.1e}, bad certificates {bad}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let opts = SolverOptions::default();
    let n = 1000;
    let results = map_indexed(Execution::Parallel, n, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 5, i as u64));
        let d = s.range(2, 5);
        let rho = s.density(d);
        let chan = s.epcpr(d);
        let out = DensityMatrix::new(apply_epcpr_ref(&chan, &rho))?;
        let values = |x: &DensityMatrix| -> activeres::Result<[f64; 5]> {
            Ok([
                activity_weight(x, &opts)?.value,
                robustness_of_activity(x, &opts)?.value,
                max_relent_activity(x, &opts)?.value,
                inverse_max_relent_activity(x, &opts)?.value,
                relent_activity(x).value,
            ])
        };
        let before = values(&rho)?;
        let after = values(&out)?;
        let mut slack = [f64::NEG_INFINITY; 5];
        for k in 0..5 {
            slack[k] = if before[k] == f64::INFINITY { f64::NEG_INFINITY } else { after[k] - before[k] };
        }
        Ok::<_, activeres::ActivityError>(slack)
    });
    let names = ["A_w", "A_r", "R_max", "inv R_max", "R"];
    let mut worst = [f64::NEG_INFINITY; 5];
    let mut errors = 0;
    for r in results {
        match r {
            Ok(sl) => {
                for k in 0..5 {
                    worst[k] = worst[k].max(sl[k]);
                }
            }
            Err(_) => errors += 1,
        }
    }
    let summary: Vec<String> = names.iter().zip(worst).map(|(n, w)| format!("{n} {w:.1e}")).collect();
    outcome(
        errors == 0 && worst.iter().all(|&w| w <= 1e-6),
        format!("{n} channels, worst increase: {}, solver errors {errors}", summary.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let n_pos = 1000;
    let pos = map_indexed(Execution::Parallel, n_pos, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 6, i as u64));
        let d = s.range(2, 4);
        let diagonal = i % 2 == 0;
        let rho = if diagonal { s.diagonal_density(d) } else { s.density(d) };
        let chan = s.epcpr(d);
        let target = DensityMatrix::new(apply_epcpr_ref(&chan, &rho)).unwrap();
        let rep = if diagonal {
            decide_diagonal(&rho, &target, DEFAULT_TOL).unwrap()
        } else {
            decide_full_coherence(&rho, &target, DEFAULT_TOL).unwrap()
        };
        match (rep.verdict, rep.certificate) {
            (Verdict::Convertible, Some(cert)) => frobenius(&apply_epcpr_ref(&cert, &rho), target.matrix()),
            _ => f64::INFINITY,
        }
    });
    let worst_pos = pos.iter().cloned().fold(0.0, f64::max);

    // pairs the decider rejects, then a search for a channel that would hit them
    let n_neg = 100;
    let mut negatives = Vec::new();
    let mut k = 0u64;
    while negatives.len() < n_neg {
        let mut s = Sampler::new(derive_seed(SEED ^ 0x66, k));
        k += 1;
        let d = s.range(2, 4);
        let diagonal = k.is_multiple_of(2);
        let (rho, target) = if diagonal {
            (s.diagonal_density(d), s.diagonal_density(d))
        } else {
            (s.density(d), s.density(d))
        };
        let rep = if diagonal {
            decide_diagonal(&rho, &target, DEFAULT_TOL).unwrap()
        } else {
            decide_full_coherence(&rho, &target, DEFAULT_TOL).unwrap()
        };
        if rep.verdict == Verdict::NotConvertible {
            negatives.push((rho, target, k));
        }
    }
    let misses = map_indexed(Execution::Parallel, n_neg, |i| {
        let (rho, target, k) = &negatives[i];
        let mut s = Sampler::new(derive_seed(SEED ^ 0x666, *k));
        (0..1000)
            .map(|_| frobenius(&apply_epcpr_ref(&s.epcpr(rho.dim()), rho), target.matrix()))
            .fold(f64::INFINITY, f64::min)
    });
    let closest = misses.iter().cloned().fold(f64::INFINITY, f64::min);
    outcome(
        worst_pos <= 1e-9 && closest > 1e-6,
        format!(
            "{n_pos} reachable pairs: worst reconstruction {worst_pos:.1e}; {n_neg} rejected pairs x 1000 channels: closest miss {closest:.2e}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let opts = SolverOptions::default();
    let n = 100;
    let results = map_indexed(Execution::Parallel, n, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 7, i as u64));
        let d = s.range(2, 4);
        let rho = s.density(d);
        let step = opts.grid_step_for(d);
        let allowed = 2.0 * step * d as f64;
        let aw = activity_weight(&rho, &opts)?;
        let ar = robustness_of_activity(&rho, &opts)?;
        let rmax = (ar.value + 1.0).log2();
        let rel = relent_activity(&rho).value;
        let grid_w = oracle_passive_grid(&rho, GridObjective::DominatedWeight, step)?;
        let grid_dmax = oracle_passive_grid(&rho, GridObjective::Dmax, step)?;
        let grid_rel = oracle_passive_grid(&rho, GridObjective::Relent, step)?;
        let diffs = [
            (aw.value - (1.0 - grid_w)).abs(),
            (ar.value - (grid_dmax.exp2() - 1.0)).abs(),
            (rmax - grid_dmax).abs(),
            (rel - grid_rel).abs(),
        ];
        let ratio = diffs.iter().fold(0.0f64, |m, x| m.max(x / allowed));
        Ok::<_, activeres::ActivityError>((ratio, aw.gap.max(ar.gap)))
    });
    let mut worst_ratio: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut errors = 0;
    for r in results {
        match r {
            Ok((ratio, gap)) => {
                worst_ratio = worst_ratio.max(ratio);
                worst_gap = worst_gap.max(gap);
            }
            Err(_) => errors += 1,
        }
    }
    outcome(
        errors == 0 && worst_ratio <= 1.0 && worst_gap <= 1e-7,
        format!(
            "{n} states: worst |solver - grid| / (2 step d) = {worst_ratio:.3}, worst gap {worst_gap:.1e}, solver errors {errors}"
        ),
    )
}

fn criterion_8() -> Outcome {
    let opts = SolverOptions::default();
    let n = 1000;
    let results = map_indexed(Execution::Parallel, n, |i| {
        let mut s = Sampler::new(derive_seed(SEED ^ 8, i as u64));
        let d = s.range(2, 5);
        let rho = s.density(d);
        let h = s.spectrum(d);
        let aw = activity_weight(&rho, &opts)?.value;
        let ar = robustness_of_activity(&rho, &opts)?.value;
        let b = ergotropy_upper_bounds(&rho, &h, &opts)?;
        let erg = ergotropy(&rho, &h)?;
        let e = h.energies();
        let mean: f64 = (0..d).map(|k| rho.population(k) * e[k]).sum();
        // 0 <= Erg <= <H> - E_1
        Ok::<_, activeres::ActivityError>([
            ar / (d - 1) as f64 - aw,
            erg - b.weight_bound,
            erg - b.robustness_bound,
            (-erg).max(erg - (mean - e[0])),
        ])
    });
    let mut worst = [f64::NEG_INFINITY; 4];
    let mut errors = 0;
    for r in results {
        match r {
            Ok(sl) => {
                for k in 0..4 {
                    worst[k] = worst[k].max(sl[k]);
                }
            }
            Err(_) => errors += 1,
        }
    }
    outcome(
        errors == 0 && worst.iter().all(|&w| w <= 1e-7),
        format!(
            "{n} states: A_r/(d-1) - A_w {:.1e}, Erg - weight bound {:.1e}, Erg - robustness bound {:.1e}, trivial bounds {:.1e}, solver errors {errors}",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

fn criterion_9() -> Outcome {
    let tol = ToleranceConfig::default();
    let n = 100;
    let mut worst_defect: f64 = 0.0;
    let mut worst_adjoint: f64 = 0.0;
    let mut bad_corr = 0;
    let mut bad_passive = 0;
    for i in 0..n {
        let mut s = Sampler::new(derive_seed(SEED ^ 9, i as u64));
        let d = s.range(2, 5);
        let xi = s.correlation(d);
        let x = xi.matrix().matrix();
        let ep = energy_preserving_map(x);
        // Pi(E(B)) against E(Pi(B)) on every matrix unit B = |a><b|
        for a in 0..d {
            for b in 0..d {
                let unit = ComplexMatrix::unit(d, a, b);
                let e_of = ep.apply(&unit).unwrap();
                let pi_of_e = passivize_ref(&e_of);
                let e_of_pi = ep.apply(&passivize_ref(&unit)).unwrap();
                worst_defect = worst_defect.max(frobenius(&pi_of_e, &e_of_pi));
            }
        }
        let phi = maximally_coherent(d).unwrap();
        let back = ep.adjoint_apply(phi.matrix()).unwrap().scale(d as f64);
        // for a Schur map the adjoint multiplies by conj(xi)
        let neg_im: Vec<Vec<f64>> = x.imag_rows().iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let conj = ComplexMatrix::from_parts(&x.real_rows(), &neg_im).unwrap();
        worst_adjoint = worst_adjoint.max(frobenius(&back, &conj));
        bad_corr += usize::from(CorrelationMatrix::new(back, &tol).is_err());

        let (pco, _) = sample_pco(&mut s, d);
        for _ in 0..10 {
            let tau = s.passive(d).to_density();
            bad_passive += usize::from(!is_passive_ref(&pco.apply(tau.matrix()).unwrap(), 1e-12));
        }
    }
    outcome(
        worst_defect <= 1e-12 && worst_adjoint <= 1e-12 && bad_corr == 0 && bad_passive == 0,
        format!(
            "{n} channels: max ||Pi.E - E.Pi|| = {worst_defect:.1e}, d C^dagger(phi+) vs conj(xi) {worst_adjoint:.1e}, invalid correlation {bad_corr}, active PCO outputs {bad_passive}"
        ),
    )
}

/// `Pi(X) = sum_i X_ii tau_i` with `tau_i` uniform on the lowest `i` levels.
fn passivize_ref(x: &ComplexMatrix) -> ComplexMatrix {
    let d = x.dim();
    let mut diag = vec![C64::new(0.0, 0.0); d];
    for i in 0..d {
        for slot in diag.iter_mut().take(i + 1) {
            *slot += x.get(i, i) / (i + 1) as f64;
        }
    }
    let re: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { diag[i].re } else { 0.0 }).collect()).collect();
    let im: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { diag[i].im } else { 0.0 }).collect()).collect();
    ComplexMatrix::from_parts(&re, &im).unwrap()
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        (1, "counterexample regression", criterion_1, Some(Duration::from_secs(1))),
        (2, "maximal robustness", criterion_2, Some(Duration::from_secs(10))),
        (3, "operational advantage theorem", criterion_3, Some(Duration::from_secs(300))),
        (4, "coherence max-relative-entropy theorem", criterion_4, None),
        (5, "second law under EPCPR channels", criterion_5, None),
        (6, "convertibility iff", criterion_6, None),
        (7, "solver/oracle agreement", criterion_7, None),
        (8, "bounds suite", criterion_8, None),
        (9, "passivization suite", criterion_9, None),
    ];
    let mut failed = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = out.pass && in_time;
        failed += usize::from(!pass);
        let limit_note = limit.map(|l| format!(" (limit {:.0?})", l)).unwrap_or_default();
        println!(
            "{} criterion {id} {name}: {} [{:.2?}{limit_note}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
