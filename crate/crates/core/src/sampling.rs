//! Seeded random instances for tests, property suites and benchmarks.
//!
//! Every sampler is a pure function of its seed. Correlation matrices are
//! Gram matrices of random unit vectors, passive distributions are sorted
//! flat-Dirichlet draws and states are normalized complex Wishart draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channels::{ActivityBreakingChannel, CorrelationMatrix, EpcprChannel, SubCorrelationMatrix};
use crate::linalg::{ComplexMatrix, HermitianMatrix, C64};
use crate::states::{DensityMatrix, HamiltonianSpectrum, PassiveDistribution};

/// Derives an independent seed for item `index` of a seeded batch.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    fn gaussian(&mut self) -> C64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        C64::new(re, im)
    }

    /// Haar-random unit vector in `C^d`.
    pub fn unit_vector(&mut self, d: usize) -> Vec<C64> {
        loop {
            let v: Vec<C64> = (0..d).map(|_| self.gaussian()).collect();
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n > 1e-12 {
                return v.into_iter().map(|z| z / n).collect();
            }
        }
    }

    /// Strictly increasing energies starting at 0 with gaps in `[0.1, 2)`.
    pub fn spectrum(&mut self, d: usize) -> HamiltonianSpectrum {
        let mut e = 0.0;
        let energies = (0..d)
            .map(|i| {
                if i > 0 {
                    e += self.rng.random_range(0.1..2.0);
                }
                e
            })
            .collect();
        HamiltonianSpectrum::new(energies).expect("increasing by construction")
    }

    /// Flat-Dirichlet probability vector.
    pub fn simplex(&mut self, d: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut self.rng)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    pub fn passive(&mut self, d: usize) -> PassiveDistribution {
        let mut p = self.simplex(d);
        p.sort_by(|a, b| b.total_cmp(a));
        PassiveDistribution::from_trusted(p)
    }

    /// Normalized complex Wishart state `G G^dagger / Tr`.
    pub fn density(&mut self, d: usize) -> DensityMatrix {
        self.density_with_rank(d, d)
    }

    pub fn density_with_rank(&mut self, d: usize, rank: usize) -> DensityMatrix {
        let cols: Vec<Vec<C64>> = (0..rank.max(1))
            .map(|_| (0..d).map(|_| self.gaussian()).collect())
            .collect();
        let mut m = ComplexMatrix::zeros(d);
        for c in &cols {
            m = &m + &ComplexMatrix::outer(c, c);
        }
        let tr = m.trace().re;
        DensityMatrix::from_trusted(m.scale(1.0 / tr))
    }

    /// Random state diagonal in the energy basis.
    pub fn diagonal_density(&mut self, d: usize) -> DensityMatrix {
        let p = self.simplex(d);
        DensityMatrix::from_trusted(ComplexMatrix::from_real_diagonal(&p))
    }

    pub fn pure_state(&mut self, d: usize) -> DensityMatrix {
        let v = self.unit_vector(d);
        DensityMatrix::from_trusted(ComplexMatrix::outer(&v, &v))
    }

    /// Gram matrix of `d` random unit vectors.
    pub fn correlation(&mut self, d: usize) -> CorrelationMatrix {
        let vs: Vec<Vec<C64>> = (0..d).map(|_| self.unit_vector(d)).collect();
        let m = ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                vs[j].iter().zip(&vs[i]).map(|(a, b)| a.conj() * b).sum()
            }
        });
        CorrelationMatrix::from_trusted(HermitianMatrix::symmetrized(m))
    }

    /// `D xi D` with a random correlation `xi` and `D_ii^2` uniform in `[0, 1]`.
    pub fn subcorrelation(&mut self, d: usize) -> SubCorrelationMatrix {
        let xi = self.correlation(d);
        let scale: Vec<f64> = (0..d).map(|_| self.uniform().sqrt()).collect();
        let m = ComplexMatrix::from_fn(d, |i, j| xi.matrix().matrix().get(i, j) * scale[i] * scale[j]);
        SubCorrelationMatrix::from_trusted(HermitianMatrix::symmetrized(m))
    }

    pub fn epcpr(&mut self, d: usize) -> EpcprChannel {
        let p = self.uniform();
        let xi = self.correlation(d);
        let tau = self.passive(d);
        EpcprChannel::from_parts_trusted(p, xi, tau)
    }

    /// Haar-random unitary, columns from Gram-Schmidt on a Ginibre matrix.
    pub fn unitary(&mut self, d: usize) -> ComplexMatrix {
        loop {
            let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
            let mut ok = true;
            for _ in 0..d {
                let mut v: Vec<C64> = (0..d).map(|_| self.gaussian()).collect();
                for q in &cols {
                    let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= overlap * qi;
                    }
                }
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if n < 1e-10 {
                    ok = false;
                    break;
                }
                cols.push(v.into_iter().map(|z| z / n).collect());
            }
            if ok {
                return ComplexMatrix::from_fn(d, |i, j| cols[j][i]);
            }
        }
    }

    /// Rank-one POVM onto a Haar-random orthonormal basis.
    pub fn orthonormal_povm(&mut self, d: usize) -> ActivityBreakingChannel {
        let u = self.unitary(d);
        let basis: Vec<Vec<C64>> = (0..d).map(|j| (0..d).map(|i| u.get(i, j)).collect()).collect();
        ActivityBreakingChannel::from_orthonormal_basis(&basis)
    }
}

pub fn sample_correlation_matrix(d: usize, seed: u64) -> CorrelationMatrix {
    Sampler::new(seed).correlation(d)
}

pub fn sample_passive(d: usize, seed: u64) -> PassiveDistribution {
    Sampler::new(seed).passive(d)
}

pub fn sample_epcpr(d: usize, seed: u64) -> EpcprChannel {
    Sampler::new(seed).epcpr(d)
}

pub fn sample_density(d: usize, seed: u64) -> DensityMatrix {
    Sampler::new(seed).density(d)
}
