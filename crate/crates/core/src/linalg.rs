//! Dense complex Hermitian linear algebra.
//!
//! Matrices are stored as `nalgebra::DMatrix<Complex64>`; row and column
//! index `i` (0-based) is the energy level `i + 1`. The eigendecomposition is
//! delegated to nalgebra's Hermitian tridiagonal QR and re-sorted ascending.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ActivityError, Result};

pub type C64 = Complex64;

/// A square complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::MatrixJson", into = "crate::io::MatrixJson")]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        write!(f, "ComplexMatrix({d}x{d}) [")?;
        for i in 0..d {
            write!(f, "\n  ")?;
            for j in 0..d {
                let z = self.0[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
        }
        write!(f, "\n]")
    }
}

impl ComplexMatrix {
    /// Wraps an nalgebra matrix after checking shape and finiteness.
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(ActivityError::NotSquare {
                rows: m.nrows(),
                row: 0,
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(ActivityError::EmptyDimension);
        }
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(ActivityError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let d = re.len();
        if d == 0 {
            return Err(ActivityError::EmptyDimension);
        }
        if im.len() != d {
            return Err(ActivityError::DimensionMismatch {
                expected: d,
                found: im.len(),
            });
        }
        for (row, (r, i)) in re.iter().zip(im).enumerate() {
            if r.len() != d {
                return Err(ActivityError::NotSquare {
                    rows: d,
                    row,
                    cols: r.len(),
                });
            }
            if i.len() != d {
                return Err(ActivityError::NotSquare {
                    rows: d,
                    row,
                    cols: i.len(),
                });
            }
        }
        Self::from_dmatrix(DMatrix::from_fn(d, d, |i, j| C64::new(re[i][j], im[i][j])))
    }

    /// Real matrix from row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let zeros: Vec<Vec<f64>> = rows.iter().map(|r| vec![0.0; r.len()]).collect();
        Self::from_parts(rows, &zeros)
    }

    pub(crate) fn from_fn(d: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(d, d, f))
    }

    pub fn zeros(d: usize) -> Self {
        Self(DMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        Self(DMatrix::identity(d, d))
    }

    /// The all-ones matrix `J`.
    pub fn ones(d: usize) -> Self {
        Self(DMatrix::from_element(d, d, C64::new(1.0, 0.0)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        Self::from_fn(d, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// The matrix unit `|i><j|`.
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(d);
        m.0[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    /// `|v><w|`.
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let d = v.len();
        Self::from_fn(d, |i, j| v[i] * w[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: C64) {
        self.0[(i, j)] = z;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.0[(i, j)].re).collect())
            .collect()
    }

    pub fn imag_rows(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.0[(i, j)].im).collect())
            .collect()
    }

    /// Real parts of the diagonal.
    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A_ij - conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.0[(i, j)].norm());
                }
            }
        }
        worst
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.max_off_diagonal() <= tol
    }

    /// `Tr[self * other]`.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += self.0[(i, k)] * other.0[(k, i)];
            }
        }
        acc
    }

    /// `<v| self |v>`.
    pub fn quadratic_form(&self, v: &[C64]) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..d {
                row += self.0[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(ActivityError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// A complex matrix that is Hermitian within tolerance; stored exactly
/// symmetrized as `(A + A^dagger) / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix(ComplexMatrix);

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = ActivityError;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m, crate::tolerance::ToleranceConfig::default().eps_herm)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix, eps_herm: f64) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > eps_herm {
            return Err(ActivityError::NotHermitian { defect });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without checking; for matrices Hermitian by construction.
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let d = m.dim();
        let sym = ComplexMatrix::from_fn(d, |i, j| {
            if i == j {
                C64::new(m.get(i, i).re, 0.0)
            } else {
                (m.get(i, j) + m.get(j, i).conj()) * 0.5
            }
        });
        Self(sym)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn identity(d: usize) -> Self {
        Self(ComplexMatrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn eig(&self) -> EigenDecomposition {
        eig_hermitian(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eig().values.last().expect("dimension >= 1")
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        is_psd(self, tol)
    }

    /// Real expectation value `<v|A|v>`.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        self.0.quadratic_form(v).re
    }

    pub fn add_scaled_identity(&self, t: f64) -> Self {
        let d = self.dim();
        let mut m = self.0.clone();
        for i in 0..d {
            let z = m.get(i, i);
            m.set(i, i, z + t);
        }
        Self(m)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k).iter().copied().collect()
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d = self.values.len();
        let mut out = DMatrix::<C64>::zeros(d, d);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            let col = self.vectors.column(k);
            for j in 0..d {
                let cj = col[j].conj() * w;
                for i in 0..d {
                    out[(i, j)] += col[i] * cj;
                }
            }
        }
        ComplexMatrix(out)
    }
}

pub fn eig_hermitian(a: &HermitianMatrix) -> EigenDecomposition {
    let d = a.dim();
    let eig = a.0 .0.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(d, d, |i, c| eig.eigenvectors[(i, order[c])]);
    EigenDecomposition { values, vectors }
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> f64 {
    eig_hermitian(a).values[0]
}

/// True iff `min_eigenvalue(a) >= -tol`.
pub fn is_psd(a: &HermitianMatrix, tol: f64) -> bool {
    min_eigenvalue(a) >= -tol
}

/// Entrywise (Hadamard) product.
pub fn schur_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(b)?;
    Ok(ComplexMatrix(a.0.component_mul(&b.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let g = ComplexMatrix::from_fn(d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        HermitianMatrix::symmetrized(&g + &g.adjoint())
    }

    fn random_psd(d: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
        let g = ComplexMatrix::from_fn(d, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        HermitianMatrix::symmetrized(&g * &g.adjoint())
    }

    fn real(rows: &[&[f64]]) -> HermitianMatrix {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        HermitianMatrix::new(ComplexMatrix::from_real_rows(&rows).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let a = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let e = a.eig();
        assert_eq!(e.values.len(), 3);
        for (got, want) in e.values.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = real(&[&[0.0, 1.0], &[1.0, 0.0]]).eig();
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn random_5x5_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(5, &mut rng);
        let norm = a.matrix().frobenius_norm();
        let e = a.eig();
        for k in 0..5 {
            let v = e.vector(k);
            let av: Vec<C64> = (0..5)
                .map(|i| (0..5).map(|j| a.matrix().get(i, j) * v[j]).sum())
                .collect();
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * e.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * norm, "residual {res}");
        }
        // orthonormality
        let gram = e.vectors.adjoint() * &e.vectors;
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_abs_diff_eq!(HermitianMatrix::identity(3).min_eigenvalue(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            real(&[&[0.0, 0.5], &[0.5, 0.0]]).min_eigenvalue(),
            -0.5,
            epsilon = 1e-14
        );
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&HermitianMatrix::identity(3), 1e-9));
        assert!(!is_psd(&HermitianMatrix::identity(3).scale(-1.0), 1e-9));
        let ones = HermitianMatrix::new(ComplexMatrix::ones(3), 1e-12).unwrap();
        assert!(is_psd(&ones, 1e-9));
    }

    #[test]
    fn schur_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_psd(3, &mut rng).into_matrix();
        let j = ComplexMatrix::ones(3);
        assert!(schur_product(&j, &rho).unwrap().max_abs_diff(&rho) < 1e-15);
        let dephased = schur_product(&ComplexMatrix::identity(3), &rho).unwrap();
        assert!(dephased.is_diagonal(0.0));
        assert_eq!(dephased.diagonal_real(), rho.diagonal_real());

        let xi = ComplexMatrix::from_real_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let phi = ComplexMatrix::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let out = schur_product(&xi, &phi).unwrap();
        let want = ComplexMatrix::from_real_rows(&[vec![0.5, 0.25], vec![0.25, 0.5]]).unwrap();
        assert!(out.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn schur_dimension_mismatch() {
        let err = schur_product(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3));
        assert!(matches!(err, Err(ActivityError::DimensionMismatch { .. })));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m, 1e-9),
            Err(ActivityError::NotHermitian { .. })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let err = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0]]);
        assert!(matches!(err, Err(ActivityError::NotSquare { .. })));
        let err = ComplexMatrix::from_real_rows(&[vec![f64::NAN]]);
        assert!(matches!(err, Err(ActivityError::NonFinite { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn schur_of_psd_pair_is_psd(seed in any::<u64>(), d in 1usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_psd(d, &mut rng);
            let b = random_psd(d, &mut rng);
            let s = HermitianMatrix::symmetrized(schur_product(a.matrix(), b.matrix()).unwrap());
            prop_assert!(s.min_eigenvalue() >= -1e-10);
        }

        #[test]
        fn eig_reconstructs(seed in any::<u64>(), d in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(d, &mut rng);
            let e = a.eig();
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let back = e.reconstruct_with(|x| x);
            let err = (&back - a.matrix()).frobenius_norm();
            prop_assert!(err <= 1e-9 * a.matrix().frobenius_norm().max(1e-300));
        }

        #[test]
        fn shift_moves_min_eigenvalue(seed in any::<u64>(), d in 1usize..=6, t in -5.0f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_hermitian(d, &mut rng);
            let lhs = a.add_scaled_identity(t).min_eigenvalue();
            prop_assert!((lhs - (a.min_eigenvalue() + t)).abs() < 1e-10);
        }
    }
}
