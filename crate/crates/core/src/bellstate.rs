//! Bell-diagonal two-qubit states, their Bell-basis spectrum, and the
//! general two-qubit density matrix with its Pauli (Bloch) decomposition.
//!
//! Basis ordering is `|00>, |01>, |10>, |11>` throughout. Bell vectors are
//! indexed as `|chi_ab> = (|0,b> + (-1)^a |1,1^b>)/sqrt(2)`, which makes
//! `lambda_ab = (1 + (-1)^a c1 - (-1)^(a+b) c2 + (-1)^b c3)/4`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Slack for the tetrahedron check; pure Bell states sit exactly on the boundary.
pub const TOL_PHYS: f64 = 1e-12;
/// Slack for recognising a matrix as Bell-diagonal.
pub const TOL_BELL: f64 = 1e-10;

const TOL_HERMITIAN: f64 = 1e-12;
const TOL_TRACE: f64 = 1e-12;
const TOL_POSITIVE: f64 = 1e-10;

/// Labels of the Bell eigenvalues in storage order.
pub const BELL_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// A Bell-diagonal state `(1 + sum_j c_j sigma_j (x) sigma_j)/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalState {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalState {
    pub const fn new(c1: f64, c2: f64, c3: f64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn from_coefficients(c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2])
    }

    /// Builds a state and rejects it if it lies outside the tetrahedron.
    pub fn physical(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        let state = Self::new(c1, c2, c3);
        state.check_physical()?;
        Ok(state)
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn spectrum(&self) -> BellSpectrum {
        let (c1, c2, c3) = (self.c1, self.c2, self.c3);
        BellSpectrum {
            lambda: [
                (1.0 + c1 - c2 + c3) / 4.0,
                (1.0 + c1 + c2 - c3) / 4.0,
                (1.0 - c1 + c2 + c3) / 4.0,
                (1.0 - c1 - c2 - c3) / 4.0,
            ],
        }
    }

    pub fn is_physical(&self) -> bool {
        self.check_physical().is_ok()
    }

    /// Like [`is_physical`](Self::is_physical), but names the most negative eigenvalue.
    pub fn check_physical(&self) -> Result<()> {
        if !self.coefficients().iter().all(|c| c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficients {self}")));
        }
        let spec = self.spectrum();
        let (idx, &min) = spec
            .lambda
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("four eigenvalues");
        if min < -TOL_PHYS {
            return Err(Error::Unphysical {
                index: BELL_LABELS[idx],
                value: min,
            });
        }
        Ok(())
    }

    /// Matrix realization `(I + sum_j c_j sigma_j (x) sigma_j)/4`.
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        self.check_physical()?;
        Ok(DensityMatrix(self.matrix_unchecked()))
    }

    pub(crate) fn matrix_unchecked(&self) -> CMatrix<4> {
        let mut m = linalg::identity::<4>();
        for (j, c) in self.coefficients().into_iter().enumerate() {
            let term = linalg::kron(&linalg::pauli(j + 1), &linalg::pauli(j + 1));
            m = linalg::add(&m, &linalg::scale(&term, c));
        }
        linalg::scale(&m, 0.25)
    }

    /// Inverse of [`to_density_matrix`](Self::to_density_matrix): `c_j = Tr(rho sigma_j (x) sigma_j)`.
    pub fn from_density_matrix(rho: &DensityMatrix) -> Result<Self> {
        let bloch = rho.bloch_decomposition();
        let worst_local = bloch
            .alpha
            .iter()
            .chain(bloch.beta.iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if worst_local > TOL_BELL {
            return Err(Error::NotBellDiagonal(format!(
                "local Bloch vectors alpha={:?} beta={:?}",
                bloch.alpha, bloch.beta
            )));
        }
        for j in 0..3 {
            for k in 0..3 {
                if j != k && bloch.m[j][k].abs() > TOL_BELL {
                    return Err(Error::NotBellDiagonal(format!(
                        "correlation matrix entry M[{}][{}] = {}",
                        j + 1,
                        k + 1,
                        bloch.m[j][k]
                    )));
                }
            }
        }
        Ok(Self::new(bloch.m[0][0], bloch.m[1][1], bloch.m[2][2]))
    }

    /// Inverse of [`spectrum`](Self::spectrum).
    pub fn from_spectrum(lambda: [f64; 4]) -> Self {
        let [l00, l01, l10, l11] = lambda;
        Self::new(
            l00 + l01 - l10 - l11,
            -l00 + l01 + l10 - l11,
            l00 - l01 + l10 - l11,
        )
    }
}

impl fmt::Display for BellDiagonalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.c1, self.c2, self.c3)
    }
}

/// The Bell vector `|chi_ab>`; `index = 2a + b`.
pub fn bell_vector(index: usize) -> [Complex64; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a, b) = (index >> 1, index & 1);
    let sign = if a == 0 { h } else { -h };
    let mut v = [linalg::ZERO; 4];
    // |0,b> is basis index b; |1,1^b> is 2 + (1^b).
    v[b] = Complex64::new(h, 0.0);
    v[2 + (1 ^ b)] = Complex64::new(sign, 0.0);
    v
}

/// Eigenvalues of a Bell-diagonal state, stored in `(a,b)` order 00, 01, 10, 11.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellSpectrum {
    pub lambda: [f64; 4],
}

impl BellSpectrum {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.lambda[2 * a + b]
    }

    /// Indices into `lambda`, ordered by descending eigenvalue; ties keep index order.
    pub fn descending_order(&self) -> [usize; 4] {
        let mut idx = [0, 1, 2, 3];
        idx.sort_by(|&x, &y| self.lambda[y].total_cmp(&self.lambda[x]));
        idx
    }

    /// `lambda_1 >= lambda_2 >= lambda_3 >= lambda_4`.
    pub fn sorted(&self) -> [f64; 4] {
        self.descending_order().map(|k| self.lambda[k])
    }

    /// `Lambda = lambda_1 + lambda_2`.
    pub fn top_pair_weight(&self) -> f64 {
        let s = self.sorted();
        s[0] + s[1]
    }

    pub fn sum(&self) -> f64 {
        self.lambda.iter().sum()
    }
}

/// A two-qubit density matrix in the computational basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMatrix<4>);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: CMatrix<4>) -> Result<Self> {
        let herm = linalg::hermiticity_defect(&m);
        if herm > TOL_HERMITIAN {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let tr = linalg::trace(&m);
        if (tr - linalg::ONE).norm() > TOL_TRACE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let eig = linalg::hermitian_eigen(&m)?;
        if eig.values[0] < -TOL_POSITIVE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {}",
                eig.values[0]
            )));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is a density matrix by construction (e.g. a CPTP image).
    pub(crate) fn from_trusted(m: CMatrix<4>) -> Self {
        Self(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(linalg::scale(&linalg::identity(), 0.25))
    }

    /// `|psi><psi|` for a normalized `psi`.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL_TRACE {
            return Err(Error::InvalidDensityMatrix(format!(
                "state vector norm^2 {norm} != 1"
            )));
        }
        let m = std::array::from_fn(|i| std::array::from_fn(|j| psi[i] * psi[j].conj()));
        Ok(Self(m))
    }

    /// Computational basis state `|index>`.
    pub fn basis(index: usize) -> Self {
        let mut psi = [linalg::ZERO; 4];
        psi[index] = linalg::ONE;
        Self::pure(psi).expect("basis vectors are normalized")
    }

    pub fn matrix(&self) -> &CMatrix<4> {
        &self.0
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<[f64; 4]> {
        Ok(linalg::hermitian_eigen(&self.0)?.values)
    }

    /// `Tr(rho O)`, real part.
    pub fn expectation(&self, observable: &CMatrix<4>) -> f64 {
        linalg::trace_product(&self.0, observable).re
    }

    pub fn bloch_decomposition(&self) -> BlochDecomposition {
        let id = linalg::pauli(0);
        let mut alpha = [0.0; 3];
        let mut beta = [0.0; 3];
        let mut m = [[0.0; 3]; 3];
        for j in 0..3 {
            let sj = linalg::pauli(j + 1);
            alpha[j] = self.expectation(&linalg::kron(&sj, &id));
            beta[j] = self.expectation(&linalg::kron(&id, &sj));
            for k in 0..3 {
                m[j][k] = self.expectation(&linalg::kron(&sj, &linalg::pauli(k + 1)));
            }
        }
        BlochDecomposition { alpha, beta, m }
    }
}

/// `rho = (1(x)1 + alpha.sigma (x) 1 + 1 (x) beta.sigma + sum M_jk sigma_j (x) sigma_k)/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochDecomposition {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub m: [[f64; 3]; 3],
}

impl BlochDecomposition {
    pub fn reconstruct(&self) -> CMatrix<4> {
        let id = linalg::pauli(0);
        let mut out = linalg::kron(&id, &id);
        for j in 0..3 {
            let sj = linalg::pauli(j + 1);
            out = linalg::add(&out, &linalg::scale(&linalg::kron(&sj, &id), self.alpha[j]));
            out = linalg::add(&out, &linalg::scale(&linalg::kron(&id, &sj), self.beta[j]));
            for k in 0..3 {
                let sk = linalg::pauli(k + 1);
                out = linalg::add(&out, &linalg::scale(&linalg::kron(&sj, &sk), self.m[j][k]));
            }
        }
        linalg::scale(&out, 0.25)
    }

    pub fn alpha_norm_sq(&self) -> f64 {
        self.alpha.iter().map(|a| a * a).sum()
    }

    /// Squared Frobenius norm of the correlation matrix.
    pub fn m_norm_sq(&self) -> f64 {
        self.m.iter().flatten().map(|x| x * x).sum()
    }

    /// `alpha alpha^T + M M^T`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                self.alpha[i] * self.alpha[j] + (0..3).map(|k| self.m[i][k] * self.m[j][k]).sum::<f64>()
            })
        })
    }

    /// Largest eigenvalue of [`gram`](Self::gram).
    pub fn delta_max(&self) -> Result<f64> {
        let ev = linalg::symmetric_eigenvalues(&self.gram())?;
        Ok(ev[2])
    }
}
