//! Independent non-Markovian dephasing acting on both qubits.
//!
//! The decoherence function is `omega(t) = exp(-f(t))` with
//! `f(t) = Gamma (t + (exp(-gamma t) - 1)/gamma)/2`, reducing to
//! `f(t) = Gamma t / 2` in the Markovian limit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bellstate::{BellDiagonalState, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Below this `gamma t` the bracket in `f(t)` is summed as a series.
const SERIES_THRESHOLD: f64 = 1e-4;

/// Environmental noise bandwidth `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Bandwidth {
    Finite(f64),
    /// `gamma -> infinity`, evaluated exactly as `f(t) = Gamma t / 2`.
    Markovian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DephasingChannel {
    decay_rate: f64,
    bandwidth: Bandwidth,
}

impl DephasingChannel {
    pub fn new(decay_rate: f64, bandwidth: Bandwidth) -> Result<Self> {
        if !(decay_rate.is_finite() && decay_rate > 0.0) {
            return Err(Error::InvalidChannel(format!(
                "decay rate Gamma must be positive and finite, got {decay_rate}"
            )));
        }
        if let Bandwidth::Finite(g) = bandwidth {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidChannel(format!(
                    "bandwidth gamma must be positive and finite, got {g}"
                )));
            }
        }
        Ok(Self { decay_rate, bandwidth })
    }

    pub fn non_markovian(decay_rate: f64, bandwidth: f64) -> Result<Self> {
        Self::new(decay_rate, Bandwidth::Finite(bandwidth))
    }

    pub fn markovian(decay_rate: f64) -> Result<Self> {
        Self::new(decay_rate, Bandwidth::Markovian)
    }

    /// `Gamma = 1`, so times are in units of `1/Gamma` and `gamma = ratio`.
    pub fn scaled(ratio: Option<f64>) -> Result<Self> {
        match ratio {
            Some(r) => Self::non_markovian(1.0, r),
            None => Self::markovian(1.0),
        }
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bandwidth
    }

    pub fn is_markovian(&self) -> bool {
        matches!(self.bandwidth, Bandwidth::Markovian)
    }

    /// `gamma / Gamma`, `None` in the Markovian limit.
    pub fn ratio(&self) -> Option<f64> {
        match self.bandwidth {
            Bandwidth::Finite(g) => Some(g / self.decay_rate),
            Bandwidth::Markovian => None,
        }
    }

    /// `f(t)`.
    pub fn dephasing_exponent(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match self.bandwidth {
            Bandwidth::Markovian => self.decay_rate * t / 2.0,
            Bandwidth::Finite(g) => self.decay_rate * memory_kernel(g * t) / (2.0 * g),
        })
    }

    /// `omega(t) = exp(-f(t))`.
    pub fn decoherence_function(&self, t: f64) -> Result<f64> {
        Ok((-self.dephasing_exponent(t)?).exp())
    }

    pub fn kraus_operators(&self, t: f64) -> Result<KrausSet> {
        let w = self.decoherence_function(t)?;
        Ok(KrausSet::from_omega(w))
    }

    /// Closed-form evolution `(c1 omega^2, c2 omega^2, c3)`.
    pub fn evolve(&self, state: &BellDiagonalState, t: f64) -> Result<BellDiagonalState> {
        let w = self.decoherence_function(t)?;
        let w2 = w * w;
        Ok(BellDiagonalState::new(state.c1 * w2, state.c2 * w2, state.c3))
    }

    /// `sum_mu K_mu rho K_mu^dagger`.
    pub fn evolve_density(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        Ok(self.kraus_operators(t)?.apply(rho))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    Ok(())
}

/// `x - 1 + exp(-x)`, i.e. `gamma (t + (exp(-gamma t) - 1)/gamma)` at `x = gamma t`.
fn memory_kernel(x: f64) -> f64 {
    if x < SERIES_THRESHOLD {
        // x^2/2 - x^3/6 + x^4/24 - x^5/120 + x^6/720
        let mut term = x * x / 2.0;
        let mut sum = term;
        for n in 3..=6 {
            term *= -x / n as f64;
            sum += term;
        }
        sum
    } else {
        x + (-x).exp_m1()
    }
}

/// `K_ab = kappa_a (x) kappa_b` with `kappa_0 = diag(omega, 1)`, `kappa_1 = diag(sqrt(1-omega^2), 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausSet {
    /// Diagonals of `kappa_0` and `kappa_1`.
    pub factors: [[f64; 2]; 2],
    /// Ordered `K_00, K_01, K_10, K_11`.
    pub operators: [CMatrix<4>; 4],
}

impl KrausSet {
    pub fn from_omega(omega: f64) -> Self {
        let factors = [[omega, 1.0], [(1.0 - omega * omega).max(0.0).sqrt(), 0.0]];
        let single = factors.map(|d| {
            let mut m = linalg::zeros::<2>();
            m[0][0] = Complex64::new(d[0], 0.0);
            m[1][1] = Complex64::new(d[1], 0.0);
            m
        });
        let operators = std::array::from_fn(|mu| linalg::kron(&single[mu >> 1], &single[mu & 1]));
        Self { factors, operators }
    }

    /// `sum_mu K_mu^dagger K_mu`.
    pub fn completeness(&self) -> CMatrix<4> {
        self.operators.iter().fold(linalg::zeros(), |acc, k| {
            linalg::add(&acc, &linalg::matmul(&linalg::adjoint(k), k))
        })
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DensityMatrix {
        let out = self.operators.iter().fold(linalg::zeros(), |acc, k| {
            linalg::add(&acc, &linalg::conjugate_by(k, rho.matrix()))
        });
        DensityMatrix::from_trusted(out)
    }
}
