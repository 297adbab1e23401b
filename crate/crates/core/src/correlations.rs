//! Correlation measures of Bell-diagonal states, in bits.
//!
//! Logarithms are base 2 and `0 log 0 = 0`. Whenever several `|c_j|` tie
//! for the maximum, the lowest index wins; measure values do not depend on
//! that choice, only the witness states do.

use serde::{Deserialize, Serialize};

use crate::bellstate::{BellDiagonalState, DensityMatrix};
use crate::error::{Error, Result};

const TOL_PROB: f64 = 1e-12;

/// `-x log2 x`, zero at the origin. Tiny negative round-off is treated as zero.
pub(crate) fn neg_xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2(1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-TOL_PROB..=1.0 + TOL_PROB).contains(&p) {
        return Err(Error::Domain(format!("binary entropy of p = {p}")));
    }
    Ok(binary_entropy_clamped(p))
}

pub(crate) fn binary_entropy_clamped(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    neg_xlog2x(p) + neg_xlog2x(1.0 - p)
}

/// Index of the largest `|c_j|`, lowest index on ties.
pub fn dominant_axis(state: &BellDiagonalState) -> usize {
    let c = state.coefficients();
    let mut best = 0;
    for j in 1..3 {
        if c[j].abs() > c[best].abs() {
            best = j;
        }
    }
    best
}

/// `C = 1 - H((1+m)/2)` with `m = max_j |c_j|`.
pub fn classical_correlation(state: &BellDiagonalState) -> f64 {
    let m = state.coefficients()[dominant_axis(state)].abs();
    1.0 - binary_entropy_clamped((1.0 + m) / 2.0)
}

/// `I = 2 + sum_ab lambda_ab log2 lambda_ab`.
pub fn mutual_information(state: &BellDiagonalState) -> f64 {
    2.0 - state.spectrum().lambda.iter().map(|&l| neg_xlog2x(l)).sum::<f64>()
}

/// `D = I - C`.
pub fn quantum_discord(state: &BellDiagonalState) -> f64 {
    mutual_information(state) - classical_correlation(state)
}

/// Closest classical state under relative entropy.
///
/// The two Bell projectors carrying the largest eigenvalues share weight
/// `Lambda/2` each; the other two share `(1-Lambda)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosestClassicalState {
    /// `Lambda = lambda_1 + lambda_2`.
    pub lambda_weight: f64,
    /// Bell indices (`2a + b`) receiving `Lambda/2`, ascending.
    pub pairing: [usize; 2],
    pub state: BellDiagonalState,
}

impl ClosestClassicalState {
    pub fn of(state: &BellDiagonalState) -> Self {
        let spec = state.spectrum();
        let order = spec.descending_order();
        let mut pairing = [order[0], order[1]];
        pairing.sort_unstable();
        let lambda_weight = spec.lambda[pairing[0]] + spec.lambda[pairing[1]];
        let mut weights = [(1.0 - lambda_weight) / 2.0; 4];
        for &k in &pairing {
            weights[k] = lambda_weight / 2.0;
        }
        Self {
            lambda_weight,
            pairing,
            state: BellDiagonalState::from_spectrum(weights),
        }
    }
}

/// `Q_R = sum lambda log2 lambda + H(Lambda) + 1`, with its minimizing classical state.
pub fn relative_entropy_discord(state: &BellDiagonalState) -> (f64, ClosestClassicalState) {
    let closest = ClosestClassicalState::of(state);
    let neg_entropy: f64 = -state.spectrum().lambda.iter().map(|&l| neg_xlog2x(l)).sum::<f64>();
    let q = neg_entropy + binary_entropy_clamped(closest.lambda_weight) + 1.0;
    (q, closest)
}

/// Hilbert-Schmidt discord of an arbitrary two-qubit state,
/// `(|alpha|^2 + |M|^2 - delta_max)/4`.
pub fn hs_discord_general(rho: &DensityMatrix) -> Result<f64> {
    let bloch = rho.bloch_decomposition();
    Ok((bloch.alpha_norm_sq() + bloch.m_norm_sq() - bloch.delta_max()?) / 4.0)
}

/// `(c1^2 + c2^2 + c3^2 - max_j c_j^2)/4`.
pub fn hs_discord_bell(state: &BellDiagonalState) -> f64 {
    let c = state.coefficients();
    let j = dominant_axis(state);
    let total: f64 = c.iter().map(|x| x * x).sum();
    (total - c[j] * c[j]) / 4.0
}

/// The zero-discord state on the axis of the largest `|c_j|`, keeping that coefficient.
pub fn nearest_zero_discord_state(state: &BellDiagonalState) -> BellDiagonalState {
    let j = dominant_axis(state);
    let mut c = [0.0; 3];
    c[j] = state.coefficients()[j];
    BellDiagonalState::from_coefficients(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    #[serde(rename = "D")]
    pub discord: f64,
    #[serde(rename = "Q_R")]
    pub relative_entropy: f64,
    #[serde(rename = "Q_S")]
    pub hilbert_schmidt: f64,
    #[serde(rename = "C")]
    pub classical: f64,
    #[serde(rename = "I")]
    pub mutual_information: f64,
}

pub fn measure_all(state: &BellDiagonalState) -> Result<MeasureSet> {
    state.check_physical()?;
    let classical = classical_correlation(state);
    let mutual_information = mutual_information(state);
    Ok(MeasureSet {
        discord: mutual_information - classical,
        relative_entropy: relative_entropy_discord(state).0,
        hilbert_schmidt: hs_discord_bell(state),
        classical,
        mutual_information,
    })
}
