//! Brute-force counterparts of the closed forms.
//!
//! Each verifier scans a uniform grid and then runs one golden-section pass
//! around the best grid cell. None of them call into [`crate::correlations`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::bellstate::{BellDiagonalState, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Outcomes less likely than this are dropped from the conditional entropy.
const MIN_OUTCOME_PROB: f64 = 1e-14;
const GOLDEN_TOL: f64 = 1e-12;

/// One scanned parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// `hi` is identified with `lo` and is not sampled.
    pub periodic: bool,
}

impl GridAxis {
    pub fn closed(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64, points: usize) -> Self {
        Self { lo, hi, points, periodic: true }
    }

    pub fn step(&self) -> f64 {
        let cells = if self.periodic { self.points } else { self.points - 1 };
        (self.hi - self.lo) / cells as f64
    }

    pub fn value(&self, k: usize) -> f64 {
        if !self.periodic && k + 1 == self.points {
            return self.hi;
        }
        self.lo + k as f64 * self.step()
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidGrid(format!("resolution {} < 2", self.points)));
        }
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::InvalidGrid(format!("bounds [{}, {}]", self.lo, self.hi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

impl GridSpec {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self> {
        for a in &axes {
            a.validate()?;
        }
        Ok(Self { axes })
    }

    /// `theta` on `[0, pi]` (closed), `phi` on `[0, 2 pi)`.
    pub fn measurement(theta_points: usize, phi_points: usize) -> Result<Self> {
        Self::new(vec![
            GridAxis::closed(0.0, PI, theta_points),
            GridAxis::periodic(0.0, 2.0 * PI, phi_points),
        ])
    }

    pub fn interval(lo: f64, hi: f64, points: usize) -> Result<Self> {
        Self::new(vec![GridAxis::closed(lo, hi, points)])
    }

    /// One-degree resolution in both angles.
    pub fn default_measurement() -> Self {
        Self::measurement(181, 360).expect("valid")
    }

    /// `Lambda` on `[0, 1]`.
    pub fn default_weight() -> Self {
        Self::interval(0.0, 1.0, 1001).expect("valid")
    }

    /// Axis coefficient on `[-1, 1]`.
    pub fn default_axis() -> Self {
        Self::interval(-1.0, 1.0, 401).expect("valid")
    }

    fn expect_dims(&self, n: usize, what: &str) -> Result<()> {
        if self.axes.len() != n {
            return Err(Error::InvalidGrid(format!(
                "{what} needs {n} grid axes, got {}",
                self.axes.len()
            )));
        }
        Ok(())
    }
}

/// Minimizes `f` on `[a, b]`; returns `(x, f(x))`.
fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (b - a).abs() <= GOLDEN_TOL * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Index of the smallest value; the first one wins ties.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    best
}

/// `Tr((rho1 - rho2)^2)`.
pub fn hs_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    hs_distance_raw(rho1.matrix(), rho2.matrix())
}

fn hs_distance_raw(a: &CMatrix<4>, b: &CMatrix<4>) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum()
}

fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Eigenvalues of a 2x2 Hermitian matrix.
fn eigenvalues_2x2(m: &CMatrix<2>) -> [f64; 2] {
    let mean = (m[0][0].re + m[1][1].re) / 2.0;
    let half_diff = (m[0][0].re - m[1][1].re) / 2.0;
    let r = (half_diff * half_diff + m[0][1].norm_sqr()).sqrt();
    [mean - r, mean + r]
}

fn entropy_2x2(m: &CMatrix<2>) -> f64 {
    entropy_bits(&eigenvalues_2x2(m))
}

/// Projective measurement on qubit B along the Bloch direction `(theta, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn direction(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }

    /// Orthonormal outcome vectors `|n_0>`, `|n_1>`.
    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let a = Complex64::new((self.theta / 2.0).cos(), 0.0);
        let b = Complex64::from_polar((self.theta / 2.0).sin(), self.phi);
        [[a, b], [-b.conj(), a]]
    }

    /// Rank-one projectors `B_0`, `B_1` on qubit B.
    pub fn projectors(&self) -> [CMatrix<2>; 2] {
        self.vectors()
            .map(|v| std::array::from_fn(|i| std::array::from_fn(|j| v[i] * v[j].conj())))
    }
}

/// `Tr_B rho`.
fn reduced_a(rho: &CMatrix<4>) -> CMatrix<2> {
    std::array::from_fn(|i| std::array::from_fn(|j| rho[2 * i][2 * j] + rho[2 * i + 1][2 * j + 1]))
}

/// `Tr_B[(1 (x) |n><n|) rho (1 (x) |n><n|)]`, unnormalized.
fn conditional_a(rho: &CMatrix<4>, n: &[Complex64; 2]) -> CMatrix<2> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = linalg::ZERO;
            for b in 0..2 {
                for bp in 0..2 {
                    acc += n[b].conj() * rho[2 * i + b][2 * j + bp] * n[bp];
                }
            }
            acc
        })
    })
}

/// `S(rho_A) - sum_k q_k S(rho_A^k)` for one measurement.
pub fn measured_information(rho: &DensityMatrix, basis: &MeasurementBasis) -> f64 {
    let m = rho.matrix();
    let s_a = entropy_2x2(&reduced_a(m));
    s_a - conditional_entropy(m, basis)
}

fn conditional_entropy(m: &CMatrix<4>, basis: &MeasurementBasis) -> f64 {
    basis
        .vectors()
        .iter()
        .map(|n| {
            let unnorm = conditional_a(m, n);
            let q = unnorm[0][0].re + unnorm[1][1].re;
            if q < MIN_OUTCOME_PROB {
                0.0
            } else {
                q * entropy_2x2(&linalg::scale(&unnorm, 1.0 / q))
            }
        })
        .sum()
}

/// Classical correlation by direct maximization over projective measurements on B.
pub fn optimize_classical_correlation(rho: &DensityMatrix, grid: &GridSpec) -> Result<(f64, MeasurementBasis)> {
    grid.expect_dims(2, "measurement search")?;
    let (theta_axis, phi_axis) = (grid.axes[0], grid.axes[1]);
    let m = *rho.matrix();
    let s_a = entropy_2x2(&reduced_a(&m));
    let objective = |theta: f64, phi: f64| conditional_entropy(&m, &MeasurementBasis { theta, phi });

    // minimize the conditional entropy row by row; reduce in row order
    let rows: Vec<(usize, f64)> = (0..theta_axis.points)
        .into_par_iter()
        .map(|i| {
            let theta = theta_axis.value(i);
            let vals: Vec<f64> = (0..phi_axis.points).map(|k| objective(theta, phi_axis.value(k))).collect();
            let k = argmin(&vals);
            (k, vals[k])
        })
        .collect();
    let best_row = argmin(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let mut theta = theta_axis.value(best_row);
    let mut phi = phi_axis.value(rows[best_row].0);
    let mut best = rows[best_row].1;

    let (dt, dp) = (theta_axis.step(), phi_axis.step());
    let lo = (theta - dt).max(theta_axis.lo);
    let hi = (theta + dt).min(theta_axis.hi);
    let (t_new, v) = golden_section_min(|t| objective(t, phi), lo, hi);
    if v < best {
        theta = t_new;
        best = v;
    }
    let (p_new, v) = golden_section_min(|p| objective(theta, p), phi - dp, phi + dp);
    if v < best {
        phi = p_new.rem_euclid(2.0 * PI);
        best = v;
    }
    Ok((s_a - best, MeasurementBasis { theta, phi }))
}

/// The three ways of splitting the four Bell projectors into two pairs; the
/// listed pair receives weight `Lambda/2` each.
pub const BELL_PAIRINGS: [[usize; 2]; 3] = [[0, 1], [0, 2], [0, 3]];

/// `S(rho || upsilon)` for Bell-diagonal `rho` (eigenvalues `lambda`) and the
/// classical state with weight `weight/2` on `pair` and `(1-weight)/2` elsewhere.
pub fn relative_entropy_to_pairing(lambda: &[f64; 4], pair: [usize; 2], weight: f64) -> f64 {
    let mut total = 0.0;
    for (k, &l) in lambda.iter().enumerate() {
        if l <= 0.0 {
            continue;
        }
        let u = if pair.contains(&k) { weight / 2.0 } else { (1.0 - weight) / 2.0 };
        if u <= 0.0 {
            return f64::INFINITY;
        }
        total += l * (l.log2() - u.log2());
    }
    total
}

/// Relative-entropy distance to the nearest classical Bell-diagonal state,
/// scanning all pairings and the weight `Lambda` on `[0, 1]`.
pub fn min_relative_entropy_to_classical(state: &BellDiagonalState, grid: &GridSpec) -> Result<f64> {
    grid.expect_dims(1, "weight scan")?;
    state.check_physical()?;
    let axis = grid.axes[0];
    let lambda = state.spectrum().lambda.map(|l| l.max(0.0));
    let mut best = f64::INFINITY;
    for pair in BELL_PAIRINGS {
        let f = |w: f64| relative_entropy_to_pairing(&lambda, pair, w);
        let vals: Vec<f64> = (0..axis.points).map(|k| f(axis.value(k))).collect();
        let k = argmin(&vals);
        best = best.min(vals[k]);
        let w = axis.value(k);
        // the golden-section pass stays strictly inside the open cell pair
        let lo = (w - axis.step()).max(axis.lo);
        let hi = (w + axis.step()).min(axis.hi);
        let (_, v) = golden_section_min(f, lo, hi);
        best = best.min(v);
    }
    Ok(best)
}

/// Closest zero-discord state found by the axis scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroDiscordMinimum {
    pub distance: f64,
    /// 0-based axis of the first minimizer.
    pub axis: usize,
    pub coefficient: f64,
    /// Every axis whose minimum lies within `1e-12` of the best.
    pub minimizing_axes: Vec<usize>,
}

fn axis_state(axis: usize, c: f64) -> CMatrix<4> {
    let s = linalg::pauli(axis + 1);
    linalg::scale(&linalg::add(&linalg::identity(), &linalg::scale(&linalg::kron(&s, &s), c)), 0.25)
}

/// Squared Hilbert-Schmidt distance to the zero-discord set
/// `{(1 + c sigma_j (x) sigma_j)/4 : c in [-1, 1], j = 1, 2, 3}`.
pub fn min_hs_to_zero_discord(state: &BellDiagonalState, grid: &GridSpec) -> Result<ZeroDiscordMinimum> {
    grid.expect_dims(1, "axis scan")?;
    let rho = *state.to_density_matrix()?.matrix();
    let axis = grid.axes[0];
    let per_axis: Vec<(f64, f64)> = (0..3)
        .map(|j| {
            let f = |c: f64| hs_distance_raw(&rho, &axis_state(j, c));
            let vals: Vec<f64> = (0..axis.points).map(|k| f(axis.value(k))).collect();
            let k = argmin(&vals);
            let c = axis.value(k);
            let lo = (c - axis.step()).max(axis.lo);
            let hi = (c + axis.step()).min(axis.hi);
            let (c_ref, v_ref) = golden_section_min(f, lo, hi);
            if v_ref < vals[k] {
                (c_ref, v_ref)
            } else {
                (c, vals[k])
            }
        })
        .collect();
    let best = argmin(&per_axis.iter().map(|p| p.1).collect::<Vec<_>>());
    let distance = per_axis[best].1;
    let minimizing_axes = (0..3).filter(|&j| per_axis[j].1 - distance <= 1e-12).collect();
    Ok(ZeroDiscordMinimum {
        distance,
        axis: best,
        coefficient: per_axis[best].0,
        minimizing_axes,
    })
}

/// `count` physical Bell-diagonal states drawn uniformly from the tetrahedron
/// by rejection from the cube `[-1, 1]^3`.
pub fn sample_physical_states(seed: u64, count: usize) -> Vec<BellDiagonalState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = BellDiagonalState::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if s.is_physical() {
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // 1 - H(0.9) and 1 - H(0.75) at 40 digits
    const C_FIG1: f64 = 0.531_004_406_410_718_779;
    const PLATEAU: f64 = 0.188_721_875_540_867_136;

    fn fig1() -> BellDiagonalState {
        BellDiagonalState::new(0.8, -0.4, 0.5)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::interval(0.0, 1.0, 1).is_err());
        assert!(GridSpec::interval(1.0, 0.0, 5).is_err());
        assert!(GridSpec::measurement(2, 2).is_ok());
        let g = GridSpec::default_measurement();
        assert_eq!(g.axes[0].value(180), PI);
        assert!((g.axes[1].value(359) - 359.0f64.to_radians()).abs() < 1e-14);
        let bad = GridSpec::default_weight();
        assert!(optimize_classical_correlation(&DensityMatrix::maximally_mixed(), &bad).is_err());
    }

    #[test]
    fn projectors_are_orthogonal_complete_rank_one() {
        for (theta, phi) in [(0.0, 0.0), (0.7, 2.1), (PI, 5.0), (PI / 2.0, PI / 2.0)] {
            let [p0, p1] = MeasurementBasis { theta, phi }.projectors();
            let sum = linalg::add(&p0, &p1);
            assert!(linalg::max_abs_diff(&sum, &linalg::identity()) < 1e-15);
            assert!(linalg::max_abs_diff(&linalg::matmul(&p0, &p1), &linalg::zeros()) < 1e-15);
            assert!(linalg::max_abs_diff(&linalg::matmul(&p0, &p0), &p0) < 1e-15);
            assert!((linalg::trace(&p0).re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn classical_correlation_oracle_examples() {
        let g = GridSpec::default_measurement();
        let (c, _) = optimize_classical_correlation(&DensityMatrix::maximally_mixed(), &g).unwrap();
        assert!(c.abs() < 1e-14);

        let bell = BellDiagonalState::new(1.0, -1.0, 1.0).to_density_matrix().unwrap();
        let (c, _) = optimize_classical_correlation(&bell, &g).unwrap();
        assert!((c - 1.0).abs() < 1e-12);

        let (c, basis) = optimize_classical_correlation(&fig1().to_density_matrix().unwrap(), &g).unwrap();
        assert!((c - C_FIG1).abs() < 1e-4);
        // optimum along sigma_1
        assert!(basis.direction()[0].abs() > 1.0 - 1e-6);
    }

    #[test]
    fn classical_correlation_of_product_state_is_zero() {
        let g = GridSpec::measurement(31, 60).unwrap();
        let (c, _) = optimize_classical_correlation(&DensityMatrix::basis(1), &g).unwrap();
        assert!(c.abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_oracle_examples() {
        let g = GridSpec::default_weight();
        let q = min_relative_entropy_to_classical(&BellDiagonalState::new(0.0, 0.0, 0.0), &g).unwrap();
        assert!(q.abs() < 1e-12);
        let q = min_relative_entropy_to_classical(&fig1(), &g).unwrap();
        assert!((q - PLATEAU).abs() < 1e-6);
        let q = min_relative_entropy_to_classical(&BellDiagonalState::new(1.0, -1.0, 1.0), &g).unwrap();
        assert!((q - 1.0).abs() < 1e-6);
    }

    #[test]
    fn singular_classical_states_give_infinite_relative_entropy() {
        let lambda = [0.5, 0.5, 0.0, 0.0];
        assert_eq!(relative_entropy_to_pairing(&lambda, [0, 2], 0.0), f64::INFINITY);
        assert_eq!(relative_entropy_to_pairing(&lambda, [0, 1], 1.0), 0.0);
    }

    #[test]
    fn hs_oracle_examples() {
        let g = GridSpec::default_axis();
        let m = min_hs_to_zero_discord(&fig1(), &g).unwrap();
        assert!((m.distance - 0.1025).abs() < 1e-8);
        assert_eq!(m.axis, 0);
        assert!((m.coefficient - 0.8).abs() < 1e-6);
        assert_eq!(m.minimizing_axes, vec![0]);

        let m = min_hs_to_zero_discord(&BellDiagonalState::new(0.0, 0.0, 0.0), &g).unwrap();
        assert!(m.distance.abs() < 1e-15);

        // (0.5, 0.5, 0.5) lies outside the tetrahedron; this is its physical sign image
        let m = min_hs_to_zero_discord(&BellDiagonalState::new(0.5, -0.5, 0.5), &g).unwrap();
        assert!((m.distance - 0.125).abs() < 1e-8);
        assert_eq!(m.minimizing_axes, vec![0, 1, 2]);
    }

    #[test]
    fn hs_distance_examples() {
        let a = fig1().to_density_matrix().unwrap();
        assert_eq!(hs_distance(&a, &a), 0.0);
        let bell = BellDiagonalState::new(1.0, -1.0, 1.0).to_density_matrix().unwrap();
        assert!((hs_distance(&DensityMatrix::maximally_mixed(), &bell) - 0.75).abs() < 1e-15);
        let b = BellDiagonalState::new(-0.1, 0.3, 0.2);
        let want: f64 = fig1()
            .coefficients()
            .iter()
            .zip(b.coefficients())
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            / 4.0;
        let d = hs_distance(&a, &b.to_density_matrix().unwrap());
        assert!((d - want).abs() < 1e-15);
        assert!((d - hs_distance(&b.to_density_matrix().unwrap(), &a)).abs() < 1e-16);
    }

    #[test]
    fn sampler_is_deterministic_and_physical() {
        let a = sample_physical_states(42, 50);
        let b = sample_physical_states(42, 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.is_physical()));
        assert_ne!(a, sample_physical_states(43, 50));
    }
}
