//! Sudden-change time of the discord under dephasing.
//!
//! With `c1(t) = c1(0) omega^2(t)` and constant `c3`, the largest correlation
//! coefficient switches from `c1` to `c3` when `|c1(0)| omega^2(tau) = |c3|`,
//! i.e. `Gamma (tau + (exp(-gamma tau) - 1)/gamma) = Gamma eta` with
//! `eta = -ln|c3/c1(0)| / Gamma`. That equation has the closed-form root
//! `tau = (1 + eta gamma + W0(-exp(-1 - eta gamma)))/gamma`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::bellstate::BellDiagonalState;
use crate::channel::{Bandwidth, DephasingChannel};
use crate::correlations::binary_entropy_clamped;
use crate::error::{Error, Result};

const LAMBERT_MAX_ITER: usize = 50;
const BRANCH_SLACK: f64 = 1e-15;
/// Below this `p = sqrt(2(1 + e x))` the branch-point series is exact to rounding.
const SERIES_RADIUS: f64 = 1e-2;
const TOL_EPSILON: f64 = 1e-12;

/// Coefficients of `W0` around `x = -1/e` in powers of `p = sqrt(2(1 + e x))`.
const BRANCH_SERIES: [f64; 10] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
    226287557.0 / 37623398400.0,
];

/// Principal branch of the Lambert W function, `w e^w = x` with `w >= -1`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < -1.0 / E - BRANCH_SLACK {
        return Err(Error::Domain(format!("lambert_w0 undefined for x = {x}")));
    }
    lambert_w0_with_offset(x, E.mul_add(x, 1.0))
}

/// `W0(x)` where the caller also supplies `offset = 1 + e x` computed without
/// cancellation. Near the branch point the offset carries all the information.
fn lambert_w0_with_offset(x: f64, offset: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let offset = offset.max(0.0);
    let tol = 1e-13 * x.abs().max(1.0);
    let residual = |w: f64| w * w.exp() - x;

    let p = (2.0 * offset).sqrt();
    if p < SERIES_RADIUS {
        let w = BRANCH_SERIES.iter().rev().fold(0.0, |acc, &c| acc * p + c);
        if residual(w).abs() <= tol {
            return Ok(w);
        }
    }

    let mut w = if x > 0.0 {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else if p < 1.0 {
        BRANCH_SERIES[..4].iter().rev().fold(0.0, |acc, &c| acc * p + c)
    } else {
        x.ln_1p()
    };

    let mut prev_step = f64::INFINITY;
    for _ in 0..LAMBERT_MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            return Ok(w);
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        let small = step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs());
        let stalled = step.abs() >= prev_step && residual(w).abs() <= tol;
        if small || stalled {
            if residual(w).abs() <= tol {
                return Ok(w.max(-1.0));
            }
            break;
        }
        prev_step = step.abs();
    }
    Err(Error::Convergence {
        routine: "lambert_w0",
        iterations: LAMBERT_MAX_ITER,
    })
}

/// Location of the sudden change for a given initial state and channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    /// `tau`; `None` when the largest coefficient never switches.
    pub tau: Option<f64>,
    /// `eta = -ln|c3/c1(0)| / Gamma`; `None` when `c1(0) = 0` or `c3 = 0`.
    pub eta: Option<f64>,
    /// Argument passed to `W0`, finite bandwidth only.
    pub lambert_argument: Option<f64>,
    pub decay_rate: f64,
}

impl CriticalPoint {
    /// `Gamma tau`.
    pub fn scaled_tau(&self) -> Option<f64> {
        self.tau.map(|t| t * self.decay_rate)
    }

    /// `Gamma eta`.
    pub fn scaled_eta(&self) -> Option<f64> {
        self.eta.map(|e| e * self.decay_rate)
    }
}

/// `tau` for `eta >= 0`, bandwidth `gamma`. Returns `(tau, W argument)`.
fn tau_from_eta(eta: f64, gamma: f64) -> Result<(f64, f64)> {
    let s = eta * gamma;
    let arg = -(-1.0 - s).exp();
    // 1 + e * arg = 1 - exp(-s), evaluated without cancellation
    let offset = -(-s).exp_m1();
    let w = lambert_w0_with_offset(arg, offset)?;
    Ok(((1.0 + s + w) / gamma, arg))
}

pub fn critical_time(state0: &BellDiagonalState, channel: &DephasingChannel) -> Result<CriticalPoint> {
    state0.check_physical()?;
    let (c1, c3) = (state0.c1.abs(), state0.c3.abs());
    let decay_rate = channel.decay_rate();
    let eta = if c1 > 0.0 && c3 > 0.0 {
        Some(-(c3 / c1).ln() / decay_rate)
    } else {
        None
    };
    let none = CriticalPoint { tau: None, eta, lambert_argument: None, decay_rate };
    let Some(eta_value) = eta else {
        return Ok(none);
    };
    if c1 < c3 {
        return Ok(none);
    }
    if c1 == c3 {
        return Ok(CriticalPoint { tau: Some(0.0), ..none });
    }
    Ok(match channel.bandwidth() {
        Bandwidth::Markovian => CriticalPoint { tau: Some(eta_value), ..none },
        Bandwidth::Finite(gamma) => {
            let (tau, arg) = tau_from_eta(eta_value, gamma)?;
            CriticalPoint { tau: Some(tau), lambert_argument: Some(arg), ..none }
        }
    })
}

/// Checks the conditions under which the piecewise closed forms hold:
/// `|c1| >= |c2|`, `|c1| >= |c3|` and `c2/c1 = -c3`.
pub fn check_piecewise_conditions(state0: &BellDiagonalState) -> Result<()> {
    state0.check_physical()?;
    let BellDiagonalState { c1, c2, c3 } = *state0;
    if c1 == 0.0 {
        return Err(Error::Precondition("c1(0) = 0, slope c2/c1 undefined".into()));
    }
    if c2.abs() > c1.abs() || c3.abs() > c1.abs() {
        return Err(Error::Precondition(format!(
            "|c1(0)| must dominate |c2(0)| and |c3| in {state0}"
        )));
    }
    let epsilon = c2 / c1;
    if (epsilon + c3).abs() > TOL_EPSILON {
        return Err(Error::Precondition(format!(
            "slope c2/c1 = {epsilon} differs from -c3 = {}",
            -c3
        )));
    }
    Ok(())
}

/// Switch time used by the piecewise forms; `+inf` when there is no switch.
fn switch_time(state0: &BellDiagonalState, channel: &DephasingChannel) -> Result<f64> {
    Ok(critical_time(state0, channel)?.tau.unwrap_or(f64::INFINITY))
}

/// Discord on the `c2 = -c3 c1` family:
/// `1 - H((1+c3)/2)` for `t <= tau`, `1 - H((1+c1(t))/2)` afterwards.
pub fn discord_piecewise(state0: &BellDiagonalState, channel: &DephasingChannel, t: f64) -> Result<f64> {
    check_piecewise_conditions(state0)?;
    let tau = switch_time(state0, channel)?;
    let w = channel.decoherence_function(t)?;
    let x = if t <= tau { state0.c3 } else { state0.c1 * w * w };
    Ok(1.0 - binary_entropy_clamped((1.0 + x) / 2.0))
}

/// Hilbert-Schmidt discord on the same family:
/// `(c2(t)^2 + c3^2)/4` for `t <= tau`, `(c1(t)^2 + c2(t)^2)/4` afterwards.
pub fn hs_piecewise(state0: &BellDiagonalState, channel: &DephasingChannel, t: f64) -> Result<f64> {
    check_piecewise_conditions(state0)?;
    let tau = switch_time(state0, channel)?;
    let s = channel.evolve(state0, t)?;
    Ok(if t <= tau {
        (s.c2 * s.c2 + s.c3 * s.c3) / 4.0
    } else {
        (s.c1 * s.c1 + s.c2 * s.c2) / 4.0
    })
}

/// `Gamma tau` against `gamma/Gamma` for fixed `Gamma eta`.
pub fn bandwidth_sweep(ratios: &[f64], eta_scaled: f64) -> Result<Vec<(f64, f64)>> {
    if !(eta_scaled.is_finite() && eta_scaled > 0.0) {
        return Err(Error::Domain(format!("eta*Gamma must be positive, got {eta_scaled}")));
    }
    ratios
        .iter()
        .map(|&r| {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::Domain(format!("bandwidth ratio must be positive, got {r}")));
            }
            let (tau, _) = tau_from_eta(eta_scaled, r)?;
            Ok((r, tau))
        })
        .collect()
}

/// Grid cell `[t_k, t_{k+1}]` holding the sharpest slope discontinuity of a
/// sampled curve, found as the cell whose two end nodes carry the largest
/// combined jump in secant slope. Needs at least four samples.
pub fn locate_kink(times: &[f64], values: &[f64]) -> Option<usize> {
    let n = times.len();
    if n != values.len() || n < 4 {
        return None;
    }
    let slopes: Vec<f64> = (0..n - 1)
        .map(|k| (values[k + 1] - values[k]) / (times[k + 1] - times[k]))
        .collect();
    // jump[k] lives at node k + 1
    let jumps: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    // cell k (nodes k, k+1) for 1 <= k <= n - 3 has jumps[k - 1] and jumps[k]
    (1..n - 2)
        .map(|k| (k, jumps[k - 1] + jumps[k]))
        .fold(None, |best: Option<(usize, f64)>, (k, v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((k, v)),
        })
        .map(|(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{hs_discord_bell, quantum_discord};

    const PLATEAU: f64 = 0.188_721_875_540_867_136;
    /// Gamma tau at gamma/Gamma = 0.1, |c3/c1| = 5/8 (40-digit bisection).
    const TAU_FIG1: f64 = 3.230_960_243_057_532_529;

    fn fig1() -> BellDiagonalState {
        BellDiagonalState::new(0.8, -0.4, 0.5)
    }

    fn fig1_channel() -> DephasingChannel {
        DephasingChannel::non_markovian(1.0, 0.1).unwrap()
    }

    #[test]
    fn lambert_examples() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(-1.0 / E).unwrap() + 1.0).abs() < 1e-7);
        assert!((lambert_w0(1.0).unwrap() - 0.567_143_290_409_783_873).abs() < 1e-15);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(lambert_w0(-0.5), Err(Error::Domain(_))));
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn lambert_residuals_across_range() {
        let mut xs = vec![-1.0 / E + 1e-15, -1.0 / E + 1e-10, -0.36, -0.3, -0.1, -1e-8, 1e-12, 0.5, 3.0, 1e3, 1e10, 1e200];
        for k in 0..400 {
            xs.push(-1.0 / E + (k as f64 + 0.5) * 1e-3);
        }
        for x in xs {
            let w = lambert_w0(x).unwrap();
            assert!(w >= -1.0);
            let r = (w * w.exp() - x).abs();
            assert!(r <= 1e-13 * x.abs().max(1.0), "x={x} w={w} residual {r}");
        }
    }

    #[test]
    fn branch_series_matches_reference() {
        // W0(-1/e + 1e-4) from a 40-digit evaluation
        let w = lambert_w0(-1.0 / E + 1e-4).unwrap();
        assert!((w + 0.976_862_865_574_421_914).abs() < 1e-12);
    }

    #[test]
    fn critical_time_examples() {
        let cp = critical_time(&fig1(), &fig1_channel()).unwrap();
        assert!((cp.scaled_tau().unwrap() - TAU_FIG1).abs() < 1e-12);
        assert!((cp.scaled_eta().unwrap() - 1.6f64.ln()).abs() < 1e-15);
        let arg = cp.lambert_argument.unwrap();
        assert!(arg > -1.0 / E && arg < 0.0);

        let mk = critical_time(&fig1(), &DephasingChannel::markovian(1.0).unwrap()).unwrap();
        assert!((mk.scaled_tau().unwrap() - 1.6f64.ln()).abs() < 1e-15);
        assert!(mk.lambert_argument.is_none());

        let eq = critical_time(&BellDiagonalState::new(0.5, -0.25, 0.5), &fig1_channel()).unwrap();
        assert_eq!(eq.tau, Some(0.0));
    }

    #[test]
    fn no_sudden_change_cases() {
        let ch = fig1_channel();
        for s in [
            BellDiagonalState::new(0.4, -0.2, 0.5),
            BellDiagonalState::new(0.0, 0.0, 0.5),
            BellDiagonalState::new(0.6, 0.0, 0.0),
        ] {
            assert_eq!(critical_time(&s, &ch).unwrap().tau, None, "{s}");
        }
        assert!(critical_time(&BellDiagonalState::new(1.0, 1.0, 1.0), &ch).is_err());
    }

    #[test]
    fn coefficients_cross_at_tau() {
        let ch = DephasingChannel::non_markovian(2.5, 0.7).unwrap();
        let s = BellDiagonalState::new(-0.9, 0.27, 0.3);
        let tau = critical_time(&s, &ch).unwrap().tau.unwrap();
        let at = ch.evolve(&s, tau).unwrap();
        assert!((at.c1.abs() - at.c3.abs()).abs() < 1e-10);
    }

    #[test]
    fn piecewise_preconditions() {
        let ch = fig1_channel();
        assert!(matches!(
            discord_piecewise(&BellDiagonalState::new(0.8, -0.3, 0.5), &ch, 1.0),
            Err(Error::Precondition(_))
        ));
        assert!(hs_piecewise(&BellDiagonalState::new(0.4, -0.2, 0.5), &ch, 1.0).is_err());
        assert!(discord_piecewise(&BellDiagonalState::new(0.0, 0.0, 0.0), &ch, 1.0).is_err());
        assert!(discord_piecewise(&fig1(), &ch, -1.0).is_err());
    }

    #[test]
    fn discord_piecewise_examples() {
        let ch = fig1_channel();
        for t in [0.0, 1.0, 3.0, TAU_FIG1] {
            assert!((discord_piecewise(&fig1(), &ch, t).unwrap() - PLATEAU).abs() < 1e-15);
        }
        assert!(discord_piecewise(&fig1(), &ch, 1e4).unwrap().abs() < 1e-15);
        let after = discord_piecewise(&fig1(), &ch, TAU_FIG1 * (1.0 + 1e-12)).unwrap();
        assert!((after - PLATEAU).abs() < 1e-10);
    }

    #[test]
    fn hs_piecewise_examples() {
        let ch = fig1_channel();
        assert!((hs_piecewise(&fig1(), &ch, 0.0).unwrap() - 0.1025).abs() < 1e-15);
        assert!((hs_piecewise(&fig1(), &ch, TAU_FIG1).unwrap() - 0.078125).abs() < 1e-12);
        // past tau the (c1^2 + c2^2)/4 branch applies, which vanishes as omega -> 0
        assert_eq!(hs_piecewise(&fig1(), &ch, 1e4).unwrap(), 0.0);
    }

    #[test]
    fn piecewise_forms_match_general_path() {
        let ch = fig1_channel();
        for k in 0..=800 {
            let t = k as f64 * 0.01;
            let s = ch.evolve(&fig1(), t).unwrap();
            let d = discord_piecewise(&fig1(), &ch, t).unwrap();
            assert!((d - quantum_discord(&s)).abs() < 1e-10, "t={t}");
            let q = hs_piecewise(&fig1(), &ch, t).unwrap();
            assert!((q - hs_discord_bell(&s)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn piecewise_with_zero_c3_never_switches() {
        let ch = fig1_channel();
        let s = BellDiagonalState::new(0.6, 0.0, 0.0);
        for t in [0.0, 2.0, 50.0] {
            assert!(discord_piecewise(&s, &ch, t).unwrap().abs() < 1e-15);
            assert_eq!(hs_piecewise(&s, &ch, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn bandwidth_sweep_examples() {
        let eta = 1.6f64.ln();
        let out = bandwidth_sweep(&[0.1, 1.0, 10.0], eta).unwrap();
        let want = [3.230_960_243_057_532_529, 1.154_921_294_654_040_598, 0.569_667_919_723_891_210];
        for ((r, t), (rw, tw)) in out.iter().zip([0.1, 1.0, 10.0].iter().zip(want)) {
            assert_eq!(r, rw);
            assert!((t - tw).abs() < 1e-12, "{t} vs {tw}");
        }
        let m = bandwidth_sweep(&[1e6], eta).unwrap();
        assert!((m[0].1 - 0.470).abs() < 1e-3);
        assert!(bandwidth_sweep(&[1.0, 0.0], eta).is_err());
        assert!(bandwidth_sweep(&[1.0], -1.0).is_err());
        assert!(bandwidth_sweep(&[], eta).unwrap().is_empty());
    }

    #[test]
    fn kink_locator_finds_corner() {
        let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
        let values: Vec<f64> = times.iter().map(|&t| if t < 4.23 { 1.0 } else { 1.0 - (t - 4.23) }).collect();
        let k = locate_kink(&times, &values).unwrap();
        assert!(times[k] <= 4.23 && 4.23 <= times[k + 1]);
        assert_eq!(locate_kink(&times[..3], &values[..3]), None);
    }
}
