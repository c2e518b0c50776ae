//! Polylogarithms on `[0, 1]`, the thermal combination `ℒ(x)`, and the
//! single-oscillator thermodynamic functions.
//!
//! `Li_n(x)` is evaluated either from its defining power series (for
//! `x ≤ e⁻¹`, where it converges at least like `e^{-k}`) or, closer to `x = 1`,
//! from the expansion in `μ = -ln x`:
//!
//! ```text
//! Li_n(e^{-μ}) = (-μ)^{n-1}/(n-1)! · (H_{n-1} - ln μ) + Σ_{k≠n-1} ζ(n-k) (-μ)^k / k!
//! ```
//!
//! which converges for `μ < 2π`; with `μ < 1` twenty-odd terms reach machine precision.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::scales::{BOLTZMANN, HBAR};
pub use crate::scales::{ZETA3, ZETA5};

pub fn zeta2<T: Real>() -> T {
    T::PI() * T::PI() / T::lit(6.0)
}

pub fn zeta3<T: Real>() -> T {
    T::lit(ZETA3)
}

pub fn zeta5<T: Real>() -> T {
    T::lit(ZETA5)
}

/// ζ(-m) for m = 0, 1, 2, … (zero at negative even integers).
const ZETA_NONPOSITIVE: [f64; 34] = [
    -0.5,
    -1.0 / 12.0,
    0.0,
    1.0 / 120.0,
    0.0,
    -1.0 / 252.0,
    0.0,
    1.0 / 240.0,
    0.0,
    -1.0 / 132.0,
    0.0,
    691.0 / 32760.0,
    0.0,
    -1.0 / 12.0,
    0.0,
    3617.0 / 8160.0,
    0.0,
    -43867.0 / 14364.0,
    0.0,
    174611.0 / 6600.0,
    0.0,
    -77683.0 / 276.0,
    0.0,
    236364091.0 / 65520.0,
    0.0,
    -657931.0 / 12.0,
    0.0,
    3392780147.0 / 3480.0,
    0.0,
    -1723168255201.0 / 85932.0,
    0.0,
    7709321041217.0 / 16320.0,
    0.0,
    -151628697551.0 / 12.0,
];

/// Largest μ for which the logarithmic expansion is used.
const MU_SERIES_LIMIT: f64 = 1.0;

/// `Li_n(x)` for `n ∈ {2, 3}` and `x ∈ [0, 1]`.
pub fn polylog<T: Real>(n: u32, x: T) -> Result<T> {
    check_order(n)?;
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::domain(format!("polylog argument must lie in [0, 1], got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x <= T::lit((-MU_SERIES_LIMIT).exp()) {
        Ok(polylog_power_series(n, x))
    } else {
        Ok(polylog_log_series(n, -x.ln()))
    }
}

/// `Li_n(e^{-μ})` for `μ ≥ 0`, without forming `e^{-μ}` when `μ` is small.
pub fn polylog_exp<T: Real>(n: u32, mu: T) -> Result<T> {
    check_order(n)?;
    if !(mu >= T::zero()) {
        return Err(Error::domain(format!("polylog_exp needs μ ≥ 0, got {mu}")));
    }
    if mu < T::lit(MU_SERIES_LIMIT) {
        Ok(polylog_log_series(n, mu))
    } else if mu.is_infinite() {
        Ok(T::zero())
    } else {
        Ok(polylog_power_series(n, (-mu).exp()))
    }
}

fn check_order(n: u32) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::domain(format!("polylog order {n} unsupported (only 2 and 3)")))
    }
}

fn polylog_power_series<T: Real>(n: u32, x: T) -> T {
    let eps = T::epsilon() * T::lit(0.25);
    let mut sum = T::zero();
    let mut power = T::one();
    for k in 1..=400 {
        power = power * x;
        let kf = T::from_usize_lossy(k);
        let term = power / kf.powi(n as i32);
        sum = sum + term;
        // remaining tail is below term · x/(1-x)
        if term <= eps * sum * (T::one() - x) {
            break;
        }
    }
    sum
}

fn polylog_log_series<T: Real>(n: u32, mu: T) -> T {
    if mu == T::zero() {
        return if n == 2 { zeta2() } else { zeta3() };
    }
    let neg_mu = -mu;
    let log_mu = mu.ln();
    let mut sum = match n {
        2 => zeta2::<T>() + neg_mu * (T::one() - log_mu),
        _ => zeta3::<T>() - zeta2::<T>() * mu + mu * mu / T::lit(2.0) * (T::lit(1.5) - log_mu),
    };
    // (-μ)^k / k! for k = n
    let mut power = T::one();
    for k in 1..=n as usize {
        power = power * neg_mu / T::from_usize_lossy(k);
    }
    let eps = T::epsilon() * T::lit(0.25);
    for k in n as usize..n as usize + ZETA_NONPOSITIVE.len() {
        let m = k - n as usize;
        let zeta = T::lit(ZETA_NONPOSITIVE[m]);
        let term = zeta * power;
        sum = sum + term;
        if m % 2 == 1 && term.abs() <= eps * sum.abs() {
            break;
        }
        power = power * neg_mu / T::from_usize_lossy(k + 1);
    }
    sum
}

/// `ℒ(x) = ζ(3) - Li₃(e^{-x}) - x Li₂(e^{-x})` for `x ≥ 0` (`+∞` allowed).
///
/// Monotone increasing from `ℒ(0) = 0` to `ℒ(∞) = ζ(3)`, with
/// `ℒ′(x) = -x ln(1 - e^{-x})`. Below `x = 1` the three terms nearly cancel, so
/// the combined expansion
/// `x²/4 (1 - 2 ln x) + Σ_{k≥3} ζ(3-k)(k-1)(-x)^k/k!`
/// is summed instead.
pub fn thermal_polylog_combination<T: Real>(x: T) -> Result<T> {
    if x.is_nan() || x < T::zero() {
        return Err(Error::domain(format!("ℒ(x) needs x ≥ 0, got {x}")));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(zeta3());
    }
    if x < T::one() {
        return Ok(l_small_series(x));
    }
    let y = (-x).exp();
    if y == T::zero() {
        return Ok(zeta3());
    }
    Ok(zeta3::<T>() - polylog_power_series(3, y) - x * polylog_power_series(2, y))
}

fn l_small_series<T: Real>(x: T) -> T {
    let mut sum = x * x / T::lit(4.0) * (T::one() - T::lit(2.0) * x.ln());
    let neg_x = -x;
    // (-x)^k / k! starting at k = 3
    let mut power = neg_x * neg_x * neg_x / T::lit(6.0);
    let eps = T::epsilon() * T::lit(0.25);
    for k in 3..3 + ZETA_NONPOSITIVE.len() {
        let term = T::lit(ZETA_NONPOSITIVE[k - 3]) * T::from_usize_lossy(k - 1) * power;
        sum = sum + term;
        if k % 2 == 0 && term.abs() <= eps * sum {
            break;
        }
        power = power * neg_x / T::from_usize_lossy(k + 1);
    }
    sum
}

/// Derivative `ℒ′(x) = -x ln(1 - e^{-x})`.
pub fn thermal_polylog_combination_derivative<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    -x * ln_one_minus_exp(x)
}

/// `ln(1 - e^{-x})` for `x > 0`, accurate at both ends.
pub fn ln_one_minus_exp<T: Real>(x: T) -> T {
    if x < T::LN_2() {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// Bose–Einstein occupation `1/(e^r - 1)` for `r > 0`.
pub fn bose_occupation<T: Real>(ratio: T) -> Result<T> {
    if !(ratio > T::zero()) {
        return Err(Error::domain(format!(
            "occupation needs a positive energy ratio, got {ratio}"
        )));
    }
    Ok(occupation(ratio))
}

#[inline]
pub(crate) fn occupation<T: Real>(ratio: T) -> T {
    T::one() / ratio.exp_m1()
}

/// `ln(1 - e^{-x}) - x n̄(x)`, the per-mode entropy integrand (times `-1/k_B`).
///
/// Both terms diverge or underflow separately; small and large `x` use series.
pub fn entropy_kernel<T: Real>(x: T) -> T {
    if x < T::lit(1e-6) {
        x.ln() - T::one() - x * x / T::lit(24.0)
    } else if x > T::lit(34.0) {
        let e = (-x).exp();
        -(T::one() + x) * e
    } else {
        ln_one_minus_exp(x) - x * occupation(x)
    }
}

/// Free energy of one oscillator of angular frequency `omega` (rad/s) at
/// temperature `T` (K), in joules: `ħω/2 + k_B T ln(1 - e^{-ħω/k_B T})`.
///
/// At `omega = 0` and `T > 0` the thermal term diverges and `-∞` is returned;
/// callers integrating over modes never evaluate that point.
pub fn mode_free_energy<T: Real>(omega: T, temperature: T) -> Result<T> {
    if !(omega >= T::zero()) || !(temperature >= T::zero()) {
        return Err(Error::domain(format!(
            "mode free energy needs ω ≥ 0 and T ≥ 0, got ω = {omega}, T = {temperature}"
        )));
    }
    let zero_point = T::lit(HBAR) * omega / T::lit(2.0);
    if temperature == T::zero() {
        return Ok(zero_point);
    }
    let thermal = T::lit(BOLTZMANN) * temperature;
    if omega == T::zero() {
        return Ok(T::neg_infinity());
    }
    Ok(zero_point + thermal * ln_one_minus_exp(T::lit(HBAR) * omega / thermal))
}
