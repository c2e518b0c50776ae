//! Plasmonic Casimir free energy `φ(λ, τ) = η(λ) + ϑ(λ, τ)` in units of the
//! perfect-mirror Casimir energy, plus the function `β(τ)` and the closed-form
//! asymptotes.
//!
//! Every z-integral is taken in `u = √|z|`. On `z > 0` the three branches are
//! combined before integrating, using `g₊ - g₀` and `g₋ - g₀` from
//! [`crate::dispersion`]: individually the integrals diverge, the sum decays like
//! `e^{-√z}`.

use serde::{Deserialize, Serialize};

use crate::dispersion::{branch_differences, g_infinity, g_squared_unchecked, z_plus, ModeBranch};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, integrate_on_panels, integrate_semi_infinite, Integral, QuadratureConfig};
use crate::real::Real;
use crate::scales::{aleph, check_lambda, check_tau, perfect_mirror_refs, MaterialParams};
use crate::specfun::{ln_one_minus_exp, thermal_polylog_combination, zeta3, zeta5};

/// Leading short-distance coefficient, `η ≈ 1.790 λ` (four significant figures).
pub const ETA_SHORT_COEFFICIENT: f64 = 1.790;
/// Large-distance slope and offset, `η ≈ -74.57 √λ + 60` (four and two significant figures).
pub const ETA_LARGE_SLOPE: f64 = -74.57;
pub const ETA_LARGE_OFFSET: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyResult<T> {
    pub eta: T,
    pub theta: T,
    /// `eta + theta`.
    pub phi: T,
    /// Free energy per unit area (J/m²), when a material was supplied.
    pub absolute: Option<T>,
    /// Quadrature error estimate of `phi`.
    pub error: T,
}

impl<T: Real> FreeEnergyResult<T> {
    /// Attaches `E_C(L) φ` for the plate distance `L = λ λ_p`.
    pub fn with_absolute(mut self, lambda: T, material: &MaterialParams<T>) -> Result<Self> {
        let refs = perfect_mirror_refs(lambda * material.plasma_wavelength)?;
        self.absolute = Some(refs.casimir_energy * self.phi);
        Ok(self)
    }
}

/// A value with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

/// Thermal integrand `ln(1 - e^{-g/w})`.
#[inline]
pub(crate) fn h<T: Real>(g: T, w: T) -> T {
    ln_one_minus_exp(g / w)
}

/// `h(g₀ + d) - h(g₀)` for `g₀ + d > 0`, without cancellation when `|d| ≪ g₀`.
pub(crate) fn delta_h<T: Real>(g0: T, d: T, w: T) -> T {
    if d == T::zero() {
        return T::zero();
    }
    let x = g0 / w;
    let y = d / w;
    if g0 > T::zero() && y.abs() <= x / T::lit(2.0) {
        // (e^{-x} - e^{-x-y}) / (1 - e^{-x}), each exponent kept non-positive
        let numerator = if y >= T::zero() {
            (-x).exp() * -(-y).exp_m1()
        } else {
            (-x - y).exp() * y.exp_m1()
        };
        (numerator / -(-x).exp_m1()).ln_1p()
    } else {
        h(g0 + d, w) - h(g0, w)
    }
}

/// `Σ_a c_a h(g_a)` on `z ≥ 0`.
fn branch_h_difference_sum<T: Real>(u: T, lambda: T, w: T) -> T {
    let (g0, dp, dm) = branch_differences(u * u, lambda);
    delta_h(g0, dp, w) + delta_h(g0, dm, w)
}

fn plus_branch_negative<T: Real>(u: T, lambda: T) -> T {
    g_squared_unchecked(ModeBranch::Plus, -u * u, lambda).sqrt()
}

fn sorted_hints<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.retain(|x| x.is_finite() && *x > T::zero());
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Breakpoints in `u` where the thermal integrands change scale: `g₋ ≈ w`,
/// `g₀ ≈ w`, and `u = 2πλ`.
pub(crate) fn theta_hints<T: Real>(lambda: T, w: T) -> Vec<T> {
    let a = T::TAU() * lambda;
    let u_minus = w / (T::PI() * lambda).sqrt();
    let u_zero = w * w / a;
    let mut v = vec![a, T::one(), T::lit(4.0), T::lit(16.0)];
    for k in -2..=2 {
        let f = T::lit(10f64.powi(k));
        v.push(u_minus * f);
        v.push(u_zero * f);
    }
    sorted_hints(v)
}

fn zero_temperature_hints<T: Real>(lambda: T) -> Vec<T> {
    sorted_hints(vec![T::TAU() * lambda, T::one(), T::lit(4.0), T::lit(16.0)])
}

/// Zero-temperature factor `η(λ)`.
pub fn eta<T: Real>(lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    eta_estimate(lambda, cfg).map(|e| e.value)
}

pub fn eta_estimate<T: Real>(lambda: T, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    check_lambda(lambda)?;
    let zp = z_plus(lambda)?;
    let half_aleph = aleph::<T>() / T::lit(2.0);
    let icfg = cfg.scaled_abs(half_aleph);
    let two = T::lit(2.0);
    let neg = integrate_finite(
        |u: T| two * u * plus_branch_negative(u, lambda),
        T::zero(),
        zp.sqrt(),
        &icfg,
    )
    .map_err(|e| e.within("eta, propagating branch"))?;
    let pos = integrate_semi_infinite(
        |u: T| {
            if u == T::zero() {
                return T::zero();
            }
            let (_, dp, dm) = branch_differences(u * u, lambda);
            two * u * (dp + dm)
        },
        T::zero(),
        &zero_temperature_hints(lambda),
        &icfg,
    )
    .map_err(|e| e.within("eta, evanescent branches"))?;
    let value = -half_aleph * (neg.value + pos.value) + aleph::<T>() / T::lit(3.0) * zp * zp.sqrt();
    Ok(Estimate {
        value,
        error: half_aleph * (neg.error + pos.error),
    })
}

/// Final quadrature partitions used by [`theta_detailed`]; re-used to evaluate
/// `ϑ` at nearby temperatures as a smooth function of `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPartition<T> {
    pub propagating: Vec<(T, T)>,
    pub evanescent: Vec<(T, T)>,
}

fn theta_parts<T: Real>(lambda: T, w: T) -> (impl Fn(T) -> T, impl Fn(T) -> T) {
    let two = T::lit(2.0);
    let neg = move |u: T| two * u * h(plus_branch_negative(u, lambda), w);
    let pos = move |u: T| {
        if u == T::zero() {
            T::zero()
        } else {
            two * u * branch_h_difference_sum(u, lambda, w)
        }
    };
    (neg, pos)
}

fn theta_assemble<T: Real>(w: T, zp: T, neg: T, pos: T) -> Result<T> {
    let al = aleph::<T>();
    let l = thermal_polylog_combination(zp.sqrt() / w)?;
    Ok(-al * w * (neg + pos) - T::lit(2.0) * al * w * w * w * l)
}

/// Thermal factor `ϑ(λ, τ)`; exactly zero at `τ = 0`.
pub fn theta<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    theta_detailed(lambda, tau, cfg).map(|(e, _)| e.value)
}

pub fn theta_detailed<T: Real>(
    lambda: T,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<(Estimate<T>, ThetaPartition<T>)> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    let empty = ThetaPartition {
        propagating: Vec::new(),
        evanescent: Vec::new(),
    };
    if tau == T::zero() {
        return Ok((
            Estimate {
                value: T::zero(),
                error: T::zero(),
            },
            empty,
        ));
    }
    let w = lambda * tau;
    let zp = z_plus(lambda)?;
    let prefactor = aleph::<T>() * w;
    let icfg = cfg.scaled_abs(prefactor);
    let (neg_f, pos_f) = theta_parts(lambda, w);
    let neg =
        integrate_finite(&neg_f, T::zero(), zp.sqrt(), &icfg).map_err(|e| e.within("theta, propagating branch"))?;
    let pos: Integral<T> = integrate_semi_infinite(&pos_f, T::zero(), &theta_hints(lambda, w), &icfg)
        .map_err(|e| e.within("theta, evanescent branches"))?;
    let value = theta_assemble(w, zp, neg.value, pos.value)?;
    Ok((
        Estimate {
            value,
            error: prefactor * (neg.error + pos.error),
        },
        ThetaPartition {
            propagating: neg.panels,
            evanescent: pos.panels,
        },
    ))
}

/// `ϑ(λ, τ)` evaluated with a fixed fifteen-point rule on a given partition.
pub fn theta_on_partition<T: Real>(lambda: T, tau: T, partition: &ThetaPartition<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let w = lambda * tau;
    let zp = z_plus(lambda)?;
    let (neg_f, pos_f) = theta_parts(lambda, w);
    let neg = integrate_on_panels(&neg_f, &partition.propagating);
    let pos = integrate_on_panels(&pos_f, &partition.evanescent);
    theta_assemble(w, zp, neg, pos)
}

/// `φ = η + ϑ`.
pub fn phi<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<FreeEnergyResult<T>> {
    let e = eta_estimate(lambda, cfg)?;
    let (t, _) = theta_detailed(lambda, tau, cfg)?;
    Ok(FreeEnergyResult {
        eta: e.value,
        theta: t.value,
        phi: e.value + t.value,
        absolute: None,
        error: e.error + t.error,
    })
}

/// Closed-form second integral of the free energy, per branch, in units of `E_C`:
/// `-(ℵ/2) c_a [P(g_a(∞)) - P(g_a(-z_a))]` with `P(g) = 2g³/3 - 4w³ ℒ(g/w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTerms<T> {
    /// Upper-limit contributions, ordered as [`ModeBranch::ALL`].
    pub upper: [T; 3],
    /// Lower-limit contributions (nonzero only for the `+` branch).
    pub lower: [T; 3],
}

impl<T: Real> BoundaryTerms<T> {
    pub fn upper_sum(&self) -> T {
        self.upper.iter().fold(T::zero(), |s, &x| s + x)
    }

    /// Sum over branches and limits; equals `ℵ z₊^{3/2}/3 - 2ℵ w³ ℒ(√z₊/w)`.
    pub fn total(&self) -> T {
        self.upper_sum() + self.lower.iter().fold(T::zero(), |s, &x| s + x)
    }
}

pub fn boundary_terms<T: Real>(lambda: T, tau: T) -> Result<BoundaryTerms<T>> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    let w = lambda * tau;
    let p = |g: T| -> Result<T> {
        let cubic = T::lit(2.0) / T::lit(3.0) * g * g * g;
        if w == T::zero() {
            Ok(cubic)
        } else {
            Ok(cubic - T::lit(4.0) * w * w * w * thermal_polylog_combination(g / w)?)
        }
    };
    let half_aleph = aleph::<T>() / T::lit(2.0);
    let g_inf = g_infinity(lambda);
    let zp = z_plus(lambda)?;
    let mut upper = [T::zero(); 3];
    let mut lower = [T::zero(); 3];
    for (i, b) in ModeBranch::ALL.iter().enumerate() {
        let c = T::lit(b.coefficient() as f64);
        upper[i] = -half_aleph * c * p(g_inf)?;
        let g_lo = if *b == ModeBranch::Plus { zp.sqrt() } else { T::zero() };
        lower[i] = half_aleph * c * p(g_lo)?;
    }
    Ok(BoundaryTerms { upper, lower })
}

/// `β(τ)`, the thermal function of the short-distance expansion.
pub fn beta<T: Real>(tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    beta_estimate(tau, cfg).map(|e| e.value)
}

pub fn beta_estimate<T: Real>(tau: T, cfg: &QuadratureConfig<T>) -> Result<Estimate<T>> {
    if !(tau > T::zero()) || !tau.is_finite() {
        return Err(Error::domain(format!("β(τ) needs τ > 0, got {tau}")));
    }
    let x0 = T::PI() * T::SQRT_2() / tau;
    let two = T::lit(2.0);
    let f = |u: T| {
        if u == T::zero() {
            return T::zero();
        }
        let e = (-u).exp();
        let dp = x0 * e / ((T::one() + e).sqrt() + T::one());
        let dm = -x0 * e / ((T::one() - e).sqrt() + T::one());
        -two * u * (delta_h(x0, dp, T::one()) + delta_h(x0, dm, T::one()))
    };
    let s = tau * tau / (two * T::PI() * T::PI());
    let mut hints: Vec<T> = (-2..=3).map(|k| s * T::lit(10f64.powi(k))).collect();
    hints.extend([T::one(), T::lit(4.0), T::lit(16.0)]);
    let i = integrate_semi_infinite(f, T::zero(), &sorted_hints(hints), cfg).map_err(|e| e.within("beta"))?;
    Ok(Estimate {
        value: i.value,
        error: i.error,
    })
}

/// `η ≈ 1.790 λ` for `λ ≪ 1`.
pub fn eta_asymptotic_short<T: Real>(lambda: T) -> T {
    T::lit(ETA_SHORT_COEFFICIENT) * lambda
}

/// `η ≈ -74.57 √λ + 60` for `λ ≫ 1`.
pub fn eta_asymptotic_large<T: Real>(lambda: T) -> T {
    T::lit(ETA_LARGE_SLOPE) * lambda.sqrt() + T::lit(ETA_LARGE_OFFSET)
}

/// Short distance: `ϑ ≈ ℵλτ [2(λτ²/π) ℒ(2π√(πλ/τ²)) + β(τ)]`.
pub fn theta_asymptotic_short<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let arg = T::TAU() * (T::PI() * lambda).sqrt() / tau;
    let l = thermal_polylog_combination(arg)?;
    let b = beta(tau, &cfg.scaled_abs(aleph::<T>() * lambda * tau))?;
    Ok(aleph::<T>() * lambda * tau * (T::lit(2.0) * lambda * tau * tau / T::PI() * l + b))
}

/// Intermediate distance `1 ≪ λ ≪ 1/τ`: `ϑ ≈ -2ℵ(λτ)³ ζ(3)(1 - 1/(πλ))`.
pub fn theta_asymptotic_intermediate<T: Real>(lambda: T, tau: T) -> T {
    let w = lambda * tau;
    -T::lit(2.0) * aleph::<T>() * w * w * w * zeta3::<T>() * (T::one() - T::one() / (T::PI() * lambda))
}

/// Large distance `λτ ≫ 1`: `φ ≈ -(ℵπ²λτ/2)(ln 2λ - 7ζ(3)/π² + 1/2)`.
pub fn phi_asymptotic_large<T: Real>(lambda: T, tau: T) -> T {
    let pi2 = T::PI() * T::PI();
    -aleph::<T>() * pi2 * lambda * tau / T::lit(2.0)
        * ((T::lit(2.0) * lambda).ln() - T::lit(7.0) * zeta3::<T>() / pi2 + T::lit(0.5))
}

/// Low- and high-temperature limits of `β`: `6ζ(5)(τ/π)⁴` and `ζ(3)/4`.
pub fn beta_asymptotes<T: Real>(tau: T) -> (T, T) {
    let r = tau / T::PI();
    (T::lit(6.0) * zeta5::<T>() * r * r * r * r, zeta3::<T>() / T::lit(4.0))
}
