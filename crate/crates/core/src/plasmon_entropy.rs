//! Plasmonic Casimir entropy `σ(λ, τ)`, in units of the high-temperature
//! perfect-mirror entropy `S_C(L) = ζ(3) k_B / (8π L²)`.

use serde::{Deserialize, Serialize};

use crate::dispersion::{branch_differences, g_squared_unchecked, z_plus, ModeBranch};
use crate::error::{Error, Result};
use crate::plasmon_energy::{theta_detailed, theta_hints, theta_on_partition};
use crate::quadrature::{integrate_finite, integrate_semi_infinite, QuadratureConfig};
use crate::real::Real;
use crate::scales::{aleph, check_lambda, check_tau, perfect_mirror_refs, MaterialParams};
use crate::specfun::{entropy_kernel, ln_one_minus_exp, occupation, thermal_polylog_combination, zeta3, zeta5};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult<T> {
    pub sigma: T,
    /// Entropy per unit area (J K⁻¹ m⁻²), when a material was supplied.
    pub absolute: Option<T>,
    pub error: T,
}

impl<T: Real> EntropyResult<T> {
    pub fn with_absolute(mut self, lambda: T, material: &MaterialParams<T>) -> Result<Self> {
        let refs = perfect_mirror_refs(lambda * material.plasma_wavelength)?;
        self.absolute = Some(refs.casimir_entropy * self.sigma);
        Ok(self)
    }
}

/// Asymptotic regimes of `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropyRegime {
    /// `τ² ≪ λ ≪ 1`.
    ShortLowT,
    /// `λ ≪ 1`, `τ ≫ 1`.
    ShortHighT,
    /// `1 ≪ λ ≪ 1/τ`.
    Intermediate,
    /// `λ ≫ 1`, `λτ ≫ 1`.
    LargeT,
}

/// `k(x₀ + y) - k(x₀)` for the entropy kernel `k(x) = ln(1 - e^{-x}) - x n̄(x)`.
fn delta_kernel<T: Real>(x0: T, y: T) -> T {
    if y == T::zero() {
        return T::zero();
    }
    let x1 = x0 + y;
    if x0 > T::zero() && y.abs() <= x0 / T::lit(2.0) && x0 <= T::lit(600.0) {
        let dh = crate::plasmon_energy::delta_h(x0, y, T::one());
        let n0 = occupation(x0);
        let n1 = occupation(x1);
        // x₁n̄₁ - x₀n̄₀ = y n̄₁ + x₀ (n̄₁ - n̄₀),  n̄₁ - n̄₀ = -(e^y - 1)(n̄₀ + 1) n̄₁
        let dn = -y.exp_m1() * (n0 + T::one()) * n1;
        dh - (y * n1 + x0 * dn)
    } else {
        entropy_kernel(x1) - entropy_kernel(x0)
    }
}

/// `σ(λ, τ)` from the closed integral over mode occupations.
pub fn sigma_integral<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<EntropyResult<T>> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return Err(Error::domain("entropy integral needs τ > 0 (σ = 0 at τ = 0)"));
    }
    let w = lambda * tau;
    let zp = z_plus(lambda)?;
    let two = T::lit(2.0);
    let prefactor = T::lit(2.0) / zeta3::<T>();
    let icfg = cfg.scaled_abs(prefactor);
    let neg = integrate_finite(
        |u: T| {
            let g = g_squared_unchecked(ModeBranch::Plus, -u * u, lambda).sqrt();
            two * u * entropy_kernel(g / w)
        },
        T::zero(),
        zp.sqrt(),
        &icfg,
    )
    .map_err(|e| e.within("entropy, propagating branch"))?;
    let pos = integrate_semi_infinite(
        |u: T| {
            if u == T::zero() {
                return T::zero();
            }
            let (g0, dp, dm) = branch_differences(u * u, lambda);
            let x0 = g0 / w;
            two * u * (delta_kernel(x0, dp / w) + delta_kernel(x0, dm / w))
        },
        T::zero(),
        &theta_hints(lambda, w),
        &icfg,
    )
    .map_err(|e| e.within("entropy, evanescent branches"))?;
    let x = zp.sqrt() / w;
    let closed = T::lit(3.0) * w * w * thermal_polylog_combination(x)? + zp * ln_one_minus_exp(x);
    let sigma = -T::lit(4.0) / zeta3::<T>() * ((neg.value + pos.value) / two + closed);
    Ok(EntropyResult {
        sigma,
        absolute: None,
        error: prefactor * (neg.error + pos.error),
    })
}

/// `σ = (2/(ζ(3)ℵλ)) ∂ϑ/∂τ` by a Richardson-extrapolated central difference,
/// step `τ·10⁻⁴`, with `ϑ` evaluated on the partition adapted at `τ`.
pub fn sigma_from_theta<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau < T::lit(1e-8) {
        return Err(Error::domain(format!(
            "finite-difference entropy needs τ ≥ 1e-8, got {tau}"
        )));
    }
    let (_, partition) = theta_detailed(lambda, tau, cfg)?;
    let step = tau * T::lit(1e-4);
    let th = |t: T| theta_on_partition(lambda, t, &partition);
    let central = |s: T| -> Result<T> { Ok((th(tau + s)? - th(tau - s)?) / (T::lit(2.0) * s)) };
    let coarse = central(step)?;
    let fine = central(step / T::lit(2.0))?;
    let derivative = (T::lit(4.0) * fine - coarse) / T::lit(3.0);
    Ok(T::lit(2.0) / (zeta3::<T>() * aleph::<T>() * lambda) * derivative)
}

/// Perfect-mirror entropy factor: `12(λτ)²` at low temperature, saturating at 1.
pub fn sigma_perfect<T: Real>(lambda: T, tau: T) -> T {
    let w = lambda * tau;
    (T::lit(12.0) * w * w).min(T::one())
}

/// Closed-form asymptotes of `σ`.
pub fn sigma_asymptote<T: Real>(regime: EntropyRegime, lambda: T, tau: T) -> T {
    let w = lambda * tau;
    let low_t = T::lit(12.0) * w * w;
    let pi = T::PI();
    match regime {
        EntropyRegime::ShortLowT => {
            let r = tau / (pi * lambda);
            low_t
                * (T::one() / (pi * lambda) + T::lit(5.0) / (pi * pi) * zeta5::<T>() / zeta3::<T>() * r * r - T::one())
        }
        EntropyRegime::ShortHighT => T::lit(0.5),
        EntropyRegime::Intermediate => low_t * (-T::one() + T::one() / (lambda * pi)),
        EntropyRegime::LargeT => {
            -(pi * pi) / zeta3::<T>()
                * ((T::lit(2.0) * lambda).ln() - T::lit(7.0) * zeta3::<T>() / (pi * pi) + T::lit(0.5))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tight() -> QuadratureConfig<f64> {
        QuadratureConfig::with_tolerances(1e-11, 1e-300).unwrap()
    }

    #[test]
    fn delta_kernel_against_direct() {
        for &(x, y) in &[(1.0f64, 0.3), (5.0, -2.0), (0.2, 0.05), (40.0, 10.0)] {
            let direct = entropy_kernel(x + y) - entropy_kernel(x);
            assert!((delta_kernel(x, y) - direct).abs() <= 1e-12 * direct.abs(), "{x} {y}");
        }
        // k'(x) = x n̄(n̄ + 1)
        let (x, y) = (2.0f64, 1e-7);
        let n = occupation(x);
        assert!((delta_kernel(x, y) / (y * x * n * (n + 1.0)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn perfect_reference() {
        assert!((sigma_perfect(1.0f64, 1e-3) - 12e-6).abs() < 1e-18);
        assert_eq!(sigma_perfect(10.0, 100.0), 1.0);
        assert_eq!(sigma_perfect(1.0, 0.0), 0.0);
    }

    #[test]
    fn integral_and_derivative_agree() {
        let cfg = tight();
        let a = sigma_integral(1.0, 0.1, &cfg).unwrap().sigma;
        let b = sigma_from_theta(1.0, 0.1, &cfg).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6, "{a} {b}");
    }

    #[test]
    fn asymptote_values() {
        assert_eq!(sigma_asymptote(EntropyRegime::ShortHighT, 0.01, 10.0), 0.5);
        let v = sigma_asymptote(EntropyRegime::Intermediate, 10.0, 1e-3) / sigma_perfect(10.0, 1e-3);
        assert!((v - (-1.0 + 1.0 / (10.0 * std::f64::consts::PI))).abs() < 1e-14);
    }

    #[test]
    fn tiny_tau_rejected_by_difference_oracle() {
        assert!(sigma_from_theta(1.0, 1e-9, &tight()).is_err());
        assert!(sigma_integral(1.0, 0.0, &tight()).is_err());
    }
}
