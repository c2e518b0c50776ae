//! Physical constants, material presets and the map between physical `(L, T)`
//! and the dimensionless coordinates `(λ, τ)` used by every other module.
//!
//! `λ = L / λ_p` and `τ = T / T_p = 2π k_B T / (ħ ω_p)`, so that the product
//! `λτ = k_B T L / (ħ c)` carries no material dependence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Reduced Planck constant (J s), CODATA 2018 exact value.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Elementary charge, i.e. one electronvolt in joules.
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;
/// ζ(5).
pub const ZETA5: f64 = 1.036_927_755_143_369_9;

/// Plasma wavelength quoted for gold (m).
pub const GOLD_PLASMA_WAVELENGTH: f64 = 136e-9;

/// `ℵ = 180/π³`, the prefactor that makes the perfect-mirror energy `-ħc/(4πℵL³)`.
pub fn aleph<T: Real>() -> T {
    T::lit(180.0) / T::PI().powi(3)
}

/// Plasma-model material scales. Always constructed from one scale; the other
/// two are derived so that `λ_p ω_p = 2πc` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams<T> {
    /// ω_p in rad/s.
    pub plasma_frequency: T,
    /// λ_p = 2πc/ω_p in m.
    pub plasma_wavelength: T,
    /// T_p = ħω_p/(2π k_B) in K.
    pub plasma_temperature: T,
}

impl<T: Real> MaterialParams<T> {
    pub fn from_plasma_wavelength(wavelength_m: T) -> Result<Self> {
        if !(wavelength_m > T::zero()) || !wavelength_m.is_finite() {
            return Err(Error::domain(format!(
                "plasma wavelength must be positive and finite, got {wavelength_m}"
            )));
        }
        let two_pi_c = T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT);
        let omega = two_pi_c / wavelength_m;
        Ok(Self {
            plasma_frequency: omega,
            plasma_wavelength: wavelength_m,
            plasma_temperature: T::lit(HBAR) * omega / (T::lit(2.0) * T::PI() * T::lit(BOLTZMANN)),
        })
    }

    pub fn from_plasma_frequency(omega: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::domain(format!(
                "plasma frequency must be positive and finite, got {omega}"
            )));
        }
        let two_pi_c = T::lit(2.0) * T::PI() * T::lit(SPEED_OF_LIGHT);
        let mut m = Self::from_plasma_wavelength(two_pi_c / omega)?;
        m.plasma_frequency = omega;
        Ok(m)
    }

    pub fn from_plasma_energy_ev(energy_ev: T) -> Result<Self> {
        Self::from_plasma_frequency(energy_ev * T::lit(ELECTRON_VOLT) / T::lit(HBAR))
    }

    /// Gold, parametrised by its quoted plasma wavelength of 136 nm.
    pub fn gold() -> Self {
        Self::from_plasma_wavelength(T::lit(GOLD_PLASMA_WAVELENGTH)).expect("gold preset is valid")
    }

    /// Looks up a named preset (case-insensitive). Only `"gold"` is known.
    pub fn preset(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "gold" | "au" => Ok(Self::gold()),
            other => Err(Error::domain(format!("unknown material preset {other:?}"))),
        }
    }

    /// ħω_p in eV.
    pub fn plasma_energy_ev(&self) -> T {
        T::lit(HBAR) * self.plasma_frequency / T::lit(ELECTRON_VOLT)
    }

    /// Surface-plasmon frequency ω_p/√2 (rad/s).
    pub fn surface_plasmon_frequency(&self) -> T {
        self.plasma_frequency / T::SQRT_2()
    }
}

/// Dimensionless separation `λ = L/λ_p` and temperature `τ = T/T_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledGeometry<T> {
    pub lambda: T,
    pub tau: T,
}

impl<T: Real> ScaledGeometry<T> {
    pub fn new(lambda: T, tau: T) -> Result<Self> {
        check_lambda(lambda)?;
        check_tau(tau)?;
        Ok(Self { lambda, tau })
    }

    /// `λτ = k_B T L/(ħc)`.
    pub fn lambda_tau(&self) -> T {
        self.lambda * self.tau
    }
}

pub(crate) fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "scaled distance must be positive and finite, got {lambda}"
        )))
    }
}

pub(crate) fn check_tau<T: Real>(tau: T) -> Result<()> {
    if tau >= T::zero() && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "scaled temperature must be non-negative and finite, got {tau}"
        )))
    }
}

/// Maps plate separation `L` (m) and temperature `T` (K) to `(λ, τ)`.
pub fn to_scaled<T: Real>(distance: T, temperature: T, material: &MaterialParams<T>) -> Result<ScaledGeometry<T>> {
    if !(distance > T::zero()) || !distance.is_finite() {
        return Err(Error::domain(format!(
            "plate distance must be positive, got {distance} m"
        )));
    }
    if !(temperature >= T::zero()) || !temperature.is_finite() {
        return Err(Error::domain(format!(
            "temperature must be non-negative, got {temperature} K"
        )));
    }
    Ok(ScaledGeometry {
        lambda: distance / material.plasma_wavelength,
        tau: temperature / material.plasma_temperature,
    })
}

/// Inverse of [`to_scaled`]: returns `(L in m, T in K)`.
pub fn from_scaled<T: Real>(geometry: &ScaledGeometry<T>, material: &MaterialParams<T>) -> (T, T) {
    (
        geometry.lambda * material.plasma_wavelength,
        geometry.tau * material.plasma_temperature,
    )
}

/// Perfect-mirror reference values at separation `L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization<T> {
    pub aleph: T,
    /// `E_C = -ħc/(4πℵL³)` in J/m².
    pub casimir_energy: T,
    /// `F_C = -3ħc/(4πℵL⁴)` in Pa.
    pub casimir_force: T,
    /// `S_C = ζ(3) k_B/(8πL²)` in J K⁻¹ m⁻².
    pub casimir_entropy: T,
}

pub fn perfect_mirror_refs<T: Real>(distance: T) -> Result<Normalization<T>> {
    if !(distance > T::zero()) || !distance.is_finite() {
        return Err(Error::domain(format!(
            "plate distance must be positive, got {distance} m"
        )));
    }
    let aleph = aleph::<T>();
    let four_pi = T::lit(4.0) * T::PI();
    let energy = -T::lit(HBAR) * T::lit(SPEED_OF_LIGHT) / (four_pi * aleph * distance.powi(3));
    Ok(Normalization {
        aleph,
        casimir_energy: energy,
        casimir_force: T::lit(3.0) * energy / distance,
        casimir_entropy: T::lit(ZETA3) * T::lit(BOLTZMANN) / (T::lit(8.0) * T::PI() * distance * distance),
    })
}
