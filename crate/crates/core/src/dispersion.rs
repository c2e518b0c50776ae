//! Plasmon branches in the parametric form `ω_a = (c/L) g_a(z)`, `(kL)² = z + g_a(z)²`.
//!
//! With `A = 2πλ`, `R = √(z + A²)` and `q(z) = tanh(√z/2)/√z`:
//!
//! ```text
//! g₊² = A² / (1 + R q)      g₀² = A² √z / (√z + R)      g₋² = A² z q / (z q + R)
//! ```
//!
//! `z > 0` lies below the light cone. Only the `+` branch extends to `z < 0`,
//! down to `-z₊`, where `q(z) = tan(√|z|/2)/√|z|` keeps `g₊` real.

use std::any::TypeId;
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;
use crate::roots::{bisect, newton_bracketed};
use crate::scales::{check_lambda, MaterialParams, SPEED_OF_LIGHT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModeBranch {
    Minus,
    Zero,
    Plus,
}

impl ModeBranch {
    pub const ALL: [ModeBranch; 3] = [ModeBranch::Minus, ModeBranch::Zero, ModeBranch::Plus];

    /// Weight `c_a` in the sum over branches.
    pub fn coefficient(self) -> i32 {
        match self {
            ModeBranch::Minus | ModeBranch::Plus => 1,
            ModeBranch::Zero => -2,
        }
    }

    /// Exponent `a` of `tanh` in the dispersion function.
    pub fn tanh_exponent(self) -> i32 {
        match self {
            ModeBranch::Minus => -1,
            ModeBranch::Zero => 0,
            ModeBranch::Plus => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModeBranch::Minus => "minus",
            ModeBranch::Zero => "zero",
            ModeBranch::Plus => "plus",
        }
    }
}

/// `tanh(√z/2)/√z`, continued to `z < 0` as `tan(√|z|/2)/√|z|`.
pub(crate) fn q<T: Real>(z: T) -> T {
    if z.abs() < T::lit(1e-3) {
        let z2 = z * z;
        return T::lit(0.5) - z / T::lit(24.0) + z2 / T::lit(240.0) - T::lit(17.0) * z2 * z / T::lit(40320.0)
            + T::lit(31.0) * z2 * z2 / T::lit(725_760.0);
    }
    if z > T::zero() {
        let s = z.sqrt();
        (s / T::lit(2.0)).tanh() / s
    } else {
        let s = (-z).sqrt();
        (s / T::lit(2.0)).tan() / s
    }
}

fn check_z<T: Real>(branch: ModeBranch, z: T, lambda: T) -> Result<()> {
    check_lambda(lambda)?;
    if z.is_nan() {
        return Err(Error::domain("z is NaN"));
    }
    match branch {
        ModeBranch::Plus => {
            if z < T::zero() {
                let zp = z_plus(lambda)?;
                // allow rounding at the lower end
                if z < -zp * (T::one() + T::lit(8.0) * T::epsilon()) {
                    return Err(Error::domain(format!("g₊ is defined for z ≥ -z₊ = {}, got {z}", -zp)));
                }
            }
        }
        _ => {
            if z < T::zero() {
                return Err(Error::domain(format!(
                    "g_{} is defined for z ≥ 0, got {z}",
                    branch.label()
                )));
            }
        }
    }
    Ok(())
}

/// `g_a(z)²` without domain checks; `z ≥ 0` except for `Plus`.
pub(crate) fn g_squared_unchecked<T: Real>(branch: ModeBranch, z: T, lambda: T) -> T {
    let a = T::TAU() * lambda;
    let a2 = a * a;
    if z.is_infinite() {
        return a2 / T::lit(2.0);
    }
    let r = (z + a2).max(T::zero()).sqrt();
    match branch {
        ModeBranch::Plus => a2 / (T::one() + r * q(z)),
        ModeBranch::Zero => {
            let s = z.sqrt();
            a2 * s / (s + r)
        }
        ModeBranch::Minus => {
            let zq = z * q(z);
            a2 * zq / (zq + r)
        }
    }
}

pub fn g_squared<T: Real>(branch: ModeBranch, z: T, lambda: T) -> Result<T> {
    check_z(branch, z, lambda)?;
    Ok(g_squared_unchecked(branch, z, lambda))
}

/// Dimensionless branch frequency `g_a(z) = ω_a L / c`.
pub fn g<T: Real>(branch: ModeBranch, z: T, lambda: T) -> Result<T> {
    g_squared(branch, z, lambda).map(|v| v.sqrt())
}

/// Large-`z` limit `√2 πλ = L ω_sp / c` shared by all branches.
pub fn g_infinity<T: Real>(lambda: T) -> T {
    T::SQRT_2() * T::PI() * lambda
}

/// `g₊(0) = 2πλ/√(1 + πλ)`, where the `+` branch meets the light cone.
pub fn g_plus_at_zero<T: Real>(lambda: T) -> T {
    T::TAU() * lambda / (T::one() + T::PI() * lambda).sqrt()
}

/// For `z ≥ 0`: `(g₀², g₊² - g₀², g₋² - g₀²)` with the differences free of cancellation.
pub(crate) fn branch_square_differences<T: Real>(z: T, lambda: T) -> (T, T, T) {
    let a = T::TAU() * lambda;
    let a2 = a * a;
    let s = z.sqrt();
    let r = (z + a2).sqrt();
    let qz = q(z);
    // 1 - tanh(s/2)
    let om = T::lit(2.0) / (s.exp() + T::one());
    let zq = z * qz;
    let dp_sq = a2 * r * om / ((T::one() + r * qz) * (s + r));
    let dm_sq = -a2 * r * s * om / ((zq + r) * (s + r));
    (a2 * s / (s + r), dp_sq, dm_sq)
}

/// For `z ≥ 0`: `(g₀, g₊ - g₀, g₋ - g₀)` with the differences free of cancellation.
pub(crate) fn branch_differences<T: Real>(z: T, lambda: T) -> (T, T, T) {
    let (g0_sq, dp_sq, dm_sq) = branch_square_differences(z, lambda);
    let g0 = g0_sq.sqrt();
    let gp = g_squared_unchecked(ModeBranch::Plus, z, lambda).sqrt();
    let gm = g_squared_unchecked(ModeBranch::Minus, z, lambda).sqrt();
    let dp = dp_sq / (gp + g0);
    let dm = if gm + g0 > T::zero() {
        dm_sq / (gm + g0)
    } else {
        T::zero()
    };
    (g0, dp, dm)
}

/// Small-`z` form `g ≈ √(2πλ √z [coth(√z/2)]^a)`, for `|z| ≪ (2πλ)²`, `z ≥ 0`.
pub fn g_small_z<T: Real>(branch: ModeBranch, z: T, lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    if !(z >= T::zero()) {
        return Err(Error::domain(format!("small-z form needs z ≥ 0, got {z}")));
    }
    let a = T::TAU() * lambda;
    let s = z.sqrt();
    let v = match branch {
        // √z coth(√z/2) = 1/q
        ModeBranch::Plus => a / q(z),
        ModeBranch::Zero => a * s,
        ModeBranch::Minus => a * z * q(z),
    };
    Ok(v.sqrt())
}

/// Non-retarded form `g ≈ (2πλ/√2) √(1 + a e^{-√z})`, for `z ≫ (2πλ)²`.
pub fn g_large_z<T: Real>(branch: ModeBranch, z: T, lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    if !(z >= T::zero()) {
        return Err(Error::domain(format!("large-z form needs z ≥ 0, got {z}")));
    }
    let a = T::lit(branch.tanh_exponent() as f64);
    Ok(g_infinity(lambda) * (T::one() + a * (-z.sqrt()).exp()).sqrt())
}

type ZPlusCache = RwLock<HashMap<(TypeId, u64), f64>>;

fn z_plus_cache() -> &'static ZPlusCache {
    static CACHE: OnceLock<ZPlusCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

const Z_PLUS_CACHE_LIMIT: usize = 1 << 16;

/// Root `z₊ = s²` of `s = 2πλ cos(s/2)`, `s ∈ (0, π)`. Memoized per `λ`.
pub fn z_plus<T: Real>(lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    let key = (TypeId::of::<T>(), lambda.as_f64().to_bits());
    if let Ok(cache) = z_plus_cache().read() {
        if let Some(&v) = cache.get(&key) {
            return Ok(T::lit(v));
        }
    }
    let v = z_plus_uncached(lambda)?;
    if let Ok(mut cache) = z_plus_cache().write() {
        if cache.len() >= Z_PLUS_CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, v.as_f64());
    }
    Ok(v)
}

pub fn z_plus_uncached<T: Real>(lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    let a = T::TAU() * lambda;
    let half = T::lit(0.5);
    let scale = a.min(T::PI());
    let s = newton_bracketed(
        |s: T| (s - a * (s * half).cos(), T::one() + a * half * (s * half).sin()),
        T::zero(),
        T::PI(),
        T::lit(2.0) * T::epsilon() * scale,
    )?;
    Ok(s * s)
}

/// A point of a physical dispersion curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint<T> {
    /// Wavevector (1/m).
    pub k: T,
    /// Angular frequency (rad/s).
    pub omega: T,
    pub branch: ModeBranch,
    pub z: T,
}

/// `ω_a(k)` at plate distance `L` for each `k` in the grid, by inverting
/// `(kL)² = z + g_a(z)²` for `z`.
pub fn dispersion_curve<T: Real>(
    branch: ModeBranch,
    k_grid: &[T],
    distance: T,
    material: &MaterialParams<T>,
) -> Result<Vec<DispersionPoint<T>>> {
    if !(distance > T::zero()) {
        return Err(Error::domain(format!("distance must be positive, got {distance}")));
    }
    let lambda = distance / material.plasma_wavelength;
    let z_lo = match branch {
        ModeBranch::Plus => -z_plus(lambda)?,
        _ => T::zero(),
    };
    let c = T::lit(SPEED_OF_LIGHT);
    k_grid
        .iter()
        .map(|&k| {
            if !(k > T::zero()) || !k.is_finite() {
                return Err(Error::domain(format!("wavevectors must be positive, got {k}")));
            }
            let target = (k * distance) * (k * distance);
            let residual = |z: T| z + g_squared_unchecked(branch, z, lambda) - target;
            // z + g² ≥ z, so z = (kL)² brackets from above
            let hi = target.max(T::min_positive_value());
            let z = bisect(residual, z_lo, hi, T::epsilon() * (hi - z_lo))
                .map_err(|e| Error::domain(format!("dispersion inversion failed at k = {k}: {e}")))?;
            let g = g_squared_unchecked(branch, z, lambda).sqrt();
            Ok(DispersionPoint {
                k,
                omega: c * g / distance,
                branch,
                z,
            })
        })
        .collect()
}
