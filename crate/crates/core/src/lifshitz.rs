//! Full Casimir interaction of two plasma-model half-spaces (Lifshitz formula),
//! and the real-frequency representation of its entropy.
//!
//! Imaginary-axis variables: `X = ξL/c` and `κ = L√(k² + ξ²/c²) ≥ X`. On the real
//! axis `Ω = ωL/c`; propagating waves have `κ = -iy`, `0 ≤ y ≤ Ω`.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispersion::{branch_square_differences, g_infinity, g_plus_at_zero, g_squared_unchecked, ModeBranch};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_semi_infinite, integrate_with_breakpoints, QuadratureConfig};
use crate::real::{CompensatedSum, Real};
use crate::roots::bisect;
use crate::scales::{aleph, check_lambda, check_tau};
use crate::specfun::{ln_one_minus_exp, zeta3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    TE,
    TM,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::TE, Polarization::TM];
}

/// One term of the primed Matsubara sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatsubaraTermSpec<T> {
    pub n: usize,
    /// `X_n = 2πnλτ`.
    pub x: T,
    /// `1/2` for `n = 0`, else `1`.
    pub weight: T,
}

impl<T: Real> MatsubaraTermSpec<T> {
    pub fn new(n: usize, lambda: T, tau: T) -> Self {
        Self {
            n,
            x: T::TAU() * T::from_usize_lossy(n) * lambda * tau,
            weight: if n == 0 { T::lit(0.5) } else { T::one() },
        }
    }
}

/// `(r, 1 - r)` on the imaginary axis, both without cancellation.
fn reflection_parts<T: Real>(p: Polarization, x: T, kappa: T, lambda: T) -> (T, T) {
    let a = T::TAU() * lambda;
    let a2 = a * a;
    let km = (kappa * kappa + a2).sqrt();
    let sum = kappa + km;
    match p {
        Polarization::TE => {
            let r = -a2 / (sum * sum);
            (r, T::one() - r)
        }
        Polarization::TM => {
            if x == T::zero() {
                return (T::one(), T::zero());
            }
            let x2 = x * x;
            let den = (x2 + a2) * kappa + x2 * km;
            let r = a2 * (kappa - x2 / sum) / den;
            let one_minus = x2 * (sum + a2 / sum) / den;
            (r, one_minus)
        }
    }
}

/// Fresnel coefficient `r_p(iX, κ)` for `κ ≥ 0`. `r_TM(0, κ) = 1`.
pub fn fresnel<T: Real>(p: Polarization, x: T, kappa: T, lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    if !(x >= T::zero()) || !(kappa >= T::zero()) {
        return Err(Error::domain(format!(
            "fresnel needs X ≥ 0 and κ ≥ 0, got X = {x}, κ = {kappa}"
        )));
    }
    if p == Polarization::TM && kappa == T::zero() && x > T::zero() {
        return Ok(-T::one());
    }
    Ok(reflection_parts(p, x, kappa, lambda).0)
}

/// `ln(1 - r² e^{-2κ})`.
fn round_trip_log<T: Real>(p: Polarization, x: T, kappa: T, lambda: T) -> T {
    let (r, one_minus_r) = reflection_parts(p, x, kappa, lambda);
    let r2 = r * r;
    let e = (-T::lit(2.0) * kappa).exp();
    if r2 * e < T::lit(0.5) {
        (-r2 * e).ln_1p()
    } else if one_minus_r == T::zero() {
        ln_one_minus_exp(T::lit(2.0) * kappa)
    } else {
        let one_minus_r2 = one_minus_r * (T::lit(2.0) - one_minus_r);
        (one_minus_r2 + r2 * -(-T::lit(2.0) * kappa).exp_m1()).ln()
    }
}

/// `Γ_p(X) = ∫_X^∞ κ ln(1 - r_p² e^{-2κ}) dκ`.
pub fn gamma_p<T: Real>(p: Polarization, x: T, lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::domain(format!("Γ_p needs finite X ≥ 0, got {x}")));
    }
    let a = T::TAU() * lambda;
    let hints = [x + a * T::lit(0.1), x + a, x + T::one(), x + T::lit(5.0)];
    integrate_semi_infinite(|k: T| k * round_trip_log(p, x, k, lambda), x, &hints, cfg)
        .map(|i| i.value)
        .map_err(|e| e.within("Γ_p"))
}

const MATSUBARA_CHUNK: usize = 64;
const MATSUBARA_MAX_TERMS: usize = 50_000_000;

fn matsubara_term<T: Real>(n: usize, lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    let spec = MatsubaraTermSpec::new(n, lambda, tau);
    let te = gamma_p(Polarization::TE, spec.x, lambda, cfg)?;
    let tm = gamma_p(Polarization::TM, spec.x, lambda, cfg)?;
    Ok(spec.weight * (te + tm))
}

/// `φ_Lif(λ, τ) = -2ℵλτ Σ_p Σ′_n Γ_p(2πnλτ)`. At `τ = 0` the sum becomes an
/// integral over `X`, see [`phi_lifshitz_zero_temperature`].
///
/// The sum stops at the first `n ≥ 1` whose term is below `rel_tol` of the partial
/// sum. Terms are evaluated in parallel chunks and added in ascending order.
pub fn phi_lifshitz<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return phi_lifshitz_zero_temperature(lambda, cfg);
    }
    let w = lambda * tau;
    let prefactor = -T::lit(2.0) * aleph::<T>() * w;
    let icfg = cfg.scaled_abs(prefactor);
    let mut acc = CompensatedSum::new();
    let mut start = 0;
    while start < MATSUBARA_MAX_TERMS {
        let terms: Vec<Result<T>> = (start..start + MATSUBARA_CHUNK)
            .into_par_iter()
            .map(|n| matsubara_term(n, lambda, tau, &icfg))
            .collect();
        for (i, t) in terms.into_iter().enumerate() {
            let t = t.map_err(|e| e.within("Lifshitz Matsubara sum"))?;
            acc.add(t);
            if start + i >= 1 && t.abs() <= cfg.rel_tol * acc.value().abs() {
                return Ok(prefactor * acc.value());
            }
        }
        start += MATSUBARA_CHUNK;
    }
    Err(Error::non_convergence(
        "Lifshitz Matsubara sum",
        (prefactor * acc.value()).as_f64(),
        f64::NAN,
    ))
}

/// `φ_Lif` with the primed sum cut after `terms` terms.
pub fn phi_lifshitz_truncated<T: Real>(lambda: T, tau: T, terms: usize, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if !(tau > T::zero()) {
        return Err(Error::domain("truncated Matsubara sum needs τ > 0"));
    }
    let w = lambda * tau;
    let prefactor = -T::lit(2.0) * aleph::<T>() * w;
    let icfg = cfg.scaled_abs(prefactor);
    let values: Vec<Result<T>> = (0..terms)
        .into_par_iter()
        .map(|n| matsubara_term(n, lambda, tau, &icfg))
        .collect();
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v?);
    }
    Ok(prefactor * acc.value())
}

/// Zero-temperature limit `φ_Lif(λ, 0) = -(ℵ/π) Σ_p ∫₀^∞ Γ_p(X) dX`.
pub fn phi_lifshitz_zero_temperature<T: Real>(lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    let prefactor = -aleph::<T>() / T::PI();
    let icfg = cfg.scaled_abs(prefactor);
    let inner = icfg.nested();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let a = T::TAU() * lambda;
    let outer = integrate_semi_infinite(
        |x: T| {
            let mut s = T::zero();
            for p in Polarization::ALL {
                match gamma_p(p, x, lambda, &inner) {
                    Ok(v) => s = s + v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                    }
                }
            }
            s
        },
        T::zero(),
        &[a * T::lit(0.1), a, T::one(), T::lit(5.0)],
        &icfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e.within("zero-temperature Lifshitz energy"));
    }
    Ok(prefactor * outer.map_err(|e| e.within("zero-temperature Lifshitz energy"))?.value)
}

/// Principal `arg(1 - r_p² e^{2iy})` for a propagating wave, `0 ≤ y ≤ Ω`.
fn propagating_phase<T: Real>(p: Polarization, omega: T, y: T, lambda: T) -> T {
    let a = T::TAU() * lambda;
    let eps = T::one() - (a / omega) * (a / omega);
    let two = T::lit(2.0);
    if y <= a {
        let km = (a * a - y * y).sqrt();
        let alpha = match p {
            Polarization::TE => y.atan2(km),
            Polarization::TM => (eps * y).atan2(km),
        };
        // r² e^{2iy} = e^{iθ}; 1 - e^{iθ} has phase (θ mod 2π - π)/2
        let theta = T::lit(4.0) * alpha + two * y;
        let reduced = theta - T::TAU() * (theta / T::TAU()).floor();
        (reduced - T::PI()) / two
    } else {
        let km = (y * y - a * a).sqrt();
        let r = match p {
            Polarization::TE => (y - km) / (y + km),
            Polarization::TM => (eps * y - km) / (eps * y + km),
        };
        let r2 = r * r;
        let phase = two * y;
        (-r2 * phase.sin()).atan2(T::one() - r2 * phase.cos())
    }
}

/// Total phase `θ(y)` of `r_p² e^{2iy}` for `y ≤ 2πλ`, where `|r_p| = 1`.
fn total_phase<T: Real>(p: Polarization, omega: T, y: T, lambda: T) -> T {
    let a = T::TAU() * lambda;
    let km = (a * a - y * y).max(T::zero()).sqrt();
    let alpha = match p {
        Polarization::TE => y.atan2(km),
        Polarization::TM => ((T::one() - (a / omega) * (a / omega)) * y).atan2(km),
    };
    T::lit(4.0) * alpha + T::lit(2.0) * y
}

/// Points in `(0, min(Ω, 2πλ))` where `θ(y)` crosses a multiple of `2π`; the
/// propagating integrand jumps by `π` there.
fn phase_jumps<T: Real>(p: Polarization, omega: T, lambda: T) -> Result<Vec<T>> {
    let top = omega.min(T::TAU() * lambda);
    let theta = |y: T| total_phase(p, omega, y, lambda);
    let cells = (T::lit(8.0) * (top + T::PI()) / T::PI())
        .ceil()
        .as_f64()
        .clamp(16.0, 1e6) as usize;
    let mut jumps = Vec::new();
    let mut y0 = T::zero();
    let mut k0 = (theta(y0) / T::TAU()).floor();
    for i in 1..=cells {
        let y1 = top * T::from_usize_lossy(i) / T::from_usize_lossy(cells);
        let k1 = (theta(y1) / T::TAU()).floor();
        if k1 != k0 {
            let (lo_k, hi_k) = if k1 > k0 {
                (k0 + T::one(), k1)
            } else {
                (k1 + T::one(), k0)
            };
            let mut k = lo_k;
            while k <= hi_k {
                let target = T::TAU() * k;
                jumps.push(bisect(
                    |y: T| theta(y) - target,
                    y0,
                    y1,
                    T::epsilon() * T::lit(4.0) * top,
                )?);
                k = k + T::one();
            }
        }
        y0 = y1;
        k0 = k1;
    }
    Ok(jumps)
}

/// `Im M_p^ph(Ω) = ∫₀^Ω y arg(1 - r_p² e^{2iy}) dy`.
pub fn im_m_propagating<T: Real>(p: Polarization, omega: T, lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    if !(omega >= T::zero()) {
        return Err(Error::domain(format!("Ω must be non-negative, got {omega}")));
    }
    if omega == T::zero() {
        return Ok(T::zero());
    }
    let a = T::TAU() * lambda;
    let s = omega * omega / a;
    let mut hints = vec![s * T::lit(0.1), s, s * T::lit(10.0), a];
    hints.extend(phase_jumps(p, omega, lambda)?);
    integrate_with_breakpoints(
        |y: T| y * propagating_phase(p, omega, y, lambda),
        T::zero(),
        omega,
        &hints,
        cfg,
    )
    .map(|i| i.value)
    .map_err(|e| e.within("propagating sector"))
}

/// Minimum of `g₊(u²)` over `u ≥ 0` as `(u_min, g_min)`; `u_min = 0` when the
/// branch increases monotonically.
pub(crate) fn plus_branch_minimum<T: Real>(lambda: T) -> (T, T) {
    let g = |u: T| g_squared_unchecked(ModeBranch::Plus, u * u, lambda).sqrt();
    let span = (T::TAU() * lambda * T::lit(4.0)).max(T::lit(60.0));
    let n = 600;
    let step = span / T::from_usize_lossy(n);
    let mut best = 0;
    let mut best_g = g(T::zero());
    for i in 1..=n {
        let v = g(step * T::from_usize_lossy(i));
        if v < best_g {
            best = i;
            best_g = v;
        }
    }
    if best == 0 {
        return (T::zero(), best_g);
    }
    // golden section inside the neighbouring cells
    let ratio = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut lo = step * T::from_usize_lossy(best - 1);
    let mut hi = step * T::from_usize_lossy(best + 1);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if hi - lo <= T::epsilon() * T::lit(16.0) * hi {
            break;
        }
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - ratio * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + ratio * (hi - lo);
            gd = g(d);
        }
    }
    let u = (lo + hi) / T::lit(2.0);
    (u, g(u))
}

/// Smallest `u ≥ start` with `g(u) ≥ omega`, for `g` increasing on `[start, ∞)`
/// towards a limit above `omega`.
fn rising_crossing<T: Real>(g: impl Fn(T) -> T, omega: T, start: T) -> Result<T> {
    let mut hi = start + T::one();
    while g(hi) < omega {
        hi = start + (hi - start) * T::lit(2.0);
        if !hi.is_finite() {
            return Err(Error::non_convergence("mode measure bracket", hi.as_f64(), f64::NAN));
        }
    }
    bisect(|u: T| g(u) - omega, start, hi, T::epsilon() * T::lit(4.0) * hi)
}

/// Signed `z`-measure used by the evanescent TM sector: for `Ω < g(∞)` the measure
/// of `{z ≥ 0 : g_a(z) < Ω}`, for `Ω > g(∞)` minus the measure of `{z ≥ 0 : g_a(z) ≥ Ω}`.
///
/// `g₀` and `g₋` increase from 0 to `g(∞)`. `g₊` starts at `g₊(0)`, has at most one
/// interior minimum and approaches `g(∞)` from below, so both sets are bounded.
fn mode_measure<T: Real>(branch: ModeBranch, omega: T, lambda: T) -> Result<T> {
    let g_inf = g_infinity(lambda);
    let g = |u: T| g_squared_unchecked(branch, u * u, lambda).sqrt();
    let below = omega < g_inf;
    if branch != ModeBranch::Plus {
        if !below {
            return Ok(T::zero());
        }
        let u = rising_crossing(g, omega, T::zero())?;
        return Ok(u * u);
    }
    let (u_min, g_min) = plus_branch_minimum(lambda);
    if below {
        if omega <= g_min {
            return Ok(T::zero());
        }
        let left = plus_left_edge(omega, lambda)?;
        let right = rising_crossing(g, omega, u_min)?;
        Ok(right * right - left * left)
    } else {
        if g(T::zero()) < omega {
            return Ok(T::zero());
        }
        // g₊ ≥ Ω only on the falling part next to z = 0
        let edge = bisect(
            |u: T| g(u) - omega,
            T::zero(),
            u_min,
            T::epsilon() * T::lit(4.0) * u_min,
        )?;
        Ok(-edge * edge)
    }
}

const RESONANCE_GAP: f64 = 1e-12;

/// `Im M_TM^ev(Ω) = -(π/2) Σ_a c_a m_a(Ω)` from surface-plasmon mode counting.
/// The TE evanescent sector has no imaginary part.
pub fn im_m_evanescent_tm<T: Real>(omega: T, lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    if !(omega >= T::zero()) {
        return Err(Error::domain(format!("Ω must be non-negative, got {omega}")));
    }
    if omega == T::zero() {
        return Ok(T::zero());
    }
    // the branch measures diverge at g(∞) while their weighted sum stays finite
    let g_inf = g_infinity(lambda);
    let gap = T::lit(RESONANCE_GAP) * g_inf;
    if (omega - g_inf).abs() < gap {
        let below = weighted_measure(g_inf - gap, lambda)?;
        let above = weighted_measure(g_inf + gap, lambda)?;
        let t = (omega - g_inf + gap) / (gap + gap);
        return Ok(-T::FRAC_PI_2() * (below + (above - below) * t));
    }
    Ok(-T::FRAC_PI_2() * weighted_measure(omega, lambda)?)
}

/// `u` with `g₊(u²) = Ω` on the falling side, or 0 if `g₊(0) < Ω`.
fn plus_left_edge<T: Real>(omega: T, lambda: T) -> Result<T> {
    let g = |u: T| g_squared_unchecked(ModeBranch::Plus, u * u, lambda).sqrt();
    if g(T::zero()) < omega {
        return Ok(T::zero());
    }
    let (u_min, _) = plus_branch_minimum(lambda);
    bisect(
        |u: T| g(u) - omega,
        T::zero(),
        u_min,
        T::epsilon() * T::lit(4.0) * u_min,
    )
}

/// Beyond this `z` the branches differ by less than `e^{-√z}` relative and the roots
/// are found as offsets from the zero branch.
const OFFSET_SPLIT: f64 = 64.0;

/// `z` with `g₀(z) = Ω < g(∞)`.
fn zero_branch_root<T: Real>(omega: T, lambda: T) -> T {
    let g_inf = g_infinity(lambda);
    let o2 = omega * omega;
    o2 * o2 / (T::lit(2.0) * (g_inf - omega) * (g_inf + omega))
}

/// `δ` with `g_a(z₀ + δ)² = g₀(z₀)²`, solved on the cancellation-free residual. The
/// plain root `z_a` seeds it unless the offset drowns in its rounding.
fn branch_offset<T: Real>(branch: ModeBranch, z0: T, z_a: T, lambda: T) -> Result<T> {
    let a2 = (T::TAU() * lambda).powi(2);
    let r0 = (T::one() + a2 / z0).sqrt();
    // increasing in d
    let residual = |d: T| {
        let z1 = z0 + d;
        let r1 = (T::one() + a2 / z1).sqrt();
        let dt = a2 * d / (z0 * z1);
        let dh = a2 * dt / ((r0 + r1) * (T::one() + r0) * (T::one() + r1));
        let (_, dp, dm) = branch_square_differences(z1, lambda);
        dh + if branch == ModeBranch::Plus { dp } else { dm }
    };
    let plain = z_a - z0;
    let guess = if plain.abs() > T::lit(1e-6) * z0 {
        plain
    } else {
        let s = z0.sqrt();
        let r = (z0 + a2).sqrt();
        let slope = a2 * a2 / (T::lit(2.0) * s * r * (s + r) * (s + r));
        -residual(T::zero()) / slope
    };
    if guess == T::zero() {
        return Ok(guess);
    }
    let mut w = T::lit(1e-9) * guess.abs();
    let (mut lo, mut hi) = (guess - w, guess + w);
    for _ in 0..200 {
        let (f_lo, f_hi) = (residual(lo), residual(hi));
        if f_lo <= T::zero() && f_hi >= T::zero() {
            return bisect(residual, lo, hi, T::lit(4.0) * T::epsilon() * guess.abs());
        }
        w = w + w;
        if f_lo > T::zero() {
            lo = guess - w;
        }
        if f_hi < T::zero() {
            hi = guess + w;
        }
    }
    Err(Error::non_convergence(
        "branch offset bracket",
        guess.as_f64(),
        w.as_f64(),
    ))
}

fn weighted_measure<T: Real>(omega: T, lambda: T) -> Result<T> {
    if omega < g_infinity(lambda) {
        let z0 = zero_branch_root(omega, lambda);
        let (u_min, g_min) = plus_branch_minimum(lambda);
        if z0 >= T::lit(OFFSET_SPLIT) && omega > g_min {
            let zp = mode_measure(ModeBranch::Plus, omega, lambda)? + plus_left_edge(omega, lambda)?.powi(2);
            if zp > u_min * u_min {
                let dp = branch_offset(ModeBranch::Plus, z0, zp, lambda)?;
                let zm = mode_measure(ModeBranch::Minus, omega, lambda)?;
                let dm = branch_offset(ModeBranch::Minus, z0, zm, lambda)?;
                let left = plus_left_edge(omega, lambda)?;
                return Ok(dp + dm - left * left);
            }
        }
    }
    let mut s = T::zero();
    for b in ModeBranch::ALL {
        s = s + T::lit(b.coefficient() as f64) * mode_measure(b, omega, lambda)?;
    }
    Ok(s)
}

pub fn im_m_evanescent<T: Real>(p: Polarization, omega: T, lambda: T) -> Result<T> {
    match p {
        Polarization::TE => {
            check_lambda(lambda)?;
            Ok(T::zero())
        }
        Polarization::TM => im_m_evanescent_tm(omega, lambda),
    }
}

/// `x / sinh² x`, finite at `x = 0` only as a limit, so callers avoid it.
fn thermal_weight<T: Real>(x: T) -> T {
    if x > T::lit(20.0) {
        T::lit(4.0) * x * (-T::lit(2.0) * x).exp()
    } else {
        let s = x.sinh();
        x / (s * s)
    }
}

/// Upper limit of the real-frequency integral, where `x/sinh²x < 1e-33`.
const SIGMA_X_MAX: f64 = 40.0;

/// Kinks of the real-frequency integrand: `Ω = 2πλ` (sign change of `ε`),
/// `Ω = g(∞)` (surface-plasmon resonance) and the edges of the `ω₊` branch.
fn sigma_breakpoints<T: Real>(lambda: T, w: T) -> Vec<T> {
    let two_w = T::lit(2.0) * w;
    let mut b = vec![T::lit(0.1), T::one(), T::lit(3.0), T::lit(10.0)];
    for omega in [
        T::TAU() * lambda,
        g_infinity(lambda),
        g_plus_at_zero(lambda),
        plus_branch_minimum(lambda).1,
    ] {
        let x = omega / two_w;
        if x < T::lit(SIGMA_X_MAX) {
            b.push(x);
        }
    }
    b
}

/// `σ_Lif = -(4/(πζ(3))) ∫₀^∞ (x/sinh²x) Im Σ_p M_p(2xλτ) dx`.
pub fn sigma_lifshitz_low_t<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let w = lambda * tau;
    let prefactor = -T::lit(4.0) / (T::PI() * zeta3::<T>());
    let icfg = cfg.scaled_abs(prefactor);
    let inner = icfg.nested();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let result = integrate_with_breakpoints(
        |x: T| {
            if x == T::zero() {
                return T::zero();
            }
            let omega = T::lit(2.0) * x * w;
            let s = (|| -> Result<T> {
                Ok(im_m_propagating(Polarization::TE, omega, lambda, &inner)?
                    + im_m_propagating(Polarization::TM, omega, lambda, &inner)?
                    + im_m_evanescent_tm(omega, lambda)?)
            })();
            match s {
                Ok(v) => thermal_weight(x) * v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        },
        T::zero(),
        T::lit(SIGMA_X_MAX),
        &sigma_breakpoints(lambda, w),
        &icfg,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e.within("real-frequency entropy"));
    }
    Ok(prefactor * result.map_err(|e| e.within("real-frequency entropy"))?.value)
}

fn low_t_reference<T: Real>(lambda: T, tau: T) -> T {
    let w = lambda * tau;
    T::lit(12.0) * w * w
}

fn thermal_slope<T: Real>(tau: T) -> T {
    T::lit(8.0) * T::PI() * T::PI() * tau / (T::lit(45.0) * zeta3::<T>())
}

/// Entropy of all propagating modes (photons and the propagating plasmon),
/// `σ_C [1 - (8π²τ/(45ζ(3))) (2 + πλ)/3]` for `λτ ≪ 1`, `τ ≪ 1`.
pub fn sigma_propagating_low_t<T: Real>(lambda: T, tau: T) -> T {
    low_t_reference(lambda, tau) * (T::one() - thermal_slope(tau) * (T::lit(2.0) + T::PI() * lambda) / T::lit(3.0))
}

/// Entropy of the propagating photonic modes alone (propagating plasmon
/// subtracted): `σ_C [2 - (8π²τ/(45ζ(3))) (2 + πλ)/3]`.
pub fn sigma_photonic_low_t<T: Real>(lambda: T, tau: T) -> T {
    low_t_reference(lambda, tau) * (T::lit(2.0) - thermal_slope(tau) * (T::lit(2.0) + T::PI() * lambda) / T::lit(3.0))
}

/// Intermediate-distance Lifshitz entropy
/// `σ_C [1 + 1/(πλ) - (8π²τ/(45ζ(3))) (πλ + 2)/3]`.
pub fn sigma_lifshitz_intermediate<T: Real>(lambda: T, tau: T) -> T {
    low_t_reference(lambda, tau)
        * (T::one() + T::one() / (T::PI() * lambda)
            - thermal_slope(tau) * (T::PI() * lambda + T::lit(2.0)) / T::lit(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fresnel_limits() {
        let lambda = 0.3f64;
        let a = 2.0 * PI * lambda;
        let r = fresnel(Polarization::TM, a, a, lambda).unwrap();
        let expect = (2.0 - 2f64.sqrt()) / (2.0 + 2f64.sqrt());
        assert!((r - expect).abs() < 1e-14);
        assert_eq!(fresnel(Polarization::TM, 0.0, 0.7, lambda).unwrap(), 1.0);
        // transparency: r_TM → r_TE
        let te = fresnel(Polarization::TE, 1.0, 1.5, lambda).unwrap();
        let tm = fresnel(Polarization::TM, 1e8, 1.5, lambda).unwrap();
        assert!((te - tm).abs() < 1e-12);
        // perfect mirror
        assert!((fresnel(Polarization::TE, 1.0, 1.5, 1e9f64).unwrap() + 1.0).abs() < 1e-9);
        assert!((fresnel(Polarization::TM, 1.0, 1.5, 1e9f64).unwrap() - 1.0).abs() < 1e-9);
        for &(x, k) in &[(0.5, 0.5), (1.0, 3.0), (0.0, 2.0)] {
            for p in Polarization::ALL {
                assert!(fresnel(p, x, k, lambda).unwrap().abs() <= 1.0);
            }
        }
        assert!(fresnel(Polarization::TE, -1.0, 1.0, lambda).is_err());
    }

    #[test]
    fn gamma_values() {
        let cfg = QuadratureConfig::default();
        assert!(gamma_p(Polarization::TE, 50.0f64, 1.0, &cfg).unwrap().abs() < 1e-40);
        let small: f64 = gamma_p(Polarization::TE, 0.0, 1e-6, &cfg).unwrap();
        assert!(small < 0.0 && small.abs() < (2.0 * PI * 1e-6f64).powi(2));
        // perfect mirror TM at X = 0: r = 1
        let tm = gamma_p(Polarization::TM, 0.0, 1.0, &cfg).unwrap();
        assert!((tm + zeta3::<f64>() / 4.0).abs() < 1e-12);
        for p in Polarization::ALL {
            assert!(gamma_p(p, 0.5, 1.0, &cfg).unwrap() < 0.0);
        }
    }

    #[test]
    fn propagating_phase_is_principal() {
        for &(p, om, y) in &[
            (Polarization::TE, 3.0f64, 1.0),
            (Polarization::TM, 3.0, 2.5),
            (Polarization::TM, 9.0, 8.0),
        ] {
            let ph = propagating_phase(p, om, y, 0.2);
            assert!(ph > -PI && ph <= PI);
        }
    }

    #[test]
    fn identity_of_closed_forms() {
        for &(l, t) in &[(10.0f64, 1e-3), (30.0, 2e-3)] {
            let lhs = sigma_photonic_low_t(l, t)
                + crate::plasmon_entropy::sigma_asymptote(crate::plasmon_entropy::EntropyRegime::Intermediate, l, t);
            let rhs = sigma_lifshitz_intermediate(l, t);
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
        // leading photonic term is twice the perfect-mirror value
        let r = sigma_photonic_low_t(10.0f64, 1e-9) / (12.0 * (10.0f64 * 1e-9).powi(2));
        assert!((r - 2.0).abs() < 1e-6);
    }

    #[test]
    fn te_evanescent_vanishes() {
        assert_eq!(im_m_evanescent(Polarization::TE, 0.3f64, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn branch_offsets_match_plain_roots() {
        for lambda in [0.02f64, 0.1, 1.0] {
            let g_inf = g_infinity(lambda);
            let omega = bisect(
                |o: f64| zero_branch_root(o, lambda) - 80.0,
                0.1 * g_inf,
                g_inf * (1.0 - 1e-12),
                1e-15,
            )
            .unwrap();
            let plain: f64 = ModeBranch::ALL
                .iter()
                .map(|&b| b.coefficient() as f64 * mode_measure(b, omega, lambda).unwrap())
                .sum();
            let split = weighted_measure(omega, lambda).unwrap();
            assert!((plain - split).abs() < 1e-11, "{lambda}: {plain} vs {split}");
        }
    }

    #[test]
    fn no_noise_floor_near_resonance() {
        let lambda = 5.0f64;
        let g_inf = g_infinity(lambda);
        for d in [1e-2, 1e-4, 1e-8] {
            let v = im_m_evanescent_tm(g_inf * (1.0 - d), lambda).unwrap();
            assert!(v.abs() < 1e-50, "{d}: {v}");
        }
    }
}
