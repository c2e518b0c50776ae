//! Derived observables: Casimir pressure, inversion distance and parameter sweeps.

use std::cell::RefCell;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifshitz::{phi_lifshitz, sigma_lifshitz_low_t};
use crate::nonequilibrium::{phi_scenario, NoneqScenario};
use crate::plasmon_energy::{eta_estimate, phi, theta_detailed};
use crate::plasmon_entropy::sigma_integral;
use crate::quadrature::QuadratureConfig;
use crate::real::Real;
use crate::roots::bisect;
use crate::scales::{check_lambda, check_tau, perfect_mirror_refs, MaterialParams};

/// Which free energy a pressure or inversion distance is derived from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FreeEnergyModel<T> {
    /// Surface plasmons only, `φ = η + ϑ`.
    Plasmonic {
        tau: T,
    },
    /// Full Lifshitz free energy in equilibrium.
    Lifshitz {
        tau: T,
    },
    Scenario(NoneqScenario<T>),
}

impl<T: Real> FreeEnergyModel<T> {
    pub fn phi(&self, lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
        match self {
            FreeEnergyModel::Plasmonic { tau } => phi(lambda, *tau, cfg).map(|r| r.phi),
            FreeEnergyModel::Lifshitz { tau } => phi_lifshitz(lambda, *tau, cfg),
            FreeEnergyModel::Scenario(s) => phi_scenario(s, lambda, cfg),
        }
    }

    pub fn with_base_temperature(self, tau: T) -> Self {
        match self {
            FreeEnergyModel::Plasmonic { .. } => FreeEnergyModel::Plasmonic { tau },
            FreeEnergyModel::Lifshitz { .. } => FreeEnergyModel::Lifshitz { tau },
            FreeEnergyModel::Scenario(s) => FreeEnergyModel::Scenario(s.with_base_temperature(tau)),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FreeEnergyModel::Plasmonic { .. } => "plasmonic",
            FreeEnergyModel::Lifshitz { .. } => "lifshitz",
            FreeEnergyModel::Scenario(s) => s.label(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FreeEnergyModel::Plasmonic { tau } | FreeEnergyModel::Lifshitz { tau } => check_tau(*tau),
            FreeEnergyModel::Scenario(s) => s.validate(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureResult<T> {
    /// `P/|F_C(L)|`; negative is attractive.
    pub scaled: T,
    /// Pa, when a material fixes the length scale.
    pub absolute: Option<T>,
    /// `P / (10⁻⁶ |F_C(λ_p)|) = 10⁶ λ⁻⁴ P/|F_C(L)|`.
    pub normalized_fig9: T,
    /// `∂φ/∂λ` used for `scaled`.
    pub derivative: T,
}

impl<T: Real> PressureResult<T> {
    pub fn with_absolute(mut self, lambda: T, material: &MaterialParams<T>) -> Result<Self> {
        let refs = perfect_mirror_refs(lambda * material.plasma_wavelength)?;
        self.absolute = Some(self.scaled * refs.casimir_force.abs());
        Ok(self)
    }
}

/// Richardson-extrapolated central difference; errors when the two levels disagree
/// by more than `tolerance` relative.
fn richardson<T: Real>(f: impl Fn(T) -> Result<T>, x: T, step: T, tolerance: T, what: &str) -> Result<T> {
    let two = T::lit(2.0);
    let central = |s: T| -> Result<T> { Ok((f(x + s)? - f(x - s)?) / (two * s)) };
    let coarse = central(step)?;
    let fine = central(step / two)?;
    let value = (T::lit(4.0) * fine - coarse) / T::lit(3.0);
    let spread = (fine - coarse).abs();
    let scale = fine.abs().max(f(x)?.abs() / x);
    if spread > tolerance * scale {
        return Err(Error::non_convergence(
            what,
            fine.as_f64(),
            coarse.as_f64() - fine.as_f64(),
        ));
    }
    Ok(value)
}

const DERIVATIVE_STEP: f64 = 1e-4;
const DERIVATIVE_TOLERANCE: f64 = 1e-3;

/// Casimir pressure `P/|F_C| = -[φ - (λ/3) ∂φ/∂λ]`, at fixed temperature.
pub fn pressure<T: Real>(
    model: &FreeEnergyModel<T>,
    lambda: T,
    cfg: &QuadratureConfig<T>,
) -> Result<PressureResult<T>> {
    check_lambda(lambda)?;
    model.validate()?;
    let value = model.phi(lambda, cfg)?;
    let derivative = richardson(
        |l| model.phi(l, cfg),
        lambda,
        lambda * T::lit(DERIVATIVE_STEP),
        T::lit(DERIVATIVE_TOLERANCE),
        "pressure derivative",
    )?;
    let scaled = -(value - lambda * derivative / T::lit(3.0));
    Ok(PressureResult {
        scaled,
        absolute: None,
        normalized_fig9: scaled * T::lit(1e6) / lambda.powi(4),
        derivative,
    })
}

/// Pressure in Pa from a central difference of `F(L) = E_C(L) φ(L/λ_p)` in `L`.
pub fn pressure_direct<T: Real>(
    model: &FreeEnergyModel<T>,
    lambda: T,
    material: &MaterialParams<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    check_lambda(lambda)?;
    model.validate()?;
    let lp = material.plasma_wavelength;
    let free_energy =
        |length: T| -> Result<T> { Ok(perfect_mirror_refs(length)?.casimir_energy * model.phi(length / lp, cfg)?) };
    let length = lambda * lp;
    let slope = richardson(
        free_energy,
        length,
        length * T::lit(DERIVATIVE_STEP),
        T::lit(DERIVATIVE_TOLERANCE),
        "direct pressure difference",
    )?;
    Ok(-slope)
}

/// Outcome of an inversion-distance search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Inversion<T> {
    /// The pressure changes sign at `λ_inv`.
    At(T),
    NoInversion,
}

impl<T: Real> Inversion<T> {
    pub fn lambda(&self) -> Option<T> {
        match self {
            Inversion::At(l) => Some(*l),
            Inversion::NoInversion => None,
        }
    }
}

/// Number of log-spaced scan points used to bracket a sign change.
pub const INVERSION_SCAN_POINTS: usize = 49;

/// Smallest `λ` in `[lambda_min, lambda_max]` where the pressure changes sign.
pub fn inversion_distance<T: Real>(
    model: &FreeEnergyModel<T>,
    lambda_min: T,
    lambda_max: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Inversion<T>> {
    check_lambda(lambda_min)?;
    check_lambda(lambda_max)?;
    if !(lambda_min < lambda_max) {
        return Err(Error::domain("inversion search needs lambda_min < lambda_max"));
    }
    let ratio = (lambda_max / lambda_min).ln();
    let last = INVERSION_SCAN_POINTS - 1;
    let grid: Vec<T> = (0..INVERSION_SCAN_POINTS)
        .map(|i| {
            if i == last {
                lambda_max
            } else {
                lambda_min * (ratio * T::from_usize_lossy(i) / T::from_usize_lossy(last)).exp()
            }
        })
        .collect();
    let values: Vec<Result<T>> = grid
        .par_iter()
        .map(|&l| pressure(model, l, cfg).map(|p| p.scaled))
        .collect();
    let values: Vec<T> = values.into_iter().collect::<Result<_>>()?;
    let Some(i) = (0..last).find(|&i| (values[i] < T::zero()) != (values[i + 1] < T::zero())) else {
        return Ok(Inversion::NoInversion);
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    // bisect in ln λ
    let root = bisect(
        |s: T| match pressure(model, s.exp(), cfg) {
            Ok(p) => p.scaled,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::zero()
            }
        },
        grid[i].ln(),
        grid[i + 1].ln(),
        T::lit(1e-12),
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e.within("inversion distance"));
    }
    Ok(Inversion::At(root.exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepAxis {
    Lambda,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec<T> {
    pub axis: SweepAxis,
    pub min: T,
    pub max: T,
    pub points: usize,
    pub scale: SweepScale,
    /// The coordinate held constant.
    pub fixed: T,
}

impl<T: Real> SweepSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.min < self.max) || !self.max.is_finite() {
            return Err(Error::domain(format!(
                "sweep needs min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(Error::domain("sweep needs at least two points"));
        }
        if self.scale == SweepScale::Log && !(self.min > T::zero()) {
            return Err(Error::domain("log sweep needs min > 0"));
        }
        match self.axis {
            SweepAxis::Lambda => {
                check_lambda(self.min)?;
                check_tau(self.fixed)
            }
            SweepAxis::Tau => {
                check_tau(self.min)?;
                check_lambda(self.fixed)
            }
        }
    }

    pub fn values(&self) -> Vec<T> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    return self.max;
                }
                let t = T::from_usize_lossy(i) / T::from_usize_lossy(last);
                match self.scale {
                    SweepScale::Linear => self.min + (self.max - self.min) * t,
                    SweepScale::Log => self.min * ((self.max / self.min).ln() * t).exp(),
                }
            })
            .collect()
    }

    /// `(λ, τ)` at an axis value.
    pub fn point(&self, x: T) -> (T, T) {
        match self.axis {
            SweepAxis::Lambda => (x, self.fixed),
            SweepAxis::Tau => (self.fixed, x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    Eta,
    Theta,
    Phi,
    Sigma,
    PhiLif,
    SigmaLif,
    Pressure,
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::Eta => "eta",
            Quantity::Theta => "theta",
            Quantity::Phi => "phi",
            Quantity::Sigma => "sigma",
            Quantity::PhiLif => "phi_lif",
            Quantity::SigmaLif => "sigma_lif",
            Quantity::Pressure => "pressure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow<T> {
    pub x: T,
    pub value: Option<T>,
    pub error: Option<T>,
    pub failure: Option<Error>,
}

/// Evaluates `quantity` along `spec`. Pressure uses `model` with its base
/// temperature set to the sweep's `τ` (plasmonic when `model` is `None`).
pub fn sweep<T: Real>(
    quantity: Quantity,
    spec: &SweepSpec<T>,
    model: Option<&FreeEnergyModel<T>>,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<SweepRow<T>>> {
    spec.validate()?;
    cfg.validate()?;
    let xs = spec.values();
    let rows = xs
        .par_iter()
        .map(|&x| {
            let (lambda, tau) = spec.point(x);
            let outcome: Result<(T, Option<T>)> = match quantity {
                Quantity::Eta => eta_estimate(lambda, cfg).map(|e| (e.value, Some(e.error))),
                Quantity::Theta => theta_detailed(lambda, tau, cfg).map(|(e, _)| (e.value, Some(e.error))),
                Quantity::Phi => phi(lambda, tau, cfg).map(|r| (r.phi, Some(r.error))),
                Quantity::Sigma => sigma_integral(lambda, tau, cfg).map(|r| (r.sigma, Some(r.error))),
                Quantity::PhiLif => phi_lifshitz(lambda, tau, cfg).map(|v| (v, None)),
                Quantity::SigmaLif => sigma_lifshitz_low_t(lambda, tau, cfg).map(|v| (v, None)),
                Quantity::Pressure => {
                    let m = model
                        .copied()
                        .unwrap_or(FreeEnergyModel::Plasmonic { tau })
                        .with_base_temperature(tau);
                    pressure(&m, lambda, cfg).map(|p| (p.scaled, None))
                }
            };
            match outcome {
                Ok((v, e)) => SweepRow {
                    x,
                    value: Some(v),
                    error: e,
                    failure: None,
                },
                Err(e) => SweepRow {
                    x,
                    value: None,
                    error: None,
                    failure: Some(e),
                },
            }
        })
        .collect();
    Ok(rows)
}
