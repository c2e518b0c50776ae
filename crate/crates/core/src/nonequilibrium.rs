//! Free energies when plates, photons and plasmons sit at different temperatures.

use serde::{Deserialize, Serialize};

use crate::dispersion::{g_plus_at_zero, g_squared_unchecked, z_plus, ModeBranch};
use crate::error::Result;
use crate::lifshitz::phi_lifshitz;
use crate::plasmon_energy::{eta, h, theta};
use crate::quadrature::{integrate_finite, QuadratureConfig};
use crate::real::Real;
use crate::scales::{aleph, check_lambda, check_tau};
use crate::specfun::thermal_polylog_combination;

/// Temperature configuration. Every kind is evaluated on top of the full
/// Lifshitz free energy, so all four agree when their temperatures coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NoneqScenario<T> {
    /// Both plates and the field at `τ`.
    Equilibrium(T),
    /// Plates at `τ₁` and `τ₂`, free energies averaged.
    TwoPlateAverage(T, T),
    /// Photons and plates at `τ₁`; the plasmons of one plate at `τ₂`.
    PlasmonsHot(T, T),
    /// Everything at `τ` except the propagating part of the `ω₊` branch, at `τ_pr`.
    PropagatingPlasmonHot(T, T),
}

impl<T: Real> NoneqScenario<T> {
    pub fn temperatures(&self) -> Vec<T> {
        match *self {
            NoneqScenario::Equilibrium(t) => vec![t],
            NoneqScenario::TwoPlateAverage(a, b)
            | NoneqScenario::PlasmonsHot(a, b)
            | NoneqScenario::PropagatingPlasmonHot(a, b) => vec![a, b],
        }
    }

    /// Same scenario with the base temperature replaced.
    pub fn with_base_temperature(self, tau: T) -> Self {
        match self {
            NoneqScenario::Equilibrium(_) => NoneqScenario::Equilibrium(tau),
            NoneqScenario::TwoPlateAverage(_, b) => NoneqScenario::TwoPlateAverage(tau, b),
            NoneqScenario::PlasmonsHot(_, b) => NoneqScenario::PlasmonsHot(tau, b),
            NoneqScenario::PropagatingPlasmonHot(_, b) => NoneqScenario::PropagatingPlasmonHot(tau, b),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for t in self.temperatures() {
            check_tau(t)?;
        }
        Ok(())
    }

    pub fn label(&self) -> &'static str {
        match self {
            NoneqScenario::Equilibrium(_) => "equilibrium",
            NoneqScenario::TwoPlateAverage(..) => "two-plate-average",
            NoneqScenario::PlasmonsHot(..) => "plasmons-hot",
            NoneqScenario::PropagatingPlasmonHot(..) => "propagating-plasmon-hot",
        }
    }
}

/// Plasmonic free energy for plates at `τ₁` and `τ₂`: `η + ½[ϑ(τ₁) + ϑ(τ₂)]`.
pub fn phi_noneq_plasmonic<T: Real>(lambda: T, tau1: T, tau2: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau1)?;
    check_tau(tau2)?;
    let t1 = theta(lambda, tau1, cfg)?;
    let t2 = if tau2 == tau1 { t1 } else { theta(lambda, tau2, cfg)? };
    Ok(eta(lambda, cfg)? + (t1 + t2) / T::lit(2.0))
}

/// `φ_Lif(τ₁) + ½[ϑ(τ₂) - ϑ(τ₁)]`: the plasmons of one plate are at `τ₂`.
pub fn phi_noneq_full<T: Real>(lambda: T, tau1: T, tau2: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau1)?;
    check_tau(tau2)?;
    let base = phi_lifshitz(lambda, tau1, cfg)?;
    if tau1 == tau2 {
        return Ok(base);
    }
    Ok(base + (theta(lambda, tau2, cfg)? - theta(lambda, tau1, cfg)?) / T::lit(2.0))
}

/// Thermal free energy of the propagating section `-z₊ ≤ z ≤ 0` of the `ω₊` branch.
pub fn theta_propagating_plus<T: Real>(lambda: T, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let w = lambda * tau;
    let zp = z_plus(lambda)?;
    let al = aleph::<T>();
    let prefactor = -al * w;
    let icfg = cfg.scaled_abs(prefactor);
    let two = T::lit(2.0);
    // z = -u²
    let integral = integrate_finite(
        |u: T| {
            let g = g_squared_unchecked(ModeBranch::Plus, -u * u, lambda).sqrt();
            two * u * h(g, w)
        },
        T::zero(),
        zp.sqrt(),
        &icfg,
    )
    .map_err(|e| e.within("propagating plasmon branch"))?;
    let bracket =
        thermal_polylog_combination(zp.sqrt() / w)? - thermal_polylog_combination(g_plus_at_zero(lambda) / w)?;
    Ok(prefactor * integral.value - two * al * w * w * w * bracket)
}

/// `φ_Lif(τ) + ϑ^pr₊(τ_pr) - ϑ^pr₊(τ)`.
pub fn phi_noneq_propagating<T: Real>(lambda: T, tau: T, tau_pr: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_tau(tau)?;
    check_tau(tau_pr)?;
    let base = phi_lifshitz(lambda, tau, cfg)?;
    if tau == tau_pr {
        return Ok(base);
    }
    Ok(base + theta_propagating_plus(lambda, tau_pr, cfg)? - theta_propagating_plus(lambda, tau, cfg)?)
}

/// Free energy factor of a scenario.
pub fn phi_scenario<T: Real>(scenario: &NoneqScenario<T>, lambda: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    scenario.validate()?;
    match *scenario {
        NoneqScenario::Equilibrium(t) => phi_lifshitz(lambda, t, cfg),
        NoneqScenario::TwoPlateAverage(a, b) => {
            let fa = phi_lifshitz(lambda, a, cfg)?;
            let fb = if a == b { fa } else { phi_lifshitz(lambda, b, cfg)? };
            Ok((fa + fb) / T::lit(2.0))
        }
        NoneqScenario::PlasmonsHot(a, b) => phi_noneq_full(lambda, a, b, cfg),
        NoneqScenario::PropagatingPlasmonHot(t, tp) => phi_noneq_propagating(lambda, t, tp, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plasmon_energy::phi;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn plasmonic_average_limits() {
        let c = cfg();
        let equal = phi_noneq_plasmonic(1.0, 0.05, 0.05, &c).unwrap();
        assert!((equal - phi(1.0, 0.05, &c).unwrap().phi).abs() < 1e-14);
        let half = phi_noneq_plasmonic(1.0, 0.0, 0.05, &c).unwrap();
        let expect = eta(1.0, &c).unwrap() + theta(1.0, 0.05, &c).unwrap() / 2.0;
        assert!((half - expect).abs() < 1e-14);
        let a = phi_noneq_plasmonic(0.3, 0.01, 0.2, &c).unwrap();
        let b = phi_noneq_plasmonic(0.3, 0.2, 0.01, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_scenarios_coincide() {
        let c = cfg();
        let t = 0.02;
        let l = 3.0;
        let reference = phi_scenario(&NoneqScenario::Equilibrium(t), l, &c).unwrap();
        for s in [
            NoneqScenario::TwoPlateAverage(t, t),
            NoneqScenario::PlasmonsHot(t, t),
            NoneqScenario::PropagatingPlasmonHot(t, t),
        ] {
            let v = phi_scenario(&s, l, &c).unwrap();
            assert!((v - reference).abs() <= 1e-10 * reference.abs(), "{s:?}");
        }
    }

    #[test]
    fn propagating_branch_values() {
        let c = cfg();
        assert_eq!(theta_propagating_plus(1.0, 0.0, &c).unwrap(), 0.0);
        let g0: f64 = g_plus_at_zero(1.0);
        assert!((g0 - 2.0 * std::f64::consts::PI / (1.0 + std::f64::consts::PI).sqrt()).abs() < 1e-12);
        let loose: f64 =
            theta_propagating_plus(1.0, 2.0, &QuadratureConfig::with_tolerances(1e-6, 1e-300).unwrap()).unwrap();
        let tight =
            theta_propagating_plus(1.0, 2.0, &QuadratureConfig::with_tolerances(1e-12, 1e-300).unwrap()).unwrap();
        assert!((loose - tight).abs() < 1e-5 * tight.abs());
        // in units of E_C < 0: hotter branch, larger factor
        assert!(theta_propagating_plus(20.0, 0.04, &c).unwrap() > theta_propagating_plus(20.0, 0.018, &c).unwrap());
    }

    #[test]
    fn low_temperature_polylog_bracket() {
        // for λτ ≪ 1 the upper argument is large, ℒ → ζ(3)
        let l = 1.0f64;
        let w = 1e-3;
        let zp = z_plus(l).unwrap();
        let top = thermal_polylog_combination(zp.sqrt() / w).unwrap();
        assert!((top / crate::specfun::zeta3::<f64>() - 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_negative_temperature() {
        assert!(phi_scenario(&NoneqScenario::PlasmonsHot(0.1, -0.1), 1.0, &cfg()).is_err());
    }
}
