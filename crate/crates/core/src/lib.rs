//! Thermodynamics of the Casimir interaction between two plasma-model metal plates,
//! split into its surface-plasmon part and the full Lifshitz result.
//!
//! Everything works in scaled variables: separation `λ = L/λ_p`, temperature
//! `τ = T/T_p`, and free energies and entropies as factors relative to the
//! perfect-mirror values `E_C(L)` and `S_C(L)`. See [`scales`] for the conversions.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`). The aliases at the
//! crate root fix `f64`.
//!
//! ```
//! use plasmon_casimir::{plasmon_energy, QuadratureConfig};
//!
//! let cfg = QuadratureConfig::default();
//! let eta: f64 = plasmon_energy::eta(1e-3, &cfg).unwrap();
//! assert!((eta / 1e-3 - 1.790).abs() < 0.01);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod analysis;
pub mod dispersion;
pub mod error;
pub mod lifshitz;
pub mod nonequilibrium;
pub mod plasmon_energy;
pub mod plasmon_entropy;
pub mod quadrature;
pub mod real;
pub mod roots;
pub mod scales;
pub mod specfun;

pub use analysis::{
    inversion_distance, pressure, pressure_direct, sweep, FreeEnergyModel, Inversion, PressureResult, Quantity,
    SweepAxis, SweepRow, SweepScale, SweepSpec,
};
pub use dispersion::{g, g_infinity, g_squared, z_plus, ModeBranch};
pub use error::{Error, Result};
pub use lifshitz::{phi_lifshitz, sigma_lifshitz_low_t, Polarization};
pub use nonequilibrium::{phi_scenario, NoneqScenario};
pub use plasmon_energy::{beta, eta, phi, theta, FreeEnergyResult};
pub use plasmon_entropy::{sigma_from_theta, sigma_integral, EntropyRegime, EntropyResult};
pub use quadrature::{Integral, QuadratureConfig};
pub use real::{CompensatedSum, Real};
pub use scales::{MaterialParams, Normalization, ScaledGeometry};

pub type Material = MaterialParams<f64>;
pub type Geometry = ScaledGeometry<f64>;
pub type Config = QuadratureConfig<f64>;
pub type FreeEnergy = FreeEnergyResult<f64>;
pub type Entropy = EntropyResult<f64>;
pub type Pressure = PressureResult<f64>;
pub type Model = FreeEnergyModel<f64>;
pub type Scenario = NoneqScenario<f64>;
pub type Sweep = SweepSpec<f64>;
pub type Row = SweepRow<f64>;
