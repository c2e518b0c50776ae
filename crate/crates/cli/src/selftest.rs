use plasmon_casimir::analysis::{pressure, pressure_direct, FreeEnergyModel};
use plasmon_casimir::dispersion::z_plus;
use plasmon_casimir::lifshitz::{gamma_p, Polarization};
use plasmon_casimir::plasmon_energy::eta;
use plasmon_casimir::plasmon_entropy::{sigma_from_theta, sigma_integral};
use plasmon_casimir::specfun::{thermal_polylog_combination, ZETA3};
use plasmon_casimir::{Config, Error};

use crate::output::{Cell, Table};
use crate::Context;

struct Check {
    name: &'static str,
    value: Result<f64, Error>,
    expected: f64,
    rel_tol: f64,
}

pub(crate) fn run(ctx: &Context) -> Result<(Table, Option<Error>), Error> {
    let cfg = Config::with_tolerances(1e-11, 1e-300)?;
    let gold = ctx.material;
    let checks = vec![
        Check {
            name: "eta short distance slope",
            value: eta(1e-3, &cfg).map(|v| v / 1e-3),
            expected: 1.790,
            rel_tol: 5e-3,
        },
        Check {
            name: "eta at lambda 100",
            value: eta(100.0, &cfg),
            expected: -74.57 * 10.0 + 60.0,
            rel_tol: 1e-2,
        },
        Check {
            name: "polylog combination at 50",
            value: thermal_polylog_combination(50.0),
            expected: ZETA3,
            rel_tol: 1e-14,
        },
        Check {
            name: "z_plus short distance",
            value: z_plus(1e-3).map(|z| z / (2.0 * std::f64::consts::PI * 1e-3).powi(2)),
            expected: 1.0,
            rel_tol: 1e-3,
        },
        Check {
            name: "perfect mirror Gamma",
            value: gamma_p(Polarization::TM, 0.0, 1.0, &cfg),
            expected: -ZETA3 / 4.0,
            rel_tol: 1e-12,
        },
        Check {
            name: "entropy integral vs derivative",
            value: sigma_integral(1.0, 0.1, &cfg).and_then(|a| Ok(a.sigma / sigma_from_theta(1.0, 0.1, &cfg)?)),
            expected: 1.0,
            rel_tol: 1e-6,
        },
        Check {
            name: "pressure identity",
            value: (|| {
                let m = FreeEnergyModel::Lifshitz { tau: 0.018 };
                let p = pressure(&m, 1.0, &cfg)?.with_absolute(1.0, &gold)?;
                Ok(p.absolute.unwrap_or(f64::NAN) / pressure_direct(&m, 1.0, &gold, &cfg)?)
            })(),
            expected: 1.0,
            rel_tol: 1e-5,
        },
    ];
    let mut t = ctx.table(&["check", "value", "expected", "relative_deviation", "status"]);
    let mut failure = None;
    for c in checks {
        match c.value {
            Ok(v) => {
                let dev = ((v - c.expected) / c.expected).abs();
                let pass = dev <= c.rel_tol;
                if !pass && failure.is_none() {
                    failure = Some(Error::NonConvergence {
                        context: format!("selftest {}", c.name),
                        estimate: v,
                        error: v - c.expected,
                    });
                }
                t.push(vec![
                    c.name.into(),
                    v.into(),
                    c.expected.into(),
                    dev.into(),
                    Cell::Text(if pass { "pass" } else { "FAIL" }.into()),
                ]);
            }
            Err(e) => {
                t.push(vec![
                    c.name.into(),
                    Cell::Missing,
                    c.expected.into(),
                    Cell::Missing,
                    e.to_string().into(),
                ]);
                failure.get_or_insert(e);
            }
        }
    }
    Ok((t, failure))
}
