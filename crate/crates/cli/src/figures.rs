use std::f64::consts::PI;

use plasmon_casimir::analysis::{inversion_distance, pressure, FreeEnergyModel};
use plasmon_casimir::dispersion::{g, z_plus, ModeBranch};
use plasmon_casimir::lifshitz::{phi_lifshitz, sigma_lifshitz_low_t};
use plasmon_casimir::plasmon_energy::{beta, phi, theta_detailed};
use plasmon_casimir::plasmon_entropy::sigma_integral;
use plasmon_casimir::{Error, NoneqScenario, SweepAxis, SweepScale, SweepSpec};

use crate::output::{Cell, Table};
use crate::{fill_rows, Context};

type Eval<'a> = Box<dyn Fn(f64) -> Result<(f64, Option<f64>), Error> + Sync + 'a>;

struct Series<'a> {
    label: String,
    xs: Vec<f64>,
    eval: Eval<'a>,
}

fn grid(min: f64, max: f64, points: usize, log: bool) -> Vec<f64> {
    SweepSpec {
        axis: SweepAxis::Lambda,
        min,
        max,
        points,
        scale: if log { SweepScale::Log } else { SweepScale::Linear },
        fixed: 0.0,
    }
    .values()
}

/// The preset range, unless the command line overrides it.
fn axis(ctx: &Context, min: f64, max: f64, points: usize, log: bool) -> Vec<f64> {
    let o = &ctx.opts;
    grid(
        o.lambda_min.unwrap_or(min),
        o.lambda_max.unwrap_or(max),
        o.points.unwrap_or(points),
        log || o.log,
    )
}

fn render(ctx: &Context, number: u8, x_name: &str, series: Vec<Series<'_>>) -> (Table, Option<Error>) {
    let mut t = ctx.table(&["series", "x", "y", "error", "status"]);
    t.meta("figure", number);
    t.meta("x", x_name);
    let jobs: Vec<(usize, f64)> = series
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.xs.iter().map(move |&x| (i, x)))
        .collect();
    let err = fill_rows(
        &mut t,
        &jobs,
        |&(i, x)| vec![Cell::Text(series[i].label.clone()), x.into()],
        |&(i, x)| {
            let (y, e) = (series[i].eval)(x)?;
            Ok(vec![y.into(), e.into()])
        },
    );
    (t, err)
}

pub(crate) fn figure(ctx: &Context, number: u8) -> Result<(Table, Option<Error>), Error> {
    let cfg = ctx.cfg;
    let o = &ctx.opts;
    let mut series: Vec<Series<'_>> = Vec::new();
    let x_name;
    match number {
        1 => {
            // dispersion ω_a(k): x = kL, y = ωL/c
            let lambda = o.lambda.unwrap_or(1.0);
            let zp = z_plus(lambda)?;
            x_name = format!("scaled wavevector kL at lambda = {lambda}; y = omega L / c");
            for b in ModeBranch::ALL {
                let lo = if b == ModeBranch::Plus { -zp } else { 0.0 };
                let zs = grid(lo, 100.0, o.points.unwrap_or(201), false);
                let pts: Vec<(f64, f64)> = zs
                    .iter()
                    .map(|&z| {
                        let gz = g(b, z, lambda)?;
                        Ok(((z + gz * gz).sqrt(), gz))
                    })
                    .collect::<Result<_, Error>>()?;
                let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
                series.push(Series {
                    label: format!("omega_{}", b.label()),
                    xs,
                    eval: Box::new(move |k| {
                        let i = pts.iter().position(|p| p.0 == k).expect("grid point");
                        Ok((pts[i].1, None))
                    }),
                });
            }
            series.push(Series {
                label: "light_line".into(),
                xs: grid(0.0, 12.0, 25, false),
                eval: Box::new(|k| Ok((k, None))),
            });
        }
        2 => {
            x_name = "lambda".into();
            let xs = axis(ctx, 1e-3, 1e3, 61, true);
            series.push(Series {
                label: "z_plus".into(),
                xs: xs.clone(),
                eval: Box::new(|l| Ok((z_plus(l)?, None))),
            });
            series.push(Series {
                label: "z_plus_short".into(),
                xs: xs.clone(),
                eval: Box::new(|l| Ok(((2.0 * PI * l).powi(2), None))),
            });
            series.push(Series {
                label: "z_plus_long".into(),
                xs,
                eval: Box::new(|_| Ok((PI * PI, None))),
            });
        }
        3 | 4 | 8 => {
            let (min, max, taus): (f64, f64, Vec<f64>) = match number {
                3 => (1e-2, 1e2, vec![0.0, 0.018, 0.1]),
                4 => (1e-6, 1e-1, vec![1e-3, 1e-2, 0.1]),
                _ => (1.0, 1e3, vec![0.0, 0.018, 0.1, 1.0]),
            };
            let taus = o.tau.map_or(taus, |t| vec![t]);
            x_name = if number == 8 {
                "lambda (beta: tau)".into()
            } else {
                "lambda".into()
            };
            let xs = axis(ctx, min, max, 41, true);
            for tau in taus {
                if number == 4 {
                    series.push(Series {
                        label: format!("theta tau={tau}"),
                        xs: xs.clone(),
                        eval: Box::new(move |l| theta_detailed(l, tau, &cfg).map(|(e, _)| (e.value, Some(e.error)))),
                    });
                } else {
                    series.push(Series {
                        label: format!("phi tau={tau}"),
                        xs: xs.clone(),
                        eval: Box::new(move |l| phi(l, tau, &cfg).map(|r| (r.phi, Some(r.error)))),
                    });
                }
            }
            if number == 8 {
                series.push(Series {
                    label: "beta".into(),
                    xs: grid(1e-2, 1e2, 41, true),
                    eval: Box::new(move |t| Ok((beta(t, &cfg)?, None))),
                });
            }
        }
        5 => {
            x_name = "tau; y = lambda_inv".into();
            let taus = grid(0.0, 0.1, o.points.unwrap_or(11), false);
            let (lo, hi) = (o.lambda_min.unwrap_or(0.01), o.lambda_max.unwrap_or(10.0));
            series.push(Series {
                label: "plasmonic lambda_inv".into(),
                xs: taus,
                eval: Box::new(move |tau| {
                    let inv = inversion_distance(&FreeEnergyModel::Plasmonic { tau }, lo, hi, &cfg)?;
                    Ok((inv.lambda().unwrap_or(f64::NAN), None))
                }),
            });
        }
        6 => {
            x_name = "lambda".into();
            let xs = axis(ctx, 1e-3, 10.0, 41, true);
            let taus = o.tau.map_or(vec![0.0, 0.018], |t| vec![t]);
            for tau in taus {
                series.push(Series {
                    label: format!("phi tau={tau}"),
                    xs: xs.clone(),
                    eval: Box::new(move |l| phi(l, tau, &cfg).map(|r| (r.phi, Some(r.error)))),
                });
                series.push(Series {
                    label: format!("phi_lif tau={tau}"),
                    xs: xs.clone(),
                    eval: Box::new(move |l| Ok((phi_lifshitz(l, tau, &cfg)?, None))),
                });
            }
        }
        7 => {
            x_name = "tau".into();
            let lambdas = o.lambda.map_or(vec![0.01, 0.1, 1.0, 10.0, 100.0], |l| vec![l]);
            let xs = grid(1e-3, 10.0, o.points.unwrap_or(41), true);
            for &lambda in &lambdas {
                series.push(Series {
                    label: format!("sigma lambda={lambda}"),
                    xs: xs.clone(),
                    eval: Box::new(move |t| sigma_integral(lambda, t, &cfg).map(|r| (r.sigma, Some(r.error)))),
                });
            }
            let low: Vec<f64> = grid(1e-3, 0.1, o.points.unwrap_or(21), true);
            for lambda in lambdas.into_iter().filter(|&l| (1.0..=10.0).contains(&l)) {
                series.push(Series {
                    label: format!("sigma_lif lambda={lambda}"),
                    xs: low.clone(),
                    eval: Box::new(move |t| Ok((sigma_lifshitz_low_t(lambda, t, &cfg)?, None))),
                });
            }
        }
        9 => {
            x_name = "lambda; y = P / (1e-6 |F_C(lambda_p)|)".into();
            let tau = o.tau.or(o.tau1).unwrap_or(0.018);
            let hot = o.tau2.unwrap_or(0.04);
            let pr = o.tau_pr.unwrap_or(0.04);
            let xs = axis(ctx, 1.0, 40.0, 40, false);
            let models = [
                ("a equilibrium", FreeEnergyModel::Lifshitz { tau }),
                (
                    "b plasmons hot",
                    FreeEnergyModel::Scenario(NoneqScenario::PlasmonsHot(tau, hot)),
                ),
                (
                    "c propagating plasmon hot",
                    FreeEnergyModel::Scenario(NoneqScenario::PropagatingPlasmonHot(tau, pr)),
                ),
            ];
            for (label, m) in models {
                series.push(Series {
                    label: label.into(),
                    xs: xs.clone(),
                    eval: Box::new(move |l| Ok((pressure(&m, l, &cfg)?.normalized_fig9, None))),
                });
            }
        }
        _ => return Err(Error::Domain(format!("no figure {number}"))),
    }
    Ok(render(ctx, number, &x_name, series))
}
