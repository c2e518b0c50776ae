use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plasmon_casimir::analysis::{inversion_distance, pressure, FreeEnergyModel, Inversion};
use plasmon_casimir::lifshitz::{phi_lifshitz, sigma_lifshitz_low_t};
use plasmon_casimir::plasmon_energy::{eta_estimate, phi, theta_detailed};
use plasmon_casimir::plasmon_entropy::sigma_integral;
use plasmon_casimir::scales::perfect_mirror_refs;
use plasmon_casimir::{Config, Error, Material, NoneqScenario, SweepScale, SweepSpec};
use rayon::prelude::*;

mod figures;
mod output;
mod selftest;

use output::{emit, Cell, Format, Table};

#[derive(Parser, Debug)]
#[command(
    name = "plasmon-casimir",
    version,
    about = "Plasmonic and Lifshitz Casimir free energy, entropy and pressure"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Scaled distance L/λ_p.
    #[arg(long, global = true, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Scaled temperature T/T_p.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    tau2: Option<f64>,
    /// Temperature of the propagating plasmon branch.
    #[arg(long = "tau-pr", global = true, allow_negative_numbers = true)]
    tau_pr: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = MaterialChoice::Gold)]
    material: MaterialChoice,
    /// Plasma wavelength for `--material custom`.
    #[arg(long = "plasma-wavelength-nm", global = true, allow_negative_numbers = true)]
    plasma_wavelength_nm: Option<f64>,
    #[arg(long = "lambda-min", global = true, allow_negative_numbers = true)]
    lambda_min: Option<f64>,
    #[arg(long = "lambda-max", global = true, allow_negative_numbers = true)]
    lambda_max: Option<f64>,
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Logarithmic spacing for sweeps.
    #[arg(long, global = true)]
    log: bool,
    #[arg(long = "rel-tol", global = true, allow_negative_numbers = true)]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol", global = true, allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    /// Panel budget per integral (at least 10).
    #[arg(long = "max-subdivisions", global = true)]
    max_subdivisions: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Plasmonic free energy factor φ = η + ϑ.
    Phi,
    /// Zero-temperature plasmonic factor η.
    Eta,
    /// Thermal correction ϑ.
    Theta,
    /// Plasmonic entropy factor σ.
    Entropy {
        /// Also compute the full Lifshitz entropy.
        #[arg(long)]
        full: bool,
    },
    /// Full Lifshitz free energy factor.
    Lifshitz,
    /// Casimir pressure relative to |F_C|.
    Pressure {
        #[arg(long, value_enum, default_value_t = ModelChoice::Plasmonic)]
        model: ModelChoice,
    },
    /// Distance where the pressure changes sign.
    Inversion {
        #[arg(long, value_enum, default_value_t = ModelChoice::Plasmonic)]
        model: ModelChoice,
    },
    /// Non-equilibrium free energy and pressure.
    Noneq {
        #[arg(long, value_enum)]
        scenario: ScenarioChoice,
    },
    /// Data behind one of the figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=9))]
        number: u8,
    },
    /// Quick numerical self-check.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MaterialChoice {
    Gold,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Plasmonic,
    Lifshitz,
    /// One plate's plasmons at --tau2.
    ScenarioB,
    /// Propagating plasmon branch at --tau-pr.
    ScenarioC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioChoice {
    /// Equilibrium at --tau.
    A,
    /// Photons at --tau1, plasmons of one plate at --tau2.
    B,
    /// Everything at --tau, propagating plasmon branch at --tau-pr.
    C,
    /// Plates at --tau1 and --tau2, averaged.
    Avg,
}

pub(crate) struct Context {
    pub cfg: Config,
    pub material: Material,
    material_label: String,
    pub opts: OptsView,
    command_line: String,
}

/// Resolved option values shared with the figure presets.
#[derive(Debug, Clone)]
pub(crate) struct OptsView {
    pub lambda: Option<f64>,
    pub tau: Option<f64>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub tau_pr: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub points: Option<usize>,
    pub log: bool,
}

impl Context {
    fn new(opts: &Opts) -> Result<Self, Error> {
        let defaults = Config::default();
        let cfg = Config {
            rel_tol: opts.rel_tol.unwrap_or(defaults.rel_tol),
            abs_tol: opts.abs_tol.unwrap_or(defaults.abs_tol),
            max_subdivisions: opts.max_subdivisions.unwrap_or(defaults.max_subdivisions),
            ..defaults
        };
        cfg.validate()?;
        let (material, material_label) = match (opts.material, opts.plasma_wavelength_nm) {
            (MaterialChoice::Gold, None) => (Material::gold(), "gold".to_string()),
            (MaterialChoice::Gold, Some(_)) => {
                return Err(Error::Domain("--plasma-wavelength-nm needs --material custom".into()))
            }
            (MaterialChoice::Custom, Some(nm)) => (Material::from_plasma_wavelength(nm * 1e-9)?, "custom".to_string()),
            (MaterialChoice::Custom, None) => {
                return Err(Error::Domain("--material custom needs --plasma-wavelength-nm".into()))
            }
        };
        Ok(Self {
            cfg,
            material,
            material_label,
            opts: OptsView {
                lambda: opts.lambda,
                tau: opts.tau,
                tau1: opts.tau1,
                tau2: opts.tau2,
                tau_pr: opts.tau_pr,
                lambda_min: opts.lambda_min,
                lambda_max: opts.lambda_max,
                points: opts.points,
                log: opts.log,
            },
            command_line: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        })
    }

    pub fn table(&self, columns: &[&str]) -> Table {
        let mut t = Table::new(columns);
        t.meta("command", format!("plasmon-casimir {}", self.command_line));
        t.meta("version", env!("CARGO_PKG_VERSION"));
        t.meta("rel_tol", output::format_number(self.cfg.rel_tol));
        t.meta("abs_tol", output::format_number(self.cfg.abs_tol));
        t.meta("max_subdivisions", self.cfg.max_subdivisions);
        t.meta(
            "material",
            format!(
                "{} (plasma wavelength {} nm, plasma temperature {} K)",
                self.material_label,
                output::format_number(self.material.plasma_wavelength * 1e9),
                output::format_number(self.material.plasma_temperature)
            ),
        );
        t
    }

    pub fn tau(&self) -> f64 {
        self.opts.tau.unwrap_or(0.0)
    }

    /// Distances requested on the command line: a sweep when both bounds are given,
    /// otherwise the single `--lambda`.
    pub fn lambdas(&self) -> Result<Vec<f64>, Error> {
        match (self.opts.lambda_min, self.opts.lambda_max, self.opts.lambda) {
            (Some(min), Some(max), _) => {
                let spec = SweepSpec {
                    axis: plasmon_casimir::SweepAxis::Lambda,
                    min,
                    max,
                    points: self.opts.points.unwrap_or(21),
                    scale: if self.opts.log {
                        SweepScale::Log
                    } else {
                        SweepScale::Linear
                    },
                    fixed: 0.0,
                };
                spec.validate()?;
                Ok(spec.values())
            }
            (None, None, Some(l)) => Ok(vec![l]),
            (None, None, None) => Err(Error::Domain("give --lambda or --lambda-min and --lambda-max".into())),
            _ => Err(Error::Domain("--lambda-min and --lambda-max go together".into())),
        }
    }

    fn model(&self, choice: ModelChoice) -> FreeEnergyModel<f64> {
        let tau = self.tau();
        match choice {
            ModelChoice::Plasmonic => FreeEnergyModel::Plasmonic { tau },
            ModelChoice::Lifshitz => FreeEnergyModel::Lifshitz { tau },
            ModelChoice::ScenarioB => FreeEnergyModel::Scenario(self.scenario(ScenarioChoice::B)),
            ModelChoice::ScenarioC => FreeEnergyModel::Scenario(self.scenario(ScenarioChoice::C)),
        }
    }

    fn scenario(&self, choice: ScenarioChoice) -> NoneqScenario<f64> {
        let o = &self.opts;
        let base = o.tau1.or(o.tau).unwrap_or(0.0);
        match choice {
            ScenarioChoice::A => NoneqScenario::Equilibrium(o.tau.or(o.tau1).unwrap_or(0.0)),
            ScenarioChoice::B => NoneqScenario::PlasmonsHot(base, o.tau2.unwrap_or(base)),
            ScenarioChoice::C => {
                let t = o.tau.or(o.tau1).unwrap_or(0.0);
                NoneqScenario::PropagatingPlasmonHot(t, o.tau_pr.unwrap_or(t))
            }
            ScenarioChoice::Avg => NoneqScenario::TwoPlateAverage(base, o.tau2.unwrap_or(base)),
        }
    }
}

/// Evaluates one row per input in parallel, keeping input order. Failed rows keep
/// their leading cells, leave the rest empty and carry the error in `status`.
pub(crate) fn fill_rows<X: Sync>(
    table: &mut Table,
    inputs: &[X],
    lead: impl Fn(&X) -> Vec<Cell> + Sync,
    body: impl Fn(&X) -> Result<Vec<Cell>, Error> + Sync,
) -> Option<Error> {
    let width = table.columns.len();
    let computed: Vec<(Vec<Cell>, Option<Error>)> = inputs
        .par_iter()
        .map(|x| {
            let mut row = lead(x);
            match body(x) {
                Ok(cells) => {
                    row.extend(cells);
                    row.push(Cell::Text("ok".into()));
                    (row, None)
                }
                Err(e) => {
                    row.resize(width - 1, Cell::Missing);
                    row.push(Cell::Text(e.to_string()));
                    (row, Some(e))
                }
            }
        })
        .collect();
    let mut first = None;
    for (row, err) in computed {
        table.push(row);
        if first.is_none() {
            first = err;
        }
    }
    first
}

fn absolute_energy(ctx: &Context, lambda: f64, factor: f64) -> Result<f64, Error> {
    Ok(perfect_mirror_refs(lambda * ctx.material.plasma_wavelength)?.casimir_energy * factor)
}

fn run(cli: &Cli) -> Result<(Table, Option<Error>), Error> {
    let ctx = Context::new(&cli.opts)?;
    let cfg = ctx.cfg;
    let tau = ctx.tau();
    match &cli.command {
        Command::Eta => {
            let mut t = ctx.table(&["lambda", "eta", "error", "status"]);
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into()],
                |&l| {
                    let e = eta_estimate(l, &cfg)?;
                    Ok(vec![e.value.into(), e.error.into()])
                },
            );
            Ok((t, err))
        }
        Command::Theta => {
            let mut t = ctx.table(&["lambda", "tau", "theta", "error", "status"]);
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into(), tau.into()],
                |&l| {
                    let (e, _) = theta_detailed(l, tau, &cfg)?;
                    Ok(vec![e.value.into(), e.error.into()])
                },
            );
            Ok((t, err))
        }
        Command::Phi => {
            let mut t = ctx.table(&[
                "lambda",
                "tau",
                "eta",
                "theta",
                "phi",
                "error",
                "free_energy_j_per_m2",
                "status",
            ]);
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into(), tau.into()],
                |&l| {
                    let r = phi(l, tau, &cfg)?.with_absolute(l, &ctx.material)?;
                    Ok(vec![
                        r.eta.into(),
                        r.theta.into(),
                        r.phi.into(),
                        r.error.into(),
                        r.absolute.into(),
                    ])
                },
            );
            Ok((t, err))
        }
        Command::Entropy { full } => {
            let mut cols = vec!["lambda", "tau", "sigma", "error", "entropy_j_per_k_m2"];
            if *full {
                cols.push("sigma_lif");
            }
            cols.push("status");
            let mut t = ctx.table(&cols);
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into(), tau.into()],
                |&l| {
                    let r = sigma_integral(l, tau, &cfg)?.with_absolute(l, &ctx.material)?;
                    let mut cells = vec![r.sigma.into(), r.error.into(), r.absolute.into()];
                    if *full {
                        cells.push(sigma_lifshitz_low_t(l, tau, &cfg)?.into());
                    }
                    Ok(cells)
                },
            );
            Ok((t, err))
        }
        Command::Lifshitz => {
            let mut t = ctx.table(&["lambda", "tau", "phi_lif", "free_energy_j_per_m2", "status"]);
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into(), tau.into()],
                |&l| {
                    let v = phi_lifshitz(l, tau, &cfg)?;
                    Ok(vec![v.into(), absolute_energy(&ctx, l, v)?.into()])
                },
            );
            Ok((t, err))
        }
        Command::Pressure { model } => {
            let m = ctx.model(*model);
            let mut t = ctx.table(&["lambda", "pressure_scaled", "pressure_pa", "normalized_fig9", "status"]);
            t.meta("model", format!("{m:?}"));
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into()],
                |&l| {
                    let p = pressure(&m, l, &cfg)?.with_absolute(l, &ctx.material)?;
                    Ok(vec![p.scaled.into(), p.absolute.into(), p.normalized_fig9.into()])
                },
            );
            Ok((t, err))
        }
        Command::Inversion { model } => {
            let m = ctx.model(*model);
            let lo = ctx.opts.lambda_min.unwrap_or(0.01);
            let hi = ctx.opts.lambda_max.unwrap_or(100.0);
            let mut t = ctx.table(&["lambda_inv", "distance_m", "status"]);
            t.meta("model", format!("{m:?}"));
            t.meta("search", format!("[{lo}, {hi}]"));
            match inversion_distance(&m, lo, hi, &cfg) {
                Ok(Inversion::At(l)) => {
                    t.push(vec![l.into(), (l * ctx.material.plasma_wavelength).into(), "ok".into()]);
                    Ok((t, None))
                }
                Ok(Inversion::NoInversion) => {
                    t.push(vec![Cell::Missing, Cell::Missing, "no inversion".into()]);
                    Ok((t, None))
                }
                Err(e) => {
                    t.push(vec![Cell::Missing, Cell::Missing, e.to_string().into()]);
                    Ok((t, Some(e)))
                }
            }
        }
        Command::Noneq { scenario } => {
            let s = ctx.scenario(*scenario);
            s.validate()?;
            let m = FreeEnergyModel::Scenario(s);
            let mut t = ctx.table(&[
                "lambda",
                "phi",
                "pressure_scaled",
                "pressure_pa",
                "normalized_fig9",
                "status",
            ]);
            let temps: Vec<String> = s.temperatures().iter().map(|t| t.to_string()).collect();
            t.meta("scenario", format!("{} at tau = {}", s.label(), temps.join(", ")));
            let ls = ctx.lambdas()?;
            let err = fill_rows(
                &mut t,
                &ls,
                |&l| vec![l.into()],
                |&l| {
                    let v = m.phi(l, &cfg)?;
                    let p = pressure(&m, l, &cfg)?.with_absolute(l, &ctx.material)?;
                    Ok(vec![
                        v.into(),
                        p.scaled.into(),
                        p.absolute.into(),
                        p.normalized_fig9.into(),
                    ])
                },
            );
            Ok((t, err))
        }
        Command::Figure { number } => figures::figure(&ctx, *number),
        Command::Selftest => selftest::run(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((table, failure)) => {
            if let Err(e) = emit(&table.render(cli.opts.format), cli.opts.output.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            match failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
