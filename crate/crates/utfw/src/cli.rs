//! Argument definitions and command dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use utfw_core::certificate::{certify, CertificateReport, Verdict};
use utfw_core::critical_charge::{atomic_bounds, molecular_x_root, quoted_for, AtomicBounds, MolecularBound, QUOTED};
use utfw_core::instability_search::{search_negative, SearchOptions, DEFAULT_BUDGET};
use utfw_core::quadrature::{energy_terms, GridKind, GridSpec};
use utfw_core::suites::{run_all, SuiteSizes};
use utfw_core::{ModelParams, ALPHA_PHYSICAL};

use crate::error::{exit, CliError};
use crate::io::{parse_positive, read_density, read_molecule};
use crate::report::{Provenance, RunReport};
use crate::table::{num, Table};

/// λ used by `verify` when none is given.
pub const VERIFY_LAMBDA: f64 = 0.2;

/// Quoted and computed thresholds further apart than this are flagged.
pub const DISCREPANCY_FLAG: f64 = 1.0;

#[derive(Debug, Parser)]
#[command(name = "utfw", version, about = "Stability bounds for the ultrarelativistic Thomas–Fermi–Weizsäcker model")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Weizsäcker coefficient λ; fractions such as 1/9 are accepted.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub lambda: Option<f64>,
    /// Fine structure constant.
    #[arg(long, global = true, value_parser = parse_positive)]
    pub alpha: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write a plot-ready table as CSV.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Radial grid nodes.
    #[arg(long, global = true, default_value_t = 2000)]
    pub grid_points: usize,
    /// Radial grid cutoff.
    #[arg(long, global = true, default_value_t = 50.0, value_parser = parse_positive)]
    pub rmax: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Atomic stability window `[4ab/3α, 4ab/3α + 7πa³/6b³]`.
    Bounds {
        /// Add rows for λ = 1/9, 1/5 and 0.185.
        #[arg(long)]
        table: bool,
    },
    /// Per-nucleus molecular bound, next to the quoted literature values.
    MolecularBound,
    /// Run the molecular stability certificate on a molecule document.
    Certify { config: PathBuf },
    /// Search trial densities for negative atomic energy.
    Search {
        #[arg(long, value_parser = parse_nonnegative)]
        z: f64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Run every property suite.
    Verify {
        /// Random probes per ball radius.
        #[arg(long, default_value_t = 100)]
        probes: usize,
    },
    /// Atomic energy of a tabulated density.
    Energy {
        density: PathBuf,
        #[arg(long, value_parser = parse_nonnegative)]
        z: f64,
    },
}

fn parse_nonnegative(text: &str) -> Result<f64, String> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        _ => Err(format!("{text:?} is not a nonnegative finite number")),
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: RunReport,
    pub table: Table,
    pub exit_code: i32,
}

impl GlobalArgs {
    fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(ALPHA_PHYSICAL)
    }

    fn grid(&self) -> GridSpec {
        GridSpec {
            kind: GridKind::LogSpaced,
            points: self.grid_points,
            r_max: self.rmax,
            ..GridSpec::default()
        }
    }

    fn params(&self) -> Result<ModelParams, CliError> {
        let lambda = self
            .lambda
            .ok_or_else(|| CliError::Usage("--lambda is required for this command".to_string()))?;
        ModelParams::from_lambda(lambda, self.alpha()).map_err(CliError::compute("params"))
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
struct BoundsRow {
    lambda: f64,
    lower: f64,
    gap: f64,
    upper: f64,
    quoted_atomic: Option<f64>,
}

fn bounds_row(lambda: f64, alpha: f64) -> Result<BoundsRow, CliError> {
    let b = atomic_bounds(&ModelParams::from_lambda(lambda, alpha).map_err(CliError::compute("params"))?);
    Ok(BoundsRow {
        lambda,
        lower: b.lower,
        gap: b.gap,
        upper: b.upper,
        quoted_atomic: quoted_for(lambda).map(|q| q.atomic),
    })
}

#[derive(Serialize)]
struct BoundsOutput {
    params: ModelParams,
    bounds: AtomicBounds,
    /// `√(3λ/2)/α`.
    closed_form_lower: f64,
    quoted_atomic: Option<f64>,
    table: Option<Vec<BoundsRow>>,
}

#[derive(Serialize)]
struct ComparisonRow {
    lambda: f64,
    z_max: f64,
    quoted_molecular: f64,
    difference: f64,
    flagged: bool,
}

#[derive(Serialize)]
struct MolecularOutput {
    params: ModelParams,
    bound: MolecularBound,
    /// `|(1−x)/x³ − rhs| / rhs` at the root.
    root_residual: f64,
    atomic_lower: f64,
    comparison: Vec<ComparisonRow>,
}

#[derive(Serialize)]
struct EnergyOutput {
    total_charge: f64,
    weizsacker: f64,
    thomas_fermi: f64,
    attraction: f64,
    hartree: f64,
    total: f64,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Bounds { table: with_table } => {
            let params = g.params()?;
            let bounds = atomic_bounds(&params);
            let rows = if *with_table {
                Some(
                    QUOTED
                        .iter()
                        .map(|q| bounds_row(q.lambda, params.alpha))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            } else {
                None
            };
            let mut table = Table::new(&["lambda", "lower", "gap", "upper", "quoted_atomic"]);
            let own = bounds_row(params.lambda, params.alpha)?;
            for row in std::iter::once(&own).chain(rows.iter().flatten()) {
                table.push(vec![num(row.lambda), num(row.lower), num(row.gap), num(row.upper), num(row.quoted_atomic)]);
            }
            let output = BoundsOutput {
                params,
                bounds,
                closed_form_lower: (1.5 * params.lambda).sqrt() / params.alpha,
                quoted_atomic: quoted_for(params.lambda).map(|q| q.atomic),
                table: rows,
            };
            let report = RunReport::new(
                "bounds",
                &json!({"lambda": params.lambda, "alpha": params.alpha, "table": with_table}),
                &output,
                Provenance::new(None, None),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code: exit::SUCCESS,
            })
        }
        Command::MolecularBound => {
            let params = g.params()?;
            let bound = molecular_x_root(&params);
            let x = bound.x_root;
            let mut table = Table::new(&["lambda", "x_root", "z_max", "quoted_molecular", "difference", "flagged"]);
            let mut comparison = Vec::new();
            for q in QUOTED {
                let p = ModelParams::from_lambda(q.lambda, params.alpha).map_err(CliError::compute("params"))?;
                let z_max = molecular_x_root(&p).z_max;
                let difference = z_max - q.molecular;
                let row = ComparisonRow {
                    lambda: q.lambda,
                    z_max,
                    quoted_molecular: q.molecular,
                    difference,
                    flagged: difference.abs() > DISCREPANCY_FLAG,
                };
                table.push(vec![
                    num(q.lambda),
                    num(molecular_x_root(&p).x_root),
                    num(z_max),
                    num(q.molecular),
                    num(difference),
                    row.flagged.to_string(),
                ]);
                comparison.push(row);
            }
            if quoted_for(params.lambda).is_none() {
                table.push(vec![num(params.lambda), num(x), num(bound.z_max), String::new(), String::new(), String::new()]);
            }
            let output = MolecularOutput {
                params,
                bound,
                root_residual: ((1.0 - x) / (x * x * x) - bound.rhs).abs() / bound.rhs,
                atomic_lower: atomic_bounds(&params).lower,
                comparison,
            };
            let report = RunReport::new(
                "molecular-bound",
                &json!({"lambda": params.lambda, "alpha": params.alpha}),
                &output,
                Provenance::new(None, None),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code: exit::SUCCESS,
            })
        }
        Command::Certify { config } => {
            let file = read_molecule(config)?;
            let lambda = g.lambda.or(file.lambda).ok_or_else(|| {
                CliError::Usage("λ must be given by --lambda or in the molecule document".to_string())
            })?;
            let alpha = g.alpha.unwrap_or(file.alpha);
            let params = ModelParams::from_lambda(lambda, alpha).map_err(CliError::compute("params"))?;
            let cert: CertificateReport = certify(&file.config, &params);
            let mut table = Table::new(&["nucleus", "z", "half_distance", "ball_integral", "exterior_bound"]);
            for (j, n) in file.config.nuclei().iter().enumerate() {
                table.push(vec![
                    j.to_string(),
                    num(n.z),
                    num(cert.half_distances.get(j).copied()),
                    num(cert.per_cell_ball.get(j).copied()),
                    num(cert.per_cell_exterior.get(j).copied()),
                ]);
            }
            let exit_code = match cert.verdict {
                Verdict::Stable => exit::SUCCESS,
                Verdict::NotCertified => exit::NOT_CERTIFIED,
                Verdict::ChargeExceedsModelRange => exit::CHARGE_EXCEEDS_RANGE,
            };
            let report = RunReport::new(
                "certify",
                &json!({
                    "config": config.display().to_string(),
                    "lambda": lambda,
                    "alpha": alpha,
                    "nuclei": file.config,
                }),
                &cert,
                Provenance::new(None, None),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code,
            })
        }
        Command::Search { z, budget } => {
            let params = g.params()?;
            let spec = g.grid();
            let grid = spec.build().map_err(CliError::compute("quadrature"))?;
            let result = search_negative(*z, &params, &SearchOptions::new(*budget, g.seed, grid))
                .map_err(CliError::compute("instability_search"))?;
            let mut table = Table::new(&["z", "verdict", "best_energy", "confirm_energy", "shape", "amplitude", "scale", "p"]);
            let (shape, p) = match result.best_params.shape {
                utfw_core::instability_search::Shape::Exponential => ("exponential", None),
                utfw_core::instability_search::Shape::Power { p } => ("power", Some(p)),
            };
            table.push(vec![
                num(*z),
                serde_json::to_value(result.verdict)?.as_str().unwrap_or_default().to_string(),
                num(result.best_energy),
                num(result.confirm_energy),
                shape.to_string(),
                num(result.best_params.amplitude),
                num(result.best_params.scale),
                num(p),
            ]);
            let report = RunReport::new(
                "search",
                &json!({"z": z, "budget": budget, "lambda": params.lambda, "alpha": params.alpha}),
                &result,
                Provenance::new(Some(g.seed), Some(spec)),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code: exit::SUCCESS,
            })
        }
        Command::Verify { probes } => {
            let lambda = g.lambda.unwrap_or(VERIFY_LAMBDA);
            let params = ModelParams::from_lambda(lambda, g.alpha()).map_err(CliError::compute("params"))?;
            let spec = g.grid();
            let sizes = SuiteSizes {
                probes: *probes,
                ..SuiteSizes::default()
            };
            let suites = run_all(g.seed, &params, &spec, sizes).map_err(CliError::compute("suites"))?;
            let all_passed = suites.iter().all(|s| s.passed);
            let mut table = Table::new(&["suite", "cases", "passed", "worst_margin"]);
            for s in &suites {
                table.push(vec![s.name.clone(), s.cases.to_string(), s.passed.to_string(), num(s.worst_margin)]);
            }
            let report = RunReport::new(
                "verify",
                &json!({"lambda": lambda, "alpha": params.alpha, "probes": probes}),
                &json!({"suites": suites, "all_passed": all_passed}),
                Provenance::new(Some(g.seed), Some(spec)),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code: if all_passed { exit::SUCCESS } else { exit::NOT_CERTIFIED },
            })
        }
        Command::Energy { density, z } => {
            let params = g.params()?;
            let rho = read_density(density)?;
            let terms = energy_terms(&rho, *z, &params).map_err(CliError::compute("quadrature"))?;
            let output = EnergyOutput {
                total_charge: rho.total_charge(),
                weizsacker: terms.weizsacker,
                thomas_fermi: terms.thomas_fermi,
                attraction: terms.attraction,
                hartree: terms.hartree,
                total: terms.total(),
            };
            let mut table = Table::new(&["weizsacker", "thomas_fermi", "attraction", "hartree", "total"]);
            table.push(vec![
                num(output.weizsacker),
                num(output.thomas_fermi),
                num(output.attraction),
                num(output.hartree),
                num(output.total),
            ]);
            let report = RunReport::new(
                "energy",
                &json!({
                    "density": density.display().to_string(),
                    "z": z,
                    "lambda": params.lambda,
                    "alpha": params.alpha,
                    "nodes": rho.grid().len(),
                }),
                &output,
                Provenance::new(None, Some(rho.grid().spec())),
            )?;
            Ok(Outcome {
                report,
                table,
                exit_code: exit::SUCCESS,
            })
        }
    }
}
