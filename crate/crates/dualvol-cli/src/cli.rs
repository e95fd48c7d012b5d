//! Argument parsing and subcommand dispatch for the `dualvol` binary.
//!
//! Exit codes: 0 on success, 1 when a numerical check fails, 2 on usage
//! errors (bad flags, malformed JSON inputs).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualvol_core::functional::{
    check_poly_orthogonal_additivity, check_symmetry, check_vanishing_on_disjoint,
    recover_measure_from_polynomial, reduce_rotation_invariant,
};
use dualvol_core::{
    dual_mixed_volume, lutwak_check, BodyFunctional, FinitePartition, RadialFunction, Rotation,
    SemivariationMode, SphereGrid,
};

use crate::accept::{parse_suite, run_criteria};
use crate::formats::{
    accept_csv, characterize_csv, grid_csv, AcceptReport, BackingJson, BodyJson,
    CharacterizeReport, CheckJson, ConfigJson, DmvReport, GridJson, LutwakReportJson, MeasureJson,
    PmDecomposeReport, PmDiagonalReport, PmProductReport, PmSemivariationReport,
    PmVariationReport, RecoverReport, ReduceReportJson, TensorJson,
};

#[derive(Parser)]
#[command(
    name = "dualvol",
    version,
    about = "Spherical quadrature, dual mixed volumes, polymeasures, and functional checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SvMode {
    Exact,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    Cyclic,
}

#[derive(Args)]
struct GridArgs {
    /// Ambient dimension (2 or 3)
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Quadrature resolution parameter
    #[arg(long = "grid-res", default_value_t = 64)]
    grid_res: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Build a spherical quadrature grid and emit it as JSON or CSV
    Grid {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Dual mixed volume of n bodies read from a JSON array of body specs
    Dmv {
        /// JSON file holding an array of exactly n body specs
        #[arg(long)]
        bodies: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the volume of a radial combination with its expansion
    Lutwak {
        /// JSON file holding an array of m body specs
        #[arg(long)]
        bodies: PathBuf,
        /// Nonnegative scales, one per body
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
        /// Relative tolerance on |direct - expanded|
        #[arg(long = "tol-rel", default_value_t = 1e-9)]
        tol_rel: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polymeasure operations on a tensor file
    Pm {
        #[command(subcommand)]
        action: PmAction,
    },
    /// Run the characterization checks against a measure- or tensor-backed functional
    Characterize {
        /// Backing file: {"masses": [...]} or {"order", "atoms", "entries"}
        #[arg(long)]
        backing: PathBuf,
        /// Number of body arguments
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Recover the node measure of an orthogonally additive polynomial
    Recover {
        /// Measure file {"masses": [...]} defining P(f) = sum nu_i f_i^degree
        #[arg(long = "poly-from")]
        poly_from: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduce a rotation-invariant diagonal measure to a single constant
    Reduce {
        /// Measure file {"masses": [...]}, one mass per grid node
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, value_enum, default_value_t = GroupKind::Cyclic)]
        group: GroupKind,
        /// Invariance tolerance
        #[arg(long = "tol-rel", default_value_t = 1e-9)]
        tol_rel: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Accept {
        /// "all" or a comma-separated list of criterion ids
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

#[derive(Subcommand)]
enum PmAction {
    /// Sum of absolute entries
    Variation(PmArgs),
    /// Supremum over sign-vertex coefficient blocks
    Semivariation {
        #[command(flatten)]
        pm: PmArgs,
        #[arg(long, value_enum, default_value_t = SvMode::Exact)]
        mode: SvMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Jordan decomposition into positive and negative parts
    Decompose(PmArgs),
    /// Diagonality test, with witness or diagonal measure
    Diagonal {
        #[command(flatten)]
        pm: PmArgs,
        /// Absolute tolerance on off-diagonal entries
        #[arg(long = "tol-rel", default_value_t = 0.0)]
        tol_rel: f64,
    },
    /// Order-1 product measure on the product atoms
    Product(PmArgs),
}

#[derive(Args)]
struct PmArgs {
    /// Tensor file {"order": m, "atoms": k, "entries": [...]}
    #[arg(long)]
    tensor: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors that terminate a subcommand, tagged with the exit code.
enum CliError {
    /// Exit 1: a numerical check failed.
    Check(String),
    /// Exit 2: bad input or bad flags.
    Usage(String),
}

impl From<dualvol_core::Error> for CliError {
    fn from(e: dualvol_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Writes to `out` when given, otherwise prints to stdout.
fn emit(out: &Option<PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sample_bodies(
    path: &Path,
    grid: &SphereGrid,
) -> Result<Vec<RadialFunction>, CliError> {
    let bodies: Vec<BodyJson> = read_json(path)?;
    bodies
        .into_iter()
        .map(|b| {
            let spec = b.into_spec();
            spec.validate(grid.dim())?;
            Ok(spec.sample(grid)?)
        })
        .collect()
}

fn cmd_grid(grid: GridArgs, out: Option<PathBuf>, format: OutputFormat) -> CliResult {
    let g = SphereGrid::make(grid.dim, grid.grid_res)?;
    let json = GridJson::from_grid(&g);
    let text = match format {
        OutputFormat::Json => to_json(&json),
        OutputFormat::Csv => grid_csv(&json),
    };
    emit(&out, &text)
}

fn cmd_dmv(bodies: PathBuf, grid: GridArgs, out: Option<PathBuf>) -> CliResult {
    let g = SphereGrid::make(grid.dim, grid.grid_res)?;
    let sampled = sample_bodies(&bodies, &g)?;
    if sampled.len() != grid.dim {
        return Err(CliError::Usage(format!(
            "dmv takes exactly dim = {} bodies, got {}",
            grid.dim,
            sampled.len()
        )));
    }
    let refs: Vec<&RadialFunction> = sampled.iter().collect();
    let value = dual_mixed_volume(&g, &refs)?;
    println!("{value}");
    if out.is_some() {
        let mut config = ConfigJson::new("dmv");
        config.dim = Some(grid.dim);
        config.grid_res = Some(grid.grid_res);
        emit(&out, &to_json(&DmvReport { config, value }))?;
    }
    Ok(())
}

fn cmd_lutwak(
    bodies: PathBuf,
    lambdas: Vec<f64>,
    grid: GridArgs,
    tol_rel: f64,
    out: Option<PathBuf>,
) -> CliResult {
    let g = SphereGrid::make(grid.dim, grid.grid_res)?;
    let specs: Vec<BodyJson> = read_json(&bodies)?;
    let specs: Vec<_> = specs.into_iter().map(BodyJson::into_spec).collect();
    for s in &specs {
        s.validate(grid.dim)?;
    }
    let rep = lutwak_check(&g, &specs, &lambdas)?;
    let mut config = ConfigJson::new("lutwak");
    config.dim = Some(grid.dim);
    config.grid_res = Some(grid.grid_res);
    config.tol_rel = Some(tol_rel);
    let json = LutwakReportJson {
        config,
        direct: rep.direct,
        expanded: rep.expanded,
        abs_diff: rep.abs_diff,
    };
    let text = to_json(&json);
    emit(&out, &text)?;
    if out.is_some() {
        print!("{text}");
    }
    if rep.abs_diff > tol_rel * rep.direct.abs().max(1.0) {
        return Err(CliError::Check(format!(
            "|direct - expanded| = {} exceeds {tol_rel} * max(1, |direct|)",
            rep.abs_diff
        )));
    }
    Ok(())
}

fn cmd_pm(action: PmAction) -> CliResult {
    match action {
        PmAction::Variation(pm) => {
            let gamma = read_json::<TensorJson>(&pm.tensor)?.into_polymeasure()?;
            let variation = gamma.variation();
            println!("{variation}");
            if pm.out.is_some() {
                let report = PmVariationReport {
                    config: ConfigJson::new("pm variation"),
                    variation,
                };
                emit(&pm.out, &to_json(&report))?;
            }
            Ok(())
        }
        PmAction::Semivariation { pm, mode, seed } => {
            let gamma = read_json::<TensorJson>(&pm.tensor)?.into_polymeasure()?;
            let (core_mode, mode_name) = match mode {
                SvMode::Exact => (SemivariationMode::Exact, "exact"),
                SvMode::Randomized => (SemivariationMode::Randomized { seed }, "randomized"),
            };
            let sv = gamma.semivariation(core_mode)?;
            println!("{}", sv.value);
            if pm.out.is_some() {
                let mut config = ConfigJson::new("pm semivariation");
                config.mode = Some(mode_name.to_string());
                config.seed = Some(seed);
                let report = PmSemivariationReport {
                    config,
                    value: sv.value,
                    exact: sv.exact,
                };
                emit(&pm.out, &to_json(&report))?;
            }
            Ok(())
        }
        PmAction::Decompose(pm) => {
            let gamma = read_json::<TensorJson>(&pm.tensor)?.into_polymeasure()?;
            let (pos, neg) = gamma.jordan_decomposition();
            let report = PmDecomposeReport {
                config: ConfigJson::new("pm decompose"),
                positive: TensorJson::from_polymeasure(&pos),
                negative: TensorJson::from_polymeasure(&neg),
            };
            emit(&pm.out, &to_json(&report))
        }
        PmAction::Diagonal { pm, tol_rel } => {
            let gamma = read_json::<TensorJson>(&pm.tensor)?.into_polymeasure()?;
            let witness = gamma.diagonal_witness(tol_rel);
            let diagonal = witness.is_none();
            let masses = if diagonal {
                Some(gamma.diagonal_measure(tol_rel)?)
            } else {
                None
            };
            let mut config = ConfigJson::new("pm diagonal");
            config.tol_rel = Some(tol_rel);
            let report = PmDiagonalReport {
                config,
                diagonal,
                witness,
                masses,
            };
            emit(&pm.out, &to_json(&report))?;
            if diagonal {
                Ok(())
            } else {
                Err(CliError::Check("tensor is not diagonal".to_string()))
            }
        }
        PmAction::Product(pm) => {
            let gamma = read_json::<TensorJson>(&pm.tensor)?.into_polymeasure()?;
            let report = PmProductReport {
                config: ConfigJson::new("pm product"),
                product: TensorJson::from_polymeasure(&gamma.product_measure()),
            };
            emit(&pm.out, &to_json(&report))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_characterize(
    backing: PathBuf,
    arity: usize,
    grid: GridArgs,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let g = SphereGrid::make(grid.dim, grid.grid_res)?;
    let f = match read_json::<BackingJson>(&backing)? {
        BackingJson::Measure(m) => {
            if m.masses.len() != g.len() {
                return Err(CliError::Usage(format!(
                    "measure has {} masses but the grid has {} nodes",
                    m.masses.len(),
                    g.len()
                )));
            }
            BodyFunctional::from_measure(m.masses, arity)?
        }
        BackingJson::Tensor(t) => {
            let gamma = t.into_polymeasure()?;
            if gamma.order() != arity {
                return Err(CliError::Usage(format!(
                    "tensor order {} does not match --arity {arity}",
                    gamma.order()
                )));
            }
            if gamma.num_atoms() != g.len() {
                return Err(CliError::Usage(format!(
                    "tensor has {} atoms but the grid has {} nodes",
                    gamma.num_atoms(),
                    g.len()
                )));
            }
            BodyFunctional::from_polymeasure(gamma, &FinitePartition::node_level(g.len()))?
        }
    };
    let checks = vec![
        check_vanishing_on_disjoint(&f, &g, trials, seed)?,
        check_symmetry(&f, &g, trials, seed)?,
        check_poly_orthogonal_additivity(&f, &g, trials, seed)?,
    ];
    let pass = checks.iter().all(|c| c.pass);
    let mut config = ConfigJson::new("characterize");
    config.dim = Some(grid.dim);
    config.grid_res = Some(grid.grid_res);
    config.seed = Some(seed);
    config.trials = Some(trials);
    let report = CharacterizeReport {
        config,
        checks: checks.iter().map(CheckJson::from_report).collect(),
        pass,
    };
    let text = match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => characterize_csv(&report),
    };
    emit(&out, &text)?;
    if out.is_some() && format == OutputFormat::Json {
        print!("{text}");
    }
    if pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Check(format!("failed checks: {}", failed.join(", "))))
    }
}

fn cmd_recover(
    poly_from: PathBuf,
    degree: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> CliResult {
    let planted: MeasureJson = read_json(&poly_from)?;
    let nu = planted.masses;
    let num_nodes = nu.len();
    let p = |f: &[f64]| -> f64 {
        nu.iter()
            .zip(f)
            .map(|(n_i, v)| n_i * v.powi(degree as i32))
            .sum()
    };
    let masses = recover_measure_from_polynomial(p, degree, num_nodes, seed)
        .map_err(|e| CliError::Check(e.to_string()))?;
    let mut config = ConfigJson::new("recover");
    config.seed = Some(seed);
    let report = RecoverReport {
        config,
        degree,
        masses,
    };
    emit(&out, &to_json(&report))
}

fn cmd_reduce(
    measure: PathBuf,
    _group: GroupKind,
    tol_rel: f64,
    out: Option<PathBuf>,
) -> CliResult {
    let m: MeasureJson = read_json(&measure)?;
    let res = m.masses.len();
    let g = SphereGrid::make(2, res)?;
    // full cyclic group of the uniform planar grid
    let rotations: Vec<Rotation> = (1..res)
        .map(|j| Rotation::planar(2.0 * std::f64::consts::PI * j as f64 / res as f64))
        .collect();
    let rep = reduce_rotation_invariant(&m.masses, &g, &rotations, tol_rel)
        .map_err(|e| CliError::Check(e.to_string()))?;
    let mut config = ConfigJson::new("reduce");
    config.dim = Some(2);
    config.grid_res = Some(res);
    config.tol_rel = Some(tol_rel);
    let report = ReduceReportJson {
        config,
        c: rep.c,
        residual: rep.residual,
        invariance_residual: rep.invariance_residual,
    };
    emit(&out, &to_json(&report))
}

fn cmd_accept(
    suite: String,
    seed: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> CliResult {
    let ids = parse_suite(&suite).map_err(CliError::Usage)?;
    let criteria = run_criteria(&ids, seed)?;
    let pass = criteria.iter().all(|c| c.pass);
    let mut config = ConfigJson::new("accept");
    config.seed = Some(seed);
    config.suite = Some(suite);
    let report = AcceptReport {
        config,
        criteria,
        pass,
    };
    let text = match format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => accept_csv(&report),
    };
    emit(&out, &text)?;
    if out.is_some() {
        for c in &report.criteria {
            println!(
                "criterion {:>2} {:<28} {}",
                c.id,
                c.name,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
    }
    if pass {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{} ({})", c.id, c.name))
            .collect();
        Err(CliError::Check(format!(
            "failed criteria: {}",
            failed.join(", ")
        )))
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Grid { grid, out, format } => cmd_grid(grid, out, format),
        Command::Dmv { bodies, grid, out } => cmd_dmv(bodies, grid, out),
        Command::Lutwak {
            bodies,
            lambdas,
            grid,
            tol_rel,
            out,
        } => cmd_lutwak(bodies, lambdas, grid, tol_rel, out),
        Command::Pm { action } => cmd_pm(action),
        Command::Characterize {
            backing,
            arity,
            grid,
            trials,
            seed,
            out,
            format,
        } => cmd_characterize(backing, arity, grid, trials, seed, out, format),
        Command::Recover {
            poly_from,
            degree,
            seed,
            out,
        } => cmd_recover(poly_from, degree, seed, out),
        Command::Reduce {
            measure,
            group,
            tol_rel,
            out,
        } => cmd_reduce(measure, group, tol_rel, out),
        Command::Accept {
            suite,
            seed,
            out,
            format,
        } => cmd_accept(suite, seed, out, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
