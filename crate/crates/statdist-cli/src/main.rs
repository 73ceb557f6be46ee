//! Command-line frontend: distances, residuals, minimum-distance fits,
//! contamination sweeps, kernel-smoothed distances, Kolmogorov-Smirnov, and
//! the seeded verification suites.
//!
//! Exit codes: 0 success, 1 suite failure, 2 input/validation failure,
//! 3 numeric failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use statdist::densities::{
    ContinuousDistribution, DiscreteDensity, Distribution, Normal, ParametricFamily, Uniform,
};
use statdist::divergences::{DistanceSpec, ExtendedDistance};
use statdist::estimation::{
    contamination_sweep, min_distance_fit, sweep_csv, FitError, FitOptions,
};
use statdist::io;
use statdist::quadratic::{smoothed_bwhd, smoothed_pearson, KernelShape, SmoothingKernel};
use statdist::residuals::{log_residuals, pearson_residuals, symmetrized_residuals};
use statdist::suites::{run_all, SuiteConfig};
use std::path::{Path, PathBuf};

#[derive(Debug)]
enum CliError {
    /// Bad inputs: unreadable or malformed files, invalid flag combinations.
    Input(String),
    /// Numeric failures: infinite fits, quadrature budget exhaustion.
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "statdist",
    version,
    about = "Statistical distances, residual diagnostics, and robust minimum-distance fitting over density files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Pearson,
    Neyman,
    SymmetricChisq,
    Kl,
    HellingerSquared,
    PowerDivergence,
    BlendedChisq,
    Bwhd,
    GeneralizedChisq,
}

#[derive(Args)]
struct SpecArgs {
    /// Distance family to evaluate.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Exponent for power-divergence.
    #[arg(long)]
    lambda: Option<f64>,
    /// Blend weight for blended-chisq (in `[0,1]`) or bwhd (in `(0,1)`).
    #[arg(long)]
    alpha: Option<f64>,
    /// Density CSV used as the denominator of generalized-chisq.
    #[arg(long)]
    denominator: Option<PathBuf>,
}

impl SpecArgs {
    fn build(&self) -> Result<DistanceSpec, CliError> {
        // Reject stray parameters up front instead of silently ignoring them.
        let uses_lambda = self.family == FamilyArg::PowerDivergence;
        let uses_alpha = matches!(self.family, FamilyArg::BlendedChisq | FamilyArg::Bwhd);
        let uses_denominator = self.family == FamilyArg::GeneralizedChisq;
        if self.lambda.is_some() && !uses_lambda {
            return Err(CliError::Input(
                "--lambda is not a parameter of this family".into(),
            ));
        }
        if self.alpha.is_some() && !uses_alpha {
            return Err(CliError::Input(
                "--alpha is not a parameter of this family".into(),
            ));
        }
        if self.denominator.is_some() && !uses_denominator {
            return Err(CliError::Input(
                "--denominator is not a parameter of this family".into(),
            ));
        }
        let need = |opt: Option<f64>, flag: &str| {
            opt.ok_or_else(|| CliError::Input(format!("--{flag} is required for this family")))
        };
        let spec = match self.family {
            FamilyArg::Pearson => DistanceSpec::PearsonChisq,
            FamilyArg::Neyman => DistanceSpec::NeymanChisq,
            FamilyArg::SymmetricChisq => DistanceSpec::SymmetricChisq,
            FamilyArg::Kl => DistanceSpec::KullbackLeibler,
            FamilyArg::HellingerSquared => DistanceSpec::SquaredHellinger,
            FamilyArg::PowerDivergence => DistanceSpec::PowerDivergence {
                lambda: need(self.lambda, "lambda")?,
            },
            FamilyArg::BlendedChisq => DistanceSpec::BlendedChisq {
                alpha: need(self.alpha, "alpha")?,
            },
            FamilyArg::Bwhd => {
                let alpha = need(self.alpha, "alpha")?;
                if alpha > 0.0 && alpha < 1.0 / 3.0 {
                    eprintln!(
                        "warning: bwhd blend alpha = {alpha} is below 1/3; \
                         the sensitivity/noise trade-off is untested there"
                    );
                }
                DistanceSpec::Bwhd { alpha }
            }
            FamilyArg::GeneralizedChisq => {
                let path = self.denominator.as_ref().ok_or_else(|| {
                    CliError::Input("--denominator is required for generalized-chisq".to_string())
                })?;
                DistanceSpec::GeneralizedChisq {
                    denominator: read_density(path)?,
                }
            }
        };
        spec.validate().map_err(input_err)?;
        Ok(spec)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Re-emit every parsed input density as CSV into this directory.
    #[arg(long)]
    dump_inputs: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct FamilyOfModelsArgs {
    /// Named parametric family to fit.
    #[arg(long, value_enum, default_value = "binomial")]
    family_name: ModelFamily,
    /// Number of trials for the binomial family.
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Lower bound of the parameter box.
    #[arg(long, default_value_t = 0.01)]
    theta_min: f64,
    /// Upper bound of the parameter box.
    #[arg(long, default_value_t = 0.99)]
    theta_max: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelFamily {
    Binomial,
}

impl FamilyOfModelsArgs {
    fn build(&self) -> Result<ParametricFamily, CliError> {
        if self.theta_min.is_nan() || self.theta_max.is_nan() || self.theta_min >= self.theta_max {
            return Err(CliError::Input(format!(
                "--theta-min {} must be below --theta-max {}",
                self.theta_min, self.theta_max
            )));
        }
        match self.family_name {
            ModelFamily::Binomial => Ok(ParametricFamily::binomial(
                self.trials,
                self.theta_min,
                self.theta_max,
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two density files under a chosen family.
    Distance {
        #[command(flatten)]
        spec: SpecArgs,
        /// Data density CSV (the tau side).
        tau: PathBuf,
        /// Model density CSV (the m side).
        model: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residuals of a data density against a model density.
    Residuals {
        /// Residual system to evaluate.
        #[arg(long, value_enum)]
        kind: ResidualKindArg,
        tau: PathBuf,
        model: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Minimum-distance fit of a parametric family to a data density.
    Fit {
        /// Data density CSV.
        data: PathBuf,
        #[command(flatten)]
        family_of_models: FamilyOfModelsArgs,
        #[command(flatten)]
        spec: SpecArgs,
        /// On an all-infinite fit, retry with the blended denominator at
        /// alpha = 0.99 and flag the result.
        #[arg(long)]
        fallback_blend: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Contamination sweep: fit after mixing eps of a point mass into the data.
    Sweep {
        /// Clean data density CSV.
        data: PathBuf,
        #[command(flatten)]
        family_of_models: FamilyOfModelsArgs,
        /// Comma-separated spec names (pearson, neyman, symmetric-chisq, kl,
        /// hellinger-squared).
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "pearson,neyman,symmetric-chisq"
        )]
        specs: Vec<String>,
        /// Support point receiving the contamination.
        #[arg(long)]
        point: f64,
        /// Comma-separated contamination levels in [0, 1).
        #[arg(long, value_delimiter = ',')]
        epsilons: Vec<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kernel-smoothed distance between two density files.
    SmoothDistance {
        /// Smoothed family: pearson or bwhd.
        #[arg(long, value_enum, default_value = "pearson")]
        smoothed_family: SmoothedFamily,
        /// Smoothing kernel shape.
        #[arg(long, value_enum, default_value = "gaussian")]
        kernel: KernelArg,
        /// Kernel bandwidth h > 0.
        #[arg(long)]
        bandwidth: f64,
        /// Blend weight for the bwhd family.
        #[arg(long)]
        alpha: Option<f64>,
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Kolmogorov-Smirnov distance. Inputs are density CSVs or JSON files
    /// describing a continuous distribution.
    Ks {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the seeded verification suites and exit nonzero on any failure.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override every suite tolerance (diagnostic; the defaults are the
        /// contract).
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ResidualKindArg {
    Pearson,
    Symmetrized,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SmoothedFamily {
    Pearson,
    Bwhd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Gaussian,
    Uniform,
}

/// Density inputs come in two shapes: a `t,mass` CSV, or a raw sample file
/// with one value per line (turned into the empirical density over its
/// distinct values). The header decides.
fn read_density(path: &Path) -> Result<DiscreteDensity, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).map(str::trim);
    if first == Some("t,mass") {
        return io::parse_density_csv(std::io::Cursor::new(text))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    let sample =
        io::read_sample(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Some(&bad) = sample.values().iter().find(|v| !v.is_finite()) {
        return Err(CliError::Input(format!(
            "{}: sample value {bad} is not finite",
            path.display()
        )));
    }
    let mut support = sample.values().to_vec();
    support.sort_by(|a, b| a.partial_cmp(b).unwrap());
    support.dedup();
    statdist::densities::empirical_density(&sample, &support)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Continuous-distribution description accepted by `ks`:
/// {"family":"uniform","a":0,"b":1} or {"family":"normal","mean":0,"sd":1}.
#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
enum ContinuousSpec {
    Uniform { a: f64, b: f64 },
    Normal { mean: f64, sd: f64 },
}

enum KsInput {
    Discrete(DiscreteDensity),
    Continuous(Box<dyn ContinuousDistribution>),
}

impl KsInput {
    fn as_distribution(&self) -> Distribution<'_> {
        match self {
            KsInput::Discrete(d) => Distribution::Discrete(d),
            KsInput::Continuous(c) => Distribution::Continuous(c.as_ref()),
        }
    }
}

fn read_ks_input(path: &Path) -> Result<KsInput, CliError> {
    if path.extension().is_some_and(|ext| ext == "json") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let spec: ContinuousSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(KsInput::Continuous(match spec {
            ContinuousSpec::Uniform { a, b } => {
                if a.is_nan() || b.is_nan() || a >= b {
                    return Err(CliError::Input(format!(
                        "{}: uniform requires a < b",
                        path.display()
                    )));
                }
                Box::new(Uniform::new(a, b))
            }
            ContinuousSpec::Normal { mean, sd } => {
                if sd.is_nan() || sd <= 0.0 {
                    return Err(CliError::Input(format!(
                        "{}: normal requires sd > 0",
                        path.display()
                    )));
                }
                Box::new(Normal::new(mean, sd))
            }
        }))
    } else {
        Ok(KsInput::Discrete(read_density(path)?))
    }
}

fn dump_inputs(dir: &Option<PathBuf>, densities: &[&DiscreteDensity]) -> Result<(), CliError> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir).map_err(input_err)?;
    for (i, density) in densities.iter().enumerate() {
        let path = dir.join(format!("input{i}.csv"));
        io::write_density_csv_path(density, &path).map_err(input_err)?;
    }
    Ok(())
}

fn extended_value(d: ExtendedDistance) -> Value {
    if d.is_finite() {
        json!(d.value())
    } else {
        json!("inf")
    }
}

fn float_value(v: f64) -> Value {
    if v.is_nan() {
        json!("nan")
    } else if v == f64::INFINITY {
        json!("inf")
    } else if v == f64::NEG_INFINITY {
        json!("-inf")
    } else {
        json!(v)
    }
}

fn spec_params(spec: &DistanceSpec) -> Value {
    let mut params = Map::new();
    match spec {
        DistanceSpec::PowerDivergence { lambda } => {
            params.insert("lambda".into(), json!(lambda));
        }
        DistanceSpec::BlendedChisq { alpha } | DistanceSpec::Bwhd { alpha } => {
            params.insert("alpha".into(), json!(alpha));
        }
        _ => {}
    }
    Value::Object(params)
}

fn emit(out: &OutputArgs, report: String) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, report).map_err(input_err),
        None => {
            println!("{}", report.trim_end_matches('\n'));
            Ok(())
        }
    }
}

fn json_report(out: &OutputArgs, value: &Value) -> Result<(), CliError> {
    emit(out, format!("{value}\n"))
}

fn family_name(spec: &DistanceSpec) -> &'static str {
    match spec {
        DistanceSpec::PowerDivergence { .. } => "power-divergence",
        DistanceSpec::GeneralizedChisq { .. } => "generalized-chisq",
        DistanceSpec::BlendedChisq { .. } => "blended-chisq",
        DistanceSpec::SymmetricChisq => "symmetric-chisq",
        DistanceSpec::PearsonChisq => "pearson",
        DistanceSpec::NeymanChisq => "neyman",
        DistanceSpec::KullbackLeibler => "kl",
        DistanceSpec::SquaredHellinger => "hellinger-squared",
        DistanceSpec::Bwhd { .. } => "bwhd",
    }
}

fn spec_by_name(name: &str) -> Result<DistanceSpec, CliError> {
    match name {
        "pearson" => Ok(DistanceSpec::PearsonChisq),
        "neyman" => Ok(DistanceSpec::NeymanChisq),
        "symmetric-chisq" => Ok(DistanceSpec::SymmetricChisq),
        "kl" => Ok(DistanceSpec::KullbackLeibler),
        "hellinger-squared" => Ok(DistanceSpec::SquaredHellinger),
        other => Err(CliError::Input(format!(
            "unknown spec {other:?}; expected one of pearson, neyman, symmetric-chisq, kl, hellinger-squared"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Distance {
            spec,
            tau,
            model,
            out,
        } => {
            let spec = spec.build()?;
            let tau = read_density(&tau)?;
            let model = read_density(&model)?;
            dump_inputs(&out.dump_inputs, &[&tau, &model])?;
            let value = statdist::divergences::distance(&tau, &model, &spec).map_err(input_err)?;
            let report = json!({
                "family": family_name(&spec),
                "params": spec_params(&spec),
                "value": extended_value(value),
                "finite": value.is_finite(),
            });
            json_report(&out, &report)
        }
        Command::Residuals {
            kind,
            tau,
            model,
            out,
        } => {
            let tau = read_density(&tau)?;
            let model = read_density(&model)?;
            dump_inputs(&out.dump_inputs, &[&tau, &model])?;
            let (label, residuals) = match kind {
                ResidualKindArg::Pearson => ("pearson", pearson_residuals(&tau, &model)),
                ResidualKindArg::Symmetrized => {
                    ("symmetrized", symmetrized_residuals(&tau, &model))
                }
                ResidualKindArg::Log => ("log", log_residuals(&tau, &model)),
            };
            match out.format {
                Format::Json => {
                    let report = json!({
                        "kind": label,
                        "support": residuals.support(),
                        "values": residuals.values().iter().map(|&v| float_value(v)).collect::<Vec<_>>(),
                    });
                    json_report(&out, &report)
                }
                Format::Csv => {
                    let mut csv = String::from("t,residual\n");
                    for (t, v) in residuals.support().iter().zip(residuals.values()) {
                        csv.push_str(&format!("{t},{v}\n"));
                    }
                    emit(&out, csv)
                }
            }
        }
        Command::Fit {
            data,
            family_of_models,
            spec,
            fallback_blend,
            out,
        } => {
            let spec = spec.build()?;
            let data = read_density(&data)?;
            dump_inputs(&out.dump_inputs, &[&data])?;
            let family = family_of_models.build()?;
            let options = FitOptions {
                fallback_blend,
                ..FitOptions::default()
            };
            let fit = min_distance_fit(&data, &family, &spec, &options).map_err(|e| match e {
                FitError::AllDistancesInfinite => CliError::Numeric(format!(
                    "{e}; empty data cells make every Neyman-style candidate infinite — \
                     rerun with --fallback-blend to fit the blended denominator at alpha = 0.99"
                )),
                FitError::Spec(inner) => input_err(inner),
                other => CliError::Numeric(other.to_string()),
            })?;
            let report = json!({
                "family": family_name(&spec),
                "params": spec_params(&spec),
                "theta_hat": fit.theta_hat,
                "distance": extended_value(fit.distance_at_min),
                "evaluations": fit.evaluations,
                "converged": fit.converged,
                "at_boundary": fit.at_boundary,
                "used_fallback": fit.used_fallback,
            });
            json_report(&out, &report)
        }
        Command::Sweep {
            data,
            family_of_models,
            specs,
            point,
            epsilons,
            out,
        } => {
            if epsilons.is_empty() {
                return Err(CliError::Input(
                    "--epsilons must list at least one level".into(),
                ));
            }
            if let Some(&bad) = epsilons.iter().find(|&&e| !(0.0..1.0).contains(&e)) {
                return Err(CliError::Input(format!("epsilon {bad} outside [0, 1)")));
            }
            let data = read_density(&data)?;
            dump_inputs(&out.dump_inputs, &[&data])?;
            let family = family_of_models.build()?;
            let specs = specs
                .iter()
                .map(|s| spec_by_name(s))
                .collect::<Result<Vec<_>, _>>()?;
            let rows = contamination_sweep(
                &data,
                &family,
                &specs,
                point,
                &epsilons,
                &FitOptions::default(),
            )
            .map_err(input_err)?;
            match out.format {
                Format::Csv => emit(&out, sweep_csv(&rows)),
                Format::Json => {
                    let report: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "spec": r.spec_label,
                                "epsilon": r.epsilon,
                                "theta_hat": r.theta_hat,
                                "shift": r.shift,
                                "converged": r.converged,
                                "error": r.error,
                            })
                        })
                        .collect();
                    json_report(&out, &json!(report))
                }
            }
        }
        Command::SmoothDistance {
            smoothed_family,
            kernel,
            bandwidth,
            alpha,
            f,
            g,
            out,
        } => {
            let f = read_density(&f)?;
            let g = read_density(&g)?;
            dump_inputs(&out.dump_inputs, &[&f, &g])?;
            let shape = match kernel {
                KernelArg::Gaussian => KernelShape::Gaussian,
                KernelArg::Uniform => KernelShape::Uniform,
            };
            let kernel = SmoothingKernel::new(shape, bandwidth).map_err(input_err)?;
            let (label, value) = match smoothed_family {
                SmoothedFamily::Pearson => (
                    "smoothed-pearson",
                    smoothed_pearson(&f, &g, &kernel)
                        .map_err(|e| CliError::Numeric(e.to_string()))?,
                ),
                SmoothedFamily::Bwhd => {
                    let alpha = alpha.ok_or_else(|| {
                        CliError::Input("--alpha is required for the bwhd family".into())
                    })?;
                    if alpha > 0.0 && alpha < 1.0 / 3.0 {
                        eprintln!(
                            "warning: bwhd blend alpha = {alpha} is below 1/3; \
                             the sensitivity/noise trade-off is untested there"
                        );
                    }
                    (
                        "smoothed-bwhd",
                        smoothed_bwhd(&f, &g, &kernel, alpha)
                            .map_err(|e| CliError::Numeric(e.to_string()))?,
                    )
                }
            };
            let report = json!({
                "family": label,
                "bandwidth": bandwidth,
                "value": float_value(value),
                "finite": value.is_finite(),
            });
            json_report(&out, &report)
        }
        Command::Ks { f, g, out } => {
            let f = read_ks_input(&f)?;
            let g = read_ks_input(&g)?;
            let mut discrete: Vec<&DiscreteDensity> = Vec::new();
            for input in [&f, &g] {
                if let KsInput::Discrete(d) = input {
                    discrete.push(d);
                }
            }
            dump_inputs(&out.dump_inputs, &discrete)?;
            let value =
                statdist::cdf_distances::ks_distance(&f.as_distribution(), &g.as_distribution());
            let report = json!({
                "family": "ks",
                "value": value,
                "finite": true,
            });
            json_report(&out, &report)
        }
        Command::Selftest { seed, tol } => {
            let config = SuiteConfig {
                seed,
                tol_override: tol,
            };
            let reports = run_all(&config);
            println!("{:<34} {:>8} {:>8}", "suite", "checks", "result");
            let mut all_passed = true;
            for report in &reports {
                println!(
                    "{:<34} {:>8} {:>8}",
                    report.name,
                    report.checks,
                    if report.passed { "PASS" } else { "FAIL" }
                );
                for warning in &report.warnings {
                    eprintln!("  warning [{}]: {warning}", report.name);
                }
                if !report.passed {
                    all_passed = false;
                    for failure in report.failures.iter().take(4) {
                        eprintln!("  failure [{}]: {failure}", report.name);
                    }
                }
            }
            if all_passed {
                Ok(())
            } else {
                // Distinct from input (2) and numeric (3) failures.
                std::process::exit(1);
            }
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
